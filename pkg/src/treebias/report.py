"""Markdown and CSV renderers laid out like the published tables."""
from __future__ import annotations

import csv
import io
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .enumeration import EnumerationResult
from .simulation import TYPE_LABELS, AppendixRow, ExperimentReport


def fmt(x, precision: int = 3) -> str:
    """Round half up, so 1.0625 prints as 1.063."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    q = Decimal(1).scaleb(-precision)
    return str(Decimal(str(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def markdown_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def csv_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def single_positive_csv(report: ExperimentReport, precision: int = 3) -> str:
    rows = []
    for r in report.rows:
        for label in TYPE_LABELS:
            s = r.types[label]
            rows.append([r.n, label, s.count, fmt(s.proportion, precision),
                         fmt(s.ratio_to_true, precision)])
        rows.append([r.n, "OVERALL", "", "1.0", fmt(r.overall_ratio, precision)])
    return csv_table(["n", "type", "count", "proportion", "ratio"], rows)


def single_positive_markdown(report: ExperimentReport, precision: int = 3) -> str:
    labels = [lb for lb in TYPE_LABELS
              if lb != "Other" or any(r.types["Other"].count for r in report.rows)]
    rows = []
    for r in report.rows:
        cells = [str(r.n)]
        for lb in labels:
            s = r.types[lb]
            cells.append("NA" if s.count == 0 else
                         f"{fmt(s.ratio_to_true, precision)} ({fmt(s.proportion, precision)})")
        cells.append(fmt(r.overall_ratio, precision))
        rows.append(cells)
    return markdown_table(["n", *labels, "Overall"], rows)


def table1_markdown(rows: list[dict], precision: int = 3) -> str:
    return markdown_table(
        ["n", "Type 1", "Type 2", "Overall"],
        [[str(r["n"]),
          f"{fmt(r['type1_ratio'], precision)} ({fmt(r['type1_proportion'], precision)})",
          fmt(r["type2_ratio"], precision), fmt(r["overall"], precision)] for r in rows])


def table1_csv(rows: list[dict], precision: int = 3) -> str:
    keys = ["n", "type1_ratio", "type1_proportion", "type2_ratio", "overall"]
    return csv_table(keys, [[r["n"]] + [fmt(r[k], precision) for k in keys[1:]] for r in rows])


APPENDIX_HEADER = ["dgp", "b", "prevalence", "ratio_mean", "ratio_sd"]


def appendix_csv(rows: Sequence[AppendixRow], precision: int = 3) -> str:
    return csv_table(APPENDIX_HEADER, [
        [r.dgp, repr(r.b), fmt(r.prevalence, precision), fmt(r.ratio_mean, precision),
         fmt(r.ratio_sd, precision)] for r in rows])


def appendix_markdown(rows: Sequence[AppendixRow], precision: int = 3) -> str:
    return markdown_table(["DGP", "b", "Prevalence", "Ratio (SD)"], [
        [r.dgp, f"{r.b:g}", fmt(r.prevalence, precision),
         f"{fmt(r.ratio_mean, precision)} ({fmt(r.ratio_sd, precision)})"] for r in rows])


ENUM_HEADER = ["n", "m", "n_orderings", "mean_expected_prevalence", "ratio"]


def enumeration_csv(results: Sequence[EnumerationResult], precision: int = 3) -> str:
    return csv_table(ENUM_HEADER, [
        [r.n, r.m, r.n_orderings, fmt(r.mean_expected_prevalence, precision),
         fmt(r.ratio_to_true, precision)] for r in results])


def enumeration_markdown(results: Sequence[EnumerationResult], precision: int = 3) -> str:
    rows, last_n = [], None
    for r in results:
        rows.append(["" if r.n == last_n else str(r.n), str(r.m), str(r.n_orderings),
                     fmt(r.mean_expected_prevalence, precision), fmt(r.ratio_to_true, precision)])
        last_n = r.n
    return markdown_table(["Size of dataset", "Positive cases", "Orderings",
                           "Mean expected prevalence", "Ratio to true prevalence"], rows)
