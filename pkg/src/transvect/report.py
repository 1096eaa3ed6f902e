"""Markdown dimension tables recomputed live and compared with the stored golden values."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .catalog import theorem_representatives
from .conformal import solve_b2k
from .invariance import classify, match_catalog, rank18_check
from .scalars import parse_scalar


def load_golden() -> dict:
    return json.loads(resources.files("transvect").joinpath("data/golden.json").read_text())


@dataclass
class Report:
    markdown: str
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _w(ws) -> str:
    return "(" + ", ".join(ws) + ")"


def report_tables(golden: dict | None = None) -> Report:
    golden = load_golden() if golden is None else golden
    lines = ["# Kernel dimensions", ""]
    bad: list[str] = []

    by_order: dict[int, list[dict]] = {}
    for row in golden["dimensions"]:
        by_order.setdefault(row["order"], []).append(row)
    for k in sorted(by_order):
        lines += [f"## Order {k}", "", "| weights | case | expected | computed | r in {2,3} agrees | listed operators span | status |",
                  "|---|---|---|---|---|---|---|"]
        for row in by_order[k]:
            w = tuple(parse_scalar(x) for x in row["weights"])
            K = classify(k, w)
            reps = theorem_representatives(k, w) if 1 <= k <= 6 else []
            spans = match_catalog(K, reps).spans if reps or K.dimension == 0 else False
            ok = K.dimension == row["dimension"] and K.generator_check and spans
            if not ok:
                bad.append(f"order {k} at {_w(row['weights'])}: expected {row['dimension']}, got {K.dimension}")
            lines.append(f"| {_w(row['weights'])} | {row['case']} | {row['dimension']} | {K.dimension} | "
                         f"{K.generator_check} | {spans} | {'pass' if ok else 'FAIL'} |")
        lines.append("")

    lines += ["## Boundary rank for k > 7", "", "| order | weights | rows x cols | expected rank | rank | status |",
              "|---|---|---|---|---|---|"]
    for row in golden.get("rank18", []):
        w = tuple(parse_scalar(x) for x in row["weights"])
        nr, nc, rk = rank18_check(w, row["order"])
        ok = rk == row["rank"]
        if not ok:
            bad.append(f"rank at order {row['order']}, {_w(row['weights'])}: expected {row['rank']}, got {rk}")
        lines.append(f"| {row['order']} | {_w(row['weights'])} | {nr} x {nc} | {row['rank']} | {rk} | {'pass' if ok else 'FAIL'} |")
    lines.append("")

    lines += ["## Conformal symbols", "", "| k | n | weights | case | expected | computed | status |", "|---|---|---|---|---|---|---|"]
    for row in golden.get("conformal", []):
        w = tuple(parse_scalar(x) for x in row["weights"])
        dim = solve_b2k(row["k"], row["n"], w).dimension
        ok = dim == row["dimension"]
        if not ok:
            bad.append(f"conformal k={row['k']} n={row['n']} at {_w(row['weights'])}: expected {row['dimension']}, got {dim}")
        lines.append(f"| {row['k']} | {row['n']} | {_w(row['weights'])} | {row['case']} | {row['dimension']} | {dim} | "
                     f"{'pass' if ok else 'FAIL'} |")
    lines += ["", f"**{'all rows pass' if not bad else f'{len(bad)} mismatches'}**", ""]
    if bad:
        lines += ["Mismatches:", ""] + [f"- {b}" for b in bad] + [""]
    return Report("\n".join(lines), bad)

