"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import conformal
from .catalog import CATALOG, DomainError, theorem_representatives
from .densities import oracle_invariant
from .invariance import DEFAULT_GRID_VALUES, classify, in_kernel, match_catalog, sweep, weight_grid
from .report import report_tables
from .scalars import format_scalar, parse_scalar

COMMANDS = ("classify", "sweep", "verify", "catalog", "conformal", "obstruction", "report")
CSV_COLUMNS = ("order", "lambda", "gamma", "tau", "dimension", "matched_catalog_names")
_VALUE_FLAGS = ("--weights", "--extra", "--params", "--grid")


@dataclass
class RunConfig:
    command: str
    order: int | None = None
    weights: tuple | None = None
    grid: list[Fraction] | None = None
    n: int | None = None
    output: str = "text"
    out_path: str | None = None
    seed: int = 0
    entry: str | None = None
    params: dict = field(default_factory=dict)
    random_samples: int = 0
    verify_all: bool = False
    oracle: bool = False
    symbol_path: str | None = None


class UsageError(ValueError):
    pass


def _scalar_list(text: str) -> tuple:
    try:
        return tuple(parse_scalar(t.strip()) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"{text!r}: {e}") from None


def _params(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"parameter {part!r} is not of the form name=value")
        try:
            out[key.strip()] = parse_scalar(val.strip())
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None
    return out


def _grid(text: str) -> list[Fraction]:
    if text == "default":
        return list(DEFAULT_GRID_VALUES)
    return list(_scalar_list(text))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transvect", description="Invariant ternary operators on weighted densities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights=True):
        sp.add_argument("--output", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--out", dest="out_path", help="write the report here instead of stdout")
        if weights:
            sp.add_argument("--weights", type=_scalar_list, help="comma separated exact rationals, e.g. -2/3,-2/3,-2/3")

    sp = sub.add_parser("classify", help="kernel of the invariance system at fixed weights")
    sp.add_argument("--order", type=int, required=True)
    common(sp)

    sp = sub.add_parser("sweep", help="kernel dimension over a weight grid")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--grid", type=_grid, default=list(DEFAULT_GRID_VALUES),
                    help="'default' or comma separated values; the grid is all triples")
    sp.add_argument("--extra", type=_scalar_list, default=(), help="values added to the grid")
    common(sp, weights=False)

    sp = sub.add_parser("verify", help="check catalog operators for invariance")
    sp.add_argument("--entry", choices=sorted(CATALOG))
    sp.add_argument("--params", type=_params, default={})
    sp.add_argument("--all", dest="verify_all", action="store_true", help="every entry at its example weights")
    sp.add_argument("--random", dest="random_samples", type=int, default=0,
                    help="also check this many seeded random weights (entries with free weights)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle", action="store_true", help="also run the brute-force defect check")
    common(sp)

    sp = sub.add_parser("catalog", help="list catalog entries")
    common(sp, weights=False)

    for name, helptext in (("conformal", "solve for invariant conformal symbols"),
                           ("obstruction", "divergence obstruction for a conformal symbol")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--k", dest="order", type=int, default=1)
        sp.add_argument("--n", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--params", type=_params, default={}, help="s=..,t=..,u=.. for the degree-1 closed form")
        if name == "obstruction":
            sp.add_argument("--symbol", dest="symbol_path", help="JSON symbol file")
        common(sp)

    sp = sub.add_parser("report", help="dimension tables against the stored expectations")
    common(sp, weights=False)
    return p


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Join value flags with their argument so values like -2/3,... are not read as options."""
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def parse_config(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(_glue_values(argv))
    cfg = RunConfig(command=ns.command, output=ns.output, out_path=ns.out_path)
    for name in ("order", "weights", "seed", "entry", "params", "random_samples", "verify_all", "oracle",
                 "symbol_path"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.command == "sweep":
        cfg.grid = sorted(set(ns.grid) | set(ns.extra))
    if ns.command in ("conformal", "obstruction"):
        n = ns.n
        if ns.p is not None or ns.q is not None:
            if ns.p is None or ns.q is None:
                parser.error("--p and --q must be given together")
            try:
                pq = conformal.signature_dimension(ns.p, ns.q)
            except ValueError as e:
                parser.error(str(e))
            if n is not None and n != pq:
                parser.error(f"--n {n} does not equal p + q = {pq}")
            n = pq
        cfg.n = n
    _validate(parser, cfg)
    return cfg


def _validate(parser: argparse.ArgumentParser, cfg: RunConfig) -> None:
    if cfg.command == "classify":
        if cfg.weights is None or len(cfg.weights) != 3:
            parser.error("classify needs --weights with three values")
        if cfg.order < 0:
            parser.error("--order must be non-negative")
    if cfg.command == "sweep" and cfg.order < 0:
        parser.error("--order must be non-negative")
    if cfg.command == "verify" and not cfg.verify_all and cfg.entry is None:
        parser.error("verify needs --entry or --all")
    if cfg.command == "conformal" or (cfg.command == "obstruction" and cfg.symbol_path is None):
        if cfg.n is None or cfg.n < 1:
            parser.error("give a positive --n or a signature --p/--q")
        if cfg.weights is None or len(cfg.weights) != 3:
            parser.error("needs --weights with three values")
        if any(not isinstance(w, Fraction) for w in cfg.weights):
            parser.error("conformal weights must be rational")
        if cfg.order < 0:
            parser.error("--k must be non-negative")


# --- commands ------------------------------------------------------------------------------

def _ws(ws) -> list[str]:
    return [format_scalar(w) for w in ws]


def _matched_names(k: int, weights: tuple, dim: int) -> list[str]:
    if dim == 0 or not 1 <= k <= 6:
        return []
    return [r.name for r in theorem_representatives(k, weights) if not r.degenerate and in_kernel(r)]


def _cmd_classify(cfg: RunConfig) -> tuple[int, object]:
    K = classify(cfg.order, cfg.weights)
    reps = theorem_representatives(cfg.order, cfg.weights) if 1 <= cfg.order <= 6 else []
    m = match_catalog(K, reps) if reps else None
    data = K.to_dict()
    data["generator_check"] = K.generator_check
    data["catalog"] = [
        {"name": n, "member": mem, "degenerate": deg} for n, mem, deg in zip(m.names, m.members, m.degenerate)
    ] if m else []
    data["catalog_spans"] = m.spans if m else K.dimension == 0
    return 0, data


def _cmd_sweep(cfg: RunConfig) -> tuple[int, object]:
    grid = weight_grid(cfg.grid)
    rows = []
    for w, dim in sweep(cfg.order, grid):
        rows.append({
            "order": cfg.order, "lambda": format_scalar(w[0]), "gamma": format_scalar(w[1]),
            "tau": format_scalar(w[2]), "dimension": dim,
            "matched_catalog_names": ";".join(_matched_names(cfg.order, w, dim)),
        })
    return 0, rows


def _entry_samples(name: str, rng: random.Random, count: int) -> list[tuple]:
    def r():
        return Fraction(rng.randint(-12, 12), rng.randint(1, 6))
    out = []
    for _ in range(count):
        if name == "delta3":
            out.append((r(), r(), r()))
        elif name == "poisson":
            out.append((r(), r()))
        elif name == "ff_delta3":
            out.append((r(),) * 3)
        elif name == "xi":
            t = r()
            while t == Fraction(-3, 4):
                t = r()
            out.append((-t - Fraction(3, 2), t, t))
        elif name == "ord2_a":
            out.append((Fraction(0), r()))
        elif name == "ord2_b":
            out.append((r(), Fraction(0)))
        elif name == "ord2_c":
            lam = r()
            out.append((lam, -1 - lam))
    return out


def _verify_one(name: str, weights, params: dict, oracle: bool) -> dict:
    entry = CATALOG[name]
    if weights is not None and len(weights) != entry.arity:
        raise UsageError(f"{name} takes {entry.arity} weights, got {len(weights)}")
    op = entry.build(weights=weights, **params)
    res = {"entry": name, "weights": _ws(op.weights), "degenerate": op.degenerate}
    if op.arity == 3:
        res["in_kernel"] = in_kernel(op)
    else:
        # unary and binary operators are checked by the defect directly
        res["in_kernel"] = oracle_invariant(op)
    if oracle:
        res["oracle"] = oracle_invariant(op)
    return res


def _cmd_verify(cfg: RunConfig) -> tuple[int, object]:
    results = []
    names = sorted(CATALOG) if cfg.verify_all else [cfg.entry]
    for name in names:
        entry = CATALOG[name]
        w = cfg.weights if (cfg.weights is not None and not cfg.verify_all) else entry.example
        results.append(_verify_one(name, w, cfg.params if name == cfg.entry else {}, cfg.oracle))
        if cfg.random_samples:
            rng = random.Random(f"{cfg.seed}:{name}")
            for ws in _entry_samples(name, rng, cfg.random_samples):
                results.append(_verify_one(name, ws, {}, cfg.oracle))
    ok = all(r["in_kernel"] and r.get("oracle", True) for r in results)
    return (0 if ok else 1), results


def _cmd_catalog(cfg: RunConfig) -> tuple[int, object]:
    return 0, [CATALOG[n].to_dict() for n in sorted(CATALOG)]


def _cmd_conformal(cfg: RunConfig) -> tuple[int, object]:
    K = conformal.solve_b2k(cfg.order, cfg.n, cfg.weights)
    data = K.to_dict()
    data["all_basis_invariant"] = all(conformal.conformal_defect(b).is_zero() for b in K.basis)
    status = 0 if data["all_basis_invariant"] else 1
    if cfg.order == 1 and cfg.params:
        s, t, u = (cfg.params.get(x, 0) for x in "stu")
        B = conformal.b2_closed_form(cfg.n, cfg.weights, s, t, u)
        data["closed_form"] = B.to_dict()
        data["closed_form_in_kernel"] = K.contains(B)
        data["closed_form_defect_zero"] = conformal.conformal_defect(B).is_zero()
        if not (data["closed_form_in_kernel"] and data["closed_form_defect_zero"]):
            status = 1
    return status, data


def _cmd_obstruction(cfg: RunConfig) -> tuple[int, object]:
    if cfg.symbol_path:
        B = conformal.ConformalSymbol.from_dict(json.loads(Path(cfg.symbol_path).read_text()))
    elif cfg.order == 0:
        B = conformal.scalar_symbol(cfg.n, cfg.weights)
    elif cfg.order == 1:
        s, t, u = (cfg.params.get(x, 1 if x == "s" else 0) for x in "stu")
        B = conformal.b2_closed_form(cfg.n, cfg.weights, s, t, u)
    else:
        raise UsageError("without --symbol only k = 0 (scalar) and k = 1 (closed form) are built")
    v = conformal.vectn_obstruction(B)
    return 0, {"symbol": B.to_dict(), **v.to_dict()}


def _cmd_report(cfg: RunConfig) -> tuple[int, object]:
    r = report_tables()
    return (0 if r.ok else 1), {"ok": r.ok, "mismatches": r.mismatches, "markdown": r.markdown}


_HANDLERS = {
    "classify": _cmd_classify, "sweep": _cmd_sweep, "verify": _cmd_verify, "catalog": _cmd_catalog,
    "conformal": _cmd_conformal, "obstruction": _cmd_obstruction, "report": _cmd_report,
}


# --- rendering -----------------------------------------------------------------------------

def _rows_for_csv(command: str, data) -> tuple[list[str], list[dict]]:
    if command == "sweep":
        return list(CSV_COLUMNS), data
    if command == "classify":
        names = ";".join(c["name"] for c in data["catalog"] if c["member"] and not c["degenerate"])
        w = data["weights"]
        return list(CSV_COLUMNS), [{"order": data["order"], "lambda": w[0], "gamma": w[1], "tau": w[2],
                                    "dimension": data["dimension"], "matched_catalog_names": names}]
    if command == "verify":
        return ["entry", "weights", "in_kernel"], [
            {"entry": r["entry"], "weights": " ".join(r["weights"]), "in_kernel": r["in_kernel"]} for r in data]
    if command == "catalog":
        return ["name", "arity", "order", "weight_domain", "locus"], data
    raise UsageError(f"csv output is not available for {command}")


def _text(command: str, data) -> str:
    if command == "classify":
        lines = [f"order {data['order']} at ({', '.join(data['weights'])}): dimension {data['dimension']}",
                 f"r in {{2,3}} gives the same kernel: {data['generator_check']}"]
        for b in data["basis"]:
            lines.append("  basis: " + ", ".join(f"{tuple(c['idx'])}:{c['val']}" for c in b["coeffs"]))
        for c in data["catalog"]:
            flag = " (degenerate)" if c["degenerate"] else ""
            lines.append(f"  catalog {c['name']}: {'member' if c['member'] else 'NOT a member'}{flag}")
        lines.append(f"catalog spans kernel: {data['catalog_spans']}")
        return "\n".join(lines)
    if command == "sweep":
        return "\n".join(f"order {r['order']} ({r['lambda']}, {r['gamma']}, {r['tau']}): {r['dimension']}"
                         + (f"  [{r['matched_catalog_names']}]" if r["matched_catalog_names"] else "") for r in data)
    if command == "verify":
        lines = []
        for r in data:
            line = f"{r['entry']} at ({', '.join(r['weights'])}): in kernel: {str(r['in_kernel']).lower()}"
            if "oracle" in r:
                line += f", oracle: {str(r['oracle']).lower()}"
            lines.append(line)
        return "\n".join(lines)
    if command == "catalog":
        return "\n".join(f"{e['name']}: arity {e['arity']}, order {e['order']}, weights {e['weight_domain']}; {e['locus']}"
                         for e in data)
    if command == "conformal":
        lines = [f"k={data['k']} n={data['n']} weights ({', '.join(data['weights'])}): dimension {data['dimension']}"]
        for b in data["basis"]:
            lines.append("  basis: " + ", ".join(f"{tuple(t['exp'])}:{t['val']}" for t in b["terms"]))
        lines.append(f"basis invariant: {data['all_basis_invariant']}")
        if "closed_form_in_kernel" in data:
            lines.append(f"closed form in kernel: {data['closed_form_in_kernel']}, "
                         f"defect zero: {data['closed_form_defect_zero']}")
        return "\n".join(lines)
    if command == "obstruction":
        verdict = "passes" if data["passes"] else "fails"
        extra = " (zero symbol)" if data["degenerate"] else ""
        return f"divergence obstruction {verdict}{extra}; factor mu - lam - gam - tau = {data['factor']}"
    if command == "report":
        return data["markdown"]
    return json.dumps(data, indent=2)


def render(command: str, output: str, data) -> str:
    if output == "json":
        return json.dumps(data, indent=2) + "\n"
    if output == "csv":
        cols, rows = _rows_for_csv(command, data)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return _text(command, data).rstrip("\n") + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    status, data = _HANDLERS[cfg.command](cfg)
    return status, render(cfg.command, cfg.output, data)


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    try:
        status, text = run(cfg)
    except (UsageError, DomainError) as e:
        print(f"transvect: error: {e}", file=sys.stderr)
        return 2
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
