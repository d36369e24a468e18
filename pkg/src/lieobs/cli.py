"""lieobs command line: classify, scan, simulate, validate.

Exit codes: 0 success, 1 audit failure (--strict), 2 usage or config error,
3 inconclusive because a zero search was window-limited (--strict).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import ConfigError, JobConfig, Options, parse_config, read_raw, sweep_axes, with_value
from .flow import classify_dstar, flow, is_derivation_compatible
from .groups import inverse, multiply
from .integrate import rk4
from .observability import (Verdict, classify_pair, default_s_grid, indistinguishable_numeric)
from .sets import WindowLimited
from .subgroups import NonCanonicalHom, hom_validate, kernel_of

EXIT_OK, EXIT_AUDIT, EXIT_USAGE, EXIT_WINDOW = 0, 1, 2, 3


# ------------------------------------------------------------------ output

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def to_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def _classify(job: JobConfig, strict: bool) -> Verdict:
    return classify_pair(job.group, job.field, job.hom, job.options.t_window,
                         job.options.tolerances, strict)


def summary_row(job: JobConfig, verdict: Verdict, axes: Optional[Dict[str, float]] = None) -> dict:
    row = dict(axes or {})
    row.update({
        "group": job.group.label,
        "target": job.hom.target.name,
        "family": job.hom.family.name,
        "kernel": verdict.kernel.kind.value,
        "i_set": verdict.i_set.kind.value,
        "fix_cap_k": "" if verdict.fix_cap_k is None else verdict.fix_cap_k.kind.value,
        "verdict": verdict.status.value,
        "provenance": verdict.provenance.value,
    })
    return row


def run_classify(job: JobConfig, strict: bool = False) -> dict:
    verdict = _classify(job, strict)
    opts = job.options
    numeric = indistinguishable_numeric(job.group, job.field, verdict.kernel,
                                        default_s_grid(opts.s_span, opts.s_step),
                                        tol=opts.tolerances, seed=opts.seed)
    return {
        "config": job.to_dict(),
        "kernel": verdict.kernel.to_dict(),
        "dstar_class": classify_dstar(job.field, opts.tolerances).to_dict(),
        "i_set": verdict.i_set.to_dict(),
        "fix_cap_k": None if verdict.fix_cap_k is None else verdict.fix_cap_k.to_dict(),
        "verdict": verdict.status.value,
        "provenance": verdict.provenance.value,
        "pattern": verdict.pattern,
        "notes": list(verdict.notes),
        "numeric_check": {"i_discrete": numeric.is_discrete,
                          "agrees": numeric.is_discrete == verdict.i_set.is_discrete,
                          "retained": int(len(numeric.points))},
        "summary": summary_row(job, verdict),
    }


def run_scan(raw: dict, axes, strict: bool = False, overrides=None) -> dict:
    names = [n for n, _ in axes]
    rows, counts = [], {}
    for values in itertools.product(*[v for _, v in axes]):
        point = raw
        for name, value in zip(names, values):
            point = with_value(point, name, value)
        job = _apply_overrides(parse_config(point), overrides)
        verdict = _classify(job, strict)
        rows.append(summary_row(job, verdict, dict(zip(names, values))))
        counts[verdict.status.value] = counts.get(verdict.status.value, 0) + 1
    return {"axes": [{"name": n, "values": v} for n, v in axes], "rows": rows,
            "summary": dict(sorted(counts.items()))}


def run_simulate(job: JobConfig, point, s_values, with_rk4: bool = False) -> List[dict]:
    s_values = np.asarray(s_values, dtype=float)
    closed = flow(job.group, job.field, s_values, np.asarray(point, dtype=float),
                  job.options.tolerances)
    ref = rk4(job.group, job.field, point, s_values) if with_rk4 else None
    rows = []
    for i, s in enumerate(s_values):
        row = {"s": float(s), "t": float(closed[i, 0]), "x": float(closed[i, 1]),
               "y": float(closed[i, 2])}
        if ref is not None:
            row.update({"rk4_t": float(ref[i, 0]), "rk4_x": float(ref[i, 1]),
                        "rk4_y": float(ref[i, 2]),
                        "deviation": float(np.max(np.abs(ref[i] - closed[i])))})
        rows.append(row)
    return rows


def _audit(name, ok, residual, detail="") -> dict:
    return {"audit": name, "pass": bool(ok), "residual": float(residual), "detail": detail}


def run_validate(job: JobConfig, samples: int = 200) -> dict:
    cls, fld, h, opts = job.group, job.field, job.hom, job.options
    tol = opts.tolerances
    rng = np.random.default_rng(opts.seed)
    audits = []

    hv = hom_validate(cls, h, samples, opts.seed, tol.hom_residual)
    audits.append(_audit("homomorphism_law", hv.ok, max(hv.law_residual, hv.image_residual),
                         h.family.formula()))

    comp = is_derivation_compatible(cls, fld, samples, opts.seed, tol)
    audits.append(_audit("derivation_compatibility", comp.compatible, comp.commutator_norm,
                         "|D* theta - theta D*|"))
    audits.append(_audit("flow_automorphism", comp.automorphism_residual < tol.hom_residual,
                         comp.automorphism_residual, "phi_s(gh) vs phi_s(g) phi_s(h)"))

    try:
        k = kernel_of(cls, h)
    except NonCanonicalHom as exc:
        audits.append(_audit("kernel_closure", False, float("nan"), f"no kernel: {exc}"))
    else:
        a, b = k.sample(rng, 500), k.sample(rng, 500)
        res = max(float(k.residual(multiply(cls, a, b)).max()),
                  float(k.residual(inverse(cls, a)).max()))
        res /= max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
        audits.append(_audit("kernel_closure", res < tol.kernel_membership, res, k.describe()))

    g, x, y = (rng.uniform(-2, 2, (samples, 3)) for _ in range(3))
    assoc = np.abs(multiply(cls, multiply(cls, g, x), y) - multiply(cls, g, multiply(cls, x, y)))
    inv = np.abs(multiply(cls, g, inverse(cls, g)))
    res = float(max(assoc.max(), inv.max()))
    audits.append(_audit("group_axioms", res < 1e-9, res, "associativity and inverses"))
    return {"config": job.to_dict(), "audits": audits, "ok": all(a["pass"] for a in audits)}


# ------------------------------------------------------------------ argparse

def _floats(text: str, n: Sequence[int], what: str) -> List[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from exc
    if len(vals) not in n:
        raise ConfigError(f"{what}: expected {' or '.join(map(str, n))} numbers, got {text!r}")
    return vals


def _apply_overrides(job: JobConfig, args) -> JobConfig:
    if args is None:
        return job
    opts = job.options
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "t_window", None):
        lo, hi = _floats(args.t_window, (2,), "--t-window")
        if not lo < hi:
            raise ConfigError("--t-window needs lo < hi")
        changes["t_window"] = (lo, hi)
    if getattr(args, "s_span", None) is not None:
        changes["s_span"] = args.s_span
    if getattr(args, "s_step", None) is not None:
        changes["s_step"] = args.s_step
    if not changes:
        return job
    opts = replace(opts, **changes)
    if opts.s_span <= 0 or opts.s_step <= 0:
        raise ConfigError("--s-span and --s-step must be positive")
    return replace(job, options=opts)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lieobs",
                                 description="Observability of linear systems on 3D solvable Lie groups")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv"), default="json"):
        p.add_argument("--config", required=True, help="JSON job file")
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--strict", action="store_true")
        p.add_argument("--seed", type=int)
        p.add_argument("--t-window", help="lo,hi for zero searches in t")
        p.add_argument("--s-span", type=float)
        p.add_argument("--s-step", type=float)

    common(sub.add_parser("classify", help="classify one configuration"))
    scan = sub.add_parser("scan", help="sweep 1-3 named scalars")
    common(scan, default="csv")
    scan.add_argument("--axis", action="append", default=[],
                      help="name=v1,v2,... or name=lo:hi:n (repeatable)")
    sim = sub.add_parser("simulate", help="closed-form trajectory as CSV")
    common(sim, formats=("csv", "json"), default="csv")
    sim.add_argument("--point", required=True, help="t,x,y")
    sim.add_argument("--s-range", default="-2,2,41", help="lo,hi[,n]")
    sim.add_argument("--rk4", action="store_true", help="add an RK4 reference column")
    val = sub.add_parser("validate", help="homomorphism, derivation and closure audits")
    common(val)
    val.add_argument("--samples", type=int, default=200)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = read_raw(args.config)
        if args.command == "scan":
            axes = sweep_axes(raw, args.axis)
            result = run_scan(raw, axes, args.strict, args)
            text = to_csv(result["rows"]) if args.format == "csv" else to_json(result)
            _emit(text, args.out)
            return EXIT_OK
        job = _apply_overrides(parse_config(raw, allow_noncanonical=args.command == "validate"), args)
        if args.command == "classify":
            report = run_classify(job, args.strict)
            text = to_csv([report["summary"]]) if args.format == "csv" else to_json(report)
            _emit(text, args.out)
            return EXIT_OK
        if args.command == "simulate":
            point = _floats(args.point, (3,), "--point")
            rng = _floats(args.s_range, (2, 3), "--s-range")
            n = int(rng[2]) if len(rng) == 3 else 41
            if n < 1 or not rng[0] <= rng[1]:
                raise ConfigError("--s-range needs lo <= hi and n >= 1")
            rows = run_simulate(job, point, np.linspace(rng[0], rng[1], n), args.rk4)
            _emit(to_csv(rows) if args.format == "csv" else to_json(rows), args.out)
            return EXIT_OK
        if args.samples < 1:
            raise ConfigError("--samples must be >= 1")
        report = run_validate(job, args.samples)
        text = to_csv(report["audits"]) if args.format == "csv" else to_json(report)
        _emit(text, args.out)
        return EXIT_AUDIT if args.strict and not report["ok"] else EXIT_OK
    except ConfigError as exc:
        print(f"lieobs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WindowLimited as exc:
        print(f"lieobs: inconclusive, {exc}", file=sys.stderr)
        return EXIT_WINDOW


if __name__ == "__main__":
    raise SystemExit(main())
