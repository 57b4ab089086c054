"""Command-line front end.

Subcommands: ``verify`` (run the randomized property suites), ``sweep``
(classified cusp parameters over a grid of bending values, CSV plus an
optional SVG chart), ``bend`` (apply bending moves to a representation from
JSON), ``classify`` (cusp parameter from bending data or from generators in
model form), and ``hilbert`` (distances for point pairs in a domain).

Exit codes: 0 success / all properties pass, 1 property failure, 2 usage or
I/O error.  ``CUSPBEND_THREADS`` caps sweep parallelism; output order is
fixed by input order regardless of scheduling.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify as verify_mod
from .bending import BendingMove, MarkedRep, iterated_bend
from .cusp_classify import (
    RectangularCuspData,
    classify_h_form,
    conjugate_and_match,
    cusp_parameter_entry,
)
from .cusp_models import CuspParameter
from .hilbert import ball_oracle, hilbert_distances, model_domain_oracle
from .projlin import DEFAULT_TOL, is_exact, matrix_from_json, parse_scalar


def _fmt(x) -> str:
    """Floats at 17 significant digits (round-trip safe); inf sentinel."""
    xf = float(x)
    if math.isinf(xf):
        return "inf" if xf > 0 else "-inf"
    return f"{xf:.17g}"


def _thread_count() -> int:
    raw = os.environ.get("CUSPBEND_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn, items):
    items = list(items)
    workers = _thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_json(path) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# verify


def _cmd_verify(args) -> int:
    results = verify_mod.run_suites(args.suite or None, seed=args.seed,
                                    perturb=args.perturb_h)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        note = f"  [{r.note}]" if r.note else ""
        print(f"{status} {r.suite}.{r.name}  trials={r.trials}  "
              f"max_residual={r.max_residual:.3e}  tol={r.tol:.1e}{note}")
    all_pass = all(r.passed for r in results)
    report = {
        "seed": args.seed,
        "suites": sorted(args.suite) if args.suite else sorted(verify_mod.SUITES),
        "properties": [r.to_json() for r in results],
        "all_pass": all_pass,
    }
    if args.out:
        _write_text(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    print("ALL PASS" if all_pass else "FAILURES PRESENT")
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# sweep


def _parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("grid must be start:stop:steps")
    start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise ValueError("grid needs at least one step")
    return np.linspace(start, stop, steps)


def _sweep_row(n, b_vals, slots, s):
    svec = [float(s) if (i in slots and s != 0) else 0.0 for i in range(2, n + 1)]
    data = RectangularCuspData(n, b=b_vals, s=svec)
    cls = conjugate_and_match(data)
    a_vals, ainv_vals = [], []
    for k, sk in enumerate(svec):
        if sk == 0:
            a_vals.append(math.inf)
            ainv_vals.append(0.0)
        else:
            a = cusp_parameter_entry(data.b[k], data.mu[k], sk)
            a_vals.append(a)
            ainv_vals.append(1.0 / a)
    return svec, a_vals, ainv_vals, cls.type


def _cmd_sweep(args) -> int:
    n = args.n
    grid = _parse_grid(args.grid)
    b_raw = [part for part in str(args.b).split(",") if part]
    if len(b_raw) == 1:
        b_vals = [float(b_raw[0])] * (n - 1)
    elif len(b_raw) == n - 1:
        b_vals = [float(x) for x in b_raw]
    else:
        raise ValueError(f"--b needs 1 or {n - 1} comma-separated values")
    if args.slots:
        slots = sorted({int(x) for x in args.slots.split(",")})
        if any(i < 2 or i > n for i in slots):
            raise ValueError(f"slots must lie in 2..{n}")
    else:
        slots = list(range(2, n + 1))

    rows = _map_ordered(lambda s: _sweep_row(n, b_vals, slots, s), grid)
    header = ([f"s_{i}" for i in range(2, n + 1)]
              + [f"a_{i}" for i in range(2, n + 1)]
              + [f"ainv_{i}" for i in range(2, n + 1)] + ["type"])
    lines = [",".join(header)]
    for svec, a_vals, ainv_vals, ctype in rows:
        cells = [_fmt(x) for x in svec] + [_fmt(x) for x in a_vals] \
            + [_fmt(x) for x in ainv_vals] + [str(ctype)]
        lines.append(",".join(cells))
    _write_text(args.out, "\n".join(lines) + "\n")

    if args.svg:
        xs = [float(s) for s in grid]
        series = {}
        for idx, i in enumerate(range(2, n + 1)):
            if i in slots:
                series[f"ainv_{i}"] = [row[2][idx] for row in rows]
        _write_svg(args.svg, xs, series, "inverted cusp parameter vs bending",
                   "s", "1/a")
    return 0


_SVG_COLORS = ["#1f6fb2", "#c03028", "#2e8b57", "#8a2be2", "#b8860b", "#555555"]


def _write_svg(path, xs, series, title, xlabel, ylabel) -> None:
    """Minimal hand-rolled polyline chart; no plotting dependency."""
    width, height = 640, 420
    ml, mr, mt, mb = 70, 20, 36, 48
    plot_w, plot_h = width - ml - mr, height - mt - mb
    finite_vals = [v for ys in series.values() for v in ys if math.isfinite(v)]
    if not xs or not finite_vals:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(finite_vals), max(finite_vals)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return mt + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{ml}" y1="{mt + plot_h}" x2="{ml + plot_w}" y2="{mt + plot_h}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + plot_h}" stroke="black"/>',
        f'<text x="{ml + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="18" y="{mt + plot_h / 2:.1f}" font-size="12" '
        f'transform="rotate(-90 18 {mt + plot_h / 2:.1f})" text-anchor="middle">{ylabel}</text>',
        f'<text x="{ml}" y="{height - 28}" text-anchor="middle" font-size="10">{_fmt(x_lo)}</text>',
        f'<text x="{ml + plot_w}" y="{height - 28}" text-anchor="middle" font-size="10">{_fmt(x_hi)}</text>',
        f'<text x="{ml - 6}" y="{mt + plot_h}" text-anchor="end" font-size="10">{_fmt(y_lo)}</text>',
        f'<text x="{ml - 6}" y="{mt + 10}" text-anchor="end" font-size="10">{_fmt(y_hi)}</text>',
    ]
    for idx, (label, ys) in enumerate(series.items()):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}"
                       for x, y in zip(xs, ys) if math.isfinite(y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{ml + plot_w - 4}" y="{mt + 14 + 14 * idx}" text-anchor="end" '
                     f'font-size="11" fill="{color}">{label}</text>')
    parts.append("</svg>")
    _write_text(path, "\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# bend / classify / hilbert


def _cmd_bend(args) -> int:
    bundle = _load_json(args.input)
    rep = MarkedRep.from_json(bundle["rep"])
    moves = [BendingMove.from_json(m) for m in bundle.get("moves", [])]
    result = iterated_bend(rep, moves, tol=args.tol,
                           verify_order=args.verify_order,
                           rng=np.random.default_rng(args.seed))
    _write_text(args.out, json.dumps(result.to_json(), sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_classify(args) -> int:
    data = _load_json(args.input)
    if "generators" in data:
        gens = [matrix_from_json(rows) for rows in data["generators"]]
        cls = classify_h_form(gens, tol=args.tol)
    else:
        n = int(data["n"])
        b = [parse_scalar(x) for x in data["b"]]
        s = [parse_scalar(x) for x in data["s"]] if "s" in data else None
        mu = [parse_scalar(x) for x in data["mu"]] if "mu" in data else None
        if args.exact:
            values = b + (mu or [])
            if mu is None or not all(is_exact(x) for x in values):
                raise ValueError("--exact needs rational b and mu values in the input")
        rect = RectangularCuspData(n, b=b, s=s, mu=mu)
        cls = conjugate_and_match(rect, tol=args.tol)
    _write_text(args.out, json.dumps(cls.to_json(), sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_hilbert(args) -> int:
    spec = _load_json(args.input)
    dspec = spec["domain"]
    kind = dspec.get("kind")
    if kind == "ball":
        dom = ball_oracle(int(dspec["n"]))
    elif kind == "model":
        psi = CuspParameter([float(parse_scalar(x)) for x in dspec["psi"]])
        dom = model_domain_oracle(psi)
    else:
        raise ValueError(f"unknown domain kind {kind!r} (expected ball or model)")
    pairs = spec["pairs"]
    X = np.asarray([p[0] for p in pairs], dtype=np.float64)
    Y = np.asarray([p[1] for p in pairs], dtype=np.float64)
    dists = hilbert_distances(dom, X, Y)
    lines = ["x,y,d"]
    for x, y, d in zip(X, Y, dists):
        xs = " ".join(_fmt(c) for c in x)
        ys = " ".join(_fmt(c) for c in y)
        lines.append(f'"{xs}","{ys}",{_fmt(d)}')
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspbend",
        description="Model cusp domains, Hilbert metrics, bending, and cusp classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append",
                   help=f"restrict to a suite ({', '.join(sorted(verify_mod.SUITES))}); repeatable")
    p.add_argument("--out", help="write a JSON report here")
    p.add_argument("--perturb-h", type=float, default=0.0,
                   help="test hook: inject this much noise into the cusp-group "
                        "elements of the leaf-invariance property")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="classified parameters over a bending grid (CSV/SVG)")
    p.add_argument("--n", type=int, required=True, help="cusp dimension")
    p.add_argument("--grid", required=True, help="bending values start:stop:steps")
    p.add_argument("--b", default="1", help="shape constants (single value or comma list)")
    p.add_argument("--slots", help="comma list of bent slots in 2..n (default: all)")
    p.add_argument("--out", default="-", help="CSV path (default stdout)")
    p.add_argument("--svg", help="also write an SVG chart of 1/a vs s")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("bend", help="apply bending moves to a representation (JSON in/out)")
    p.add_argument("--in", dest="input", required=True, help='JSON {"rep":…, "moves":[…]}')
    p.add_argument("--out", default="-")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify-order", action="store_true",
                   help="re-run the moves in a random order and compare")
    p.set_defaults(func=_cmd_bend)

    p = sub.add_parser("classify", help="cusp parameter from bending data or model-form generators")
    p.add_argument("--in", dest="input", required=True,
                   help='JSON {"n":…, "b":…, "s"/"mu":…} or {"generators": [[…]]}')
    p.add_argument("--out", default="-")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--exact", action="store_true",
                   help="require exact rational data (zero-residual matching)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("hilbert", help="Hilbert distances for point pairs (CSV out)")
    p.add_argument("--in", dest="input", required=True,
                   help='JSON {"domain": {"kind": "ball"|"model", …}, "pairs": [[x, y], …]}')
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_hilbert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cuspbend: i/o error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"cuspbend: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
