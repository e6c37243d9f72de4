"""Command-line interface: ``solve``, ``classify``, ``sweep``, ``selftest``.

Machine-readable contract: ``solve`` and ``classify`` print one JSON object
(sorted keys, ``schema_version`` 1) to stdout; domain errors print
``{"error": TAG, ...}`` and exit 1; ``solve`` exits 0 for a VALID
certificate, 2 for FALLBACK, 3 when the search budget is exhausted.
``sweep`` emits a deterministic CSV.  ``BIDISC_SEED`` / ``BIDISC_THREADS``
provide environment defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import regions
from .errors import BidiscError, InvalidPoint, NoConvergence
from .mobius import automorphism_normalize
from .oracle import OracleBudget, sandwich as oracle_sandwich
from .selftest import run_selftest
from .solver import DEFAULT_SEED, VALID, Problem, SolverConfig, solve

SCHEMA_VERSION = 1

_AXES = ("p1_re", "p1_im", "p2_re", "p2_im", "q1_re", "q1_im", "q2_re", "q2_im")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _emit_error(tag: str, message: str) -> int:
    _emit({"error": tag, "message": message, "schema_version": SCHEMA_VERSION})
    return 1


def _parse_point(text: str, name: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidPoint(f"{name} must be four comma-separated floats RE1,IM1,RE2,IM2, got {text!r}")
    try:
        values = [float(part) for part in parts]
    except ValueError:
        raise InvalidPoint(f"{name} has a non-numeric component: {text!r}") from None
    return (complex(values[0], values[1]), complex(values[2], values[3]))


def _resolve_seed(value):
    if value is not None:
        return value
    raw = os.environ.get("BIDISC_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise InvalidPoint(f"BIDISC_SEED must be an integer, got {raw!r}") from None


def _resolve_threads(value):
    if value is not None:
        return max(1, value)
    raw = os.environ.get("BIDISC_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidPoint(f"BIDISC_THREADS must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    try:
        seed = _resolve_seed(args.seed)
        problem = Problem(
            z=_parse_point(args.z, "z"),
            p=_parse_point(args.p, "p"),
            q=_parse_point(args.q, "q"),
        )
        config = SolverConfig(seed=seed, eps=args.eps, starts=args.starts)
        certificate = solve(problem, config)
    except NoConvergence as exc:
        _emit_error(exc.tag, str(exc))
        return 3
    except BidiscError as exc:
        return _emit_error(exc.tag, str(exc))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "inputs": {
            "z": [[problem.z[0].real, problem.z[0].imag], [problem.z[1].real, problem.z[1].imag]],
            "p": [[problem.p[0].real, problem.p[0].imag], [problem.p[1].real, problem.p[1].imag]],
            "q": [[problem.q[0].real, problem.q[0].imag], [problem.q[1].real, problem.q[1].imag]],
            "seed": seed,
            "eps": args.eps,
        },
        "region": certificate.region,
        "value_log": certificate.value_log,
        "value_modulus": certificate.value_modulus,
        "certificate": certificate.to_dict(),
    }
    if args.oracle:
        result = oracle_sandwich(certificate.pair[0], certificate.pair[1], OracleBudget(seed=seed))
        payload["sandwich"] = result.to_dict()
        payload["sandwich"]["contains_value"] = result.contains(certificate.value_log)
    _emit(payload)
    return 0 if certificate.status == VALID else 2


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    try:
        z = _parse_point(args.z, "z")
        p = automorphism_normalize(z, _parse_point(args.p, "p"))
        q = automorphism_normalize(z, _parse_point(args.q, "q"))
        label = regions.classify(p, q, args.eps)
        _, margin = regions.classify_with_margin(p, q, args.eps)
    except BidiscError as exc:
        return _emit_error(exc.tag, str(exc))
    _emit({"region": label, "margin": margin, "schema_version": SCHEMA_VERSION})
    return 0


# ---------------------------------------------------------------------------
# sweep


def _parse_vary(text: str):
    try:
        axis, spec = text.split("=", 1)
        lo_text, hi_text, n_text = spec.split(":")
        lo, hi, n = float(lo_text), float(hi_text), int(n_text)
    except ValueError:
        raise InvalidPoint(f"--vary must look like AXIS=LO:HI:N, got {text!r}") from None
    if axis not in _AXES:
        raise InvalidPoint(f"unknown sweep axis {axis!r}; choose from {', '.join(_AXES)}")
    if n < 2:
        raise InvalidPoint(f"--vary needs at least two samples per axis, got {n}")
    return axis, lo, hi, n


def _parse_fixed(text: str):
    try:
        axis, value_text = text.split("=", 1)
        value = float(value_text)
    except ValueError:
        raise InvalidPoint(f"--fixed must look like AXIS=VALUE, got {text!r}") from None
    if axis not in _AXES:
        raise InvalidPoint(f"unknown sweep axis {axis!r}; choose from {', '.join(_AXES)}")
    return axis, value


def _sweep_cell(task):
    i, j, vec, z, config, use_oracle = task
    p = (complex(vec[0], vec[1]), complex(vec[2], vec[3]))
    q = (complex(vec[4], vec[5]), complex(vec[6], vec[7]))
    try:
        certificate = solve(Problem(z=z, p=p, q=q), config)
    except BidiscError as exc:
        return i, j, vec, exc.tag, math.nan, math.nan, math.nan
    width = math.nan
    if use_oracle:
        try:
            width = oracle_sandwich(
                certificate.pair[0], certificate.pair[1], OracleBudget(seed=config.seed)
            ).width
        except (BidiscError, RuntimeError):
            width = math.nan
    return i, j, vec, certificate.region, certificate.value_log, certificate.residuals.max(), width


def _format_value(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))


def cmd_sweep(args) -> int:
    try:
        seed = _resolve_seed(args.seed)
        threads = _resolve_threads(args.threads)
        if len(args.vary) != 2:
            raise InvalidPoint(f"--vary must be given exactly twice, got {len(args.vary)}")
        (axis_i, lo_i, hi_i, n_i), (axis_j, lo_j, hi_j, n_j) = (_parse_vary(v) for v in args.vary)
        if axis_i == axis_j:
            raise InvalidPoint(f"the two --vary axes must differ, both are {axis_i!r}")
        base = dict.fromkeys(_AXES, 0.0)
        for text in args.fixed or ():
            axis, value = _parse_fixed(text)
            if axis in (axis_i, axis_j):
                raise InvalidPoint(f"axis {axis!r} is both varied and fixed")
            base[axis] = value
        # fixed coordinates must describe points inside the bidisc; varying
        # coordinates are validated per cell (out-of-disc cells become rows)
        for k in range(0, 8, 2):
            re_axis, im_axis = _AXES[k], _AXES[k + 1]
            if re_axis in (axis_i, axis_j) or im_axis in (axis_i, axis_j):
                continue
            if math.hypot(base[re_axis], base[im_axis]) >= 1.0:
                raise InvalidPoint(
                    f"fixed coordinate {re_axis[:2]} = {base[re_axis]},{base[im_axis]} lies outside the unit disc"
                )
        z = _parse_point(args.z, "z")
    except BidiscError as exc:
        return _emit_error(exc.tag, str(exc))

    config = SolverConfig(seed=seed, eps=args.eps)
    grid_i = np.linspace(lo_i, hi_i, n_i)
    grid_j = np.linspace(lo_j, hi_j, n_j)
    index_i = _AXES.index(axis_i)
    index_j = _AXES.index(axis_j)
    tasks = []
    for i in range(n_i):
        for j in range(n_j):
            vec = [base[a] for a in _AXES]
            vec[index_i] = float(grid_i[i])
            vec[index_j] = float(grid_j[j])
            tasks.append((i, j, tuple(vec), z, config, args.oracle))

    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunk = max(1, len(tasks) // (4 * threads))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_cell, tasks, chunksize=chunk))
    else:
        results = [_sweep_cell(task) for task in tasks]

    lines = ["i,j," + ",".join(_AXES) + ",region,value_log,residual_max,sandwich_width"]
    for i, j, vec, region, value, residual, width in results:
        lines.append(
            f"{i},{j},"
            + ",".join(repr(float(v)) for v in vec)
            + f",{region},{_format_value(value)},{_format_value(residual)},{_format_value(width)}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    try:
        seed = _resolve_seed(args.seed)
    except BidiscError as exc:
        return _emit_error(exc.tag, str(exc))
    results = run_selftest(quick=args.quick, seed=seed)
    all_passed = True
    for result in results:
        line = f"{'PASS' if result.passed else 'FAIL'} {result.name} ({result.seconds:.2f}s)"
        if result.detail:
            line += f": {result.detail}"
        if not result.passed:
            all_passed = False
        print(line)
    print(f"selftest: {'PASS' if all_passed else 'FAIL'}")
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidisc",
        description="Certified two-pole extremal values on the bidisc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_points(p, need_poles=True):
        p.add_argument("--z", default="0,0,0,0", help="base point as RE1,IM1,RE2,IM2 (default origin)")
        p.add_argument("--p", required=need_poles, help="first pole as RE1,IM1,RE2,IM2")
        p.add_argument("--q", required=need_poles, help="second pole as RE1,IM1,RE2,IM2")
        p.add_argument("--eps", type=float, default=regions.DEFAULT_EPS, help="region margin")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None, help="run seed (default BIDISC_SEED or built-in)")

    solve_parser = sub.add_parser("solve", help="solve one problem, print a JSON certificate")
    add_common_points(solve_parser)
    solve_parser.add_argument("--starts", type=int, default=64, help="multistart budget")
    solve_parser.add_argument("--oracle", action="store_true", help="attach independent sandwich bounds")
    solve_parser.set_defaults(handler=cmd_solve)

    classify_parser = sub.add_parser("classify", help="print the region label and margin as JSON")
    add_common_points(classify_parser)
    classify_parser.set_defaults(handler=cmd_classify)

    sweep_parser = sub.add_parser("sweep", help="solve a 2-axis grid of problems, emit CSV")
    sweep_parser.add_argument("--vary", action="append", required=True, metavar="AXIS=LO:HI:N",
                              help="axis to vary (give exactly twice)")
    sweep_parser.add_argument("--fixed", action="append", metavar="AXIS=VALUE",
                              help="hold an axis at a value (repeatable)")
    sweep_parser.add_argument("--z", default="0,0,0,0", help="base point as RE1,IM1,RE2,IM2")
    sweep_parser.add_argument("--eps", type=float, default=regions.DEFAULT_EPS)
    sweep_parser.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    sweep_parser.add_argument("--out", default=None, help="write CSV here instead of stdout")
    sweep_parser.add_argument("--oracle", action="store_true", help="fill the sandwich_width column")
    sweep_parser.add_argument("--threads", type=int, default=None,
                              help="worker processes (default BIDISC_THREADS or 1)")
    sweep_parser.set_defaults(handler=cmd_sweep)

    selftest_parser = sub.add_parser("selftest", help="run the built-in invariant suites")
    selftest_parser.add_argument("--quick", action="store_true", help="smaller samples, finishes in seconds")
    selftest_parser.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    selftest_parser.set_defaults(handler=cmd_selftest)

    return parser


_POINT_FLAGS = ("--z", "--p", "--q")


def _fuse_point_flags(argv: list) -> list:
    """Join ``--p -0.5,0,...`` into ``--p=-0.5,0,...``.

    argparse otherwise mistakes a point whose first component is negative for
    an option string; the comma makes the intent unambiguous.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _POINT_FLAGS and nxt is not None and nxt.startswith("-") and "," in nxt:
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_fuse_point_flags(list(argv)))
    return args.handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
