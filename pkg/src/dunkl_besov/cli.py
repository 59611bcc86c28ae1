"""Command-line entry point.

    dunkl-besov verify [--profile PATH] [--suites S1,S2] [--out report.json]
    dunkl-besov transform --function gaussian --alpha 0.5
    dunkl-besov translate --function bump --x 1.5
    dunkl-besov convolve --function gaussian --with bump
    dunkl-besov seminorm --function gaussian --alpha 0.5 --p 2 --q 2 --beta 0.5

Exit status: 0 on success, 1 when a verification check fails, 2 on bad
arguments or an invalid profile.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from . import catalog
from .besov import BesovParams, equivalence_report
from .errors import DomainError, RangeError
from .measure import QuadGrid, SampledFunction, build_grid
from .profile import cell_id, load_profile
from .smoothness import ScaleSet
from .suites import dumps, finalize, run_suites
from .transform import forward_transform
from .translation import convolve, make_angular_rule, translate_angular

log = logging.getLogger("dunkl_besov")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _q(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def _scales(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--scales takes lo,hi,n")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo < hi and n >= 2):
        raise argparse.ArgumentTypeError("--scales needs 0 < lo < hi and n >= 2")
    return lo, hi, n


def _common(p: argparse.ArgumentParser, single: bool = True) -> None:
    if single:
        p.add_argument("--alpha", type=float, default=0.0)
        p.add_argument("--p", type=float, default=2.0)
        p.add_argument("--q", type=_q, default=2.0)
        p.add_argument("--beta", type=float, default=0.5)
    else:
        p.add_argument("--alpha", type=_floats, help="comma-separated alpha set")
        p.add_argument("--p", type=_floats, help="comma-separated p set")
        p.add_argument("--q", type=lambda s: [_q(v) for v in s.split(",")], help="comma-separated q set")
        p.add_argument("--beta", type=_floats, help="comma-separated beta set")
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--domain-radius", type=float, default=None)
    p.add_argument("--theta-nodes", type=int, default=None)
    p.add_argument("--scales", type=_scales, default=None, help="lo,hi,n of the smoothness scale lattice")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dunkl-besov", description="Dunkl analysis and Besov-Dunkl checks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--profile", type=Path, default=None)
    v.add_argument("--suites", type=lambda s: s.split(","), default=None)
    _common(v, single=False)

    for name, extra in (("transform", None), ("translate", "--x"), ("convolve", "--with"),
                        ("seminorm", None)):
        s = sub.add_parser(name)
        s.add_argument("--function", required=True, help="catalog name or CSV path")
        if extra == "--x":
            s.add_argument("--x", type=float, required=True)
        elif extra == "--with":
            s.add_argument("--with", dest="other", required=True, help="catalog name or CSV path")
        _common(s)
    return ap


# -- inputs ----------------------------------------------------------------------

def _grid(args) -> QuadGrid:
    radius = args.domain_radius if args.domain_radius is not None else 20.0
    n = args.grid_points if args.grid_points is not None else 2048
    return build_grid(args.alpha, radius, n)


def _read_csv(path: Path, grid: QuadGrid) -> SampledFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise UsageError(f"{path} is empty")
    head = [h.strip().lower() for h in rows[0]]
    if head and head[0] in ("x", "nodes"):
        rows = rows[1:]
    else:
        head = ["x", "re", "im"][:len(rows[0])]
    data = np.array([[float(v) for v in r] for r in rows if r], dtype=float)
    if data.ndim != 2 or data.shape[1] < 2:
        raise UsageError(f"{path}: expected columns x,value[,im]")
    x = data[:, 0]
    vals = data[:, 1] + (1j * data[:, head.index("im")] if "im" in head else 0.0)
    if x.size == grid.n and np.allclose(x, grid.nodes, rtol=0, atol=1e-12 * grid.radius):
        return SampledFunction.auto(grid, vals)
    order = np.argsort(x)
    x, vals = x[order], vals[order]
    if np.any(np.diff(x) <= 0):
        raise UsageError(f"{path}: x values must be distinct")
    # off-grid data: cubic spline onto the grid, zero outside the sampled range
    log.warning("%s: nodes differ from the grid, resampling with a cubic spline", path)
    out = np.zeros(grid.n, dtype=complex)
    inside = (grid.nodes >= x[0]) & (grid.nodes <= x[-1])
    out[inside] = CubicSpline(x, vals.real)(grid.nodes[inside])
    if np.iscomplexobj(vals):
        out[inside] += 1j * CubicSpline(x, vals.imag)(grid.nodes[inside])
    return SampledFunction.auto(grid, out if np.any(out.imag) else out.real)


def _function(spec: str, grid: QuadGrid) -> SampledFunction:
    if spec in catalog.CATALOG:
        return catalog.sample(spec, grid)
    path = Path(spec)
    if path.suffix.lower() == ".csv" and path.exists():
        return _read_csv(path, grid)
    raise UsageError(f"{spec!r} is neither a catalog function ({', '.join(catalog.names())}) "
                     "nor an existing CSV file")


# -- outputs ---------------------------------------------------------------------

def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text)


def _emit_function(f: SampledFunction, args, xname: str) -> None:
    if args.output == "json":
        _emit(f.to_json(xname=xname), args.out)
        return
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow([xname, "re", "im"])
    v = np.asarray(f.values, dtype=complex)
    for x, z in zip(f.grid.nodes, v):
        wr.writerow([repr(float(x)), repr(float(z.real)), repr(float(z.imag))])
    _emit(buf.getvalue(), args.out)


# -- commands --------------------------------------------------------------------

def cmd_verify(args) -> int:
    prof = load_profile(args.profile)
    prof = prof.with_overrides(alpha_set=args.alpha, p_set=args.p, q_set=args.q, beta_set=args.beta,
                               n=args.grid_points, radius=args.domain_radius,
                               theta_nodes=args.theta_nodes)
    if args.scales is not None:
        ss = dict(prof.scale_set)
        ss["bd"] = list(args.scales)
        prof = prof.with_overrides(scale_set=ss)
    if args.suites:
        prof = prof.with_overrides(suites=args.suites)
    report = finalize(run_suites(prof, log=log.info))
    if args.output == "json":
        _emit(dumps(report), args.out or Path("verify_report.json"))
    else:
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["suite", "id", "anchor", "observed", "ceiling", "pass"])
        for s in report["suites"]:
            for c in s["checks"]:
                wr.writerow([s["suite"], c["id"], c["anchor"], c["observed"], c["ceiling"], c["pass"]])
        _emit(buf.getvalue(), args.out or Path("verify_report.csv"))
    failed = report["failed"]
    n = sum(len(s["checks"]) for s in report["suites"])
    if failed:
        print(f"{len(failed)} of {n} checks failed:", file=sys.stderr)
        for cid in failed:
            print(f"  {cid}", file=sys.stderr)
        return 1
    print(f"all {n} checks passed", file=sys.stderr)
    return 0


def cmd_transform(args) -> int:
    f = _function(args.function, _grid(args))
    spec = forward_transform(f)
    _emit_function(spec.as_function, args, "lambda")
    return 0


def cmd_translate(args) -> int:
    g = _grid(args)
    f = _function(args.function, g)
    rule = make_angular_rule(g.alpha, args.theta_nodes) if args.theta_nodes else None
    _emit_function(translate_angular(f, args.x, rule), args, "x")
    return 0


def cmd_convolve(args) -> int:
    g = _grid(args)
    f, h = _function(args.function, g), _function(args.other, g)
    rule = make_angular_rule(g.alpha, args.theta_nodes) if args.theta_nodes else None
    _emit_function(convolve(f, h, rule), args, "x")
    return 0


def _frozen_ceilings(params: BesovParams) -> dict:
    """Ceilings of the default profile for this cell, where it has them."""
    prof = load_profile()
    a, p, q, b = params.alpha.alpha, params.p, params.q, params.beta
    ids = {"sandwich": cell_id("S4.sandwich_upper", a=a, p=p),
           "thm2": cell_id("S6.thm2", a=a, p=p, q=q, b=b),
           "thm3": cell_id("S6.thm3", a=a, q=q, b=b)}
    out = {}
    for key, cid in ids.items():
        try:
            out[key] = prof.ceiling(cid)
        except DomainError:
            pass
    return out


def cmd_seminorm(args) -> int:
    g = _grid(args)
    f = _function(args.function, g)
    params = BesovParams(args.p, args.q, args.beta, args.alpha)
    scales = ScaleSet.log_spaced(*args.scales) if args.scales else None
    rep = equivalence_report(f, params, scales, ceilings=_frozen_ceilings(params))
    if args.output == "json":
        _emit(rep.to_json(), args.out)
    elif args.out is not None:
        rep.per_scale_csv(args.out)
    else:
        rep.per_scale_csv(sys.stdout)
    return 0


COMMANDS = {"verify": cmd_verify, "transform": cmd_transform, "translate": cmd_translate,
            "convolve": cmd_convolve, "seminorm": cmd_seminorm}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, RangeError) as exc:
        print(f"dunkl-besov {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # reader went away (e.g. piped into head); keep the exit quiet
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1


if __name__ == "__main__":
    sys.exit(main())
