"""Command line experiment runner.

Subcommands
-----------
``approx``    one experiment: a function on a domain, one kernel, several ``n``.
``verify``    the built-in bound sweep (or one config file); exit 1 on any FAIL.
``kernels``   multiplier tables ``variant,n,j,rho``.
``sample``    sample grids ``w,x,y,z``.
``boundary``  example boundary curves ``theta,x,y``.

Exit codes: 0 when every certified row passes, 1 on any FAIL, 2 on usage or
configuration errors.  CSV output is byte-identical for a fixed config; the
``seconds`` column stays empty unless ``--timing`` is given.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import geometry
from .approximation import (
    ApproximationReport,
    apply_multipliers,
    cassini_operator_closed,
    convolve_pointwise,
    delayed_mean_operator,
    generalized_jackson_closed,
    generalized_jackson_operator,
    laurent_approx_on_sphere,
)
from .error_analysis import AnalyticModulus, lipschitz_constant, norm_bound, verify_bound
from .exceptions import SliceApproxError
from .kernels import DVP, FejerDelayed, GenJackson, Jackson, multipliers
from .slice_functions import (
    CassiniSeries,
    LaurentPolynomial,
    RightPolynomial,
    SliceFunction,
    SphereSliceFunction,
    cassini_to_polynomial,
    load,
)

CSV_COLUMNS = ["domain", "function", "kernel", "n", "sup_error", "bound", "ratio", "samples", "seconds"]
DOMAINS = ("ball", "cassini", "sphere", "hypocycloid", "lemniscate", "semidisk")
KERNELS = ("dvp", "jackson", "genjackson", "fejer-delayed")
BUILTIN_FUNCTIONS = ("const", "id", "q2", "q3", "q+qinv", "abs-sin", "cassini1", "cassini2", "cassini3")
FILE_PREFIXES = ("cassini:", "series:", "sphere-trig:")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# config --------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    domain: str = "ball"
    R: float = 1.0
    x0: float = 0.0
    y0: float = 1.0
    m: int = 3
    function: str = "id"
    kernel: str = "dvp"
    n: list = field(default_factory=lambda: [4, 16, 64])
    p: int = 1
    samples: int = 2000
    quad_nodes: int | None = None
    seed: int = 0
    out: str | None = None

    def validate(self) -> "ExperimentConfig":
        if self.domain not in DOMAINS:
            raise UsageError(f"unknown domain {self.domain!r}; choose from {', '.join(DOMAINS)}")
        if self.kernel not in KERNELS:
            raise UsageError(f"unknown kernel {self.kernel!r}; choose from {', '.join(KERNELS)}")
        if not (self.R > 0 and math.isfinite(self.R)):
            raise UsageError("--R must be a positive number")
        if self.domain == "cassini" and not self.y0 > 0:
            raise UsageError("--y0 must be positive for a Cassini cell")
        if not math.isfinite(self.x0):
            raise UsageError("--x0 must be finite")
        if any(int(k) != k or k < 1 for k in self.n):
            raise UsageError("--n entries must be positive integers")
        if self.samples < 1:
            raise UsageError("--samples must be positive")
        if self.quad_nodes is not None and self.quad_nodes < 2:
            raise UsageError("--quad-nodes must be at least 2")
        if self.p < 0:
            raise UsageError("--p must be nonnegative")
        if self.seed < 0:
            raise UsageError("--seed must be nonnegative")
        if self.m < 2:
            raise UsageError("--m must be at least 2")
        if self.function not in BUILTIN_FUNCTIONS:
            prefix = next((p for p in FILE_PREFIXES if self.function.startswith(p)), None)
            if prefix is None:
                raise UsageError(f"unknown function {self.function!r}")
            if not Path(self.function[len(prefix):]).is_file():
                raise UsageError(f"coefficient file not found: {self.function[len(prefix):]}")
        return self

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config file: {exc}") from exc
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data).validate()


def _int_list(text: str) -> list:
    if text.strip() == "":
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}") from exc


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config; explicit flags override it")
    p.add_argument("--dump-config", action="store_true", help="print the resolved config as JSON and exit")
    p.add_argument("--domain", choices=DOMAINS)
    p.add_argument("--R", type=float)
    p.add_argument("--x0", type=float)
    p.add_argument("--y0", type=float)
    p.add_argument("--m", type=int, help="cusps or leaves for the example domains")
    p.add_argument("--function", help="built-in id or cassini:/series:/sphere-trig: followed by a JSON path")
    p.add_argument("--kernel", choices=KERNELS)
    p.add_argument("--n", type=_int_list, help="comma separated degree list")
    p.add_argument("--p", type=int, help="order of the generalized Jackson operator")
    p.add_argument("--samples", type=int)
    p.add_argument("--quad-nodes", dest="quad_nodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--timing", action="store_true", help="fill the seconds column")


def parse_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge ``--config`` (if any) with explicit flags and validate."""
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        cfg = ExperimentConfig.from_json(path.read_text())
    else:
        cfg = ExperimentConfig()
    for f in dataclasses.fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg.validate()


# registry ------------------------------------------------------------------


def make_domain(cfg: ExperimentConfig) -> geometry.CompactDomain:
    if cfg.domain == "ball":
        return geometry.Ball(cfg.x0, cfg.R)
    if cfg.domain == "cassini":
        return geometry.CassiniCell(cfg.x0, cfg.y0, cfg.R)
    if cfg.domain == "sphere":
        return geometry.UnitSphere()
    if cfg.domain == "hypocycloid":
        return geometry.hypocycloid_domain(max(3, cfg.m))
    if cfg.domain == "lemniscate":
        return geometry.lemniscate_domain(cfg.m)
    return geometry.semidisk_domain()


def _center(d) -> tuple:
    if isinstance(d, geometry.CassiniCell):
        return d.x0, d.y0
    if isinstance(d, geometry.Ball):
        return d.x0, 0.0
    return 0.0, 0.0


def make_function(name: str, d: geometry.CompactDomain) -> SliceFunction:
    """Built-in test functions; Cassini ones are centered on the domain."""
    x0, y0 = _center(d)
    if name == "const":
        return RightPolynomial([[1.0, 0.0, 0.5, 0.0]])
    if name == "id":
        return RightPolynomial.monomial(1)
    if name == "q2":
        return RightPolynomial.monomial(2)
    if name == "q3":
        return RightPolynomial.monomial(3)
    if name == "q+qinv":
        return LaurentPolynomial([[0, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0]])
    if name == "abs-sin":
        return SphereSliceFunction(lambda t: np.abs(np.sin(t)), lambda t: np.zeros_like(t), name="abs-sin")
    if name == "cassini1":
        return CassiniSeries(x0, y0, [(1.0, 0.0)])
    if name == "cassini2":
        return CassiniSeries(x0, y0, [(0.0, 1.0)])
    if name == "cassini3":
        return CassiniSeries(x0, y0, [([0.5, 0, 0, 0], [0, 0, 0.5, 0]), ([0, 0, 0, 0.25], [0.1, 0, 0, 0])])
    for prefix in FILE_PREFIXES:
        if name.startswith(prefix):
            f = load(name[len(prefix):])
            wanted = {"cassini:": CassiniSeries, "series:": RightPolynomial, "sphere-trig:": SphereSliceFunction}[prefix]
            if not isinstance(f, wanted):
                raise UsageError(f"{name}: file holds a {type(f).__name__}, expected {wanted.__name__}")
            return f
    raise UsageError(f"unknown function {name!r}")


def make_kernel(kind: str, n: int, p: int = 1):
    if kind == "dvp":
        return DVP(n)
    if kind == "jackson":
        return Jackson(n)
    if kind == "genjackson":
        return GenJackson.for_order(n, p)
    return FejerDelayed(n)


def _approximant(f, d, kind: str, n: int, p: int, quad_nodes):
    """A polynomial (closed form) when possible, otherwise grid values by quadrature."""
    if isinstance(d, geometry.UnitSphere):
        return laurent_approx_on_sphere(f, n, kernel=make_kernel(kind, n, p), m=quad_nodes)
    if isinstance(f, LaurentPolynomial) or isinstance(f, SphereSliceFunction):
        raise UsageError(f"{f!r} can only be approximated on the sphere domain")
    poly = cassini_to_polynomial(f) if isinstance(f, CassiniSeries) else f
    if isinstance(poly, RightPolynomial) and quad_nodes is None:
        if kind == "dvp" and isinstance(f, CassiniSeries):
            return cassini_operator_closed(f, n)
        if kind == "genjackson":
            return generalized_jackson_closed(poly, n, p)
        if kind == "fejer-delayed":
            return delayed_mean_operator(poly, n)
        return apply_multipliers(poly, multipliers(make_kernel(kind, n, p)))

    def values(q):
        if kind == "genjackson":
            return generalized_jackson_operator(f, q, n, p, m=quad_nodes)
        return convolve_pointwise(f, q, make_kernel(kind, n, p), m=quad_nodes)

    return values


def _lipschitz(f, d) -> float | None:
    try:
        return lipschitz_constant(f, norm_bound(d))
    except SliceApproxError:
        return None


def run_cell(cfg: ExperimentConfig, n: int, grid=None) -> ApproximationReport:
    """One (function, kernel, n) cell of an experiment."""
    d = make_domain(cfg)
    f = make_function(cfg.function, d)
    if grid is None:
        grid = geometry.sample(d, cfg.samples, seed=cfg.seed)
    t0 = time.perf_counter()
    approx = _approximant(f, d, cfg.kernel, n, cfg.p, cfg.quad_nodes)
    L = _lipschitz(f, d)
    certify = cfg.kernel == "dvp" and L is not None and isinstance(d, (geometry.Ball, geometry.CassiniCell))
    modulus = AnalyticModulus(L if L is not None else 0.0)
    kernel = make_kernel(cfg.kernel, n, cfg.p)
    report = verify_bound(
        f, approx, d, modulus, n, grid=grid, operator=cfg.kernel, function=cfg.function, kernel=kernel.label
    )
    if not certify:
        report.bound = math.nan
    report.seconds = time.perf_counter() - t0
    if d.flagged:
        report.extra["flagged"] = True
    return report


def _threads() -> int:
    raw = os.environ.get("SLICE_APPROX_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        raise UsageError(f"SLICE_APPROX_THREADS must be an integer, got {raw!r}")
    if k < 0:
        raise UsageError("SLICE_APPROX_THREADS must be nonnegative")
    return k or (os.cpu_count() or 1)


def run_experiments(cells) -> list:
    """Run ``(cfg, n)`` cells, in parallel when allowed, and sort the reports."""
    cells = list(cells)
    grids = {}
    for cfg, _ in cells:
        key = (cfg.domain, cfg.R, cfg.x0, cfg.y0, cfg.m, cfg.samples, cfg.seed)
        if key not in grids:
            grids[key] = geometry.sample(make_domain(cfg), cfg.samples, seed=cfg.seed)

    def one(cell):
        cfg, n = cell
        return run_cell(cfg, n, grids[(cfg.domain, cfg.R, cfg.x0, cfg.y0, cfg.m, cfg.samples, cfg.seed)])

    workers = min(_threads(), max(1, len(cells)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, cells))
    else:
        reports = [one(c) for c in cells]
    return sorted(reports, key=lambda r: (r.domain, r.function, r.operator, r.n, r.kernel))


# output ----------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def reports_csv(reports, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(
            [
                r.domain,
                r.function,
                r.kernel,
                r.n,
                _fmt(r.sup_error),
                _fmt(r.bound),
                _fmt(r.ratio),
                r.samples,
                f"{r.seconds:.6f}" if timing else "",
            ]
        )
    return buf.getvalue()


def summary_table(reports) -> str:
    lines = [f"{'domain':34} {'function':10} {'kernel':20} {'n':>5} {'sup_error':>11} {'bound':>11} {'status':>6}"]
    for r in reports:
        bound = f"{r.bound:11.4e}" if r.certified else f"{'-':>11}"
        note = ""
        if "stated_bound" in r.extra:
            note = f"  stated form {r.extra['stated_bound']:.4e}"
        if r.extra.get("flagged"):
            note += "  (flagged cell)"
        lines.append(
            f"{r.domain:34} {r.function:10} {r.kernel:20} {r.n:>5} {r.sup_error:11.4e} {bound} {r.status:>6}{note}"
        )
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _finish(reports, out, timing) -> int:
    _emit(reports_csv(reports, timing), out)
    sys.stderr.write(summary_table(reports) + "\n")
    return 1 if any(r.status == "FAIL" for r in reports) else 0


# subcommands -----------------------------------------------------------------


def cmd_approx(args) -> int:
    cfg = parse_config(args)
    if args.dump_config:
        sys.stdout.write(cfg.to_json() + "\n")
        return 0
    if not cfg.n:
        sys.stderr.write("warning: empty degree list, nothing to run\n")
        _emit(reports_csv([]), cfg.out)
        return 0
    return _finish(run_experiments((cfg, n) for n in cfg.n), cfg.out, args.timing)


def default_sweep(samples: int = 2000, seed: int = 0) -> list:
    """The built-in verification sweep as ``(cfg, n)`` cells."""
    cells = []
    for fn in ("id", "q2", "q3"):
        cfg = ExperimentConfig(domain="ball", R=1.0, x0=0.0, function=fn, samples=samples, seed=seed)
        cells += [(cfg, n) for n in (4, 16, 64, 256)]
    for x0, y0, R in ((0.0, 1.0, 1.0), (1.0, 1.0, 2.0)):
        for fn in ("cassini1", "cassini2", "cassini3"):
            cfg = ExperimentConfig(domain="cassini", R=R, x0=x0, y0=y0, function=fn, samples=samples, seed=seed)
            cells += [(cfg, n) for n in (4, 16, 64)]
    for fn in ("q+qinv", "abs-sin"):
        cfg = ExperimentConfig(domain="sphere", function=fn, kernel="fejer-delayed", samples=samples, seed=seed)
        cells += [(cfg, n) for n in (8, 16, 32, 64)]
    return cells


def cmd_verify(args) -> int:
    if args.config:
        cfg = parse_config(args)
        cells = [(cfg, n) for n in cfg.n]
        out = cfg.out
    else:
        samples = args.samples if args.samples is not None else 2000
        seed = args.seed if args.seed is not None else 0
        if samples < 1 or seed < 0:
            raise UsageError("--samples must be positive and --seed nonnegative")
        cells = default_sweep(samples, seed)
        out = args.out
    return _finish(run_experiments(cells), out, args.timing)


def cmd_kernels(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "n", "j", "rho"])
    for n in args.n:
        k = make_kernel(args.kernel, n, args.p)
        for j, rho in enumerate(multipliers(k)):
            w.writerow([k.variant, n, j, repr(float(rho))])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_sample(args) -> int:
    cfg = ExperimentConfig(domain=args.domain, R=args.R, x0=args.x0, y0=args.y0, m=args.m, samples=args.count, seed=args.seed)
    cfg.validate()
    grid = geometry.sample(make_domain(cfg), cfg.samples, seed=cfg.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["w", "x", "y", "z"])
    for q in grid.points:
        w.writerow([repr(float(v)) for v in q])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_boundary(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be positive")
    t = -np.pi + 2.0 * np.pi * np.arange(args.points) / args.points
    bad = geometry.branch_angles(args.curve, args.m)
    if len(bad):
        gap = np.abs(np.angle(np.exp(1j * (t[:, None] - bad[None, :]))))
        keep = gap.min(axis=1) > args.exclude
        if not keep.all():
            sys.stderr.write(f"skipped {int((~keep).sum())} points near branch points\n")
        t = t[keep]
    kw = {}
    if args.curve == "semidisk":
        kw = {"branch": args.branch, "normalized": args.normalized}
    z = geometry.example_boundary(args.curve, t, m=args.m, **kw)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "x", "y"])
    for ti, zi in zip(t, z):
        w.writerow([repr(float(ti)), repr(float(zi.real)), repr(float(zi.imag))])
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slice-approx", description="Polynomial approximation of quaternionic slice functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("approx", help="run one experiment")
    _experiment_args(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("verify", help="run the bound verification sweep")
    p.add_argument("--config", help="run this experiment config instead of the built-in sweep")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_verify, dump_config=False)

    p = sub.add_parser("kernels", help="dump kernel multipliers")
    p.add_argument("--kernel", choices=KERNELS, default="dvp")
    p.add_argument("--n", type=_int_list, default=[4])
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("sample", help="emit a sample grid")
    p.add_argument("--domain", choices=DOMAINS, default="ball")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--count", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("boundary", help="emit an example boundary curve")
    p.add_argument("--curve", choices=("hypocycloid", "lemniscate", "semidisk"), default="hypocycloid")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--exclude", type=float, default=1e-6, help="skip angles this close to branch points")
    p.add_argument("--branch", choices=("principal", "exterior"), default="principal")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_boundary)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"slice-approx: error: {exc}\n")
        return 2
    except (SliceApproxError, ValueError, OSError) as exc:
        sys.stderr.write(f"slice-approx: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
