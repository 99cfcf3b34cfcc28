"""
Command-line interface.

    direop potential    --family oscillator --omega 2 --ell 1 --m 0,1,2
    direop wavefunction --family scarf --A 3 --B 1 --m 0,1,2 --n 0
    direop spectrum     --family pt --A 1 --B 3 --n-levels 4 --check
    direop verify       --suite full --jobs 4
    direop figure 4a
    direop replay previous_output.csv

Every output embeds the complete run configuration (a ``# config:`` first line
for CSV, a ``config`` key for JSON); ``replay`` re-runs it and reproduces the
file byte for byte.  Floats are written with 17 significant digits.

CSV columns:

    potential     m,x,phi,v1,v2
    wavefunction  m,x,psi1,psi2
    spectrum      m,n,energy_analytic,energy_paper,numeric,abs_err

Exit codes: 0 success, 1 verification failure, 2 usage or spec error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import DireopError
from .numerics import build_hamiltonian, eigenvalues_lowest, richardson
from .potentials import PotentialSpec, phi, potential_v, truncate_domain, validate
from .spectra import (
    default_grid,
    energy,
    energy_paper,
    max_level,
    normalized_eigenfunction,
    partner_eigenfunction,
)
from .verify import Settings, ci_specs, full_report

COLUMNS = {
    "potential": ["m", "x", "phi", "v1", "v2"],
    "wavefunction": ["m", "x", "psi1", "psi2"],
    "spectrum": ["m", "n", "energy_analytic", "energy_paper", "numeric", "abs_err"],
}

FIGURES = {
    "1": dict(family="oscillator", omega=2.0, ell=1.0),
    "2": dict(family="scarf", A=3.0, B=1.0),
    "3": dict(family="pt", A=1.0, B=3.0),
    "4": dict(family="scarf", A=1.5, B=2.5, parametric=True),
    "5": dict(family="pt", A=2.5, B=1.5, parametric=True),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    omega: Optional[float] = None
    ell: Optional[float] = None
    A: Optional[float] = None
    B: Optional[float] = None
    m: list = field(default_factory=lambda: [0])
    parametric: bool = False
    grid_count: int = 4000
    tail_tol: float = 1e-12
    seed: int = 42
    format: str = "csv"
    n: int = 0
    n_levels: int = 4
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    points: int = 401
    check: bool = False
    tol: float = 1e-4
    suite: str = "full"
    tol_scale: float = 1.0
    perturb_energy: list = field(default_factory=list)
    figure: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)

    def specs(self) -> list[PotentialSpec]:
        if self.family is None:
            raise UsageError("--family is required")
        fam = PotentialSpec(self.family).family
        need = ("omega", "ell") if fam == "oscillator" else ("A", "B")
        for name in need:
            if getattr(self, name) is None:
                raise UsageError(f"--{name} is required for the {fam} family")
        # only the family's own parameters reach the spec
        params = {k: getattr(self, k) for k in need}
        base = PotentialSpec(fam, parametric=self.parametric, **params)
        out = [base.with_m(m) for m in self.m]
        for s in out:
            validate(s)
        return out


# -- serialization -------------------------------------------------------------

def _num(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return format(v, ".17g") if math.isfinite(v) else "nan"


def to_json(o) -> str:
    """JSON with every float written to 17 significant digits."""
    if o is None:
        return "null"
    if isinstance(o, (bool, np.bool_)):
        return "true" if o else "false"
    if isinstance(o, (int, float, np.integer, np.floating)):
        s = _num(o)
        return "null" if s == "nan" else s
    if isinstance(o, str):
        return json.dumps(o)
    if isinstance(o, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in o.items()) + "}"
    if isinstance(o, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json(v) for v in o) + "]"
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _table(cfg: RunConfig, rows: list) -> str:
    cols = COLUMNS[cfg.command]
    if cfg.format == "json":
        return to_json({"config": cfg.to_dict(), "columns": cols, "rows": rows}) + "\n"
    lines = ["# config: " + to_json(cfg.to_dict()), ",".join(cols)]
    lines += [",".join(_num(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------

def _sample_points(cfg: RunConfig, specs, levels: int) -> np.ndarray:
    lo, hi = cfg.x_min, cfg.x_max
    if lo is None or hi is None:
        doms = [truncate_domain(s, cfg.tail_tol, levels) for s in specs]
        lo = min(d.x_min for d in doms) if lo is None else lo
        hi = max(d.x_max for d in doms) if hi is None else hi
    if not hi > lo:
        raise UsageError(f"empty sampling range [{lo}, {hi}]")
    if cfg.points < 2:
        raise UsageError("--points must be at least 2")
    # strictly interior, so singular endpoints are never evaluated
    return lo + (hi - lo) * np.arange(1, cfg.points + 1) / (cfg.points + 1)


def cmd_potential(cfg: RunConfig) -> tuple[str, int]:
    specs = cfg.specs()
    x = _sample_points(cfg, specs, 1)
    rows = []
    for s in specs:
        p, v1, v2 = phi(s, x), potential_v(s, 1, x), potential_v(s, 2, x)
        rows += [[s.m, *r] for r in zip(x, p, v1, v2)]
    return _table(cfg, rows), 0


def cmd_wavefunction(cfg: RunConfig) -> tuple[str, int]:
    specs = cfg.specs()
    n = cfg.n
    for s in specs:
        top = max_level(s)
        if n < 0 or (top is not None and n > top):
            raise UsageError(f"{s.label}: level {n} outside 0..{top}")
    x = _sample_points(cfg, specs, n + 1)
    rows = []
    for s in specs:
        grid = default_grid(s, max(6, n + 1) if max_level(s) is None else n + 1, cfg.grid_count, cfg.tail_tol)
        psi1 = normalized_eigenfunction(s, n, x, grid)
        psi2 = np.zeros_like(psi1) if n == 0 else partner_eigenfunction(s, n - 1, x, grid)
        rows += [[s.m, *r] for r in zip(x, psi1, psi2)]
    return _table(cfg, rows), 0


def numeric_levels(spec: PotentialSpec, k: int, count: int = 4000, tail_tol: float = 1e-12) -> np.ndarray:
    """Richardson-extrapolated lowest k eigenvalues of H1."""
    grid = default_grid(spec, max(k, 1), count, tail_tol)
    e_h = eigenvalues_lowest(build_hamiltonian(spec, 1, grid), k)
    e_h2 = eigenvalues_lowest(build_hamiltonian(spec, 1, grid.refined()), k)
    return richardson(e_h, e_h2, 2)


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    rows = []
    worst = 0.0
    for s in cfg.specs():
        top = max_level(s)
        k = cfg.n_levels if top is None else min(cfg.n_levels, top + 1)
        num = numeric_levels(s, k, cfg.grid_count, cfg.tail_tol)
        for n in range(k):
            e = energy(s, n)
            err = abs(num[n] - e)
            worst = max(worst, err)
            rows.append([s.m, n, e, energy_paper(s, n), num[n], err])
    code = 1 if cfg.check and not worst <= cfg.tol else 0
    return _table(cfg, rows), code


def _report(args):
    spec, settings = args
    return full_report(spec, settings=settings).to_dict()


def cmd_verify(cfg: RunConfig, jobs: int = 1) -> tuple[str, int]:
    quick = cfg.suite == "quick"
    settings = Settings(
        grid_count=cfg.grid_count,
        tail_tol=cfg.tail_tol,
        seed=cfg.seed,
        n_levels=3 if quick else 4,
        gram_levels=3 if quick else 6,
        richardson=not quick,
        tol_scale=cfg.tol_scale,
        energy_shift=tuple((int(n), float(d)) for n, d in cfg.perturb_energy),
    )
    specs = cfg.specs() if cfg.family is not None else ci_specs(tuple(cfg.m))
    for s in specs:
        validate(s)
    work = [(s, settings) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_report, work))
    else:
        reports = [_report(w) for w in work]
    passed = all(r["passed"] for r in reports)
    for r in reports:
        if not r["passed"]:
            print(f"FAIL {PotentialSpec.from_dict(r['spec']).label}: {', '.join(r['failures'])}",
                  file=sys.stderr)
    body = "{\n" + f'"config": {to_json(cfg.to_dict())},\n"passed": {to_json(passed)},\n"reports": [\n'
    body += ",\n".join(to_json(r) for r in reports) + "\n]\n}\n"
    return body, 0 if passed else 1


def run(cfg: RunConfig, jobs: int = 1) -> tuple[str, int]:
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"unknown format {cfg.format!r}")
    if cfg.command == "verify":
        return cmd_verify(cfg, jobs)
    handler = {"potential": cmd_potential, "wavefunction": cmd_wavefunction, "spectrum": cmd_spectrum}
    if cfg.command not in handler:
        raise UsageError(f"unknown command {cfg.command!r}")
    return handler[cfg.command](cfg)


def figure_config(fig: str, **overrides) -> RunConfig:
    """The potential/wavefunction run behind figure ``fig`` (e.g. ``"3b"``)."""
    if len(fig) != 2 or fig[0] not in FIGURES or fig[1] not in "ab":
        raise UsageError(f"unknown figure {fig!r}; expected one of 1a..5b")
    command = "potential" if fig[1] == "a" else "wavefunction"
    return RunConfig(command=command, m=[0, 1, 2], n=0, figure=fig, **FIGURES[fig[0]], **overrides)


def read_config(path: str) -> RunConfig:
    with open(path) as fh:
        text = fh.read()
    if text.startswith("# config: "):
        d = json.loads(text.splitlines()[0][len("# config: "):])
    else:
        d = json.loads(text)["config"]
    return RunConfig.from_dict(d)


# -- argument parsing ---------------------------------------------------------

def _m_list(text: str) -> list:
    try:
        ms = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}")
    if not ms or any(m < 0 for m in ms):
        raise argparse.ArgumentTypeError(f"expected non-negative integers, got {text!r}")
    return ms


def _perturbation(text: str) -> list:
    try:
        n, delta = text.split(":")
        return [int(n), float(delta)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N:DELTA, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    spec = argparse.ArgumentParser(add_help=False)
    g = spec.add_argument_group("potential")
    g.add_argument("--family", help="oscillator, scarf or pt")
    g.add_argument("--omega", type=float)
    g.add_argument("--ell", type=float)
    g.add_argument("--A", dest="A", type=float)
    g.add_argument("--B", dest="B", type=float)
    g.add_argument("--m", type=_m_list, help="codimensions, e.g. 0,1,2 (default 0; 0,1,2 for verify)")
    g.add_argument("--parametric", action="store_true")

    num = argparse.ArgumentParser(add_help=False)
    g = num.add_argument_group("numerics")
    g.add_argument("--grid-count", type=int, default=4000)
    g.add_argument("--tail-tol", type=float, default=1e-12)
    g.add_argument("--seed", type=int, default=42, help="overridden by DIREOP_SEED")

    out = argparse.ArgumentParser(add_help=False)
    g = out.add_argument_group("output")
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.add_argument("--output", help="write here instead of stdout")

    sample = argparse.ArgumentParser(add_help=False)
    g = sample.add_argument_group("sampling")
    g.add_argument("--x-min", type=float)
    g.add_argument("--x-max", type=float)
    g.add_argument("--points", type=int, default=401)

    parser = argparse.ArgumentParser(prog="direop", description="Rationally extended Dirac scalar potentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("potential", parents=[spec, num, out, sample], help="phi, V1 and V2 on a range")
    p = sub.add_parser("wavefunction", parents=[spec, num, out, sample], help="normalized spinor components")
    p.add_argument("--n", type=int, default=0)
    p = sub.add_parser("spectrum", parents=[spec, num, out], help="closed-form vs numeric levels")
    p.add_argument("--n-levels", type=int, default=4)
    p.add_argument("--check", action="store_true", help="exit 1 if any level misses --tol")
    p.add_argument("--tol", type=float, default=1e-4)
    p = sub.add_parser("verify", parents=[spec, num], help="run the verification suite")
    p.add_argument("--suite", choices=["quick", "full"], default="full")
    p.add_argument("--tol-scale", type=float, default=1.0)
    p.add_argument("--perturb-energy", type=_perturbation, action="append", default=[],
                   metavar="N:DELTA", help="add DELTA to analytic level N (falsifiability probe)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output")
    p = sub.add_parser("figure", parents=[num, out, sample], help="dataset behind a figure, 1a..5b")
    p.add_argument("id")
    p = sub.add_parser("replay", help="re-run the configuration embedded in an output file")
    p.add_argument("file")
    p.add_argument("--output")
    return parser


def _config_from_args(args) -> RunConfig:
    seed = int(os.environ["DIREOP_SEED"]) if os.environ.get("DIREOP_SEED") else args.seed
    common = dict(grid_count=args.grid_count, tail_tol=args.tail_tol, seed=seed)
    if args.command == "figure":
        return figure_config(args.id, format=args.format, x_min=args.x_min, x_max=args.x_max,
                             points=args.points, **common)
    ms = args.m or ([0, 1, 2] if args.command == "verify" else [0])
    cfg = RunConfig(command=args.command, family=args.family, omega=args.omega, ell=args.ell,
                    A=args.A, B=args.B, m=ms, parametric=args.parametric, **common)
    for name in ("format", "n", "n_levels", "x_min", "x_max", "points", "check", "tol",
                 "suite", "tol_scale", "perturb_energy"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = read_config(args.file) if args.command == "replay" else _config_from_args(args)
        text, code = run(cfg, getattr(args, "jobs", 1))
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DireopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
