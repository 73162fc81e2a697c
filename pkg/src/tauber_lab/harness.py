"""Command-line harness: named verifications emitted as CSV or JSON tables.

Every command returns a :class:`Table`. Commands that check an identity set
``Table.ok`` from that check and the CLI exits nonzero when it is false;
report-style commands (``pnt-table``, ``tv-growth``, ``theorem2-demo``,
``lemma-audit``) always succeed unless I/O fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import zeta as zmod
from .arithfun import MAX_SIEVE, ArithmeticFunction, chebyshev_psi, constant_one, sieve_von_mangoldt
from .errors import DomainError, PoleProximityError, TauberLabError
from .fixtures import empty_chi, single_jump_chi
from .stepbv import ExpDecayStepFunction, lemma_bound_check, total_variation_exact
from .transforms import dirichlet_eval, laplace, laplace_stieltjes

COMMANDS = (
    "pnt-table",
    "tauberian-check",
    "dirichlet-zeta",
    "tv-growth",
    "residue",
    "theorem2-demo",
    "lemma-audit",
)
IDENTITY_SLACK = 1e-9
RESIDUE_TOL = 1e-5
LIMIT_STEP = 1e-6
THREADS_ENV = "TAUBER_LAB_THREADS"


@dataclass
class RunConfig:
    """Parsed CLI options; ``None`` grid fields mean "command default"."""

    command: str
    alpha: Optional[List[float]] = None
    nmax: int = 10**6
    sigma_grid: Optional[List[float]] = None
    t_grid: Optional[List[float]] = None
    x_list: Optional[List[float]] = None
    fixture: Optional[str] = None
    seed: int = 0
    tol: float = 1e-10
    format: str = "csv"
    out: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 1 <= self.nmax <= MAX_SIEVE:
            raise ValueError(f"nmax must lie in 1..{MAX_SIEVE}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        for name in ("alpha", "sigma_grid", "t_grid", "x_list"):
            grid = getattr(self, name)
            if grid is not None and len(grid) == 0:
                raise ValueError(f"{name} is empty")


@dataclass
class Table:
    """Rows in input order plus a summary.

    ``deviation_column`` names the column whose maximum goes in the footer.
    """

    name: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    deviation_column: Optional[str] = None
    max_deviation: Optional[float] = None
    ok: bool = True
    summary: Dict[str, Any] = field(default_factory=dict)

    def full_summary(self) -> Dict[str, Any]:
        out = {"command": self.name, "ok": self.ok}
        if self.deviation_column is not None:
            out["deviation_column"] = self.deviation_column
            out["max_deviation"] = self.max_deviation
        out.update(self.summary)
        return out


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt(row.get(c)) for c in table.columns])
    footer = {c: None for c in table.columns}
    footer[table.columns[0]] = "max_deviation"
    if table.deviation_column is not None:
        footer[table.deviation_column] = table.max_deviation
    w.writerow([_fmt(footer[c]) for c in table.columns])
    return buf.getvalue()


def to_json(table: Table) -> str:
    payload = {
        "rows": [{c: _jsonable(r.get(c)) for c in table.columns} for r in table.rows],
        "summary": _jsonable(table.full_summary()),
    }
    return json.dumps(payload, indent=2) + "\n"


def render(table: Table, fmt: str) -> str:
    return to_csv(table) if fmt == "csv" else to_json(table)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(4, os.cpu_count() or 1))


def _map_rows(fn: Callable[[Any], Any], items: Sequence[Any]) -> List[Any]:
    """Map preserving input order; threads capped by ``TAUBER_LAB_THREADS``."""
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _max(values: Iterable[float]) -> Optional[float]:
    vals = [v for v in values if v is not None and not math.isnan(v)]
    return max(vals) if vals else None


def _chi_for(name: str, N: int) -> ArithmeticFunction:
    if name == "lambda":
        return sieve_von_mangoldt(N)
    if name == "one":
        return constant_one(N)
    if name == "single_jump":
        return single_jump_chi()
    if name == "empty":
        return empty_chi(N)
    raise ValueError(f"unknown fixture {name!r}")


def cmd_pnt_table(cfg: RunConfig) -> Table:
    """Rows ``(x, psi(x), psi(x)/x)`` from a sieve of size ``nmax``."""
    xs = cfg.x_list or [10.0**k for k in range(1, int(math.log10(cfg.nmax)) + 1)]
    if max(xs) > cfg.nmax + 1:
        raise DomainError(f"x up to {max(xs)} needs nmax >= {math.ceil(max(xs)) - 1}")
    lam = sieve_von_mangoldt(cfg.nmax)
    rows = []
    for x in xs:
        psi = chebyshev_psi(lam, x)
        rows.append({"x": x, "psi": psi, "psi_over_x": psi / x, "abs_dev": abs(psi / x - 1)})
    decades = [r for r in rows if r["x"] >= 1e4 and math.log10(r["x"]).is_integer()]
    devs = [r["abs_dev"] for r in decades]
    trend = all(b <= a for a, b in zip(devs, devs[1:]))
    return Table(
        "pnt-table",
        ["x", "psi", "psi_over_x", "abs_dev"],
        rows,
        "abs_dev",
        rows[-1]["abs_dev"],
        True,
        {"trend_nonincreasing_from_1e4": trend, "largest_x": rows[-1]["x"]},
    )


def _first_alpha(cfg: RunConfig) -> float:
    return cfg.alpha[0] if cfg.alpha else 2.0


def _rho_for(cfg: RunConfig, fixture: str, alpha: float) -> ExpDecayStepFunction:
    return ExpDecayStepFunction.from_chi(_chi_for(fixture, cfg.nmax), alpha)


def cmd_tauberian_check(cfg: RunConfig) -> Table:
    """``L*_rho(s)`` against ``s L_rho(s)`` over a grid of ``s``."""
    fixture = cfg.fixture or "lambda"
    alpha = _first_alpha(cfg)
    rho = _rho_for(cfg, fixture, alpha)
    sigmas = cfg.sigma_grid or list(np.linspace(0.25, 4.0, 9))
    ts = cfg.t_grid or list(np.linspace(-20.0, 20.0, 9))
    points = [(float(sg), float(t)) for sg in sigmas for t in ts]

    def row(p):
        sg, t = p
        s = complex(sg, t)
        base = {"sigma": sg, "t": t}
        try:
            lhs = laplace_stieltjes(rho, s)
            rhs_l = laplace(rho, s)
        except (PoleProximityError, DomainError):
            return {**base, "skipped": True}
        rhs = s * rhs_l.value
        diff = abs(lhs.value - rhs)
        bound = IDENTITY_SLACK + lhs.error_estimate + abs(s) * rhs_l.error_estimate
        return {
            **base,
            "lhs_re": lhs.value.real,
            "lhs_im": lhs.value.imag,
            "rhs_re": rhs.real,
            "rhs_im": rhs.imag,
            "abs_diff": diff,
            "bound": bound,
            "within": diff < bound,
            "skipped": False,
        }

    rows = _map_rows(row, points)
    done = [r for r in rows if not r["skipped"]]
    return Table(
        "tauberian-check",
        ["sigma", "t", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "bound", "within", "skipped"],
        rows,
        "abs_diff",
        _max(r["abs_diff"] for r in done),
        all(r["within"] for r in done),
        {"fixture": fixture, "alpha": alpha, "N": rho.chi.N, "skipped": len(rows) - len(done)},
    )


def cmd_dirichlet_zeta(cfg: RunConfig) -> Table:
    """Dirichlet partial sums of von Mangoldt against ``-zeta'/zeta``."""
    lam = sieve_von_mangoldt(cfg.nmax)
    sigmas = cfg.sigma_grid or [1.5, 2.0, 3.0]
    ts = cfg.t_grid or [0.0]
    points = [(float(sg), float(t)) for sg in sigmas for t in ts]

    def row(p):
        sg, t = p
        base = {"sigma": sg, "t": t, "N": lam.N}
        if sg <= 1:
            return {**base, "rejected": True}
        s = complex(sg, t)
        d = dirichlet_eval(lam, s)
        ld = zmod.log_deriv(s)
        diff = abs(d.value - ld.value)
        return {
            **base,
            "dirichlet_partial_re": d.value.real,
            "dirichlet_partial_im": d.value.imag,
            "log_deriv_re": ld.value.real,
            "log_deriv_im": ld.value.imag,
            "tail_bound": d.error_estimate,
            "abs_diff": diff,
            "consistent": diff <= d.error_estimate + ld.error_estimate,
            "rejected": False,
        }

    rows = _map_rows(row, points)
    done = [r for r in rows if not r["rejected"]]
    return Table(
        "dirichlet-zeta",
        [
            "sigma",
            "t",
            "N",
            "dirichlet_partial_re",
            "dirichlet_partial_im",
            "log_deriv_re",
            "log_deriv_im",
            "tail_bound",
            "abs_diff",
            "consistent",
            "rejected",
        ],
        rows,
        "abs_diff",
        _max(r["abs_diff"] for r in done),
        all(r["consistent"] for r in done),
        {"rejected": len(rows) - len(done)},
    )


def cmd_tv_growth(cfg: RunConfig) -> Table:
    """Exact total variation of ``rho_Lambda`` as ``X`` grows, per ``alpha``.

    ``--x-list`` gives ``X`` on the logarithmic scale. For ``alpha > 1`` the
    values approach ``2 (-zeta'/zeta)(alpha)``; for ``alpha <= 1`` they grow.
    """
    alphas = cfg.alpha or [1.0, 1.5, 2.0]
    lam = sieve_von_mangoldt(cfg.nmax)
    upper = math.log(cfg.nmax + 1)
    Xs = cfg.x_list or [math.log(10.0**k) for k in range(3, int(math.log10(cfg.nmax)) + 1)]
    rows = []
    for a in alphas:
        rho = ExpDecayStepFunction.from_chi(lam, a)
        limit = 2 * zmod.log_deriv(a).value.real if a > 1 else None
        for X in Xs:
            if X > upper:
                raise DomainError(f"X={X} beyond log(nmax + 1)")
            T = total_variation_exact(rho, X)
            rows.append(
                {
                    "alpha": a,
                    "X": X,
                    "T_rho_exact": T,
                    "bound_2R": 2 * rho.total_rise(X),
                    "limit": limit,
                    "abs_gap": None if limit is None else abs(T - limit),
                }
            )
    last = {}
    for r in rows:
        last[r["alpha"]] = r
    growth = {}
    for a in alphas:
        series = [r["T_rho_exact"] for r in rows if r["alpha"] == a]
        if a <= 1 and len(series) >= 2 and series[0] > 0:
            growth[repr(a)] = series[-1] / series[0]
    return Table(
        "tv-growth",
        ["alpha", "X", "T_rho_exact", "bound_2R", "limit", "abs_gap"],
        rows,
        "abs_gap",
        _max(r["abs_gap"] for r in last.values()),
        True,
        {"growth_ratio_last_over_first": growth},
    )


def _log_deriv_shifted(alpha: float) -> Callable[[complex], complex]:
    def fn(s: complex) -> complex:
        w = s + alpha
        return zmod.log_deriv(w).value / w

    return fn


def cmd_residue(cfg: RunConfig) -> Table:
    """Contour residue of ``-zeta'(s+a) / ((s+a) zeta(s+a))`` at ``s = 1 - a``.

    The real-axis column is ``h * L(1 - a + h)`` with ``h = 1e-6`` using the
    closed form of the transform.
    """
    alphas = cfg.alpha or [1.5, 2.0]
    rows = []
    for a in alphas:
        if a <= 1:
            raise DomainError("residue probe needs alpha > 1")
        fn = _log_deriv_shifted(a)
        probe = zmod.residue_probe(fn, 1 - a, 0.25, nodes=64)
        limit = LIMIT_STEP * fn(1 - a + LIMIT_STEP)
        rows.append(
            {
                "alpha": a,
                "probe_residue_re": probe.real,
                "probe_residue_im": probe.imag,
                "limit_probe": limit.real,
                "abs_dev": abs(probe - 1),
            }
        )
    control = zmod.residue_probe(lambda s: 1 / (s - 1), 1, 0.5, nodes=64)
    rows.append(
        {
            "alpha": "control",
            "probe_residue_re": control.real,
            "probe_residue_im": control.imag,
            "limit_probe": None,
            "abs_dev": abs(control - 1),
        }
    )
    dev = _max(r["abs_dev"] for r in rows)
    return Table(
        "residue",
        ["alpha", "probe_residue_re", "probe_residue_im", "limit_probe", "abs_dev"],
        rows,
        "abs_dev",
        dev,
        dev < RESIDUE_TOL,
        {"tolerance": RESIDUE_TOL},
    )


def transform_pole(fixture: str, alpha: float):
    """Residue and pole location of ``L_rho`` near ``1 - alpha`` via contour probes."""
    if fixture == "one":
        def fn(s):
            w = s + alpha
            return zmod.zeta(w).value / w
    else:
        fn = _log_deriv_shifted(alpha)
    # centre deliberately offset from the expected pole
    centre = 1 - alpha + 0.1
    residue = zmod.residue_probe(fn, centre, 0.4, nodes=64)
    location = zmod.pole_location_probe(fn, centre, 0.4, nodes=64)
    return residue, location


def cmd_power_law_demo(cfg: RunConfig) -> Table:
    """``f(x)`` against the predicted ``Res * x^(alpha + beta)``."""
    fixture = cfg.fixture or "one"
    alpha = _first_alpha(cfg)
    chi = _chi_for(fixture, cfg.nmax)
    residue, location = transform_pole(fixture, alpha)
    exponent = alpha + location.real
    xs = cfg.x_list or [10.0**k for k in range(1, int(math.log10(cfg.nmax)) + 1)]
    rows = []
    for x in xs:
        f = chi.partial_sum(x)
        predicted = residue.real * x**exponent
        rows.append({"x": x, "f": f, "predicted": predicted, "ratio": f / predicted, "abs_dev": abs(f / predicted - 1)})
    return Table(
        "theorem2-demo",
        ["x", "f", "predicted", "ratio", "abs_dev"],
        rows,
        "abs_dev",
        rows[-1]["abs_dev"],
        True,
        {
            "fixture": fixture,
            "alpha": alpha,
            "residue": residue.real,
            "pole_location": location.real,
            "predicted_exponent": exponent,
        },
    )


def cmd_lemma_audit(cfg: RunConfig) -> Table:
    """Exact total variation beside the falls-only bound and the corrected bound."""
    registered = [
        ("single_jump", ExpDecayStepFunction.from_chi(single_jump_chi(), 1.0), [0.5, 2.0]),
        (
            "lambda",
            ExpDecayStepFunction.from_chi(sieve_von_mangoldt(cfg.nmax), _first_alpha(cfg)),
            [math.log(1e3), math.log(1e4)],
        ),
    ]
    rows = []
    for name, rho, default_X in registered:
        for X in cfg.x_list or default_X:
            if X > rho.upper:
                continue
            chk = lemma_bound_check(rho, X)
            rows.append(
                {
                    "fixture": name,
                    "alpha": rho.alpha,
                    "X": X,
                    "T_exact": chk.lhs,
                    "stated_bound": chk.rhs,
                    "corrected_bound": chk.corrected_bound,
                    "stated_bound_holds": chk.holds,
                    "excess": chk.lhs - chk.rhs,
                }
            )
    return Table(
        "lemma-audit",
        ["fixture", "alpha", "X", "T_exact", "stated_bound", "corrected_bound", "stated_bound_holds", "excess"],
        rows,
        "excess",
        _max(r["excess"] for r in rows),
        True,
        {"violations": sum(not r["stated_bound_holds"] for r in rows)},
    )


DISPATCH: Dict[str, Callable[[RunConfig], Table]] = {
    "pnt-table": cmd_pnt_table,
    "tauberian-check": cmd_tauberian_check,
    "dirichlet-zeta": cmd_dirichlet_zeta,
    "tv-growth": cmd_tv_growth,
    "residue": cmd_residue,
    "theorem2-demo": cmd_power_law_demo,
    "lemma-audit": cmd_lemma_audit,
}


def run(cfg: RunConfig) -> Table:
    return DISPATCH[cfg.command](cfg)


def parse_range(text: str) -> List[float]:
    """``a:b:step`` (inclusive of ``b``) or a single number."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:step, got {text!r}")
    a, b, step = map(float, parts)
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [a + i * step for i in range(n)]


def parse_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tauber-lab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--alpha", type=parse_list, default=None, help="damping exponent(s), comma separated")
    p.add_argument("--nmax", type=int, default=10**6, help="sieve / truncation bound (<= 1e8)")
    p.add_argument("--sigma-range", type=parse_range, default=None, metavar="A:B:STEP")
    p.add_argument("--t-range", type=parse_range, default=None, metavar="A:B:STEP")
    p.add_argument("--x-list", type=parse_list, default=None, help="comma separated x (or X for tv-growth/lemma-audit)")
    p.add_argument("--fixture", choices=("lambda", "one", "single_jump", "empty"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        alpha=ns.alpha,
        nmax=ns.nmax,
        sigma_grid=ns.sigma_range,
        t_grid=ns.t_range,
        x_list=ns.x_list,
        fixture=ns.fixture,
        seed=ns.seed,
        tol=ns.tol,
        format=ns.format,
        out=ns.out,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        table = run(cfg)
    except (ValueError, TauberLabError) as exc:
        print(f"tauber-lab: {exc}", file=sys.stderr)
        return 2
    text = render(table, cfg.format)
    try:
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"tauber-lab: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0 if table.ok else 1


if __name__ == "__main__":
    sys.exit(main())
