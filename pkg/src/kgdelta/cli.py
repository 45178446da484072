"""Command-line frontend: spectrum queries, region scans, simulation, validation.

Four subcommands:

* ``spectrum``  single-point spectral report (JSON or human readable);
* ``scan``      region map of the ``(omega, kappa)`` plane as CSV;
* ``simulate``  time-domain run with verdict/rate comparison;
* ``validate``  cross-oracle checks between the closed forms, the cubic
  pipeline, and the dense axis scans.

Exit codes: 0 success, 1 validation failure, 2 invalid parameters,
3 simulation aborted by the blow-up guard.  Scans are cell-parallel with a
deterministic gather order, so output files are byte-identical for any
parallelism degree (``KGDELTA_THREADS`` caps the worker count).
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .dispersion import (
    CubicData,
    D_eval,
    PHYSICAL,
    SpectrumReport,
    classify_point_spectrum,
    collision_exponent_frequency,
    cubic_data,
    oracle_mismatches,
    residual_scale,
    virtual_level_exponent,
    virtual_level_frequency,
)
from .lattice import DefectLattice, Grid
from .model import ModelParams, PowerLaw, nonlinearity_from_config
from .spectra import Verdict, stability_verdict

__all__ = [
    "RegionCode",
    "ScanConfig",
    "region_code",
    "region_code_from_report",
    "scan_rows",
    "write_scan_csv",
    "run_validation",
    "main",
]


class RegionCode(enum.Enum):
    """Qualitative content of the point spectrum at one parameter cell."""

    ZERO_ONLY = "ZeroOnly"
    REAL_PAIR = "RealPair"
    IMAGINARY_PAIR = "ImaginaryPair"
    EMBEDDED_PAIR = "EmbeddedPair"
    KOLOKOLOV_CRITICAL = "KolokolovCritical"
    VIRTUAL_LEVEL_BOUNDARY = "VirtualLevelBoundary"


def region_code(m: float, omega: float, kappa: float, band: float = 1e-6) -> RegionCode:
    """Analytic region predicate, straight from the curve inequalities.

    Independent of the cubic pipeline: only ``kappa`` against ``omega^2/m^2``,
    against the virtual-level exponent, and the special line ``kappa = 0``
    enter.  ``band`` is the half-width of the boundary tolerance bands, which
    are reported as explicit boundary codes rather than folded into a
    neighboring region.
    """
    if abs(kappa) <= band:
        if abs(omega) <= band:
            return RegionCode.KOLOKOLOV_CRITICAL
        return (
            RegionCode.EMBEDDED_PAIR
            if abs(omega) >= m / 3.0
            else RegionCode.IMAGINARY_PAIR
        )
    kol_defect = kappa - (omega / m) ** 2
    if abs(kol_defect) <= band:
        return RegionCode.KOLOKOLOV_CRITICAL
    kv = virtual_level_exponent(m, omega)
    if -0.5 - band <= kappa < 1.0 / math.sqrt(2.0) and abs(kappa - kv) <= band:
        return RegionCode.VIRTUAL_LEVEL_BOUNDARY
    if kol_defect > 0.0:
        return RegionCode.REAL_PAIR
    if kappa > kv:
        return RegionCode.IMAGINARY_PAIR
    return RegionCode.ZERO_ONLY


def region_code_from_report(report: SpectrumReport) -> RegionCode:
    """Map a full spectral report onto its region code."""
    if "kolokolov-critical" in report.flags:
        return RegionCode.KOLOKOLOV_CRITICAL
    if any(e.embedded for e in report.points.entries):
        return RegionCode.EMBEDDED_PAIR
    if "virtual-level" in report.flags:
        return RegionCode.VIRTUAL_LEVEL_BOUNDARY
    nonzero = report.nonzero_values()
    if any(abs(z.imag) <= 1e-8 * abs(z) for z in nonzero):
        return RegionCode.REAL_PAIR
    if nonzero:
        return RegionCode.IMAGINARY_PAIR
    return RegionCode.ZERO_ONLY


@dataclass(frozen=True)
class ScanConfig:
    """Grid and tolerances of a region scan."""

    m: float
    omega_min: float
    omega_max: float
    omega_step: float
    kappa_min: float
    kappa_max: float
    kappa_step: float
    band: float = 1e-6
    threads: int = 1

    def __post_init__(self) -> None:
        if self.omega_step <= 0.0 or self.kappa_step <= 0.0:
            raise ValueError("grid steps must be positive")
        if max(abs(self.omega_min), abs(self.omega_max)) >= self.m:
            raise ValueError("omega range must stay inside (-m, m)")

    def omegas(self) -> list[float]:
        return _grid_values(self.omega_min, self.omega_max, self.omega_step)

    def kappas(self) -> list[float]:
        return _grid_values(self.kappa_min, self.kappa_max, self.kappa_step)


def _grid_values(lo: float, hi: float, step: float) -> list[float]:
    n = int(round((hi - lo) / step)) + 1
    # snap to 12 decimals so decimal-specified grids hit the special lines
    # (kappa = 0 in particular) exactly instead of at float-noise offsets
    return [round(lo + i * step, 12) for i in range(n) if lo + i * step <= hi + 0.5 * step]


SCAN_COLUMNS = "omega,kappa,region_code,lambda_re,lambda_im,Delta,K_omega,T_kappa,Omega_kappa"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _scan_cell(m: float, omega: float, kappa: float, band: float) -> str:
    p = ModelParams(m=m, omega=omega, kappa=kappa)
    report = classify_point_spectrum(p, boundary_tol=band)
    code = region_code_from_report(report)
    lam = 0j
    nonzero = [z for z in report.nonzero_values() if z.real > 0 or (z.real == 0 and z.imag > 0)]
    if nonzero:
        lam = max(nonzero, key=abs)
    elif report.virtual_levels:
        lam = max(report.virtual_levels, key=lambda z: z.imag)
    cd = cubic_data(p)
    fields = (
        _fmt(omega),
        _fmt(kappa),
        code.value,
        _fmt(lam.real),
        _fmt(lam.imag),
        _fmt(cd.delta),
        _fmt(virtual_level_exponent(m, omega)),
        _fmt(virtual_level_frequency(m, kappa)),
        _fmt(collision_exponent_frequency(m, kappa)),
    )
    return ",".join(fields)


def _scan_row(args: tuple[float, float, tuple[float, ...], float]) -> list[str]:
    m, omega, kappas, band = args
    return [_scan_cell(m, omega, k, band) for k in kappas]


def scan_rows(cfg: ScanConfig) -> list[str]:
    """All CSV data lines of the scan, row-major in omega then kappa."""
    kappas = tuple(cfg.kappas())
    jobs = [(cfg.m, w, kappas, cfg.band) for w in cfg.omegas()]
    threads = max(1, cfg.threads)
    if threads == 1 or len(jobs) < 2:
        rows = [_scan_row(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    return [line for row in rows for line in row]


def write_scan_csv(cfg: ScanConfig, path: str) -> None:
    """Write the region map, via a temp file renamed on completion."""
    lines = scan_rows(cfg)
    # threads affect wall time only, never content; keep them out of the
    # header so output is byte-identical across parallelism degrees
    resolved = {k: v for k, v in asdict(cfg).items() if k != "threads"}
    header = "# kgdelta-scan schema=1 config=" + json.dumps(resolved, sort_keys=True)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".scan-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(header + "\n")
            fh.write(SCAN_COLUMNS + "\n")
            for line in lines:
                fh.write(line + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# validation suites
# ---------------------------------------------------------------------------


def _perturbed_data(p: ModelParams, q_offset: float) -> CubicData | None:
    if q_offset == 0.0:
        return None
    cd = cubic_data(p)
    q = cd.q + q_offset * (1.0 + abs(cd.q))
    return CubicData(c=cd.c, p=cd.p, q=q, delta=-4.0 * cd.p**3 - 27.0 * q * q)


def _suite_oracle(m: float, n: int, perturb_q: float) -> tuple[int, list[str]]:
    fails: list[str] = []
    checks = 0
    for w in np.linspace(-0.9 * m, 0.9 * m, n):
        for k in np.linspace(-1.9, 1.9, n):
            p = ModelParams(m=m, omega=round(float(w), 12), kappa=round(float(k), 12))
            checks += 1
            for msg in oracle_mismatches(p, data=_perturbed_data(p, perturb_q)):
                fails.append(f"(omega={p.omega:g}, kappa={p.kappa:g}) {msg}")
    return checks, fails


def _suite_closed_forms(m: float, n: int, perturb_q: float) -> tuple[int, list[str]]:
    from .dispersion import accepted_roots

    fails: list[str] = []
    for i in range(1, n + 1):
        k = -0.49 + (3.0 + 0.49) * i / n
        p = ModelParams(m=m, omega=0.0, kappa=k)
        want = 2.0 * m * (
            math.sqrt(k * (1.0 + k)) if k > 0 else 1j * math.sqrt(-k * (1.0 + k))
        )
        got = accepted_roots(p, data=_perturbed_data(p, perturb_q))
        hit = [z for z in got if abs(z - want) <= 1e-9 or abs(z + want) <= 1e-9]
        if len(got) != 2 or len(hit) != 2:
            fails.append(f"omega=0, kappa={k:g}: expected +-{want:g}, pipeline gave {got}")
    for i in range(1, n + 1):
        w = 0.95 * m * i / (n + 1)
        p = ModelParams(m=m, omega=round(w, 12), kappa=0.0)
        rep = classify_point_spectrum(p)
        vals = sorted(rep.nonzero_values(), key=lambda z: z.imag)
        ok = (
            len(vals) == 2
            and abs(vals[1] - 2j * w) <= 1e-9
            and abs(vals[0] + 2j * w) <= 1e-9
            and all(e.embedded == (abs(w) >= m / 3.0) for e in rep.points.entries if e.value != 0)
        )
        if not ok:
            fails.append(f"kappa=0, omega={w:g}: classifier returned {vals}")
    return 2 * n, fails


def _suite_identities(m: float, n: int) -> tuple[int, list[str]]:
    from .spectra import lambda_pm, scalar_eigenvalue

    fails: list[str] = []
    checks = 0
    for w in np.linspace(-0.9 * m, 0.9 * m, n):
        for k in np.linspace(-0.45, 2.0, n):
            p = ModelParams(m=m, omega=float(w), kappa=float(k))
            lam = lambda_pm(p)
            s = scalar_eigenvalue(p)
            checks += 1
            if lam is None or s is None:
                continue
            lo, hi = lam
            vieta_prod = abs(lo * hi - s) / (1.0 + abs(s))
            vieta_sum = abs(lo + hi - (s + w * w + 1.0)) / (1.0 + abs(s))
            if vieta_prod > 1e-12 or vieta_sum > 1e-12:
                fails.append(f"Vieta violated at omega={w:g}, kappa={k:g}")
            for z in (lo, hi):
                if abs(z - 1.0) > 1e-6:
                    moebius = z + z * w * w / (1.0 - z)
                    if abs(moebius - s) > 1e-10 * (1.0 + abs(s)):
                        fails.append(f"level relation violated at omega={w:g}, kappa={k:g}")
    for i in range(n):
        k = -0.5 + (1.0 / math.sqrt(2.0) + 0.5) * i / n
        t = virtual_level_frequency(m, k)
        back = virtual_level_exponent(m, t)
        checks += 1
        if abs(back - k) > 1e-10:
            fails.append(f"curve inverse violated at kappa={k:g}: K(T)={back:.12g}")
    return checks, fails


def _suite_virtual_levels(m: float, n: int) -> tuple[int, list[str]]:
    fails: list[str] = []
    for i in range(1, n + 1):
        k = -0.49 + (0.70 + 0.49) * i / n
        t = virtual_level_frequency(m, k)
        p = ModelParams(m=m, omega=t, kappa=k)
        lam = 1j * (m - t)
        resid = abs(D_eval(p, lam, PHYSICAL))
        scale = residual_scale(p, lam, PHYSICAL)
        if resid > 1e-10 * scale:
            fails.append(f"kappa={k:g}: |D| = {resid:.3e} > 1e-10 * {scale:.3e}")
    return n, fails


def run_validation(
    m: float = 1.0,
    grid: int = 9,
    sweep: int = 50,
    perturb_q: float = 0.0,
    at: tuple[float, float, float] | None = None,
    out=None,
) -> int:
    """Run the cross-validation suites; returns the process exit code."""
    if out is None:
        out = sys.stdout
    if at is not None:
        return _validate_at(at, out)
    suites = [
        ("oracle-root-agreement", lambda: _suite_oracle(m, grid, perturb_q)),
        ("closed-form-special-cases", lambda: _suite_closed_forms(m, sweep, perturb_q)),
        ("algebraic-identities", lambda: _suite_identities(m, max(grid, 10))),
        ("virtual-level-residuals", lambda: _suite_virtual_levels(m, 20)),
    ]
    total_fail = 0
    for name, fn in suites:
        checks, fails = fn()
        total_fail += len(fails)
        status = "PASS" if not fails else "FAIL"
        print(f"{name}: {status} ({checks} checks, {len(fails)} failed)", file=out)
        for msg in fails[:10]:
            print(f"  {msg}", file=out)
        if len(fails) > 10:
            print(f"  ... and {len(fails) - 10} more", file=out)
    print(f"validation {'passed' if total_fail == 0 else 'FAILED'}", file=out)
    return 0 if total_fail == 0 else 1


def _validate_at(at: tuple[float, float, float], out) -> int:
    m, w, k = at
    p = ModelParams(m=m, omega=w, kappa=k)
    failures = oracle_mismatches(p)
    for msg in failures:
        print(f"  {msg}", file=out)
    t = virtual_level_frequency(m, k)
    if not math.isnan(t) and abs(abs(w) - t) <= 1e-6:
        lam = 1j * (m - abs(w))
        resid = abs(D_eval(p, lam, PHYSICAL))
        scale = residual_scale(p, lam, PHYSICAL)
        print(
            f"virtual-level residual |D({lam.imag:g}i)| = {resid:.3e} "
            f"(scale {scale:.3e})",
            file=out,
        )
        if resid > 1e-10 * scale:
            failures.append("virtual-level residual out of tolerance")
    report = classify_point_spectrum(p)
    print(f"point spectrum: {[e.to_jsonable() for e in report.points.entries]}", file=out)
    print("PASS" if not failures else "FAIL", file=out)
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# subcommand drivers
# ---------------------------------------------------------------------------


def _spectrum_text(report: SpectrumReport) -> str:
    p = report.params
    gap = p.m - abs(p.omega)
    lines = [
        f"m = {p.m:g}, omega = {p.omega:g}, kappa = {p.kappa:g}",
        f"essential spectrum (imaginary parts): gap (-{gap:g}, {gap:g}), "
        f"thresholds {report.ess.thresholds}",
        f"zero eigenvalue: geometric {report.jordan_at_zero.geometric}, "
        f"algebraic {report.jordan_at_zero.algebraic}",
    ]
    for e in report.points.entries:
        if e.value == 0:
            continue
        tag = " (embedded)" if e.embedded else ""
        lines.append(f"eigenvalue {e.value:.9g}{tag}")
    for v in report.virtual_levels:
        lines.append(f"virtual level at {v:.9g}")
    if report.flags:
        lines.append("flags: " + ", ".join(report.flags))
    lines.append(f"orbital stability: {report.verdict.value}")
    return "\n".join(lines)


def _cmd_spectrum(args: argparse.Namespace) -> int:
    p = ModelParams(m=args.mass, omega=args.omega, kappa=args.kappa)
    report = classify_point_spectrum(p)
    if args.format == "json":
        print(report.to_json(verbose=args.verbose))
    else:
        print(_spectrum_text(report))
        if args.verbose:
            for c in report.candidates:
                print(f"  candidate {c.to_jsonable()}")
    return 0


def _resolve_threads(requested: int | None) -> int:
    # KGDELTA_THREADS is a hard cap on top of whatever was requested
    threads = requested if requested is not None else min(4, os.cpu_count() or 1)
    env = os.environ.get("KGDELTA_THREADS")
    if env:
        threads = min(threads, max(1, int(env)))
    return max(1, threads)


def _cmd_scan(args: argparse.Namespace) -> int:
    cfg = ScanConfig(
        m=args.mass,
        omega_min=args.omega_min,
        omega_max=args.omega_max,
        omega_step=args.omega_step,
        kappa_min=args.kappa_min,
        kappa_max=args.kappa_max,
        kappa_step=args.kappa_step,
        band=args.band,
        threads=_resolve_threads(args.threads),
    )
    write_scan_csv(cfg, args.output)
    n = len(cfg.omegas()) * len(cfg.kappas())
    print(f"wrote {n} cells to {args.output}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    p = ModelParams(m=args.mass, omega=args.omega, kappa=args.kappa)
    if args.nonlinearity:
        nl = nonlinearity_from_config(json.loads(args.nonlinearity))
    else:
        nl = PowerLaw(g=args.coupling, kappa=args.kappa)
    grid = Grid.for_run(p, horizon=args.horizon, target_h=args.grid_h, half_length=args.half_length)
    sim = DefectLattice(nl, p, grid)
    report = sim.run_experiment(
        epsilon=args.eps,
        horizon=args.horizon,
        dt=args.dt,
        seed=args.seed,
        record_every=args.record_every,
    )
    csv_path = args.output + ".csv"
    json_path = args.output + ".json"
    report.write_csv(csv_path)

    predicted = stability_verdict(p)
    spec = classify_point_spectrum(p)
    predicted_rate = max(
        (z.real for z in spec.nonzero_values() if z.real > 0), default=None
    )
    d = report.orbital_distance
    initial = float(d[0])
    if initial > 0.0:
        observed = "growing" if float(np.max(d)) > 100.0 * initial else "bounded"
    else:
        observed = "stationary" if float(np.max(d)) <= 1e-9 else "drifting"
    agreement = (predicted is Verdict.STABLE) == (observed in ("bounded", "stationary"))

    summary = report.summary()
    summary.update(
        {
            "verdict_predicted": predicted.value,
            "observed": observed,
            "verdict_agreement": agreement,
            "predicted_rate": predicted_rate,
            "series_csv": os.path.basename(csv_path),
        }
    )
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    print(f"predicted: {predicted.value}; observed: {observed}; agreement: {agreement}")
    if report.fitted_rate is not None:
        pr = f"{predicted_rate:.6g}" if predicted_rate is not None else "n/a"
        print(f"fitted growth rate {report.fitted_rate:.6g} vs predicted {pr}")
    print(f"energy drift {report.energy_drift:.3e}, charge drift {report.charge_drift:.3e}")
    print(f"wrote {csv_path} and {json_path}")
    return 3 if report.aborted else 0


def _cmd_validate(args: argparse.Namespace) -> int:
    at = None
    if args.at is not None:
        parts = [float(s) for s in args.at.split(",")]
        if len(parts) != 3:
            raise ValueError("--at expects 'm,omega,kappa'")
        at = (parts[0], parts[1], parts[2])
    return run_validation(
        m=args.mass, grid=args.grid, sweep=args.sweep, perturb_q=args.perturb_q, at=at
    )


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kgdelta", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="spectral report at one parameter point")
    sp.add_argument("-m", "--mass", type=float, required=True)
    sp.add_argument("-w", "--omega", type=float, required=True)
    sp.add_argument("-k", "--kappa", type=float, required=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--verbose", action="store_true", help="include the root-candidate audit trail")
    sp.set_defaults(func=_cmd_spectrum)

    sc = sub.add_parser("scan", help="region map of the (omega, kappa) plane")
    sc.add_argument("-m", "--mass", type=float, default=1.0)
    sc.add_argument("--omega-min", type=float, required=True)
    sc.add_argument("--omega-max", type=float, required=True)
    sc.add_argument("--omega-step", type=float, required=True)
    sc.add_argument("--kappa-min", type=float, required=True)
    sc.add_argument("--kappa-max", type=float, required=True)
    sc.add_argument("--kappa-step", type=float, required=True)
    sc.add_argument("-o", "--output", required=True)
    sc.add_argument("--band", type=float, default=1e-6, help="boundary tolerance band")
    sc.add_argument("--threads", type=int, default=None)
    sc.set_defaults(func=_cmd_scan)

    sm = sub.add_parser("simulate", help="time-domain experiment on the lattice")
    sm.add_argument("-m", "--mass", type=float, required=True)
    sm.add_argument("-w", "--omega", type=float, required=True)
    sm.add_argument("-k", "--kappa", type=float, required=True)
    sm.add_argument("-g", "--coupling", type=float, default=1.0)
    sm.add_argument(
        "--nonlinearity",
        type=str,
        default=None,
        help='coupling config overriding -g, e.g. \'{"type": "power", "g": 2.0, "kappa": 1.0}\''
        " (for a table coupling, -k must still state the effective exponent)",
    )
    sm.add_argument("--eps", type=float, default=1e-6, help="perturbation energy norm")
    sm.add_argument("-T", "--horizon", type=float, required=True)
    sm.add_argument("--dt", type=float, default=None)
    sm.add_argument("--grid-h", type=float, default=None)
    sm.add_argument("-L", "--half-length", type=float, default=None)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--record-every", type=int, default=1)
    sm.add_argument("-o", "--output", default="run", help="output path prefix")
    sm.set_defaults(func=_cmd_simulate)

    va = sub.add_parser("validate", help="cross-oracle validation suites")
    va.add_argument("-m", "--mass", type=float, default=1.0)
    va.add_argument("--grid", type=int, default=9, help="oracle grid size per axis")
    va.add_argument("--sweep", type=int, default=50, help="points per closed-form sweep")
    va.add_argument("--perturb-q", type=float, default=0.0, help="fault injection (negative control)")
    va.add_argument("--at", type=str, default=None, help="single point 'm,omega,kappa'")
    va.set_defaults(func=_cmd_validate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
