"""Command-line front end.

Subcommands cover the three solution routes plus the analysis helpers, and a
set of named presets regenerates every reference data set (fig2 ... fig9,
sec5) as deterministic CSV.  Configuration comes from flat key=value files
with command-line flags taking precedence; identical inputs always produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import classify, dimensionless_chi, fit_decay, mirror_chirp
from .closedform import gamma_infinity
from .dynamics import IntegratorConfig, evolve, init_state
from .errors import SolverError, ValidationError
from .model import ModelParams, build_grid, rabi_frequency, xi
from .spectra import numeric_spectrum, spectrum_closure
from .volterra import VolterraConfig, solve_volterra

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

# Sweep fits and spectrum snapshots run at a slightly relaxed tolerance: the
# quantities extracted from them carry percent-level tolerances, and the
# relaxation keeps every preset comfortably inside a desk-scale time budget.
SWEEP_REL_TOL = 1e-7
SPECTRUM_REL_TOL = 1e-7
FIT_WINDOW = (0.1, 1.0)
FIT_T_END = 1.5

_OMEGA_D8 = float(np.sqrt(255.0))

# Laboratory constants for the sec5 case table: an optical transition at
# omega0/2pi = 3.5e14 Hz behind a 1 cm cavity whose outer mirror moves at
# the tabulated speed (negative rate = cavity shrinking = upward chirp).
_SEC5_OMEGA0_SI = 2.0 * np.pi * 3.5e14
_SEC5_LENGTH_SI = 0.01

PRESETS: dict[str, dict] = {
    "fig2": {
        "command": "spectrum",
        "d": 8.0,
        "chi": 0.0,
        "times": [
            np.pi / _OMEGA_D8,
            4.0 * np.pi / _OMEGA_D8,
            5.0 * np.pi / _OMEGA_D8,
            8.0 * np.pi / _OMEGA_D8,
        ],
    },
    "fig4": {
        "command": "simulate",
        "d": 8.0,
        "chi": 400.0,
        "t_end": 1.0,
        "with_static": True,
        "with_markov": True,
    },
    "fig5": {
        "command": "gamma-inf",
        "d_list": [0.5, 1.0, 2.0],
        "chi_min": 1e-3,
        "chi_max": 1e3,
        "chi_points": 61,
        "fit_d": 2.0,
        "fit_chis": [20.0, 60.0, 200.0],
    },
    "fig6": {"command": "simulate", "d": 8.0, "chi": 20.0, "t_end": 2.0, "with_static": True},
    "fig7": {"command": "simulate", "d": 8.0, "chi": 8.4, "t_end": 8.0, "with_static": True},
    "fig8": {"command": "simulate", "d": 8.0, "chi": 2.0, "t_end": 1.0, "with_static": True},
    "fig9": {"command": "spectrum", "d": 8.0, "chi": 8.4, "times": [3.81, 4.00, 7.60, 7.79]},
    "sec5": {"command": "classify"},
}
PRESET_ORDER = ["fig2", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "sec5"]


def _parse_bool(text: str) -> bool:
    v = text.strip().lower()
    if v in {"1", "true", "yes", "on"}:
        return True
    if v in {"0", "false", "no", "off"}:
        return False
    raise ValidationError(f"cannot interpret {text!r} as a boolean")


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for ln_no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{ln_no}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


class _Options:
    """Precedence stack: command-line flags beat config-file entries beat
    preset values beat built-in defaults."""

    def __init__(self, ns: argparse.Namespace, allowed: set[str]):
        self._ns = ns
        self._cfg = _read_config(ns.config) if getattr(ns, "config", None) else {}
        preset_name = getattr(ns, "preset", None)
        self._preset = PRESETS[preset_name] if preset_name else {}
        unknown = set(self._cfg) - allowed
        if unknown:
            raise ValidationError(
                f"unknown config keys for this command: {', '.join(sorted(unknown))}"
            )

    def get(self, key: str, cast=float, default=None, required: bool = False):
        value = getattr(self._ns, key, None)
        if value is None:
            if key in self._cfg:
                value = self._cfg[key]
            elif key in self._preset:
                value = self._preset[key]
        if value is None:
            if required:
                raise ValidationError(f"missing required parameter: {key}")
            return default
        if isinstance(value, str) and cast is not str:
            value = cast(value)
        return value


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return f"{float(value):.16e}"


def _write_table(out: str | None, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _emit_line(out: str | None, line: str) -> None:
    if out is None:
        print(line)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(line + "\n")


def _max_workers(n_jobs: int) -> int:
    env = os.environ.get("CHIRPED_BATH_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_jobs))


# ---------------------------------------------------------------- cores


def simulate_table(
    d: float,
    chi: float,
    t_end: float,
    modes_per_gamma: float = 10.0,
    rel_tol: float = 1e-8,
    sample_every: float = 1e-3,
    with_static: bool = False,
    with_markov: bool = False,
):
    """Trajectory columns for one parameter point, optionally with a chi=0
    reference run on the same sample times and the flat-rate overlay."""
    p = ModelParams(d=d, chi=chi)
    grid = build_grid(p, t_end, modes_per_gamma)
    cfg = IntegratorConfig(rel_tol=rel_tol, sample_every=sample_every)
    traj = evolve(init_state(grid), grid, p, cfg, t_end)
    header = ["t", "pa", "norm"]
    columns = [traj.times, traj.pa, traj.norms]
    if with_static:
        p0 = ModelParams(d=d, chi=0.0)
        grid0 = build_grid(p0, t_end, modes_per_gamma)
        traj0 = evolve(init_state(grid0), grid0, p0, cfg, t_end, sample_times=traj.times)
        header += ["pa_static", "norm_static"]
        columns += [traj0.pa, traj0.norms]
    if with_markov:
        header.append("pa_markov")
        columns.append(np.exp(-gamma_infinity(p) * traj.times))
    return header, list(zip(*columns))


def volterra_table(d: float, chi: float, t_end: float, steps: int = 1024):
    p = ModelParams(d=d, chi=chi)
    sol = solve_volterra(p, t_end, VolterraConfig(steps=steps))
    header = ["t", "pa"]
    return header, list(zip(sol.times, sol.pa)), sol.richardson_error


def spectrum_table(
    d: float,
    chi: float,
    times: list[float],
    modes_per_gamma: float = 10.0,
    rel_tol: float = SPECTRUM_REL_TOL,
):
    """Long-format spectrum snapshots (t, detuning_now, S, closure)."""
    if not times:
        raise ValidationError("at least one snapshot time is required")
    snap = np.asarray(sorted(set(float(t) for t in times)))
    if snap[0] <= 0:
        raise ValidationError("snapshot times must be positive")
    p = ModelParams(d=d, chi=chi)
    t_end = float(snap[-1])
    grid = build_grid(p, t_end, modes_per_gamma)
    cfg = IntegratorConfig(rel_tol=rel_tol)
    traj = evolve(
        init_state(grid), grid, p, cfg, t_end, sample_times=snap, store_states=True
    )
    rows = []
    for state in traj.states:
        series = numeric_spectrum(state, grid, p)
        closure = spectrum_closure(series, state.c_a)
        rows.extend(
            (state.t, x, s, closure)
            for x, s in zip(series.detunings_now, series.values)
        )
    return ["t", "detuning_now", "S", "closure"], rows


def gamma_inf_table(
    d_list: list[float],
    chi_min: float = 1e-3,
    chi_max: float = 1e3,
    chi_points: int = 61,
    fit_d: float | None = None,
    fit_chis: list[float] | None = None,
    fit_t_end: float = FIT_T_END,
    rel_tol: float = SWEEP_REL_TOL,
    modes_per_gamma: float = 10.0,
):
    """Analytic flat-rate sweep, with numerically fitted rates at selected
    points; rows are sorted by (d, chi) regardless of completion order."""
    if not d_list:
        raise ValidationError("d_list must not be empty")
    if chi_points < 2 or not 0 < chi_min < chi_max:
        raise ValidationError("need chi_points >= 2 and 0 < chi_min < chi_max")
    entries: dict[tuple[float, float], list] = {}
    for d in d_list:
        for chi in np.geomspace(chi_min, chi_max, chi_points):
            key = (float(d), float(chi))
            entries[key] = [gamma_infinity(ModelParams(d=key[0], chi=key[1])), None]

    def fitted_rate(chi: float) -> float:
        p = ModelParams(d=fit_d, chi=chi)
        grid = build_grid(p, fit_t_end, modes_per_gamma)
        traj = evolve(init_state(grid), grid, p, IntegratorConfig(rel_tol=rel_tol), fit_t_end)
        return fit_decay(traj, FIT_WINDOW).rate

    if fit_chis:
        if fit_d is None:
            raise ValidationError("fit_chis given without fit_d")
        with ThreadPoolExecutor(max_workers=_max_workers(len(fit_chis))) as pool:
            rates = list(pool.map(fitted_rate, fit_chis))
        for chi, rate in zip(fit_chis, rates):
            key = (float(fit_d), float(chi))
            if key not in entries:
                entries[key] = [gamma_infinity(ModelParams(d=key[0], chi=key[1])), None]
            entries[key][1] = rate

    rows = []
    for (d, chi) in sorted(entries):
        analytic, fitted = entries[(d, chi)]
        try:
            xi_cell = xi(ModelParams(d=d, chi=chi))
        except ValidationError:
            xi_cell = ""
        rows.append((d, chi, analytic, "" if fitted is None else fitted, xi_cell))
    return ["d", "chi", "gamma_inf_analytic", "gamma_inf_fitted", "xi"], rows


def sec5_table():
    """Laboratory case table: mirror speeds mapped to chirp rates, regime
    labels, and flat decay rates for the optical-cavity estimates."""
    cases = [
        ("fast-mirror-strong", 34.0 / 4.1, 2.0 * np.pi * 4.1e6, 0.65),
        ("fast-mirror-strong-narrow-line", 34.0 / 0.41, 2.0 * np.pi * 0.41e6, 0.65),
        ("fast-mirror-weak", 0.2, 2.0 * np.pi * 0.41e6, 0.65),
        ("slow-mirror-strong", 34.0 / 4.1, 2.0 * np.pi * 4.1e6, 0.10),
    ]
    rows = []
    for name, d, gamma_si, speed in cases:
        chi_si = mirror_chirp(_SEC5_OMEGA0_SI, _SEC5_LENGTH_SI, -speed)
        chi = dimensionless_chi(chi_si, gamma_si)
        p = ModelParams(d=d, chi=chi, gamma_si=gamma_si)
        report = classify(p)
        rate = gamma_infinity(p)
        rows.append(
            (
                name,
                d,
                gamma_si,
                chi_si,
                chi,
                "" if report.xi_value is None else report.xi_value,
                report.coupling_class,
                report.chirp_class,
                rate,
                rate / (2.0 * d * d),
            )
        )
    header = [
        "case",
        "d",
        "gamma_si",
        "chi_si",
        "chi",
        "xi",
        "coupling_class",
        "chirp_class",
        "gamma_inf_over_gamma",
        "suppression",
    ]
    return header, rows


# ------------------------------------------------------------- commands


def cmd_simulate(ns: argparse.Namespace) -> int:
    opt = _Options(
        ns,
        allowed={
            "d", "chi", "t_end", "modes_per_gamma", "rel_tol", "sample_every",
            "with_static", "with_markov", "out",
        },
    )
    header, rows = simulate_table(
        d=opt.get("d", required=True),
        chi=opt.get("chi", default=0.0),
        t_end=opt.get("t_end", required=True),
        modes_per_gamma=opt.get("modes_per_gamma", default=10.0),
        rel_tol=opt.get("rel_tol", default=1e-8),
        sample_every=opt.get("sample_every", default=1e-3),
        with_static=opt.get("with_static", cast=_parse_bool, default=False),
        with_markov=opt.get("with_markov", cast=_parse_bool, default=False),
    )
    _write_table(opt.get("out", cast=str), header, rows)
    return EXIT_OK


def cmd_volterra(ns: argparse.Namespace) -> int:
    opt = _Options(ns, allowed={"d", "chi", "t_end", "steps", "out"})
    header, rows, estimate = volterra_table(
        d=opt.get("d", required=True),
        chi=opt.get("chi", default=0.0),
        t_end=opt.get("t_end", required=True),
        steps=opt.get("steps", cast=int, default=1024),
    )
    _write_table(opt.get("out", cast=str), header, rows)
    print(f"richardson error estimate: {estimate:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(ns: argparse.Namespace) -> int:
    opt = _Options(
        ns, allowed={"d", "chi", "times", "modes_per_gamma", "rel_tol", "out"}
    )
    header, rows = spectrum_table(
        d=opt.get("d", required=True),
        chi=opt.get("chi", default=0.0),
        times=opt.get("times", cast=_parse_float_list, required=True),
        modes_per_gamma=opt.get("modes_per_gamma", default=10.0),
        rel_tol=opt.get("rel_tol", default=SPECTRUM_REL_TOL),
    )
    _write_table(opt.get("out", cast=str), header, rows)
    return EXIT_OK


def cmd_gamma_inf(ns: argparse.Namespace) -> int:
    opt = _Options(
        ns,
        allowed={
            "d_list", "chi_min", "chi_max", "chi_points", "fit_d", "fit_chis",
            "fit_t_end", "rel_tol", "modes_per_gamma", "out",
        },
    )
    header, rows = gamma_inf_table(
        d_list=opt.get("d_list", cast=_parse_float_list, required=True),
        chi_min=opt.get("chi_min", default=1e-3),
        chi_max=opt.get("chi_max", default=1e3),
        chi_points=opt.get("chi_points", cast=int, default=61),
        fit_d=opt.get("fit_d"),
        fit_chis=opt.get("fit_chis", cast=_parse_float_list, default=None),
        fit_t_end=opt.get("fit_t_end", default=FIT_T_END),
        rel_tol=opt.get("rel_tol", default=SWEEP_REL_TOL),
        modes_per_gamma=opt.get("modes_per_gamma", default=10.0),
    )
    _write_table(opt.get("out", cast=str), header, rows)
    return EXIT_OK


def cmd_classify(ns: argparse.Namespace) -> int:
    opt = _Options(ns, allowed={"d", "chi", "out"})
    if getattr(ns, "preset", None) == "sec5":
        header, rows = sec5_table()
        _write_table(opt.get("out", cast=str), header, rows)
        return EXIT_OK
    p = ModelParams(d=opt.get("d", required=True), chi=opt.get("chi", default=0.0))
    report = classify(p)
    parts = [
        f"coupling_class={report.coupling_class}",
        f"chirp_class={report.chirp_class}",
    ]
    if report.xi_value is not None:
        parts.append(f"xi={report.xi_value:.6g}")
    _emit_line(opt.get("out", cast=str), " ".join(parts))
    return EXIT_OK


def cmd_mirror(ns: argparse.Namespace) -> int:
    opt = _Options(ns, allowed={"omega0_si", "length_si", "length_rate_si", "gamma_si", "out"})
    chi_si = mirror_chirp(
        omega0_si=opt.get("omega0_si", required=True),
        cavity_length_si=opt.get("length_si", required=True),
        length_rate_si=opt.get("length_rate_si", required=True),
    )
    line = f"chi_si={chi_si:.16e}"
    gamma_si = opt.get("gamma_si")
    if gamma_si is not None:
        line += f" chi_over_gamma2={dimensionless_chi(chi_si, gamma_si):.16e}"
    _emit_line(opt.get("out", cast=str), line)
    return EXIT_OK


def run_preset(name: str, out: str | None) -> None:
    """Regenerate one reference data set into ``out`` (or stdout)."""
    preset = PRESETS[name]
    kind = preset["command"]
    if kind == "simulate":
        header, rows = simulate_table(
            d=preset["d"],
            chi=preset["chi"],
            t_end=preset["t_end"],
            with_static=preset.get("with_static", False),
            with_markov=preset.get("with_markov", False),
        )
        _write_table(out, header, rows)
    elif kind == "spectrum":
        header, rows = spectrum_table(d=preset["d"], chi=preset["chi"], times=preset["times"])
        _write_table(out, header, rows)
    elif kind == "gamma-inf":
        header, rows = gamma_inf_table(
            d_list=preset["d_list"],
            chi_min=preset["chi_min"],
            chi_max=preset["chi_max"],
            chi_points=preset["chi_points"],
            fit_d=preset["fit_d"],
            fit_chis=preset["fit_chis"],
        )
        _write_table(out, header, rows)
    else:
        header, rows = sec5_table()
        _write_table(out, header, rows)


def cmd_paper_figures(ns: argparse.Namespace) -> int:
    out_dir = Path(ns.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in PRESET_ORDER:
        run_preset(name, str(out_dir / f"{name}.csv"))
    return EXIT_OK


# --------------------------------------------------------------- parser


def _add_common(sp: argparse.ArgumentParser, presets: list[str]) -> None:
    sp.add_argument("--config", default=None, help="key=value config file; flags win")
    if presets:
        sp.add_argument("--preset", choices=presets, default=None)
    sp.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirped-bath",
        description="Decay of a two-level emitter in a frequency-chirped Lorentzian bath",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="discrete-bath trajectory CSV")
    _add_common(sp, ["fig4", "fig6", "fig7", "fig8"])
    sp.add_argument("--d", type=float)
    sp.add_argument("--chi", type=float)
    sp.add_argument("--t-end", dest="t_end", type=float)
    sp.add_argument("--modes-per-gamma", dest="modes_per_gamma", type=float)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float)
    sp.add_argument("--sample-every", dest="sample_every", type=float)
    sp.add_argument("--with-static", dest="with_static", action="store_true", default=None)
    sp.add_argument("--with-markov", dest="with_markov", action="store_true", default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("volterra", help="memory-kernel route trajectory CSV")
    _add_common(sp, [])
    sp.add_argument("--d", type=float)
    sp.add_argument("--chi", type=float)
    sp.add_argument("--t-end", dest="t_end", type=float)
    sp.add_argument("--steps", type=int)
    sp.set_defaults(func=cmd_volterra)

    sp = sub.add_parser("gamma-inf", help="flat decay rate sweep CSV")
    _add_common(sp, ["fig5"])
    sp.add_argument("--d-list", dest="d_list")
    sp.add_argument("--chi-min", dest="chi_min", type=float)
    sp.add_argument("--chi-max", dest="chi_max", type=float)
    sp.add_argument("--chi-points", dest="chi_points", type=int)
    sp.add_argument("--fit-d", dest="fit_d", type=float)
    sp.add_argument("--fit-chis", dest="fit_chis")
    sp.add_argument("--fit-t-end", dest="fit_t_end", type=float)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float)
    sp.add_argument("--modes-per-gamma", dest="modes_per_gamma", type=float)
    sp.set_defaults(func=cmd_gamma_inf)

    sp = sub.add_parser("spectrum", help="bath spectrum snapshots CSV")
    _add_common(sp, ["fig2", "fig9"])
    sp.add_argument("--d", type=float)
    sp.add_argument("--chi", type=float)
    sp.add_argument("--times", help="comma-separated snapshot times")
    sp.add_argument("--modes-per-gamma", dest="modes_per_gamma", type=float)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("classify", help="regime report (or sec5 case table)")
    _add_common(sp, ["sec5"])
    sp.add_argument("--d", type=float)
    sp.add_argument("--chi", type=float)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("mirror", help="mirror motion to chirp rate")
    _add_common(sp, [])
    sp.add_argument("--omega0-si", dest="omega0_si", type=float)
    sp.add_argument("--length-si", dest="length_si", type=float)
    sp.add_argument("--length-rate-si", dest="length_rate_si", type=float)
    sp.add_argument("--gamma-si", dest="gamma_si", type=float)
    sp.set_defaults(func=cmd_mirror)

    sp = sub.add_parser("paper-figures", help="regenerate every preset into a directory")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_paper_figures)

    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
