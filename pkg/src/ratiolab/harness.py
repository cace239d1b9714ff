"""Experiment configuration, dispatch and machine-readable reports.

A config is a flat ``key = value`` text file. Every report embeds the full
config, so a run can be reproduced from its own output.
"""

import json
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .conjectures import (conj_elliptic_rhs, conj_quadratic_rhs, conj_zeta_rhs,
                          discrete_moment_rhs, log_deriv_rhs)
from .errors import ConfigError, InvalidInput
from .euler import a_elliptic, a_quadratic, a_zeta
from .lhs import (lhs_discrete_moment, lhs_elliptic_family_sum, lhs_log_deriv_integral,
                  lhs_quadratic_family_sum, lhs_zeta_ratio_integral)
from .rmt import GroupSpec, mc_average, theorem_rhs
from .shifts import ConjectureValue, EulerConfig, FamilySpec, ShiftSet

__all__ = ["EXPERIMENTS", "ExperimentConfig", "ComparisonReport", "parse_config",
           "load_config", "format_config", "default_config", "run_experiment", "report_json",
           "report_csv", "write_reports"]

EXPERIMENTS = ("rmt-check", "zeta-ratio", "quad-family", "elliptic-family",
               "log-deriv", "discrete-moment", "euler-factor")

_FAMILY_FOR = {"rmt-check": ("ZetaT",), "zeta-ratio": ("ZetaT",),
               "quad-family": ("QuadraticPositive", "QuadraticNegative"),
               "elliptic-family": ("EllipticEvenTwists", "EllipticOddTwists"),
               "log-deriv": ("ZetaT",), "discrete-moment": ("ZetaT",),
               "euler-factor": ("ZetaT", "QuadraticPositive", "QuadraticNegative",
                                "EllipticEvenTwists", "EllipticOddTwists")}

_EULER_KEYS = {"prime_cutoff": int, "theta_nodes": int, "lattice_order": int,
               "tail_policy": str, "tail_tol": float, "disk_radius": float}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one LHS/RHS comparison.

    Attributes
    ----------
    experiment : str
        One of ``EXPERIMENTS``.
    family : FamilySpec
        Family kind and its sweep bound (T or X).
    shifts : ShiftSet
        Shifts; log-deriv reads r from alpha, discrete-moment reads
        a from alpha and c from gamma.
    step : float
        Node spacing of t-quadratures.
    samples : int
        Monte Carlo draws (rmt-check).
    group, group_n : str, int
        Group kind and size (rmt-check).
    euler : EulerConfig
    seed : int
    tolerance : float
        Pass threshold on the relative gap.
    output_path : str
        Empty for stdout.
    output_format : {"json", "csv"}
    scales : tuple of float
        Each scale multiplies all shifts and yields one report row.
    """

    experiment: str
    family: FamilySpec
    shifts: ShiftSet
    step: float = 0.1
    samples: int = 100_000
    group: str = "Unitary"
    group_n: int = 2
    euler: EulerConfig = field(default_factory=EulerConfig)
    seed: int = 0
    tolerance: float = 0.05
    output_path: str = ""
    output_format: str = "json"
    scales: tuple = (1.0,)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.family.kind not in _FAMILY_FOR[self.experiment]:
            raise ConfigError(f"family {self.family.kind} does not fit {self.experiment}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError("output_format must be 'json' or 'csv'")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.experiment != "euler-factor":
            _, _, g, d = self.shifts.arrays()
            if np.any(g.real <= 0) or np.any(d.real <= 0):
                raise ConfigError("denominator shifts need positive real part")
        if self.experiment in ("log-deriv", "discrete-moment") and not self.shifts.K:
            raise ConfigError(f"{self.experiment} reads its shift from alpha")
        if self.experiment == "discrete-moment" and not self.shifts.Q:
            raise ConfigError("discrete-moment reads c from gamma")

    def to_dict(self):
        out = {"experiment": self.experiment, "family": self.family.kind,
               "sweep_bound": self.family.sweep_bound}
        out.update({k: [[v.real, v.imag] for v in getattr(self.shifts, k)]
                    for k in ("alpha", "beta", "gamma", "delta")})
        for f in fields(self):
            if f.name not in ("experiment", "family", "shifts", "euler"):
                out[f.name] = getattr(self, f.name)
        out["scales"] = list(self.scales)
        out.update(asdict(self.euler))
        return out


@dataclass(frozen=True)
class ComparisonReport:
    """LHS against the conjectured RHS for one configuration."""

    lhs: complex
    rhs: ConjectureValue
    relative_gap: float
    runtime_s: float
    config: dict
    scale: float = 1.0

    @property
    def passed(self):
        return self.relative_gap <= self.config["tolerance"]


# config parsing -------------------------------------------------------------------

def _complex_list(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(complex(x.strip().replace(" ", "")) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse shift list {text!r}") from exc


_SCALAR_KEYS = {"experiment": str, "family": str, "sweep_bound": float, "step": float,
                "samples": int, "group": str, "group_n": int, "seed": int,
                "tolerance": float, "output_path": str, "output_format": str}
_SHIFT_KEYS = ("alpha", "beta", "gamma", "delta")


def parse_config(text, base=None):
    """Parse flat ``key = value`` lines on top of ``base`` (an ExperimentConfig).

    Blank lines and ``#`` comments are ignored; unknown keys raise
    ``ConfigError``.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in _SCALAR_KEYS and key not in _SHIFT_KEYS and key not in _EULER_KEYS \
                and key != "scales":
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value
    experiment = raw.get("experiment", base.experiment if base else None)
    if experiment is None:
        raise ConfigError("config must name an experiment")
    cfg = base if base is not None and base.experiment == experiment else default_config(experiment)
    return _apply(cfg, raw)


def _apply(cfg, raw):
    try:
        kw = {}
        for key, typ in _SCALAR_KEYS.items():
            if key in raw and key not in ("family", "sweep_bound", "experiment"):
                kw[key] = typ(raw[key])
        family = FamilySpec(raw.get("family", cfg.family.kind),
                            float(raw.get("sweep_bound", cfg.family.sweep_bound)))
        shifts = cfg.shifts
        if any(k in raw for k in _SHIFT_KEYS):
            blocks = {k: (_complex_list(raw[k]) if k in raw else getattr(cfg.shifts, k))
                      for k in _SHIFT_KEYS}
            shifts = ShiftSet(**blocks)
        eul = {k: typ(raw[k]) for k, typ in _EULER_KEYS.items() if k in raw}
        if "scales" in raw:
            kw["scales"] = tuple(float(x) for x in raw["scales"].split(","))
        return replace(cfg, family=family, shifts=shifts,
                       euler=replace(cfg.euler, **eul), **kw)
    except (InvalidInput, ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def _complex_text(z):
    z = complex(z)
    return repr(z.real) if z.imag == 0 else repr(z).strip("()")


def format_config(cfg):
    """Flat ``key = value`` text that ``parse_config`` reads back to ``cfg``."""
    lines = [f"experiment = {cfg.experiment}", f"family = {cfg.family.kind}",
             f"sweep_bound = {cfg.family.sweep_bound!r}"]
    for k in _SHIFT_KEYS:
        lines.append(f"{k} = " + ", ".join(_complex_text(z) for z in getattr(cfg.shifts, k)))
    for k in _SCALAR_KEYS:
        if k not in ("experiment", "family", "sweep_bound"):
            lines.append(f"{k} = {getattr(cfg, k)}")
    for k in _EULER_KEYS:
        lines.append(f"{k} = {getattr(cfg.euler, k)}")
    lines.append("scales = " + ", ".join(repr(float(c)) for c in cfg.scales))
    return "\n".join(lines) + "\n"


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)


def default_config(experiment):
    """Built-in configuration reproducing the matching acceptance case."""
    if experiment == "rmt-check":
        return ExperimentConfig(experiment, FamilySpec("ZetaT", 1.0),
                                ShiftSet([0.1], [0.2], [0.3], [0.25]), group="Unitary",
                                group_n=3, tolerance=0.02)
    if experiment == "zeta-ratio":
        return ExperimentConfig(experiment, FamilySpec("ZetaT", 5000.0),
                                ShiftSet([0.10], [0.12], [0.15], [0.20]))
    if experiment == "quad-family":
        return ExperimentConfig(experiment, FamilySpec("QuadraticPositive", 1e4),
                                ShiftSet([0.10], (), [0.15]))
    if experiment == "elliptic-family":
        return ExperimentConfig(experiment, FamilySpec("EllipticEvenTwists", 2000.0),
                                ShiftSet([0.1]), tolerance=0.10,
                                euler=EulerConfig(prime_cutoff=100_000, tail_policy="fixed"))
    if experiment == "log-deriv":
        return ExperimentConfig(experiment, FamilySpec("ZetaT", 5000.0),
                                ShiftSet([2 / math.log(5000.0)]))
    if experiment == "discrete-moment":
        return ExperimentConfig(experiment, FamilySpec("ZetaT", 1000.0),
                                ShiftSet([0.05], (), [0.10]))
    if experiment == "euler-factor":
        return ExperimentConfig(experiment, FamilySpec("ZetaT", 1.0),
                                ShiftSet([0.1], [0.12], [0.15], [0.2]), tolerance=1e-10)
    raise ConfigError(f"unknown experiment {experiment!r}")


# dispatch -----------------------------------------------------------------------

def _scaled(shifts, c):
    a, b, g, d = shifts.arrays()
    return ShiftSet(c * a, c * b, c * g, c * d)


def _pair(cfg, shifts):
    X = cfg.family.sweep_bound
    kind = cfg.family.kind
    e = cfg.experiment
    if e == "rmt-check":
        group = GroupSpec(cfg.group, cfg.group_n)
        est, err = mc_average(group, shifts, cfg.samples, cfg.seed)
        exact = theorem_rhs(group, shifts)
        return est, ConjectureValue(exact, 0.0, {"mc_stderr": err})
    if e == "zeta-ratio":
        return (lhs_zeta_ratio_integral(shifts, X, cfg.step),
                conj_zeta_rhs(shifts, X, cfg.euler))
    if e == "quad-family":
        sign = "positive" if kind == "QuadraticPositive" else "negative"
        res = lhs_quadratic_family_sum(shifts, X, sign, full=True)
        rhs = conj_quadratic_rhs(shifts, X, sign, cfg.euler)
        rhs.details["excluded"] = res.excluded
        return res.value, rhs
    if e == "elliptic-family":
        parity = "even" if kind == "EllipticEvenTwists" else "odd"
        res = lhs_elliptic_family_sum(shifts, X, parity, full=True)
        rhs = conj_elliptic_rhs(shifts, X, parity, cfg.euler)
        rhs.details["excluded"] = res.excluded
        return res.value, rhs
    if e == "log-deriv":
        r = shifts.alpha[0]
        return lhs_log_deriv_integral(r, X, cfg.step), log_deriv_rhs(r, X, cfg.euler)
    if e == "discrete-moment":
        a, c = shifts.alpha[0], shifts.gamma[0]
        return lhs_discrete_moment(a, c, X), discrete_moment_rhs(a, c, X, cfg.euler)
    # euler-factor: the two independent evaluations of the same product
    fixed = replace(cfg.euler, tail_policy="fixed")
    if kind == "ZetaT":
        lhs = a_zeta(shifts, fixed, form="latticeSum")
        res = a_zeta(shifts, fixed, form="thetaIntegral", full=True)
    elif kind.startswith("Quadratic"):
        lhs = a_quadratic(shifts.alpha, shifts.gamma, fixed, form="direct")
        res = a_quadratic(shifts.alpha, shifts.gamma, fixed, full=True)
    else:
        lhs = a_elliptic(shifts.alpha, shifts.gamma, fixed, form="direct")
        res = a_elliptic(shifts.alpha, shifts.gamma, fixed, full=True)
    return lhs, ConjectureValue(res.value, res.tail, {"n_primes": res.n_primes})


def run_experiment(cfg):
    """Run every scale of ``cfg`` and return a list of ComparisonReports."""
    reports = []
    echo = cfg.to_dict()
    for c in cfg.scales:
        start = time.perf_counter()
        lhs, rhs = _pair(cfg, _scaled(cfg.shifts, c))
        lhs = complex(lhs)
        gap = abs(lhs - rhs.value) / max(abs(rhs.value), 1e-30)
        reports.append(ComparisonReport(lhs, rhs, float(gap),
                                        time.perf_counter() - start, echo, c))
    return reports


# output -------------------------------------------------------------------------

def _num(x):
    x = float(x)
    if math.isfinite(x):
        return format(x, ".17g")
    return json.dumps(str(x))


def _emit(obj):
    # JSON with every float written to 17 significant digits
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _emit([obj.real, obj.imag])
    return json.dumps(str(obj))


def _record(rep):
    return {"lhs": [rep.lhs.real, rep.lhs.imag],
            "rhs": [rep.rhs.value.real, rep.rhs.value.imag],
            "relative_gap": rep.relative_gap,
            "error_budget": rep.rhs.error_budget,
            "runtime_s": rep.runtime_s,
            "passed": rep.passed,
            "scale": rep.scale,
            "config": rep.config}


def report_json(reports):
    """A single JSON object for one report, an array otherwise."""
    recs = [_record(r) for r in reports]
    return _emit(recs[0] if len(recs) == 1 else recs) + "\n"


_CSV_COLUMNS = ("lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_gap",
                "error_budget", "runtime_s", "passed", "scale", "config")


def report_csv(reports):
    """One row per shift scale; the config is embedded as a JSON string."""
    lines = [",".join(_CSV_COLUMNS)]
    for r in reports:
        vals = [r.lhs.real, r.lhs.imag, r.rhs.value.real, r.rhs.value.imag,
                r.relative_gap, r.rhs.error_budget, r.runtime_s]
        row = [_num(v) for v in vals] + [str(r.passed).lower(), _num(r.scale)]
        cfg = _emit(r.config).replace('"', '""')
        row.append(f'"{cfg}"')
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_reports(reports, fmt, path=""):
    text = report_json(reports) if fmt == "json" else report_csv(reports)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
