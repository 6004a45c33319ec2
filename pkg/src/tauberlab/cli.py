"""Batch front door: scenario configs in, CSV/JSON verdict reports out.

Grammar
-------
::

    tauberlab <command> <action> [--flag value ...]
    tauberlab run --config FILE [--out-dir DIR]
    tauberlab list-suites

Commands and actions: ``weights profile``; ``atoms verify``; ``contour
kernel``, ``contour reconstruct``; ``wave energy``, ``wave sandwich``,
``wave cutoff``; ``counterexample scan``, ``counterexample shift``.

Config files are line-oriented ``key = value`` with ``[section]`` headers
and ``#`` comments.  A ``[scenario]`` section holds ``command``,
``action`` and optionally ``out-dir`` / ``backend`` / ``threads``; a
``[params]`` section holds the action's typed parameters under the same
names as the CLI flags.  Unknown keys are rejected by name.

Every run writes one CSV per data series plus one JSON summary.  CSV:
RFC-4180-style with CRLF rows, '.' decimal, floats at 17 significant
digits, and the column schema versioned in a leading ``# schema=``
comment line.  JSON: stable key order, holding the scenario echo, fitted
constants, worst residuals, per-invariant verdicts and wall time.

Exit codes: 0 all invariants pass; 1 an invariant failed (the report is
still written); 2 usage or config error.

Determinism: two runs of the same scenario produce byte-identical CSV
bodies -- fixed summation orders, explicit seeds, wall time only in JSON.
The ``--threads`` cap (fallback: the TAUBERLAB_THREADS environment
variable) bounds the linear-algebra thread pools; it never changes
results, only scheduling.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = 1
BACKENDS = ("series", "oracle")
_THREAD_ENV_VARS = (
    "OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS",
)

# every named verdict suite this laboratory can emit, with its anchor line
SUITES = (
    ("X3", "atom time-profile bump upper envelope"),
    ("XQ4", "atom transform box bound over the admissible spectral region"),
    ("X5", "atom primitive floor on the sqrt(k) window"),
    ("X6", "atom primitive gaussian bump plus pure-tail envelope"),
    ("Y1", "log-profile transform upper envelope"),
    ("Y2", "log-profile time upper envelope"),
    ("Y3", "log-profile primitive window floor, stretched-exponential scale"),
    ("Y4", "log-profile primitive pure-tail envelope"),
    ("lemma31", "resolvent kernel integral capped by min(2, pi^2/(2 t^2))"),
    ("GNmu", "transform values cross-checked against direct quadrature"),
    ("i3est", "adaptive contour stub-piece norm against its predicted shape"),
    ("i4est1", "adaptive contour boundary-piece norm against its predicted shape"),
    ("T1", "shift orbit two-regime envelope: k^(1/4) box plus decaying tail"),
    ("T5", "shift primitive window floor at scale k^(1/4)(log k/k)^(1/alpha)"),
    ("T6", "shift primitive window upper analogue"),
    ("73b", "resolvent square-integral envelope along the region boundary"),
    ("shift-tail-identity", "suffix tail sums against head/total quadrature"),
    ("B-square-root", "damping square-root operator factorization residual"),
    ("B-decay-ladder", "weighted damping-observation dyadic decay ladder"),
    ("energy-decay-ladder", "weighted energy dyadic decay ladder"),
    ("rate-sandwich", "two-sided propagator-inverse norm sandwich"),
    ("diagonal-two-sided", "diagonal semigroup sharp two-sided decay"),
)


# ----------------------------------------------------------------------
# scenario: the full, serializable description of one run
# ----------------------------------------------------------------------

def _parse_int_list(s: str) -> tuple:
    try:
        return tuple(int(x) for x in str(s).split(","))
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {s!r}")


def _parse_span(s: str) -> tuple:
    parts = str(s).split(":")
    if len(parts) != 2:
        raise ValueError(f"expected lo:hi, got {s!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if not lo < hi:
        raise ValueError(f"span needs lo < hi, got {s!r}")
    return (lo, hi)


_COERCE = {
    "float": float,
    "int": int,
    "str": str,
    "int_list": _parse_int_list,
    "span": _parse_span,
}


@dataclass(frozen=True)
class Param:
    typ: str
    default: object
    help: str
    choices: tuple = ()


# typed parameter tables, one per (command, action); unknown keys rejected
PARAMS: dict[tuple, dict] = {
    ("weights", "profile"): {
        "family": Param("str", "power", "rate-bound family",
                        ("constant", "power", "log", "affine")),
        "c0": Param("float", 2.0, "constant family level"),
        "kappa": Param("float", 1.0, "power family coefficient"),
        "alpha": Param("float", 1.0, "power/log family exponent"),
        "base": Param("float", 2.0, "affine family intercept"),
        "slope": Param("float", 1.0, "affine family slope"),
        "t-min": Param("float", 1.0, "grid start (> 0)"),
        "t-max": Param("float", 1e4, "grid end"),
        "points": Param("int", 200, "geometric grid size"),
        "tail-alpha": Param("float", 0.0, "tail-integral weight exponent (0 = skip)"),
        "tail-beta": Param("float", 0.0, "tail-integral rate exponent (0 = skip)"),
    },
    ("atoms", "verify"): {
        "variant": Param("str", "power", "profile family", ("power", "log")),
        "alpha": Param("float", 2.0, "envelope exponent"),
        "beta": Param("float", 2.0, "power-variant second exponent"),
        "k": Param("int", 20, "atom order"),
        "seed": Param("int", 7, "spectral sample seed"),
        "z-count": Param("int", 24, "spectral samples per verification"),
    },
    ("contour", "kernel"): {
        "t-max": Param("float", 1e3, "log-grid end"),
        "points": Param("int", 60, "grid size including t = 0"),
    },
    ("contour", "reconstruct"): {
        "target": Param("str", "exp", "transform pair", ("exp", "rational", "atom")),
        "mode": Param("str", "fixed", "contour mode", ("fixed", "adaptive")),
        "t-min": Param("float", 0.5, "grid start (> 0)"),
        "t-max": Param("float", 5.0, "grid end"),
        "points": Param("int", 10, "geometric grid size"),
        "radius1": Param("float", 8.0, "first fixed-contour radius"),
        "radius2": Param("float", 16.0, "second fixed-contour radius"),
        "reg-n": Param("int", 2, "regularization power"),
        "k-scale": Param("float", 0.05, "adaptive radius schedule slope"),
        "growth-alpha": Param("float", 1.0, "declared transform growth exponent"),
        "growth-beta": Param("float", 1.0, "declared transform rate exponent"),
        "p": Param("float", 2.0, "norm index for the piece-shape fit"),
        "atom-k": Param("int", 10, "atom order (target=atom)"),
        "atom-alpha": Param("float", 2.0, "atom family alpha (target=atom)"),
        "atom-beta": Param("float", 2.0, "atom family beta (target=atom)"),
        "tol": Param("float", 1e-6, "reconstruction error tolerance"),
        "agree-tol": Param("float", 1e-8, "two-radius agreement tolerance"),
    },
    ("wave", "energy"): {
        "n": Param("int", 400, "interior grid size"),
        "damping": Param("str", "localized", "damping profile",
                         ("localized", "constant", "none")),
        "height": Param("float", 1.0, "damping amplitude"),
        "bc": Param("str", "dirichlet", "boundary condition",
                    ("dirichlet", "periodic")),
        "mode": Param("int", 1, "initial sine mode"),
        "t-max": Param("float", 4.0, "horizon"),
        "dt": Param("float", 1e-3, "output step"),
        "tol": Param("float", 1e-10, "energy-guard tolerance"),
    },
    ("wave", "sandwich"): {
        "n": Param("int", 400, "interior grid size"),
        "damping": Param("str", "localized", "damping profile",
                         ("localized", "constant")),
        "height": Param("float", 1.0, "damping amplitude"),
        "t0": Param("float", 5.0, "sandwich onset"),
        "t-min": Param("float", 0.5, "grid start"),
        "t-max": Param("float", 40.0, "grid end"),
        "points": Param("int", 60, "decay grid size"),
        "scan-max": Param("float", 320.0, "resolvent scan frequency cap"),
        "scan-points": Param("int", 161, "resolvent scan size"),
    },
    ("wave", "cutoff"): {
        "n": Param("int", 60, "interior grid size"),
        "damping": Param("str", "localized", "damping profile",
                         ("localized", "constant")),
        "height": Param("float", 1.0, "damping amplitude"),
        "omega": Param("float", 2.0, "resolvent shift (> 0)"),
        "window1": Param("span", (0.0, 0.5), "left cutoff support, fractions"),
        "window2": Param("span", (0.5, 1.0), "right cutoff support, fractions"),
        "lambdas": Param("int", 10, "identity sample count"),
        "seed": Param("int", 3, "data-vector seed"),
        "t-max": Param("float", 60.0, "norm grid end"),
        "t-points": Param("int", 3001, "norm grid size"),
        "horizon": Param("float", 80.0, "identity quadrature horizon"),
    },
    ("counterexample", "scan"): {
        "variant": Param("str", "power", "train variant", ("power", "log")),
        "alpha": Param("float", 2.0, "envelope exponent"),
        "p": Param("float", 2.0, "norm index"),
        "blocks": Param("int", 4, "train length"),
        "nodes": Param("int", 24, "window quadrature nodes"),
        "gamma-exp": Param("float", 0.0, "log-variant weight rate (0 = fit it)"),
    },
    ("counterexample", "shift"): {
        "alpha": Param("float", 2.0, "envelope exponent"),
        "p": Param("float", 2.0, "norm index"),
        "k": Param("int_list", (20, 40), "comma-separated probe orders"),
        "n-lambda": Param("int", 40, "boundary sample count"),
        "seed": Param("int", 11, "boundary sample seed"),
    },
}


@dataclass
class Scenario:
    command: str
    action: str
    params: dict
    out_dir: str = "."
    backend: str = "series"
    threads: int = 0  # 0 = leave the pools alone

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "action": self.action,
            "params": {k: list(v) if isinstance(v, tuple) else v
                       for k, v in sorted(self.params.items())},
            "out_dir": self.out_dir,
            "backend": self.backend,
            "threads": self.threads,
        }


@dataclass
class Series:
    name: str
    header: list
    rows: list


@dataclass
class RunResult:
    series: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)


class ScenarioError(ValueError):
    """Config/usage problem: maps to exit code 2."""


def _coerce_params(command: str, action: str, raw: dict) -> dict:
    table = PARAMS.get((command, action))
    if table is None:
        raise ScenarioError(f"unknown scenario {command!r} {action!r}")
    out = {}
    for key, value in raw.items():
        spec = table.get(key)
        if spec is None:
            raise ScenarioError(
                f"unknown parameter key {key!r} for {command} {action}")
        if isinstance(value, str):
            try:
                value = _COERCE[spec.typ](value)
            except ValueError as exc:
                raise ScenarioError(f"bad value for key {key!r}: {exc}") from exc
        if spec.choices and value not in spec.choices:
            raise ScenarioError(
                f"key {key!r} must be one of {spec.choices}, got {value!r}")
        out[key] = value
    for key, spec in table.items():
        out.setdefault(key, spec.default)
    return out


# ----------------------------------------------------------------------
# config files: line-oriented key = value under [section] headers
# ----------------------------------------------------------------------

def parse_config(text: str) -> Scenario:
    section = None
    fields: dict[str, dict] = {"scenario": {}, "params": {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in fields:
                raise ScenarioError(
                    f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected key = value, got {raw!r}")
        if section is None:
            raise ScenarioError(f"line {lineno}: key before any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ScenarioError(f"line {lineno}: empty key")
        if key in fields[section]:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        fields[section][key] = value

    meta = fields["scenario"]
    known = {"command", "action", "out-dir", "backend", "threads"}
    for key in meta:
        if key not in known:
            raise ScenarioError(f"unknown scenario key {key!r}")
    for required in ("command", "action"):
        if required not in meta:
            raise ScenarioError(f"config is missing scenario key {required!r}")
    backend = meta.get("backend", "series")
    if backend not in BACKENDS:
        raise ScenarioError(f"backend must be one of {BACKENDS}, got {backend!r}")
    try:
        threads = int(meta.get("threads", "0"))
    except ValueError:
        raise ScenarioError(f"bad value for key 'threads': {meta['threads']!r}")
    return Scenario(
        command=meta["command"],
        action=meta["action"],
        params=_coerce_params(meta["command"], meta["action"], fields["params"]),
        out_dir=meta.get("out-dir", "."),
        backend=backend,
        threads=threads,
    )


# ----------------------------------------------------------------------
# report writers
# ----------------------------------------------------------------------

def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".16e")
    return str(v)


def _write_csv(path: str, scenario: Scenario, series: Series) -> None:
    buf = io.StringIO()
    buf.write(f"# schema=tauberlab.{scenario.command}.{scenario.action}."
              f"{series.name}.v{SCHEMA_VERSION}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(series.header)
    for row in series.rows:
        writer.writerow([_format_cell(v) for v in row])
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)  # JSON has no inf/nan
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        v = v.item()
    return v


def write_reports(scenario: Scenario, result: RunResult,
                  wall_time: float) -> list[str]:
    os.makedirs(scenario.out_dir, exist_ok=True)
    stem = f"{scenario.command}-{scenario.action}"
    written = []
    for series in result.series:
        path = os.path.join(scenario.out_dir, f"{stem}-{series.name}.csv")
        _write_csv(path, scenario, series)
        written.append(path)
    summary = {
        "scenario": scenario.as_dict(),
        "constants": _jsonable(result.constants),
        "residuals": _jsonable(result.residuals),
        "passed": result.passed,
        "ok": all(result.passed.values()),
        "wall_time_s": wall_time,
    }
    path = os.path.join(scenario.out_dir, f"{stem}-summary.json")
    with open(path, "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    written.append(path)
    return written


# ----------------------------------------------------------------------
# handlers (heavy imports stay inside so the thread cap lands first)
# ----------------------------------------------------------------------

def _rate_function(params):
    from tauberlab import weights as wg
    family = params["family"]
    if family == "constant":
        return wg.ConstantRate(params["c0"])
    if family == "power":
        return wg.PowerRate(params["kappa"], params["alpha"])
    if family == "log":
        return wg.LogRate(params["alpha"])
    return wg.AffineRate(params["base"], params["slope"])


def _h_weights_profile(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import weights as wg

    if params["t-min"] <= 0:
        raise ScenarioError("key 't-min' must be positive")
    M = _rate_function(params)
    ts = np.geomspace(params["t-min"], params["t-max"], params["points"])
    rows = [(float(t), float(M(t)), wg.m_log_eval(M, float(t)),
             wg.w_m_log(M, float(t))) for t in ts]
    res = RunResult(series=[Series("profile", ["t", "m", "m_log", "w"], rows)])

    growth = wg.check_growth_bounds(M)
    res.constants["growth"] = dict(growth.constants)
    res.residuals["growth"] = growth.worst_residual
    res.passed["growth"] = growth.passed
    if params["tail-alpha"] > 0 and params["tail-beta"] > 0:
        tail = wg.weighted_tail_convergence(M, params["tail-alpha"],
                                            params["tail-beta"])
        res.constants["tail"] = {"estimate": tail.estimate}
        res.residuals["tail"] = tail.increments[-1]
        res.passed["tail"] = tail.converged
        res.series.append(Series(
            "tail", ["block", "partial", "increment"],
            [(j, p, i) for j, (p, i) in
             enumerate(zip(tail.partials, tail.increments))]))
    return res


def _h_atoms_verify(params, backend) -> RunResult:
    from tauberlab import atoms as at

    beta = params["beta"] if params["variant"] == "power" else None
    fam = at.build_family(params["variant"], params["k"], params["alpha"],
                          beta=beta)
    t = at.default_t_grid(fam)
    zs = at.default_z_samples(fam, n=params["z-count"], seed=params["seed"])
    reports = at.verify_prop52(fam, t_grid=t, z_samples=zs, backend=backend)

    rows = []
    for ti in t:
        rows.append((float(ti), at.laplace_L_log(fam, float(ti)).log_mag,
                     at.primitive_N_log(fam, float(ti)).log_mag))
    res = RunResult(series=[Series("envelopes",
                                   ["t", "log_abs_L", "log_abs_N"], rows)])
    for rep in reports:
        res.constants[rep.name] = dict(rep.constants)
        res.residuals[rep.name] = rep.worst_residual
        res.passed[rep.name] = rep.passed
    return res


def _h_contour_kernel(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import contour as ct

    ts = np.r_[0.0, np.geomspace(1e-2, params["t-max"], params["points"] - 1)]
    rows = []
    worst = -math.inf
    for t in ts:
        integral, bound = ct.lemma31_check(float(t))
        rows.append((float(t), integral, bound))
        worst = max(worst, integral - bound)
    t0_err = abs(rows[0][1] - 2.0)
    res = RunResult(series=[Series("kernel", ["t", "integral", "bound"], rows)])
    res.residuals = {"cap_gap": worst, "t0_error": t0_err}
    res.passed = {"lemma31": worst <= 1e-9, "t0_exact": t0_err <= 1e-12}
    return res


def _h_contour_reconstruct(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import atoms as at
    from tauberlab import contour as ct
    from tauberlab import weights as wg

    target = params["target"]
    if target == "exp":
        tp = ct.exp_decay_pair()
        truth = lambda t: complex(math.exp(-t))
        M = wg.ConstantRate(2.0)
    elif target == "rational":
        poles = (-1.0 + 2.0j, -1.0 - 2.0j, -3.0 + 0.0j)
        coeffs = (1.0 + 0.0j, 1.0 + 0.0j, 2.0 + 0.0j)
        tp = ct.rational_pair(poles, coeffs)
        truth = lambda t: sum(-c / p * cmath.exp(p * t)
                              for c, p in zip(coeffs, poles))
        M = wg.ConstantRate(2.0)
    else:
        fam = at.build_family("power", params["atom-k"], params["atom-alpha"],
                              beta=params["atom-beta"])
        tp = ct.transform_pair_from_family(fam)
        truth = lambda t: -at.primitive_N(fam, t)
        M = fam.matching_rate()

    ts = np.geomspace(params["t-min"], params["t-max"], params["points"])
    res = RunResult()
    if params["mode"] == "fixed":
        spec1 = ct.ContourSpec(R=params["radius1"], n=params["reg-n"])
        spec2 = ct.ContourSpec(R=params["radius2"], n=params["reg-n"])
        rows, worst_err, worst_agree = [], 0.0, 0.0
        for t in ts:
            g1 = ct.reconstruct_g_fixed(tp, spec1, float(t))
            g2 = ct.reconstruct_g_fixed(tp, spec2, float(t))
            ref = complex(truth(float(t)))
            err1, err2 = abs(g1 - ref), abs(g2 - ref)
            agree = abs(g1 - g2)
            worst_err = max(worst_err, err1, err2)
            worst_agree = max(worst_agree, agree)
            rows.append((float(t), g1.real, g1.imag, g2.real, g2.imag,
                         ref.real, ref.imag, err1, err2, agree))
        res.series.append(Series(
            "reconstruction",
            ["t", "recon_r1_re", "recon_r1_im", "recon_r2_re", "recon_r2_im",
             "truth_re", "truth_im", "err_r1", "err_r2", "agree"], rows))
        res.residuals = {"worst_error": worst_err, "worst_agree": worst_agree}
        res.passed = {"error": worst_err <= params["tol"],
                      "two_radius_agreement": worst_agree <= params["agree-tol"]}
    else:
        rows, worst_err = [], 0.0
        for t in ts:
            g, (j1, j2, i3, i4) = ct.reconstruct_g_adaptive(
                tp, M, params["k-scale"], params["reg-n"], float(t))
            ref = complex(truth(float(t)))
            err = abs(g - ref)
            worst_err = max(worst_err, err)
            rows.append((float(t), g.real, g.imag, ref.real, ref.imag, err,
                         j1, j2, i3, i4))
        res.series.append(Series(
            "reconstruction",
            ["t", "recon_re", "recon_im", "truth_re", "truth_im", "err",
             "j1_right_arc", "j2_left_arc", "i3_stubs", "i4_boundary"], rows))
        stub_fit, boundary_fit = ct.fit_adaptive_piece_bounds(
            tp, M, params["k-scale"], params["reg-n"], ts,
            params["growth-alpha"], params["growth-beta"], p=params["p"])
        res.residuals = {"worst_error": worst_err,
                         stub_fit.name: stub_fit.worst_residual,
                         boundary_fit.name: boundary_fit.worst_residual}
        res.constants = {stub_fit.name: dict(stub_fit.constants),
                         boundary_fit.name: dict(boundary_fit.constants)}
        res.passed = {"error": worst_err <= params["tol"],
                      stub_fit.name: stub_fit.passed,
                      boundary_fit.name: boundary_fit.passed}
    return res


def _damping_profile(params, n):
    import numpy as np
    from tauberlab import semigroup as sg

    kind = params["damping"]
    if kind == "localized":
        return sg.localized_bump_damping(n, height=params["height"])
    if kind == "constant":
        return np.full(n, params["height"])
    return np.zeros(n)


def _h_wave_energy(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import semigroup as sg

    n = params["n"]
    sys_ = sg.assemble_damped_wave(n, 1.0, _damping_profile(params, n),
                                   bc=params["bc"])
    x = np.arange(1, n + 1) / (n + 1)
    x0 = np.concatenate([np.sin(params["mode"] * math.pi * x), np.zeros(n)])
    steps = int(round(params["t-max"] / params["dt"]))
    t = np.linspace(0.0, params["t-max"], steps + 1)
    traj = sg.evolve(sys_, x0, t, tol=params["tol"])
    energies = traj.energies()
    dissipation = np.array([sys_.dissipation(traj.states[:, j])
                            for j in range(t.size)])
    residual = sg.energy_derivative_check(sys_, traj)
    e0 = float(energies[0])
    rows = list(zip(t.tolist(), energies.tolist(), dissipation.tolist()))
    res = RunResult(series=[Series("energy", ["t", "energy", "dissipation"],
                                   rows)])
    res.constants = {"initial_energy": e0, "threshold": 1e-6 * e0}
    res.residuals = {"derivative_identity": residual}
    res.passed = {
        "derivative_identity": residual <= 1e-6 * e0,
        "nonincreasing": bool(np.all(np.diff(energies) <= params["tol"] * e0)),
    }
    return res


def _h_wave_sandwich(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import semigroup as sg

    n = params["n"]
    sys_ = sg.assemble_damped_wave(n, 1.0, _damping_profile(params, n))
    t = np.linspace(params["t-min"], params["t-max"], params["points"])
    norms = sg.propagator_inverse_norms(sys_, t)
    scan = sg.running_sup(sg.resolvent_norm_scan(
        sys_, np.linspace(0.0, params["scan-max"], params["scan-points"])))
    rep = sg.rate_sandwich_check(sys_, t, scan, t0=params["t0"],
                                 norms=norms.values)
    res = RunResult(series=[
        Series("decay", ["t", "norm"],
               list(zip(t.tolist(), norms.values.tolist()))),
        Series("scan", ["s", "resolvent_sup"],
               list(zip(scan.grid.tolist(), scan.values.tolist()))),
    ])
    res.constants[rep.name] = dict(rep.constants)
    res.residuals[rep.name] = rep.worst_residual
    res.passed[rep.name] = rep.passed
    return res


def _h_wave_cutoff(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import semigroup as sg

    n = params["n"]
    sys_ = sg.assemble_damped_wave(n, 1.0, _damping_profile(params, n))
    grid = np.arange(1, n + 1) / (n + 1)

    def cutoff(lo, hi):
        d = ((grid >= lo) & (grid < hi)).astype(float)
        return np.diag(np.concatenate([d, d]))

    t1 = cutoff(*params["window1"])
    t2 = cutoff(*params["window2"])
    rng = np.random.default_rng(params["seed"])
    x = rng.standard_normal(2 * n)
    x /= math.sqrt(sys_.energy(x))

    omega = params["omega"]
    if omega <= 0:
        raise ScenarioError("key 'omega' must be positive")
    lams = []
    while len(lams) < params["lambdas"]:  # stay away from the shift itself
        cand = complex(rng.uniform(0.2, 2.0), rng.uniform(-3.0, 3.0))
        if abs(cand - omega) > 0.3:
            lams.append(cand)
    out = sg.cutoff_transform_check(
        sys_, t1, t2, x, omega, np.array(lams),
        t_grid=np.linspace(0.0, params["t-max"], params["t-points"]),
        T=params["horizon"])

    dec = out["decay_series"]
    res = RunResult(series=[
        Series("decay", ["t", "cutoff_norm"],
               list(zip(dec.grid.tolist(), dec.values.tolist()))),
        Series("identity", ["lambda_re", "lambda_im", "residual"],
               [(l.real, l.imag, float(r))
                for l, r in zip(lams, out["identity_residuals"])]),
    ])
    res.residuals["identity"] = float(max(out["identity_residuals"]))
    res.passed["identity"] = bool(out["identity_ok"])
    for p_idx, (lhs, rhs, ok) in out["minkowski"].items():
        key = f"minkowski_p{p_idx:g}"
        res.constants[key] = {"lhs": lhs, "rhs": rhs}
        res.passed[key] = bool(ok)
    return res


def _h_cx_scan(params, backend) -> RunResult:
    import numpy as np
    from tauberlab import counterexamples as cx

    if params["variant"] == "power":
        gamma, gamma_log = cx.inverse_log_weight()
        spec = cx.build_counterexample("power", params["alpha"], params["p"],
                                       params["blocks"], gamma=gamma,
                                       gamma_log=gamma_log)
    else:
        spec = cx.build_counterexample("log", params["alpha"], params["p"],
                                       params["blocks"])
        if params["gamma-exp"] > 0:
            spec.gamma_exp = params["gamma-exp"]
        else:
            cx.fit_log_weight_exponent(spec)
    reports = cx.divergence_scan(spec, nodes=params["nodes"],
                                 require_increasing=False)

    contribs = [r.contribution_log for r in reports]
    increasing = all(a < b for a, b in zip(contribs[:-1], contribs[1:]))
    rows = [(r.n, r.log_k, r.t_lo, r.t_hi, r.min_log_abs_g, r.floor_log,
             r.contribution_log, r.analytic_bound_log, r.passed, r.notes)
            for r in reports]
    res = RunResult(series=[Series(
        "windows",
        ["n", "log_k", "t_lo", "t_hi", "min_log_abs_g", "floor_log",
         "contribution_log", "analytic_bound_log", "passed", "notes"], rows)])
    res.constants = {"c1": spec.c1, "c2": spec.c2, "rho": spec.rho,
                     "e_factor": spec.e_factor, "gamma_exp": spec.gamma_exp}
    res.residuals = {"worst_floor_gap": float(min(
        r.min_log_abs_g - r.floor_log for r in reports))}
    res.passed = {"window_floors": all(r.passed for r in reports),
                  "contributions_increasing": increasing}
    return res


def _h_cx_shift(params, backend) -> RunResult:
    from tauberlab import counterexamples as cx

    ks = params["k"]
    reports = cx.shift_semigroup_suite(params["alpha"], params["p"],
                                       k_list=ks, n_lambda=params["n-lambda"],
                                       seed=params["seed"])
    per_k = len(reports) // len(ks)
    rows = []
    res = RunResult()
    for i, rep in enumerate(reports):
        k = ks[i // per_k]
        label = f"k{k}.{rep.name}"
        res.residuals[label] = rep.worst_residual
        res.passed[label] = rep.passed
        res.constants[label] = dict(rep.constants)
        for cname, cval in rep.constants.items():
            rows.append((k, rep.name, cname, float(cval)))
    res.series.append(Series("constants", ["k", "suite", "constant", "value"],
                             rows))
    return res


HANDLERS = {
    ("weights", "profile"): _h_weights_profile,
    ("atoms", "verify"): _h_atoms_verify,
    ("contour", "kernel"): _h_contour_kernel,
    ("contour", "reconstruct"): _h_contour_reconstruct,
    ("wave", "energy"): _h_wave_energy,
    ("wave", "sandwich"): _h_wave_sandwich,
    ("wave", "cutoff"): _h_wave_cutoff,
    ("counterexample", "scan"): _h_cx_scan,
    ("counterexample", "shift"): _h_cx_shift,
}


# ----------------------------------------------------------------------
# entry points
# ----------------------------------------------------------------------

def _apply_thread_cap(threads: int):
    if threads <= 0:
        return None
    for var in _THREAD_ENV_VARS:  # matters only before the pools spin up
        os.environ.setdefault(var, str(threads))
    try:
        from threadpoolctl import threadpool_limits
        return threadpool_limits(limits=threads)
    except ImportError:
        return None


def run(scenario: Scenario) -> int:
    """Execute one scenario, write its reports, map verdicts to exit codes."""
    start = time.perf_counter()
    limiter = _apply_thread_cap(scenario.threads)
    try:
        result = HANDLERS[(scenario.command, scenario.action)](
            scenario.params, scenario.backend)
    finally:
        if limiter is not None:
            limiter.unregister()
    written = write_reports(scenario, result, time.perf_counter() - start)
    ok = all(result.passed.values())
    tag = "ok" if ok else "FAIL"
    detail = ", ".join(f"{k}={'pass' if v else 'FAIL'}"
                       for k, v in result.passed.items())
    print(f"[{tag}] {scenario.command} {scenario.action}: {detail}")
    for path in written:
        print(f"  wrote {path}")
    return 0 if ok else 1


def list_suites() -> str:
    lines = [f"{name}\t{desc}" for name, desc in SUITES]
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tauberlab",
        description="Scenario runner for the decay-rate laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    commands = sorted({cmd for cmd, _ in PARAMS})
    for cmd in commands:
        cmd_parser = sub.add_parser(cmd)
        action_sub = cmd_parser.add_subparsers(dest="action", required=True)
        for (c, action), table in PARAMS.items():
            if c != cmd:
                continue
            ap = action_sub.add_parser(action)
            for key, spec in table.items():
                kwargs = {"help": spec.help, "default": None,
                          "type": _COERCE[spec.typ], "metavar": spec.typ.upper()}
                if spec.choices:
                    kwargs["choices"] = spec.choices
                    del kwargs["metavar"]
                ap.add_argument(f"--{key}", dest=f"param_{key}", **kwargs)
            ap.add_argument("--out-dir", default=".", help="report directory")
            ap.add_argument("--backend", default="series", choices=BACKENDS,
                            help="precision backend where an oracle exists")
            ap.add_argument("--threads", type=int, default=0,
                            help="linear-algebra thread cap")

    run_parser = sub.add_parser("run", help="run a scenario from a config file")
    run_parser.add_argument("--config", required=True, help="config path")
    run_parser.add_argument("--out-dir", default=None,
                            help="override the config's out-dir")

    sub.add_parser("list-suites", help="print every named verdict suite")
    return parser


def _scenario_from_args(args) -> Scenario:
    raw = {key[len("param_"):].replace("_", "-"): value
           for key, value in vars(args).items()
           if key.startswith("param_") and value is not None}
    threads = args.threads
    if threads == 0:
        threads = int(os.environ.get("TAUBERLAB_THREADS", "0") or "0")
    return Scenario(
        command=args.command,
        action=args.action,
        params=_coerce_params(args.command, args.action, raw),
        out_dir=args.out_dir,
        backend=args.backend,
        threads=threads,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-suites":
            print(list_suites())
            return 0
        if args.command == "run":
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return 2
            scenario = parse_config(text)
            if args.out_dir is not None:
                scenario.out_dir = args.out_dir
            if scenario.threads == 0:
                scenario.threads = int(
                    os.environ.get("TAUBERLAB_THREADS", "0") or "0")
            return run(scenario)
        return run(_scenario_from_args(args))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # precondition failures from the modules
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:  # a guarded invariant broke mid-run
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
