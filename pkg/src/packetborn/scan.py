"""
Parameter scans and figure presets.

A scan is described by :class:`ScanConfig` (JSON-serializable, strict on
unknown keys). Lengths are in units of the potential range a, momenta in
units of 1/a, and m_e = 1. Points are independent and may be evaluated on a
thread pool; rows are always assembled in the same order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from . import scattering as sc
from .born import amplitude_function
from .model import CustomRadial, GaussianWell, HydrogenGround, PacketSpec, make_kinematics

__all__ = [
    "ConfigError",
    "Sweep",
    "ScanConfig",
    "ScanRow",
    "ScanTable",
    "run_scan",
    "figure_configs",
    "FigureTable",
    "run_figure",
    "INF_SIGMA",
    "default_threads",
]

# stand-in for sigma_perp / a = infinity in presets
INF_SIGMA = 1e3

MODELS = ("gauss-gauss", "hydrogen", "custom")
QUANTITIES = ("events", "avg-xsec", "ratio-to-standard", "total-ratio", "B2")
NORMALIZE = ("none", "theta0", "phi0")
KINEMATICS = ("exact", "small-angle")
SWEEP_PARAMS = ("pa", "sigma", "sigma_z", "b", "n_e", "v")


class ConfigError(ValueError):
    """Invalid scan configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def default_threads() -> int:
    raw = os.environ.get("PACKETBORN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _grid_from(value, path) -> list[float]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value)]
    if isinstance(value, list):
        if not value:
            raise ConfigError(path, "must not be empty")
        try:
            return [float(x) for x in value]
        except (TypeError, ValueError):
            raise ConfigError(path, "entries must be numbers") from None
    if isinstance(value, dict):
        sw = Sweep.from_dict({"param": "pa", **value}, path)
        return sw.grid()
    raise ConfigError(path, "expected a number, a list, or {start, stop, count}")


@dataclass(frozen=True)
class Sweep:
    param: str
    values: tuple[float, ...] | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = None
    spacing: str = "linear"

    @classmethod
    def from_dict(cls, data: dict, path: str = "sweep") -> "Sweep":
        if not isinstance(data, dict):
            raise ConfigError(path, "must be an object")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"{path}.{key}", "unknown key")
        values = data.get("values")
        if values is not None:
            if not isinstance(values, list) or not values:
                raise ConfigError(f"{path}.values", "must be a non-empty list")
            try:
                values = tuple(float(v) for v in values)
            except (TypeError, ValueError):
                raise ConfigError(f"{path}.values", "entries must be numbers") from None
        sw = cls(
            param=data.get("param", ""),
            values=values,
            start=data.get("start"),
            stop=data.get("stop"),
            count=data.get("count"),
            spacing=data.get("spacing", "linear"),
        )
        sw.check(path)
        return sw

    def check(self, path: str = "sweep"):
        if self.param not in SWEEP_PARAMS:
            raise ConfigError(f"{path}.param", f"must be one of {SWEEP_PARAMS}")
        if self.values is not None:
            if self.start is not None or self.stop is not None or self.count is not None:
                raise ConfigError(path, "give either values or start/stop/count")
            return
        for key in ("start", "stop", "count"):
            if getattr(self, key) is None:
                raise ConfigError(f"{path}.{key}", "required")
        if not isinstance(self.count, int) or self.count < 2:
            raise ConfigError(f"{path}.count", "must be an integer >= 2")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"{path}.spacing", "must be 'linear' or 'log'")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError(f"{path}.start", "log spacing needs positive limits")

    def grid(self) -> list[float]:
        if self.values is not None:
            return sorted(self.values)
        if self.spacing == "log":
            g = np.geomspace(self.start, self.stop, self.count)
        else:
            g = np.linspace(self.start, self.stop, self.count)
        return sorted(float(x) for x in g)

    def to_dict(self) -> dict:
        d = {"param": self.param}
        if self.values is not None:
            d["values"] = list(self.values)
        else:
            d.update(start=self.start, stop=self.stop, count=self.count, spacing=self.spacing)
        return d


@dataclass(frozen=True)
class ScanConfig:
    """One scan: model, packet (in units of a), angle grids and quantity."""

    model: str = "gauss-gauss"
    pa: float = 10.0
    sigma: float = 1.0
    sigma_z: float = 10.0
    b: float = 0.0
    n_e: float = 1.0
    v: float = 1.0
    potential_expr: str | None = None
    r_cut: float = 20.0
    sweep: Sweep | None = None
    theta: tuple[float, ...] = (0.0,)
    phi: tuple[float, ...] = (0.0,)
    quantity: str = "events"
    normalize: str = "none"
    kinematics: str = "exact"
    tol: float = 1e-8

    def __post_init__(self):
        self.check()

    def check(self):
        if self.model not in MODELS:
            raise ConfigError("model", f"must be one of {MODELS}")
        if self.quantity not in QUANTITIES:
            raise ConfigError("quantity", f"must be one of {QUANTITIES}")
        if self.normalize not in NORMALIZE:
            raise ConfigError("normalize", f"must be one of {NORMALIZE}")
        if self.kinematics not in KINEMATICS:
            raise ConfigError("kinematics", f"must be one of {KINEMATICS}")
        if not (0.0 < self.tol <= 1e-2):
            raise ConfigError("tol", "must lie in (0, 1e-2]")
        if self.model == "custom":
            if not self.potential_expr:
                raise ConfigError("potential_expr", "required for the custom model")
            _compile_expr(self.potential_expr)
            if not self.r_cut > 0:
                raise ConfigError("r_cut", "must be positive")
            if self.quantity == "total-ratio":
                raise ConfigError("quantity", "total-ratio is not available for custom potentials")
        if self.quantity == "total-ratio" and self.normalize != "none":
            raise ConfigError("normalize", "total-ratio is already a ratio; use 'none'")
        if self.quantity == "B2" and self.model != "gauss-gauss":
            raise ConfigError("quantity", "B2 is defined for the gauss-gauss model only")
        for i, t in enumerate(self.theta):
            if not 0.0 <= t <= math.pi:
                raise ConfigError(f"theta[{i}]", "must lie in [0, pi]")
        for i, p in enumerate(self.phi):
            if not math.isfinite(p):
                raise ConfigError(f"phi[{i}]", "must be finite")
        if self.sweep is not None:
            self.sweep.check()
        prefix = {self.sweep.param: "sweep"} if self.sweep is not None else {}
        for params in self.parameter_sets():
            for name in ("pa", "sigma", "sigma_z", "n_e"):
                if not (params[name] > 0 and math.isfinite(params[name])):
                    raise ConfigError(prefix.get(name, name), f"{name} must be positive")
            if not params["b"] >= 0:
                raise ConfigError(prefix.get("b", "b"), "b must be >= 0")
            if self.quantity == "total-ratio" and params["b"] != 0.0:
                raise ConfigError(prefix.get("b", "b"), "total-ratio requires b = 0")

    def parameter_sets(self) -> list[dict]:
        base = {k: getattr(self, k) for k in SWEEP_PARAMS}
        if self.sweep is None:
            return [base]
        return [{**base, self.sweep.param: x} for x in self.sweep.grid()]

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        known = {f.name for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(key, "unknown key")
            if key == "sweep":
                kwargs[key] = None if value is None else Sweep.from_dict(value)
            elif key in ("theta", "phi"):
                kwargs[key] = tuple(_grid_from(value, key))
            elif key in ("model", "quantity", "normalize", "kinematics", "potential_expr"):
                if value is not None and not isinstance(value, str):
                    raise ConfigError(key, "must be a string")
                kwargs[key] = value
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(key, "must be a number")
                kwargs[key] = float(value)
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ScanConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sweep"] = None if self.sweep is None else self.sweep.to_dict()
        d["theta"] = list(self.theta)
        d["phi"] = list(self.phi)
        return d

    def replace(self, **changes) -> "ScanConfig":
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d.update(changes)
        return ScanConfig(**d)


@dataclass(frozen=True)
class ScanRow:
    params: dict
    theta: float | None
    phi: float | None
    value: float
    error_estimate: float
    converged: bool


@dataclass
class ScanTable:
    config: ScanConfig
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.rows)


_EXPR_NAMES = ("exp", "sqrt", "log", "sin", "cos", "tanh", "abs", "pi", "where")


def _compile_expr(expr: str):
    """Turn a numpy expression in ``r`` into a vectorized U(r).

    Only a handful of numpy names are visible and builtins are disabled.
    """
    try:
        code = compile(expr, "<potential_expr>", "eval")
    except SyntaxError as exc:
        raise ConfigError("potential_expr", f"syntax error: {exc.msg}") from None
    namespace = {"__builtins__": {}, **{name: getattr(np, name) for name in _EXPR_NAMES}}

    def u(r):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(np.asarray(eval(code, namespace, {"r": r}), dtype=float), r.shape)

    try:
        probe = u(np.linspace(0.01, 1.0, 4))
    except Exception as exc:
        raise ConfigError("potential_expr", f"cannot evaluate: {exc}") from None
    if not np.all(np.isfinite(probe)):
        raise ConfigError("potential_expr", "not finite on (0, 1]")
    return u


def _potential(config: ScanConfig, params: dict):
    if config.model == "gauss-gauss":
        return GaussianWell(params["v"], 1.0)
    if config.model == "hydrogen":
        return HydrogenGround(1.0)
    return CustomRadial(_compile_expr(config.potential_expr), config.r_cut, 1.0)


class _Evaluator:
    def __init__(self, config: ScanConfig):
        self.config = config
        self._amp = None
        if config.model == "custom":
            pot = _potential(config, config.parameter_sets()[0])
            q_max = max(p["pa"] for p in config.parameter_sets()) * 2.0 + 40.0
            from .born import tabulate_amplitude

            self._amp = tabulate_amplitude(pot, 1.0, q_max=q_max)

    def __call__(self, point):
        params, theta, phi = point
        cfg = self.config
        packet = PacketSpec(params["sigma"], params["sigma_z"], params["pa"], params["b"], params["n_e"])
        pot = _potential(cfg, params)
        small = cfg.kinematics == "small-angle"
        q = cfg.quantity
        if q == "total-ratio":
            r = sc.total_events_ratio(packet, pot, tol=max(cfg.tol, 1e-9), small_angle=small)
            return float(r.value), r.error_estimate, r.converged
        kin = make_kinematics(theta, phi, packet, small_angle=small)
        if q == "B2":
            return sc.gauss_gauss_factors(kin, packet, pot).b_squared, 0.0, True
        if q == "avg-xsec":
            r = sc.avg_xsec(kin, packet, pot, cfg.tol, self._amp)
            return r.value, r.error, r.converged
        r = sc.events(kin, packet, pot, cfg.tol, self._amp)
        if q == "events":
            return r.value, r.error, r.converged
        amp = self._amp or amplitude_function(pot, packet.mass)
        from .packet import luminosity

        std = luminosity(packet) * float(np.abs(amp(kin.q_abs))) ** 2
        return r.value / std, r.error / std, r.converged


def _map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_scan(config: ScanConfig, threads: int | None = None) -> ScanTable:
    """Evaluate ``config.quantity`` on the full (sweep, theta, phi) grid."""
    threads = default_threads() if threads is None else threads
    evaluate = _Evaluator(config)
    thetas = sorted(config.theta)
    phis = sorted(config.phi)
    param_sets = config.parameter_sets()
    if config.quantity == "total-ratio":
        keys = [(i, None, None) for i in range(len(param_sets))]
    else:
        keys = [(i, t, p) for i in range(len(param_sets)) for t in thetas for p in phis]
    if config.normalize == "theta0":
        ref_keys = sorted({(i, 0.0, p) for i, _, p in keys})
    elif config.normalize == "phi0":
        ref_keys = sorted({(i, t, 0.0) for i, t, _ in keys})
    else:
        ref_keys = []
    pending = keys + ref_keys
    results = _map(evaluate, [(param_sets[i], t, p) for i, t, p in pending], threads)
    ref_vals = dict(zip(ref_keys, results[len(keys):]))

    table = ScanTable(config)
    for (i, t, p), (val, err, ok) in zip(keys, results[: len(keys)]):
        if config.normalize != "none":
            rv, rerr, rok = ref_vals[(i, 0.0, p) if config.normalize == "theta0" else (i, t, 0.0)]
            rel = val / rv
            err = abs(rel) * ((err / abs(val) if val else 0.0) + rerr / abs(rv))
            val, ok = rel, ok and rok
        table.rows.append(ScanRow(dict(param_sets[i]), t, p, float(val), float(err), bool(ok)))
    return table


# -- figure presets ------------------------------------------------------------

def figure_configs(number: int, model: str | None = None, kinematics: str | None = None) -> list[ScanConfig]:
    """Scan configurations that regenerate the data behind figures 1-4.

    All presets use p_i a = 10. Figure 1 defaults to small-angle kinematics;
    the others to exact kinematics.
    """
    if number == 1:
        return [ScanConfig(
            model=model or "gauss-gauss", quantity="total-ratio", b=0.0,
            sweep=Sweep("sigma", start=0.3, stop=10.0, count=30, spacing="log"),
            kinematics=kinematics or "small-angle", tol=1e-7,
        )]
    if number == 2:
        thetas = tuple(float(x) for x in np.linspace(0.0, 0.5, 51))
        return [ScanConfig(
            model=model or "gauss-gauss", quantity="avg-xsec", normalize="theta0",
            sweep=Sweep("sigma", values=(INF_SIGMA, 1.0, 0.3)), theta=thetas,
            kinematics=kinematics or "exact", tol=1e-9,
        )]
    if number == 3:
        if model not in (None, "gauss-gauss"):
            raise ConfigError("model", "figure 3 is defined for the gauss-gauss model only")
        return [
            ScanConfig(
                model="gauss-gauss", quantity="B2", sigma=s,
                sweep=Sweep("b", start=0.0, stop=5.0, count=51),
                kinematics=kinematics or "exact",
            )
            for s in (INF_SIGMA, 2.0, 1.0, 0.3)
        ]
    if number == 4:
        phis = tuple(float(x) for x in np.linspace(0.0, 2.0 * math.pi, 73))
        return [ScanConfig(
            model=model or "hydrogen", quantity="events", normalize="phi0", sigma=1.0,
            sweep=Sweep("b", values=(2.5, 5.0)), theta=(0.05, 0.1, 0.15), phi=phis,
            kinematics=kinematics or "exact", tol=1e-10,
        )]
    raise ConfigError("figure", "must be 1, 2, 3 or 4")


_FIGURE_COLUMNS = {
    1: ("sigma_ratio", "nu_ratio", "error", "converged"),
    2: ("sigma_ratio", "theta", "rel_value", "error", "converged"),
    3: ("sigma_ratio", "b_ratio", "B2"),
    4: ("b_ratio", "theta", "phi", "rel_value", "error", "converged"),
}


@dataclass
class FigureTable:
    number: int
    configs: list[ScanConfig]
    columns: tuple[str, ...]
    rows: list[tuple]
    all_converged: bool


def run_figure(number: int, model: str | None = None, kinematics: str | None = None,
               threads: int | None = None) -> FigureTable:
    configs = figure_configs(number, model, kinematics)
    rows: list[tuple] = []
    ok = True
    for cfg in configs:
        table = run_scan(cfg, threads)
        ok = ok and table.all_converged
        for r in table.rows:
            p = r.params
            if number == 1:
                rows.append((p["sigma"], r.value, r.error_estimate, r.converged))
            elif number == 2:
                rows.append((p["sigma"], r.theta, r.value, r.error_estimate, r.converged))
            elif number == 3:
                rows.append((p["sigma"], p["b"], r.value))
            else:
                rows.append((p["b"], r.theta, r.phi, r.value, r.error_estimate, r.converged))
    return FigureTable(number, configs, _FIGURE_COLUMNS[number], rows, ok)
