"""Experiment config loader.

Configs are YAML documents deep-merged on top of the packaged defaults
(`defaults/experiment.yaml`). A JSON sidecar written by a previous run is also
accepted: its `config` key holds the fully resolved config of that run.

Every validation failure raises `ConfigError` with the dotted field path and,
when the field came from a YAML file, its line.
"""

from __future__ import annotations
import copy
import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import yaml

from ..channel.fading import GeneralizedPareto, NakagamiPower, RayleighPower
from ..channel.pathloss import SINGULAR, PathLoss
from ..errors import ConfigError
from ..experiments.base import ExperimentConfig, Series, SweepAxis
from ..experiments.gain_curve import QUANTITIES as GAIN_QUANTITIES
from ..experiments.registry import get_experiment_class, list_experiments
from ..experiments.sweep import axis_values, iter_points, list_parameters
from ..experiments.validate import list_checks
from ..geometry.models import ClusterModel, FixedCount, MaternBall, PoissonCount, ThomasGaussian
from ..montecarlo.config import NetworkConfig, SimSpec
from ..pgfl.quadrature import QuadratureSpec
from ..run_id import resolve_out_dir, resolve_run_id
from ..writers.registry import list_writers

log = logging.getLogger("clusternet.config")

DEFAULTS_PATH = os.path.join(os.path.dirname(__file__), "defaults", "experiment.yaml")

Lines = Dict[str, int]

# experiments whose analytic side needs a Laplace transform of h (Rayleigh closed forms)
RAYLEIGH_ONLY = ("gain-curve", "capacity-sweep", "spread-spectrum")
SUCCESS_ANALYTIC = ("analytic", "poisson", "bounds")
SUCCESS_METHODS = SUCCESS_ANALYTIC + ("montecarlo",)
MAX_NAKAGAMI_M = 5


def _line_map(node: Any, prefix: str = "", out: Optional[Lines] = None) -> Lines:
    """Dotted path -> 1-based line for every key of a composed YAML document."""
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            path = f"{prefix}.{key.value}" if prefix else str(key.value)
            out[path] = key.start_mark.line + 1
            _line_map(value, path, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            path = f"{prefix}[{i}]"
            out[path] = item.start_mark.line + 1
            _line_map(item, path, out)
    return out


def _line_for(lines: Lines, field: str) -> Optional[int]:
    """Line of `field` or of its nearest ancestor present in the file."""
    path = field
    while path:
        if path in lines:
            return lines[path]
        cut = max(path.rfind("."), path.rfind("["))
        path = path[:cut] if cut > 0 else ""
    return None


def _fail(message: str, field: str, lines: Lines) -> ConfigError:
    return ConfigError(message, field=field, line=_line_for(lines, field))


def load_yaml(path: str) -> Tuple[Dict[str, Any], Lines]:
    """Parse one YAML file; return the mapping and its key line numbers."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    try:
        data = yaml.safe_load(text) or {}
        lines = _line_map(yaml.compose(text)) if data else {}
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"YAML parse error in {path}: {problem}", line=line) from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping, got {type(data).__name__}", line=1)
    return data, lines


def load_sidecar(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read sidecar {path}: {e}") from e
    if not isinstance(data, dict) or not isinstance(data.get("config"), dict):
        raise ConfigError(f"sidecar {path} has no 'config' mapping", field="config")
    return data["config"]


def load_defaults() -> Dict[str, Any]:
    with open(DEFAULTS_PATH, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge; a mapping whose `kind` changes replaces the base mapping."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        current = out.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            if "kind" in value and "kind" in current and value["kind"] != current["kind"]:
                out[key] = copy.deepcopy(value)
            else:
                out[key] = deep_merge(current, value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _num(
    section: Dict[str, Any],
    key: str,
    field: str,
    lines: Lines,
    *,
    integer: bool = False,
    allow_none: bool = False,
) -> Any:
    value = section.get(key)
    where = f"{field}.{key}"
    if value is None:
        if allow_none:
            return None
        raise _fail(f"missing value for {key}", where, lines)
    if isinstance(value, bool):
        raise _fail(f"{key} must be a number, got {value!r}", where, lines)
    try:
        # YAML 1.1 reads `1e-3` as a string; accept it here
        number = float(value)
    except (TypeError, ValueError):
        raise _fail(f"{key} must be a number, got {value!r}", where, lines) from None
    if integer:
        if number != int(number):
            raise _fail(f"{key} must be an integer, got {value!r}", where, lines)
        return int(number)
    return number


def _check_keys(section: Any, allowed: Tuple[str, ...], field: str, lines: Lines) -> Dict[str, Any]:
    if not isinstance(section, dict):
        raise _fail(f"{field} must be a mapping, got {type(section).__name__}", field, lines)
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise _fail(
            f"unknown key(s) {unknown} in {field}; allowed: {list(allowed)}",
            f"{field}.{unknown[0]}",
            lines,
        )
    return section


def _kind(section: Dict[str, Any], kinds: Tuple[str, ...], field: str, lines: Lines) -> str:
    kind = section.get("kind")
    if kind not in kinds:
        raise _fail(f"unknown kind {kind!r}; available: {list(kinds)}", f"{field}.kind", lines)
    return str(kind)


def _build(factory, field: str, lines: Lines, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ValueError as e:
        raise _fail(str(e), field, lines) from e


def build_cluster(d: Dict[str, Any], field: str, lines: Lines) -> ClusterModel:
    keys = ("parent_intensity", "mean_cluster_size", "scattering", "count")
    d = _check_keys(d, keys, field, lines)
    lam_p = _num(d, "parent_intensity", field, lines)
    sf = f"{field}.scattering"
    sc = d.get("scattering") or {}
    if _kind(sc, ("thomas", "matern"), sf, lines) == "thomas":
        _check_keys(sc, ("kind", "sigma"), sf, lines)
        scattering = _build(ThomasGaussian, f"{sf}.sigma", lines, _num(sc, "sigma", sf, lines))
    else:
        _check_keys(sc, ("kind", "radius"), sf, lines)
        scattering = _build(MaternBall, f"{sf}.radius", lines, _num(sc, "radius", sf, lines))
    cf = f"{field}.count"
    count = d.get("count") or {"kind": "poisson"}
    if _kind(count, ("poisson", "fixed"), cf, lines) == "fixed":
        _check_keys(count, ("kind", "n"), cf, lines)
        n = count.get("n", d.get("mean_cluster_size"))
        n = _num({"n": n}, "n", cf, lines, integer=True)
        law = _build(FixedCount, f"{cf}.n", lines, n)
        if d.get("mean_cluster_size") is not None and float(d["mean_cluster_size"]) != n:
            log.info(f"{field}: FixedCount({n}) sets mean_cluster_size to {n}")
        return _build(ClusterModel, field, lines, lam_p, float(n), scattering, law)
    _check_keys(count, ("kind",), cf, lines)
    cbar = _num(d, "mean_cluster_size", field, lines)
    return _build(ClusterModel, field, lines, lam_p, cbar, scattering, PoissonCount())


def build_fading(d: Dict[str, Any], field: str, lines: Lines):
    kind = _kind(d, ("rayleigh", "nakagami", "pareto"), field, lines)
    if kind == "rayleigh":
        _check_keys(d, ("kind", "mu"), field, lines)
        mu = _num({"mu": d.get("mu", 1.0)}, "mu", field, lines)
        return _build(RayleighPower, field, lines, mu)
    if kind == "nakagami":
        _check_keys(d, ("kind", "m", "omega"), field, lines)
        vals = {"m": d.get("m", 1), "omega": d.get("omega", 1.0)}
        return _build(
            NakagamiPower,
            field,
            lines,
            _num(vals, "m", field, lines, integer=True),
            _num(vals, "omega", field, lines),
        )
    _check_keys(d, ("kind", "k", "sigma", "theta"), field, lines)
    vals = {"k": d.get("k", 1.0), "sigma": d.get("sigma", 1.0), "theta": d.get("theta", 0.0)}
    return _build(
        GeneralizedPareto,
        field,
        lines,
        _num(vals, "k", field, lines),
        _num(vals, "sigma", field, lines),
        _num(vals, "theta", field, lines),
    )


def build_network(
    d: Dict[str, Any], field: str = "network", lines: Optional[Lines] = None
) -> NetworkConfig:
    lines = lines or {}
    keys = ("cluster", "pathloss", "fading", "threshold", "link_distance", "noise")
    d = _check_keys(d, keys, field, lines)
    cluster = build_cluster(d.get("cluster") or {}, f"{field}.cluster", lines)
    pf = f"{field}.pathloss"
    pl = _check_keys(d.get("pathloss") or {}, ("kind", "alpha"), pf, lines)
    pathloss = _build(
        PathLoss, pf, lines, _kind(pl, PathLoss.kinds, pf, lines), _num(pl, "alpha", pf, lines)
    )
    fading = build_fading(d.get("fading") or {}, f"{field}.fading", lines)
    return _build(
        NetworkConfig,
        field,
        lines,
        cluster,
        pathloss,
        fading,
        _num(d, "threshold", field, lines),
        _num(d, "link_distance", field, lines),
        _num({"noise": d.get("noise", 0.0)}, "noise", field, lines),
    )


def build_simulation(d: Dict[str, Any], lines: Lines) -> SimSpec:
    keys = ("trials", "radius", "tail_tolerance", "batch_size", "workers", "progress")
    d = _check_keys(d, keys, "simulation", lines)
    return _build(
        SimSpec,
        "simulation",
        lines,
        trials=_num(d, "trials", "simulation", lines, integer=True),
        radius=_num(d, "radius", "simulation", lines, allow_none=True),
        tail_tolerance=_num(d, "tail_tolerance", "simulation", lines),
        batch_size=_num(d, "batch_size", "simulation", lines, integer=True),
        workers=_num(d, "workers", "simulation", lines, integer=True),
        progress=bool(d.get("progress", False)),
    )


def build_quadrature(d: Dict[str, Any], lines: Lines) -> QuadratureSpec:
    keys = ("rel_tol", "abs_tol", "r_out", "r_in", "max_subdivisions")
    d = _check_keys(d, keys, "quadrature", lines)
    return _build(
        QuadratureSpec,
        "quadrature",
        lines,
        rel_tol=_num(d, "rel_tol", "quadrature", lines),
        abs_tol=_num(d, "abs_tol", "quadrature", lines),
        r_out=_num(d, "r_out", "quadrature", lines, allow_none=True),
        r_in=_num(d, "r_in", "quadrature", lines, allow_none=True),
        max_subdivisions=_num(d, "max_subdivisions", "quadrature", lines, integer=True),
    )


def build_sweep(d: Dict[str, Any], kind: str, lines: Lines) -> Optional[SweepAxis]:
    keys = ("parameter", "min", "max", "points", "scale", "values", "series")
    d = _check_keys(d, keys, "sweep", lines)
    cls = get_experiment_class(kind)
    if not cls.needs_sweep:
        return None
    name = d.get("parameter")
    if name not in list_parameters():
        raise _fail(
            f"unknown sweep parameter {name!r}; available: {list_parameters()}",
            "sweep.parameter",
            lines,
        )
    if cls.sweep_parameters is not None and name not in cls.sweep_parameters:
        raise _fail(
            f"experiment '{kind}' sweeps one of {list(cls.sweep_parameters)}, got {name!r}",
            "sweep.parameter",
            lines,
        )
    scale = d.get("scale") or "lin"
    if d.get("values") is not None:
        raw = d["values"]
        if not isinstance(raw, list) or len(raw) < 2:
            raise _fail("sweep.values must list at least 2 values", "sweep.values", lines)
        values = tuple(
            _num({"v": v}, "v", f"sweep.values[{i}]", lines) for i, v in enumerate(raw)
        )
    else:
        points = _num(d, "points", "sweep", lines, integer=True)
        if points < 2:
            raise _fail(f"sweep needs points >= 2, got {points}", "sweep.points", lines)
        lo, hi = _num(d, "min", "sweep", lines), _num(d, "max", "sweep", lines)
        values = _build(axis_values, "sweep", lines, lo, hi, points, scale)
    return SweepAxis(str(name), values, str(scale))


def build_series(
    doc: Dict[str, Any], options: Dict[str, Any], lines: Lines
) -> Tuple[Series, ...]:
    base = doc.get("network") or {}
    items = (doc.get("sweep") or {}).get("series") or []
    if not isinstance(items, list):
        raise _fail("sweep.series must be a list", "sweep.series", lines)
    if not items:
        return (Series("", build_network(base, "network", lines), {}),)
    out: List[Series] = []
    labels = set()
    for i, item in enumerate(items):
        field = f"sweep.series[{i}]"
        item = _check_keys(item, ("label", "network", "experiment"), field, lines)
        label = str(item.get("label") or i)
        if label in labels:
            raise _fail(f"duplicate series label {label!r}", f"{field}.label", lines)
        labels.add(label)
        merged = deep_merge(base, item.get("network") or {})
        network = build_network(merged, f"{field}.network", lines)
        overrides = item.get("experiment") or {}
        _check_keys(overrides, tuple(options), f"{field}.experiment", lines)
        out.append(Series(label, network, dict(overrides)))
    return tuple(out)


def _check_combinations(cfg: ExperimentConfig, lines: Lines) -> None:
    """Reject combinations the analytic side cannot evaluate."""
    kind = cfg.kind
    for i, series in enumerate(cfg.series):
        net = series.network
        nf = "network" if not series.label else f"sweep.series[{i}].network"
        methods = cfg.option("methods", series, ["analytic"])
        analytic = kind in RAYLEIGH_ONLY or (
            kind == "success-curve" and bool(set(methods) & set(SUCCESS_ANALYTIC))
        )
        if kind == "success-curve":
            bad = sorted(set(methods) - set(SUCCESS_METHODS))
            if bad:
                raise _fail(
                    f"unknown success-curve method(s) {bad}; available: {list(SUCCESS_METHODS)}",
                    "experiment.methods",
                    lines,
                )
        if analytic and isinstance(net.fading, GeneralizedPareto):
            raise _fail(
                f"{net.fading.kind} fading has no Laplace transform, so analytic '{kind}' "
                "is unavailable; use Rayleigh fading or methods: [montecarlo]",
                f"{nf}.fading.kind",
                lines,
            )
        if kind in RAYLEIGH_ONLY and not isinstance(net.fading, RayleighPower):
            raise _fail(
                f"'{kind}' uses Rayleigh closed forms, got {net.fading.kind} fading",
                f"{nf}.fading.kind",
                lines,
            )
        if net.noise != 0 and (kind in RAYLEIGH_ONLY or ("bounds" in methods and analytic)):
            raise _fail(
                f"'{kind}' bounds assume noise = 0, got {net.noise}", f"{nf}.noise", lines
            )
        m = cfg.option("nakagami_m", series)
        if m is not None:
            if isinstance(net.cluster.count_law, FixedCount):
                raise _fail(
                    "nakagami_m needs Poisson cluster sizes; FixedCount is unsupported",
                    "experiment.nakagami_m",
                    lines,
                )
            if int(m) != m or not 1 <= int(m) <= MAX_NAKAGAMI_M:
                raise _fail(
                    f"nakagami_m must be an integer in 1..{MAX_NAKAGAMI_M}, got {m}",
                    "experiment.nakagami_m",
                    lines,
                )
            if net.noise != 0:
                raise _fail("nakagami_m assumes noise = 0", f"{nf}.noise", lines)
        if (
            kind == "ccdf"
            and cfg.option("report_mean", series, False)
            and cfg.option("conditioned", series, True)
            and net.pathloss.kind == SINGULAR
        ):
            raise _fail(
                "conditioned mean interference diverges under singular path loss; "
                "use bounded or clipped path loss or set report_mean: false",
                "experiment.report_mean",
                lines,
            )
        quantity = cfg.option("quantity", series, "gain")
        if kind == "gain-curve" and quantity not in GAIN_QUANTITIES:
            raise _fail(
                f"unknown gain quantity {quantity!r}; available: {list(GAIN_QUANTITIES)}",
                "experiment.quantity",
                lines,
            )
        checks = cfg.option("checks", series)
        if kind == "validate" and checks:
            bad = sorted(set(checks) - set(list_checks()))
            if bad:
                raise _fail(
                    f"unknown check(s) {bad}; available: {list_checks()}",
                    "experiment.checks",
                    lines,
                )
        eps = cfg.option("epsilon", series)
        if kind in ("capacity-sweep", "spread-spectrum") and not 0 < float(eps) < 1:
            raise _fail(f"epsilon must lie in (0, 1), got {eps}", "experiment.epsilon", lines)
    if cfg.sweep is not None:
        try:
            for _ in iter_points(cfg):
                pass
        except ValueError as e:
            raise _fail(str(e), "sweep.parameter", lines) from e
        if cfg.sweep.parameter == "spreading" and min(cfg.sweep.values) < 1:
            raise _fail("spreading gain values must be >= 1", "sweep.values", lines)
        if cfg.sweep.parameter == "epsilon" and not all(0 < v < 1 for v in cfg.sweep.values):
            raise _fail("epsilon values must lie in (0, 1)", "sweep.values", lines)
        if cfg.sweep.parameter == "level" and min(cfg.sweep.values) <= 0:
            raise _fail("interference levels must be > 0", "sweep.values", lines)
        if cfg.sweep.parameter == "mean_cluster_size" and min(cfg.sweep.values) <= 0:
            raise _fail("mean_cluster_size values must be > 0", "sweep.values", lines)


def resolve_document(
    path: str,
    *,
    kind: Optional[str] = None,
    seed: Optional[int] = None,
    out_dir: Optional[str] = None,
    workers: Optional[int] = None,
) -> Tuple[Dict[str, Any], Lines]:
    """Defaults <- file <- CLI flags, with run_id and out_dir resolved."""
    if path.endswith(".json"):
        user, lines = load_sidecar(path), {}
    else:
        user, lines = load_yaml(path)
    known = set(load_defaults())
    unknown = sorted(set(user) - known)
    if unknown:
        raise _fail(
            f"unknown top-level section(s) {unknown}; allowed: {sorted(known)}", unknown[0], lines
        )
    doc = deep_merge(load_defaults(), user)
    if kind is not None:
        doc["experiment"]["kind"] = kind
    if seed is not None:
        doc["run"]["seed"] = int(seed)
    if workers is not None:
        doc["simulation"]["workers"] = int(workers)
    run_id = resolve_run_id(doc)
    doc["run"]["run_id"] = run_id
    doc["run"]["out_dir"] = out_dir if out_dir is not None else resolve_out_dir(doc, run_id)
    return doc, lines


def build_experiment_config(
    doc: Dict[str, Any], lines: Optional[Lines] = None
) -> ExperimentConfig:
    lines = lines or {}
    experiment = dict(doc.get("experiment") or {})
    kind = experiment.pop("kind", None)
    if kind not in list_experiments():
        raise _fail(
            f"unknown experiment kind {kind!r}; available: {list_experiments()}",
            "experiment.kind",
            lines,
        )
    run = doc.get("run") or {}
    seed = _num(run, "seed", "run", lines, integer=True)
    if seed < 0:
        raise _fail(f"seed must be >= 0, got {seed}", "run.seed", lines)
    output = _check_keys(doc.get("output") or {}, ("formats", "write_patterns"), "output", lines)
    formats = tuple(output.get("formats") or ("csv",))
    for name in formats:
        if name not in list_writers():
            raise _fail(
                f"unknown output format {name!r}; available: {list_writers()}",
                "output.formats",
                lines,
            )
    cfg = ExperimentConfig(
        kind=str(kind),
        series=build_series(doc, experiment, lines),
        sweep=build_sweep(doc.get("sweep") or {}, str(kind), lines),
        simulation=build_simulation(doc.get("simulation") or {}, lines),
        quadrature=build_quadrature(doc.get("quadrature") or {}, lines),
        options=experiment,
        seed=seed,
        run_id=str(run.get("run_id") or kind),
        out_dir=str(run.get("out_dir") or f"runs/{kind}"),
        log_dir=run.get("log_dir"),
        formats=formats,
        write_patterns=_num(output, "write_patterns", "output", lines, integer=True),
        raw=doc,
    )
    _check_combinations(cfg, lines)
    return cfg


def load_experiment_config(
    path: str,
    *,
    kind: Optional[str] = None,
    seed: Optional[int] = None,
    out_dir: Optional[str] = None,
    workers: Optional[int] = None,
) -> ExperimentConfig:
    doc, lines = resolve_document(path, kind=kind, seed=seed, out_dir=out_dir, workers=workers)
    return build_experiment_config(doc, lines)
