"""运行配置 - YAML 字典到数据类的校验转换"""

from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional

import numpy as np

from src.core.exceptions import ConfigError
from src.models.evolution import ESTIMATORS, EvolutionConfig

PROBLEM_NAMES = ("example1", "example2", "example3", "custom")
ENTANGLEMENTS = ("linear", "circular", "full")
DEFAULT_MU = 10.0


def _require_mapping(value: Any, path: str) -> Dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: 需要映射，实际为 {type(value).__name__}")
    return value


def _number(value: Any, path: str, positive: bool = False, allow_zero: bool = True) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: 需要数值，实际为 {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{path}: 数值必须有限")
    if positive and (value < 0 or (value == 0 and not allow_zero)):
        raise ConfigError(f"{path}: 必须为正，实际为 {value}")
    return value


def _integer(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: 需要整数，实际为 {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: 不能小于 {minimum}，实际为 {value}")
    return value


def _optional_seed(value: Any, path: str) -> Optional[int]:
    if value is None:
        return None
    return _integer(value, path, minimum=0)


def _float_list(value: Any, path: str) -> List[float]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{path}: 需要数值列表，实际为 {value!r}")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _reject_unknown(section: Dict, allowed, path: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}: 未知字段 {unknown}")


def parse_grid(spec: Any) -> List[float]:
    """
    解析 x 网格

    接受数值列表、逗号分隔字符串 "0.5,0.7" 或区间 "start:stop:step"（含端点）。
    """
    if isinstance(spec, (list, tuple)):
        grid = _float_list(spec, "x_grid")
    elif isinstance(spec, str):
        text = spec.strip()
        try:
            if ":" in text:
                start, stop, step = (float(p) for p in text.split(":"))
                if step <= 0:
                    raise ConfigError(f"x_grid: 步长必须为正: {text}")
                count = int(np.floor((stop - start) / step + 1e-9)) + 1
                grid = [round(start + i * step, 12) for i in range(count)]
            else:
                grid = [float(p) for p in text.split(",") if p.strip()]
        except ValueError:
            raise ConfigError(f"x_grid: 无法解析 {text!r}")
    else:
        raise ConfigError(f"x_grid: 需要列表或字符串，实际为 {spec!r}")
    if not grid:
        raise ConfigError("x_grid: 网格为空")
    if any(x <= 0 for x in grid):
        raise ConfigError(f"x_grid: 所有 x 必须为正: {grid}")
    return grid


_EVOLUTION_FIELDS = {f.name for f in fields(EvolutionConfig)}


def evolution_from_dict(data: Any, path: str = "evolution",
                        base: Optional[EvolutionConfig] = None) -> EvolutionConfig:
    """按字段校验并构造 EvolutionConfig；未给出的字段取 base"""
    data = _require_mapping(data, path)
    _reject_unknown(data, _EVOLUTION_FIELDS, path)
    values = dict(base.__dict__) if base is not None else {}
    for key, raw in data.items():
        where = f"{path}.{key}"
        if key in ("shots", "convergence_window", "log_every"):
            values[key] = _integer(raw, where, minimum=0 if key == "shots" else 1)
        elif key == "seed":
            values[key] = _optional_seed(raw, where)
        elif key == "estimator":
            if raw not in ESTIMATORS:
                raise ConfigError(f"{where}: 必须为 {ESTIMATORS} 之一，实际为 {raw!r}")
            values[key] = raw
        elif key == "mu_list":
            values[key] = _float_list(raw, where)
        else:
            values[key] = _number(raw, where)
    try:
        return EvolutionConfig(**values)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}")


@dataclass
class AnsatzSpec:
    layers: int = 1
    entanglement: str = "linear"
    initial_theta: Optional[List[float]] = None


@dataclass
class LevelSpec:
    """单个能级的步长、时长与紧缩强度"""
    d_tau: float
    tau_max: float
    mu: float = DEFAULT_MU
    initial_theta: Optional[List[float]] = None


@dataclass
class RunConfig:
    """一次 solve 运行的完整配置"""
    problem: str = "example1"
    a_file: Optional[str] = None
    b_file: Optional[str] = None
    ansatz: AnsatzSpec = field(default_factory=AnsatzSpec)
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    levels: List[LevelSpec] = field(default_factory=list)
    out_dir: str = "runs"
    fail_on_stall: bool = True

    @classmethod
    def from_dict(cls, data: Any, source: str = "<config>") -> "RunConfig":
        """
        校验配置字典

        Raises:
            ConfigError: 字段缺失、类型或取值非法，消息中带点分字段路径
        """
        if not isinstance(data, dict) or not data:
            raise ConfigError(f"{source}: 配置为空或不是映射")
        _reject_unknown(
            data,
            ("problem", "a_file", "b_file", "ansatz", "evolution", "levels",
             "outputs", "seed", "fail_on_stall", "oracle", "hydrogen", "logging"),
            source,
        )

        problem = data.get("problem", "example1")
        if problem not in PROBLEM_NAMES:
            raise ConfigError(f"problem: 必须为 {PROBLEM_NAMES} 之一，实际为 {problem!r}")
        a_file, b_file = data.get("a_file"), data.get("b_file")
        if problem == "custom" and not (a_file and b_file):
            raise ConfigError("custom 问题需要同时给出 a_file 与 b_file")

        evolution = evolution_from_dict(data.get("evolution"))
        if "seed" in data:
            evolution.seed = _optional_seed(data["seed"], "seed")

        ansatz_data = _require_mapping(data.get("ansatz"), "ansatz")
        _reject_unknown(ansatz_data, ("layers", "entanglement", "initial_theta"), "ansatz")
        entanglement = ansatz_data.get("entanglement", "linear")
        if entanglement not in ENTANGLEMENTS:
            raise ConfigError(f"ansatz.entanglement: 必须为 {ENTANGLEMENTS} 之一，实际为 {entanglement!r}")
        initial = ansatz_data.get("initial_theta")
        ansatz = AnsatzSpec(
            layers=_integer(ansatz_data.get("layers", 1), "ansatz.layers", minimum=1),
            entanglement=entanglement,
            initial_theta=_float_list(initial, "ansatz.initial_theta") if initial is not None else None,
        )

        raw_levels = data.get("levels")
        if raw_levels is None:
            raw_levels = [{}]
        if not isinstance(raw_levels, list) or not raw_levels:
            raise ConfigError("levels: 需要非空列表")
        levels = []
        for i, raw in enumerate(raw_levels):
            path = f"levels[{i}]"
            raw = _require_mapping(raw, path)
            _reject_unknown(raw, ("d_tau", "tau_max", "mu", "initial_theta"), path)
            d_tau = _number(raw.get("d_tau", evolution.d_tau), f"{path}.d_tau",
                            positive=True, allow_zero=False)
            tau_max = _number(raw.get("tau_max", evolution.tau_max), f"{path}.tau_max")
            if tau_max < d_tau:
                raise ConfigError(f"{path}.tau_max: 不能小于 d_tau ({tau_max} < {d_tau})")
            default_mu = evolution.mu_list[i] if i < len(evolution.mu_list) else DEFAULT_MU
            level_theta = raw.get("initial_theta")
            levels.append(LevelSpec(
                d_tau=d_tau,
                tau_max=tau_max,
                mu=_number(raw.get("mu", default_mu), f"{path}.mu"),
                initial_theta=(_float_list(level_theta, f"{path}.initial_theta")
                               if level_theta is not None else None),
            ))

        outputs = _require_mapping(data.get("outputs"), "outputs")
        fail_on_stall = data.get("fail_on_stall", True)
        if not isinstance(fail_on_stall, bool):
            raise ConfigError(f"fail_on_stall: 需要布尔值，实际为 {fail_on_stall!r}")

        return cls(
            problem=problem,
            a_file=a_file,
            b_file=b_file,
            ansatz=ansatz,
            evolution=evolution,
            levels=levels,
            out_dir=str(outputs.get("dir", "runs")),
            fail_on_stall=fail_on_stall,
        )


@dataclass
class HydrogenRunConfig:
    """hydrogen 子命令的配置"""
    x_grid: List[float] = field(default_factory=lambda: parse_grid("0.5:1.2:0.1"))
    alphas: List[float] = field(default_factory=lambda: [-1.0, -2.0])
    Z: float = 1.0
    field_strength: float = 0.01  # ℰ，YAML 键为 field
    n_max: int = 2
    solver: str = "oracle"
    workers: int = 1
    layers: int = 1
    entanglement: str = "linear"
    initial_theta: Optional[List[float]] = None
    evolution: EvolutionConfig = field(
        default_factory=lambda: EvolutionConfig(d_tau=0.05, tau_max=60.0)
    )
    out_dir: str = "runs/hydrogen"

    @classmethod
    def from_dict(cls, data: Any, path: str = "hydrogen") -> "HydrogenRunConfig":
        data = _require_mapping(data, path)
        _reject_unknown(
            data,
            ("x_grid", "alphas", "Z", "field", "n_max", "solver", "workers", "layers",
             "entanglement", "initial_theta", "evolution", "outputs"),
            path,
        )
        cfg = cls()
        if "x_grid" in data:
            cfg.x_grid = parse_grid(data["x_grid"])
        if "alphas" in data:
            cfg.alphas = _float_list(data["alphas"], f"{path}.alphas")
            if len(cfg.alphas) != 2 or cfg.alphas[0] == cfg.alphas[1]:
                raise ConfigError(f"{path}.alphas: 需要两个不同的 α，实际为 {cfg.alphas}")
            if any(a == 0 for a in cfg.alphas):
                raise ConfigError(f"{path}.alphas: α 不能为 0")
        if "Z" in data:
            cfg.Z = _number(data["Z"], f"{path}.Z", positive=True, allow_zero=False)
        if "field" in data:
            cfg.field_strength = _number(data["field"], f"{path}.field")
        if "n_max" in data:
            cfg.n_max = _integer(data["n_max"], f"{path}.n_max", minimum=1)
        if "solver" in data:
            if data["solver"] not in ("oracle", "evolver"):
                raise ConfigError(f"{path}.solver: 必须为 oracle 或 evolver，实际为 {data['solver']!r}")
            cfg.solver = data["solver"]
        if "workers" in data:
            cfg.workers = _integer(data["workers"], f"{path}.workers", minimum=1)
        if "layers" in data:
            cfg.layers = _integer(data["layers"], f"{path}.layers", minimum=1)
        if "entanglement" in data:
            if data["entanglement"] not in ENTANGLEMENTS:
                raise ConfigError(f"{path}.entanglement: 必须为 {ENTANGLEMENTS} 之一")
            cfg.entanglement = data["entanglement"]
        if data.get("initial_theta") is not None:
            cfg.initial_theta = _float_list(data["initial_theta"], f"{path}.initial_theta")
        if "evolution" in data:
            cfg.evolution = evolution_from_dict(data["evolution"], f"{path}.evolution", cfg.evolution)
        outputs = _require_mapping(data.get("outputs"), f"{path}.outputs")
        if "dir" in outputs:
            cfg.out_dir = str(outputs["dir"])
        return cfg
