"""配置加载 - 默认配置、预设合并与命令行覆盖"""

import copy
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from src.core.exceptions import ConfigError

logger = logging.getLogger(__name__)

CONF_DIR = Path(__file__).parent.parent.parent / "conf"
PRESET_DIR = CONF_DIR / "presets"


def deep_merge(base: Dict, override: Dict) -> Dict:
    """递归合并映射；列表与标量整体替换"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigLoader:
    """读取 conf/config.yaml 与预设文件"""

    def __init__(self, default_path: Optional[str] = None):
        self.default_path = Path(default_path) if default_path else CONF_DIR / "config.yaml"

    @staticmethod
    def read_yaml(path: Path) -> Dict:
        """
        读取显式给出的 YAML 文件

        Raises:
            ConfigError: 文件不存在、语法错误（带行号）、为空或不是映射
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except FileNotFoundError:
            raise ConfigError(f"配置文件不存在: {path}")
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"第 {mark.line + 1} 行: " if mark is not None else ""
            raise ConfigError(f"{path}: {where}YAML 解析失败: {getattr(e, 'problem', e)}")
        if data is None:
            raise ConfigError(f"{path}: 配置文件为空")
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: 顶层必须为映射，实际为 {type(data).__name__}")
        return data

    def _load_config(self) -> Dict:
        """加载默认配置文件，缺失时使用内置默认值"""
        try:
            config = self.read_yaml(self.default_path)
            logger.debug(f"配置文件加载成功: {self.default_path}")
            return config
        except ConfigError as e:
            if self.default_path.exists():
                raise
            logger.warning(f"{e}，使用默认配置")
            return self._get_default_config()

    @staticmethod
    def _get_default_config() -> Dict:
        """获取默认配置"""
        return {
            "problem": "example1",
            "seed": None,
            "ansatz": {"layers": 1, "entanglement": "linear"},
            "evolution": {
                "d_tau": 0.01,
                "tau_max": 20.0,
                "gamma_regularization": 1.0e-6,
                "convergence_tol": 1.0e-7,
                "convergence_window": 10,
                "b_norm_floor": 1.0e-8,
                "estimator": "statevector",
                "shots": 0,
                "max_condition": 1.0e12,
                "residual_threshold": 1.0e-2,
                "log_every": 100,
            },
            "levels": [{"d_tau": 0.01, "tau_max": 20.0, "mu": 10.0}],
            "outputs": {"dir": "runs"},
            "fail_on_stall": True,
            "hydrogen": {
                "x_grid": "0.5:1.2:0.1",
                "alphas": [-1.0, -2.0],
                "Z": 1.0,
                "field": 0.01,
                "n_max": 2,
                "solver": "oracle",
                "workers": 1,
                "layers": 1,
                "evolution": {"d_tau": 0.05, "tau_max": 60.0},
                "outputs": {"dir": "runs/hydrogen"},
            },
            "logging": {"level": "INFO"},
        }

    @staticmethod
    def resolve_preset(preset: str) -> Path:
        """预设名（conf/presets/<name>.yaml）或文件路径"""
        candidate = Path(preset)
        if candidate.suffix in (".yaml", ".yml") or candidate.exists():
            return candidate
        path = PRESET_DIR / f"{preset}.yaml"
        if not path.exists():
            available = sorted(p.stem for p in PRESET_DIR.glob("*.yaml")) if PRESET_DIR.exists() else []
            raise ConfigError(f"未知预设: {preset}，可选 {available}")
        return path

    def load(self, preset: Optional[str] = None, config_path: Optional[str] = None,
             overrides: Optional[Dict[str, Any]] = None) -> Dict:
        """
        默认配置 ← 预设 ← 显式配置文件 ← 命令行覆盖，依次合并
        """
        merged = self._load_config()
        for source in (self.resolve_preset(preset) if preset else None,
                       Path(config_path) if config_path else None):
            if source is not None:
                merged = deep_merge(merged, self.read_yaml(source))
                logger.info(f"已加载配置: {source}")
        if overrides:
            merged = deep_merge(merged, overrides)
        return merged
