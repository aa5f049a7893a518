"""业务逻辑层"""

from .config_loader import ConfigLoader
from .runner import HydrogenRunner, SpectrumRunner

__all__ = ["ConfigLoader", "HydrogenRunner", "SpectrumRunner"]
