"""gee_evolver - 广义本征值方程 A|φ⟩ = λB|φ⟩ 的变分虚时演化求解器"""

__version__ = "1.0.0"
