"""经典矩阵束求解器 - 特征多项式求根 + 零空间本征向量"""

import logging
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg
from numpy.polynomial import chebyshev

from src.core.exceptions import (
    ClosedFormUndefinedError,
    DegeneratePencilError,
    DimensionMismatchError,
    InvalidDimensionError,
    NonHermitianError,
    NotBNormalizableError,
    ZeroVectorError,
)
from src.models.pauli import PauliSum
from src.models.pencil import Eigenpair, EigenpairSet, Pencil

logger = logging.getLogger(__name__)

MAX_DIMENSION = 1 << 10
HERMITIAN_TOL = 1e-10
RESIDUAL_TOL = 1e-8
CLUSTER_TOL = 1e-9
COEFF_TRIM_TOL = 1e-11
B_NORM_FLOOR = 1e-12

MatrixLike = Union[np.ndarray, PauliSum]


def _dense(operator: MatrixLike) -> np.ndarray:
    if isinstance(operator, PauliSum):
        return operator.to_matrix()
    return np.asarray(operator, dtype=complex)


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(vector)))
    if abs(vector[k]) == 0:
        return vector
    return vector * (abs(vector[k]) / vector[k])


class PencilOracle:
    """稠密厄米矩阵束 A - λB 的参考解"""

    @staticmethod
    def make_pencil(A: MatrixLike, B: MatrixLike) -> Pencil:
        """
        校验并构造矩阵束

        Raises:
            DimensionMismatchError: A、B 非方阵或维度不一致
            NonHermitianError: 偏离厄米性超过 1e-10
            InvalidDimensionError: 维度超过 1024
        """
        a, b = _dense(A), _dense(B)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
            raise DimensionMismatchError(f"A {a.shape} 与 B {b.shape} 必须为同维方阵")
        if a.shape[0] > MAX_DIMENSION:
            raise InvalidDimensionError(f"维度 {a.shape[0]} 超出上限 {MAX_DIMENSION}")
        for name, mat in (("A", a), ("B", b)):
            deviation = float(np.max(np.abs(mat - mat.conj().T)))
            if deviation > HERMITIAN_TOL:
                raise NonHermitianError(f"{name} 偏离厄米性 {deviation:.3e}")
        return Pencil(a, b)

    # ------------------------------------------------------------------
    # 特征多项式
    # ------------------------------------------------------------------
    @staticmethod
    def _definite_sign(b: np.ndarray, rank_tol: float) -> int:
        """B 正定返回 1，负定返回 -1，否则 0"""
        eig_b = np.linalg.eigvalsh((b + b.conj().T) / 2)
        if eig_b.size and eig_b.min() > rank_tol:
            return 1
        if eig_b.size and eig_b.max() < -rank_tol:
            return -1
        return 0

    @staticmethod
    def _radius(a: np.ndarray, b: np.ndarray, svals_b: np.ndarray, rank_tol: float) -> float:
        """
        插值区间半径

        B 定号时谱落在 ±‖L⁻¹AL⁻ᴴ‖₂ 内（±B = LLᴴ），取其 1.05 倍；
        否则退回 2·max(1, ‖A‖₂ / σ_min⁺(B))。
        """
        sign = PencilOracle._definite_sign(b, rank_tol)
        if sign:
            lower = np.linalg.cholesky(sign * b)
            half = scipy.linalg.solve_triangular(lower, a, lower=True)
            reduced = scipy.linalg.solve_triangular(lower, half.conj().T, lower=True)
            spread = float(np.linalg.norm(reduced, 2))
            return 1.05 * spread if spread > 0 else 1.0
        norm_a = float(np.linalg.norm(a, 2))
        nonzero = svals_b[svals_b > rank_tol]
        scale = norm_a / nonzero.min() if nonzero.size else norm_a
        return 2.0 * max(1.0, scale)

    @staticmethod
    def _check_regular(a: np.ndarray, b: np.ndarray, radius: float) -> None:
        """在几个一般位置检查 A - λB 是否处处奇异"""
        for t in (0.1373, -0.4191, 0.7817):
            s = np.linalg.svd(a - t * radius * b, compute_uv=False)
            if s[0] > 0 and s[-1] / s[0] > 1e-12:
                return
        raise DegeneratePencilError("det(A - λB) 恒为零，矩阵束奇异")

    @staticmethod
    def _char_poly(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, float]:
        n = a.shape[0]
        svals_b = np.linalg.svd(b, compute_uv=False)
        rank_tol = 1e-10 * max(1.0, float(svals_b.max(initial=0.0)))
        radius = PencilOracle._radius(a, b, svals_b, rank_tol)
        PencilOracle._check_regular(a, b, radius)

        nodes = np.cos(np.pi * (np.arange(2 * (n + 1)) + 0.5) / (2 * (n + 1)))
        signs = np.empty(len(nodes))
        logs = np.empty(len(nodes))
        for k, t in enumerate(nodes):
            sign, logabs = np.linalg.slogdet(a - t * radius * b)
            signs[k] = sign.real
            logs[k] = logabs
        finite = np.isfinite(logs)
        shift = logs[finite].max() if finite.any() else 0.0
        values = np.where(finite, signs * np.exp(np.where(finite, logs - shift, 0.0)), 0.0)

        coeffs = chebyshev.chebfit(nodes, values, n)
        coeffs = coeffs / np.max(np.abs(coeffs))
        # B 满秩时次数恰为 n，不裁剪
        if int(np.sum(svals_b > rank_tol)) < n:
            coeffs = chebyshev.chebtrim(coeffs, COEFF_TRIM_TOL)
        return coeffs, radius

    @staticmethod
    def characteristic_polynomial(pencil: Pencil) -> Tuple[np.ndarray, float]:
        """
        在 [-R, R] 的 Chebyshev 节点上计算 det(A - λB) 并拟合 Chebyshev 级数

        返回的系数已按最大值归一，变量为 t = λ/R。B 奇异时裁去尾部的数值零。

        Returns:
            (chebyshev 系数, R)
        """
        return PencilOracle._char_poly(pencil.A, pencil.B)

    # ------------------------------------------------------------------
    # 求根后的精化
    # ------------------------------------------------------------------
    @staticmethod
    def _polish(a: np.ndarray, b: np.ndarray, lam: float,
                max_iter: int = 30) -> Tuple[float, np.ndarray]:
        """零空间 + 瑞利商迭代"""
        norm_b = float(np.linalg.norm(b, 2))
        v = None
        for _ in range(max_iter):
            _, _, vh = np.linalg.svd(a - lam * b)
            v = vh[-1].conj()
            bb = float(np.vdot(v, b @ v).real)
            if abs(bb) <= 1e-14 * max(norm_b, 1.0):
                break
            updated = float(np.vdot(v, a @ v).real) / bb
            if not np.isfinite(updated):
                break
            converged = abs(updated - lam) <= 1e-15 * max(1.0, abs(lam))
            lam = updated
            if converged:
                break
        return lam, v

    @staticmethod
    def _candidate_roots(a: np.ndarray, b: np.ndarray) -> Tuple[List[float], int]:
        """
        多项式的全部根都做精化，残差合格的留下

        复根（包括重根被数值误差推离实轴的情形）从实部出发精化，
        真正的复本征值残差不会合格。
        """
        coeffs, radius = PencilOracle._char_poly(a, b)
        degree = len(coeffs) - 1
        logger.debug(f"特征多项式次数 {degree} (维度 {a.shape[0]}), R = {radius:.4g}")
        if degree == 0:
            return [], degree

        scale = float(np.linalg.norm(a, 2))
        norm_b = float(np.linalg.norm(b, 2))
        accepted = []
        for root in chebyshev.chebroots(coeffs) * radius:
            lam, v = PencilOracle._polish(a, b, float(root.real))
            residual = float(np.linalg.norm(a @ v - lam * (b @ v)))
            if residual <= RESIDUAL_TOL * (scale + abs(lam) * norm_b):
                accepted.append(lam)
            else:
                logger.debug(f"舍弃候选根 {root:.6g}: 残差 {residual:.3e}")
        return accepted, degree

    @staticmethod
    def _cluster(values: List[float]) -> List[List[float]]:
        clusters: List[List[float]] = []
        for value in sorted(values):
            if clusters and abs(value - clusters[-1][0]) <= CLUSTER_TOL * max(1.0, abs(value)):
                clusters[-1].append(value)
            else:
                clusters.append([value])
        return clusters

    @staticmethod
    def _eigenvectors(a: np.ndarray, b: np.ndarray, lam: float,
                      basis: Optional[np.ndarray] = None) -> List[Eigenpair]:
        """
        λ 对应零空间的一组 B 正交基

        给出 basis（正交列）时只在其张成的子空间里找零空间。
        """
        if basis is None:
            basis = np.eye(a.shape[0], dtype=complex)
        shifted = basis.conj().T @ (a - lam * b) @ basis
        null = scipy.linalg.null_space(shifted, rcond=1e-8)
        if null.shape[1] == 0:
            _, _, vh = np.linalg.svd(shifted)
            null = vh[-1].conj().reshape(-1, 1)
        null = basis @ null
        gram = null.conj().T @ b @ null
        g, u = np.linalg.eigh((gram + gram.conj().T) / 2)
        vectors = null @ u
        scale = np.linalg.norm(a, 2) + abs(lam) * np.linalg.norm(b, 2)

        pairs = []
        for k in np.argsort(-g):
            vec = vectors[:, k]
            vec = vec / np.linalg.norm(vec)
            b_norm = float(g[k])
            if b_norm > B_NORM_FLOOR:
                vec = vec / np.sqrt(b_norm)
            vec = _fix_phase(vec)
            residual = float(np.linalg.norm(a @ vec - lam * (b @ vec)) / np.linalg.norm(vec))
            if residual > RESIDUAL_TOL * max(scale, 1e-300):
                logger.debug(f"λ={lam:.10g} 的零空间向量残差 {residual:.3e} 偏大")
            pairs.append(Eigenpair(float(lam), vec, b_norm, residual))
        return pairs

    @staticmethod
    def _complement(b: np.ndarray, pairs: List[Eigenpair]) -> Optional[np.ndarray]:
        """
        已求出本征向量 V 的 B 正交补 {w : VᴴBw = 0} 的正交基

        VᴴBV 奇异时补空间不与 span(V) 互补，返回 None。
        """
        v = np.column_stack([p.vector for p in pairs])
        overlap = v.conj().T @ b @ v
        smallest = np.min(np.abs(np.linalg.eigvalsh((overlap + overlap.conj().T) / 2)))
        if smallest <= B_NORM_FLOOR * max(1.0, float(np.linalg.norm(b, 2))):
            return None
        return scipy.linalg.null_space(v.conj().T @ b)

    @staticmethod
    def solve_pencil(pencil: Pencil) -> EigenpairSet:
        """
        求矩阵束的全部实有限本征值及本征向量

        B 正则时多项式次数等于维度，B 奇异时次数降低；重根按零空间维数给出多重度。
        求根漏掉的本征值在已求出向量的 B 正交补上再求一次：
        该补空间在 A、B 下不变，剩余本征对都落在里面。

        Raises:
            DegeneratePencilError: det(A - λB) 恒为零
        """
        a, b = pencil.A, pencil.B
        n = pencil.dim
        b_tol = 1e-10 * max(1.0, float(np.linalg.norm(b, 2)))
        b_rank = int(np.linalg.matrix_rank(b, tol=b_tol))
        accepted, degree = PencilOracle._candidate_roots(a, b)
        logger.debug(f"特征多项式次数 {degree} (维度 {n}, rank(B) = {b_rank})")

        result = EigenpairSet(b_rank=b_rank, dimension=n, polynomial_degree=degree)
        if degree == 0:
            logger.info("特征多项式为非零常数，无有限本征值")
            return result

        basis = None
        while True:
            found = []
            for cluster in PencilOracle._cluster(accepted):
                found.extend(PencilOracle._eigenvectors(a, b, float(np.mean(cluster)), basis))
            result.pairs.extend(found)
            if not found or len(result.pairs) >= n:
                break
            basis = PencilOracle._complement(b, result.pairs)
            if basis is None or basis.shape[1] == 0:
                break
            sub_a = basis.conj().T @ a @ basis
            sub_b = basis.conj().T @ b @ basis
            try:
                accepted, sub_degree = PencilOracle._candidate_roots(sub_a, sub_b)
            except DegeneratePencilError:
                break
            if sub_degree == 0:
                break
            logger.debug(f"在 {basis.shape[1]} 维 B 正交补上继续求根")

        if b_rank == n and PencilOracle._definite_sign(b, b_tol) and len(result.pairs) < n:
            logger.warning(f"B 定号但只求出 {len(result.pairs)}/{n} 个本征对")
        result.pairs.sort(key=lambda p: p.eigenvalue)
        logger.info(f"矩阵束求解完成: {len(result)} 个本征对, 不同本征值 {result.distinct_eigenvalues()}")
        return result

    # ------------------------------------------------------------------
    # 奇异 B 的解析解
    # ------------------------------------------------------------------
    @staticmethod
    def example2_matrices(a1: float, a2: float, a3: float, a4: float,
                          b: float) -> Tuple[np.ndarray, np.ndarray]:
        """X 型 A 与全一 B"""
        a = np.array([
            [a1, 0, 0, b],
            [0, a2, b, 0],
            [0, b, a3, 0],
            [b, 0, 0, a4],
        ], dtype=complex)
        return a, np.ones((4, 4), dtype=complex)

    @staticmethod
    def example2_closed_form(a1: float, a2: float, a3: float, a4: float,
                             b: float) -> Tuple[float, np.ndarray]:
        """
        全一 B 的唯一本征值与 B 归一本征向量

        Raises:
            ClosedFormUndefinedError: Q = 0
        """
        q = (a1 * a2 * a3 + a1 * a2 * a4 + a1 * a3 * a4 + a2 * a3 * a4
             - 2 * (a1 * a4 + a2 * a3) * b
             - (a1 + a2 + a3 + a4) * b ** 2
             + 4 * b ** 3)
        if abs(q) < 1e-14:
            raise ClosedFormUndefinedError(f"Q = {q:.3e}，解析解无定义")
        lam = (a1 * a2 * a3 * a4 - (a1 * a4 + a2 * a3) * b ** 2 + b ** 4) / q
        vector = np.array([
            (a4 - b) * (a2 * a3 - b ** 2),
            (a3 - b) * (a1 * a4 - b ** 2),
            (a2 - b) * (a1 * a4 - b ** 2),
            (a1 - b) * (a2 * a3 - b ** 2),
        ]) / q
        return float(lam), vector

    # ------------------------------------------------------------------
    # 度量
    # ------------------------------------------------------------------
    @staticmethod
    def fidelity(u, v) -> float:
        """
        单位归一后的 |⟨u|v⟩|²

        Raises:
            ZeroVectorError: 任一向量为零
        """
        u = np.asarray(u, dtype=complex).reshape(-1)
        v = np.asarray(v, dtype=complex).reshape(-1)
        if u.shape != v.shape:
            raise DimensionMismatchError(f"向量长度不一致: {u.shape} vs {v.shape}")
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu == 0 or nv == 0:
            raise ZeroVectorError("保真度需要非零向量")
        return float(abs(np.vdot(u, v)) ** 2 / (nu * nv) ** 2)

    @staticmethod
    def b_norm(v, B: MatrixLike) -> float:
        v = np.asarray(v, dtype=complex).reshape(-1)
        return float(np.vdot(v, _dense(B) @ v).real)

    @staticmethod
    def b_normalize(v, B: MatrixLike, floor: float = B_NORM_FLOOR) -> np.ndarray:
        """
        v / √(v†Bv)

        Raises:
            NotBNormalizableError: v†Bv ≤ floor
        """
        v = np.asarray(v, dtype=complex).reshape(-1)
        norm = PencilOracle.b_norm(v, B)
        if norm <= floor:
            raise NotBNormalizableError(f"B 范数 {norm:.3e} 非正，无法 B 归一化")
        return v / np.sqrt(norm)
