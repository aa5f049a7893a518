"""Pauli 代数 - 稠密厄米矩阵与 Pauli 和之间的转换"""

import itertools
import logging

import numpy as np

from src.core.exceptions import (
    DimensionMismatchError,
    InvalidDimensionError,
    NonHermitianError,
    PauliParseError,
)
from src.models.pauli import DROP_TOL, PAULI_LABELS, PauliSum, PauliTerm, word_masks, bit_parity

logger = logging.getLogger(__name__)


class PauliAlgebra:
    """Pauli 分解、重构与组合"""

    @staticmethod
    def num_qubits_of(matrix: np.ndarray) -> int:
        """
        由矩阵维度得到比特数

        Raises:
            InvalidDimensionError: 非方阵或维度不是 2 的幂
        """
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidDimensionError(f"需要方阵，实际形状: {matrix.shape}")
        dim = matrix.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise InvalidDimensionError(f"矩阵维度 {dim} 不是 2 的幂")
        return dim.bit_length() - 1

    @staticmethod
    def check_hermitian(matrix: np.ndarray, tol: float = 1e-10) -> None:
        deviation = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
        if deviation > tol:
            raise NonHermitianError(f"矩阵偏离厄米性 {deviation:.3e} > {tol:.1e}")

    @staticmethod
    def decompose(matrix: np.ndarray, drop_tol: float = DROP_TOL,
                  hermitian_tol: float = 1e-10) -> PauliSum:
        """
        将 2^m x 2^m 厄米矩阵分解为 Pauli 和

        coeff(P) = trace(P·H) / 2^m，按 trace(P·H) = Σ_k phase(k) H[k, k^x] 逐字符串计算，
        不构造 Kronecker 积。

        Args:
            matrix: 厄米矩阵
            drop_tol: |coeff| 低于该值的项被省略
            hermitian_tol: 厄米性容差

        Returns:
            规范形式的 PauliSum
        """
        matrix = np.asarray(matrix, dtype=complex)
        m = PauliAlgebra.num_qubits_of(matrix)
        PauliAlgebra.check_hermitian(matrix, hermitian_tol)

        dim = 1 << m
        k = np.arange(dim)
        terms = []
        for labels in itertools.product(PAULI_LABELS, repeat=m):
            word = "".join(labels)
            x_mask, z_mask, y_count = word_masks(word)
            signs = 1 - 2 * bit_parity(k, z_mask)
            trace = (1j ** y_count) * np.sum(signs * matrix[k, k ^ x_mask])
            coeff = trace / dim
            if abs(coeff.imag) > hermitian_tol:
                raise NonHermitianError(f"{word} 系数含虚部 {coeff.imag:.3e}")
            if abs(coeff.real) >= drop_tol:
                terms.append(PauliTerm(coeff.real, word))
        result = PauliSum(tuple(terms), m, drop_tol)
        logger.debug(f"分解 {dim}x{dim} 矩阵得到 {len(result)} 项")
        return result

    @staticmethod
    def reconstruct(pauli_sum: PauliSum) -> np.ndarray:
        """Σ coeff · dense(word)"""
        return pauli_sum.to_matrix()

    @staticmethod
    def combine(a: PauliSum, b: PauliSum, f: float) -> PauliSum:
        """
        计算 A - F·B

        Raises:
            DimensionMismatchError: 比特数不一致
        """
        if a.num_qubits != b.num_qubits:
            raise DimensionMismatchError(
                f"A 与 B 比特数不一致: {a.num_qubits} != {b.num_qubits}"
            )
        return PauliSum(a.terms + (-float(f) * b).terms, a.num_qubits, a.drop_tol)

    @staticmethod
    def format_pauli_sum(pauli_sum: PauliSum, precision: int = 12) -> str:
        """序列化为 `<coeff> <word>` 行"""
        return "\n".join(
            f"{term.coeff:.{precision}g} {term.word}" for term in pauli_sum.terms
        ) + "\n"

    @staticmethod
    def parse_pauli_text(text: str) -> PauliSum:
        """
        解析 `<coeff> <word>` 文本，忽略空行与 # 注释

        Raises:
            PauliParseError: 行格式错误、标签非法或字符串长度不一致
        """
        terms = []
        num_qubits = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PauliParseError(f"期望 '<coeff> <word>'，实际: {raw.strip()!r}", lineno)
            try:
                coeff = float(parts[0])
            except ValueError:
                raise PauliParseError(f"系数无法解析为实数: {parts[0]!r}", lineno)
            word = parts[1].upper()
            if any(c not in PAULI_LABELS for c in word):
                raise PauliParseError(f"非法 Pauli 字符串: {parts[1]!r}", lineno)
            if num_qubits is None:
                num_qubits = len(word)
            elif len(word) != num_qubits:
                raise PauliParseError(
                    f"字符串长度 {len(word)} 与前文 {num_qubits} 不一致", lineno
                )
            terms.append(PauliTerm(coeff, word))
        if num_qubits is None:
            raise PauliParseError("Pauli 文本为空")
        return PauliSum(tuple(terms), num_qubits)
