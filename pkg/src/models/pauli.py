"""Pauli 算符数据模型"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

import numpy as np

PAULI_LABELS = ("I", "X", "Y", "Z")

# 默认系数裁剪阈值
DROP_TOL = 1e-12


def word_masks(word: str) -> Tuple[int, int, int]:
    """
    计算 Pauli 字符串的位掩码

    qubit 0 对应最高位（与 A⊗B 的张量顺序一致）。

    Returns:
        (x_mask, z_mask, y_count)
    """
    m = len(word)
    x_mask = 0
    z_mask = 0
    y_count = 0
    for q, label in enumerate(word):
        bit = 1 << (m - 1 - q)
        if label in ("X", "Y"):
            x_mask |= bit
        if label in ("Z", "Y"):
            z_mask |= bit
        if label == "Y":
            y_count += 1
    return x_mask, z_mask, y_count


def bit_parity(values: np.ndarray, mask: int) -> np.ndarray:
    """逐元素计算 popcount(values & mask) 的奇偶"""
    bits = values & mask
    parity = np.zeros_like(values)
    while np.any(bits):
        parity ^= bits & 1
        bits = bits >> 1
    return parity


def word_phases(word: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    P|k⟩ = phase[k] |k ^ x_mask⟩

    Returns:
        (目标索引数组, 相位数组)
    """
    dim = 1 << len(word)
    k = np.arange(dim)
    x_mask, z_mask, y_count = word_masks(word)
    signs = 1 - 2 * bit_parity(k, z_mask)
    phases = (1j ** y_count) * signs
    return k ^ x_mask, phases.astype(complex)


def pauli_word_matrix(word: str) -> np.ndarray:
    """构造单个 Pauli 字符串的稠密矩阵"""
    dim = 1 << len(word)
    rows, phases = word_phases(word)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[rows, np.arange(dim)] = phases
    return mat


@dataclass(frozen=True)
class PauliTerm:
    """带实系数的 Pauli 字符串"""
    coeff: float
    word: str

    def __post_init__(self):
        if not self.word or any(c not in PAULI_LABELS for c in self.word):
            raise ValueError(f"非法 Pauli 字符串: {self.word!r}")
        if isinstance(self.coeff, complex) or np.iscomplexobj(self.coeff):
            if abs(complex(self.coeff).imag) > 0:
                raise ValueError(f"Pauli 系数必须为实数: {self.coeff}")
            object.__setattr__(self, "coeff", float(complex(self.coeff).real))
        else:
            object.__setattr__(self, "coeff", float(self.coeff))

    @property
    def num_qubits(self) -> int:
        return len(self.word)

    def to_matrix(self) -> np.ndarray:
        return self.coeff * pauli_word_matrix(self.word)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """计算 coeff · P|v⟩"""
        rows, phases = word_phases(self.word)
        out = np.zeros(len(vector), dtype=complex)
        out[rows] = phases * vector
        return self.coeff * out


@dataclass(frozen=True)
class PauliSum:
    """
    Pauli 项的实系数线性组合，规范合并形式

    构造时合并相同字符串、按 I<X<Y<Z 字典序排序并裁剪 |coeff| < drop_tol 的项。
    """
    terms: Tuple[PauliTerm, ...]
    num_qubits: int
    drop_tol: float = field(default=DROP_TOL, compare=False)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits 必须为正整数")
        merged: Dict[str, float] = {}
        for term in self.terms:
            if term.num_qubits != self.num_qubits:
                raise ValueError(
                    f"Pauli 字符串 {term.word} 长度与比特数 {self.num_qubits} 不一致"
                )
            merged[term.word] = merged.get(term.word, 0.0) + term.coeff
        canonical = tuple(
            PauliTerm(coeff, word)
            for word, coeff in sorted(merged.items())
            if abs(coeff) >= self.drop_tol
        )
        object.__setattr__(self, "terms", canonical)

    @classmethod
    def from_dict(cls, coeffs: Dict[str, float], num_qubits: int = None,
                  drop_tol: float = DROP_TOL) -> "PauliSum":
        """从 {word: coeff} 字典构造"""
        if num_qubits is None:
            if not coeffs:
                raise ValueError("空字典需要显式给出 num_qubits")
            num_qubits = len(next(iter(coeffs)))
        terms = tuple(PauliTerm(c, w) for w, c in coeffs.items())
        return cls(terms, num_qubits, drop_tol)

    @classmethod
    def identity(cls, num_qubits: int, coeff: float = 1.0) -> "PauliSum":
        return cls((PauliTerm(coeff, "I" * num_qubits),), num_qubits)

    def to_dict(self) -> Dict[str, float]:
        return {t.word: t.coeff for t in self.terms}

    def coeff(self, word: str) -> float:
        for term in self.terms:
            if term.word == word:
                return term.coeff
        return 0.0

    @property
    def words(self) -> Tuple[str, ...]:
        return tuple(t.word for t in self.terms)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterable[PauliTerm]:
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise ValueError("比特数不一致，无法相加")
        return PauliSum(self.terms + other.terms, self.num_qubits, self.drop_tol)

    def __mul__(self, scalar: float) -> "PauliSum":
        scalar = float(scalar)
        return PauliSum(
            tuple(PauliTerm(t.coeff * scalar, t.word) for t in self.terms),
            self.num_qubits,
            self.drop_tol,
        )

    __rmul__ = __mul__

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def to_matrix(self) -> np.ndarray:
        """稠密矩阵 Σ coeff · P"""
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        cols = np.arange(self.dim)
        for term in self.terms:
            rows, phases = word_phases(term.word)
            mat[rows, cols] += term.coeff * phases
        return mat

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """计算 S|v⟩"""
        vector = np.asarray(vector, dtype=complex)
        out = np.zeros(self.dim, dtype=complex)
        for term in self.terms:
            rows, phases = word_phases(term.word)
            out[rows] += term.coeff * phases * vector
        return out
