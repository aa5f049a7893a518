"""Pauli 分解与文本格式测试"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core.exceptions import (
    DimensionMismatchError,
    InvalidDimensionError,
    NonHermitianError,
    PauliParseError,
)
from src.core.pauli_algebra import PauliAlgebra
from src.models.pauli import PauliSum, PauliTerm, pauli_word_matrix
from src.models.problems import get_problem


def test_single_qubit_matrices():
    """单比特 Pauli 矩阵与约定一致"""
    assert np.allclose(pauli_word_matrix("X"), [[0, 1], [1, 0]])
    assert np.allclose(pauli_word_matrix("Y"), [[0, -1j], [1j, 0]])
    assert np.allclose(pauli_word_matrix("Z"), [[1, 0], [0, -1]])


def test_qubit_zero_is_most_significant():
    """ZI 作用在最高位比特上"""
    zi = pauli_word_matrix("ZI")
    assert np.allclose(np.diag(zi), [1, 1, -1, -1])
    iz = pauli_word_matrix("IZ")
    assert np.allclose(np.diag(iz), [1, -1, 1, -1])
    assert np.allclose(pauli_word_matrix("XY"), np.kron(pauli_word_matrix("X"), pauli_word_matrix("Y")))


def test_canonical_form():
    """合并同类项、I<X<Y<Z 排序、裁剪小系数"""
    s = PauliSum.from_dict({"ZI": 0.4, "II": 1.0, "XX": 0.2, "IZ": 0.4})
    assert s.words == ("II", "IZ", "XX", "ZI")

    merged = PauliSum((PauliTerm(0.5, "XX"), PauliTerm(0.5, "XX"), PauliTerm(1e-15, "ZZ")), 2)
    assert merged.to_dict() == {"XX": 1.0}


def test_apply_matches_matrix():
    """apply 与稠密矩阵乘法一致"""
    s = get_problem("example3").B
    rng = np.random.default_rng(3)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert np.allclose(s.apply(v), s.to_matrix() @ v)


def test_decompose_example_matrices():
    """分解 Example I 的 A 得到原系数"""
    a = get_problem("example1").A
    result = PauliAlgebra.decompose(a.to_matrix())
    assert result.to_dict() == pytest.approx({"II": 1.0, "IZ": 0.4, "XX": 0.2, "ZI": 0.4})


def test_decompose_random_hermitian():
    """随机厄米矩阵分解后重构"""
    rng = np.random.default_rng(11)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = m + m.conj().T
    decomposed = PauliAlgebra.decompose(h)
    assert decomposed.num_qubits == 3
    assert np.allclose(PauliAlgebra.reconstruct(decomposed), h)
    assert "Y" in "".join(decomposed.words)


def test_decompose_rejects_bad_input():
    """维度不是 2 的幂或非厄米时报错"""
    with pytest.raises(InvalidDimensionError):
        PauliAlgebra.decompose(np.eye(3))
    with pytest.raises(InvalidDimensionError):
        PauliAlgebra.decompose(np.ones((2, 4)))
    with pytest.raises(NonHermitianError):
        PauliAlgebra.decompose(np.array([[0, 1], [0, 0]]))


def test_combine():
    """A - F·B"""
    p = get_problem("example1")
    shifted = PauliAlgebra.combine(p.A, p.B, 0.5)
    assert np.allclose(shifted.to_matrix(), p.A.to_matrix() - 0.5 * p.B.to_matrix())
    assert shifted.coeff("ZZ") == pytest.approx(-0.1)

    with pytest.raises(DimensionMismatchError):
        PauliAlgebra.combine(p.A, get_problem("example3").B, 1.0)


def test_parse_pauli_text():
    """解析 `<coeff> <word>`，忽略注释与空行"""
    text = """
    # Example I 的 B
    1.0 II
    0.3 ZI
    0.4 iz   # 小写也接受
    0.2 ZZ
    """
    s = PauliAlgebra.parse_pauli_text(text)
    assert s.to_dict() == pytest.approx(get_problem("example1").B.to_dict())

    again = PauliAlgebra.parse_pauli_text(PauliAlgebra.format_pauli_sum(s))
    assert again == s


def test_parse_errors_carry_line_number():
    """格式错误给出行号"""
    with pytest.raises(PauliParseError) as exc:
        PauliAlgebra.parse_pauli_text("1.0 II\n0.5 XQ\n")
    assert exc.value.line == 2

    with pytest.raises(PauliParseError) as exc:
        PauliAlgebra.parse_pauli_text("1.0 II\n\n0.5 XXX\n")
    assert exc.value.line == 3

    with pytest.raises(PauliParseError):
        PauliAlgebra.parse_pauli_text("abc II")
    with pytest.raises(PauliParseError):
        PauliAlgebra.parse_pauli_text("# 只有注释\n")


def _random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


@pytest.mark.parametrize("num_qubits", [1, 2, 3])
def test_decompose_is_linear_and_invertible(num_qubits):
    """分解对实系数线性组合是线性的，重构还原原矩阵"""
    rng = np.random.default_rng(40 + num_qubits)
    dim = 2 ** num_qubits
    for _ in range(5):
        m1, m2 = _random_hermitian(rng, dim), _random_hermitian(rng, dim)
        a, b = rng.normal(size=2)
        c1 = PauliAlgebra.decompose(m1).to_dict()
        c2 = PauliAlgebra.decompose(m2).to_dict()
        combined = PauliAlgebra.decompose(a * m1 + b * m2).to_dict()
        for word in set(c1) | set(c2) | set(combined):
            expected = a * c1.get(word, 0.0) + b * c2.get(word, 0.0)
            assert combined.get(word, 0.0) == pytest.approx(expected, abs=1e-10)
        assert np.allclose(PauliAlgebra.reconstruct(PauliAlgebra.decompose(m1)), m1, atol=1e-12)
