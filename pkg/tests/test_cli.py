"""命令行接口测试"""

import json
import sys
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_help(runner):
    """顶层帮助列出全部子命令"""
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("solve", "oracle", "hydrogen", "decompose"):
        assert name in result.output


def test_decompose_problem(runner):
    """decompose --problem 输出规范顺序的 Pauli 项"""
    result = runner.invoke(cli, ["decompose", "--problem", "example1", "--which", "B"])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["1 II", "0.4 IZ", "0.3 ZI", "0.2 ZZ"]


def test_decompose_matrix_file(runner, tmp_path):
    """decompose 读取稠密矩阵文件"""
    path = tmp_path / "h.txt"
    path.write_text("1 1\n1 -1\n", encoding="utf-8")
    result = runner.invoke(cli, ["decompose", str(path)])
    assert result.exit_code == 0
    assert result.output.splitlines() == ["1 X", "1 Z"]


def test_decompose_errors(runner, tmp_path):
    """参数缺失为配置错误，非厄米矩阵为数值错误"""
    assert runner.invoke(cli, ["decompose"]).exit_code == 2

    path = tmp_path / "n.txt"
    path.write_text("0 1\n0 0\n", encoding="utf-8")
    assert runner.invoke(cli, ["decompose", str(path)]).exit_code == 3

    path.write_text("1 0 0\n0 1 0\n0 0 1\n", encoding="utf-8")
    assert runner.invoke(cli, ["decompose", str(path)]).exit_code == 3


def test_oracle_json(runner):
    """oracle 把本征对以 JSON 写到标准输出"""
    result = runner.invoke(cli, ["oracle", "example2"])
    assert result.exit_code == 0
    start = result.output.index("{")
    data = json.loads(result.output[start:])
    assert data["eigenvalues"] == pytest.approx([0.15])
    assert data["b_rank"] == 1


def test_oracle_pauli_files(runner, tmp_path):
    """oracle --a/--b 读取 Pauli 文件"""
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("1.0 I\n0.5 Z\n", encoding="utf-8")
    b.write_text("1.0 I\n", encoding="utf-8")
    result = runner.invoke(cli, ["oracle", "--a", str(a), "--b", str(b)])
    assert result.exit_code == 0
    data = json.loads(result.output[result.output.index("{"):])
    assert data["eigenvalues"] == pytest.approx([0.5, 1.5])

    assert runner.invoke(cli, ["oracle", "--a", str(a)]).exit_code == 2


def test_oracle_dense_files(runner, tmp_path):
    """oracle --dense 读取稠密矩阵"""
    a, b = tmp_path / "a.npy", tmp_path / "b.npy"
    np.save(a, np.diag([2.0, 3.0]))
    np.save(b, np.diag([1.0, 2.0]))
    result = runner.invoke(cli, ["oracle", "--dense", "--a", str(a), "--b", str(b)])
    assert result.exit_code == 0
    data = json.loads(result.output[result.output.index("{"):])
    assert data["eigenvalues"] == pytest.approx([1.5, 2.0])


def test_solve_example2(runner, tmp_path):
    """solve 写出产物并打印对照表"""
    out = tmp_path / "run"
    result = runner.invoke(cli, ["--seed", "1", "--out-dir", str(out), "solve", "example2"])
    assert result.exit_code == 0, result.output
    assert "λ0" in result.output
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["levels"][0]["method_lambda"] == pytest.approx(0.15, abs=1e-3)
    assert report["seed"] == 1


def test_solve_config_errors(runner, tmp_path):
    """未知预设与非法配置返回退出码 2"""
    assert runner.invoke(cli, ["solve", "no_such_preset"]).exit_code == 2

    bad = tmp_path / "bad.yaml"
    bad.write_text("levels:\n  - {d_tau: -0.1, tau_max: 1.0}\n", encoding="utf-8")
    assert runner.invoke(cli, ["solve", "--config", str(bad)]).exit_code == 2


def test_solve_stall_exit_code(runner, tmp_path):
    """演化停滞且残差过大时退出码为 4"""
    cfg = tmp_path / "stall.yaml"
    cfg.write_text(
        "problem: example2\n"
        "ansatz:\n  initial_theta: [1.5, 0.8, 2.3, 3.1]\n"
        "evolution:\n  residual_threshold: 1.0e-6\n"
        "levels:\n  - {d_tau: 0.01, tau_max: 0.03}\n",
        encoding="utf-8",
    )
    result = runner.invoke(cli, ["--out-dir", str(tmp_path / "o"), "solve", "--config", str(cfg)])
    assert result.exit_code == 4


def test_hydrogen_command(runner, tmp_path):
    """hydrogen 扫描少量网格点"""
    result = runner.invoke(cli, [
        "--out-dir", str(tmp_path), "hydrogen",
        "--x-grid", "0.8,0.9,1.0", "--alpha", "-1", "--alpha", "-2",
    ])
    assert result.exit_code == 0, result.output
    assert "x* = 0.9" in result.output
    assert (tmp_path / "hydrogen_sweep.csv").exists()


def test_hydrogen_bad_alphas(runner, tmp_path):
    """只给一个 α"""
    result = runner.invoke(cli, ["--out-dir", str(tmp_path), "hydrogen", "--alpha", "-1"])
    assert result.exit_code == 2


def test_unexpected_error_exit_code(runner, monkeypatch):
    """非 GeeError 的异常记录日志并以退出码 1 结束"""
    def broken(pencil):
        raise RuntimeError("boom")

    monkeypatch.setattr("src.main.PencilOracle.solve_pencil", broken)
    result = runner.invoke(cli, ["oracle", "example2"])
    assert result.exit_code == 1
    assert not isinstance(result.exception, RuntimeError)
