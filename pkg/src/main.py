"""主入口 - CLI 命令行接口"""

import functools
import logging
import sys

import click

from src.adapters.artifacts import OperatorReader, dumps
from src.core.exceptions import ConfigError, GeeError
from src.core.oracle import PencilOracle
from src.core.pauli_algebra import PauliAlgebra
from src.models.problems import PROBLEMS, get_problem
from src.models.run_config import HydrogenRunConfig, RunConfig
from src.services.config_loader import ConfigLoader
from src.services.runner import HydrogenRunner, SpectrumRunner

logger = logging.getLogger(__name__)


# 配置日志
def setup_logging(level: str = "INFO"):
    """设置日志"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="[%(levelname)s] %(message)s",
    )
    logging.getLogger().setLevel(getattr(logging, level.upper(), logging.INFO))


def _apply_config_logging(ctx: click.Context, config: dict) -> None:
    if ctx.obj.get("verbose"):
        return
    level = (config.get("logging") or {}).get("level")
    if level:
        setup_logging(str(level))


def handle_errors(func):
    """按异常类别映射退出码：1 未预期错误，2 配置错误，3 数值失败，4 不收敛，130 用户中断"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except KeyboardInterrupt:
            logger.info("用户中断操作")
            sys.exit(130)
        except GeeError as e:
            logger.error(f"{type(e).__name__}: {e}", exc_info=ctx.obj.get("verbose", False))
            sys.exit(e.exit_code)
        except (click.ClickException, click.exceptions.Exit):
            raise
        except Exception as e:
            logger.error(f"运行过程中发生错误: {e}", exc_info=ctx.obj.get("verbose", False))
            sys.exit(1)

    return wrapper


def _solve_overrides(ctx: click.Context) -> dict:
    overrides = {}
    if ctx.obj.get("seed") is not None:
        overrides["seed"] = ctx.obj["seed"]
    if ctx.obj.get("shots") is not None:
        overrides["evolution"] = {"shots": ctx.obj["shots"]}
    if ctx.obj.get("out_dir"):
        overrides["outputs"] = {"dir": ctx.obj["out_dir"]}
    return overrides


@click.group()
@click.option("--seed", type=int, default=None, help="随机种子（初始参数与 shot 采样）")
@click.option("--shots", type=click.IntRange(min=0), default=None, help="每个测量线路的采样次数，0 为精确模式")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None, help="产物输出目录")
@click.option("--verbose", "-v", is_flag=True, help="显示详细日志")
@click.pass_context
def cli(ctx, seed, shots, out_dir, verbose):
    """
    广义本征值方程 A|φ⟩ = λB|φ⟩ 的变分虚时演化求解器
    """
    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed, shots=shots, out_dir=out_dir, verbose=verbose)
    setup_logging("DEBUG" if verbose else "INFO")


@cli.command()
@click.argument("preset", required=False)
@click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False), help="额外的 YAML 配置文件")
@click.option("--levels", type=int, default=None, help="求解的能级数")
@click.pass_context
@handle_errors
def solve(ctx, preset, config_path, levels):
    """逐能级演化并与经典参考解对照，写出轨迹与报告"""
    merged = ConfigLoader().load(preset, config_path, _solve_overrides(ctx))
    _apply_config_logging(ctx, merged)
    config = RunConfig.from_dict(merged, source=preset or config_path or "config.yaml")
    report = SpectrumRunner(config).run(levels)

    click.echo("\n" + "=" * 60)
    click.echo(f"问题: {report['problem']}")
    click.echo("=" * 60)
    for row in report["levels"]:
        exact = row["exact_lambda"]
        exact_text = f"{exact:.6f}" if exact is not None else "-"
        click.echo(f"  λ{row['level']}: 方法 {row['method_lambda']:.6f}  精确 {exact_text}  "
                   f"残差 {row['residual']:.2e}")
    if "ground_fidelity" in report:
        click.echo(f"基态保真度: {report['ground_fidelity']:.6f}")
    click.echo(f"产物目录: {config.out_dir}")
    click.echo("=" * 60 + "\n")


@cli.command()
@click.argument("preset", required=False)
@click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False), help="额外的 YAML 配置文件")
@click.option("--a", "a_file", type=click.Path(dir_okay=False), help="A 的 Pauli 文本文件")
@click.option("--b", "b_file", type=click.Path(dir_okay=False), help="B 的 Pauli 文本文件")
@click.option("--dense", is_flag=True, help="--a/--b 为稠密矩阵文件（.npy 或文本）")
@click.pass_context
@handle_errors
def oracle(ctx, preset, config_path, a_file, b_file, dense):
    """经典矩阵束求解，结果以 JSON 输出到标准输出"""
    if bool(a_file) != bool(b_file):
        raise ConfigError("--a 与 --b 必须同时给出")
    if a_file:
        if dense:
            a = OperatorReader.read_matrix_file(a_file)
            b = OperatorReader.read_matrix_file(b_file)
        else:
            a = OperatorReader.read_pauli_file(a_file).to_matrix()
            b = OperatorReader.read_pauli_file(b_file).to_matrix()
    else:
        merged = ConfigLoader().load(preset, config_path, _solve_overrides(ctx))
        _apply_config_logging(ctx, merged)
        config = RunConfig.from_dict(merged, source=preset or config_path or "config.yaml")
        pa, pb, _ = SpectrumRunner(config).resolve_operators()
        a, b = pa.to_matrix(), pb.to_matrix()
    result = PencilOracle.solve_pencil(PencilOracle.make_pencil(a, b))
    click.echo(dumps(result.to_dict()))


@cli.command()
@click.option("--preset", default=None, help="预设名，如 hydrogen")
@click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False), help="额外的 YAML 配置文件")
@click.option("--x-grid", default=None, help='x 网格，"start:stop:step" 或 "0.7,0.8"')
@click.option("--alpha", "alphas", type=float, multiple=True, help="α 取值，需给出两次")
@click.option("--field", "field_strength", type=float, default=None, help="外电场 ℰ")
@click.option("--z", "Z", type=float, default=None, help="原子序数 Z")
@click.option("--n-max", type=int, default=None, help="主量子数截断")
@click.option("--solver", type=click.Choice(["oracle", "evolver"]), default=None, help="λ₁ 求解器")
@click.option("--workers", type=int, default=None, help="并行线程数")
@click.pass_context
@handle_errors
def hydrogen(ctx, preset, config_path, x_grid, alphas, field_strength, Z, n_max, solver, workers):
    """氢原子外场极化率 x 扫描"""
    section = {}
    if x_grid is not None:
        section["x_grid"] = x_grid
    if alphas:
        section["alphas"] = list(alphas)
    for key, value in (("field", field_strength), ("Z", Z), ("n_max", n_max),
                       ("solver", solver), ("workers", workers)):
        if value is not None:
            section[key] = value
    evolution = {}
    if ctx.obj.get("seed") is not None:
        evolution["seed"] = ctx.obj["seed"]
    if ctx.obj.get("shots") is not None:
        evolution["shots"] = ctx.obj["shots"]
    if evolution:
        section["evolution"] = evolution
    if ctx.obj.get("out_dir"):
        section["outputs"] = {"dir": ctx.obj["out_dir"]}

    merged = ConfigLoader().load(preset, config_path, {"hydrogen": section})
    _apply_config_logging(ctx, merged)
    config = HydrogenRunConfig.from_dict(merged.get("hydrogen"))
    result = HydrogenRunner(config).run()

    click.echo(f"{'x':>6}  {'g1':>12}  {'g2':>12}  {'P':>10}")
    for fit in result.fits:
        if fit.ok:
            click.echo(f"{fit.x:>6.3f}  {fit.g1:>12.6f}  {fit.g2:>12.6f}  {fit.polarizability:>10.4f}")
        else:
            click.echo(f"{fit.x:>6.3f}  失败: {fit.error}")
    best = result.best
    click.echo(f"x* = {best.x:.4g}, P(x*) = {best.polarizability:.4f}")


@cli.command()
@click.argument("matrix_file", required=False, type=click.Path(dir_okay=False))
@click.option("--problem", type=click.Choice(sorted(PROBLEMS)), default=None, help="内置问题名")
@click.option("--which", type=click.Choice(["A", "B"]), default="A", help="分解 A 或 B")
@click.option("--drop-tol", type=float, default=1e-12, help="系数裁剪阈值")
@handle_errors
def decompose(matrix_file, problem, which, drop_tol):
    """稠密厄米矩阵的 Pauli 分解，输出 `<coeff> <word>` 行"""
    if bool(matrix_file) == bool(problem):
        raise ConfigError("需要且只能给出 MATRIX_FILE 或 --problem 之一")
    if matrix_file:
        matrix = OperatorReader.read_matrix_file(matrix_file)
    else:
        p = get_problem(problem)
        matrix = (p.A if which == "A" else p.B).to_matrix()
    click.echo(PauliAlgebra.format_pauli_sum(PauliAlgebra.decompose(matrix, drop_tol=drop_tol)), nl=False)


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
