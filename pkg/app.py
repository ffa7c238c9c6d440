# -*- coding: utf-8 -*-
"""
XSecView 命令行入口
递归 XML 安全视图上的 XPath 查询重写：视图推导、重写、求值、物化、一致性检查、文档生成与基准测试
"""
import argparse
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

from config import Settings
from core import XSecViewError
from api import (
    BaseHandler, ViewHandler, DocumentHandler, CheckHandler, BenchHandler, FixtureHandler, SIZE_PRESETS,
    EXIT_INPUT_ERROR,
)
from utils import logger


# ==================== 参数定义 ====================

def _input_parser() -> argparse.ArgumentParser:
    """DTD / 规范 / 夹具 / 变量 / 语义开关"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--fixture", help="使用 fixtures/ 下的内置夹具")
    parser.add_argument("--dtd", help="DTD 文件")
    parser.add_argument("--ann", help="访问规范文件")
    parser.add_argument("--definition-1", dest="definition_1", action="store_true",
                        help="兼容语义：把 [Q] 当作向下封闭的 [Q]_h 解读")
    parser.add_argument("--var", action="append", metavar="K=V", help="规范与查询中的 $K 变量，可重复")
    return parser


def _output_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--json", action="store_true", help="输出 JSON")
    return parser


def _query_parser(positional: bool = True) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    if positional:
        parser.add_argument("query", nargs="?", help="查询文本；省略时使用 --queries 或夹具自带查询")
    parser.add_argument("--queries", help="查询文件（每行 NAME: QUERY）")
    parser.add_argument("--query-name", dest="query_name", help="只使用指定名字的查询")
    return parser


def create_parser() -> argparse.ArgumentParser:
    """创建命令行解析器"""
    parser = argparse.ArgumentParser(prog="xsecview", description="递归 XML 安全视图上的 XPath 查询重写")
    sub = parser.add_subparsers(dest="command", required=True)
    inputs, output = _input_parser(), _output_parser()

    sub.add_parser("derive", parents=[inputs, output], help="推导 DTD 视图")
    sub.add_parser("predicates", parents=[inputs, output], help="打印可访问性谓词套件")

    p = sub.add_parser("rewrite", parents=[inputs, output, _query_parser()], help="把视图查询重写为原文档查询")
    p.add_argument("--context", help="上下文元素类型（默认视图根）")
    p.add_argument("--fast", action="store_true", help="线性时间快速路径")
    p.add_argument("--expand", action="store_true", help="展开 %%ACC%% 等宏")

    p = sub.add_parser("eval", parents=[inputs, output, _query_parser()], help="在原始文档上求值（可用 %%ACC%% 等宏）")
    p.add_argument("--xml", help="XML 文档")
    p.add_argument("--format", choices=("paths", "xml"), default="paths")

    p = sub.add_parser("materialize", parents=[inputs, output], help="物化安全视图")
    p.add_argument("--xml", help="XML 文档")
    p.add_argument("--format", choices=("paths", "xml"), default="xml")

    p = sub.add_parser("check", parents=[inputs, output, _query_parser()], help="比较 Q(T_v) 与 Q_t(T)")
    p.add_argument("--xml", help="XML 文档")
    p.add_argument("--fast", action="store_true", help="使用快速路径重写")
    p.add_argument("--inject-query", dest="inject_query", help="以给定的原文档查询替代重写结果")

    p = sub.add_parser("gen", parents=[inputs], help="按 DTD 生成随机文档")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-depth", dest="max_depth", type=int)
    p.add_argument("--star-p", dest="star_p", type=float, help="星号重复后停止的概率")
    p.add_argument("--target-nodes", dest="target_nodes", type=int)
    p.add_argument("--size", choices=list(SIZE_PRESETS),
                   help="按 BENCH_CORPUS_SIZES 选择规模（--target-nodes 优先）")
    p.add_argument("--corpus", type=int, help="生成 N 个文档写入 -o 目录")
    p.add_argument("-o", "--output", help="输出文件（--corpus 时为目录）")

    p = sub.add_parser("bench", parents=[inputs, output, _query_parser(positional=False)],
                       help="重写 vs 物化的基准测试（CSV）")
    p.add_argument("--corpus", help="语料目录（*.xml）；省略时使用夹具实例")
    p.add_argument("--fast", action="store_true")
    p.add_argument("--repetitions", type=int, help=f"重复次数，默认 {Settings.BENCH_REPETITIONS}")
    p.add_argument("--progress", action="store_true", help="显示进度条")
    p.add_argument("-o", "--output", help="CSV 输出文件")

    p = sub.add_parser("fuzz", parents=[output], help="随机闭包测试")
    p.add_argument("--cases", type=int, help=f"用例数，默认 {Settings.FUZZ_CASES}")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--evaluator", action="store_true", help="改为求值器自检")
    p.add_argument("--progress", action="store_true")

    p = sub.add_parser("fixtures", parents=[output], help="列出或导出内置夹具")
    p.add_argument("names", nargs="*", help="只导出这些夹具")
    p.add_argument("-o", "--output", help="导出目录；省略时只列出")
    return parser


HANDLERS: Dict[str, type] = {
    "derive": ViewHandler,
    "predicates": ViewHandler,
    "rewrite": ViewHandler,
    "eval": DocumentHandler,
    "materialize": DocumentHandler,
    "gen": DocumentHandler,
    "check": CheckHandler,
    "bench": BenchHandler,
    "fuzz": FixtureHandler,
    "fixtures": FixtureHandler,
}


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """
    主函数

    Returns:
        退出码：0 成功 / EQUAL，1 DIFFER / DIVERGENT / 随机测试失败，2 输入错误
    """
    args = create_parser().parse_args(argv)
    handler: BaseHandler = HANDLERS[args.command](stdout=stdout)
    try:
        return handler.process(args)
    except (XSecViewError, ValueError, OSError) as e:
        logger.debug(f"[命令行] {args.command} 输入错误", exc_info=True)
        sys.stderr.write(f"xsecview {args.command}: {e}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
    except Exception as e:
        logger.error(f"命令执行失败: {e}", exc_info=True)
        sys.exit(EXIT_INPUT_ERROR)
