# -*- coding: utf-8 -*-
"""
基准测试服务
在文档语料上比较两种回答策略：重写（视图推导 + 重写 + 原文档求值）与物化（物化视图 + 视图上求值），输出 CSV
"""
import csv
import io
import os
import statistics
import time
from dataclasses import dataclass, field, asdict
from typing import Callable, List, Optional, Tuple, Any

from tqdm import tqdm

from config import Settings
from core import (
    Evaluator, parse_xml, derive_view, build_kit, make_context,
    rewrite, rewrite_fast, materialize, answer_equal,
)
from services.security_view_service import SecurityViewService
from utils.logger import logger, get_run_logger

CSV_FIELDS = [
    "document", "nodes", "query", "strategy",
    "parse_ms", "prep_ms", "answer_ms", "answer_size", "status",
]
STRATEGY_REWRITE = "rewrite"
STRATEGY_MATERIALIZE = "materialize"
STATUS_EQUAL = "EQUAL"
STATUS_DIVERGENT = "DIVERGENT"


@dataclass
class BenchRow:
    document: str
    nodes: int
    query: str
    strategy: str
    parse_ms: float
    prep_ms: float
    answer_ms: float
    answer_size: int
    status: str


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)

    @property
    def divergent(self) -> List[BenchRow]:
        return [row for row in self.rows if row.status == STATUS_DIVERGENT]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(asdict(row))
        return buffer.getvalue()


def _timed(func: Callable[[], Any], repetitions: int) -> Tuple[float, Any]:
    """重复执行，返回耗时中位数（毫秒）与最后一次的结果"""
    samples = []
    result = None
    for _ in range(max(1, repetitions)):
        start = time.perf_counter()
        result = func()
        samples.append((time.perf_counter() - start) * 1000)
    return round(statistics.median(samples), 3), result


def load_corpus(corpus_dir: str) -> List[Tuple[str, str]]:
    """读取目录下全部 .xml 文件（按文件名排序）"""
    documents = []
    for name in sorted(os.listdir(corpus_dir)):
        if name.endswith(".xml"):
            with open(os.path.join(corpus_dir, name), "r", encoding="utf-8") as f:
                documents.append((name, f.read()))
    return documents


class BenchService:
    """基准测试执行器"""

    def __init__(self, service: SecurityViewService, repetitions: Optional[int] = None, fast: bool = False):
        self.service = service
        self.repetitions = repetitions or Settings.BENCH_REPETITIONS
        self.fast = fast
        logger.info(f"[基准测试] 初始化: 重复 {self.repetitions} 次取中位数，重写策略: {'快速路径' if fast else '完整算法'}")

    def _rewrite_pipeline(self, query):
        spec = self.service.spec
        ctx = make_context(derive_view(spec), build_kit(spec))
        return (rewrite_fast if self.fast else rewrite)(query, ctx)

    def bench_document(self, name: str, text: str, queries: List[Tuple[str, str]]) -> List[BenchRow]:
        parse_ms, tree = _timed(lambda: parse_xml(text), self.repetitions)
        nodes = len(tree)
        rows: List[BenchRow] = []
        for query_name, query_text in queries:
            query = self.service.parse_view_query(query_text)

            rw_prep, outcome = _timed(lambda: self._rewrite_pipeline(query), self.repetitions)
            if outcome.is_empty:
                rw_answer, original_nodes = 0.0, []
            else:
                rw_answer, original_nodes = _timed(lambda: Evaluator(tree).eval(outcome.query, 0), self.repetitions)

            mat_prep, mv = _timed(lambda: materialize(tree, self.service.spec), self.repetitions)
            mat_answer, view_nodes = _timed(lambda: Evaluator(mv.tree).eval(query, 0), self.repetitions)

            equal = answer_equal(view_nodes, mv.node_map, original_nodes)
            status = STATUS_EQUAL if equal else STATUS_DIVERGENT
            if not equal:
                logger.warning(f"[基准测试] {name} / {query_name} 两种策略结果不一致")
            rows.append(BenchRow(name, nodes, query_name, STRATEGY_REWRITE,
                                 parse_ms, rw_prep, rw_answer, len(original_nodes), status))
            rows.append(BenchRow(name, nodes, query_name, STRATEGY_MATERIALIZE,
                                 parse_ms, mat_prep, mat_answer, len(view_nodes), status))
        return rows

    def run(self, documents: List[Tuple[str, str]], queries: List[Tuple[str, str]],
            progress: bool = False) -> BenchReport:
        """
        执行基准测试

        Args:
            documents: [(文档名, XML 文本)]
            queries: [(查询名, 视图查询文本)]
            progress: 是否显示进度条

        Returns:
            BenchReport，空语料只有表头
        """
        report = BenchReport()
        for name, text in tqdm(documents, disable=not progress, desc="bench"):
            report.rows.extend(self.bench_document(name, text, queries))
        logger.info(f"[基准测试] 完成 {len(documents)} 个文档 × {len(queries)} 个查询，不一致 {len(report.divergent)} 行")

        run_logger = get_run_logger()
        if run_logger:
            run_logger.save_log(
                ",".join(q for q, _ in queries),
                STATUS_DIVERGENT if report.divergent else STATUS_EQUAL,
                "bench",
                {"documents": len(documents), "rows": len(report.rows)},
            )
        return report
