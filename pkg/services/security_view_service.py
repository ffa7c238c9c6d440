# -*- coding: utf-8 -*-
"""
安全视图服务
把 DTD、访问规范与文档串成完整流程：视图推导、谓词构造、查询重写、求值、物化与一致性检查
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Any

from config import Settings
from core import (
    AccessSpec, Dtd, DtdView, PredicateKit, RewriteOutcome, MaterializedView, XmlTree,
    Evaluator, FragmentClass,
    parse_dtd, parse_spec, parse_xpath, parse_xml, serialize, serialize_qual,
    derive_view, build_kit, make_context, rewrite, rewrite_fast, materialize,
    first_difference, conforms,
)
from core.xpath_ast import Path
from utils.logger import logger, get_run_logger
from utils.text_processing import substitute_variables, expand_macros

EQUAL = "EQUAL"
DIFFER = "DIFFER"


@dataclass
class CheckReport:
    """一次一致性检查的结论（视图上求值 vs 重写后在原文档上求值）"""
    verdict: str
    query: str
    rewritten: Optional[str]
    view_answer: List[str]
    rewrite_answer: List[str]
    witness: Optional[str] = None
    witness_side: Optional[str] = None
    view_conforms: bool = True
    diagnostics: List[str] = field(default_factory=list)

    @property
    def is_equal(self) -> bool:
        return self.verdict == EQUAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "query": self.query,
            "rewritten": self.rewritten,
            "view_answer": self.view_answer,
            "rewrite_answer": self.rewrite_answer,
            "witness": self.witness,
            "witness_side": self.witness_side,
            "view_conforms": self.view_conforms,
            "diagnostics": self.diagnostics,
        }


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


class SecurityViewService:
    """一个访问规范上的全部操作；视图与谓词套件惰性构造后复用"""

    def __init__(
        self,
        dtd_text: str,
        spec_text: str,
        definition_1: Optional[bool] = None,
        variables: Optional[Dict[str, str]] = None
    ):
        if definition_1 is None:
            definition_1 = Settings.DEFAULT_DEFINITION == "1"
        self.variables = dict(variables or {})
        self.dtd: Dtd = parse_dtd(dtd_text)
        self.spec: AccessSpec = parse_spec(
            substitute_variables(spec_text, self.variables), self.dtd, definition_1=definition_1
        )
        self._view: Optional[DtdView] = None
        self._kit: Optional[PredicateKit] = None
        logger.info(
            f"[安全视图] 加载 DTD {len(self.dtd.element_types)} 个类型，注解 {len(self.spec)} 条，"
            f"语义: {'兼容（向下封闭）' if definition_1 else '可覆盖'}"
        )

    @classmethod
    def from_files(
        cls,
        dtd_path: str,
        spec_path: str,
        definition_1: Optional[bool] = None,
        variables: Optional[Dict[str, str]] = None
    ) -> "SecurityViewService":
        return cls(_read(dtd_path), _read(spec_path), definition_1, variables)

    # ==================== 视图与谓词 ====================
    @property
    def view(self) -> DtdView:
        if self._view is None:
            self._view = derive_view(self.spec)
        return self._view

    @property
    def kit(self) -> PredicateKit:
        if self._kit is None:
            self._kit = build_kit(self.spec)
        return self._kit

    def macros(self) -> Dict[str, str]:
        """%ACC% 等宏的展开文本；限定词宏带括号，可直接放入 [...]"""
        kit = self.kit
        return {
            "%ACC%": f"({serialize_qual(kit.acc)})",
            "%A1%": f"({serialize_qual(kit.a1)})",
            "%A2%": f"({serialize_qual(kit.a2)})",
            "%APLUS%": serialize(kit.aplus),
        }

    def render(self, path: Optional[Path], abbreviate: bool = True) -> str:
        """渲染重写结果；abbreviate 时谓词套件显示为宏"""
        if path is None:
            return "-- unsatisfiable --"
        return serialize(path, self.kit.abbreviations if abbreviate else None)

    # ==================== 查询 ====================
    def parse_view_query(self, text: str) -> Path:
        """视图上的用户查询：片段 X 及向上轴扩展"""
        return parse_xpath(substitute_variables(text, self.variables), FragmentClass.XUP)

    def parse_document_query(self, text: str) -> Path:
        """原始文档上的查询：X↑[n,=]，可使用 %ACC% 等宏"""
        expanded = expand_macros(substitute_variables(text, self.variables), self.macros())
        return parse_xpath(expanded, FragmentClass.XUP_POS_EQ)

    def rewrite(self, query_text: str, context_type: Optional[str] = None, fast: bool = False) -> RewriteOutcome:
        """
        重写视图查询

        Args:
            query_text: 视图上的查询文本
            context_type: 上下文类型，默认为根
            fast: 使用线性时间快速路径

        Returns:
            RewriteOutcome，query 为 None 表示不可满足
        """
        query = self.parse_view_query(query_text)
        ctx = make_context(self.view, self.kit, context_type)
        outcome = rewrite_fast(query, ctx) if fast else rewrite(query, ctx)
        logger.info(
            f"[查询重写] {'快速路径' if fast else '完整算法'} 工作量 {outcome.stats.work}，"
            f"步骤 {outcome.stats.steps}"
        )
        return outcome

    # ==================== 文档 ====================
    @staticmethod
    def load_document(path: str) -> XmlTree:
        return parse_xml(_read(path))

    def evaluate(self, tree: XmlTree, query_text: str) -> List[int]:
        """在原始文档上求值（根为上下文）"""
        return Evaluator(tree).eval(self.parse_document_query(query_text), 0)

    def materialize(self, tree: XmlTree) -> MaterializedView:
        return materialize(tree, self.spec)

    def check(
        self,
        tree: XmlTree,
        query_text: str,
        fast: bool = False,
        inject_query: Optional[str] = None
    ) -> CheckReport:
        """
        比较 Q(T_v) 与 Q_t(T)

        Args:
            tree: 原始文档
            query_text: 视图上的查询
            fast: 使用快速路径重写
            inject_query: 用给定的原文档查询替代重写结果（验证错误重写会被发现）

        Returns:
            CheckReport
        """
        query = self.parse_view_query(query_text)
        mv = self.materialize(tree)
        view_nodes = Evaluator(mv.tree).eval(query, 0)

        diagnostics: List[str] = []
        if inject_query is not None:
            rewritten: Optional[Path] = self.parse_document_query(inject_query)
        else:
            ctx = make_context(self.view, self.kit)
            outcome = rewrite_fast(query, ctx) if fast else rewrite(query, ctx)
            rewritten = outcome.query
            diagnostics.extend(outcome.diagnostics)
        original_nodes = Evaluator(tree).eval(rewritten, 0) if rewritten is not None else []

        report_view = conforms(mv.tree, self.view.view)
        if not report_view.ok:
            logger.warning(f"[一致性检查] 物化视图不符合视图 DTD: {report_view.diagnostics[0]}")
            diagnostics.extend(report_view.diagnostics)

        difference = first_difference(view_nodes, mv.node_map, original_nodes)
        report = CheckReport(
            verdict=EQUAL if difference is None else DIFFER,
            query=query_text,
            rewritten=self.render(rewritten),
            view_answer=[tree.node_path(mv.node_map[n]) for n in sorted(view_nodes, key=lambda n: mv.node_map[n])],
            rewrite_answer=[tree.node_path(n) for n in original_nodes],
            view_conforms=report_view.ok,
            diagnostics=diagnostics,
        )
        if difference is not None:
            report.witness = tree.node_path(difference[0])
            report.witness_side = difference[1]
            logger.warning(f"[一致性检查] {query_text} 结果不一致，见证节点 {report.witness}")

        run_logger = get_run_logger()
        if run_logger:
            run_logger.save_log(query_text, report.verdict, "check", {
                "witness": report.witness,
                "injected": inject_query is not None,
                "fast": fast,
            })
        return report
