# -*- coding: utf-8 -*-
"""
查询重写
把视图 D_v 上的片段 X（含向上轴扩展）查询改写为原始文档上的 X↑[n,=] 查询；
包含带星号消去的完整算法、谓词改写，以及线性时间的快速路径
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .dtd import ReachIndex
from .errors import FragmentError
from .predicates import PredicateKit, fs
from .view_derive import DtdView
from .xpath_ast import (
    Axis, Path, Qual, Step, Union_, Group,
    PathExists, TextEquals, NodeEquals, Position, And, Or, Not, TrueQual, FalseQual,
    TRUE, FALSE, WILDCARD, FragmentClass,
    and_all, classify, path_steps, slash, union, with_quals,
)
from utils.logger import logger

_SUPPORTED_AXES = (Axis.CHILD, Axis.DESCENDANT, Axis.PARENT, Axis.ANCESTOR)


@dataclass
class RewriteStats:
    """重写工作量计数（每处理一个 AST 节点或一次可达集合元素计 1）"""
    work: int = 0
    steps: int = 0


@dataclass
class RewriteOutcome:
    """重写结果：query 为 None 表示静态不可满足（空结果）"""
    query: Optional[Path]
    diagnostics: List[str] = field(default_factory=list)
    stats: RewriteStats = field(default_factory=RewriteStats)

    @property
    def is_empty(self) -> bool:
        return self.query is None


@dataclass(frozen=True)
class RewriteContext:
    kit: PredicateKit
    reach: ReachIndex
    view_types: Tuple[str, ...]
    context_type: str
    star_elimination: bool = True

    @property
    def at_root(self) -> bool:
        return self.context_type == self.kit.root


def make_context(view: DtdView, kit: PredicateKit, context_type: Optional[str] = None,
                 star_elimination: bool = True) -> RewriteContext:
    return RewriteContext(
        kit=kit,
        reach=view.reach,
        view_types=view.types,
        context_type=context_type or view.view.root,
        star_elimination=star_elimination,
    )


class _Empty(Exception):
    """静态判定为空，携带诊断信息"""


class QueryRewriter:
    """
    重写器

    star_elimination=True 时按视图可达集合展开 * 与标签集合（完整算法）；
    False 时只检查标签是否属于视图（快速路径，工作量与查询长度成线性）
    """

    def __init__(self, ctx: RewriteContext):
        self.ctx = ctx
        self.kit = ctx.kit
        self.stats = RewriteStats()
        self.fast = not ctx.star_elimination

    # ==================== 可达集合 ====================
    def _reach(self, axis: Axis, label: str, current: Sequence[str]) -> List[str]:
        """reach(axis::label, current)，按声明顺序"""
        if self.fast:
            self.stats.work += 1
            if label == WILDCARD:
                return [WILDCARD]
            if label == self.kit.root and axis in (Axis.CHILD, Axis.DESCENDANT) and not self.kit.root_recursive:
                return []
            return [label] if label in self.ctx.view_types else []
        if axis is Axis.SELF:
            candidates = set(current)
        else:
            relation = {
                Axis.CHILD: self.ctx.reach.children,
                Axis.DESCENDANT: self.ctx.reach.descendants,
                Axis.PARENT: self.ctx.reach.parents,
                Axis.ANCESTOR: self.ctx.reach.ancestors,
            }[axis]
            candidates = set()
            for name in current:
                related = relation[name]
                self.stats.work += len(related) + 1
                candidates.update(related)
        if label != WILDCARD:
            return [label] if label in candidates else []
        return [n for n in self.ctx.view_types if n in candidates]

    def _label_of(self, names: Sequence[str]) -> str:
        return names[0] if len(names) == 1 else WILDCARD

    # ==================== 路径 ====================
    def rewrite(self, query: Path) -> RewriteOutcome:
        if classify(query) > FragmentClass.XUP:
            raise FragmentError("只能重写片段 X 及其向上轴扩展 X↑ 的查询")
        if self.ctx.context_type not in self.ctx.view_types:
            return RewriteOutcome(None, [f"上下文类型 {self.ctx.context_type} 不在视图中"], self.stats)
        branches = query.branches if isinstance(query, Union_) else (query,)
        results: List[Path] = []
        diagnostics: List[str] = []
        for branch in branches:
            try:
                results.append(self._rewrite_branch(branch))
            except _Empty as exc:
                diagnostics.append(str(exc))
        if not results:
            logger.warning(f"[查询重写] 查询静态不可满足: {'; '.join(diagnostics)}")
            return RewriteOutcome(None, diagnostics, self.stats)
        return RewriteOutcome(union(results), diagnostics, self.stats)

    def _rewrite_branch(self, branch: Path) -> Path:
        steps = path_steps(branch)
        context = self.ctx.context_type
        reach: List[str] = [context]
        filters: List[Qual] = []
        prefix: Optional[Qual] = None
        if self.ctx.at_root and self.kit.root_recursive:
            prefix = Not(PathExists(Step(Axis.PARENT, WILDCARD)))
        upward = False

        for index, current in enumerate(steps):
            if not isinstance(current, Step) or current.axis not in _SUPPORTED_AXES:
                raise FragmentError("重写只支持 child / descendant / parent / ancestor 步骤")
            self.stats.steps += 1
            self.stats.work += 1
            if current.axis.is_upward:
                upward = True
                if not self.ctx.at_root:
                    raise FragmentError("向上轴只支持以根为上下文的重写")
                if index == 0:
                    raise _Empty(f"第 {index + 1} 步：文档根没有父节点或祖先")

            new_reach = self._reach(current.axis, current.label, reach)
            if not new_reach:
                raise _Empty(f"第 {index + 1} 步 {current.axis.value}::{current.label} 在视图中不可达")

            prefix = self._extend_prefix(current, index, reach, filters, prefix)

            rewritten = self.rw_pred(and_all(current.quals), new_reach)
            if isinstance(rewritten, FalseQual):
                raise _Empty(f"第 {index + 1} 步的谓词在视图上恒假")
            filters = [] if isinstance(rewritten, TrueQual) else [rewritten]
            reach = new_reach

        quals = [self.kit.acc] + filters + ([prefix] if prefix is not None else [])
        result = with_quals(fs(reach, Axis.DESCENDANT), quals)
        if upward and (context in reach or WILDCARD in reach):
            own = filters + ([prefix] if prefix is not None else [])
            result = union([result, with_quals(Step(Axis.SELF, context), own)])
        return result

    def _extend_prefix(self, current: Step, index: int, previous: Sequence[str],
                       filters: List[Qual], prefix: Optional[Qual]) -> Optional[Qual]:
        """prefix⁻¹(p1/.../pi)，作为第 i 步节点上的限定词"""
        kit = self.kit
        carried = filters + ([prefix] if prefix is not None else [])
        if current.axis is Axis.CHILD:
            if self.fast and len(carried) == 1 and carried[0] is prefix and isinstance(prefix, PathExists):
                return PathExists(slash(kit.aplus_first, Step(Axis.SELF, previous[0]), prefix.path))
            return PathExists(slash(kit.aplus_first, with_quals(fs(previous, Axis.SELF), carried)))
        if current.axis is Axis.DESCENDANT:
            if index == 0 and self.ctx.at_root:
                # 真后代：文档根本身不能作为第一步的结果
                if self.fast or self.kit.root_recursive:
                    return PathExists(Step(Axis.PARENT, WILDCARD))
                return None
            return PathExists(with_quals(fs(previous, Axis.ANCESTOR), [kit.acc] + carried))
        below = with_quals(fs(previous, Axis.DESCENDANT), [kit.acc] + carried)
        if current.axis is Axis.PARENT:
            return NodeEquals(slash(below, kit.aplus_first), Step(Axis.SELF, current.label))
        return PathExists(below)

    # ==================== 谓词 ====================
    def rw_pred(self, qual: Qual, names: Sequence[str]) -> Qual:
        """
        RW_Pred：把相对于类型集合 names 的片段 X 限定词改写为原始文档上的限定词

        Returns:
            改写后的限定词；TRUE / FALSE 表示静态恒真 / 恒假
        """
        self.stats.work += 1
        if isinstance(qual, (TrueQual, FalseQual)):
            return qual
        if isinstance(qual, And):
            left = self.rw_pred(qual.left, names)
            if isinstance(left, FalseQual):
                return FALSE
            right = self.rw_pred(qual.right, names)
            if isinstance(right, FalseQual):
                return FALSE
            return and_all(q for q in (left, right) if not isinstance(q, TrueQual))
        if isinstance(qual, Or):
            left = self.rw_pred(qual.left, names)
            if isinstance(left, TrueQual):
                return TRUE
            right = self.rw_pred(qual.right, names)
            if isinstance(right, TrueQual):
                return TRUE
            return _or(left, right)
        if isinstance(qual, Not):
            inner = self.rw_pred(qual.operand, names)
            if isinstance(inner, FalseQual):
                return TRUE
            if isinstance(inner, TrueQual):
                return FALSE
            return Not(inner)
        if isinstance(qual, PathExists):
            return self._rw_path(qual.path, names, None)
        if isinstance(qual, TextEquals):
            return self._rw_path(qual.path, names, qual.value)
        if isinstance(qual, (NodeEquals, Position)):
            raise FragmentError("谓词中不支持位置与节点比较")
        raise FragmentError(f"无法改写的限定词 {qual!r}")

    def _rw_path(self, path: Path, names: Sequence[str], text: Optional[str]) -> Qual:
        if isinstance(path, Union_):
            result: Qual = FALSE
            for branch in path.branches:
                rewritten = self._rw_path(branch, names, text)
                if isinstance(rewritten, TrueQual):
                    return TRUE
                result = _or(result, rewritten)
            return result
        steps = path_steps(path)
        if any(isinstance(s, Group) for s in steps):
            raise FragmentError("谓词中不支持带括号的并集")
        return self._rw_steps(steps, 0, names, text)

    def _rw_steps(self, steps: List[Step], index: int, names: Sequence[str], text: Optional[str]) -> Qual:
        kit = self.kit
        current = steps[index]
        self.stats.work += 1
        if current.axis not in _SUPPORTED_AXES and current.axis is not Axis.SELF:
            raise FragmentError(f"谓词中不支持 {current.axis.value} 轴")
        reached = self._reach(current.axis, current.label, names)
        if not reached:
            return FALSE
        nested = self.rw_pred(and_all(current.quals), reached)
        if isinstance(nested, FalseQual):
            return FALSE
        if index + 1 < len(steps):
            rest = self._rw_steps(steps, index + 1, reached, text)
            if isinstance(rest, FalseQual):
                return FALSE
        elif text is not None:
            rest = TextEquals(Step(Axis.SELF, WILDCARD), text)
        else:
            rest = TRUE

        if current.axis is Axis.CHILD:
            below = with_quals(fs(reached, Axis.DESCENDANT), [kit.acc, nested, rest])
            return NodeEquals(slash(below, kit.aplus_first), Step(Axis.SELF, self._label_of(names)))
        if current.axis is Axis.DESCENDANT:
            return PathExists(with_quals(fs(reached, Axis.DESCENDANT), [kit.acc, nested, rest]))
        if current.axis is Axis.PARENT:
            return PathExists(slash(kit.aplus_first, with_quals(fs(reached, Axis.SELF), [nested, rest])))
        if current.axis is Axis.ANCESTOR:
            return PathExists(with_quals(fs(reached, Axis.ANCESTOR), [kit.acc, nested, rest]))
        quals = [q for q in (nested, rest) if not isinstance(q, TrueQual)]
        if not quals and not self.fast and set(reached) >= set(names):
            return TRUE
        return PathExists(with_quals(fs(reached, Axis.SELF), quals))


def _or(left: Qual, right: Qual) -> Qual:
    if isinstance(left, FalseQual):
        return right
    if isinstance(right, FalseQual):
        return left
    return Or(left, right)


def rewrite(query: Path, ctx: RewriteContext) -> RewriteOutcome:
    """
    完整重写（带星号消去）

    Args:
        query: 视图上的片段 X / X↑ 查询
        ctx: 重写上下文

    Returns:
        RewriteOutcome
    """
    return QueryRewriter(ctx).rewrite(query)


def rw_pred(qual: Qual, names: Sequence[str], ctx: RewriteContext) -> Qual:
    return QueryRewriter(ctx).rw_pred(qual, names)


def rewrite_fast(query: Path, ctx: RewriteContext) -> RewriteOutcome:
    """线性时间重写：不展开可达集合，child 前缀以通配步骤平铺"""
    fast_ctx = RewriteContext(
        kit=ctx.kit,
        reach=ctx.reach,
        view_types=ctx.view_types,
        context_type=ctx.context_type,
        star_elimination=False,
    )
    return QueryRewriter(fast_ctx).rewrite(query)
