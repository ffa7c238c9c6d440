# -*- coding: utf-8 -*-
"""
DTD 视图推导
由访问规范计算对用户公开的 DTD 视图 D_v：不可访问类型被消去，其可访问内容内联到父产生式中
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .access_spec import AccessSpec, AnnKind
from .content_model import (
    ContentModel, Text, Empty, Name, Seq, Alt, TEXT, EMPTY,
    make_seq, make_alt, make_star,
)
from .dtd import Dtd, ReachIndex, build_reach_index, is_recursive
from utils.logger import logger

# 经由这些注解（或无注解）的边，子节点内容可能以不可访问的身份被内联
_INLINE_KINDS = (None, AnnKind.DENY, AnnKind.COND)
# 经由这些注解的边，子类型可能以可访问的身份出现在视图中
_EXPOSE_KINDS = (AnnKind.ALLOW, AnnKind.COND, AnnKind.COND_DOWN)


@dataclass
class DtdView:
    """派生的 DTD 视图与推导缓存 Parsed(A, access)"""
    view: Dtd
    spec: AccessSpec
    parsed: Dict[Tuple[str, bool], Optional[ContentModel]] = field(default_factory=dict)
    visits: int = 0
    hidden_cycles: Tuple[str, ...] = ()
    _reach: Optional[ReachIndex] = field(default=None, repr=False)

    @property
    def reach(self) -> ReachIndex:
        """视图上的可达性索引（重写时使用）"""
        if self._reach is None:
            self._reach = build_reach_index(self.view)
        return self._reach

    @property
    def types(self) -> Tuple[str, ...]:
        return self.view.element_types


@dataclass(frozen=True)
class ViewStats:
    kept: Tuple[str, ...]
    elided: Tuple[str, ...]
    recursive: bool
    cache_entries: int
    visits: int
    hidden_cycles: Tuple[str, ...]

    def to_dict(self) -> Dict:
        return {
            "kept": list(self.kept),
            "elided": list(self.elided),
            "recursive": self.recursive,
            "cache_entries": self.cache_entries,
            "visits": self.visits,
            "hidden_cycles": list(self.hidden_cycles),
        }


_IN_PROGRESS = object()


class ViewDeriver:
    """Exp(A, access) 的记忆化实现"""

    def __init__(self, spec: AccessSpec):
        self.spec = spec
        self.dtd = spec.dtd
        self.children = build_reach_index(self.dtd).children
        self.parsed: Dict[Tuple[str, bool], object] = {}
        self.visits = 0
        self.cyclic = self._hidden_cycle_types()

    def _kind(self, parent: str, child: str) -> Optional[AnnKind]:
        ann = self.spec.get(parent, child)
        return ann.kind if ann else None

    # ==================== 隐藏递归检测 ====================
    def _inline_edges(self, name: str) -> List[str]:
        return [c for c in self.children[name] if self._kind(name, c) in _INLINE_KINDS]

    def _hidden_cycle_types(self) -> Set[str]:
        """内联图（无注解 / N / [Q] 边）上位于环中的类型"""
        cyclic = set()
        for start in self.dtd.element_types:
            seen = set()
            frontier = list(self._inline_edges(start))
            while frontier:
                current = frontier.pop()
                if current == start:
                    cyclic.add(start)
                    break
                if current in seen:
                    continue
                seen.add(current)
                frontier.extend(self._inline_edges(current))
        return cyclic

    def _exposed_names(self, start: str) -> List[str]:
        """从 start 出发沿内联边可能暴露出的可访问类型"""
        exposed = set()
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for child in self.children[current]:
                kind = self._kind(current, child)
                if kind in _EXPOSE_KINDS:
                    exposed.add(child)
                if kind in _INLINE_KINDS and child not in seen:
                    seen.add(child)
                    queue.append(child)
        return self.dtd.sort_names(exposed)

    # ==================== Exp ====================
    def exp(self, name: str, access: bool) -> Optional[ContentModel]:
        key = (name, access)
        if key in self.parsed:
            cached = self.parsed[key]
            return None if cached is _IN_PROGRESS else cached
        self.parsed[key] = _IN_PROGRESS
        if not access and name in self.cyclic:
            exposed = self._exposed_names(name)
            for child in exposed:
                self.exp(child, True)
            result = make_star(make_alt(Name(c) for c in exposed)) if exposed else None
        else:
            result = self._expand(name, self.dtd.productions[name], access)
            if result is None and access:
                result = EMPTY
        self.parsed[key] = result
        return result

    def _expand(self, parent: str, cm: ContentModel, access: bool) -> Optional[ContentModel]:
        self.visits += 1
        if isinstance(cm, Text):
            return TEXT if access else None
        if isinstance(cm, Empty):
            return EMPTY if access else None
        if isinstance(cm, Name):
            return self._child(parent, cm.name, access)
        if isinstance(cm, Seq):
            parts = [self._expand(parent, item, access) for item in cm.items]
            kept = [p for p in parts if p is not None]
            if not kept:
                return None
            return make_seq(kept)
        if isinstance(cm, Alt):
            parts = [self._expand(parent, item, access) for item in cm.items]
            if all(p is None for p in parts):
                return None
            return make_alt(EMPTY if p is None else p for p in parts)
        inner = self._expand(parent, cm.item, access)
        return None if inner is None else make_star(inner)

    def _child(self, parent: str, child: str, access: bool) -> Optional[ContentModel]:
        kind = self._kind(parent, child)
        if kind is None:
            if access:
                self.exp(child, True)
                return Name(child)
            return self.exp(child, False)
        if kind is AnnKind.ALLOW:
            self.exp(child, True)
            return Name(child)
        if kind is AnnKind.DENY:
            return self.exp(child, False)
        if kind is AnnKind.DENY_DOWN:
            return None
        self.exp(child, True)
        if kind is AnnKind.COND:
            hidden = self.exp(child, False)
            return make_alt([Name(child), EMPTY if hidden is None else hidden])
        # [Q]_h：条件不成立时 B 连同整棵子树消失，故 B 在视图中可选，如 root→(A|EMPTY)
        return make_alt([Name(child), EMPTY])

    def derive(self) -> DtdView:
        self.exp(self.dtd.root, True)
        kept = [n for n in self.dtd.element_types if self.parsed.get((n, True)) is not None]
        productions = {n: self.parsed[(n, True)] for n in kept}
        view = Dtd(element_types=tuple(kept), productions=productions, root=self.dtd.root)
        parsed = {k: (None if v is _IN_PROGRESS else v) for k, v in self.parsed.items()}
        return DtdView(
            view=view,
            spec=self.spec,
            parsed=parsed,
            visits=self.visits,
            hidden_cycles=tuple(self.dtd.sort_names(self.cyclic)),
        )


def derive_view(spec: AccessSpec) -> DtdView:
    """
    计算 DTD 视图

    Args:
        spec: 访问规范

    Returns:
        DtdView，view.element_types 只含可访问类型（声明顺序）
    """
    result = ViewDeriver(spec).derive()
    logger.info(
        f"[视图推导] 保留 {len(result.view.element_types)}/{len(spec.dtd.element_types)} 个类型，"
        f"访问内容模型节点 {result.visits} 次"
    )
    return result


def view_stats(view: DtdView) -> ViewStats:
    kept = view.view.element_types
    elided = tuple(n for n in view.spec.dtd.element_types if n not in kept)
    return ViewStats(
        kept=kept,
        elided=elided,
        recursive=is_recursive(view.view, view.reach),
        cache_entries=len(view.parsed),
        visits=view.visits,
        hidden_cycles=view.hidden_cycles,
    )
