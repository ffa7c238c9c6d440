# -*- coding: utf-8 -*-
"""
可访问性谓词
由访问规范构造 A¹ᵃᶜᶜ、A²ᵃᶜᶜ、Aᵃᶜᶜ、A⁺ 与 Aᴮ（X↑[n] 片段的 AST），以及融合函数 fs
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List

from .access_spec import AccessSpec, AnnKind
from .dtd import build_reach_index
from .errors import EmptySetError
from .xpath_ast import (
    Axis, Path, Qual, Step, PathExists, Position, And, Not, TrueQual, WILDCARD,
    and_all, or_all, slash, union, ast_size,
)


@dataclass(frozen=True)
class PredicateKit:
    """
    一个访问规范对应的谓词套件，构造一次后全局共享

    aplus_first 即 A⁺[1]；abbreviations 以对象身份把套件成员渲染为 %ACC% 等宏
    """
    a1: Qual
    a2: Qual
    acc: Qual
    aplus: Step
    aplus_first: Step
    root: str
    root_test: Qual
    root_recursive: bool = False

    @property
    def abbreviations(self) -> Dict[int, str]:
        return {
            id(self.acc): "%ACC%",
            id(self.a1): "%A1%",
            id(self.a2): "%A2%",
            id(self.aplus): "%APLUS%",
            id(self.aplus_first): "%APLUS%[1]",
        }

    def size(self) -> int:
        return ast_size(self.acc) + ast_size(self.aplus)


def _parent_edge(child: Step, parent: str) -> Qual:
    """ε::A/↑::A′"""
    return PathExists(slash(child, Step(Axis.PARENT, parent)))


def build_kit(spec: AccessSpec) -> PredicateKit:
    """
    构造谓词套件

    Args:
        spec: 访问规范（兼容语义的规范已由 compat_mode 转换）

    Returns:
        PredicateKit
    """
    dtd = spec.dtd
    # 根类型递归时，ε::root 需要额外限定为文档根
    root_recursive = dtd.root in build_reach_index(dtd).descendants[dtd.root]
    if root_recursive:
        root_test: Qual = PathExists(Step(Axis.SELF, dtd.root, (Not(PathExists(Step(Axis.PARENT, WILDCARD))),)))
    else:
        root_test = PathExists(Step(Axis.SELF, dtd.root))

    concerned: List[Qual] = []
    valid: List[Qual] = []
    downward: List[Qual] = []
    for (parent, child), ann in spec.items():
        concerned.append(_parent_edge(Step(Axis.SELF, child), parent))
        if ann.kind.grants:
            quals = (ann.qual,) if ann.kind.is_conditional else ()
            valid.append(_parent_edge(Step(Axis.SELF, child, quals), parent))
        if ann.kind is AnnKind.DENY_DOWN:
            downward.append(Not(_parent_edge(Step(Axis.ANCESTOR, child), parent)))
        elif ann.kind is AnnKind.COND_DOWN:
            downward.append(Not(_parent_edge(Step(Axis.ANCESTOR, child, (Not(ann.qual),)), parent)))

    first = or_all(concerned + [root_test])
    second = or_all(valid + [root_test])
    a1 = PathExists(Step(Axis.ANCESTOR_OR_SELF, WILDCARD, (first, Position(1), second)))
    a2 = and_all(downward)
    if isinstance(a2, TrueQual):
        # 独立实例，宏缩写按对象身份匹配
        a2 = TrueQual()
    return PredicateKit(
        a1=a1,
        a2=a2,
        acc=And(a1, a2),
        aplus=Step(Axis.ANCESTOR, WILDCARD, (a1,)),
        aplus_first=Step(Axis.ANCESTOR, WILDCARD, (a1, Position(1))),
        root=dtd.root,
        root_test=root_test,
        root_recursive=root_recursive,
    )


def a_elem(kit: PredicateKit, label: str) -> Qual:
    """Aᴮ := A⁺[1]/ε::B"""
    return PathExists(slash(kit.aplus_first, Step(Axis.SELF, label)))


def fs(items: Iterable[str], axis: Axis) -> Path:
    """
    融合函数：fs({E1..En}, axis) = axis::E1 | ... | axis::En

    Raises:
        EmptySetError: items 为空
    """
    steps = [Step(axis, name) for name in items]
    if not steps:
        raise EmptySetError(f"fs 在轴 {axis.value} 上收到空集合")
    return union(steps)
