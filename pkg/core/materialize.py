# -*- coding: utf-8 -*-
"""
可访问性判定与视图物化
直接按定义递归判定节点可访问性、自顶向下的 +/- 标注、删除不可访问节点得到物化视图，以及答案比较
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from .access_spec import AccessSpec, AnnKind, Annotation
from .evaluator import Evaluator
from .xml_tree import XmlTree, XmlTreeBuilder


class AccessLabel(Enum):
    PLUS = "+"
    MINUS = "-"


def _annotation(tree: XmlTree, spec: AccessSpec, node: int) -> Optional[Annotation]:
    parent = tree.parents[node]
    if parent == -1:
        return None
    return spec.get(tree.labels[parent], tree.labels[node])


def _holds(evaluator: Evaluator, ann: Annotation, node: int) -> bool:
    return evaluator.eval_qual(ann.qual, node)


def oracle_accessible(tree: XmlTree, spec: AccessSpec, node: int,
                      evaluator: Optional[Evaluator] = None) -> bool:
    """
    按定义判定节点是否可访问（不构造 XPath 谓词）

    (i) 最近的自身或祖先中被注解关注的节点持有有效注解（根视为有效）；
    (ii) 严格祖先中没有 N_h，且每个 [Q]_h 严格祖先满足 Q。文本节点随其父元素。
    """
    evaluator = evaluator or Evaluator(tree)
    if tree.is_text(node):
        node = tree.parents[node]

    current = node
    while True:
        if tree.parents[current] == -1:
            break
        ann = _annotation(tree, spec, current)
        if ann is not None:
            if ann.kind is AnnKind.ALLOW:
                break
            if ann.kind in (AnnKind.DENY, AnnKind.DENY_DOWN):
                return False
            if not _holds(evaluator, ann, current):
                return False
            break
        current = tree.parents[current]

    for ancestor in tree.ancestors(node):
        ann = _annotation(tree, spec, ancestor)
        if ann is None:
            continue
        if ann.kind is AnnKind.DENY_DOWN:
            return False
        if ann.kind is AnnKind.COND_DOWN and not _holds(evaluator, ann, ancestor):
            return False
    return True


def label_nodes(tree: XmlTree, spec: AccessSpec, evaluator: Optional[Evaluator] = None) -> List[AccessLabel]:
    """
    自顶向下为每个节点标注 +/-

    hard 标记表示某个祖先的向下封闭注解已拒绝访问，后代不得再被授予
    """
    evaluator = evaluator or Evaluator(tree)
    plus = [False] * len(tree)
    hard = [False] * len(tree)
    plus[0] = True
    for node in range(1, len(tree)):
        parent = tree.parents[node]
        if tree.is_text(node) or hard[parent]:
            plus[node] = plus[parent] and not hard[parent]
            hard[node] = hard[parent]
            continue
        ann = _annotation(tree, spec, node)
        if ann is None:
            plus[node] = plus[parent]
        elif ann.kind is AnnKind.ALLOW:
            plus[node] = True
        elif ann.kind is AnnKind.DENY:
            plus[node] = False
        elif ann.kind is AnnKind.DENY_DOWN:
            plus[node] = False
            hard[node] = True
        else:
            valid = _holds(evaluator, ann, node)
            plus[node] = valid
            hard[node] = ann.kind is AnnKind.COND_DOWN and not valid
    return [AccessLabel.PLUS if p else AccessLabel.MINUS for p in plus]


@dataclass
class MaterializedView:
    """物化视图与节点对应关系 node_map[视图节点] = 原始节点"""
    tree: XmlTree
    node_map: List[int]
    labels: List[AccessLabel]

    def to_original(self, nodes: Iterable[int]) -> List[int]:
        return sorted(self.node_map[n] for n in nodes)


def materialize(tree: XmlTree, spec: AccessSpec, evaluator: Optional[Evaluator] = None) -> MaterializedView:
    """
    删除所有 - 节点，其子节点提升到最近的保留祖先之下（保持文档顺序）

    Returns:
        MaterializedView
    """
    labels = label_nodes(tree, spec, evaluator)
    builder = XmlTreeBuilder()
    node_map: List[int] = []
    # 原始节点 -> 其自身或最近保留祖先在视图中的编号
    anchor = [-1] * len(tree)
    for node in range(len(tree)):
        parent = tree.parents[node]
        inherited = anchor[parent] if parent != -1 else -1
        if labels[node] is AccessLabel.PLUS:
            if tree.is_text(node):
                anchor[node] = builder.text(tree.texts[node], inherited)
            else:
                anchor[node] = builder.element(tree.labels[node], inherited)
            node_map.append(node)
        else:
            anchor[node] = inherited
    return MaterializedView(tree=builder.build(), node_map=node_map, labels=labels)


def answer_equal(view_nodes: Iterable[int], node_map: List[int], original_nodes: Iterable[int]) -> bool:
    """Q(T_v) 经 node_map 映射后与 Q_t(T) 作为集合相等"""
    return {node_map[n] for n in view_nodes} == set(original_nodes)


def first_difference(view_nodes: Iterable[int], node_map: List[int],
                     original_nodes: Iterable[int]) -> Optional[Tuple[int, str]]:
    """
    文档顺序下第一个只出现在一侧的原始节点

    Returns:
        (原始节点, "view" 或 "rewrite")，两侧一致时为 None
    """
    mapped = {node_map[n] for n in view_nodes}
    rewritten = set(original_nodes)
    diff = sorted(mapped ^ rewritten)
    if not diff:
        return None
    node = diff[0]
    return node, ("view" if node in mapped else "rewrite")


def accessibility_mismatches(tree: XmlTree, spec: AccessSpec, acc_holds: Dict[int, bool],
                             evaluator: Optional[Evaluator] = None) -> List[int]:
    """acc 谓词求值结果与定义判定不一致的元素节点"""
    evaluator = evaluator or Evaluator(tree)
    return [n for n in tree.elements()
            if acc_holds[n] != oracle_accessible(tree, spec, n, evaluator)]
