# -*- coding: utf-8 -*-
"""
X↑[n,=] 求值器
Evaluator 使用标签索引与限定词记忆化，ReferenceEvaluator 是直接按语义递归的朴素实现，二者互为对照
"""
from bisect import bisect_left
from typing import Dict, List, Tuple

from .xml_tree import XmlTree
from .xpath_ast import (
    Axis, Path, Qual, Step, Slash, Union_, Group,
    PathExists, TextEquals, NodeEquals, Position, And, Or, Not, TrueQual, FalseQual,
    WILDCARD,
)

_FORWARD_AXES = (Axis.SELF, Axis.CHILD, Axis.DESCENDANT)


class Evaluator:
    """
    带索引的求值器

    结果顺序：前向轴步骤按文档顺序，向上轴步骤按由近及远；
    Slash / Union / Group 的结果去重并按文档顺序排列
    """

    def __init__(self, tree: XmlTree):
        self.tree = tree
        self.positions: Dict[str, List[int]] = {}
        for node, label in enumerate(tree.labels):
            if label is not None:
                self.positions.setdefault(label, []).append(node)
        self._elements = [n for n, label in enumerate(tree.labels) if label is not None]
        # id(限定词) -> (限定词, {节点: 结果})，保留引用使 id 在生命周期内稳定
        self._qual_memo: Dict[int, Tuple[Qual, Dict[int, bool]]] = {}
        self._step_memo: Dict[int, Tuple[Step, Dict[int, List[int]]]] = {}

    # ==================== 路径 ====================
    def eval(self, path: Path, context: int = 0) -> List[int]:
        """计算 context⟦path⟧"""
        if isinstance(path, Step):
            return self._step(path, context)
        if isinstance(path, Slash):
            left = self.eval(path.left, context)
            if not left:
                return []
            if len(left) == 1:
                return sorted(self.eval(path.right, left[0]))
            found = set()
            for node in left:
                found.update(self.eval(path.right, node))
            return sorted(found)
        if isinstance(path, Union_):
            found = set()
            for branch in path.branches:
                found.update(self.eval(branch, context))
            return sorted(found)
        if isinstance(path, Group):
            return self._filter(self.eval(path.inner, context), path.quals)
        raise TypeError(f"未知的路径节点 {path!r}")

    def _step(self, step: Step, context: int) -> List[int]:
        if step.axis in _FORWARD_AXES:
            return self._filter(self._candidates(step, context), step.quals)
        entry = self._step_memo.get(id(step))
        if entry is None:
            entry = (step, {})
            self._step_memo[id(step)] = entry
        memo = entry[1]
        result = memo.get(context)
        if result is None:
            result = self._filter(self._candidates(step, context), step.quals)
            memo[context] = result
        return result

    def _candidates(self, step: Step, context: int) -> List[int]:
        tree = self.tree
        labels = tree.labels
        label = step.label
        axis = step.axis
        if axis is Axis.DESCENDANT:
            start, end = context + 1, tree.subtree_end[context]
            if label == WILDCARD:
                pool = self._elements
            else:
                pool = self.positions.get(label, ())
                if not pool:
                    return []
            return pool[bisect_left(pool, start):bisect_left(pool, end)]
        if axis is Axis.CHILD:
            return [c for c in tree.children[context]
                    if labels[c] is not None and (label == WILDCARD or labels[c] == label)]
        if axis is Axis.SELF:
            nodes = [context]
        elif axis is Axis.PARENT:
            parent = tree.parents[context]
            nodes = [parent] if parent != -1 else []
        elif axis is Axis.ANCESTOR:
            nodes = list(tree.ancestors(context))
        else:
            nodes = [context]
            nodes.extend(tree.ancestors(context))
        return [n for n in nodes if labels[n] is not None and (label == WILDCARD or labels[n] == label)]

    def _filter(self, nodes: List[int], quals) -> List[int]:
        for qual in quals:
            if not nodes:
                return nodes
            if isinstance(qual, Position):
                nodes = [nodes[qual.index - 1]] if len(nodes) >= qual.index else []
            else:
                nodes = [n for n in nodes if self.eval_qual(qual, n)]
        return nodes

    # ==================== 限定词 ====================
    def eval_qual(self, qual: Qual, node: int) -> bool:
        """判断 node ⊨ qual"""
        entry = self._qual_memo.get(id(qual))
        if entry is None:
            entry = (qual, {})
            self._qual_memo[id(qual)] = entry
        memo = entry[1]
        result = memo.get(node)
        if result is None:
            result = self._qual(qual, node)
            memo[node] = result
        return result

    def _qual(self, qual: Qual, node: int) -> bool:
        if isinstance(qual, PathExists):
            return self._exists(qual.path, node)
        if isinstance(qual, And):
            return self.eval_qual(qual.left, node) and self.eval_qual(qual.right, node)
        if isinstance(qual, Or):
            return self.eval_qual(qual.left, node) or self.eval_qual(qual.right, node)
        if isinstance(qual, Not):
            return not self.eval_qual(qual.operand, node)
        if isinstance(qual, TextEquals):
            return any(self.tree.node_text(m) == qual.value for m in self.eval(qual.path, node))
        if isinstance(qual, NodeEquals):
            if node not in self.eval(qual.target, node):
                return False
            return node in self.eval(qual.path, node)
        if isinstance(qual, TrueQual):
            return True
        if isinstance(qual, FalseQual):
            return False
        raise TypeError(f"位置谓词只能出现在限定词列表中: {qual!r}")

    def _exists(self, path: Path, node: int) -> bool:
        """非空判定；无位置谓词的步骤遇到第一个满足的候选即返回"""
        if isinstance(path, Step):
            if any(isinstance(q, Position) for q in path.quals) or path.axis not in _FORWARD_AXES:
                return bool(self._step(path, node))
            candidates = self._candidates(path, node)
            return any(all(self.eval_qual(q, c) for q in path.quals) for c in candidates)
        if isinstance(path, Slash):
            return any(self._exists(path.right, m) for m in self.eval(path.left, node))
        if isinstance(path, Union_):
            return any(self._exists(b, node) for b in path.branches)
        return bool(self.eval(path, node))


class ReferenceEvaluator:
    """朴素求值器：不使用索引与记忆化，直接按定义遍历"""

    def __init__(self, tree: XmlTree):
        self.tree = tree

    def eval(self, path: Path, context: int = 0) -> List[int]:
        if isinstance(path, Step):
            return self._apply(self._axis(path.axis, context, path.label), path.quals)
        if isinstance(path, Slash):
            result: List[int] = []
            for node in self.eval(path.left, context):
                for found in self.eval(path.right, node):
                    if found not in result:
                        result.append(found)
            return sorted(result)
        if isinstance(path, Union_):
            result = []
            for branch in path.branches:
                for found in self.eval(branch, context):
                    if found not in result:
                        result.append(found)
            return sorted(result)
        if isinstance(path, Group):
            return self._apply(self.eval(path.inner, context), path.quals)
        raise TypeError(f"未知的路径节点 {path!r}")

    def _descendants(self, node: int) -> List[int]:
        result = []
        for child in self.tree.children[node]:
            result.append(child)
            result.extend(self._descendants(child))
        return result

    def _axis(self, axis: Axis, node: int, label: str) -> List[int]:
        tree = self.tree
        if axis is Axis.SELF:
            nodes = [node]
        elif axis is Axis.CHILD:
            nodes = list(tree.children[node])
        elif axis is Axis.DESCENDANT:
            nodes = self._descendants(node)
        elif axis is Axis.PARENT:
            nodes = [tree.parents[node]] if tree.parents[node] != -1 else []
        else:
            nodes = [node] if axis is Axis.ANCESTOR_OR_SELF else []
            current = tree.parents[node]
            while current != -1:
                nodes.append(current)
                current = tree.parents[current]
        return [n for n in nodes
                if tree.labels[n] is not None and (label == WILDCARD or tree.labels[n] == label)]

    def _apply(self, nodes: List[int], quals) -> List[int]:
        for qual in quals:
            if isinstance(qual, Position):
                nodes = nodes[qual.index - 1:qual.index]
            else:
                nodes = [n for n in nodes if self.eval_qual(qual, n)]
        return nodes

    def eval_qual(self, qual: Qual, node: int) -> bool:
        if isinstance(qual, PathExists):
            return len(self.eval(qual.path, node)) > 0
        if isinstance(qual, TextEquals):
            for found in self.eval(qual.path, node):
                text = "".join(self.tree.texts[c] for c in self.tree.children[found]
                               if self.tree.labels[c] is None)
                if text == qual.value:
                    return True
            return False
        if isinstance(qual, NodeEquals):
            return node in self.eval(qual.target, node) and node in self.eval(qual.path, node)
        if isinstance(qual, And):
            return self.eval_qual(qual.left, node) and self.eval_qual(qual.right, node)
        if isinstance(qual, Or):
            return self.eval_qual(qual.left, node) or self.eval_qual(qual.right, node)
        if isinstance(qual, Not):
            return not self.eval_qual(qual.operand, node)
        if isinstance(qual, TrueQual):
            return True
        if isinstance(qual, FalseQual):
            return False
        raise TypeError(f"位置谓词只能出现在限定词列表中: {qual!r}")
