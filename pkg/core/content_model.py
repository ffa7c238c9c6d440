# -*- coding: utf-8 -*-
"""
内容模型
元素类型产生式的正则表达式 AST，以及基于 Brzozowski 导数的成员判定
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union


@dataclass(frozen=True)
class Text:
    """#PCDATA"""


@dataclass(frozen=True)
class Empty:
    """ε"""


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Seq:
    items: Tuple["ContentModel", ...]


@dataclass(frozen=True)
class Alt:
    items: Tuple["ContentModel", ...]


@dataclass(frozen=True)
class Star:
    item: "ContentModel"


ContentModel = Union[Text, Empty, Name, Seq, Alt, Star]

TEXT = Text()
EMPTY = Empty()


# ==================== 构造与遍历 ====================

def names_of(cm: ContentModel) -> List[str]:
    """按出现顺序返回内容模型中引用的元素类型（去重）"""
    seen: Dict[str, None] = {}
    stack = [cm]
    while stack:
        node = stack.pop()
        if isinstance(node, Name):
            seen.setdefault(node.name, None)
        elif isinstance(node, (Seq, Alt)):
            stack.extend(reversed(node.items))
        elif isinstance(node, Star):
            stack.append(node.item)
    return list(seen)


def size_of(cm: ContentModel) -> int:
    """AST 节点数 |P(A)|"""
    if isinstance(cm, (Seq, Alt)):
        return 1 + sum(size_of(item) for item in cm.items)
    if isinstance(cm, Star):
        return 1 + size_of(cm.item)
    return 1


def make_seq(items: Iterable[ContentModel]) -> ContentModel:
    """拼接并展平，丢弃 ε；空序列退化为 ε，单元素序列退化为元素本身"""
    flat: List[ContentModel] = []
    for item in items:
        if isinstance(item, Seq):
            flat.extend(item.items)
        elif not isinstance(item, Empty):
            flat.append(item)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Seq(tuple(flat))


def make_alt(items: Iterable[ContentModel]) -> ContentModel:
    """选择并展平、去重，ε 分支固定放在最后"""
    flat: List[ContentModel] = []
    has_empty = False
    for item in items:
        branches = item.items if isinstance(item, Alt) else (item,)
        for branch in branches:
            if isinstance(branch, Empty):
                has_empty = True
            elif branch not in flat:
                flat.append(branch)
    if has_empty:
        flat.append(EMPTY)
    if len(flat) == 1:
        return flat[0]
    return Alt(tuple(flat))


def make_star(item: ContentModel) -> ContentModel:
    """(x|ε)* 化简为 x*，x** 化简为 x*"""
    if isinstance(item, Alt) and EMPTY in item.items:
        item = make_alt(b for b in item.items if not isinstance(b, Empty))
    if isinstance(item, Star):
        return item
    if isinstance(item, Empty):
        return EMPTY
    return Star(item)


# ==================== DTD 语法渲染 ====================

def render_content(cm: ContentModel) -> str:
    """渲染为 <!ELEMENT> 声明右侧的内容规格"""
    if isinstance(cm, Text):
        return "(#PCDATA)"
    if isinstance(cm, Empty):
        return "EMPTY"
    if isinstance(cm, Name):
        return f"({cm.name})"
    if isinstance(cm, Star):
        return f"({_render_particle(cm)})"
    return _render_particle(cm)


def _render_particle(cm: ContentModel) -> str:
    if isinstance(cm, Name):
        return cm.name
    if isinstance(cm, Empty):
        return "EMPTY"
    if isinstance(cm, Seq):
        return "(" + ",".join(_render_particle(item) for item in cm.items) + ")"
    if isinstance(cm, Alt):
        return "(" + "|".join(_render_particle(item) for item in cm.items) + ")"
    if isinstance(cm, Star):
        inner = _render_particle(cm.item)
        if isinstance(cm.item, Star):
            inner = f"({inner})"
        return inner + "*"
    raise ValueError(f"#PCDATA 只能作为完整内容出现: {cm!r}")


# ==================== 成员判定（导数） ====================

class _Phi:
    """空语言"""

    def __repr__(self) -> str:
        return "φ"


PHI = _Phi()


def nullable(cm) -> bool:
    if cm is PHI or isinstance(cm, Name):
        return False
    if isinstance(cm, (Text, Empty, Star)):
        return True
    if isinstance(cm, Seq):
        return all(nullable(item) for item in cm.items)
    return any(nullable(item) for item in cm.items)


def _d_seq(items: Sequence) -> object:
    if any(item is PHI for item in items):
        return PHI
    return make_seq(items)


def _d_alt(items: Sequence) -> object:
    live = [item for item in items if item is not PHI]
    if not live:
        return PHI
    return make_alt(live)


def derivative(cm, symbol: str):
    """cm 关于符号 symbol 的 Brzozowski 导数"""
    if cm is PHI or isinstance(cm, (Text, Empty)):
        return PHI
    if isinstance(cm, Name):
        return EMPTY if cm.name == symbol else PHI
    if isinstance(cm, Star):
        return _d_seq([derivative(cm.item, symbol), cm])
    if isinstance(cm, Alt):
        return _d_alt([derivative(item, symbol) for item in cm.items])
    head, rest = cm.items[0], make_seq(cm.items[1:])
    result = _d_seq([derivative(head, symbol), rest])
    if nullable(head):
        result = _d_alt([result, derivative(rest, symbol)])
    return result


def matches(cm: ContentModel, word: Sequence[str]) -> Tuple[bool, Optional[int]]:
    """
    判断子元素标签序列是否属于 cm 的语言

    Returns:
        (是否匹配, 第一个失配位置；整词被接受或在结尾处不完整时为 None/len(word))
    """
    state = cm
    for index, symbol in enumerate(word):
        state = derivative(state, symbol)
        if state is PHI:
            return False, index
    if nullable(state):
        return True, None
    return False, len(word)


# ==================== 最短推导 ====================

INFINITY = float("inf")


def min_size(cm: ContentModel, sizes: Dict[str, float]) -> float:
    """按当前各类型最短推导估计，cm 产生的最少元素数"""
    if isinstance(cm, (Text, Empty, Star)):
        return 0
    if isinstance(cm, Name):
        return sizes.get(cm.name, INFINITY)
    if isinstance(cm, Seq):
        return sum(min_size(item, sizes) for item in cm.items)
    return min(min_size(item, sizes) for item in cm.items)
