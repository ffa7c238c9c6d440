# -*- coding: utf-8 -*-
"""
XML 树模型
元素与文本节点组成的有序树（节点编号即先序文档顺序），基于 lxml 的读写，以及 DTD 一致性检查
"""
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple

from lxml import etree

from .content_model import Text, Empty, matches
from .dtd import Dtd
from .errors import UnsupportedFeatureError, XmlSyntaxError


class XmlTree:
    """
    数组存储的 XML 树

    labels[n] 为元素标签，文本叶子为 None；节点按先序编号，
    因此节点 n 的子树恰好是区间 [n, subtree_end[n])
    """

    def __init__(self, labels: List[Optional[str]], texts: List[Optional[str]], parents: List[int]):
        if not labels or parents[0] != -1 or labels[0] is None:
            raise ValueError("树必须以根元素开头")
        self.labels = labels
        self.texts = texts
        self.parents = parents
        self.children: List[List[int]] = [[] for _ in labels]
        self.subtree_end: List[int] = [n + 1 for n in range(len(labels))]
        for node in range(1, len(labels)):
            parent = parents[node]
            if not 0 <= parent < node:
                raise ValueError(f"节点 {node} 的父节点 {parent} 不满足先序编号")
            if labels[parent] is None:
                raise ValueError("文本节点不能有子节点")
            self.children[parent].append(node)
        for node in range(len(labels) - 1, 0, -1):
            parent = parents[node]
            if self.subtree_end[node] > self.subtree_end[parent]:
                self.subtree_end[parent] = self.subtree_end[node]

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def root(self) -> int:
        return 0

    def is_text(self, node: int) -> bool:
        return self.labels[node] is None

    def elements(self) -> Iterator[int]:
        return (n for n, label in enumerate(self.labels) if label is not None)

    def element_count(self) -> int:
        return sum(1 for label in self.labels if label is not None)

    def element_children(self, node: int) -> List[int]:
        return [c for c in self.children[node] if self.labels[c] is not None]

    def truncated(self, max_elements: int) -> "XmlTree":
        """先序前缀，最多保留 max_elements 个元素；前缀对父节点封闭，结果仍是一棵树"""
        if max_elements < 1:
            raise ValueError("至少保留根元素")
        cut, seen = 0, 0
        for node, label in enumerate(self.labels):
            if label is not None:
                if seen == max_elements:
                    break
                seen += 1
            cut = node + 1
        if cut == len(self.labels):
            return self
        return XmlTree(self.labels[:cut], self.texts[:cut], self.parents[:cut])

    def node_text(self, node: int) -> str:
        """直接文本子节点的拼接"""
        return "".join(self.texts[c] for c in self.children[node] if self.labels[c] is None)

    def ancestors(self, node: int) -> Iterator[int]:
        """严格祖先，由近及远"""
        current = self.parents[node]
        while current != -1:
            yield current
            current = self.parents[current]

    def node_path(self, node: int) -> str:
        """以元素子节点下标表示的路径，如 /0/2/1；根为 /"""
        parts = []
        current = node
        while self.parents[current] != -1:
            parent = self.parents[current]
            siblings = self.children[parent] if self.labels[current] is None else self.element_children(parent)
            parts.append(str(siblings.index(current)))
            current = parent
        return "/" + "/".join(reversed(parts))


class XmlTreeBuilder:
    """按先序追加节点构造 XmlTree（文档生成与物化时使用）"""

    def __init__(self):
        self.labels: List[Optional[str]] = []
        self.texts: List[Optional[str]] = []
        self.parents: List[int] = []

    def element(self, label: str, parent: int) -> int:
        self.labels.append(label)
        self.texts.append(None)
        self.parents.append(parent)
        return len(self.labels) - 1

    def text(self, value: str, parent: int) -> int:
        self.labels.append(None)
        self.texts.append(value)
        self.parents.append(parent)
        return len(self.labels) - 1

    def __len__(self) -> int:
        return len(self.labels)

    def build(self) -> XmlTree:
        return XmlTree(self.labels, self.texts, self.parents)


# ==================== 读写 ====================

def _parser() -> etree.XMLParser:
    return etree.XMLParser(
        resolve_entities=False,
        no_network=True,
        remove_comments=False,
        remove_pis=False,
        huge_tree=True,
    )


def parse_xml(text: str) -> XmlTree:
    """
    解析 XML 文本（只含元素与文本）

    Raises:
        XmlSyntaxError: 文档格式错误
        UnsupportedFeatureError: 属性、注释、处理指令、DOCTYPE 或命名空间
    """
    data = text.encode("utf-8") if isinstance(text, str) else text
    try:
        root = etree.fromstring(data, _parser())
    except etree.XMLSyntaxError as exc:
        line, column = exc.position if exc.position else (0, 0)
        raise XmlSyntaxError(f"XML 格式错误 (行 {line} 列 {column}): {exc.msg}") from exc
    tree = root.getroottree()
    if tree.docinfo.doctype:
        raise UnsupportedFeatureError("不支持 DOCTYPE 声明")
    if root.getprevious() is not None or root.getnext() is not None:
        raise UnsupportedFeatureError("不支持根元素之外的注释或处理指令")

    builder = XmlTreeBuilder()
    # 显式栈保证深层递归文档不会触发 Python 递归上限
    stack: List[Tuple[str, object, int]] = [("element", root, -1)]
    while stack:
        kind, item, parent = stack.pop()
        if kind == "text":
            builder.text(item, parent)
            continue
        element = item
        if not isinstance(element.tag, str):
            raise UnsupportedFeatureError("不支持 XML 注释或处理指令")
        if element.tag.startswith("{"):
            raise UnsupportedFeatureError(f"不支持命名空间: {element.tag}")
        if element.attrib:
            raise UnsupportedFeatureError(f"元素 {element.tag} 带有属性，属性不在模型之内")
        node = builder.element(element.tag, parent)
        content: List[Tuple[str, object, int]] = []
        if element.text and element.text.strip():
            content.append(("text", element.text, node))
        for child in element:
            content.append(("element", child, node))
            if child.tail and child.tail.strip():
                content.append(("text", child.tail, node))
        stack.extend(reversed(content))
    return builder.build()


def _to_element(tree: XmlTree, node: int) -> etree._Element:
    top = etree.Element(tree.labels[node])
    stack = [(node, top)]
    while stack:
        current, element = stack.pop()
        last = None
        for child in tree.children[current]:
            if tree.labels[child] is None:
                if last is None:
                    element.text = (element.text or "") + tree.texts[child]
                else:
                    last.tail = (last.tail or "") + tree.texts[child]
                continue
            last = etree.SubElement(element, tree.labels[child])
            stack.append((child, last))
    return top


def to_xml(tree: XmlTree, node: int = 0, pretty: bool = False) -> str:
    """序列化节点 node 的子树"""
    if tree.labels[node] is None:
        return tree.texts[node]
    return etree.tostring(_to_element(tree, node), encoding="unicode", pretty_print=pretty)


# ==================== 一致性检查 ====================

@dataclass
class ConformanceReport:
    ok: bool
    diagnostics: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def conforms(tree: XmlTree, dtd: Dtd, limit: int = 1) -> ConformanceReport:
    """
    检查文档是否符合 DTD

    Args:
        tree: 文档
        dtd: DTD
        limit: 最多收集的违规条数

    Returns:
        ConformanceReport，diagnostics 依文档顺序列出违规节点
    """
    diagnostics: List[str] = []
    if tree.labels[0] != dtd.root:
        diagnostics.append(f"根元素为 {tree.labels[0]}，DTD 要求 {dtd.root}")
    for node in tree.elements():
        if len(diagnostics) >= limit:
            break
        label = tree.labels[node]
        production = dtd.productions.get(label)
        if production is None:
            diagnostics.append(f"{tree.node_path(node)}: 未声明的元素类型 {label}")
            continue
        has_text = any(tree.labels[c] is None for c in tree.children[node])
        word = [tree.labels[c] for c in tree.element_children(node)]
        if isinstance(production, Text):
            if word:
                diagnostics.append(f"{tree.node_path(node)}: {label} 只允许文本内容")
            continue
        if has_text:
            diagnostics.append(f"{tree.node_path(node)}: {label} 不允许文本内容")
            continue
        if isinstance(production, Empty):
            ok = not word
        else:
            ok, _ = matches(production, word)
        if not ok:
            diagnostics.append(f"{tree.node_path(node)}: 子元素序列 {' '.join(word) or 'ε'} 不符合 {label} 的产生式")
    return ConformanceReport(ok=not diagnostics, diagnostics=diagnostics[:limit])


def node_paths(tree: XmlTree, nodes: Iterable[int]) -> List[str]:
    return [tree.node_path(n) for n in nodes]
