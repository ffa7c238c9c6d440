# -*- coding: utf-8 -*-
"""
DTD 模型
<!ELEMENT> 声明的解析与渲染、可达性索引（子类型 / 后代类型 / 父类型 / 祖先类型）与递归判定
"""
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .content_model import (
    ContentModel, Name, Seq, Alt, Star, TEXT, EMPTY,
    names_of, size_of, render_content,
)
from .errors import (
    DtdSyntaxError, UndeclaredTypeError, NoRootError,
    UnreachableTypeError, UnsupportedFeatureError,
)


@dataclass(frozen=True)
class Dtd:
    """DTD 三元组 (Ele, P, root)，element_types 保持声明顺序"""
    element_types: Tuple[str, ...]
    productions: Dict[str, ContentModel]
    root: str

    def __hash__(self) -> int:
        return hash((self.element_types, self.root))

    def order(self, name: str) -> int:
        """声明序号，用于确定性排序"""
        return self._positions()[name]

    def _positions(self) -> Dict[str, int]:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = {name: i for i, name in enumerate(self.element_types)}
            object.__setattr__(self, "_position_cache", cached)
        return cached

    def sort_names(self, names) -> List[str]:
        positions = self._positions()
        return sorted(set(names), key=lambda n: positions[n])

    def total_size(self) -> int:
        """Σ|P(A)|"""
        return sum(size_of(self.productions[name]) for name in self.element_types)


@dataclass(frozen=True)
class ReachIndex:
    """Reach(↓,A) 与 Reach(↓⁺,A) 及其反向关系，全部按声明顺序排列"""
    children: Dict[str, Tuple[str, ...]]
    descendants: Dict[str, Tuple[str, ...]]
    parents: Dict[str, Tuple[str, ...]]
    ancestors: Dict[str, Tuple[str, ...]]


# ==================== 解析 ====================

_WS_RE = re.compile(r"\s*")
_TOKEN_RE = re.compile(
    r"(?:"
    r"(?P<comment><!--.*?-->)"
    r"|(?P<element><!ELEMENT\b)"
    r"|(?P<other><![A-Z]+)"
    r"|(?P<pcdata>\#PCDATA)"
    r"|(?P<name>[A-Za-z_][\w.\-]*)"
    r"|(?P<punct>[()|,*?+>])"
    r")",
    re.S,
)


class _DtdParser:
    """递归下降解析器，只接受 <!ELEMENT> 声明"""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        index = 0
        while index < len(text):
            index = _WS_RE.match(text, index).end()
            if index >= len(text):
                break
            match = _TOKEN_RE.match(text, index)
            if not match or match.end() == index:
                raise DtdSyntaxError(f"无法识别的字符 {text[index]!r}", index)
            kind = match.lastgroup
            value = match.group(kind)
            index = match.end()
            if kind == "comment":
                continue
            if kind == "other":
                raise UnsupportedFeatureError(f"不支持的 DTD 声明: {value}")
            tokens.append((kind, value, match.start()))
        return tokens

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def _next(self) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise DtdSyntaxError("声明意外结束", len(self.text))
        self.pos += 1
        return token

    def _expect(self, value: str) -> None:
        kind, got, position = self._next()
        if got != value:
            raise DtdSyntaxError(f"期望 {value!r}，实际为 {got!r}", position)

    def _accept(self, value: str) -> bool:
        token = self._peek()
        if token and token[1] == value and token[0] in ("punct", "name"):
            self.pos += 1
            return True
        return False

    def parse(self) -> List[Tuple[str, ContentModel]]:
        declarations = []
        while self._peek() is not None:
            kind, value, position = self._next()
            if kind != "element":
                raise DtdSyntaxError(f"期望 <!ELEMENT，实际为 {value!r}", position)
            kind, name, position = self._next()
            if kind != "name":
                raise DtdSyntaxError(f"期望元素名，实际为 {name!r}", position)
            content = self._content()
            self._expect(">")
            declarations.append((name, content))
        return declarations

    def _content(self) -> ContentModel:
        token = self._peek()
        if token and token[0] == "name" and token[1] == "EMPTY":
            self.pos += 1
            return EMPTY
        if token and token[0] == "name" and token[1] == "ANY":
            raise UnsupportedFeatureError("不支持 ANY 内容模型")
        if not self._accept("("):
            raise DtdSyntaxError("内容规格必须是 EMPTY、(#PCDATA) 或括号组", self._position())
        token = self._peek()
        if token and token[0] == "pcdata":
            self.pos += 1
            if self._accept("|"):
                raise UnsupportedFeatureError("不支持混合内容 (#PCDATA|...)")
            self._expect(")")
            self._accept("*")
            return TEXT
        return self._postfix(self._group_body())

    def _group_body(self) -> ContentModel:
        """已消费 '('，解析到匹配的 ')'"""
        items = [self._particle()]
        separator = None
        while True:
            token = self._peek()
            if token is None:
                raise DtdSyntaxError("括号未闭合", len(self.text))
            if token[1] == ")":
                self.pos += 1
                break
            if token[1] not in (",", "|"):
                raise DtdSyntaxError(f"期望 ',' '|' 或 ')'，实际为 {token[1]!r}", token[2])
            if separator is not None and token[1] != separator:
                raise DtdSyntaxError("同一组内不能混用 ',' 与 '|'", token[2])
            separator = token[1]
            self.pos += 1
            items.append(self._particle())
        if len(items) == 1:
            return items[0]
        return Seq(tuple(items)) if separator == "," else Alt(tuple(items))

    def _particle(self) -> ContentModel:
        kind, value, position = self._next()
        if kind == "pcdata":
            raise UnsupportedFeatureError("不支持混合内容 (#PCDATA 与元素并列)")
        if value == "(":
            return self._postfix(self._group_body())
        if kind != "name":
            raise DtdSyntaxError(f"期望元素名或 '('，实际为 {value!r}", position)
        particle = EMPTY if value == "EMPTY" else Name(value)
        return self._postfix(particle)

    def _postfix(self, cm: ContentModel) -> ContentModel:
        if self._accept("*"):
            return Star(cm)
        if self._accept("?"):
            return Alt((cm, EMPTY))
        if self._accept("+"):
            return Seq((cm, Star(cm)))
        return cm


def parse_dtd(text: str) -> Dtd:
    """
    解析 DTD 文本

    Args:
        text: 只含 <!ELEMENT> 声明（可带注释）的 DTD 源文本

    Returns:
        Dtd，首个声明为根类型
    """
    declarations = _DtdParser(text).parse()
    if not declarations:
        raise NoRootError("DTD 中没有任何元素声明，无法确定根类型")

    productions: Dict[str, ContentModel] = {}
    order: List[str] = []
    for name, content in declarations:
        if name in productions:
            raise DtdSyntaxError(f"元素 {name} 被重复声明")
        productions[name] = content
        order.append(name)

    for name in order:
        for ref in names_of(productions[name]):
            if ref not in productions:
                raise UndeclaredTypeError(f"产生式 {name} 引用了未声明的类型 {ref}")

    dtd = Dtd(element_types=tuple(order), productions=productions, root=order[0])
    reachable = {dtd.root} | set(build_reach_index(dtd).descendants[dtd.root])
    unreachable = [name for name in order if name not in reachable]
    if unreachable:
        raise UnreachableTypeError(f"从根 {dtd.root} 不可达的类型: {', '.join(unreachable)}")
    return dtd


def serialize_dtd(dtd: Dtd) -> str:
    """渲染为每行一个 <!ELEMENT> 声明的 DTD 文本"""
    lines = [
        f"<!ELEMENT {name} {render_content(dtd.productions[name])}>"
        for name in dtd.element_types
    ]
    return "\n".join(lines) + "\n"


# ==================== 可达性 ====================

def build_reach_index(dtd: Dtd) -> ReachIndex:
    """计算子类型、后代类型（传递闭包）及其反向关系"""
    children = {
        name: tuple(dtd.sort_names(names_of(dtd.productions[name])))
        for name in dtd.element_types
    }
    descendants: Dict[str, Tuple[str, ...]] = {}
    for name in dtd.element_types:
        seen = set()
        frontier = list(children[name])
        while frontier:
            current = frontier.pop()
            if current in seen:
                continue
            seen.add(current)
            frontier.extend(children[current])
        descendants[name] = tuple(dtd.sort_names(seen))

    parents = {name: [] for name in dtd.element_types}
    ancestors = {name: [] for name in dtd.element_types}
    for name in dtd.element_types:
        for child in children[name]:
            parents[child].append(name)
        for desc in descendants[name]:
            ancestors[desc].append(name)

    return ReachIndex(
        children=children,
        descendants=descendants,
        parents={name: tuple(dtd.sort_names(v)) for name, v in parents.items()},
        ancestors={name: tuple(dtd.sort_names(v)) for name, v in ancestors.items()},
    )


def is_recursive(dtd: Dtd, index: Optional[ReachIndex] = None) -> bool:
    """存在 A ∈ descendants(A) 即为递归 DTD"""
    index = index or build_reach_index(dtd)
    return any(name in index.descendants[name] for name in dtd.element_types)
