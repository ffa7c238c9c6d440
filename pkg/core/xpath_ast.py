# -*- coding: utf-8 -*-
"""
XPath 片段 AST
输入片段 X 与输出片段 X↑[n,=] 的抽象语法树、递归下降解析器、渲染器与片段分类
"""
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import QuerySyntaxError, FragmentError

WILDCARD = "*"


class Axis(Enum):
    """轴：ε ↓ ↓⁺ ↑ ↑⁺ ↑*"""
    SELF = "self"
    CHILD = "child"
    DESCENDANT = "descendant"
    PARENT = "parent"
    ANCESTOR = "ancestor"
    ANCESTOR_OR_SELF = "ancestor-or-self"

    @property
    def is_upward(self) -> bool:
        return self in (Axis.PARENT, Axis.ANCESTOR, Axis.ANCESTOR_OR_SELF)


DOWNWARD_AXES = (Axis.CHILD, Axis.DESCENDANT)


class FragmentClass(IntEnum):
    """X ⊂ X↑ ⊂ X↑[n] ⊂ X↑[n,=]"""
    X = 0
    XUP = 1
    XUP_POS = 2
    XUP_POS_EQ = 3


# ==================== 路径 ====================

@dataclass(frozen=True)
class Step:
    axis: Axis
    label: str
    quals: Tuple["Qual", ...] = ()


@dataclass(frozen=True)
class Slash:
    left: "Path"
    right: "Path"


@dataclass(frozen=True)
class Union_:
    branches: Tuple["Path", ...]


@dataclass(frozen=True)
class Group:
    """带限定词的括号并集 (p1 | p2)[q]"""
    inner: Union_
    quals: Tuple["Qual", ...] = ()


Path = Union[Step, Slash, Union_, Group]


# ==================== 限定词 ====================

@dataclass(frozen=True)
class PathExists:
    path: Path


@dataclass(frozen=True)
class TextEquals:
    path: Path
    value: str


@dataclass(frozen=True)
class NodeEquals:
    path: Path
    target: Step


@dataclass(frozen=True)
class Position:
    index: int


@dataclass(frozen=True)
class And:
    left: "Qual"
    right: "Qual"


@dataclass(frozen=True)
class Or:
    left: "Qual"
    right: "Qual"


@dataclass(frozen=True)
class Not:
    operand: "Qual"


@dataclass(frozen=True)
class TrueQual:
    pass


@dataclass(frozen=True)
class FalseQual:
    pass


Qual = Union[PathExists, TextEquals, NodeEquals, Position, And, Or, Not, TrueQual, FalseQual]

TRUE = TrueQual()
FALSE = FalseQual()


# ==================== 构造辅助 ====================

def step(axis: Axis, label: str, *quals: "Qual") -> Step:
    return Step(axis, label, tuple(quals))


def self_step(label: str, *quals: "Qual") -> Step:
    return Step(Axis.SELF, label, tuple(quals))


def slash(*parts: Path) -> Path:
    """左结合拼接；并集作为操作数时自动包成 Group"""
    result: Optional[Path] = None
    for part in parts:
        for piece in _slash_pieces(part):
            result = piece if result is None else Slash(result, piece)
    if result is None:
        raise ValueError("slash() 至少需要一个路径")
    return result


def _slash_pieces(part: Path) -> List[Path]:
    if isinstance(part, Slash):
        return _slash_pieces(part.left) + _slash_pieces(part.right)
    if isinstance(part, Union_):
        return [Group(part)]
    return [part]


def path_steps(path: Path) -> List[Path]:
    """把 Slash 链展平为步骤序列（元素为 Step 或 Group）"""
    return _slash_pieces(path) if isinstance(path, Slash) else [path]


def union(branches: Iterable[Path]) -> Path:
    flat: List[Path] = []
    for branch in branches:
        flat.extend(branch.branches if isinstance(branch, Union_) else (branch,))
    if not flat:
        raise ValueError("union() 至少需要一个分支")
    if len(flat) == 1:
        return flat[0]
    return Union_(tuple(flat))


def with_quals(path: Path, quals: Sequence["Qual"]) -> Path:
    """在路径末端追加限定词，TRUE 被忽略"""
    quals = tuple(q for q in quals if not isinstance(q, TrueQual))
    if not quals:
        return path
    if isinstance(path, Step):
        return Step(path.axis, path.label, path.quals + quals)
    if isinstance(path, Group):
        return Group(path.inner, path.quals + quals)
    if isinstance(path, Union_):
        return Group(path, quals)
    raise ValueError("不能直接给 Slash 路径追加限定词")


def and_all(quals: Iterable["Qual"]) -> "Qual":
    """左结合合取；空合取为 TRUE"""
    result: Optional[Qual] = None
    for q in quals:
        result = q if result is None else And(result, q)
    return TRUE if result is None else result


def or_all(quals: Iterable["Qual"]) -> "Qual":
    """左结合析取；空析取为 FALSE"""
    result: Optional[Qual] = None
    for q in quals:
        result = q if result is None else Or(result, q)
    return FALSE if result is None else result


# ==================== 词法 ====================

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<axis>::)"
    r"|(?P<string>'(?:[^']|'')*')"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][\w.\-]*)"
    r"|(?P<punct>[/|\[\]()=*])"
)

_AXES = {axis.value: axis for axis in Axis}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    index = 0
    while index < len(text):
        match = _TOKEN_RE.match(text, index)
        if not match:
            raise QuerySyntaxError(f"无法识别的字符 {text[index]!r}", index)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, match.group(kind), index))
        index = match.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# ==================== 语法分析 ====================

class _Backtrack(Exception):
    pass


class XPathParser:
    """
    递归下降解析器

    union := path ('|' path)*
    path  := step ('/' step)*
    step  := axis '::' (name|'*') qual* | '(' union ')' qual*
    qual  := '[' INT ']' | '[' disj ']'
    disj  := conj ('or' conj)* ; conj := atom ('and' atom)*
    atom  := 'not' '(' disj ')' | 'true' '(' ')' | 'false' '(' ')'
           | union ('=' (STRING | 'self' '::' (name|'*')))? | '(' disj ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    # -------- 基础 --------
    def _peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _next(self) -> _Token:
        token = self._peek()
        self.pos = min(self.pos + 1, len(self.tokens) - 1)
        return token

    def _is(self, value: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token.kind in ("punct", "name") and token.value == value

    def _expect(self, value: str) -> _Token:
        token = self._next()
        if token.value != value or token.kind not in ("punct", "name"):
            shown = token.value or "输入结束"
            raise QuerySyntaxError(f"期望 {value!r}，实际为 {shown!r}", token.position)
        return token

    def _error(self, message: str) -> QuerySyntaxError:
        return QuerySyntaxError(message, self._peek().position)

    # -------- 入口 --------
    def parse_path(self) -> Path:
        result = self._union()
        if self._peek().kind != "eof":
            raise self._error(f"多余的输入 {self._peek().value!r}")
        return result

    def parse_qual(self) -> "Qual":
        result = self._disj()
        if self._peek().kind != "eof":
            raise self._error(f"多余的输入 {self._peek().value!r}")
        return result

    # -------- 路径 --------
    def _union(self) -> Path:
        branches = [self._path()]
        while self._is("|"):
            self._next()
            branches.append(self._path())
        return union(branches)

    def _path(self) -> Path:
        parts = [self._step()]
        while self._is("/"):
            self._next()
            parts.append(self._step())
        return slash(*parts)

    def _step(self) -> Path:
        if self._is("("):
            self._next()
            inner = self._union()
            self._expect(")")
            quals = self._quals()
            if isinstance(inner, Union_):
                return Group(inner, quals)
            if quals:
                return with_quals(inner, quals) if isinstance(inner, (Step, Group)) else Group(Union_((inner,)), quals)
            return inner
        token = self._next()
        if token.kind != "name" or token.value not in _AXES:
            raise QuerySyntaxError(f"期望轴名，实际为 {token.value or '输入结束'!r}", token.position)
        axis = _AXES[token.value]
        if self._peek().kind != "axis":
            raise self._error("轴名之后缺少 '::'")
        self._next()
        label = self._label()
        return Step(axis, label, self._quals())

    def _label(self) -> str:
        token = self._next()
        if token.kind == "name" or (token.kind == "punct" and token.value == WILDCARD):
            return token.value
        raise QuerySyntaxError(f"期望标签或 '*'，实际为 {token.value or '输入结束'!r}", token.position)

    def _quals(self) -> Tuple["Qual", ...]:
        quals = []
        while self._is("["):
            self._next()
            if self._peek().kind == "int" and self._is("]", 1):
                index = int(self._next().value)
                if index < 1:
                    raise self._error("位置谓词必须是正整数")
                quals.append(Position(index))
            else:
                quals.append(self._disj())
            self._expect("]")
        return tuple(quals)

    # -------- 限定词 --------
    def _disj(self) -> "Qual":
        result = self._conj()
        while self._is("or"):
            self._next()
            result = Or(result, self._conj())
        return result

    def _conj(self) -> "Qual":
        result = self._atom()
        while self._is("and"):
            self._next()
            result = And(result, self._atom())
        return result

    def _atom(self) -> "Qual":
        if self._is("not") and self._is("(", 1):
            self._next()
            self._next()
            operand = self._disj()
            self._expect(")")
            return Not(operand)
        for literal, value in (("true", TRUE), ("false", FALSE)):
            if self._is(literal) and self._is("(", 1) and self._is(")", 2):
                self.pos += 3
                return value
        if self._is("("):
            saved = self.pos
            try:
                return self._comparison(require_end=True)
            except (QuerySyntaxError, _Backtrack):
                self.pos = saved
            self._next()
            inner = self._disj()
            self._expect(")")
            return inner
        return self._comparison(require_end=False)

    def _comparison(self, require_end: bool) -> "Qual":
        path = self._union()
        if self._is("="):
            self._next()
            token = self._peek()
            if token.kind == "string":
                self._next()
                return TextEquals(path, token.value[1:-1].replace("''", "'"))
            if self._is("self") and self._peek(1).kind == "axis":
                self._next()
                self._next()
                return NodeEquals(path, Step(Axis.SELF, self._label()))
            raise self._error("'=' 右侧必须是带单引号的常量或 self::name")
        if require_end and not (self._is("]") or self._is(")") or self._is("and")
                                or self._is("or") or self._peek().kind == "eof"):
            raise _Backtrack()
        return PathExists(path)


def parse_xpath(text: str, fragment: Optional[FragmentClass] = None) -> Path:
    """
    解析查询文本

    Args:
        text: 查询文本
        fragment: 若指定，表达式的片段类别不得超过该类别

    Returns:
        路径 AST
    """
    path = XPathParser(text).parse_path()
    if fragment is not None:
        require_fragment(path, fragment)
    return path


def parse_qual(text: str, fragment: Optional[FragmentClass] = None) -> "Qual":
    """解析独立的限定词文本（访问规范中的条件）"""
    qual = XPathParser(text).parse_qual()
    if fragment is not None:
        require_fragment(qual, fragment)
    return qual


# ==================== 片段分类 ====================

def classify(expr: Union[Path, "Qual"]) -> FragmentClass:
    """返回包含表达式的最小片段类别"""
    level = FragmentClass.X
    stack: List[object] = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Step):
            if node.axis not in DOWNWARD_AXES:
                level = max(level, FragmentClass.XUP)
            stack.extend(node.quals)
        elif isinstance(node, Slash):
            stack.extend((node.left, node.right))
        elif isinstance(node, Union_):
            stack.extend(node.branches)
        elif isinstance(node, Group):
            stack.append(node.inner)
            stack.extend(node.quals)
        elif isinstance(node, Position):
            level = max(level, FragmentClass.XUP_POS)
        elif isinstance(node, NodeEquals):
            level = FragmentClass.XUP_POS_EQ
            stack.append(node.path)
        elif isinstance(node, (PathExists, TextEquals)):
            stack.append(node.path)
        elif isinstance(node, (And, Or)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Not):
            stack.append(node.operand)
    return level


def require_fragment(expr: Union[Path, "Qual"], fragment: FragmentClass) -> None:
    found = classify(expr)
    if found > fragment:
        raise FragmentError(f"表达式属于片段 {found.name}，超出允许的 {fragment.name}")
    if fragment == FragmentClass.X and _contains_group(expr):
        raise FragmentError("片段 X 不允许带括号的并集")


def _contains_group(expr) -> bool:
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Group):
            return True
        if isinstance(node, Step):
            stack.extend(node.quals)
        elif isinstance(node, Slash):
            stack.extend((node.left, node.right))
        elif isinstance(node, Union_):
            stack.extend(node.branches)
        elif isinstance(node, (PathExists, TextEquals, NodeEquals)):
            stack.append(node.path)
        elif isinstance(node, (And, Or)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Not):
            stack.append(node.operand)
    return False


def ast_size(expr) -> int:
    """AST 节点数（共享子树按引用次数计）"""
    if isinstance(expr, Step):
        return 1 + sum(ast_size(q) for q in expr.quals)
    if isinstance(expr, Slash):
        return 1 + ast_size(expr.left) + ast_size(expr.right)
    if isinstance(expr, Union_):
        return 1 + sum(ast_size(b) for b in expr.branches)
    if isinstance(expr, Group):
        return 1 + ast_size(expr.inner) + sum(ast_size(q) for q in expr.quals)
    if isinstance(expr, (PathExists, TextEquals)):
        return 1 + ast_size(expr.path)
    if isinstance(expr, NodeEquals):
        return 1 + ast_size(expr.path) + ast_size(expr.target)
    if isinstance(expr, (And, Or)):
        return 1 + ast_size(expr.left) + ast_size(expr.right)
    if isinstance(expr, Not):
        return 1 + ast_size(expr.operand)
    return 1


# ==================== 渲染 ====================

_OR, _AND, _ATOM = 1, 2, 3


class XPathSerializer:
    """
    渲染 AST 为查询文本

    abbreviations 以对象 id 为键，命中的限定词或步骤渲染为 %NAME% 宏
    """

    def __init__(self, abbreviations: Optional[Dict[int, str]] = None):
        self.abbreviations = abbreviations or {}

    def path(self, p: Path) -> str:
        if isinstance(p, Union_):
            return " | ".join(self._operand(b) for b in p.branches)
        return self._operand(p)

    def _operand(self, p: Path) -> str:
        if isinstance(p, Slash):
            return f"{self._operand(p.left)}/{self._operand(p.right)}"
        if isinstance(p, Group):
            return f"({self.path(p.inner)}){self._quals(p.quals)}"
        if isinstance(p, Union_):
            return f"({self.path(p)})"
        abbreviated = self.abbreviations.get(id(p))
        if abbreviated is not None:
            return abbreviated
        return f"{p.axis.value}::{p.label}{self._quals(p.quals)}"

    def _quals(self, quals: Sequence["Qual"]) -> str:
        return "".join(
            f"[{q.index}]" if isinstance(q, Position) else f"[{self.qual(q)}]"
            for q in quals
        )

    def qual(self, q: "Qual", required: int = _OR) -> str:
        abbreviated = self.abbreviations.get(id(q))
        if abbreviated is not None:
            return abbreviated
        if isinstance(q, Or):
            text, level = f"{self.qual(q.left, _OR)} or {self.qual(q.right, _AND)}", _OR
        elif isinstance(q, And):
            text, level = f"{self.qual(q.left, _AND)} and {self.qual(q.right, _ATOM)}", _AND
        else:
            text, level = self._atom(q), _ATOM
        if level < required:
            return f"({text})"
        return text

    def _atom(self, q: "Qual") -> str:
        if isinstance(q, Not):
            return f"not({self.qual(q.operand)})"
        if isinstance(q, TrueQual):
            return "true()"
        if isinstance(q, FalseQual):
            return "false()"
        if isinstance(q, Position):
            return f"({q.index})"
        if isinstance(q, TextEquals):
            escaped = q.value.replace("'", "''")
            return f"{self.path(q.path)} = '{escaped}'"
        if isinstance(q, NodeEquals):
            return f"{self.path(q.path)} = {self._operand(q.target)}"
        return self.path(q.path)


def serialize(p: Path, abbreviations: Optional[Dict[int, str]] = None) -> str:
    """渲染路径；parse(serialize(p)) 与 p 结构相等"""
    return XPathSerializer(abbreviations).path(p)


def serialize_qual(q: "Qual", abbreviations: Optional[Dict[int, str]] = None) -> str:
    return XPathSerializer(abbreviations).qual(q)
