# -*- coding: utf-8 -*-
"""
访问规范
注解语言 ann(A,B) := Y | N | [Q] | N_h | [Q]_h 的解析、校验、渲染与兼容语义映射
"""
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

from .dtd import Dtd, build_reach_index
from .errors import AnnotationSyntaxError, DuplicateAnnotationError, UnknownEdgeError
from .xpath_ast import FragmentClass, Qual, parse_qual, require_fragment, serialize_qual


class AnnKind(Enum):
    ALLOW = "Y"
    DENY = "N"
    COND = "[Q]"
    DENY_DOWN = "N_h"
    COND_DOWN = "[Q]_h"

    @property
    def is_conditional(self) -> bool:
        return self in (AnnKind.COND, AnnKind.COND_DOWN)

    @property
    def is_downward_closed(self) -> bool:
        return self in (AnnKind.DENY_DOWN, AnnKind.COND_DOWN)

    @property
    def grants(self) -> bool:
        """Y、[Q]、[Q]_h 可以授予访问（后两者取决于条件）"""
        return self in (AnnKind.ALLOW, AnnKind.COND, AnnKind.COND_DOWN)


@dataclass(frozen=True)
class Annotation:
    kind: AnnKind
    qual: Optional[Qual] = None

    def __post_init__(self):
        if self.kind.is_conditional and self.qual is None:
            raise ValueError(f"{self.kind.value} 注解必须携带条件")
        if not self.kind.is_conditional and self.qual is not None:
            raise ValueError(f"{self.kind.value} 注解不能携带条件")


Edge = Tuple[str, str]


@dataclass(frozen=True)
class AccessSpec:
    """
    访问规范 (D, ann)

    entries 保持注解文件中的顺序；根类型隐含 ann(root)=Y
    """
    dtd: Dtd
    entries: Dict[Edge, Annotation] = field(default_factory=dict)
    definition_1: bool = False

    def __hash__(self) -> int:
        return hash((self.dtd, tuple(self.entries), self.definition_1))

    def get(self, parent: str, child: str) -> Optional[Annotation]:
        return self.entries.get((parent, child))

    def items(self) -> Iterator[Tuple[Edge, Annotation]]:
        return iter(self.entries.items())

    def edges_of(self, *kinds: AnnKind) -> List[Tuple[Edge, Annotation]]:
        return [(edge, ann) for edge, ann in self.entries.items() if ann.kind in kinds]

    def __len__(self) -> int:
        return len(self.entries)


# ==================== 解析 ====================

_ENTRY_RE = re.compile(
    r"ann\s*\(\s*(?P<parent>[A-Za-z_][\w.\-]*)\s*,\s*(?P<child>[A-Za-z_][\w.\-]*)\s*\)\s*=\s*"
)
_SIMPLE_VALUES = {"Y": AnnKind.ALLOW, "N": AnnKind.DENY, "N_h": AnnKind.DENY_DOWN}


def _strip_comments(text: str) -> str:
    """去掉引号之外的 # 注释"""
    lines = []
    for line in text.splitlines():
        in_quote = False
        cut = len(line)
        for index, char in enumerate(line):
            if char == "'":
                in_quote = not in_quote
            elif char == "#" and not in_quote:
                cut = index
                break
        lines.append(line[:cut])
    return "\n".join(lines)


def _match_bracket(text: str, start: int) -> int:
    """text[start] == '['，返回匹配的 ']' 下标（跳过引号内内容）"""
    depth = 0
    in_quote = False
    for index in range(start, len(text)):
        char = text[index]
        if char == "'":
            in_quote = not in_quote
        elif in_quote:
            continue
        elif char == "[":
            depth += 1
        elif char == "]":
            depth -= 1
            if depth == 0:
                return index
    raise AnnotationSyntaxError("条件注解的方括号未闭合", start)


def _scan_entries(text: str) -> List[Tuple[str, str, AnnKind, Optional[str], int]]:
    entries = []
    index = 0
    while True:
        while index < len(text) and (text[index].isspace() or text[index] == ";"):
            index += 1
        if index >= len(text):
            return entries
        match = _ENTRY_RE.match(text, index)
        if not match:
            raise AnnotationSyntaxError("期望 ann(父类型,子类型) = 值", index)
        parent, child = match.group("parent"), match.group("child")
        index = match.end()
        if index < len(text) and text[index] == "[":
            end = _match_bracket(text, index)
            qual_text = text[index + 1:end]
            index = end + 1
            kind = AnnKind.COND
            if text.startswith("_h", index):
                kind = AnnKind.COND_DOWN
                index += 2
            entries.append((parent, child, kind, qual_text, match.start()))
        else:
            value = re.match(r"N_h|[YN]", text[index:])
            if not value:
                raise AnnotationSyntaxError("注解值必须是 Y、N、N_h、[Q] 或 [Q]_h", index)
            index += value.end()
            entries.append((parent, child, _SIMPLE_VALUES[value.group()], None, match.start()))
        if index < len(text) and not (text[index].isspace() or text[index] == ";"):
            raise AnnotationSyntaxError(f"注解值之后出现多余字符 {text[index]!r}", index)


def parse_spec(text: str, dtd: Dtd, definition_1: bool = False) -> AccessSpec:
    """
    解析注解文件

    Args:
        text: 注解文本，每条形如 ann(A,B) = Y | N | N_h | [Q] | [Q]_h，可用 ';' 或换行分隔
        dtd: 被注解的 DTD
        definition_1: 为 True 时按兼容语义经 compat_mode 转换

    Returns:
        AccessSpec
    """
    children = build_reach_index(dtd).children
    entries: Dict[Edge, Annotation] = {}
    for parent, child, kind, qual_text, position in _scan_entries(_strip_comments(text)):
        if parent not in children or child not in children[parent]:
            raise UnknownEdgeError(f"({parent},{child}) 不是 DTD 中的父子边")
        if (parent, child) in entries:
            raise DuplicateAnnotationError(f"边 ({parent},{child}) 被重复注解")
        qual = None
        if qual_text is not None:
            qual = parse_qual(qual_text.strip())
            require_fragment(qual, FragmentClass.X)
        entries[(parent, child)] = Annotation(kind, qual)
    spec = AccessSpec(dtd=dtd, entries=entries)
    return compat_mode(spec) if definition_1 else spec


def compat_mode(spec: AccessSpec) -> AccessSpec:
    """兼容语义：[Q] 变为向下封闭的 [Q]_h，其余不变；幂等"""
    entries = {
        edge: Annotation(AnnKind.COND_DOWN, ann.qual) if ann.kind is AnnKind.COND else ann
        for edge, ann in spec.entries.items()
    }
    return AccessSpec(dtd=spec.dtd, entries=entries, definition_1=True)


def serialize_spec(spec: AccessSpec) -> str:
    """渲染为注解文件文本（每行一条）"""
    lines = []
    for (parent, child), ann in spec.entries.items():
        if ann.kind.is_conditional:
            value = f"[{serialize_qual(ann.qual)}]"
            if ann.kind is AnnKind.COND_DOWN:
                value += "_h"
        else:
            value = ann.kind.value
        lines.append(f"ann({parent},{child}) = {value}")
    return "\n".join(lines) + ("\n" if lines else "")
