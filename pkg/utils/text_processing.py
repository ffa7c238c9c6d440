# -*- coding: utf-8 -*-
"""
文本处理工具
变量替换、宏展开、查询文件读取
"""
import re
from typing import Dict, Iterable, List, Tuple

_VARIABLE_RE = re.compile(r"\$([A-Za-z_]\w*)")
_QUERY_LINE_RE = re.compile(r"^(\w+)\s*:\s+(.*)$")


def parse_var_assignments(assignments: Iterable[str]) -> Dict[str, str]:
    """解析 --var name=value 形式的赋值列表"""
    variables = {}
    for item in assignments or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise ValueError(f"变量赋值格式应为 name=value: {item!r}")
        variables[name] = value
    return variables


def substitute_variables(text: str, variables: Dict[str, str]) -> str:
    """
    把 $name 替换为变量值（在解析前按文本进行）

    Raises:
        ValueError: 引用了未定义的变量
    """
    def _replace(match: re.Match) -> str:
        name = match.group(1)
        if name not in variables:
            raise ValueError(f"未定义的变量 ${name}，请用 --var {name}=... 提供")
        return variables[name]

    return _VARIABLE_RE.sub(_replace, text)


def expand_macros(text: str, macros: Dict[str, str]) -> str:
    """展开 %ACC% 等宏；较长的宏名优先匹配"""
    for name in sorted(macros, key=len, reverse=True):
        text = text.replace(name, macros[name])
    leftover = re.search(r"%[A-Z0-9]+%", text)
    if leftover:
        raise ValueError(f"未知的宏 {leftover.group()}")
    return text


def read_queries(text: str) -> List[Tuple[str, str]]:
    """
    读取查询文件：每行一个查询，可带 "名称: " 前缀；空行与 # 注释行忽略

    Returns:
        [(名称, 查询文本)]，无名称的查询依次编号 Q1、Q2 ...
    """
    queries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        match = _QUERY_LINE_RE.match(line)
        if match:
            queries.append((match.group(1), match.group(2).strip()))
        else:
            queries.append((f"Q{len(queries) + 1}", line))
    return queries
