# -*- coding: utf-8 -*-
"""
测试 DTD 解析、渲染、可达性索引与内容模型成员判定
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import given, settings, strategies as st

from core import (
    parse_dtd, serialize_dtd, build_reach_index, is_recursive,
    DtdSyntaxError, UndeclaredTypeError, NoRootError, UnreachableTypeError, UnsupportedFeatureError,
)
from core.content_model import (
    Name, Seq, Alt, Star, EMPTY, TEXT, matches, make_alt, make_star, render_content,
)

HOSPITAL_LIKE = """
<!ELEMENT root (A*)>
<!ELEMENT A (A|B)*>
<!ELEMENT B (C|D)>
<!ELEMENT C (D)>
<!ELEMENT D (B|E)>
<!ELEMENT E EMPTY>
"""


def test_parse_productions():
    """各种内容规格解析为对应的 AST"""
    dtd = parse_dtd("""
        <!-- 注释会被忽略 -->
        <!ELEMENT r (a, b?, c+, (d|e)*)>
        <!ELEMENT a (#PCDATA)>
        <!ELEMENT b EMPTY>
        <!ELEMENT c (#PCDATA)>
        <!ELEMENT d EMPTY>
        <!ELEMENT e EMPTY>
    """)
    test_cases = [
        ("r", Seq((Name("a"), Alt((Name("b"), EMPTY)), Seq((Name("c"), Star(Name("c")))),
                   Star(Alt((Name("d"), Name("e")))))), "序列、可选、加号与星号"),
        ("a", TEXT, "#PCDATA"),
        ("b", EMPTY, "EMPTY"),
    ]
    for name, expected, description in test_cases:
        assert dtd.productions[name] == expected, description
    assert dtd.root == "r"
    assert dtd.element_types == ("r", "a", "b", "c", "d", "e")


def test_parse_errors():
    """错误输入映射到对应异常"""
    test_cases = [
        ("", NoRootError, "空 DTD"),
        ("<!ELEMENT r (a)>", UndeclaredTypeError, "引用未声明类型"),
        ("<!ELEMENT r EMPTY>\n<!ELEMENT x EMPTY>", UnreachableTypeError, "不可达类型"),
        ("<!ELEMENT r (a,b|c)>\n<!ELEMENT a EMPTY>", DtdSyntaxError, "同组混用分隔符"),
        ("<!ELEMENT r (a>", DtdSyntaxError, "括号未闭合"),
        ("<!ELEMENT r (#PCDATA|a)*>", UnsupportedFeatureError, "混合内容"),
        ("<!ELEMENT r ANY>", UnsupportedFeatureError, "ANY"),
        ("<!ELEMENT r EMPTY>\n<!ATTLIST r x CDATA #IMPLIED>", UnsupportedFeatureError, "属性声明"),
        ("<!ELEMENT r EMPTY>\n<!ELEMENT r EMPTY>", DtdSyntaxError, "重复声明"),
    ]
    for text, error, description in test_cases:
        with pytest.raises(error):
            parse_dtd(text)


def test_serialize_round_trip():
    dtd = parse_dtd(HOSPITAL_LIKE)
    text = serialize_dtd(dtd)
    again = parse_dtd(text)
    assert again == dtd
    assert "<!ELEMENT root (A*)>" in text
    assert "<!ELEMENT E EMPTY>" in text


def test_reach_index():
    """子类型、后代类型及其反向关系"""
    index = build_reach_index(parse_dtd(HOSPITAL_LIKE))
    test_cases = [
        (index.children["root"], ("A",), "root 的子类型"),
        (index.children["A"], ("A", "B"), "A 自递归"),
        (index.descendants["root"], ("A", "B", "C", "D", "E"), "root 可达全部类型"),
        (index.descendants["B"], ("B", "C", "D", "E"), "B 经 D 回到自身"),
        (index.parents["D"], ("B", "C"), "D 的父类型"),
        (index.ancestors["E"], ("root", "A", "B", "C", "D"), "E 的祖先类型"),
        (index.ancestors["root"], (), "根没有祖先"),
    ]
    for actual, expected, description in test_cases:
        assert actual == expected, description


def test_is_recursive():
    assert is_recursive(parse_dtd(HOSPITAL_LIKE))
    assert not is_recursive(parse_dtd("<!ELEMENT r (a)>\n<!ELEMENT a EMPTY>"))


def test_content_model_matches():
    """导数法成员判定"""
    cm = Seq((Name("a"), Alt((Name("b"), EMPTY)), Star(Name("c"))))
    test_cases = [
        (["a"], True, "只有必选项"),
        (["a", "b", "c", "c"], True, "完整序列"),
        (["a", "c"], True, "省略可选项"),
        (["b"], False, "缺少开头"),
        (["a", "b", "b"], False, "可选项重复"),
        ([], False, "空序列"),
    ]
    for word, expected, description in test_cases:
        assert matches(cm, word)[0] is expected, description


def test_smart_constructors():
    assert make_alt([Name("a"), EMPTY, Name("a")]) == Alt((Name("a"), EMPTY))
    assert make_star(Alt((Name("a"), EMPTY))) == Star(Name("a"))
    assert make_star(Star(Name("a"))) == Star(Name("a"))


# ==================== 随机 DTD 往返 ====================

@st.composite
def _particles(draw, names, depth=0):
    if depth >= 2 or draw(st.booleans()):
        particle = Name(draw(st.sampled_from(names)))
    else:
        items = tuple(draw(st.lists(_particles(names, depth + 1), min_size=2, max_size=3)))
        particle = Seq(items) if draw(st.booleans()) else Alt(items)
    if draw(st.integers(0, 3)) == 0:
        particle = Star(particle)
    return particle


@st.composite
def _dtd_texts(draw):
    count = draw(st.integers(2, 5))
    names = [f"t{i}" for i in range(count)]
    lines = []
    for i, name in enumerate(names):
        if i + 1 < count:
            # 保证每个类型都可达：t_i 一定引用 t_{i+1}
            body = Seq((Name(names[i + 1]), draw(_particles(names))))
        else:
            body = draw(st.sampled_from([EMPTY, TEXT, Star(Name(names[0]))]))
        lines.append((name, body))
    return "\n".join(f"<!ELEMENT {n} {render_content(b)}>" for n, b in lines)


@settings(max_examples=60, deadline=None)
@given(_dtd_texts())
def test_random_dtd_round_trip(text):
    dtd = parse_dtd(text)
    assert parse_dtd(serialize_dtd(dtd)) == dtd


@settings(max_examples=40, deadline=None)
@given(_dtd_texts())
def test_reach_index_closure(text):
    """descendants 等于 children 关系的传递闭包（朴素计算对照）"""
    dtd = parse_dtd(text)
    index = build_reach_index(dtd)
    for name in dtd.element_types:
        closure = set(index.children[name])
        while True:
            grown = closure | {c for n in closure for c in index.children[n]}
            if grown == closure:
                break
            closure = grown
        assert set(index.descendants[name]) == closure
        for desc in closure:
            assert name in index.ancestors[desc]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
