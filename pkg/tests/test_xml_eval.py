# -*- coding: utf-8 -*-
"""
测试 XML 树读写、一致性检查、两种求值器与视图物化
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from core import (
    AccessLabel, Evaluator, ReferenceEvaluator, XmlTree,
    parse_xml, to_xml, conforms, parse_xpath, parse_dtd, derive_view, build_kit,
    materialize, label_nodes, oracle_accessible, answer_equal, first_difference,
    XmlSyntaxError, UnsupportedFeatureError,
)
from services import FixtureService

FIXTURES = FixtureService()


# ==================== 读写 ====================

def test_parse_xml_structure():
    tree = parse_xml("<r>\n  <a>x</a>\n  <b/>\n</r>")
    assert tree.labels == ["r", "a", None, "b"]
    assert tree.node_text(1) == "x"
    assert tree.node_path(3) == "/1"
    assert tree.node_path(0) == "/"
    assert tree.element_count() == 3
    assert tree.subtree_end[1] == 3


def test_parse_xml_mixed_text():
    """元素前后的文本按文档顺序成为文本叶子"""
    tree = parse_xml("<r>t<a/>u</r>")
    assert tree.labels == ["r", None, "a", None]
    assert tree.node_text(0) == "tu"


def test_parse_xml_errors():
    test_cases = [
        ("<r>", XmlSyntaxError, "未闭合"),
        ("<r><a></r>", XmlSyntaxError, "标签不匹配"),
        ("<r x='1'/>", UnsupportedFeatureError, "属性"),
        ("<!DOCTYPE r><r/>", UnsupportedFeatureError, "DOCTYPE"),
        ("<r><!-- c --></r>", UnsupportedFeatureError, "注释"),
        ("<?pi x?><r/>", UnsupportedFeatureError, "根外处理指令"),
        ("<r xmlns='urn:x'/>", UnsupportedFeatureError, "命名空间"),
    ]
    for text, error, description in test_cases:
        with pytest.raises(error):
            parse_xml(text)


def test_xml_tree_rejects_bad_order():
    with pytest.raises(ValueError):
        XmlTree(["a", "b"], [None, None], [-1, 5])


def test_truncated_keeps_preorder_prefix():
    tree = parse_xml("<r><a>x<c/></a><b><d/></b></r>")
    test_cases = [
        (1, "<r/>"),
        (2, "<r><a>x</a></r>"),
        (3, "<r><a>x<c/></a></r>"),
        (5, "<r><a>x<c/></a><b><d/></b></r>"),
    ]
    for limit, expected in test_cases:
        cut = tree.truncated(limit)
        assert to_xml(cut) == expected, limit
        assert cut.element_count() == min(limit, 5)
    assert tree.truncated(50) is tree
    with pytest.raises(ValueError):
        tree.truncated(0)


def test_to_xml():
    assert to_xml(parse_xml("<r><a>x</a><b/></r>")) == "<r><a>x</a><b/></r>"
    tree = parse_xml("<r><a>x</a><b/></r>")
    assert to_xml(tree, 1) == "<a>x</a>"


def test_conforms():
    for name in FIXTURES.list_fixtures():
        fixture = FIXTURES.load(name)
        assert conforms(fixture.tree(), fixture.service().dtd), name

    dtd = FIXTURES.load("recursive_axes").service().dtd
    test_cases = [
        ("<root><B/></root>", "根下不允许 B"),
        ("<root><A>x</A></root>", "A 不允许文本"),
        ("<A/>", "根元素错误"),
        ("<root><A><B/></A></root>", "B 缺少子元素"),
    ]
    for text, description in test_cases:
        report = conforms(parse_xml(text), dtd)
        assert not report.ok, description
        assert report.diagnostics, description


# ==================== 求值 ====================

def test_position_and_equality():
    tree = FIXTURES.load("recursive_axes").tree()
    evaluator = Evaluator(tree)
    test_cases = [
        ("descendant::E/ancestor::*[1]", ["/0/0/0", "/1/0/0/0", "/2/0/0/0"], "最近的祖先"),
        ("descendant::E/ancestor::*[2]", ["/0/0", "/1/0/0", "/2/0/0"], "第二近的祖先"),
        ("descendant::A[descendant::E/ancestor::A[1] = self::A]", ["/0", "/1/0", "/2"], "节点比较"),
        ("descendant::E/ancestor-or-self::*[1]", ["/0/0/0/0", "/1/0/0/0/0", "/2/0/0/0/0"], "包含自身"),
        ("descendant::C/parent::B", ["/2/0"], "父节点"),
    ]
    for query, expected, description in test_cases:
        nodes = evaluator.eval(parse_xpath(query), 0)
        assert [tree.node_path(n) for n in nodes] == expected, description


def test_text_equality():
    tree = FIXTURES.load("hospital").tree()
    nodes = Evaluator(tree).eval(parse_xpath("descendant::patient[child::pname = 'Eve']"), 0)
    assert [tree.node_path(n) for n in nodes] == ["/1/2"]


def test_evaluators_agree():
    """带索引的求值器与朴素求值器结果一致"""
    queries = [
        "descendant::patient/ancestor::*[1]",
        "descendant::diagnosis/ancestor::patient[2]",
        "descendant::visit[child::date]/parent::*",
        "descendant::*[child::pname = 'Carl' or child::pname = 'Fay']",
        "descendant::patient[not(ancestor::sibling)]/child::visit",
        "descendant::diagnosis[ancestor::patient[1]/parent::parent]",
        "descendant::drug/ancestor-or-self::*[3]",
        "(descendant::pname | descendant::dname)[1]",
        "descendant::visit[descendant::diagnosis/ancestor::visit[1] = self::visit]",
        "descendant::E/ancestor::A",
        "descendant::A[child::A]/descendant::E",
    ]
    for name in ("hospital", "recursive_axes"):
        tree = FIXTURES.load(name).tree()
        fast, naive = Evaluator(tree), ReferenceEvaluator(tree)
        for text in queries:
            query = parse_xpath(text)
            for context in (0, 1):
                assert sorted(fast.eval(query, context)) == sorted(naive.eval(query, context)), (name, text)


# ==================== 物化 ====================

def test_materialize_simple_view():
    fixture = FIXTURES.load("simple_view")
    tree = fixture.tree()
    mv = materialize(tree, fixture.service().spec)
    assert to_xml(mv.tree) == "<root><A><D/></A></root>"
    assert mv.node_map == [0, 1, 3]
    assert mv.labels == [AccessLabel.PLUS, AccessLabel.PLUS, AccessLabel.MINUS, AccessLabel.PLUS]
    assert mv.to_original([2, 0]) == [0, 3]


def test_materialize_hospital():
    fixture = FIXTURES.load("hospital")
    service = fixture.service()
    mv = materialize(fixture.tree(), service.spec)
    text = to_xml(mv.tree)
    assert text.startswith("<hospital><patient><visit><diagnosis>disease1</diagnosis></visit>")
    for hidden in ("pname", "Dan", "blood", "department", "doctor"):
        assert hidden not in text, hidden
    assert conforms(mv.tree, service.view.view)


def test_labels_agree_with_oracle():
    """+/- 标注、Aᵃᶜᶜ 谓词与按定义的判定三者一致"""
    for name in FIXTURES.list_fixtures():
        fixture = FIXTURES.load(name)
        service = fixture.service()
        tree = fixture.tree()
        evaluator = Evaluator(tree)
        labels = label_nodes(tree, service.spec, evaluator)
        acc = build_kit(service.spec).acc
        for node in tree.elements():
            expected = oracle_accessible(tree, service.spec, node, evaluator)
            assert (labels[node] is AccessLabel.PLUS) == expected, (name, tree.node_path(node))
            assert evaluator.eval_qual(acc, node) == expected, (name, tree.node_path(node))


def test_answer_comparison():
    node_map = [0, 2, 5]
    assert answer_equal([1], node_map, [2])
    assert first_difference([1], node_map, [2]) is None
    assert first_difference([1], node_map, [5]) == (2, "view")
    assert first_difference([], node_map, [5]) == (5, "rewrite")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
