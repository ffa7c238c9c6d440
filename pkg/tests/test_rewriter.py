# -*- coding: utf-8 -*-
"""
测试谓词套件与查询重写：固定输出、答案等价、空结果与工作量计数
"""
import math
import os
import random
import statistics
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from core import (
    Axis, FragmentClass, Evaluator, parse_xpath, parse_qual, parse_dtd, parse_spec, serialize,
    derive_view, build_kit, make_context, rewrite, rewrite_fast, rw_pred, fs, a_elem, parse_xml,
    classify, EmptySetError, FragmentError,
)
from core.xpath_ast import TRUE, FALSE, Step, ast_size
from services import FixtureService, SecurityViewService, RandomSchemaFactory, EQUAL

FIXTURES = FixtureService()


def _outcome(fixture_name, query, fast=False, context=None):
    service = FIXTURES.load(fixture_name).service()
    return service, service.rewrite(query, context_type=context, fast=fast)


def _answer(fixture_name, query, fast=False):
    """重写后在原始文档上求值，返回节点路径"""
    fixture = FIXTURES.load(fixture_name)
    service = fixture.service()
    tree = fixture.tree()
    outcome = service.rewrite(query, fast=fast)
    if outcome.is_empty:
        return []
    return [tree.node_path(n) for n in Evaluator(tree).eval(outcome.query, 0)]


# ==================== 谓词套件 ====================

def test_kit_shape():
    kit = FIXTURES.load("recursive_axes").service().kit
    assert kit.root == "root"
    assert not kit.root_recursive
    assert kit.aplus.axis is Axis.ANCESTOR
    assert kit.aplus_first.quals[-1].index == 1
    assert classify(kit.acc) is FragmentClass.XUP_POS


def test_fs_and_a_elem():
    assert serialize(fs(["A", "B"], Axis.DESCENDANT)) == "descendant::A | descendant::B"
    with pytest.raises(EmptySetError):
        fs([], Axis.CHILD)
    kit = FIXTURES.load("recursive_axes").service().kit
    assert serialize(a_elem(kit, "A").path, kit.abbreviations) == "%APLUS%[1]/self::A"


def test_recursive_root_guard():
    """根类型递归时根测试带 not(parent::*)"""
    dtd = parse_dtd("<!ELEMENT r (r|a)*>\n<!ELEMENT a EMPTY>")
    kit = build_kit(parse_spec("ann(r,a) = N", dtd))
    assert kit.root_recursive
    assert "not(parent::*)" in serialize(Step(Axis.SELF, "x", (kit.root_test,)))


# ==================== 固定输出 ====================

def test_golden_rewrites():
    """递归视图上的重写文本（宏缩写）"""
    test_cases = [
        ("child::A/child::E", False, None,
         "descendant::E[%ACC%][%APLUS%[1]/self::A[%APLUS%[1]/self::root]]", "子步骤前缀嵌套"),
        ("descendant::A[child::E]", False, None,
         "descendant::A[%ACC%][descendant::E[%ACC%]/%APLUS%[1] = self::A]", "谓词中的子步骤"),
        ("child::*/child::E", True, "A",
         "descendant::E[%ACC%][%APLUS%[1]/self::*/%APLUS%[1]/self::A]", "快速路径平铺前缀"),
    ]
    for query, fast, context, expected, description in test_cases:
        service, outcome = _outcome("recursive_axes", query, fast=fast, context=context)
        assert service.render(outcome.query) == expected, description


def test_rendered_output_reparses():
    """展开宏后的输出属于 X↑[n,=] 且可以再次解析"""
    service, outcome = _outcome("recursive_axes", "descendant::A[child::E]")
    text = service.render(outcome.query, abbreviate=False)
    reparsed = parse_xpath(text, FragmentClass.XUP_POS_EQ)
    assert reparsed == outcome.query
    assert service.parse_document_query(service.render(outcome.query)) == outcome.query


# ==================== 答案等价 ====================

def test_recursive_axes_answers():
    test_cases = [
        ("child::A/child::E", ["/0/0/0/0"]),
        ("descendant::A[child::E]", ["/0", "/1/0"]),
        ("descendant::A/child::E", ["/0/0/0/0", "/1/0/0/0/0"]),
        ("descendant::A[child::*/child::D]", []),
        ("descendant::D/child::E", ["/2/0/0/0/0"]),
        ("descendant::E/parent::A", ["/0", "/1/0"]),
        ("descendant::E/ancestor::A", ["/0", "/1", "/1/0", "/2"]),
    ]
    for query, expected in test_cases:
        for fast in (False, True):
            assert _answer("recursive_axes", query, fast) == expected, (query, fast)


def test_accessibility_predicate_on_recursive_view():
    """descendant::H[%ACC%] 只选中第二条分支中的 H"""
    fixture = FIXTURES.load("recursive_view")
    tree = fixture.tree()
    nodes = fixture.service().evaluate(tree, "descendant::H[%ACC%]")
    assert [tree.node_path(n) for n in nodes] == ["/0/1/0/0/0/0/0/0"]


def test_simple_view_answers():
    assert _answer("simple_view", "child::A/child::D") == ["/0/0/0"]
    assert _answer("simple_view", "descendant::D") == ["/0/0/0"]
    assert _answer("simple_view", "child::A/child::C") == []


def test_hospital_answers():
    test_cases = [
        ("Q1", ["/1/1"]),
        ("Q2", ["/1/1/3/0/3/0"]),
        ("Q3", ["/1/1/3/0/2/1/1/0"]),
    ]
    fixture = FIXTURES.load("hospital")
    for name, expected in test_cases:
        for fast in (False, True):
            assert _answer("hospital", fixture.query(name), fast) == expected, (name, fast)


def test_variable_policy():
    """$name 变量决定可见的病人"""
    fixture = FIXTURES.load("hospital_patient")
    tree = fixture.tree()
    test_cases = [
        ("Bob", ["/1/1/2/1/1/0"]),
        ("Eve", []),
        ("Nobody", []),
    ]
    for name, expected in test_cases:
        service = fixture.service(variables={"name": name})
        outcome = service.rewrite("descendant::diagnosis")
        nodes = [] if outcome.is_empty else Evaluator(tree).eval(outcome.query, 0)
        assert [tree.node_path(n) for n in nodes] == expected, name


# ==================== 文档根与真后代 ====================

_ROOT_LOOP_DTD = "<!ELEMENT r (a)*>\n<!ELEMENT a (r)*>"


def test_descendant_first_step_excludes_root():
    """第一步的 descendant 不选中文档根，快速路径亦然"""
    test_cases = [
        ("descendant::*/child::A", [], "根不是自身的后代"),
        ("descendant::*/child::D", ["/0/0/0"], "通配后代仍可继续向下"),
        ("descendant::root", [], "根类型不递归时后代中没有根"),
    ]
    for query, expected, description in test_cases:
        for fast in (False, True):
            assert _answer("simple_view", query, fast) == expected, (description, fast)


def test_descendant_first_step_check_agrees():
    fixture = FIXTURES.load("simple_view")
    service = fixture.service()
    for fast in (False, True):
        report = service.check(fixture.tree(), "descendant::*/child::A", fast=fast)
        assert report.verdict == EQUAL, fast
        assert report.view_answer == report.rewrite_answer == []


def test_fast_path_root_label_is_empty_when_not_recursive():
    service = FIXTURES.load("recursive_axes").service()
    for query in ("descendant::root/child::*", "descendant::A/child::root"):
        assert service.rewrite(query, fast=True).is_empty, query


def test_recursive_root_descendant_first_step():
    """根类型递归：descendant::r 只选中内层 r"""
    service = SecurityViewService(_ROOT_LOOP_DTD, "")
    assert service.kit.root_recursive
    tree = parse_xml("<r><a><r/></a></r>")
    test_cases = [
        ("descendant::r/child::a", [], "内层 r 没有子元素"),
        ("descendant::r", ["/0/0"], "文档根被排除"),
        ("descendant::a/child::r", ["/0/0"], "向下穿过根之后不受影响"),
        ("descendant::*", ["/0", "/0/0"], "通配后代"),
    ]
    for query, expected, description in test_cases:
        for fast in (False, True):
            report = service.check(tree, query, fast=fast)
            assert report.verdict == EQUAL, (description, fast)
            assert report.rewrite_answer == expected, (description, fast)


def test_recursive_root_with_hidden_children():
    """根递归且部分隐藏时，两种重写都与视图一致"""
    dtd = "<!ELEMENT r (a | b)*>\n<!ELEMENT a (r)*>\n<!ELEMENT b (r)*>"
    service = SecurityViewService(dtd, "ann(r,b) = N")
    tree = parse_xml("<r><a><r><b><r/></b></r></a><b><r><a/></r></b></r>")
    for query in ("descendant::r", "descendant::r/child::a", "descendant::a/parent::r", "descendant::*/child::r"):
        for fast in (False, True):
            assert service.check(tree, query, fast=fast).verdict == EQUAL, (query, fast)


# ==================== 空结果与错误 ====================

def test_empty_rewrites():
    """视图中不存在的类型或路径静态判为空"""
    test_cases = [
        ("child::B", "隐藏类型"),
        ("child::E", "root 的视图子类型只有 A"),
        ("parent::*", "文档根没有父节点"),
        ("descendant::A[child::B]", "谓词恒假"),
    ]
    for query, description in test_cases:
        _, outcome = _outcome("recursive_axes", query)
        assert outcome.is_empty, description
        assert outcome.diagnostics, description


def test_union_keeps_satisfiable_branch():
    service, outcome = _outcome("recursive_axes", "child::B | descendant::E")
    assert not outcome.is_empty
    assert len(outcome.diagnostics) == 1


def test_rewrite_rejects_output_fragment():
    with pytest.raises(FragmentError):
        FIXTURES.load("recursive_axes").service().rewrite("descendant::A[ancestor::*[1]]")


def test_rw_pred_constants():
    service = FIXTURES.load("recursive_axes").service()
    ctx = make_context(service.view, service.kit)
    test_cases = [
        ("child::B", ["A"], FALSE, "隐藏子类型恒假"),
        ("not(child::B)", ["A"], TRUE, "否定恒假得恒真"),
        ("child::E or child::B", ["A"], None, "析取保留可满足的一侧"),
    ]
    for text, names, expected, description in test_cases:
        result = rw_pred(parse_qual(text), names, ctx)
        if expected is None:
            assert result not in (TRUE, FALSE), description
        else:
            assert result == expected, description


# ==================== 工作量 ====================

def _loglog_slope(xs, ys):
    """最小二乘拟合 log y = k·log x + b，返回 k"""
    return statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys]).slope


def test_fast_path_work_is_linear():
    service = FIXTURES.load("recursive_axes").service()
    lengths = (8, 16, 32, 64, 128)
    works = []
    for length in lengths:
        query = "/".join(["descendant::A"] + ["child::A"] * (length - 1))
        outcome = service.rewrite(query, fast=True)
        assert not outcome.is_empty
        works.append(outcome.stats.work)
    assert 0.8 <= _loglog_slope(lengths, works) <= 1.2, works


def test_full_rewrite_work_bound():
    service = FIXTURES.load("recursive_axes").service()
    view_size = len(service.view.types)
    for length in (8, 16, 32, 64):
        query = "/".join(["descendant::*"] * length)
        outcome = service.rewrite(query)
        assert outcome.stats.steps == length
        assert outcome.stats.work <= length * (view_size + 1) ** 2 + length * 4


def _annotation_size(spec):
    """|ann|：每条注解计 1，加上条件限定词的 AST 大小"""
    return sum(1 + (ast_size(ann.qual) if ann.qual is not None else 0) for _, ann in spec.items())


def test_acc_size_bounded_by_annotations():
    rng = random.Random(7)
    for _ in range(60):
        factory = RandomSchemaFactory(rng, max_types=10, max_annotations=8, text_alphabet=("x", "y"))
        spec = factory.spec(factory.dtd())
        kit = build_kit(spec)
        assert ast_size(kit.acc) <= 17 * _annotation_size(spec) + 30, serialize(kit.acc)


def _wide_policy(n):
    """根下 n 个子类型，注解 Y / N 交替"""
    names = [f"T{i}" for i in range(n)]
    dtd_text = "\n".join([f"<!ELEMENT root ({' | '.join(names)})*>"] + [f"<!ELEMENT {t} EMPTY>" for t in names])
    spec_text = "\n".join(f"ann(root,{t}) = {'Y' if i % 2 == 0 else 'N'}" for i, t in enumerate(names))
    return parse_spec(spec_text, parse_dtd(dtd_text))


def test_acc_size_scales_linearly():
    counts = (16, 32, 64, 128)
    sizes = [ast_size(build_kit(_wide_policy(n)).acc) for n in counts]
    assert 0.8 <= _loglog_slope(counts, sizes) <= 1.2, sizes


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
