# -*- coding: utf-8 -*-
"""
测试随机文档生成：参数校验、确定性、深度上限与终止性
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from core import (
    GenConfig, generate, generate_corpus, shortest_derivations, parse_dtd, conforms,
    NonTerminatingError,
)
from services import FixtureService

FIXTURES = FixtureService()


def _depth(tree, node):
    return sum(1 for _ in tree.ancestors(node)) + 1


def test_gen_config_validation():
    test_cases = [
        ({"max_depth": 0}, "深度至少为 1"),
        ({"star_geometric": 0}, "p 不能为 0"),
        ({"star_geometric": 1.5}, "p 不能大于 1"),
        ({"text_alphabet": ()}, "字母表不能为空"),
        ({"text_alphabet": ("a", "")}, "字母表不能含空串"),
        ({"target_nodes": 0}, "目标规模必须为正"),
    ]
    for kwargs, description in test_cases:
        with pytest.raises(ValueError):
            GenConfig(**kwargs)


def test_shortest_derivations():
    sizes = shortest_derivations(FIXTURES.load("recursive_axes").service().dtd)
    test_cases = [
        ("E", 1), ("D", 2), ("B", 3), ("C", 3), ("A", 1), ("root", 1),
    ]
    for name, expected in test_cases:
        assert sizes[name] == expected, name


def test_non_terminating_dtd():
    dtd = parse_dtd("<!ELEMENT r (a)>\n<!ELEMENT a (a)>")
    with pytest.raises(NonTerminatingError):
        generate(dtd, GenConfig())


def test_generation_is_deterministic():
    dtd = FIXTURES.load("hospital").service().dtd
    first = generate(dtd, GenConfig(seed=7))
    second = generate(dtd, GenConfig(seed=7))
    assert first.labels == second.labels
    assert first.texts == second.texts
    assert first.parents == second.parents


def test_depth_cap():
    """到达深度上限后只走最短推导"""
    dtd = parse_dtd("<!ELEMENT A (A|EMPTY)>")
    for seed in range(30):
        tree = generate(dtd, GenConfig(seed=seed, max_depth=3, star_geometric=0.1))
        assert tree.element_count() <= 3
        assert max(_depth(tree, n) for n in tree.elements()) <= 3


def test_generated_documents_conform():
    alphabet = ("x", "y")
    for name in ("hospital", "recursive_axes", "recursive_view", "simple_view"):
        dtd = FIXTURES.load(name).service().dtd
        for seed in range(10):
            tree = generate(dtd, GenConfig(seed=seed, max_depth=6, text_alphabet=alphabet))
            assert conforms(tree, dtd), (name, seed)
            assert all(t in alphabet for t in tree.texts if t is not None)


def test_target_nodes_fills_root():
    dtd = FIXTURES.load("recursive_axes").service().dtd
    tree = generate(dtd, GenConfig(seed=3, target_nodes=200))
    assert tree.element_count() >= 200
    assert conforms(tree, dtd)


def test_generate_corpus():
    dtd = FIXTURES.load("recursive_axes").service().dtd
    assert generate_corpus(dtd, GenConfig(seed=1), 0) == []
    first = generate_corpus(dtd, GenConfig(seed=1, target_nodes=30), 4, max_workers=2)
    second = generate_corpus(dtd, GenConfig(seed=1, target_nodes=30), 4, max_workers=4)
    assert len(first) == 4
    assert [t.labels for t in first] == [t.labels for t in second]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
