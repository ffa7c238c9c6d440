# -*- coding: utf-8 -*-
"""
随机文档生成
按 DTD 生成符合约束的随机 XML 实例：最短推导保证递归 DTD 上的终止，星号重复次数服从几何分布
"""
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

from .content_model import (
    ContentModel, Text, Empty, Name, Seq, Alt, Star, INFINITY, min_size,
)
from .dtd import Dtd
from .errors import NonTerminatingError
from .xml_tree import XmlTree, XmlTreeBuilder

DEFAULT_ALPHABET = ("disease1", "disease2", "disease3", "disease4")


@dataclass(frozen=True)
class GenConfig:
    """
    生成参数

    Args:
        seed: 随机种子
        max_depth: 深度上限（根深度为 1），到达后只走最短推导
        star_geometric: 星号每次重复后停止的概率 p，0 < p <= 1
        text_alphabet: 文本取值候选
        target_nodes: 节点数软上限；根产生式中的星号会重复直到接近该值
    """
    seed: int = 0
    max_depth: int = 8
    star_geometric: float = 0.5
    text_alphabet: Sequence[str] = field(default=DEFAULT_ALPHABET)
    target_nodes: Optional[int] = None

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError(f"max_depth 必须 >= 1，实际为 {self.max_depth}")
        if not 0 < self.star_geometric <= 1:
            raise ValueError(f"star_geometric 必须在 (0, 1] 内，实际为 {self.star_geometric}")
        if not self.text_alphabet or any(not s for s in self.text_alphabet):
            raise ValueError("text_alphabet 必须是非空字符串列表")
        if self.target_nodes is not None and self.target_nodes < 1:
            raise ValueError(f"target_nodes 必须为正数，实际为 {self.target_nodes}")


def shortest_derivations(dtd: Dtd) -> Dict[str, float]:
    """
    每个类型最短推导的元素节点数（不动点迭代）

    Raises:
        NonTerminatingError: 存在没有有限推导的类型
    """
    sizes: Dict[str, float] = {name: INFINITY for name in dtd.element_types}
    changed = True
    while changed:
        changed = False
        for name in dtd.element_types:
            size = 1 + min_size(dtd.productions[name], sizes)
            if size < sizes[name]:
                sizes[name] = size
                changed = True
    stuck = [name for name, size in sizes.items() if size == INFINITY]
    if stuck:
        raise NonTerminatingError(f"以下类型不存在有限推导: {', '.join(stuck)}")
    return sizes


class DocumentGenerator:
    """单个文档的生成过程（持有随机数状态）"""

    def __init__(self, dtd: Dtd, cfg: GenConfig, sizes: Optional[Dict[str, float]] = None):
        self.dtd = dtd
        self.cfg = cfg
        self.sizes = sizes if sizes is not None else shortest_derivations(dtd)
        self.rng = random.Random(cfg.seed)
        self.builder = XmlTreeBuilder()

    def _forced(self, depth: int) -> bool:
        if depth >= self.cfg.max_depth:
            return True
        return self.cfg.target_nodes is not None and len(self.builder) >= self.cfg.target_nodes

    def generate(self) -> XmlTree:
        root = self.builder.element(self.dtd.root, -1)
        self._content(self.dtd.productions[self.dtd.root], root, 1, fill=True)
        return self.builder.build()

    def _element(self, name: str, parent: int, depth: int) -> None:
        node = self.builder.element(name, parent)
        self._content(self.dtd.productions[name], node, depth, fill=False)

    def _content(self, cm: ContentModel, node: int, depth: int, fill: bool) -> None:
        if isinstance(cm, Empty):
            return
        if isinstance(cm, Text):
            self.builder.text(self.rng.choice(list(self.cfg.text_alphabet)), node)
            return
        if isinstance(cm, Name):
            self._element(cm.name, node, depth + 1)
            return
        if isinstance(cm, Seq):
            for item in cm.items:
                self._content(item, node, depth, fill)
            return
        if isinstance(cm, Alt):
            if self._forced(depth):
                branch = min(cm.items, key=lambda item: min_size(item, self.sizes))
            else:
                branch = self.rng.choice(cm.items)
            self._content(branch, node, depth, fill)
            return
        if isinstance(cm, Star):
            self._star(cm, node, depth, fill)
            return
        raise TypeError(f"未知的内容模型 {cm!r}")

    def _star(self, cm: Star, node: int, depth: int, fill: bool) -> None:
        target = self.cfg.target_nodes
        if fill and target is not None and depth < self.cfg.max_depth:
            # 根产生式中的星号负责把文档填充到目标规模
            while len(self.builder) < target:
                before = len(self.builder)
                self._content(cm.item, node, depth, fill=False)
                if len(self.builder) == before:
                    break
            return
        while not self._forced(depth) and self.rng.random() >= self.cfg.star_geometric:
            before = len(self.builder)
            self._content(cm.item, node, depth, fill=False)
            if len(self.builder) == before:
                break


def generate(dtd: Dtd, cfg: GenConfig) -> XmlTree:
    """
    生成一个符合 dtd 的文档，相同 seed 得到相同结果

    Raises:
        NonTerminatingError: DTD 中存在无法终止的类型
    """
    return DocumentGenerator(dtd, cfg).generate()


def generate_corpus(dtd: Dtd, cfg: GenConfig, count: int, max_workers: int = 4) -> List[XmlTree]:
    """
    生成 count 个文档，种子由 cfg.seed 派生，结果顺序与种子顺序一致
    """
    if count <= 0:
        return []
    sizes = shortest_derivations(dtd)
    seeder = random.Random(cfg.seed)
    configs = [replace(cfg, seed=seeder.randrange(2 ** 31)) for _ in range(count)]
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        return list(executor.map(lambda c: DocumentGenerator(dtd, c, sizes).generate(), configs))
