# -*- coding: utf-8 -*-
"""
文档处理器
eval / materialize / gen：在原始文档上求值、物化视图、生成随机实例
"""
import os
from argparse import Namespace
from typing import List

from config import Settings
from core import (
    GenConfig, XmlTree, parse_dtd, generate, generate_corpus, to_xml, conforms,
)
from utils.logger import logger
from .base_handler import BaseHandler, EXIT_OK


# gen --size 对应 BENCH_CORPUS_SIZES 的下标
SIZE_PRESETS = {"small": 0, "medium": 1, "large": 2}


def render_nodes(tree: XmlTree, nodes: List[int], output_format: str) -> str:
    """paths: 每行一个节点路径；xml: 每行一个节点子树"""
    if output_format == "xml":
        return "\n".join(to_xml(tree, n) for n in nodes)
    return "\n".join(tree.node_path(n) for n in nodes)


class DocumentHandler(BaseHandler):
    """文档相关命令"""

    def process(self, args: Namespace) -> int:
        if args.command == "eval":
            return self.evaluate(args)
        if args.command == "materialize":
            return self.materialize(args)
        return self.gen(args)

    def evaluate(self, args: Namespace) -> int:
        service = self.service(args)
        tree = self.tree(args)
        results = []
        for name, query_text in self.queries(args):
            nodes = service.evaluate(tree, query_text)
            results.append({"name": name, "query": query_text, "nodes": [tree.node_path(n) for n in nodes]})
            if not args.json:
                if not args.query:
                    self.emit(f"# {name}")
                if nodes:
                    self.emit(render_nodes(tree, nodes, args.format))
        if args.json:
            self.emit_json(results[0] if args.query else results)
        return EXIT_OK

    def materialize(self, args: Namespace) -> int:
        service = self.service(args)
        tree = self.tree(args)
        mv = service.materialize(tree)
        if args.json:
            self.emit_json({
                "nodes": [tree.node_path(n) for n in mv.node_map if tree.labels[n] is not None],
                "xml": to_xml(mv.tree),
                "conforms": conforms(mv.tree, service.view.view).ok,
            })
        elif args.format == "paths":
            kept = [n for n in mv.node_map if tree.labels[n] is not None]
            self.emit(render_nodes(tree, kept, "paths"))
        else:
            self.emit(to_xml(mv.tree, pretty=True))
        return EXIT_OK

    def gen(self, args: Namespace) -> int:
        fixture = self.fixture(args)
        if args.dtd:
            with open(args.dtd, "r", encoding="utf-8") as f:
                dtd = parse_dtd(f.read())
        elif fixture is not None:
            dtd = parse_dtd(fixture.dtd_text)
        else:
            raise ValueError("需要 --dtd FILE 或 --fixture NAME")

        target_nodes = args.target_nodes
        if target_nodes is None and args.size:
            sizes = Settings.BENCH_CORPUS_SIZES
            index = SIZE_PRESETS[args.size]
            if index >= len(sizes):
                raise ValueError(f"BENCH_CORPUS_SIZES 只配置了 {len(sizes)} 个规模，无法使用 --size {args.size}")
            target_nodes = sizes[index]

        cfg = GenConfig(
            seed=Settings.GEN_SEED if args.seed is None else args.seed,
            max_depth=args.max_depth or Settings.GEN_MAX_DEPTH,
            star_geometric=args.star_p or Settings.GEN_STAR_P,
            text_alphabet=Settings.GEN_TEXT_ALPHABET,
            target_nodes=target_nodes or Settings.GEN_TARGET_NODES,
        )
        if args.corpus is None:
            text = to_xml(generate(dtd, cfg), pretty=True)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as f:
                    f.write(text)
            else:
                self.emit(text)
            return EXIT_OK

        if not args.output:
            raise ValueError("--corpus 需要 -o DIR")
        os.makedirs(args.output, exist_ok=True)
        trees = generate_corpus(dtd, cfg, args.corpus, Settings.MAX_WORKERS)
        width = len(str(max(len(trees) - 1, 0)))
        for i, tree in enumerate(trees):
            with open(os.path.join(args.output, f"doc_{i:0{width}d}.xml"), "w", encoding="utf-8") as f:
                f.write(to_xml(tree, pretty=True))
        logger.info(f"[文档生成] 写出 {len(trees)} 个文档到 {args.output}，共 {sum(t.element_count() for t in trees)} 个元素")
        return EXIT_OK
