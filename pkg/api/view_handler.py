# -*- coding: utf-8 -*-
"""
视图处理器
derive / predicates / rewrite 三个命令：只依赖 DTD 与访问规范，不读文档
"""
from argparse import Namespace

from core import serialize_dtd, serialize_qual, serialize, view_stats
from utils.logger import logger
from .base_handler import BaseHandler, EXIT_OK


class ViewHandler(BaseHandler):
    """视图推导、谓词套件与查询重写"""

    def process(self, args: Namespace) -> int:
        if args.command == "derive":
            return self.derive(args)
        if args.command == "predicates":
            return self.predicates(args)
        return self.rewrite(args)

    def derive(self, args: Namespace) -> int:
        service = self.service(args)
        view = service.view
        text = serialize_dtd(view.view)
        if args.json:
            self.emit_json({"view": text.splitlines(), "stats": view_stats(view).to_dict()})
        else:
            self.emit(text)
        return EXIT_OK

    def predicates(self, args: Namespace) -> int:
        kit = self.service(args).kit
        pieces = {
            "ACC": serialize_qual(kit.acc),
            "A1": serialize_qual(kit.a1),
            "A2": serialize_qual(kit.a2),
            "APLUS": serialize(kit.aplus),
        }
        if args.json:
            self.emit_json(pieces)
        else:
            for name, text in pieces.items():
                self.emit(f"{name}: {text}")
        return EXIT_OK

    def rewrite(self, args: Namespace) -> int:
        service = self.service(args)
        results = []
        for name, query_text in self.queries(args):
            outcome = service.rewrite(query_text, context_type=args.context, fast=args.fast)
            rendered = service.render(outcome.query, abbreviate=not args.expand)
            for diagnostic in outcome.diagnostics:
                logger.warning(f"[查询重写] {name}: {diagnostic}")
            results.append({
                "name": name,
                "query": query_text,
                "rewritten": None if outcome.is_empty else rendered,
                "empty": outcome.is_empty,
                "work": outcome.stats.work,
                "steps": outcome.stats.steps,
                "diagnostics": outcome.diagnostics,
            })
            if not args.json:
                self.emit(rendered if args.query else f"{name}: {rendered}")
        if args.json:
            self.emit_json(results[0] if args.query else results)
        return EXIT_OK
