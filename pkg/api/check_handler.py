# -*- coding: utf-8 -*-
"""
一致性检查处理器
check 命令：比较视图上的答案与重写查询在原始文档上的答案
"""
from argparse import Namespace

from .base_handler import BaseHandler, EXIT_OK, EXIT_MISMATCH


class CheckHandler(BaseHandler):
    """check 命令"""

    def process(self, args: Namespace) -> int:
        service = self.service(args)
        tree = self.tree(args)
        reports = []
        for name, query_text in self.queries(args):
            report = service.check(tree, query_text, fast=args.fast, inject_query=args.inject_query)
            reports.append((name, report))

        if args.json:
            payload = [dict(report.to_dict(), name=name) for name, report in reports]
            self.emit_json(payload[0] if len(payload) == 1 else payload)
        else:
            for name, report in reports:
                prefix = "" if len(reports) == 1 else f"{name}: "
                if report.is_equal:
                    self.emit(f"{prefix}{report.verdict}")
                else:
                    self.emit(f"{prefix}{report.verdict} witness {report.witness} (only in {report.witness_side})")

        return EXIT_OK if all(report.is_equal for _, report in reports) else EXIT_MISMATCH
