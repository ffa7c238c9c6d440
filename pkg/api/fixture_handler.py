# -*- coding: utf-8 -*-
"""
夹具与随机测试处理器
fixtures 命令导出内置夹具；fuzz 命令运行随机闭包测试或求值器自检
"""
from argparse import Namespace

from services import FuzzService
from .base_handler import BaseHandler, EXIT_OK, EXIT_MISMATCH


class FixtureHandler(BaseHandler):
    """fixtures / fuzz 命令"""

    def process(self, args: Namespace) -> int:
        if args.command == "fuzz":
            return self.fuzz(args)
        return self.fixtures(args)

    def fixtures(self, args: Namespace) -> int:
        if not args.output:
            names = self.fixture_service.list_fixtures()
            if args.json:
                self.emit_json([
                    {"name": n, "description": self.fixture_service.load(n).description} for n in names
                ])
            else:
                for name in names:
                    self.emit(f"{name}\t{self.fixture_service.load(name).description}")
            return EXIT_OK
        written = self.fixture_service.copy_to(args.output, args.names or None)
        if args.json:
            self.emit_json({"output": args.output, "fixtures": written})
        else:
            for name in written:
                self.emit(name)
        return EXIT_OK

    def fuzz(self, args: Namespace) -> int:
        service = FuzzService(seed=args.seed, max_workers=args.workers)
        if args.evaluator:
            report = service.run_evaluator(args.cases or 500, progress=args.progress)
        else:
            report = service.run(args.cases, progress=args.progress)

        if args.json:
            self.emit_json(report.to_dict())
        else:
            for failure in report.failures:
                self.emit(f"case {failure.index} seed {failure.seed} [{failure.kind}] {failure.query}: {failure.detail}")
            self.emit(
                f"{report.cases} cases, {len(report.failures)} failures, "
                f"{report.empty_rewrites} empty rewrites, {report.conformance_failures} non-conforming views, "
                f"{report.elapsed:.2f}s"
            )
        return EXIT_OK if report.ok else EXIT_MISMATCH
