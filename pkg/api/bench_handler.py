# -*- coding: utf-8 -*-
"""
基准测试处理器
bench 命令：读取语料目录，比较重写与物化两种策略，输出 CSV
"""
from argparse import Namespace
from dataclasses import asdict

from services import BenchService, load_corpus
from .base_handler import BaseHandler, EXIT_OK, EXIT_MISMATCH


class BenchHandler(BaseHandler):
    """bench 命令"""

    def process(self, args: Namespace) -> int:
        service = self.service(args)
        queries = self.queries(args)
        if args.corpus:
            documents = load_corpus(args.corpus)
        else:
            fixture = self.fixture(args)
            if fixture is None:
                raise ValueError("需要 --corpus DIR 或 --fixture NAME")
            documents = [(f"{fixture.name}.xml", fixture.xml_text)]

        bench = BenchService(service, repetitions=args.repetitions, fast=args.fast)
        report = bench.run(documents, queries, progress=args.progress)

        csv_text = report.to_csv()
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as f:
                f.write(csv_text)
        elif args.json:
            self.emit_json([asdict(row) for row in report.rows])
        else:
            self.stdout.write(csv_text)
        return EXIT_MISMATCH if report.divergent else EXIT_OK
