# -*- coding: utf-8 -*-
"""
命令处理器基类
解析各命令共用的输入（夹具、DTD / 规范 / 文档文件、变量、查询）并统一输出格式
"""
import json
import sys
from argparse import Namespace
from typing import Any, Dict, List, Optional, Tuple

from core import XmlTree
from services import SecurityViewService, FixtureService, Fixture
from utils.text_processing import parse_var_assignments, read_queries

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT_ERROR = 2


class BaseHandler:
    """子类实现 process(args) -> 退出码"""

    def __init__(self, fixture_service: Optional[FixtureService] = None, stdout=None):
        self.fixture_service = fixture_service or FixtureService()
        self.stdout = stdout or sys.stdout
        self._fixture_cache: Dict[str, Fixture] = {}

    def process(self, args: Namespace) -> int:
        raise NotImplementedError

    # ==================== 输入 ====================
    def fixture(self, args: Namespace) -> Optional[Fixture]:
        name = getattr(args, "fixture", None)
        if not name:
            return None
        if name not in self._fixture_cache:
            self._fixture_cache[name] = self.fixture_service.load(name)
        return self._fixture_cache[name]

    @staticmethod
    def _definition_1(args: Namespace) -> Optional[bool]:
        return True if getattr(args, "definition_1", False) else None

    def service(self, args: Namespace) -> SecurityViewService:
        """
        按 --fixture 或 --dtd/--ann 构造安全视图服务

        Raises:
            ValueError: 既没有夹具也没有给全文件
        """
        variables = parse_var_assignments(getattr(args, "var", None) or [])
        fixture = self.fixture(args)
        if fixture is not None and not (args.dtd or args.ann):
            return fixture.service(definition_1=self._definition_1(args), variables=variables)
        if not (args.dtd and args.ann):
            raise ValueError("需要 --fixture NAME，或同时给出 --dtd 与 --ann")
        definition_1 = self._definition_1(args)
        if definition_1 is None and fixture is not None:
            definition_1 = fixture.definition_1
        return SecurityViewService.from_files(args.dtd, args.ann, definition_1, variables)

    def tree(self, args: Namespace) -> XmlTree:
        if getattr(args, "xml", None):
            return SecurityViewService.load_document(args.xml)
        fixture = self.fixture(args)
        if fixture is None:
            raise ValueError("需要 --xml FILE 或 --fixture NAME")
        return fixture.tree()

    def queries(self, args: Namespace) -> List[Tuple[str, str]]:
        """
        命令行给出的单个查询优先，其次 --queries 文件，最后是夹具自带的查询；
        --query-name 从后两者中选出一条
        """
        if getattr(args, "query", None):
            return [("Q", args.query)]
        if getattr(args, "queries", None):
            with open(args.queries, "r", encoding="utf-8") as f:
                queries = read_queries(f.read())
        else:
            fixture = self.fixture(args)
            if fixture is None:
                raise ValueError("需要查询文本、--queries FILE 或 --fixture NAME")
            queries = list(fixture.queries)
        name = getattr(args, "query_name", None)
        if name:
            queries = [(n, q) for n, q in queries if n == name]
            if not queries:
                raise ValueError(f"没有名为 {name} 的查询")
        return queries

    # ==================== 输出 ====================
    def emit(self, text: str) -> None:
        self.stdout.write(text if text.endswith("\n") else text + "\n")

    def emit_json(self, payload: Any) -> None:
        self.emit(json.dumps(payload, ensure_ascii=False, indent=2))
