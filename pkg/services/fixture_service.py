# -*- coding: utf-8 -*-
"""
内置夹具服务
列出、加载并导出 fixtures/ 下的示例（DTD、访问规范、实例文档、查询与元数据）
"""
import json
import os
import shutil
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from config import Settings
from core import XmlTree, parse_xml
from services.security_view_service import SecurityViewService
from utils.logger import logger
from utils.text_processing import read_queries

FIXTURE_FILES = ("schema.dtd", "policy.ann", "instance.xml", "queries.txt", "meta.json")
MARKER_FILE = "RECONSTRUCTED"


@dataclass
class Fixture:
    """一个夹具目录的内容"""
    name: str
    directory: str
    texts: Dict[str, str]
    queries: List[Tuple[str, str]]
    definition_1: bool = False
    variables: Dict[str, str] = field(default_factory=dict)
    description: str = ""

    @property
    def dtd_text(self) -> str:
        return self.texts["schema.dtd"]

    @property
    def spec_text(self) -> str:
        return self.texts["policy.ann"]

    @property
    def xml_text(self) -> str:
        return self.texts["instance.xml"]

    def path(self, filename: str) -> str:
        return os.path.join(self.directory, filename)

    def query(self, name: str) -> str:
        for query_name, text in self.queries:
            if query_name == name:
                return text
        raise ValueError(f"夹具 {self.name} 中没有查询 {name}")

    def service(
        self,
        definition_1: Optional[bool] = None,
        variables: Optional[Dict[str, str]] = None
    ) -> SecurityViewService:
        """用夹具的默认语义与变量构造服务；参数非空时覆盖默认值"""
        merged = dict(self.variables)
        merged.update(variables or {})
        return SecurityViewService(
            self.dtd_text,
            self.spec_text,
            definition_1=self.definition_1 if definition_1 is None else definition_1,
            variables=merged,
        )

    def tree(self) -> XmlTree:
        return parse_xml(self.xml_text)


class FixtureService:
    """夹具目录访问"""

    def __init__(self, fixtures_dir: Optional[str] = None):
        self.fixtures_dir = fixtures_dir or Settings.FIXTURES_DIR

    def list_fixtures(self) -> List[str]:
        if not os.path.isdir(self.fixtures_dir):
            logger.warning(f"[夹具] 目录不存在: {self.fixtures_dir}")
            return []
        return sorted(
            name for name in os.listdir(self.fixtures_dir)
            if os.path.isfile(os.path.join(self.fixtures_dir, name, "schema.dtd"))
        )

    def load(self, name: str) -> Fixture:
        """
        加载夹具

        Args:
            name: 夹具名（fixtures/ 下的子目录）

        Returns:
            Fixture

        Raises:
            ValueError: 夹具不存在
        """
        if name not in self.list_fixtures():
            raise ValueError(f"未知夹具: {name}（可用: {', '.join(self.list_fixtures())}）")
        directory = os.path.join(self.fixtures_dir, name)
        texts: Dict[str, str] = {}
        for filename in FIXTURE_FILES:
            full = os.path.join(directory, filename)
            if os.path.exists(full):
                with open(full, "r", encoding="utf-8") as f:
                    texts[filename] = f.read()
        meta = json.loads(texts.get("meta.json", "{}"))
        return Fixture(
            name=name,
            directory=directory,
            texts=texts,
            queries=read_queries(texts.get("queries.txt", "")),
            definition_1=bool(meta.get("definition_1", False)),
            variables={k: str(v) for k, v in meta.get("variables", {}).items()},
            description=meta.get("description", ""),
        )

    def copy_to(self, target_dir: str, names: Optional[List[str]] = None) -> List[str]:
        """
        把夹具文件写到目标目录（每个夹具一个子目录）

        Returns:
            写出的夹具名列表
        """
        selected = names or self.list_fixtures()
        os.makedirs(target_dir, exist_ok=True)
        written = []
        for name in selected:
            fixture = self.load(name)
            destination = os.path.join(target_dir, name)
            os.makedirs(destination, exist_ok=True)
            for filename in FIXTURE_FILES + (MARKER_FILE,):
                source = fixture.path(filename)
                if os.path.exists(source):
                    shutil.copyfile(source, os.path.join(destination, filename))
            written.append(name)
        logger.info(f"[夹具] 已写出 {len(written)} 个夹具到 {target_dir}")
        return written
