# -*- coding: utf-8 -*-
"""
服务层模块包初始化
"""
from .security_view_service import SecurityViewService, CheckReport, EQUAL, DIFFER
from .fuzz_service import FuzzService, FuzzReport, FuzzFailure, RandomSchemaFactory, QueryFactory
from .bench_service import BenchService, BenchReport, BenchRow, load_corpus
from .fixture_service import FixtureService, Fixture

__all__ = [
    'SecurityViewService',
    'CheckReport',
    'EQUAL',
    'DIFFER',
    'FuzzService',
    'FuzzReport',
    'FuzzFailure',
    'RandomSchemaFactory',
    'QueryFactory',
    'BenchService',
    'BenchReport',
    'BenchRow',
    'load_corpus',
    'FixtureService',
    'Fixture',
]
