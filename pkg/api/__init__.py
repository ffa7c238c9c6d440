# -*- coding: utf-8 -*-
"""
命令处理层包初始化
"""
from .base_handler import BaseHandler, EXIT_OK, EXIT_MISMATCH, EXIT_INPUT_ERROR
from .view_handler import ViewHandler
from .document_handler import DocumentHandler, SIZE_PRESETS
from .check_handler import CheckHandler
from .bench_handler import BenchHandler
from .fixture_handler import FixtureHandler

__all__ = [
    'BaseHandler',
    'EXIT_OK',
    'EXIT_MISMATCH',
    'EXIT_INPUT_ERROR',
    'ViewHandler',
    'DocumentHandler',
    'SIZE_PRESETS',
    'CheckHandler',
    'BenchHandler',
    'FixtureHandler',
]
