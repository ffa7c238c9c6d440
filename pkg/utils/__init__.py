# -*- coding: utf-8 -*-
"""
工具模块包初始化
"""
from .logger import logger, RunLogger, setup_logger, get_run_logger
from .text_processing import (
    parse_var_assignments,
    substitute_variables,
    expand_macros,
    read_queries,
)

__all__ = [
    'logger',
    'RunLogger',
    'setup_logger',
    'get_run_logger',
    'parse_var_assignments',
    'substitute_variables',
    'expand_macros',
    'read_queries',
]
