# -*- coding: utf-8 -*-
"""
配置模块包初始化
"""
from .settings import Settings, CONFIG

__all__ = ['Settings', 'CONFIG']

