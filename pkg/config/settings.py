# -*- coding: utf-8 -*-
"""
配置管理模块
集中管理所有系统配置参数，均可通过环境变量或 .env 覆盖
"""
import os
import logging
from typing import Dict, Any, List, Tuple


def _int_list(value: str) -> List[int]:
    return [int(part) for part in value.split(",") if part.strip()]


def _str_tuple(value: str) -> Tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


class Settings:
    """系统配置类"""

    # ==================== 路径配置 ====================
    BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    FIXTURES_DIR = os.getenv("FIXTURES_DIR", os.path.join(BASE_DIR, "fixtures"))
    LOG_DIR = os.getenv("LOG_DIR", os.path.join(BASE_DIR, "logs"))

    # ==================== 日志配置 ====================
    LOG_LEVEL = getattr(logging, os.getenv("LOG_LEVEL", "WARNING").upper(), logging.WARNING)
    ENABLE_RUN_LOG = os.getenv("ENABLE_RUN_LOG", "false").lower() == "true"  # 写入 check/fuzz/bench 的 JSONL 记录

    # ==================== 语义配置 ====================
    DEFAULT_DEFINITION = os.getenv("DEFAULT_DEFINITION", "5")  # "5" 可覆盖语义，"1" 兼容语义

    # ==================== 文档生成配置 ====================
    GEN_SEED = int(os.getenv("GEN_SEED", "42"))
    GEN_MAX_DEPTH = int(os.getenv("GEN_MAX_DEPTH", "12"))
    GEN_STAR_P = float(os.getenv("GEN_STAR_P", "0.4"))  # 星号每次重复后停止的概率
    GEN_TEXT_ALPHABET = _str_tuple(os.getenv("GEN_TEXT_ALPHABET", "disease1,disease2,disease3,disease4"))
    GEN_TARGET_NODES = int(os.getenv("GEN_TARGET_NODES", "1000"))

    # ==================== 随机测试配置 ====================
    FUZZ_CASES = int(os.getenv("FUZZ_CASES", "1000"))
    FUZZ_SEED = int(os.getenv("FUZZ_SEED", "20240601"))
    FUZZ_MAX_TYPES = int(os.getenv("FUZZ_MAX_TYPES", "10"))
    FUZZ_MAX_ANNOTATIONS = int(os.getenv("FUZZ_MAX_ANNOTATIONS", "8"))
    FUZZ_TARGET_NODES = int(os.getenv("FUZZ_TARGET_NODES", "150"))  # 单个实例上限 300 节点以内
    FUZZ_QUERY_DEPTH = int(os.getenv("FUZZ_QUERY_DEPTH", "4"))
    FUZZ_MAX_WORKERS = int(os.getenv("FUZZ_MAX_WORKERS", "4"))

    # ==================== 基准测试配置 ====================
    BENCH_REPETITIONS = int(os.getenv("BENCH_REPETITIONS", "3"))
    BENCH_CORPUS_SIZES = _int_list(os.getenv("BENCH_CORPUS_SIZES", "1000,10000,100000"))

    # ==================== 并发配置 ====================
    MAX_WORKERS = int(os.getenv("MAX_WORKERS", "4"))

    @classmethod
    def to_dict(cls) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            "base_dir": cls.BASE_DIR,
            "fixtures_dir": cls.FIXTURES_DIR,
            "log_dir": cls.LOG_DIR,
            "log_level": logging.getLevelName(cls.LOG_LEVEL),
            "enable_run_log": cls.ENABLE_RUN_LOG,
            "default_definition": cls.DEFAULT_DEFINITION,
            "gen_seed": cls.GEN_SEED,
            "gen_max_depth": cls.GEN_MAX_DEPTH,
            "gen_star_p": cls.GEN_STAR_P,
            "gen_text_alphabet": list(cls.GEN_TEXT_ALPHABET),
            "gen_target_nodes": cls.GEN_TARGET_NODES,
            "fuzz_cases": cls.FUZZ_CASES,
            "fuzz_seed": cls.FUZZ_SEED,
            "fuzz_max_types": cls.FUZZ_MAX_TYPES,
            "fuzz_max_annotations": cls.FUZZ_MAX_ANNOTATIONS,
            "fuzz_target_nodes": cls.FUZZ_TARGET_NODES,
            "fuzz_query_depth": cls.FUZZ_QUERY_DEPTH,
            "fuzz_max_workers": cls.FUZZ_MAX_WORKERS,
            "bench_repetitions": cls.BENCH_REPETITIONS,
            "bench_corpus_sizes": list(cls.BENCH_CORPUS_SIZES),
            "max_workers": cls.MAX_WORKERS,
        }


# 导出配置实例
CONFIG = Settings.to_dict()
