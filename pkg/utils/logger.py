# -*- coding: utf-8 -*-
"""
日志管理工具
"""
import os
import json
import logging
from datetime import datetime
from typing import Optional, Dict, Any

from config import Settings


def setup_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """配置并返回日志记录器（输出到 stderr，不干扰命令结果）"""
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


class RunLogger:
    """检查 / 随机测试 / 基准测试的结论日志（JSONL）"""

    def __init__(self, log_dir: str):
        self.log_dir = log_dir
        os.makedirs(self.log_dir, exist_ok=True)

    def save_log(
        self,
        query: str,
        verdict: str,
        run_type: str,
        metadata: Optional[Dict[str, Any]] = None
    ) -> None:
        """追加一条结论记录"""
        today = datetime.now().strftime("%Y-%m-%d")
        log_file = os.path.join(self.log_dir, f"check_log_{today}.jsonl")

        log_entry = {
            "timestamp": datetime.now().isoformat(),
            "type": run_type,
            "query": query,
            "verdict": verdict,
            "metadata": metadata or {}
        }

        try:
            with open(log_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(log_entry, ensure_ascii=False) + "\n")
            logger.debug(f"结论日志已保存: {log_file}")
        except OSError as e:
            logger.error(f"保存结论日志失败: {e}")


def get_run_logger() -> Optional[RunLogger]:
    """ENABLE_RUN_LOG 打开时返回 RunLogger，否则 None"""
    if not Settings.ENABLE_RUN_LOG:
        return None
    return RunLogger(Settings.LOG_DIR)


# 全局日志记录器
logger = setup_logger("XSecView", Settings.LOG_LEVEL)
