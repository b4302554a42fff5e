"""共通テストフィクスチャ"""
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.record_model import LogRecord
from src.utils.logging_manager import LoggingManager

BASE_TIME = datetime(2012, 1, 19, 4, 30, 0, tzinfo=timezone.utc)


@pytest.fixture
def silent_logger():
    """ファイル・コンソール出力なしのロガー"""
    logger = LoggingManager(name='logprep_test', log_dir=None, level='DEBUG', console=False)
    yield logger
    logger.close()


@pytest.fixture(scope="session")
def make_record():
    """
    LogRecord ファクトリ

    minutes は BASE_TIME からの経過分、その他はLogRecordのフィールドを上書き。
    """
    def _make(line_no=1, minutes=0.0, **fields):
        fields.setdefault('source_file', 'test.log')
        fields.setdefault('ip', '10.0.0.1')
        fields.setdefault('timestamp', BASE_TIME + timedelta(minutes=minutes))
        return LogRecord(line_no=line_no, **fields)

    return _make
