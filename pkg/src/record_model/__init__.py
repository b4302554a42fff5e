"""
レコードモデルモジュール

全パイプラインステージで共有する型（レコード・形式・ポリシー・統計）
"""

from .records import (
    FormatKind,
    LogFormat,
    LogRecord,
    LineSkip,
    ParseOutcome,
    RecordKey,
    SkipReason,
    W3C_KNOWN_TOKENS,
    record_key,
    utc_from_local,
)
from .policy import (
    CleaningPolicy,
    DEFAULT_SUFFIXES,
    EXTENDED_SUFFIXES,
    SUFFIX_PRESETS,
)
from .stats import ExtractionCounters, PipelineStats
from .codec import (
    RECORD_COLUMNS,
    format_utc,
    parse_utc,
    record_to_csv_row,
    record_to_json_row,
    record_from_row,
)

__all__ = [
    'FormatKind',
    'LogFormat',
    'LogRecord',
    'LineSkip',
    'ParseOutcome',
    'RecordKey',
    'SkipReason',
    'W3C_KNOWN_TOKENS',
    'record_key',
    'utc_from_local',
    'CleaningPolicy',
    'DEFAULT_SUFFIXES',
    'EXTENDED_SUFFIXES',
    'SUFFIX_PRESETS',
    'ExtractionCounters',
    'PipelineStats',
    'RECORD_COLUMNS',
    'format_utc',
    'parse_utc',
    'record_to_csv_row',
    'record_to_json_row',
    'record_from_row',
]
