"""
パーサーモジュール

ログ形式の判定とフィールド抽出（W3C拡張 / NCSA / IIS）
"""

from .base_parser import BaseLogParser, LineRejected
from .w3c import W3CLogParser, parse_w3c_directives
from .ncsa import NCSALogParser
from .iis import IISLogParser, IIS_FIELD_ORDER
from .detector import collect_sample, detect_format
from .writers import render_iis, render_ncsa, render_w3c, render_w3c_header
from .extractor import (
    FieldExtractor,
    create_parser,
    extract_fields,
    open_log,
    parse_line,
)

__all__ = [
    'BaseLogParser',
    'LineRejected',
    'W3CLogParser',
    'parse_w3c_directives',
    'NCSALogParser',
    'IISLogParser',
    'IIS_FIELD_ORDER',
    'collect_sample',
    'detect_format',
    'render_iis',
    'render_ncsa',
    'render_w3c',
    'render_w3c_header',
    'FieldExtractor',
    'create_parser',
    'extract_fields',
    'open_log',
    'parse_line',
]
