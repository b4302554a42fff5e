"""
IISログ形式パーサー

カンマ区切り固定15列、時刻はサーバーのローカル時刻（オフセットは設定で指定）。
行末のカンマは許容する。
"""

import re
from datetime import datetime
from typing import Dict, Optional, Sequence, Tuple

from src.record_model import LogRecord, SkipReason, utc_from_local

from .base_parser import (
    BaseLogParser,
    LineRejected,
    absent,
    optional_count,
    optional_int,
    optional_status,
)

# 標準フィールド順
IIS_FIELD_ORDER: Tuple[str, ...] = (
    'client_ip', 'username', 'date', 'time', 'service_name', 'server_name',
    'server_ip', 'time_taken_ms', 'bytes_received', 'bytes_sent', 'status',
    'windows_status', 'method', 'uri', 'parameters',
)

_DATE_RE = re.compile(r'^(\d{1,2})/(\d{1,2})/(\d{4})$')
_TIME_RE = re.compile(r'^(\d{1,2}):(\d{2}):(\d{2})$')


def validate_field_order(order: Optional[Sequence[str]]) -> Tuple[str, ...]:
    """
    フィールド順の検証（標準15列の並べ替えのみ許可）

    Raises:
        ValueError: 列名の過不足・重複がある場合
    """
    if order is None:
        return IIS_FIELD_ORDER
    order = tuple(order)
    if sorted(order) != sorted(IIS_FIELD_ORDER):
        raise ValueError(
            f"parsers.iis_field_order は標準15列の並べ替えである必要があります: {list(order)}\n"
            f"標準列: {', '.join(IIS_FIELD_ORDER)}"
        )
    return order


def parse_iis_time(date_text: str, time_text: str, offset_minutes: int) -> datetime:
    """MM/DD/YYYY と HH:MM:SS（ローカル時刻）をUTCに変換"""
    date_match = _DATE_RE.match(date_text)
    time_match = _TIME_RE.match(time_text)
    if not date_match or not time_match:
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, f"{date_text} {time_text}")

    month, day, year = (int(g) for g in date_match.groups())
    hour, minute, second = (int(g) for g in time_match.groups())
    try:
        return utc_from_local(datetime(year, month, day, hour, minute, second), offset_minutes)
    except (ValueError, OverflowError):
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, f"{date_text} {time_text}") from None


class IISLogParser(BaseLogParser):
    """IISログ形式パーサー"""

    def __init__(self, offset_minutes: int = 0, field_order: Optional[Sequence[str]] = None):
        """
        Args:
            offset_minutes: サーバーローカル時刻のUTCオフセット（分）
            field_order: フィールド順（None の場合は標準順）
        """
        self.offset_minutes = offset_minutes
        self.field_order = validate_field_order(field_order)

    @property
    def name(self) -> str:
        return "iis"

    @property
    def description(self) -> str:
        return "IISログ形式（カンマ区切り・ローカル時刻）"

    def _parse_data(self, text: str, line_no: int, source_file: str) -> LogRecord:
        parts = [p.strip() for p in text.split(',')]
        if len(parts) == len(self.field_order) + 1 and parts[-1] == '':
            parts.pop()
        if len(parts) != len(self.field_order):
            raise LineRejected(
                SkipReason.MALFORMED_FIELD_COUNT,
                f"{len(parts)}列（期待: {len(self.field_order)}列）"
            )

        values: Dict[str, str] = dict(zip(self.field_order, parts))

        timestamp = parse_iis_time(values['date'], values['time'], self.offset_minutes)

        target = absent(values['uri'])
        if target is None:
            raise LineRejected(SkipReason.MALFORMED_REQUEST, "uri 不足")
        params = absent(values['parameters'])
        uri = f"{target}?{params}" if params is not None else target

        method = absent(values['method'])

        return LogRecord(
            line_no=line_no,
            source_file=source_file,
            ip=absent(values['client_ip']) or 'unknown',
            timestamp=timestamp,
            offset_minutes=self.offset_minutes,
            method=method.upper() if method else 'UNKNOWN',
            uri=uri,
            status=optional_status(values['status']),
            bytes_sent=optional_count(values['bytes_sent'], 'bytes_sent'),
            bytes_received=optional_count(values['bytes_received'], 'bytes_received'),
            username=absent(values['username']),
            service_name=absent(values['service_name']),
            server_name=absent(values['server_name']),
            server_ip=absent(values['server_ip']),
            time_taken_ms=optional_count(values['time_taken_ms'], 'time_taken_ms'),
            windows_status=optional_int(values['windows_status'], 'windows_status'),
        )
