"""
正規スキーマ変換モジュール

LogRecord ⇔ CSV行 / JSONL行 の相互変換。列順は固定で、先頭14列が基本スキーマ、
以降が拡張列（IIS固有フィールド・推定レコードの副序数・W3C extras）。
"""
import json
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from dateutil.parser import isoparse

from .records import LogRecord

BASE_COLUMNS = (
    'line_no', 'source_file', 'ip', 'timestamp_utc', 'offset_minutes',
    'method', 'uri', 'protocol', 'status', 'bytes_sent', 'username',
    'user_agent', 'referrer', 'inferred',
)

EXTENSION_COLUMNS = (
    'sub_ordinal', 'bytes_received', 'service_name', 'server_name',
    'server_ip', 'server_port', 'time_taken_ms', 'windows_status', 'extras',
)

RECORD_COLUMNS = BASE_COLUMNS + EXTENSION_COLUMNS

_OPTIONAL_INT = (
    'status', 'bytes_sent', 'bytes_received', 'server_port',
    'time_taken_ms', 'windows_status',
)
_OPTIONAL_TEXT = (
    'protocol', 'username', 'user_agent', 'referrer',
    'service_name', 'server_name', 'server_ip',
)


def format_utc(dt: datetime) -> str:
    """UTC時刻をISO-8601（Z付き）に整形。マイクロ秒は非ゼロの場合のみ出力"""
    dt = dt.astimezone(timezone.utc)
    text = dt.strftime('%Y-%m-%dT%H:%M:%S')
    if dt.microsecond:
        text += f".{dt.microsecond:06d}"
    return text + 'Z'


def parse_utc(text: str) -> datetime:
    """format_utc の逆変換"""
    dt = isoparse(text)
    if dt.tzinfo is None:
        raise ValueError(f"タイムゾーン指定のない時刻です: {text}")
    return dt.astimezone(timezone.utc)


def record_to_json_row(record: LogRecord) -> Dict[str, Any]:
    """JSONL用の行（型付き値、欠損はNone）"""
    return {
        'line_no': record.line_no,
        'source_file': record.source_file,
        'ip': record.ip,
        'timestamp_utc': format_utc(record.timestamp),
        'offset_minutes': record.offset_minutes,
        'method': record.method,
        'uri': record.uri,
        'protocol': record.protocol,
        'status': record.status,
        'bytes_sent': record.bytes_sent,
        'username': record.username,
        'user_agent': record.user_agent,
        'referrer': record.referrer,
        'inferred': record.inferred,
        'sub_ordinal': record.sub_ordinal,
        'bytes_received': record.bytes_received,
        'service_name': record.service_name,
        'server_name': record.server_name,
        'server_ip': record.server_ip,
        'server_port': record.server_port,
        'time_taken_ms': record.time_taken_ms,
        'windows_status': record.windows_status,
        'extras': [list(pair) for pair in record.extras],
    }


def record_to_csv_row(record: LogRecord) -> Dict[str, str]:
    """CSV用の行（全て文字列、欠損は空文字）"""
    row = record_to_json_row(record)
    out: Dict[str, str] = {}
    for column in RECORD_COLUMNS:
        value = row[column]
        if column == 'inferred':
            out[column] = 'true' if value else 'false'
        elif column == 'extras':
            out[column] = json.dumps(value, ensure_ascii=False) if value else ''
        elif value is None:
            out[column] = ''
        else:
            out[column] = str(value)
    return out


def _opt_int(value: Any) -> Optional[int]:
    if value is None or value == '':
        return None
    return int(value)


def _opt_text(value: Any) -> Optional[str]:
    if value is None or value == '':
        return None
    return str(value)


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('true', '1'):
        return True
    if text in ('false', '0', ''):
        return False
    raise ValueError(f"真偽値として解釈できません: {value!r}")


def record_from_row(row: Dict[str, Any]) -> LogRecord:
    """
    CSV行またはJSONL行から LogRecord を復元

    拡張列が存在しない（基本14列のみの）行も受け付ける。
    """
    extras_raw = row.get('extras')
    if isinstance(extras_raw, str):
        extras_raw = json.loads(extras_raw) if extras_raw else []
    extras = tuple((str(k), str(v)) for k, v in (extras_raw or []))

    kwargs: Dict[str, Any] = {
        'line_no': int(row['line_no']),
        'source_file': str(row['source_file']),
        'ip': str(row['ip']),
        'timestamp': parse_utc(str(row['timestamp_utc'])),
        'offset_minutes': int(row.get('offset_minutes') or 0),
        'method': str(row['method']),
        'uri': str(row['uri']),
        'inferred': _as_bool(row.get('inferred', False)),
        'sub_ordinal': int(row.get('sub_ordinal') or 0),
        'extras': extras,
    }
    for column in _OPTIONAL_INT:
        kwargs[column] = _opt_int(row.get(column))
    for column in _OPTIONAL_TEXT:
        kwargs[column] = _opt_text(row.get(column))

    return LogRecord(**kwargs)
