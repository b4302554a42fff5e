"""
形式別ライター

LogRecord を各ワイヤ形式の1行に整形する（パーサーの逆変換）。
フィクスチャ生成とラウンドトリップテストで使用。
"""

from typing import Dict, Optional, Sequence, Tuple

from src.record_model import LogRecord

from .iis import IIS_FIELD_ORDER

MONTH_NAMES = (
    'Jan', 'Feb', 'Mar', 'Apr', 'May', 'Jun',
    'Jul', 'Aug', 'Sep', 'Oct', 'Nov', 'Dec',
)


def _dash(value) -> str:
    return '-' if value is None or value == '' else str(value)


def _split_uri(uri: str) -> Tuple[str, Optional[str]]:
    if '?' in uri:
        stem, query = uri.split('?', 1)
        return stem, query
    return uri, None


def _quote(value: Optional[str]) -> str:
    if value is None:
        return '"-"'
    return '"' + value.replace('\\', '\\\\').replace('"', '\\"') + '"'


def _offset_text(offset_minutes: int) -> str:
    sign = '-' if offset_minutes < 0 else '+'
    hours, minutes = divmod(abs(offset_minutes), 60)
    return f"{sign}{hours:02d}{minutes:02d}"


def render_w3c(record: LogRecord, field_map: Sequence[str]) -> str:
    """
    W3C拡張形式の1データ行を生成

    Args:
        record: 対象レコード
        field_map: `#Fields:` のトークン列

    Returns:
        空白区切りの行（改行なし）
    """
    ts = record.timestamp
    time_text = ts.strftime('%H:%M:%S')
    if ts.microsecond:
        time_text += f".{ts.microsecond:06d}"
    stem, query = _split_uri(record.uri)
    agent = record.user_agent.replace(' ', '+') if record.user_agent else None
    extras = dict(record.extras)

    values: Dict[str, Optional[object]] = {
        'date': ts.strftime('%Y-%m-%d'),
        'time': time_text,
        'c-ip': record.ip,
        'cs-username': record.username,
        's-sitename': record.service_name,
        's-computername': record.server_name,
        's-ip': record.server_ip,
        's-port': record.server_port,
        'cs-method': record.method,
        'cs-uri-stem': stem,
        'cs-uri-query': query,
        'sc-status': record.status,
        'sc-bytes': record.bytes_sent,
        'cs-bytes': record.bytes_received,
        'time-taken': record.time_taken_ms,
        'cs-version': record.protocol,
        'cs(User-Agent)': agent,
        'cs(Referer)': record.referrer,
    }
    return ' '.join(
        _dash(values[token]) if token in values else _dash(extras.get(token))
        for token in field_map
    )


def render_w3c_header(field_map: Sequence[str], software: str = "logprep") -> Tuple[str, ...]:
    """W3Cファイル先頭のディレクティブ行"""
    return (
        f"#Software: {software}",
        "#Version: 1.0",
        "#Fields: " + ' '.join(field_map),
    )


def render_ncsa(record: LogRecord, combined: bool = False) -> str:
    """
    NCSA Common / Combined 形式の1行を生成

    時刻はレコードの保存オフセットでローカル時刻に戻して出力する。
    """
    local = record.local_time
    date_text = (
        f"{local.day:02d}/{MONTH_NAMES[local.month - 1]}/{local.year:04d}:"
        f"{local.hour:02d}:{local.minute:02d}:{local.second:02d} "
        f"{_offset_text(record.offset_minutes)}"
    )
    request = f"{record.method} {record.uri}"
    if record.protocol:
        request += f" {record.protocol}"

    line = (
        f"{record.ip} - {_dash(record.username)} [{date_text}] {_quote(request)} "
        f"{_dash(record.status)} {_dash(record.bytes_sent)}"
    )
    if combined:
        line += f" {_quote(record.referrer)} {_quote(record.user_agent)}"
    return line


def render_iis(record: LogRecord, field_order: Sequence[str] = IIS_FIELD_ORDER) -> str:
    """IIS形式の1行を生成（", " 区切り・行末カンマ付き）"""
    local = record.local_time
    target, params = _split_uri(record.uri)
    values: Dict[str, Optional[object]] = {
        'client_ip': record.ip,
        'username': record.username,
        'date': f"{local.month:02d}/{local.day:02d}/{local.year:04d}",
        'time': f"{local.hour:02d}:{local.minute:02d}:{local.second:02d}",
        'service_name': record.service_name,
        'server_name': record.server_name,
        'server_ip': record.server_ip,
        'time_taken_ms': record.time_taken_ms,
        'bytes_received': record.bytes_received,
        'bytes_sent': record.bytes_sent,
        'status': record.status,
        'windows_status': record.windows_status,
        'method': record.method,
        'uri': target,
        'parameters': params,
    }
    return ', '.join(_dash(values[name]) for name in field_order) + ','
