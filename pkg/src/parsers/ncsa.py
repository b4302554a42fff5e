"""
NCSA Common / Combined ログ形式パーサー

書式: host ident authuser [DD/MMM/YYYY:HH:MM:SS ±ZZZZ] "request" status bytes
Combined は末尾に "referrer" "user_agent" の2列が続く。
"""

import re
from datetime import datetime
from typing import Optional

from src.record_model import LogRecord, SkipReason, utc_from_local

from .base_parser import (
    BaseLogParser,
    LineRejected,
    absent,
    optional_count,
    optional_status,
)

_QUOTED = r'"((?:[^"\\]|\\.)*)"'

# ident/authuser が両方欠損の場合に "--" と連結された表記も受け付ける
NCSA_LINE_RE = re.compile(
    r'^(?P<host>\S+) +(?:(?P<ident>\S+) +(?P<authuser>\S+)|--) +'
    r'\[(?P<date>[^\]]*)\] +'
    + _QUOTED.replace('(', '(?P<request>', 1) +
    r' +(?P<status>\S+) +(?P<bytes>\S+)'
    r'(?: +' + _QUOTED.replace('(', '(?P<referrer>', 1) +
    r' +' + _QUOTED.replace('(', '(?P<agent>', 1) + r')?$'
)

_DATE_RE = re.compile(
    r'^(\d{2})/([A-Za-z]{3})/(\d{4}):(\d{2}):(\d{2}):(\d{2}) ([+-])(\d{2})(\d{2})$'
)

MONTHS = {
    'jan': 1, 'feb': 2, 'mar': 3, 'apr': 4, 'may': 5, 'jun': 6,
    'jul': 7, 'aug': 8, 'sep': 9, 'oct': 10, 'nov': 11, 'dec': 12,
}

_UNESCAPE_RE = re.compile(r'\\(.)')


def unescape_quoted(value: str) -> str:
    """引用符内のエスケープ（\\" と \\\\）を解除"""
    return _UNESCAPE_RE.sub(r'\1', value)


def parse_ncsa_time(text: str):
    """
    角括弧内の日時をパース

    Returns:
        (UTC時刻, オフセット分)
    """
    match = _DATE_RE.match(text.strip())
    if not match:
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, text)

    day, month_name, year, hour, minute, second, sign, off_h, off_m = match.groups()
    month = MONTHS.get(month_name.lower())
    if month is None:
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, text)

    offset = int(off_h) * 60 + int(off_m)
    if sign == '-':
        offset = -offset

    try:
        local = datetime(int(year), month, int(day), int(hour), int(minute), int(second))
        return utc_from_local(local, offset), offset
    except (ValueError, OverflowError):
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, text) from None


def split_request(request: str):
    """
    リクエスト行を (method, uri, protocol) に分割

    URIに空白を含む場合は先頭トークンと末尾の HTTP/x トークンの間を URI とする。
    """
    parts = request.split()
    if len(parts) >= 3 and parts[-1].upper().startswith('HTTP/'):
        return parts[0].upper(), ' '.join(parts[1:-1]), parts[-1]
    if len(parts) == 2:
        return parts[0].upper(), parts[1], None
    raise LineRejected(SkipReason.MALFORMED_REQUEST, request)


class NCSALogParser(BaseLogParser):
    """NCSA Common / Combined パーサー（Commonの行は agent/referrer 欠損として扱う）"""

    def __init__(self, combined: bool = False):
        self.combined = combined

    @property
    def name(self) -> str:
        return "ncsa-combined" if self.combined else "ncsa"

    @property
    def description(self) -> str:
        return "NCSA Common/Combined（固定書式・空白区切り・ローカル時刻+オフセット）"

    def _parse_data(self, text: str, line_no: int, source_file: str) -> LogRecord:
        match = NCSA_LINE_RE.match(text)
        if not match:
            raise LineRejected(SkipReason.MALFORMED_FIELD_COUNT, text)

        timestamp, offset = parse_ncsa_time(match.group('date'))
        method, uri, protocol = split_request(unescape_quoted(match.group('request')))

        referrer: Optional[str] = None
        agent: Optional[str] = None
        if match.group('agent') is not None:
            referrer = absent(unescape_quoted(match.group('referrer')))
            agent = absent(unescape_quoted(match.group('agent')))

        return LogRecord(
            line_no=line_no,
            source_file=source_file,
            ip=match.group('host'),
            timestamp=timestamp,
            offset_minutes=offset,
            method=method,
            uri=uri,
            protocol=protocol,
            status=optional_status(match.group('status')),
            bytes_sent=optional_count(match.group('bytes'), 'bytes'),
            username=absent(match.group('authuser')),
            user_agent=agent,
            referrer=referrer,
        )
