"""
W3C拡張ログ形式パーサー

- `#Fields:` ディレクティブでフィールド順を宣言（後続の `#Fields:` で置換）
- フィールド区切りは空白
- 時刻はGMT（オフセット0）
"""

import re
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.record_model import LogRecord, SkipReason, W3C_KNOWN_TOKENS
from src.utils.errors import MissingFieldsDirectiveError

from .base_parser import (
    BaseLogParser,
    LineRejected,
    absent,
    optional_count,
    optional_status,
)

_DATE_RE = re.compile(r'^(\d{4})-(\d{2})-(\d{2})$')
# 時は1桁も許容（例: "3:56:27"）
_TIME_RE = re.compile(r'^(\d{1,2}):(\d{2}):(\d{2})(?:\.(\d{1,6}))?$')


def parse_fields_directive(text: str) -> Optional[Tuple[str, ...]]:
    """`#Fields:` 行ならトークン列を返す（それ以外は None）"""
    if not text.lower().startswith('#fields:'):
        return None
    return tuple(text.split(':', 1)[1].split())


def parse_w3c_directives(header_lines: Iterable[str]) -> Tuple[str, ...]:
    """
    ディレクティブ行からフィールドマップを取得

    後続の `#Fields:` は前のマップを置き換える。`#Fields:` より前のデータ行は
    エラーとする。

    Args:
        header_lines: ファイル先頭の行（"#" 始まりのディレクティブ）

    Returns:
        最後の `#Fields:` のトークン列

    Raises:
        MissingFieldsDirectiveError: `#Fields:` が存在しない、または先行するデータ行がある場合
    """
    field_map: Optional[Tuple[str, ...]] = None

    for line_no, line in enumerate(header_lines, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith('#'):
            tokens = parse_fields_directive(text)
            if tokens is not None:
                field_map = tokens
            continue
        if field_map is None:
            raise MissingFieldsDirectiveError(
                f"#Fields: ディレクティブより前にデータ行があります（{line_no}行目）",
                line_no=line_no
            )

    if not field_map:
        raise MissingFieldsDirectiveError("#Fields: ディレクティブが見つかりません")

    return field_map


def parse_w3c_time(date_text: str, time_text: str) -> datetime:
    """W3Cの日付・時刻（GMT）をUTCのaware datetimeに変換"""
    date_match = _DATE_RE.match(date_text)
    time_match = _TIME_RE.match(time_text)
    if not date_match or not time_match:
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, f"{date_text} {time_text}")

    year, month, day = (int(g) for g in date_match.groups())
    hour, minute, second = (int(g) for g in time_match.groups()[:3])
    fraction = time_match.group(4)
    microsecond = int(fraction.ljust(6, '0')) if fraction else 0

    try:
        return datetime(year, month, day, hour, minute, second, microsecond, tzinfo=timezone.utc)
    except ValueError:
        raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, f"{date_text} {time_text}") from None


class W3CLogParser(BaseLogParser):
    """W3C拡張ログ形式パーサー（ファイル単位でフィールドマップを保持）"""

    def __init__(self, field_map: Sequence[str] = ()):
        """
        Args:
            field_map: 初期フィールドマップ（ファイル内の `#Fields:` で上書きされる）
        """
        self.field_map: Tuple[str, ...] = tuple(field_map)
        self.directive_date: Optional[str] = None

    @property
    def name(self) -> str:
        return "w3c"

    @property
    def description(self) -> str:
        return "W3C拡張ログ形式（#Fields: 宣言・空白区切り・GMT）"

    def _handle_directive(self, text: str, line_no: int) -> bool:
        text = text.strip()
        if not text.startswith('#'):
            return False

        tokens = parse_fields_directive(text)
        if tokens is not None:
            self.field_map = tokens
        elif text.lower().startswith('#date:'):
            # 例: "#Date: 2012-02-05 06:57:20"（date 列がない場合に使用）
            parts = text.split(':', 1)[1].split()
            self.directive_date = parts[0] if parts else None
        return True

    def _parse_data(self, text: str, line_no: int, source_file: str) -> LogRecord:
        if not self.field_map:
            raise MissingFieldsDirectiveError(
                f"#Fields: ディレクティブより前にデータ行があります（{source_file}:{line_no}行目）",
                line_no=line_no
            )

        tokens = text.split()
        if len(tokens) != len(self.field_map):
            raise LineRejected(
                SkipReason.MALFORMED_FIELD_COUNT,
                f"{len(tokens)}列（期待: {len(self.field_map)}列）"
            )

        values: Dict[str, str] = {}
        extras: List[Tuple[str, str]] = []
        for token, value in zip(self.field_map, tokens):
            if token in W3C_KNOWN_TOKENS:
                values[token] = value
            else:
                extras.append((token, value))

        date_text = values.get('date') or self.directive_date
        time_text = values.get('time')
        if date_text is None or time_text is None:
            raise LineRejected(SkipReason.MALFORMED_TIMESTAMP, "date/time 不足")
        timestamp = parse_w3c_time(date_text, time_text)

        stem = absent(values.get('cs-uri-stem'))
        if stem is None:
            raise LineRejected(SkipReason.MALFORMED_REQUEST, "cs-uri-stem 不足")
        query = absent(values.get('cs-uri-query'))
        uri = f"{stem}?{query}" if query is not None else stem

        agent = absent(values.get('cs(User-Agent)'))
        if agent is not None:
            # IISは空白を "+" で記録する
            agent = agent.replace('+', ' ')

        method = absent(values.get('cs-method'))

        return LogRecord(
            line_no=line_no,
            source_file=source_file,
            ip=absent(values.get('c-ip')) or 'unknown',
            timestamp=timestamp,
            offset_minutes=0,
            method=method.upper() if method else 'UNKNOWN',
            uri=uri,
            protocol=absent(values.get('cs-version')),
            status=optional_status(values.get('sc-status')),
            bytes_sent=optional_count(values.get('sc-bytes'), 'sc-bytes'),
            bytes_received=optional_count(values.get('cs-bytes'), 'cs-bytes'),
            username=absent(values.get('cs-username')),
            user_agent=agent,
            referrer=absent(values.get('cs(Referer)')),
            service_name=absent(values.get('s-sitename')),
            server_name=absent(values.get('s-computername')),
            server_ip=absent(values.get('s-ip')),
            server_port=optional_count(values.get('s-port'), 's-port'),
            time_taken_ms=optional_count(values.get('time-taken'), 'time-taken'),
            extras=tuple(extras),
        )
