"""
正規化レコード型定義モジュール

全ステージで共有するアクセスログレコード・ログ形式・パース結果の型。
全ての型は生成後イミュータブル（スレッド間で共有可能）。
"""
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Optional, Tuple


class FormatKind(str, Enum):
    """ログ形式の種別"""

    W3C_EXTENDED = "W3C_EXTENDED"
    NCSA_COMMON = "NCSA_COMMON"
    NCSA_COMBINED = "NCSA_COMBINED"
    IIS = "IIS"

    @classmethod
    def from_cli(cls, name: str) -> "FormatKind":
        """CLI表記（w3c / ncsa / ncsa-combined / iis）から変換"""
        mapping = {
            'w3c': cls.W3C_EXTENDED,
            'ncsa': cls.NCSA_COMMON,
            'ncsa-combined': cls.NCSA_COMBINED,
            'iis': cls.IIS,
        }
        key = name.strip().lower()
        if key not in mapping:
            raise ValueError(
                f"無効なログ形式: {name}\n"
                f"有効な値: {', '.join(mapping)}"
            )
        return mapping[key]


# W3C `#Fields:` で認識するトークン（それ以外は extras 列として保持）
W3C_KNOWN_TOKENS = (
    'date', 'time', 'c-ip', 'cs-username', 's-sitename', 's-computername',
    's-ip', 's-port', 'cs-method', 'cs-uri-stem', 'cs-uri-query',
    'sc-status', 'sc-bytes', 'cs-bytes', 'time-taken', 'cs-version',
    'cs(User-Agent)', 'cs(Referer)',
)


@dataclass(frozen=True)
class LogFormat:
    """ログ形式（W3Cの場合は `#Fields:` のフィールドマップ付き）"""

    kind: FormatKind
    field_map: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind is FormatKind.W3C_EXTENDED and not self.field_map:
            raise ValueError("W3C_EXTENDED には空でない field_map が必要です")
        if self.kind is not FormatKind.W3C_EXTENDED and self.field_map:
            raise ValueError(f"{self.kind.value} に field_map は指定できません")

    @property
    def extra_tokens(self) -> Tuple[str, ...]:
        """認識外トークン（extras列）"""
        return tuple(t for t in self.field_map if t not in W3C_KNOWN_TOKENS)


@dataclass(frozen=True)
class LogRecord:
    """
    1件のアクセスログエントリ（形式非依存）

    timestamp はUTCのaware datetime、offset_minutes は元ログの UTC オフセット。
    欠損値は常に None（ワイヤ表記の "-" は保持しない）。
    """

    line_no: int
    source_file: str
    ip: str
    timestamp: datetime
    offset_minutes: int = 0
    method: str = "GET"
    uri: str = "/"
    protocol: Optional[str] = None
    status: Optional[int] = None
    bytes_sent: Optional[int] = None
    bytes_received: Optional[int] = None
    username: Optional[str] = None
    user_agent: Optional[str] = None
    referrer: Optional[str] = None
    service_name: Optional[str] = None
    server_name: Optional[str] = None
    server_ip: Optional[str] = None
    server_port: Optional[int] = None
    time_taken_ms: Optional[int] = None
    windows_status: Optional[int] = None
    extras: Tuple[Tuple[str, str], ...] = field(default=())
    inferred: bool = False
    sub_ordinal: int = 0

    def __post_init__(self):
        if self.line_no < 1:
            raise ValueError(f"line_no は1以上である必要があります: {self.line_no}")
        if self.timestamp.tzinfo is None or self.timestamp.utcoffset() != timedelta(0):
            raise ValueError(f"timestamp はUTCのaware datetimeである必要があります: {self.timestamp}")
        if self.status is not None and not (100 <= self.status <= 599):
            raise ValueError(f"status は100～599の範囲である必要があります: {self.status}")
        for name in ('bytes_sent', 'bytes_received'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} は0以上である必要があります: {value}")
        if self.inferred and self.sub_ordinal >= 0:
            raise ValueError("推定レコードの sub_ordinal は負である必要があります")
        if not self.inferred and self.sub_ordinal != 0:
            raise ValueError("実レコードの sub_ordinal は0である必要があります")

    @property
    def local_time(self) -> datetime:
        """元ログのローカル時刻（UTC + 保存オフセット）"""
        return self.timestamp.astimezone(timezone(timedelta(minutes=self.offset_minutes)))

    @property
    def path(self) -> str:
        """クエリ文字列を除いたパス"""
        return self.uri.split('?', 1)[0]

    def with_changes(self, **changes) -> "LogRecord":
        """一部フィールドを変更したコピーを返す"""
        return replace(self, **changes)


RecordKey = Tuple[str, int, int]


def record_key(record: LogRecord) -> RecordKey:
    """
    レコードの全順序キー (source_file, line_no, sub_ordinal)

    推定レコードは直後の実レコードと同じ line_no を持ち、負の sub_ordinal により
    その直前に並ぶ。
    """
    return (record.source_file, record.line_no, record.sub_ordinal)


def utc_from_local(local: datetime, offset_minutes: int) -> datetime:
    """naiveなローカル時刻とオフセット（分）からUTCのaware datetimeを生成"""
    aware = local.replace(tzinfo=timezone(timedelta(minutes=offset_minutes)))
    return aware.astimezone(timezone.utc)


class SkipReason(str, Enum):
    """行スキップ理由"""

    DIRECTIVE = "DIRECTIVE"
    BLANK = "BLANK"
    MALFORMED_FIELD_COUNT = "MALFORMED_FIELD_COUNT"
    MALFORMED_TIMESTAMP = "MALFORMED_TIMESTAMP"
    MALFORMED_STATUS = "MALFORMED_STATUS"
    MALFORMED_NUMBER = "MALFORMED_NUMBER"
    MALFORMED_REQUEST = "MALFORMED_REQUEST"

    @property
    def is_malformed(self) -> bool:
        return self not in (SkipReason.DIRECTIVE, SkipReason.BLANK)


@dataclass(frozen=True)
class LineSkip:
    """スキップされた行"""

    line_no: int
    reason: SkipReason
    raw_text: str


@dataclass(frozen=True)
class ParseOutcome:
    """1行のパース結果（record / skip のどちらか一方）"""

    record: Optional[LogRecord] = None
    skip: Optional[LineSkip] = None

    def __post_init__(self):
        if (self.record is None) == (self.skip is None):
            raise ValueError("ParseOutcome は record と skip のどちらか一方のみを持ちます")

    @classmethod
    def skipped(cls, line_no: int, reason: SkipReason, raw_text: str) -> "ParseOutcome":
        return cls(skip=LineSkip(line_no=line_no, reason=reason, raw_text=raw_text))

    @property
    def ok(self) -> bool:
        return self.record is not None
