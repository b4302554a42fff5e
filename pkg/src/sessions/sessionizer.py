"""
セッション識別モジュール（時間指向ヒューリスティック）
"""

from dataclasses import dataclass, replace
from datetime import datetime, timedelta
from typing import Iterable, List, Optional, Sequence, Tuple

from src.identity import UserAssignment, canonical_page
from src.record_model import LogRecord, RecordKey, record_key

DEFAULT_TIMEOUT = timedelta(minutes=30)


@dataclass(frozen=True)
class Session:
    """
    1ユーザーの連続したリクエスト列

    start_utc は先頭レコード、end_utc は最後の実レコードの時刻（推定レコードは除外）。
    """

    session_id: int
    user_id: int
    records: Tuple[LogRecord, ...]
    start_utc: datetime
    end_utc: datetime

    @classmethod
    def from_records(cls, session_id: int, user_id: int, records: Sequence[LogRecord]) -> "Session":
        if not records:
            raise ValueError("セッションは1件以上のレコードを持つ必要があります")
        real = [r for r in records if not r.inferred]
        return cls(
            session_id=session_id,
            user_id=user_id,
            records=tuple(records),
            start_utc=records[0].timestamp,
            end_utc=(real[-1] if real else records[-1]).timestamp,
        )

    @property
    def record_keys(self) -> Tuple[RecordKey, ...]:
        return tuple(record_key(r) for r in self.records)

    @property
    def real_records(self) -> Tuple[LogRecord, ...]:
        return tuple(r for r in self.records if not r.inferred)

    @property
    def n_records(self) -> int:
        return len(self.records)

    @property
    def n_inferred(self) -> int:
        return sum(1 for r in self.records if r.inferred)

    @property
    def duration_seconds(self) -> float:
        return (self.end_utc - self.start_utc).total_seconds()

    @property
    def page_sequence(self) -> str:
        """正規化ページの "|" 連結（推定レコードは "*" 付き）"""
        return '|'.join(
            canonical_page(r.uri) + ('*' if r.inferred else '')
            for r in self.records
        )

    def with_records(self, records: Sequence[LogRecord]) -> "Session":
        return replace(self, records=tuple(records))


class Sessionizer:
    """時間指向セッション分割"""

    def __init__(
        self,
        timeout: timedelta = DEFAULT_TIMEOUT,
        max_page_stay: Optional[timedelta] = None,
        max_session: Optional[timedelta] = None
    ):
        """
        初期化

        Args:
            timeout: 無操作タイムアウト（間隔がこれを超えると新セッション）
            max_page_stay: ページ滞在上限（任意）
            max_session: セッション全体の長さ上限（任意）

        Raises:
            ValueError: 閾値が正でない場合
        """
        for name, value in (('timeout', timeout), ('max_page_stay', max_page_stay),
                            ('max_session', max_session)):
            if value is not None and value <= timedelta(0):
                raise ValueError(f"{name} は正の値である必要があります: {value}")
        self.timeout = timeout
        self.max_page_stay = max_page_stay
        self.max_session = max_session

    def _breaks(self, previous: LogRecord, current: LogRecord, start: datetime) -> bool:
        gap = current.timestamp - previous.timestamp
        # 間隔がタイムアウトと等しい場合は同一セッション
        if gap > self.timeout:
            return True
        if self.max_page_stay is not None and gap > self.max_page_stay:
            return True
        if self.max_session is not None and current.timestamp - start > self.max_session:
            return True
        return False

    def split(self, records: Iterable[LogRecord]) -> List[List[LogRecord]]:
        """1ユーザーのレコードをセッションごとに分割（時刻・record_key順）"""
        ordered = sorted(records, key=lambda r: (r.timestamp, record_key(r)))
        groups: List[List[LogRecord]] = []
        for record in ordered:
            if groups and not self._breaks(groups[-1][-1], record, groups[-1][0].timestamp):
                groups[-1].append(record)
            else:
                groups.append([record])
        return groups

    def sessionize(self, user: UserAssignment, records: Iterable[LogRecord]) -> List[Session]:
        """
        1ユーザー分のセッションを生成

        session_id はこの呼び出し内で1からの連番（全体の採番は number_sessions で行う）。
        """
        return [
            Session.from_records(i, user.user_id, group)
            for i, group in enumerate(self.split(records), start=1)
        ]


def sessionize(
    user: UserAssignment,
    records: Iterable[LogRecord],
    timeout: timedelta = DEFAULT_TIMEOUT,
    max_page_stay: Optional[timedelta] = None,
    max_session: Optional[timedelta] = None
) -> List[Session]:
    """Sessionizer.sessionize の関数版"""
    return Sessionizer(timeout, max_page_stay, max_session).sessionize(user, records)


def number_sessions(sessions: Iterable[Session]) -> List[Session]:
    """全セッションを (user_id, 開始時刻) 順に並べ、1からの連番を振り直す"""
    ordered = sorted(sessions, key=lambda s: (s.user_id, s.start_utc, record_key(s.records[0])))
    return [replace(s, session_id=i) for i, s in enumerate(ordered, start=1)]
