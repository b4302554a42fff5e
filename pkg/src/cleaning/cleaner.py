"""
データクリーニングモジュール

埋め込みリソース（画像・スタイルシート等）のリクエストを除去する。
"""

from collections import Counter
from typing import Iterable, Iterator, List, Optional, Tuple

from src.record_model import CleaningPolicy, LogRecord

FAILED_STATUS = "FAILED_STATUS"


def is_irrelevant(record: LogRecord, policy: CleaningPolicy) -> Tuple[bool, Optional[str]]:
    """
    レコードが分析対象外かを判定

    サフィックス規則をステータス規則より先に評価する。

    Args:
        record: 判定対象
        policy: クリーニングポリシー

    Returns:
        (除去するか, 理由 "SUFFIX:<suffix>" / "FAILED_STATUS" / None)
    """
    target = record.path if policy.strip_query_before_match else record.uri
    target = target.lower()

    for suffix in policy.ordered_suffixes:
        if target.endswith(suffix):
            return True, f"SUFFIX:{suffix}"

    if policy.remove_failed_status and policy.status_failed(record.status):
        return True, FAILED_STATUS

    return False, None


def clean(records: Iterable[LogRecord], policy: CleaningPolicy) -> Tuple[List[LogRecord], Counter]:
    """
    不要レコードを除去

    Returns:
        (残したレコード（入力順）, 理由別除去件数)
    """
    cleaner = RecordCleaner(policy)
    kept = list(cleaner.filter(records))
    return kept, cleaner.removed


class RecordCleaner:
    """ストリーミング用クリーナー（除去件数を累積）"""

    def __init__(self, policy: CleaningPolicy, logger=None):
        self.policy = policy
        self.logger = logger
        self.removed: Counter = Counter()
        self.kept = 0

    def _log(self, level: str, msg: str) -> None:
        """ログ出力"""
        if self.logger:
            getattr(self.logger, level)(msg)

    def filter(self, records: Iterable[LogRecord]) -> Iterator[LogRecord]:
        """残すレコードのみを順に返す"""
        for record in records:
            drop, reason = is_irrelevant(record, self.policy)
            if drop:
                self.removed[reason] += 1
                continue
            self.kept += 1
            yield record

    def report(self) -> None:
        """除去結果をログ出力"""
        total = sum(self.removed.values())
        self._log('info', f"✅ クリーニング完了: 残存{self.kept:,}件 / 除去{total:,}件")
        for reason, count in sorted(self.removed.items()):
            self._log('info', f"   {reason}: {count:,}件")
