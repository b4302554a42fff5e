"""
パイプライン統計モジュール
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List

from .records import SkipReason


@dataclass
class ExtractionCounters:
    """フィールド抽出ステージの行カウンタ（ファイル単位で集計し、後で合算）"""

    lines_read: int = 0
    records_parsed: int = 0
    skipped: Counter = field(default_factory=Counter)

    def count_skip(self, reason: SkipReason) -> None:
        self.skipped[reason.value] += 1

    @property
    def lines_skipped_blank(self) -> int:
        return self.skipped.get(SkipReason.BLANK.value, 0)

    @property
    def lines_skipped_directive(self) -> int:
        return self.skipped.get(SkipReason.DIRECTIVE.value, 0)

    @property
    def lines_skipped_malformed(self) -> int:
        return sum(
            count for reason, count in self.skipped.items()
            if SkipReason(reason).is_malformed
        )

    def merge(self, other: "ExtractionCounters") -> None:
        """他のカウンタを加算"""
        self.lines_read += other.lines_read
        self.records_parsed += other.records_parsed
        self.skipped.update(other.skipped)


@dataclass
class PipelineStats:
    """
    ステージ別統計

    整合条件:
        records_parsed = records_after_cleaning + Σ records_removed_by_reason
        lines_read = records_parsed + lines_skipped_malformed
                     + lines_skipped_directive + lines_skipped_blank
    """

    lines_read: int = 0
    lines_skipped_malformed: int = 0
    lines_skipped_directive: int = 0
    lines_skipped_blank: int = 0
    lines_skipped_by_reason: Dict[str, int] = field(default_factory=dict)
    records_parsed: int = 0
    records_removed_by_reason: Dict[str, int] = field(default_factory=dict)
    records_after_cleaning: int = 0
    users_identified: int = 0
    sessions_identified: int = 0
    records_inferred: int = 0
    files: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def records_removed(self) -> int:
        return sum(self.records_removed_by_reason.values())

    def violations(self) -> List[str]:
        """整合条件違反の一覧（違反なしの場合は空リスト）"""
        problems = []
        counters = {
            'lines_read': self.lines_read,
            'lines_skipped_malformed': self.lines_skipped_malformed,
            'lines_skipped_directive': self.lines_skipped_directive,
            'lines_skipped_blank': self.lines_skipped_blank,
            'records_parsed': self.records_parsed,
            'records_after_cleaning': self.records_after_cleaning,
            'users_identified': self.users_identified,
            'sessions_identified': self.sessions_identified,
            'records_inferred': self.records_inferred,
        }
        for name, value in counters.items():
            if value < 0:
                problems.append(f"{name} が負です: {value}")
        for reason, value in self.records_removed_by_reason.items():
            if value < 0:
                problems.append(f"records_removed_by_reason[{reason}] が負です: {value}")

        if self.records_parsed != self.records_after_cleaning + self.records_removed:
            problems.append(
                f"records_parsed({self.records_parsed}) ≠ "
                f"records_after_cleaning({self.records_after_cleaning}) + "
                f"removed({self.records_removed})"
            )

        accounted = (
            self.records_parsed + self.lines_skipped_malformed
            + self.lines_skipped_directive + self.lines_skipped_blank
        )
        if self.lines_read != accounted:
            problems.append(f"lines_read({self.lines_read}) ≠ 内訳合計({accounted})")

        if sum(self.lines_skipped_by_reason.values()) != (
            self.lines_skipped_malformed + self.lines_skipped_directive + self.lines_skipped_blank
        ):
            problems.append("lines_skipped_by_reason の合計がスキップ行数と一致しません")

        if self.users_identified > self.records_after_cleaning:
            problems.append("users_identified がクリーニング後レコード数を超えています")

        return problems

    def to_dict(self) -> Dict[str, Any]:
        """stats.json 用の辞書（キー順固定）"""
        return {
            'lines_read': self.lines_read,
            'lines_skipped_blank': self.lines_skipped_blank,
            'lines_skipped_directive': self.lines_skipped_directive,
            'lines_skipped_malformed': self.lines_skipped_malformed,
            'lines_skipped_by_reason': dict(sorted(self.lines_skipped_by_reason.items())),
            'records_parsed': self.records_parsed,
            'records_removed': self.records_removed,
            'records_removed_by_reason': dict(sorted(self.records_removed_by_reason.items())),
            'records_after_cleaning': self.records_after_cleaning,
            'users_identified': self.users_identified,
            'sessions_identified': self.sessions_identified,
            'records_inferred': self.records_inferred,
            'files': [dict(f) for f in self.files],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineStats":
        """stats.json の辞書から復元"""
        return cls(
            lines_read=data.get('lines_read', 0),
            lines_skipped_malformed=data.get('lines_skipped_malformed', 0),
            lines_skipped_directive=data.get('lines_skipped_directive', 0),
            lines_skipped_blank=data.get('lines_skipped_blank', 0),
            lines_skipped_by_reason=dict(data.get('lines_skipped_by_reason', {})),
            records_parsed=data.get('records_parsed', 0),
            records_removed_by_reason=dict(data.get('records_removed_by_reason', {})),
            records_after_cleaning=data.get('records_after_cleaning', 0),
            users_identified=data.get('users_identified', 0),
            sessions_identified=data.get('sessions_identified', 0),
            records_inferred=data.get('records_inferred', 0),
            files=list(data.get('files', [])),
        )

    def summary(self) -> str:
        """ログ用の1行サマリ"""
        return (
            f"行数{self.lines_read:,} → レコード{self.records_parsed:,} → "
            f"クリーニング後{self.records_after_cleaning:,} → "
            f"ユーザー{self.users_identified:,} / セッション{self.sessions_identified:,}"
        )
