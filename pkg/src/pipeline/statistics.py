"""
統計集計モジュール
"""

from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

from src.identity import UserAssignment
from src.record_model import ExtractionCounters, PipelineStats
from src.sessions import Session
from src.utils.errors import InvariantViolationError


def compute_stats(
    counters: ExtractionCounters,
    removed_by_reason: Mapping[str, int],
    records_after_cleaning: Optional[int] = None,
    users: Sequence[UserAssignment] = (),
    sessions: Iterable[Session] = (),
    files: Sequence[Dict[str, Any]] = ()
) -> PipelineStats:
    """
    ステージ出力から統計を集計し、整合条件を検証

    Args:
        counters: 抽出ステージの行カウンタ（全ファイル合算）
        removed_by_reason: クリーニングの理由別除去件数
        records_after_cleaning: クリーニング後件数（None の場合は parsed − removed）
        users: 識別されたユーザー
        sessions: 補完後のセッション
        files: ファイル別内訳

    Returns:
        PipelineStats

    Raises:
        InvariantViolationError: 整合条件に違反する場合
    """
    removed = {reason: int(count) for reason, count in removed_by_reason.items() if count}
    if records_after_cleaning is None:
        records_after_cleaning = counters.records_parsed - sum(removed.values())

    session_list: List[Session] = list(sessions)
    stats = PipelineStats(
        lines_read=counters.lines_read,
        lines_skipped_malformed=counters.lines_skipped_malformed,
        lines_skipped_directive=counters.lines_skipped_directive,
        lines_skipped_blank=counters.lines_skipped_blank,
        lines_skipped_by_reason={k: v for k, v in counters.skipped.items() if v},
        records_parsed=counters.records_parsed,
        records_removed_by_reason=removed,
        records_after_cleaning=records_after_cleaning,
        users_identified=len(users),
        sessions_identified=len(session_list),
        records_inferred=sum(s.n_inferred for s in session_list),
        files=[dict(f) for f in files],
    )

    problems = stats.violations()
    if problems:
        raise InvariantViolationError("統計の整合条件違反:\n" + "\n".join(f"  - {p}" for p in problems))
    return stats
