"""
パス補完モジュール

キャッシュ等によりログに残らなかったページアクセスを推定レコードとして挿入する。
"""

from datetime import timedelta
from typing import List, Optional, Sequence

from src.identity import SiteGraph, canonical_page, referrer_page
from src.record_model import LogRecord

from .sessionizer import Session

_MICROSECOND = timedelta(microseconds=1)


def backtrack_pages(history: Sequence[LogRecord], target: str) -> Optional[List[str]]:
    """
    直前エントリから逆順に target の直近出現まで遡る

    Args:
        history: q より前のセッションエントリ（末尾が p）
        target: リファラーページ r

    Returns:
        p の次から r までに通過したページ（r で終わる）。r が見つからない場合は None
    """
    walked: List[str] = []
    for record in reversed(history[:-1]):
        page = canonical_page(record.uri)
        walked.append(page)
        if page == target:
            return walked
    return None


def _missing_pages(
    history: Sequence[LogRecord],
    q: LogRecord,
    graph: Optional[SiteGraph],
    site_hosts: Sequence[str]
) -> List[str]:
    p = history[-1]
    p_page = canonical_page(p.uri)

    if q.referrer is not None:
        r = referrer_page(q.referrer, site_hosts)
        if r is None or r == p_page:
            return []
        return backtrack_pages(history, r) or []

    # リファラーなし: グラフ上の最短経路の中間ノード
    if graph is None:
        return []
    path = graph.shortest_path(p_page, canonical_page(q.uri))
    if path is None or len(path) <= 2:
        return []
    return path[1:-1]


def _inferred_records(p: LogRecord, q: LogRecord, pages: Sequence[str]) -> List[LogRecord]:
    """(t_p, t_q) を等間隔に分けた時刻で推定レコードを生成"""
    k = len(pages)
    step_us = ((q.timestamp - p.timestamp) // _MICROSECOND) // (k + 1)
    if step_us <= 0:
        return []
    step = timedelta(microseconds=step_us)
    return [
        LogRecord(
            line_no=q.line_no,
            source_file=q.source_file,
            ip=q.ip,
            timestamp=p.timestamp + step * i,
            offset_minutes=q.offset_minutes,
            method='GET',
            uri=page,
            user_agent=q.user_agent,
            inferred=True,
            sub_ordinal=i - k - 1,
        )
        for i, page in enumerate(pages, start=1)
    ]


def complete_paths(
    session: Session,
    graph: Optional[SiteGraph] = None,
    site_hosts: Sequence[str] = ()
) -> Session:
    """
    セッション内の欠落ページを補完

    連続ペア (p, q) ごとに:
        - q のリファラー r が p と異なり、セッション内で先行していれば p から r までの
          逆戻り経路のページを挿入
        - q にリファラーがなければ、グラフ上の p→q 最短経路の中間ノードを挿入
        - 推定レコードの q は再補完しない（2回適用しても結果は変わらない）

    Args:
        session: 対象セッション
        graph: サイトグラフ（リファラーなしの場合のみ使用）
        site_hosts: サイト内ホスト名

    Returns:
        推定レコードを挿入したセッション（実レコードは不変）
    """
    if len(session.records) < 2:
        return session

    output: List[LogRecord] = [session.records[0]]
    for q in session.records[1:]:
        if not q.inferred:
            pages = _missing_pages(output, q, graph, site_hosts)
            if pages:
                output.extend(_inferred_records(output[-1], q, pages))
        output.append(q)

    if len(output) == len(session.records):
        return session
    return session.with_records(output)
