"""
検証用フィクスチャ生成モジュール

指定した件数構成（総レコード数・除去対象数・ユーザー数）を正確に満たすログと、
レコードごとの正解（除去有無・user_id・session_id）を記した sidecar JSON を生成する。
同じ仕様とシードからは常にバイト単位で同一のファイルが得られる。
"""

import json
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from src.parsers import render_iis, render_ncsa, render_w3c, render_w3c_header
from src.record_model import CleaningPolicy, FormatKind, LogRecord
from src.utils.errors import FixtureSpecError

# 2012-01-19 10:00:00 +05:30
BASE_LOCAL_TIME = datetime(2012, 1, 19, 10, 0, 0)
BASE_OFFSET_MINUTES = 330

SOURCE_NAME = "fixture.log"

PAGE_POOL = (
    '/website/', '/website/index.htm', '/website/about.htm', '/website/contact.htm',
    '/website/products.aspx', '/website/products/detail.aspx', '/website/news.htm',
    '/website/faq.htm', '/website/login.aspx', '/website/cart.aspx',
    '/website/search.aspx', '/website/downloads.htm',
)

RESOURCE_POOL = (
    '/website/images/logo.gif', '/website/images/banner.jpg', '/website/images/photo.jpeg',
    '/website/css/style.css', '/website/images/spacer.gif', '/website/css/print.css',
)

AGENT_POOL = (
    "Mozilla/5.0 (Windows NT 6.1) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/47.0.2526.106 Safari/537.36",
    "Mozilla/5.0 (Windows NT 6.1; WOW64; rv:38.0) Gecko/20100101 Firefox/38.0",
    "Mozilla/5.0 (compatible; MSIE 9.0; Windows NT 6.1; Trident/5.0)",
    "Mozilla/5.0 (X11; Linux x86_64; rv:31.0) Gecko/20100101 Firefox/31.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_9_5) AppleWebKit/600.1.17 (KHTML, like Gecko) Version/7.1 Safari/600.1.17",
    "Mozilla/5.0 (iPhone; CPU iPhone OS 8_1 like Mac OS X) AppleWebKit/600.1.4 (KHTML, like Gecko) Version/8.0 Mobile/12B411 Safari/600.1.4",
    "Mozilla/5.0 (Linux; Android 4.4.2; Nexus 5 Build/KOT49H) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/32.0.1700.99 Mobile Safari/537.36",
    "Opera/9.80 (Windows NT 6.1) Presto/2.12.388 Version/12.16",
)

W3C_FIXTURE_FIELDS = (
    'date', 'time', 'c-ip', 'cs-method', 'cs-uri-stem', 'cs-uri-query',
    'sc-status', 'sc-bytes', 'cs-version', 'cs(User-Agent)', 'cs(Referer)',
)

FIXTURE_FORMATS = ('w3c', 'ncsa', 'ncsa-combined', 'iis')


@dataclass(frozen=True)
class FixtureSpec:
    """フィクスチャ仕様"""

    n_records: int = 500
    n_irrelevant: int = 59
    n_users: int = 52
    sessions_per_user_mean: float = 1.5
    seed: int = 42
    format: str = 'ncsa-combined'

    def validate(self) -> None:
        """
        実現可能性を検証

        Raises:
            FixtureSpecError: 実現不可能な仕様の場合（理由付き）
        """
        if self.n_records < 0 or self.n_irrelevant < 0 or self.n_users < 0:
            raise FixtureSpecError(
                f"件数は0以上である必要があります: records={self.n_records}, "
                f"irrelevant={self.n_irrelevant}, users={self.n_users}"
            )
        if self.n_irrelevant > self.n_records:
            raise FixtureSpecError(
                f"除去対象数が総レコード数を超えています: irrelevant={self.n_irrelevant} > records={self.n_records}"
            )
        n_pages = self.n_records - self.n_irrelevant
        if self.n_users > n_pages:
            raise FixtureSpecError(
                f"ユーザー数が残存レコード数を超えています: users={self.n_users} > "
                f"records-irrelevant={n_pages}（各ユーザーに1件以上のページが必要）"
            )
        if n_pages > 0 and self.n_users == 0:
            raise FixtureSpecError("残存レコードがある場合はユーザー数を1以上にしてください")
        if not self.sessions_per_user_mean >= 1.0:
            raise FixtureSpecError(
                f"sessions_per_user_mean は1以上である必要があります: {self.sessions_per_user_mean}"
            )
        if self.format not in FIXTURE_FORMATS:
            raise FixtureSpecError(f"無効な形式: {self.format}（{' | '.join(FIXTURE_FORMATS)}）")


@dataclass
class _Event:
    """生成途中の1リクエスト"""

    when: datetime
    user: int
    seq: int
    uri: str
    referrer: Optional[str]
    removed: bool
    session: int
    bytes_sent: int


def _user_ip(index: int) -> str:
    n = index + 1
    return f"10.{(n >> 16) & 255}.{(n >> 8) & 255}.{n & 255}"


def _split_counts(rng: np.random.Generator, total: int, parts: int) -> List[int]:
    """total を parts 個の1以上の整数に分割"""
    if parts == 0:
        return []
    extra = rng.multinomial(total - parts, np.full(parts, 1.0 / parts))
    return [1 + int(x) for x in extra]


def _plan_events(spec: FixtureSpec, rng: np.random.Generator) -> List[_Event]:
    n_pages = spec.n_records - spec.n_irrelevant
    pages_per_user = _split_counts(rng, n_pages, spec.n_users)
    base_utc = BASE_LOCAL_TIME.replace(
        tzinfo=timezone(timedelta(minutes=BASE_OFFSET_MINUTES))
    ).astimezone(timezone.utc)

    events: List[_Event] = []
    seq = 0
    for user, n_user_pages in enumerate(pages_per_user):
        n_sessions = min(n_user_pages, 1 + int(rng.poisson(spec.sessions_per_user_mean - 1.0)))
        cuts = set()
        if n_sessions > 1:
            cuts = {int(c) + 1 for c in rng.choice(n_user_pages - 1, size=n_sessions - 1, replace=False)}

        when = base_utc + timedelta(seconds=int(rng.integers(0, 6 * 3600)))
        session = 0
        previous_page: Optional[str] = None
        for i in range(n_user_pages):
            if i > 0:
                if i in cuts:
                    session += 1
                    previous_page = None
                    when += timedelta(minutes=int(rng.integers(35, 181)))
                else:
                    when += timedelta(seconds=int(rng.integers(5, 20 * 60 + 1)))
            uri = PAGE_POOL[int(rng.integers(len(PAGE_POOL)))]
            events.append(_Event(when, user, seq, uri, previous_page, False, session,
                                 int(rng.integers(500, 20000))))
            seq += 1
            previous_page = uri

    pages = list(events)
    for _ in range(spec.n_irrelevant):
        resource = RESOURCE_POOL[int(rng.integers(len(RESOURCE_POOL)))]
        if pages:
            page = pages[int(rng.integers(len(pages)))]
            when = page.when + timedelta(seconds=int(rng.integers(1, 4)))
            user, referrer, session = page.user, page.uri, page.session
        else:
            # ページがない場合はリファラーなしの単独リクエスト（ユーザー0のIP）
            when = base_utc + timedelta(seconds=int(rng.integers(0, 6 * 3600)))
            user, referrer, session = 0, None, 0
        events.append(_Event(when, user, seq, resource, referrer, True, session,
                             int(rng.integers(100, 5000))))
        seq += 1

    events.sort(key=lambda e: (e.when, e.user, e.seq))
    return events


def _assign_truth_ids(events: List[_Event]) -> Tuple[Dict[int, int], Dict[Tuple[int, int], int]]:
    """パイプラインと同じ規則で user_id（初出順）と session_id（(user_id, 開始時刻) 順）を決定"""
    user_ids: Dict[int, int] = {}
    starts: Dict[Tuple[int, int], datetime] = {}
    for event in events:
        if event.removed:
            continue
        user_ids.setdefault(event.user, len(user_ids) + 1)
        starts.setdefault((event.user, event.session), event.when)

    ordered = sorted(starts, key=lambda k: (user_ids[k[0]], starts[k]))
    session_ids = {key: i for i, key in enumerate(ordered, start=1)}
    return user_ids, session_ids


def _render(record: LogRecord, kind: FormatKind) -> str:
    if kind is FormatKind.W3C_EXTENDED:
        return render_w3c(record, W3C_FIXTURE_FIELDS)
    if kind is FormatKind.IIS:
        return render_iis(record)
    return render_ncsa(record, combined=kind is FormatKind.NCSA_COMBINED)


def generate_fixture(spec: FixtureSpec) -> Tuple[List[str], Dict[str, Any]]:
    """
    フィクスチャを生成

    Args:
        spec: フィクスチャ仕様

    Returns:
        (ログの行リスト（改行なし）, 正解データ)

    Raises:
        FixtureSpecError: 実現不可能な仕様の場合
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    kind = FormatKind.from_cli(spec.format)

    events = _plan_events(spec, rng)
    user_ids, session_ids = _assign_truth_ids(events)

    lines: List[str] = []
    if kind is FormatKind.W3C_EXTENDED:
        lines.extend(render_w3c_header(W3C_FIXTURE_FIELDS))
    # W3CはUTC、IISはローカル時刻をオフセット0で読む既定設定に合わせる
    offset = BASE_OFFSET_MINUTES if kind in (FormatKind.NCSA_COMMON, FormatKind.NCSA_COMBINED) else 0

    truth_rows: List[Dict[str, Any]] = []
    for event in events:
        line_no = len(lines) + 1
        record = LogRecord(
            line_no=line_no,
            source_file=SOURCE_NAME,
            ip=_user_ip(event.user),
            timestamp=event.when,
            offset_minutes=offset,
            method='GET',
            uri=event.uri,
            protocol='HTTP/1.1',
            status=200,
            bytes_sent=event.bytes_sent,
            user_agent=AGENT_POOL[event.user % len(AGENT_POOL)],
            referrer=event.referrer,
        )
        lines.append(_render(record, kind))

        removed_reason = None
        if event.removed:
            suffix = next(s for s in CleaningPolicy().ordered_suffixes if event.uri.lower().endswith(s))
            removed_reason = f"SUFFIX:{suffix}"
        truth_rows.append({
            'line_no': line_no,
            'uri': event.uri,
            'removed': event.removed,
            'reason': removed_reason,
            'user_id': None if event.removed else user_ids[event.user],
            'session_id': None if event.removed else session_ids[(event.user, event.session)],
        })

    truth = {
        'spec': asdict(spec),
        'summary': {
            'records': spec.n_records,
            'irrelevant': spec.n_irrelevant,
            'kept': spec.n_records - spec.n_irrelevant,
            'users': len(user_ids),
            'sessions': len(session_ids),
        },
        'records': truth_rows,
    }
    return lines, truth


def write_fixture(spec: FixtureSpec, output_dir: Union[str, Path], logger=None) -> Tuple[Path, Path]:
    """
    フィクスチャを <output_dir>/fixture.log と fixture.truth.json に書き出す

    Returns:
        (ログファイルパス, sidecarパス)
    """
    lines, truth = generate_fixture(spec)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    log_path = out / SOURCE_NAME
    truth_path = out / "fixture.truth.json"
    with open(log_path, 'w', encoding='utf-8', newline='\n') as f:
        for line in lines:
            f.write(line + '\n')
    with open(truth_path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(truth, f, indent=2, ensure_ascii=False)
        f.write('\n')

    if logger:
        summary = truth['summary']
        logger.info(
            f"💾 フィクスチャ生成: {log_path}（{summary['records']:,}件 / 除去対象{summary['irrelevant']:,}件 / "
            f"ユーザー{summary['users']:,} / セッション{summary['sessions']:,}）"
        )
    return log_path, truth_path
