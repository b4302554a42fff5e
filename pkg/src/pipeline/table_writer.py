"""
表形式出力モジュール

records / users / sessions / assignments の各表を CSV（RFC-4180, UTF-8, ヘッダー付き）
または JSONL で書き出し、stats.json と report.md を保存する。
同一入力・同一設定なら出力はバイト単位で一致する（時刻やホスト情報を含めない）。
"""

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import pandas as pd

from src.identity import UserAssignment
from src.record_model import (
    RECORD_COLUMNS,
    LogRecord,
    PipelineStats,
    format_utc,
    record_from_row,
    record_to_csv_row,
    record_to_json_row,
)
from src.sessions import Session
from src.utils.errors import LogIOError

USER_COLUMNS = (
    'user_id', 'ip', 'browser_family', 'browser_major', 'os_family',
    'record_count', 'first_seen_utc', 'last_seen_utc',
)

SESSION_COLUMNS = (
    'session_id', 'user_id', 'n_records', 'n_inferred', 'start_utc',
    'end_utc', 'duration_seconds', 'page_sequence',
)

ASSIGNMENT_COLUMNS = ('source_file', 'line_no', 'sub_ordinal', 'user_id', 'session_id')

TABLE_NAMES = ('records', 'users', 'sessions', 'assignments')


def _seconds(value: float) -> Union[int, float]:
    return int(value) if float(value).is_integer() else round(value, 6)


def user_row(user: UserAssignment) -> Dict[str, Any]:
    return {
        'user_id': user.user_id,
        'ip': user.ip,
        'browser_family': user.signature.browser_family,
        'browser_major': user.signature.browser_major,
        'os_family': user.signature.os_family,
        'record_count': user.record_count,
        'first_seen_utc': format_utc(user.first_seen),
        'last_seen_utc': format_utc(user.last_seen),
    }


def session_row(session: Session) -> Dict[str, Any]:
    return {
        'session_id': session.session_id,
        'user_id': session.user_id,
        'n_records': session.n_records,
        'n_inferred': session.n_inferred,
        'start_utc': format_utc(session.start_utc),
        'end_utc': format_utc(session.end_utc),
        'duration_seconds': _seconds(session.duration_seconds),
        'page_sequence': session.page_sequence,
    }


def _to_text(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return str(value)


class TableWriter:
    """出力ディレクトリへの表書き出しクラス"""

    def __init__(self, output_dir: Union[str, Path], output_format: str = 'csv', logger=None):
        """
        初期化

        Args:
            output_dir: 出力ディレクトリ
            output_format: csv / jsonl
            logger: ロガーインスタンス
        """
        if output_format not in ('csv', 'jsonl'):
            raise ValueError(f"無効な出力形式: {output_format}")
        self.output_dir = Path(output_dir)
        self.output_format = output_format
        self.logger = logger

    def _log(self, level: str, msg: str) -> None:
        """ログ出力"""
        if self.logger:
            getattr(self.logger, level)(msg)

    def table_path(self, name: str) -> Path:
        return self.output_dir / f"{name}.{self.output_format}"

    @property
    def stats_path(self) -> Path:
        return self.output_dir / "stats.json"

    @property
    def report_path(self) -> Path:
        return self.output_dir / "report.md"

    def output_paths(self) -> List[Path]:
        return [self.table_path(n) for n in TABLE_NAMES] + [self.stats_path, self.report_path]

    def prepare(self) -> None:
        """出力ディレクトリを作成"""
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise LogIOError(f"出力ディレクトリを作成できません: {e}", path=str(self.output_dir)) from e

    def backup_existing(self, timestamp_format: str = "%Y%m%d_%H%M%S") -> None:
        """
        既存出力をバックアップ（更新時刻プレフィックス付きにリネーム）

        Args:
            timestamp_format: タイムスタンプフォーマット
        """
        jst_tz = timezone(timedelta(hours=9))
        for path in self.output_paths():
            if not path.exists():
                continue
            mtime = datetime.fromtimestamp(path.stat().st_mtime, tz=jst_tz)
            backup_name = f"{mtime.strftime(timestamp_format)}_{path.name}"
            path.rename(path.parent / backup_name)
            self._log('info', f"📦 既存ファイルをバックアップ: {backup_name}")

    def write_table(self, name: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> Path:
        """
        1つの表を書き出す

        Args:
            name: 表名（ファイル名の拡張子なし部分）
            columns: 列順
            rows: 型付きの行（JSONLではそのまま、CSVでは文字列化）

        Returns:
            書き出したファイルのパス
        """
        path = self.table_path(name)
        rows = list(rows)
        try:
            if self.output_format == 'csv':
                frame = pd.DataFrame(
                    [[_to_text(row[c]) for c in columns] for row in rows],
                    columns=list(columns),
                    dtype=str,
                )
                frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')
            else:
                with open(path, 'w', encoding='utf-8', newline='\n') as f:
                    for row in rows:
                        f.write(json.dumps({c: row[c] for c in columns}, ensure_ascii=False) + '\n')
        except OSError as e:
            raise LogIOError(f"書き込みに失敗しました: {e}", path=str(path)) from e

        self._log('info', f"💾 {path.name}: {len(rows):,}行")
        return path

    def write_records(self, records: Iterable[LogRecord]) -> Path:
        if self.output_format == 'csv':
            rows = (record_to_csv_row(r) for r in records)
        else:
            rows = (record_to_json_row(r) for r in records)
        return self.write_table('records', RECORD_COLUMNS, rows)

    def write_users(self, users: Iterable[UserAssignment]) -> Path:
        return self.write_table('users', USER_COLUMNS, (user_row(u) for u in users))

    def write_sessions(self, sessions: Iterable[Session]) -> Path:
        return self.write_table('sessions', SESSION_COLUMNS, (session_row(s) for s in sessions))

    def write_assignments(self, rows: Iterable[Dict[str, Any]]) -> Path:
        return self.write_table('assignments', ASSIGNMENT_COLUMNS, rows)

    def write_stats(self, stats: PipelineStats) -> Path:
        """stats.json を保存（キー順固定）"""
        try:
            with open(self.stats_path, 'w', encoding='utf-8', newline='\n') as f:
                json.dump(stats.to_dict(), f, indent=2, ensure_ascii=False)
                f.write('\n')
        except OSError as e:
            raise LogIOError(f"書き込みに失敗しました: {e}", path=str(self.stats_path)) from e
        self._log('info', f"💾 {self.stats_path.name}")
        return self.stats_path

    def write_report(self, stats: PipelineStats, settings: Optional[Dict[str, Any]] = None) -> Path:
        """Markdownサマリを保存"""
        lines = [
            "# 前処理レポート",
            "",
            "## ステージ別件数",
            "",
            "| ステージ | 件数 |",
            "|---|---:|",
            f"| 読み込み行数 | {stats.lines_read:,} |",
            f"| 抽出レコード数 | {stats.records_parsed:,} |",
            f"| クリーニング後 | {stats.records_after_cleaning:,} |",
            f"| 識別ユーザー数 | {stats.users_identified:,} |",
            f"| セッション数 | {stats.sessions_identified:,} |",
            f"| 補完レコード数 | {stats.records_inferred:,} |",
            "",
            "## スキップ行（理由別）",
            "",
        ]
        if stats.lines_skipped_by_reason:
            lines += ["| 理由 | 行数 |", "|---|---:|"]
            lines += [f"| {k} | {v:,} |" for k, v in sorted(stats.lines_skipped_by_reason.items())]
        else:
            lines.append("なし")

        lines += ["", "## 除去レコード（理由別）", ""]
        if stats.records_removed_by_reason:
            lines += ["| 理由 | 件数 |", "|---|---:|"]
            lines += [f"| {k} | {v:,} |" for k, v in sorted(stats.records_removed_by_reason.items())]
        else:
            lines.append("なし")

        lines += [
            "",
            "## 入力ファイル",
            "",
            "| ファイル | 形式 | 行数 | レコード数 |",
            "|---|---|---:|---:|",
        ]
        lines += [
            f"| {f['source_file']} | {f['format']} | {f['lines_read']:,} | {f['records_parsed']:,} |"
            for f in stats.files
        ]

        if settings:
            lines += ["", "## 設定", ""]
            lines += [f"- **{k}**: {v}" for k, v in settings.items()]

        try:
            with open(self.report_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write('\n'.join(lines) + '\n')
        except OSError as e:
            raise LogIOError(f"書き込みに失敗しました: {e}", path=str(self.report_path)) from e
        self._log('info', f"💾 {self.report_path.name}")
        return self.report_path


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """
    出力表を読み込む（CSVは全列文字列、欠損は空文字）

    Raises:
        FileNotFoundError: ファイルが存在しない場合
    """
    path = Path(path)
    if path.suffix == '.jsonl':
        with open(path, 'r', encoding='utf-8') as f:
            rows = [json.loads(line) for line in f if line.strip()]
        return pd.DataFrame(rows)
    return pd.read_csv(path, dtype=str, keep_default_na=False)


def read_records_table(path: Union[str, Path]) -> List[LogRecord]:
    """records 表から LogRecord を復元"""
    path = Path(path)
    if path.suffix == '.jsonl':
        with open(path, 'r', encoding='utf-8') as f:
            return [record_from_row(json.loads(line)) for line in f if line.strip()]
    frame = read_table(path)
    return [record_from_row(row) for row in frame.to_dict(orient='records')]
