"""
パイプライン実行モジュール

フィールド抽出 → クリーニング → ユーザー識別 → セッション識別 → パス補完 を順に実行し、
表・統計を書き出す。
"""

from collections import Counter
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import Any, Dict, List, Optional

import psutil
from joblib import Parallel, delayed
from tqdm import tqdm

from src.cleaning import RecordCleaner
from src.identity import (
    SiteGraph,
    UserAssignment,
    derive_from_records,
    identify_users,
    load_edge_list,
)
from src.parsers import FieldExtractor, open_log
from src.record_model import ExtractionCounters, LogRecord, PipelineStats, record_key
from src.sessions import Session, Sessionizer, complete_paths, number_sessions

from .config import GraphSource, PipelineConfig
from .statistics import compute_stats
from .table_writer import TableWriter


@dataclass
class FileResult:
    """1ファイル分の抽出・クリーニング結果"""

    source_file: str
    format: str
    counters: ExtractionCounters
    removed: Counter
    kept: List[LogRecord] = field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            'source_file': self.source_file,
            'format': self.format,
            'lines_read': self.counters.lines_read,
            'records_parsed': self.counters.records_parsed,
        }


def process_file(path: str, cfg: PipelineConfig, logger=None) -> FileResult:
    """
    1ファイルを抽出・クリーニング（ストリーミング、残すレコードのみ保持）

    joblib のワーカーからも呼ばれるため、引数は全てpickle可能であること。
    """
    counters = ExtractionCounters()
    extractor = FieldExtractor(
        log_format=cfg.format_kind,
        iis_offset_minutes=cfg.iis_offset_minutes,
        iis_field_order=cfg.iis_field_order,
        sample_lines=cfg.sample_lines,
        logger=logger
    )
    cleaner = RecordCleaner(cfg.cleaning, logger=logger)

    with open_log(path) as stream:
        kept = list(cleaner.filter(extractor.extract(stream, source_file=path, counters=counters)))

    kind = extractor.detected_kind.value if extractor.detected_kind else 'EMPTY'
    return FileResult(
        source_file=path,
        format=kind,
        counters=counters,
        removed=cleaner.removed,
        kept=kept,
    )


@dataclass
class PipelineResult:
    """パイプラインの全ステージ出力"""

    stats: PipelineStats
    records: List[LogRecord]
    users: List[UserAssignment]
    sessions: List[Session]
    assignments: List[Dict[str, Any]]


class PipelineRunner:
    """パイプライン実行クラス"""

    def __init__(self, cfg: PipelineConfig, logger=None):
        """
        初期化（設定違反はここで検出）

        Args:
            cfg: パイプライン設定
            logger: LoggingManagerインスタンス

        Raises:
            ConfigError: 設定違反
        """
        cfg.validate(require_inputs=True)
        self.cfg = cfg
        self.logger = logger
        self.sessionizer = Sessionizer(
            timeout=timedelta(minutes=cfg.timeout_minutes),
            max_page_stay=(timedelta(minutes=cfg.max_page_stay_minutes)
                           if cfg.max_page_stay_minutes is not None else None),
            max_session=(timedelta(minutes=cfg.max_session_minutes)
                         if cfg.max_session_minutes is not None else None),
        )

    def _log(self, level: str, msg: str) -> None:
        """ログ出力"""
        if self.logger:
            getattr(self.logger, level)(msg)

    def _check_inputs(self) -> None:
        for path in self.cfg.inputs:
            if not Path(path).is_file():
                raise FileNotFoundError(f"入力ファイルが見つかりません: {path}")
        if self.cfg.graph_source is GraphSource.EDGE_FILE and not Path(self.cfg.graph_path).is_file():
            raise FileNotFoundError(f"エッジリストが見つかりません: {self.cfg.graph_path}")

    def extract_and_clean(self) -> List[FileResult]:
        """全入力ファイルを抽出・クリーニング（結果は入力順）"""
        self._log('info', f"🔄 フィールド抽出・クリーニング開始（{len(self.cfg.inputs)}ファイル）")

        if self.cfg.n_jobs > 1 and len(self.cfg.inputs) > 1:
            results = Parallel(n_jobs=self.cfg.n_jobs)(
                delayed(process_file)(path, self.cfg) for path in self.cfg.inputs
            )
        else:
            results = [process_file(path, self.cfg, self.logger) for path in self.cfg.inputs]

        for result in results:
            removed = sum(result.removed.values())
            self._log(
                'info',
                f"📄 {result.source_file}: {result.format} / "
                f"行{result.counters.lines_read:,} → レコード{result.counters.records_parsed:,} → "
                f"残存{len(result.kept):,}（除去{removed:,}）"
            )
            malformed = result.counters.lines_skipped_malformed
            if malformed:
                self._log('warning', f"⚠️  {result.source_file}: 不正行 {malformed:,}行をスキップ")
        return list(results)

    def build_graph(self, records: List[LogRecord]) -> Optional[SiteGraph]:
        """設定に応じてサイトグラフを構築"""
        if self.cfg.graph_source is GraphSource.EDGE_FILE:
            graph = load_edge_list(self.cfg.graph_path)
        elif self.cfg.graph_source is GraphSource.FROM_REFERRERS:
            graph = derive_from_records(records, self.cfg.site_hosts)
        else:
            return None
        self._log(
            'info',
            f"🕸️  サイトグラフ: ノード{graph.graph.number_of_nodes():,} / "
            f"エッジ{graph.graph.number_of_edges():,} / 入口{len(graph.entry_pages):,}"
        )
        return graph

    def build_sessions(
        self,
        users: List[UserAssignment],
        records: List[LogRecord],
        graph: Optional[SiteGraph]
    ) -> List[Session]:
        """ユーザーごとにセッション分割し、全体で採番した後にパス補完"""
        by_key = {record_key(r): r for r in records}
        sessions: List[Session] = []
        for user in tqdm(users, desc="セッション識別", disable=not self.cfg.show_progress):
            sessions.extend(self.sessionizer.sessionize(user, (by_key[k] for k in user.record_refs)))
        sessions = number_sessions(sessions)

        if self.cfg.path_completion:
            sessions = [
                complete_paths(s, graph, self.cfg.site_hosts)
                for s in tqdm(sessions, desc="パス補完", disable=not self.cfg.show_progress)
            ]
        return sessions

    def run(self) -> PipelineResult:
        """
        パイプライン実行

        Returns:
            PipelineResult

        Raises:
            FileNotFoundError: 入力ファイルが存在しない場合
            LogIOError: 読み込み失敗時
            InputFormatError: ファイル単位の形式エラー
            InvariantViolationError: 統計の整合条件違反
        """
        self._check_inputs()

        graph: Optional[SiteGraph] = None
        if self.cfg.graph_source is GraphSource.EDGE_FILE:
            graph = self.build_graph([])

        file_results = self.extract_and_clean()

        counters = ExtractionCounters()
        removed: Counter = Counter()
        records: List[LogRecord] = []
        for result in file_results:
            counters.merge(result.counters)
            removed.update(result.removed)
            records.extend(result.kept)
        self._log('info', f"✅ クリーニング完了: {counters.records_parsed:,} → {len(records):,}件")

        if self.cfg.graph_source is GraphSource.FROM_REFERRERS:
            graph = self.build_graph(records)

        self._log('info', f"🔄 ユーザー識別開始（{self.cfg.identity_mode.value}）")
        users = identify_users(records, self.cfg.identity_mode, graph)
        self._log('info', f"✅ ユーザー識別完了: {len(users):,}ユーザー")

        self._log('info', "🔄 セッション識別開始")
        sessions = self.build_sessions(users, records, graph)
        inferred = sum(s.n_inferred for s in sessions)
        self._log('info', f"✅ セッション識別完了: {len(sessions):,}セッション（補完{inferred:,}件）")

        stats = compute_stats(
            counters,
            removed,
            records_after_cleaning=len(records),
            users=users,
            sessions=sessions,
            files=[r.summary() for r in file_results],
        )

        output_records, assignments = self._assemble_outputs(file_results, sessions)
        return PipelineResult(
            stats=stats,
            records=output_records,
            users=users,
            sessions=sessions,
            assignments=assignments,
        )

    def _assemble_outputs(self, file_results: List[FileResult], sessions: List[Session]):
        """出力レコード（推定レコードは対応する実レコードの直前）と割当表を作成"""
        file_order = {r.source_file: i for i, r in enumerate(file_results)}
        placed = [(record, session) for session in sessions for record in session.records]
        placed.sort(key=lambda item: (
            file_order[item[0].source_file], item[0].line_no, item[0].sub_ordinal
        ))
        records = [record for record, _ in placed]
        assignments = [
            {
                'source_file': record.source_file,
                'line_no': record.line_no,
                'sub_ordinal': record.sub_ordinal,
                'user_id': session.user_id,
                'session_id': session.session_id,
            }
            for record, session in placed
        ]
        return records, assignments

    def write(self, result: PipelineResult) -> TableWriter:
        """全出力を書き出す"""
        writer = TableWriter(self.cfg.output_dir, self.cfg.output_format, logger=self.logger)
        writer.prepare()
        if self.cfg.backup_enabled:
            writer.backup_existing(self.cfg.backup_timestamp_format)

        writer.write_records(result.records)
        writer.write_users(result.users)
        writer.write_sessions(result.sessions)
        writer.write_assignments(result.assignments)
        writer.write_stats(result.stats)
        if self.cfg.markdown_report:
            writer.write_report(result.stats, self._report_settings())
        return writer

    def _report_settings(self) -> Dict[str, Any]:
        cfg = self.cfg
        return {
            'format': cfg.format,
            'suffixes': ', '.join(cfg.cleaning.ordered_suffixes),
            'remove_failed_status': cfg.cleaning.remove_failed_status,
            'identity_mode': cfg.identity_mode.value,
            'graph_source': cfg.graph_source.value,
            'timeout_minutes': cfg.timeout_minutes,
            'path_completion': cfg.path_completion,
            'output_format': cfg.output_format,
        }

    def log_memory(self) -> None:
        """プロセスのメモリ使用量をログ出力（結果ファイルには含めない）"""
        rss_mb = psutil.Process().memory_info().rss / 1024 / 1024
        self._log('info', f"📊 メモリ使用量(RSS): {rss_mb:,.1f} MB")


def run_pipeline(cfg: PipelineConfig, logger=None) -> PipelineStats:
    """
    パイプラインを実行し、全出力を書き出す

    Returns:
        PipelineStats
    """
    runner = PipelineRunner(cfg, logger=logger)
    result = runner.run()
    runner.write(result)
    runner.log_memory()
    if logger:
        logger.info(f"✅ {result.stats.summary()}")
    return result.stats
