"""
パイプライン設定モジュール

ConfigManager の値を検証済みの PipelineConfig に変換する。
設定違反は処理開始前（ファイルを開く前）に ConfigError として検出する。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, List, Optional, Tuple

from src.identity import IdentityMode
from src.parsers.iis import validate_field_order
from src.record_model import CleaningPolicy, FormatKind
from src.utils.errors import ConfigError, MissingGraphError

OUTPUT_FORMATS = ('csv', 'jsonl')
INPUT_FORMATS = ('auto', 'w3c', 'ncsa', 'ncsa-combined', 'iis')


class GraphSource(str, Enum):
    """サイトグラフの入手元"""

    NONE = "NONE"
    EDGE_FILE = "EDGE_FILE"
    FROM_REFERRERS = "FROM_REFERRERS"


def _convert(key: str, value: Any, cast: Callable[[Any], Any]) -> Any:
    if value is None:
        return None
    try:
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"設定値が不正です: {key}={value!r}\nエラー: {e}") from e


def _as_list(value: Any) -> List[str]:
    """カンマ区切り文字列またはリストを文字列リストに変換"""
    if value is None:
        return []
    if isinstance(value, str):
        return [v.strip() for v in value.split(',') if v.strip()]
    return [str(v) for v in value]


@dataclass
class PipelineConfig:
    """パイプライン実行設定"""

    inputs: List[str] = field(default_factory=list)
    format: str = 'auto'
    cleaning: CleaningPolicy = field(default_factory=CleaningPolicy)
    identity_mode: IdentityMode = IdentityMode.BASIC
    graph_source: GraphSource = GraphSource.NONE
    graph_path: Optional[str] = None
    site_hosts: Tuple[str, ...] = ()
    timeout_minutes: float = 30.0
    max_page_stay_minutes: Optional[float] = None
    max_session_minutes: Optional[float] = None
    path_completion: bool = True
    iis_offset_minutes: int = 0
    iis_field_order: Optional[Tuple[str, ...]] = None
    sample_lines: int = 25
    output_dir: str = 'output'
    output_format: str = 'csv'
    markdown_report: bool = True
    backup_enabled: bool = False
    backup_timestamp_format: str = '%Y%m%d_%H%M%S'
    n_jobs: int = 1
    show_progress: bool = False
    seed: Optional[int] = None

    @property
    def format_kind(self) -> Optional[FormatKind]:
        """明示形式（auto の場合は None）"""
        if self.format == 'auto':
            return None
        return FormatKind.from_cli(self.format)

    @classmethod
    def from_config(cls, config) -> "PipelineConfig":
        """
        ConfigManager から生成

        Args:
            config: ConfigManagerインスタンス

        Raises:
            ConfigError: 型変換できない値がある場合
        """
        suffixes = config.get('cleaning.suffixes')
        try:
            cleaning = CleaningPolicy.from_options(
                suffixes=None if suffixes is None else _as_list(suffixes),
                preset=config.get('cleaning.preset', 'default'),
                remove_failed_status=bool(config.get('cleaning.remove_failed_status', False)),
                failed_status_ranges=config.get('cleaning.failed_status_ranges'),
                strip_query_before_match=bool(config.get('cleaning.strip_query_before_match', True)),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"cleaning 設定が不正です: {e}") from e

        graph_path = config.get('identity.graph_edges')
        from_referrers = bool(config.get('identity.graph_from_referrers', False))
        if graph_path and from_referrers:
            raise ConfigError("identity.graph_edges と identity.graph_from_referrers は同時に指定できません")
        if graph_path:
            graph_source = GraphSource.EDGE_FILE
        elif from_referrers:
            graph_source = GraphSource.FROM_REFERRERS
        else:
            graph_source = GraphSource.NONE

        try:
            identity_mode = IdentityMode.from_cli(str(config.get('identity.mode', 'basic')))
        except ValueError as e:
            raise ConfigError(str(e)) from e

        field_order = config.get('parsers.iis_field_order')

        return cls(
            inputs=_as_list(config.get('input.paths')),
            format=str(config.get('input.format', 'auto')).lower(),
            cleaning=cleaning,
            identity_mode=identity_mode,
            graph_source=graph_source,
            graph_path=str(graph_path) if graph_path else None,
            site_hosts=tuple(_as_list(config.get('identity.site_hosts'))),
            timeout_minutes=_convert('sessions.timeout_minutes', config.get('sessions.timeout_minutes', 30), float),
            max_page_stay_minutes=_convert(
                'sessions.max_page_stay_minutes', config.get('sessions.max_page_stay_minutes'), float),
            max_session_minutes=_convert(
                'sessions.max_session_minutes', config.get('sessions.max_session_minutes'), float),
            path_completion=bool(config.get('sessions.path_completion', True)),
            iis_offset_minutes=_convert('parsers.iis_offset_minutes', config.get('parsers.iis_offset_minutes', 0), int),
            iis_field_order=tuple(_as_list(field_order)) if field_order else None,
            sample_lines=_convert('input.sample_lines', config.get('input.sample_lines', 25), int),
            output_dir=str(config.get('output.dir', 'output')),
            output_format=str(config.get('output.format', 'csv')).lower(),
            markdown_report=bool(config.get('output.reports.markdown', True)),
            backup_enabled=bool(config.get('output.backup.enabled', False)),
            backup_timestamp_format=str(config.get('output.backup.timestamp_format', '%Y%m%d_%H%M%S')),
            n_jobs=_convert('pipeline.n_jobs', config.get('pipeline.n_jobs', 1), int),
            show_progress=bool(config.get('logging.show_progress', False)),
            seed=_convert('fixture.seed', config.get('fixture.seed'), int),
        )

    def validate(self, require_inputs: bool = True) -> None:
        """
        設定の整合性を検証

        Raises:
            MissingGraphError: TOPOLOGYモードでグラフ入手元がない場合
            ConfigError: その他の設定違反
        """
        if require_inputs and not self.inputs:
            raise ConfigError("入力ファイルが指定されていません（--input / input.paths）")
        if len(set(self.inputs)) != len(self.inputs):
            raise ConfigError(f"入力ファイルが重複しています: {self.inputs}")
        if self.format not in INPUT_FORMATS:
            raise ConfigError(f"無効な入力形式: {self.format}（{' | '.join(INPUT_FORMATS)}）")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"無効な出力形式: {self.output_format}（{' | '.join(OUTPUT_FORMATS)}）")
        if self.identity_mode is IdentityMode.TOPOLOGY and self.graph_source is GraphSource.NONE:
            raise MissingGraphError("TOPOLOGYモードにはサイトグラフが必要です（--graph / --graph-from-referrers）")
        if not self.timeout_minutes > 0:
            raise ConfigError(f"timeout_minutes は正の値である必要があります: {self.timeout_minutes}")
        for name in ('max_page_stay_minutes', 'max_session_minutes'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} は正の値である必要があります: {value}")
        if self.n_jobs < 1:
            raise ConfigError(f"pipeline.n_jobs は1以上である必要があります: {self.n_jobs}")
        if self.sample_lines < 1:
            raise ConfigError(f"input.sample_lines は1以上である必要があります: {self.sample_lines}")
        if self.iis_field_order is not None:
            try:
                validate_field_order(self.iis_field_order)
            except ValueError as e:
                raise ConfigError(str(e)) from e
