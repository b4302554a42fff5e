"""
パイプラインモジュール

設定・ステージ実行・統計・表出力・検証用フィクスチャ生成
"""

from .config import GraphSource, PipelineConfig
from .statistics import compute_stats
from .table_writer import TableWriter, read_records_table, read_table
from .runner import FileResult, PipelineResult, PipelineRunner, process_file, run_pipeline
from .fixture import FixtureSpec, generate_fixture, write_fixture

__all__ = [
    'GraphSource',
    'PipelineConfig',
    'compute_stats',
    'TableWriter',
    'read_records_table',
    'read_table',
    'FileResult',
    'PipelineResult',
    'PipelineRunner',
    'process_file',
    'run_pipeline',
    'FixtureSpec',
    'generate_fixture',
    'write_fixture',
]
