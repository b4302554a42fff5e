"""
フィールド抽出モジュール

ログファイルをストリーミングで1行ずつ読み、形式別パーサーで LogRecord に変換する。
ファイル全体をメモリに載せることはない（自動判定用の先頭サンプルのみバッファ）。
"""

from itertools import chain
from pathlib import Path
from typing import IO, Iterator, List, Optional, Sequence, Tuple, Union

from src.record_model import (
    ExtractionCounters,
    FormatKind,
    LogFormat,
    LogRecord,
    ParseOutcome,
)
from src.utils.errors import LogIOError

from .base_parser import BaseLogParser
from .detector import detect_format
from .iis import IISLogParser
from .ncsa import NCSALogParser
from .w3c import W3CLogParser

FormatSpec = Union[LogFormat, FormatKind]


def create_parser(
    fmt: FormatSpec,
    iis_offset_minutes: int = 0,
    iis_field_order: Optional[Sequence[str]] = None
) -> BaseLogParser:
    """
    形式に対応するパーサーを生成

    Args:
        fmt: LogFormat（W3Cはフィールドマップ付き）または FormatKind
        iis_offset_minutes: IISローカル時刻のオフセット（分）
        iis_field_order: IISフィールド順（None の場合は標準順）
    """
    kind = fmt.kind if isinstance(fmt, LogFormat) else fmt
    if kind is FormatKind.W3C_EXTENDED:
        field_map = fmt.field_map if isinstance(fmt, LogFormat) else ()
        return W3CLogParser(field_map)
    if kind is FormatKind.NCSA_COMMON:
        return NCSALogParser(combined=False)
    if kind is FormatKind.NCSA_COMBINED:
        return NCSALogParser(combined=True)
    if kind is FormatKind.IIS:
        return IISLogParser(offset_minutes=iis_offset_minutes, field_order=iis_field_order)
    raise ValueError(f"未対応のログ形式: {kind}")


def parse_line(
    line: str,
    log_format: LogFormat,
    line_no: int = 1,
    source_file: str = "-",
    iis_offset_minutes: int = 0,
    iis_field_order: Optional[Sequence[str]] = None
) -> ParseOutcome:
    """
    1行をパース（純粋関数: 同じ入力には常に同じ結果）

    W3Cでは log_format のフィールドマップを使用する。
    """
    parser = create_parser(log_format, iis_offset_minutes, iis_field_order)
    return parser.parse_line(line, line_no=line_no, source_file=source_file)


def open_log(path: Union[str, Path]) -> IO[bytes]:
    """ログファイルをバイナリモードで開く"""
    return open(path, 'rb')


class FieldExtractor:
    """フィールド抽出クラス（1ファイル単位で使用）"""

    def __init__(
        self,
        log_format: Optional[FormatSpec] = None,
        iis_offset_minutes: int = 0,
        iis_field_order: Optional[Sequence[str]] = None,
        sample_lines: int = 25,
        logger=None
    ):
        """
        初期化

        Args:
            log_format: 形式（None の場合はファイルごとに自動判定）
            iis_offset_minutes: IISローカル時刻のオフセット（分）
            iis_field_order: IISフィールド順
            sample_lines: 自動判定に使う空行以外の先頭行数
            logger: ロガーインスタンス
        """
        if sample_lines < 1:
            raise ValueError(f"sample_lines は1以上である必要があります: {sample_lines}")
        self.log_format = log_format
        self.iis_offset_minutes = iis_offset_minutes
        self.iis_field_order = iis_field_order
        self.sample_lines = sample_lines
        self.logger = logger
        self.detected_kind: Optional[FormatKind] = None

    def _log(self, level: str, msg: str) -> None:
        """ログ出力"""
        if self.logger:
            getattr(self.logger, level)(msg)

    @staticmethod
    def _iter_lines(stream: IO, source_file: str) -> Iterator[str]:
        """ストリームから1行ずつ読む（I/O失敗時は到達オフセット付きで中断）"""
        offset = 0
        while True:
            try:
                raw = stream.readline()
            except OSError as e:
                raise LogIOError(f"読み込みに失敗しました: {e}", path=source_file, offset=offset) from e
            if not raw:
                return
            offset += len(raw)
            if isinstance(raw, bytes):
                raw = raw.decode('utf-8', errors='replace')
            yield raw

    def _resolve_format(self, lines: Iterator[str]) -> Tuple[FormatSpec, List[str]]:
        """
        形式を決定し、判定のために読んだ先頭行を返す

        空行以外の行がないファイルは NCSA_COMMON 扱い（全行 BLANK としてスキップ）。
        """
        if self.log_format is not None:
            return self.log_format, []

        head: List[str] = []
        non_blank: List[str] = []
        for line in lines:
            head.append(line)
            if line.strip():
                non_blank.append(line)
                if len(non_blank) >= self.sample_lines:
                    break

        if not non_blank:
            return FormatKind.NCSA_COMMON, head
        return detect_format(non_blank), head

    def extract(
        self,
        stream: IO,
        source_file: str = "-",
        counters: Optional[ExtractionCounters] = None
    ) -> Iterator[LogRecord]:
        """
        ストリームからレコードをファイル順に生成

        Args:
            stream: 改行区切りテキストのストリーム（バイナリ推奨）
            source_file: 元ファイル識別子
            counters: 行カウンタ（呼び出し側で集計する場合に指定）

        Yields:
            LogRecord（受理行の順）

        Raises:
            LogIOError: 読み込み失敗時
            MissingFieldsDirectiveError: W3Cで `#Fields:` より前にデータ行がある場合
        """
        if counters is None:
            counters = ExtractionCounters()

        lines = self._iter_lines(stream, source_file)
        fmt, head = self._resolve_format(lines)
        self.detected_kind = fmt.kind if isinstance(fmt, LogFormat) else fmt
        if self.log_format is None and not any(line.strip() for line in head):
            # 空ファイル（判定不能）
            self.detected_kind = None
        parser = create_parser(fmt, self.iis_offset_minutes, self.iis_field_order)
        self._log('debug', f"📄 {source_file}: 形式 {self.detected_kind.value if self.detected_kind else 'EMPTY'}")

        for line_no, line in enumerate(chain(head, lines), start=1):
            counters.lines_read += 1
            outcome = parser.parse_line(line, line_no=line_no, source_file=source_file)
            if outcome.record is not None:
                counters.records_parsed += 1
                yield outcome.record
            else:
                skip = outcome.skip
                counters.count_skip(skip.reason)
                if skip.reason.is_malformed:
                    self._log('debug', f"{source_file}:{line_no} スキップ（{skip.reason.value}）")


def extract_fields(
    stream: IO,
    log_format: Optional[FormatSpec] = None,
    source_file: str = "-",
    iis_offset_minutes: int = 0,
    iis_field_order: Optional[Sequence[str]] = None,
    sample_lines: int = 25,
    logger=None
) -> Tuple[Iterator[LogRecord], ExtractionCounters]:
    """
    ストリームからフィールドを抽出

    Returns:
        (レコードのイテレータ, 行カウンタ)。カウンタはイテレータの消費に伴い更新される。
    """
    counters = ExtractionCounters()
    extractor = FieldExtractor(
        log_format=log_format,
        iis_offset_minutes=iis_offset_minutes,
        iis_field_order=iis_field_order,
        sample_lines=sample_lines,
        logger=logger
    )
    return extractor.extract(stream, source_file, counters), counters
