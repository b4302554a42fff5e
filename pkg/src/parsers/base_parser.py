"""
ログパーサーの基底クラス

全形式パーサーの共通インターフェースと、フィールド変換ヘルパーを定義
"""

from abc import ABC, abstractmethod
from typing import Optional

from src.record_model import LogRecord, ParseOutcome, SkipReason
from src.utils.errors import InputFormatError


class LineRejected(Exception):
    """行を不正としてスキップする（理由付き）"""

    def __init__(self, reason: SkipReason, detail: str = ""):
        super().__init__(detail or reason.value)
        self.reason = reason


def absent(value: Optional[str]) -> Optional[str]:
    """ワイヤ表記の欠損（"-" / 空文字）を None に変換"""
    if value is None:
        return None
    if value == '-' or value == '':
        return None
    return value


def optional_count(value: Optional[str], name: str) -> Optional[int]:
    """非負整数フィールド（"-" は欠損）"""
    value = absent(value)
    if value is None:
        return None
    if not value.isdigit():
        raise LineRejected(SkipReason.MALFORMED_NUMBER, f"{name}={value}")
    return int(value)


def optional_int(value: Optional[str], name: str) -> Optional[int]:
    """符号付き整数フィールド（"-" は欠損）"""
    value = absent(value)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise LineRejected(SkipReason.MALFORMED_NUMBER, f"{name}={value}") from None


def optional_status(value: Optional[str]) -> Optional[int]:
    """HTTPステータス（100～599、"-" は欠損）"""
    value = absent(value)
    if value is None:
        return None
    if not value.isdigit():
        raise LineRejected(SkipReason.MALFORMED_STATUS, f"status={value}")
    status = int(value)
    if not 100 <= status <= 599:
        raise LineRejected(SkipReason.MALFORMED_STATUS, f"status={value}")
    return status


class BaseLogParser(ABC):
    """
    ログパーサーの基底クラス

    各形式パーサーはこのクラスを継承し、`_parse_data` を実装する。
    不正行は LineRejected を送出し、`parse_line` がスキップ結果に変換する
    （不正行がファイル処理を中断することはない）。
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """形式名"""

    @property
    @abstractmethod
    def description(self) -> str:
        """形式の説明"""

    @abstractmethod
    def _parse_data(self, text: str, line_no: int, source_file: str) -> LogRecord:
        """
        データ行をパース

        Raises:
            LineRejected: 不正行の場合
        """

    def _handle_directive(self, text: str, line_no: int) -> bool:
        """ディレクティブ行なら処理して True を返す（W3Cのみ使用）"""
        return False

    def parse_line(self, line: str, line_no: int = 1, source_file: str = "-") -> ParseOutcome:
        """
        1行をパース

        Args:
            line: 生テキスト（末尾の改行は除去される）
            line_no: 1始まりの行番号
            source_file: 元ファイル識別子

        Returns:
            ParseOutcome（record または skip）
        """
        text = line.rstrip('\r\n')
        if not text.strip():
            return ParseOutcome.skipped(line_no, SkipReason.BLANK, text)

        if self._handle_directive(text, line_no):
            return ParseOutcome.skipped(line_no, SkipReason.DIRECTIVE, text)

        try:
            record = self._parse_data(text.strip(), line_no, source_file)
        except LineRejected as e:
            return ParseOutcome.skipped(line_no, e.reason, text)
        except InputFormatError:
            raise
        except ValueError:
            # LogRecord の不変条件違反（範囲外の値など）
            return ParseOutcome.skipped(line_no, SkipReason.MALFORMED_NUMBER, text)

        return ParseOutcome(record=record)
