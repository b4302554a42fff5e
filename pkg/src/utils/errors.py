"""
例外定義モジュール

各例外は安定したエラーコード（`code`）を持ち、CLIの終了コード判定に使用する。
"""
from typing import Optional


class LogPrepError(Exception):
    """ログ前処理の基底例外"""

    code = "LOGPREP"


class ConfigError(LogPrepError, ValueError):
    """設定エラー（処理開始前に検出）"""

    code = "CONFIG"


class MissingGraphError(ConfigError):
    """TOPOLOGYモードでサイトグラフが未指定"""

    code = "MISSING_GRAPH"


class FixtureSpecError(ConfigError):
    """実現不可能なフィクスチャ仕様"""

    code = "INFEASIBLE_FIXTURE"


class InputFormatError(LogPrepError, ValueError):
    """入力ファイルの形式エラー（ファイル単位）"""

    code = "INPUT_FORMAT"

    def __init__(self, message: str, line_no: Optional[int] = None):
        super().__init__(message)
        self.line_no = line_no


class EmptyInputError(InputFormatError):
    """空行以外の行が存在しない"""

    code = "EMPTY_INPUT"


class MissingFieldsDirectiveError(InputFormatError):
    """W3C: `#Fields:` より前にデータ行が出現"""

    code = "MISSING_FIELDS_DIRECTIVE"


class MalformedEdgeLineError(InputFormatError):
    """エッジリストの行が2列のタブ区切りでない"""

    code = "MALFORMED_EDGE_LINE"


class LogIOError(LogPrepError, OSError):
    """読み書き失敗（到達バイトオフセット付き）"""

    code = "IO"

    def __init__(self, message: str, path: Optional[str] = None, offset: int = 0):
        super().__init__(message)
        self.path = path
        self.offset = offset

    def __str__(self) -> str:
        return f"{self.args[0]} (file={self.path}, offset={self.offset})"


class InvariantViolationError(LogPrepError, RuntimeError):
    """統計・出力の整合性違反"""

    code = "INVARIANT"
