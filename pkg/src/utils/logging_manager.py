"""
ログ管理モジュール
"""
import logging
import sys
from datetime import datetime, timezone, timedelta
from pathlib import Path
from typing import Optional

from .errors import ConfigError


class LoggingManager:
    """ログ管理クラス"""

    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
    DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

    def __init__(
        self,
        name: str = __name__,
        log_dir: Optional[str] = "logs",
        level: str = "INFO",
        timezone_name: str = "Asia/Tokyo",
        console: bool = True
    ):
        """
        初期化

        Args:
            name: ロガー名（コマンド名: logprep_run 等）
            log_dir: ログディレクトリ（Noneの場合はファイル出力なし）
            level: ログレベル
            timezone_name: タイムゾーン名（ログファイル名用）
            console: 標準出力へ出力するか
        """
        self.name = name

        if timezone_name == "Asia/Tokyo":
            self.tz = timezone(timedelta(hours=9))
        else:
            # UTC以外は未対応（UTCにフォールバック）
            self.tz = timezone.utc

        log_level = getattr(logging, str(level).upper(), None)
        if not isinstance(log_level, int):
            raise ConfigError(f"無効なログレベル: {level}")

        self.logger = logging.getLogger(name)
        self.logger.setLevel(log_level)
        self.logger.propagate = False

        # ハンドラーが既に設定されている場合はクリア
        if self.logger.handlers:
            for handler in self.logger.handlers:
                handler.close()
            self.logger.handlers.clear()

        formatter = logging.Formatter(self.LOG_FORMAT, datefmt=self.DATE_FORMAT)

        if console:
            console_handler = logging.StreamHandler(sys.stdout)
            console_handler.setLevel(log_level)
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

        self.log_file: Optional[Path] = None
        if log_dir is not None:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            # ファイル名: タイムスタンプ + 処理名
            self.log_file = log_path / f"{self._get_timestamp_str()}_{name}.log"
            file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        if not self.logger.handlers:
            self.logger.addHandler(logging.NullHandler())

    def _get_timestamp_str(self) -> str:
        """現在時刻の文字列取得"""
        return datetime.now(self.tz).strftime('%Y%m%d_%H%M%S')

    def info(self, msg: str) -> None:
        """INFOログ出力"""
        self.logger.info(msg)

    def debug(self, msg: str) -> None:
        """DEBUGログ出力"""
        self.logger.debug(msg)

    def warning(self, msg: str) -> None:
        """WARNINGログ出力"""
        self.logger.warning(msg)

    def error(self, msg: str) -> None:
        """ERRORログ出力"""
        self.logger.error(msg)

    def close(self) -> None:
        """ハンドラーを閉じる"""
        for handler in self.logger.handlers:
            handler.close()
        self.logger.handlers.clear()
