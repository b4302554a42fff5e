"""
設定管理モジュール
"""
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .errors import ConfigError


class ConfigManager:
    """設定管理クラス"""

    # 環境変数 → 設定キー（優先度: 環境変数 > CLIフラグ > 設定ファイル > デフォルト）
    ENV_OVERRIDES = {
        'LOGPREP_OUT': ('output.dir', str),
        'LOGPREP_FORMAT': ('input.format', str),
        'LOGPREP_TIMEOUT_MIN': ('sessions.timeout_minutes', float),
        'LOGPREP_LOG_LEVEL': ('logging.level', str),
    }

    DEFAULT_PATHS = [
        Path("config/logprep.yaml"),
        Path("config/logprep.template.yaml"),
    ]

    def __init__(
        self,
        config_path: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
        use_env: bool = True
    ):
        """
        初期化

        Args:
            config_path: 設定ファイルパス（省略時はデフォルトパスを検索）
            overrides: CLIフラグ由来の上書き値（ドット記法キー → 値、Noneは未指定扱い）
            use_env: 環境変数による上書きを行うか
        """
        self.config_path = self._find_config(config_path)
        self.config = self._load_config()

        for key, value in (overrides or {}).items():
            if value is not None:
                self.set(key, value)

        if use_env:
            load_dotenv()
            self._apply_env_overrides()

    def _find_config(self, config_path: Optional[str]) -> Optional[Path]:
        """
        設定ファイルを検索

        Args:
            config_path: 指定された設定ファイルパス

        Returns:
            設定ファイルのPath（見つからない場合はNone = 組み込みデフォルト）

        Raises:
            FileNotFoundError: 指定された設定ファイルが存在しない場合
        """
        if config_path:
            path = Path(config_path)
            if path.exists():
                return path
            raise FileNotFoundError(f"設定ファイルが見つかりません: {config_path}")

        for path in self.DEFAULT_PATHS:
            if path.exists():
                if "template" in path.name:
                    print(f"⚠️  テンプレートファイルを使用しています: {path}", file=sys.stderr)
                    print("   運用前に config/logprep.yaml を作成してください", file=sys.stderr)
                return path

        return None

    def _load_config(self) -> Dict[str, Any]:
        """
        設定ファイルを読み込み

        Returns:
            設定辞書
        """
        if self.config_path is None:
            return {}

        with open(self.config_path, 'r', encoding='utf-8') as f:
            try:
                loaded = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"設定ファイルを解析できません: {self.config_path}\n{e}") from e

        if loaded is None:
            return {}
        if not isinstance(loaded, dict):
            raise ConfigError(
                f"設定ファイルのトップレベルは辞書形式である必要があります: {self.config_path}\n"
                f"現在の型: {type(loaded).__name__}"
            )
        return loaded

    def _apply_env_overrides(self) -> None:
        """環境変数で設定を上書き"""
        for env_name, (key, cast) in self.ENV_OVERRIDES.items():
            if env_name not in os.environ:
                continue
            raw = os.environ[env_name]
            try:
                self.set(key, cast(raw))
            except ValueError as e:
                raise ConfigError(
                    f"環境変数 {env_name} の値が不正です: {raw}\n"
                    f"エラー: {e}"
                ) from e

    def get(self, key: str, default: Any = None) -> Any:
        """
        設定値を取得（ドット記法対応）

        Args:
            key: 設定キー（例: "cleaning.suffixes"）
            default: デフォルト値

        Returns:
            設定値
        """
        value: Any = self.config

        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return default if value is None else value

    def set(self, key: str, value: Any) -> None:
        """設定値を上書き（ドット記法対応、中間の辞書は自動生成）"""
        keys = key.split('.')
        node = self.config
        for k in keys[:-1]:
            if not isinstance(node.get(k), dict):
                node[k] = {}
            node = node[k]
        node[keys[-1]] = value
