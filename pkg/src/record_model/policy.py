"""
クリーニングポリシー定義モジュール
"""
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple

# デフォルト（画像・スタイルシート）
DEFAULT_SUFFIXES = frozenset({'.jpg', '.jpeg', '.gif', '.css'})

# 追加プリセット（デフォルト無効）
EXTENDED_SUFFIXES = DEFAULT_SUFFIXES | frozenset({'.js', '.png', '.ico', '.bmp', '.swf'})

SUFFIX_PRESETS = {
    'default': DEFAULT_SUFFIXES,
    'extended': EXTENDED_SUFFIXES,
}

# 失敗ステータス（2xx/3xx以外）
DEFAULT_FAILED_STATUS_RANGES: Tuple[Tuple[int, int], ...] = ((100, 199), (400, 599))


@dataclass(frozen=True)
class CleaningPolicy:
    """不要レコード判定ポリシー"""

    irrelevant_suffixes: FrozenSet[str] = DEFAULT_SUFFIXES
    remove_failed_status: bool = False
    failed_status_predicate: Tuple[Tuple[int, int], ...] = DEFAULT_FAILED_STATUS_RANGES
    strip_query_before_match: bool = True

    def __post_init__(self):
        normalized = frozenset(s.strip().lower() for s in self.irrelevant_suffixes)
        for suffix in normalized:
            if not suffix.startswith('.') or len(suffix) < 2:
                raise ValueError(f"サフィックスは '.' で始まる必要があります: {suffix!r}")
        object.__setattr__(self, 'irrelevant_suffixes', normalized)

        ranges = tuple((int(lo), int(hi)) for lo, hi in self.failed_status_predicate)
        for lo, hi in ranges:
            if lo > hi:
                raise ValueError(f"ステータス範囲が不正です: [{lo}, {hi}]")
        object.__setattr__(self, 'failed_status_predicate', ranges)

    @classmethod
    def from_options(
        cls,
        suffixes: Optional[Iterable[str]] = None,
        preset: str = 'default',
        remove_failed_status: bool = False,
        failed_status_ranges: Optional[Iterable[Iterable[int]]] = None,
        strip_query_before_match: bool = True
    ) -> "CleaningPolicy":
        """
        設定値からポリシーを生成

        Args:
            suffixes: サフィックス一覧（指定時はプリセットより優先）
            preset: プリセット名（default | extended）
            remove_failed_status: 失敗ステータス除去を有効にするか
            failed_status_ranges: [[lo, hi], ...] 形式のステータス範囲
            strip_query_before_match: 照合前にクエリ文字列を除去するか
        """
        if suffixes is None:
            if preset not in SUFFIX_PRESETS:
                raise ValueError(
                    f"無効なプリセット: {preset}\n"
                    f"有効な値: {', '.join(SUFFIX_PRESETS)}"
                )
            suffix_set = SUFFIX_PRESETS[preset]
        else:
            suffix_set = frozenset(suffixes)

        ranges = DEFAULT_FAILED_STATUS_RANGES
        if failed_status_ranges is not None:
            ranges = tuple(tuple(r) for r in failed_status_ranges)  # type: ignore[misc]
            for r in ranges:
                if len(r) != 2:
                    raise ValueError(f"ステータス範囲は [lo, hi] 形式である必要があります: {list(r)}")

        return cls(
            irrelevant_suffixes=suffix_set,
            remove_failed_status=remove_failed_status,
            failed_status_predicate=ranges,  # type: ignore[arg-type]
            strip_query_before_match=strip_query_before_match,
        )

    @property
    def ordered_suffixes(self) -> Tuple[str, ...]:
        """照合順（長いサフィックス優先、同長はアルファベット順）"""
        return tuple(sorted(self.irrelevant_suffixes, key=lambda s: (-len(s), s)))

    def status_failed(self, status: Optional[int]) -> bool:
        """ステータスが失敗範囲に含まれるか"""
        if status is None:
            return False
        return any(lo <= status <= hi for lo, hi in self.failed_status_predicate)
