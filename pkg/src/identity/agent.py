"""
User-Agent シグネチャ抽出モジュール

ブラウザ系統・メジャーバージョン・OS系統をトークン規則で決定的に抽出する。
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

UNKNOWN = "unknown"

# 優先順（先にマッチしたものを採用）
BROWSER_RULES: Tuple[Tuple[str, "re.Pattern"], ...] = tuple(
    (name, re.compile(regex)) for name, regex in (
        ('Edge', r'\b(?:Edge|Edg|EdgA|EdgiOS)/(\d+)?'),
        ('Chrome', r'\b(?:Chrome|CriOS)/(\d+)?'),
        ('Firefox', r'\b(?:Firefox|FxiOS)/(\d+)?'),
        ('Safari', r'\bSafari/(\d+)?'),
        ('MSIE', r'\bMSIE (\d+)?'),
        ('Opera', r'\b(?:Opera|OPR)/(\d+)?'),
    )
)

_TRIDENT_RE = re.compile(r'\bTrident/(\d+)?')
_RV_RE = re.compile(r'\brv:(\d+)')
_FIRST_PRODUCT_RE = re.compile(r'^\s*([A-Za-z][\w.\-]*)(?:/(\d+))?')
_PLATFORM_RE = re.compile(r'\(([^)]*)\)')

OS_RULES: Tuple[Tuple[str, "re.Pattern"], ...] = tuple(
    (name, re.compile(regex)) for name, regex in (
        ('Windows', r'\bWindows\b'),
        ('iOS', r'\b(?:iPhone|iPad|iPod)\b'),
        ('Android', r'\bAndroid\b'),
        ('Mac', r'\b(?:Macintosh|Mac OS)\b'),
        ('Linux', r'\b(?:Linux|X11)\b'),
    )
)


@dataclass(frozen=True)
class AgentSignature:
    """User-Agent の比較キー"""

    browser_family: str = UNKNOWN
    browser_major: Optional[int] = None
    os_family: str = UNKNOWN

    def as_tuple(self) -> Tuple[str, Optional[int], str]:
        return (self.browser_family, self.browser_major, self.os_family)


def _major(text: Optional[str]) -> Optional[int]:
    return int(text) if text else None


def _browser(agent: str) -> Tuple[str, Optional[int]]:
    for name, pattern in BROWSER_RULES:
        match = pattern.search(agent)
        if match:
            return name, _major(match.group(1))

    trident = _TRIDENT_RE.search(agent)
    if trident:
        # IE11以降は "MSIE" を含まず "rv:" にバージョンを持つ
        rv = _RV_RE.search(agent)
        return 'MSIE', _major(rv.group(1) if rv else trident.group(1))

    first = _FIRST_PRODUCT_RE.match(agent)
    if first:
        return first.group(1), _major(first.group(2))

    return UNKNOWN, None


def _os(agent: str) -> str:
    platform = ' '.join(_PLATFORM_RE.findall(agent))
    for name, pattern in OS_RULES:
        if pattern.search(platform):
            return name
    return UNKNOWN


@lru_cache(maxsize=4096)
def agent_signature(user_agent: Optional[str]) -> AgentSignature:
    """
    User-Agent 文字列からシグネチャを抽出

    ブラウザ優先順: Edge > Chrome > Firefox > Safari > MSIE/Trident > Opera > 先頭製品トークン。
    OSは括弧内のプラットフォーム表記から判定（Windows / iOS / Android / Mac / Linux）。

    Args:
        user_agent: User-Agent 文字列（None は欠損）

    Returns:
        AgentSignature（欠損時は全て unknown）
    """
    if user_agent is None or not user_agent.strip():
        return AgentSignature()

    family, major = _browser(user_agent)
    return AgentSignature(browser_family=family, browser_major=major, os_family=_os(user_agent))
