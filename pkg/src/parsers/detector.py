"""
ログ形式自動判定モジュール
"""

from typing import Iterable, List

from src.record_model import FormatKind, LogFormat
from src.utils.errors import EmptyInputError

from .ncsa import NCSA_LINE_RE
from .w3c import parse_w3c_directives

# IIS判定に必要な最小カンマ区切り列数
IIS_MIN_FIELDS = 10


def collect_sample(lines: Iterable[str], n: int = 25) -> List[str]:
    """先頭から空行以外の行を最大 n 行収集"""
    if n < 1:
        raise ValueError(f"サンプル行数は1以上である必要があります: {n}")
    sample: List[str] = []
    for line in lines:
        text = line.rstrip('\r\n')
        if not text.strip():
            continue
        sample.append(text)
        if len(sample) >= n:
            break
    return sample


def detect_format(sample: Iterable[str]) -> LogFormat:
    """
    サンプル行からログ形式を判定

    判定順:
        1. "#" で始まる行がある → W3C_EXTENDED（フィールドマップ付き）
        2. 先頭データ行がカンマで10列以上 → IIS
        3. 末尾に引用符付き2列を持つNCSA行がある → NCSA_COMBINED
        4. それ以外 → NCSA_COMMON

    Args:
        sample: 先頭の空行以外の行

    Returns:
        判定したLogFormat

    Raises:
        EmptyInputError: 空行以外の行が存在しない場合
        MissingFieldsDirectiveError: W3Cで `#Fields:` より前にデータ行がある場合
    """
    lines = [line.rstrip('\r\n') for line in sample if line.strip()]
    if not lines:
        raise EmptyInputError("空行以外の行が存在しません")

    if any(line.lstrip().startswith('#') for line in lines):
        return LogFormat(FormatKind.W3C_EXTENDED, parse_w3c_directives(lines))

    if len(lines[0].split(',')) >= IIS_MIN_FIELDS:
        return LogFormat(FormatKind.IIS)

    for line in lines:
        match = NCSA_LINE_RE.match(line.strip())
        if match and match.group('agent') is not None:
            return LogFormat(FormatKind.NCSA_COMBINED)

    return LogFormat(FormatKind.NCSA_COMMON)
