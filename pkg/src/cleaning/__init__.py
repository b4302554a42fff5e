"""
データクリーニングモジュール
"""

from .cleaner import FAILED_STATUS, RecordCleaner, clean, is_irrelevant

__all__ = [
    'FAILED_STATUS',
    'RecordCleaner',
    'clean',
    'is_irrelevant',
]
