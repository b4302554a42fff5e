"""
セッション識別・パス補完モジュール
"""

from .sessionizer import DEFAULT_TIMEOUT, Session, Sessionizer, number_sessions, sessionize
from .path_completion import backtrack_pages, complete_paths

__all__ = [
    'DEFAULT_TIMEOUT',
    'Session',
    'Sessionizer',
    'number_sessions',
    'sessionize',
    'backtrack_pages',
    'complete_paths',
]
