"""
ユーザー識別モジュール
"""

from .agent import AgentSignature, agent_signature
from .site_graph import (
    SiteGraph,
    build_site_graph,
    canonical_page,
    derive_from_records,
    load_edge_list,
    referrer_page,
)
from .identifier import IdentityMode, UserAssignment, identify_users, user_index

__all__ = [
    'AgentSignature',
    'agent_signature',
    'SiteGraph',
    'build_site_graph',
    'canonical_page',
    'derive_from_records',
    'load_edge_list',
    'referrer_page',
    'IdentityMode',
    'UserAssignment',
    'identify_users',
    'user_index',
]
