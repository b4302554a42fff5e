"""
ユーザー識別モジュール

- BASIC: (IP, エージェントシグネチャ) の組ごとに1ユーザー
- TOPOLOGY: 同一組の中で、訪問済みページから直接リンクのないページへのアクセスを
  別ユーザーとみなして分割する
"""

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from src.record_model import LogRecord, RecordKey, record_key
from src.utils.errors import MissingGraphError

from .agent import AgentSignature, agent_signature
from .site_graph import SiteGraph, canonical_page


class IdentityMode(str, Enum):
    """ユーザー識別モード"""

    BASIC = "BASIC"
    TOPOLOGY = "TOPOLOGY"

    @classmethod
    def from_cli(cls, name: str) -> "IdentityMode":
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"無効な識別モード: {name}（basic | topology）") from None


@dataclass(frozen=True)
class UserAssignment:
    """識別されたユーザー"""

    user_id: int
    ip: str
    signature: AgentSignature
    record_refs: Tuple[RecordKey, ...]
    first_seen: datetime
    last_seen: datetime

    @property
    def record_count(self) -> int:
        return len(self.record_refs)


class _Candidate:
    """TOPOLOGY走査中の候補ユーザー"""

    __slots__ = ('positions', 'visited')

    def __init__(self):
        self.positions: List[int] = []
        self.visited = set()

    def accepts(self, page: str, graph: SiteGraph) -> bool:
        if not self.visited:
            return page in graph.entry_pages
        return page in self.visited or graph.linked_from(self.visited, page)


def _split_by_topology(
    positions: Sequence[int],
    records: Sequence[LogRecord],
    graph: SiteGraph
) -> List[List[int]]:
    """1つの (ip, signature) 組を時刻順に走査し、候補ユーザーに振り分ける"""
    ordered = sorted(positions, key=lambda i: (records[i].timestamp, record_key(records[i])))
    candidates: List[_Candidate] = []
    for i in ordered:
        page = canonical_page(records[i].uri)
        # 複数候補が受理可能な場合は最も早く作られた候補を採用
        chosen = next((c for c in candidates if c.accepts(page, graph)), None)
        if chosen is None:
            chosen = _Candidate()
            candidates.append(chosen)
        chosen.positions.append(i)
        chosen.visited.add(page)
    return [sorted(c.positions) for c in candidates]


def identify_users(
    records: Sequence[LogRecord],
    mode: IdentityMode = IdentityMode.BASIC,
    graph: Optional[SiteGraph] = None
) -> List[UserAssignment]:
    """
    レコードをユーザーに割り当てる

    user_id は入力順での初出順に1から連番。

    Args:
        records: クリーニング済みレコード（record_key順）
        mode: BASIC / TOPOLOGY
        graph: TOPOLOGYモードで必須のサイトグラフ

    Returns:
        UserAssignment のリスト（user_id順）

    Raises:
        MissingGraphError: TOPOLOGYモードでグラフ未指定の場合
    """
    if mode is IdentityMode.TOPOLOGY and graph is None:
        raise MissingGraphError("TOPOLOGYモードにはサイトグラフが必要です（--graph / --graph-from-referrers）")

    groups: Dict[Tuple[str, AgentSignature], List[int]] = {}
    for i, record in enumerate(records):
        key = (record.ip, agent_signature(record.user_agent))
        groups.setdefault(key, []).append(i)

    partitions: List[Tuple[str, AgentSignature, List[int]]] = []
    for (ip, signature), positions in groups.items():
        if mode is IdentityMode.TOPOLOGY:
            for part in _split_by_topology(positions, records, graph):
                partitions.append((ip, signature, part))
        else:
            partitions.append((ip, signature, positions))

    partitions.sort(key=lambda p: p[2][0])

    users = []
    for user_id, (ip, signature, positions) in enumerate(partitions, start=1):
        stamps = [records[i].timestamp for i in positions]
        users.append(UserAssignment(
            user_id=user_id,
            ip=ip,
            signature=signature,
            record_refs=tuple(record_key(records[i]) for i in positions),
            first_seen=min(stamps),
            last_seen=max(stamps),
        ))
    return users


def user_index(users: Sequence[UserAssignment]) -> Dict[RecordKey, int]:
    """レコードキー → user_id の対応表"""
    return {ref: user.user_id for user in users for ref in user.record_refs}
