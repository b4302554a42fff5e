"""
サイトグラフモジュール

ページ間リンクの有向グラフ。トポロジー規則によるユーザー識別とパス補完で使用。
"""

from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union
from urllib.parse import urlsplit

import networkx as nx

from src.record_model import LogRecord
from src.utils.errors import MalformedEdgeLineError


def canonical_page(uri: str) -> str:
    """
    ページURIの正規化（スキーム・ホスト・クエリ・フラグメントを除去し小文字化）

    Examples:
        "/Website/Index.htm?x=1" → "/website/index.htm"
        "http://Example.com/A" → "/a"
    """
    parts = urlsplit(uri)
    if parts.scheme or parts.netloc:
        path = parts.path
    else:
        path = uri.split('?', 1)[0].split('#', 1)[0]
    return (path or '/').lower()


def referrer_page(referrer: Optional[str], site_hosts: Sequence[str] = ()) -> Optional[str]:
    """
    サイト内リファラーを正規化ページに変換

    Args:
        referrer: リファラー（None は欠損）
        site_hosts: サイト内とみなすホスト名（空の場合は全ホストをサイト内扱い）

    Returns:
        正規化ページ（欠損・サイト外の場合は None）
    """
    if referrer is None or not referrer.strip():
        return None

    parts = urlsplit(referrer.strip())
    if parts.netloc and site_hosts:
        host = (parts.hostname or '').lower()
        if host not in {h.lower() for h in site_hosts}:
            return None
    return canonical_page(referrer.strip())


class SiteGraph:
    """networkx.DiGraph を保持するサイトグラフ"""

    def __init__(self, graph: Optional[nx.DiGraph] = None, entry_pages: Iterable[str] = ()):
        self.graph = graph if graph is not None else nx.DiGraph()
        self.entry_pages: FrozenSet[str] = frozenset(entry_pages)
        self.graph.add_nodes_from(self.entry_pages)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[str, str]],
        entry_pages: Optional[Iterable[str]] = None
    ) -> "SiteGraph":
        """
        エッジ列から構築

        ノード・入口ページとも canonical_page で正規化する（参照側と同じ規則）。
        entry_pages 未指定時は入次数0のノードを入口ページとする。
        """
        graph = nx.DiGraph()
        graph.add_edges_from((canonical_page(s), canonical_page(t)) for s, t in edges)
        if entry_pages is None:
            entry_pages = [n for n in graph.nodes if graph.in_degree(n) == 0]
        else:
            entry_pages = [canonical_page(p) for p in entry_pages]
        return cls(graph, entry_pages)

    @property
    def nodes(self) -> FrozenSet[str]:
        return frozenset(self.graph.nodes)

    @property
    def edges(self) -> Set[Tuple[str, str]]:
        return set(self.graph.edges)

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def has_edge(self, source: str, target: str) -> bool:
        return self.graph.has_edge(source, target)

    def linked_from(self, pages: Iterable[str], target: str) -> bool:
        """pages のいずれかから target への直接リンクがあるか"""
        if target not in self.graph:
            return False
        visited = pages if isinstance(pages, (set, frozenset)) else set(pages)
        return any(pred in visited for pred in self.graph.predecessors(target))

    def shortest_path(self, source: str, target: str) -> Optional[List[str]]:
        """最短経路（両端を含む）。経路がない場合は None"""
        if source not in self.graph or target not in self.graph:
            return None
        try:
            return nx.shortest_path(self.graph, source, target)
        except nx.NetworkXNoPath:
            return None


def load_edge_list(path: Union[str, Path]) -> SiteGraph:
    """
    タブ区切りエッジリストを読み込む（両端は canonical_page で正規化）

    Raises:
        FileNotFoundError: ファイルが存在しない場合
        MalformedEdgeLineError: 2列のタブ区切りでない行がある場合
    """
    edges: List[Tuple[str, str]] = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_no, line in enumerate(f, start=1):
            text = line.rstrip('\r\n')
            if not text.strip():
                continue
            parts = [p.strip() for p in text.split('\t')]
            if len(parts) != 2 or not all(parts):
                raise MalformedEdgeLineError(
                    f"エッジリストの形式が不正です（{path}:{line_no}行目）: {text!r}",
                    line_no=line_no
                )
            edges.append((parts[0], parts[1]))
    return SiteGraph.from_edges(edges)


def derive_from_records(records: Iterable[LogRecord], site_hosts: Sequence[str] = ()) -> SiteGraph:
    """
    リファラーからグラフを導出

    サイト内リファラーを持つレコードごとに referrer→uri のエッジを追加し、
    リファラー欠損・サイト外のページを入口ページとする。
    """
    graph = nx.DiGraph()
    entry: Set[str] = set()
    for record in records:
        page = canonical_page(record.uri)
        source = referrer_page(record.referrer, site_hosts)
        if source is None:
            entry.add(page)
            graph.add_node(page)
        else:
            graph.add_edge(source, page)
    return SiteGraph(graph, entry)


def build_site_graph(
    edge_file: Optional[Union[str, Path]] = None,
    records: Optional[Iterable[LogRecord]] = None,
    site_hosts: Sequence[str] = ()
) -> SiteGraph:
    """
    サイトグラフを構築（エッジリストファイル優先、なければリファラーから導出）

    どちらも指定されない場合は空グラフを返す。
    """
    if edge_file is not None:
        return load_edge_list(edge_file)
    if records is not None:
        return derive_from_records(records, site_hosts)
    return SiteGraph()
