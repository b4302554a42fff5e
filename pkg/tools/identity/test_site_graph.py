"""サイトグラフのテスト"""
import pytest

from src.identity import (
    SiteGraph,
    build_site_graph,
    canonical_page,
    derive_from_records,
    load_edge_list,
    referrer_page,
)
from src.utils.errors import MalformedEdgeLineError


class TestCanonicalPage:
    """ページ正規化"""

    @pytest.mark.parametrize('uri, expected', [
        ('/Website/Index.htm?x=1', '/website/index.htm'),
        ('http://Example.com/A', '/a'),
        ('https://example.com', '/'),
        ('/a#top', '/a'),
        ('', '/'),
    ])
    def test_canonical_page(self, uri, expected):
        assert canonical_page(uri) == expected


class TestReferrerPage:
    """リファラー正規化"""

    def test_absent(self):
        assert referrer_page(None) is None
        assert referrer_page('  ') is None

    def test_relative_referrer(self):
        assert referrer_page('/Website/') == '/website/'

    def test_any_host_is_on_site_without_site_hosts(self):
        assert referrer_page('http://other.org/x.htm') == '/x.htm'

    def test_off_site_host(self):
        hosts = ('www.example.com',)
        assert referrer_page('http://other.org/x.htm', hosts) is None
        assert referrer_page('http://WWW.example.com/Y.htm?q=1', hosts) == '/y.htm'


class TestEdgeList:
    """エッジリスト読み込み"""

    def test_entries_are_canonicalized(self, tmp_path):
        path = tmp_path / "edges.tsv"
        path.write_text("A\tB\nA\tC\n", encoding='utf-8')
        graph = load_edge_list(path)
        assert graph.nodes == frozenset({'a', 'b', 'c'})
        assert graph.edges == {('a', 'b'), ('a', 'c')}
        assert graph.entry_pages == frozenset({'a'})

    def test_mixed_case_urls_match_visited_pages(self, tmp_path):
        path = tmp_path / "edges.tsv"
        path.write_text(
            "/Website/\t/Website/About.htm\nhttp://Example.com/Website/About.htm?x=1\t/Website/Contact.htm\n",
            encoding='utf-8'
        )
        graph = load_edge_list(path)
        assert graph.nodes == frozenset({'/website/', '/website/about.htm', '/website/contact.htm'})
        assert graph.entry_pages == frozenset({'/website/'})
        assert graph.has_edge(canonical_page('/Website/About.htm'), canonical_page('/WEBSITE/contact.htm'))

    def test_explicit_entry_pages_are_canonicalized(self):
        graph = SiteGraph.from_edges([('/Home', '/Mid')], entry_pages=['/Home?ref=1'])
        assert graph.entry_pages == frozenset({'/home'})

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "edges.tsv"
        path.write_text("\n/a\t/b\n\n", encoding='utf-8')
        assert len(load_edge_list(path)) == 2

    @pytest.mark.parametrize('content, line_no', [
        ("/a\t/b\n/a /c\n", 2),
        ("/a\t/b\t/c\n", 1),
        ("/a\t\n", 1),
    ])
    def test_malformed_line(self, tmp_path, content, line_no):
        path = tmp_path / "edges.tsv"
        path.write_text(content, encoding='utf-8')
        with pytest.raises(MalformedEdgeLineError) as exc_info:
            load_edge_list(path)
        assert exc_info.value.line_no == line_no

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_edge_list(tmp_path / "none.tsv")


class TestDeriveFromRecords:
    """リファラーからの導出"""

    def test_derivation(self, make_record):
        records = [
            make_record(line_no=1, uri='/home'),
            make_record(line_no=2, uri='/p1', referrer='/home'),
        ]
        graph = derive_from_records(records)
        assert graph.entry_pages == frozenset({'/home'})
        assert graph.edges == {('/home', '/p1')}

    def test_off_site_referrer_marks_entry(self, make_record):
        records = [make_record(uri='/landing', referrer='http://search.example.org/?q=x')]
        graph = derive_from_records(records, site_hosts=('www.example.com',))
        assert graph.entry_pages == frozenset({'/landing'})
        assert graph.edges == set()

    def test_build_site_graph_sources(self, tmp_path, make_record):
        assert len(build_site_graph()) == 0
        records = [make_record(uri='/a')]
        assert build_site_graph(records=records).nodes == frozenset({'/a'})
        path = tmp_path / "edges.tsv"
        path.write_text("/x\t/y\n", encoding='utf-8')
        assert build_site_graph(edge_file=path, records=records).nodes == frozenset({'/x', '/y'})


class TestSiteGraph:
    """SiteGraph 操作"""

    GRAPH = SiteGraph.from_edges([('/a', '/b'), ('/b', '/c'), ('/a', '/d')])

    def test_linked_from(self):
        assert self.GRAPH.linked_from({'/a'}, '/b')
        assert not self.GRAPH.linked_from(['/a'], '/c')
        assert not self.GRAPH.linked_from({'/a'}, '/unknown')

    def test_shortest_path(self):
        assert self.GRAPH.shortest_path('/a', '/c') == ['/a', '/b', '/c']
        assert self.GRAPH.shortest_path('/c', '/a') is None
        assert self.GRAPH.shortest_path('/a', '/zzz') is None

    def test_entry_pages_are_nodes(self):
        graph = SiteGraph(entry_pages=['/start'])
        assert '/start' in graph.nodes
