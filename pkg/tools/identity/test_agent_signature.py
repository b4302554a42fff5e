"""User-Agent シグネチャのテスト"""
import pytest

from src.identity import AgentSignature, agent_signature

LABELED_AGENTS = [
    ("Mozilla/5.0 (Windows NT 6.1) AppleWebKit/537.36 Chrome/47.0.2526.106 Safari/537.36",
     ('Chrome', 47, 'Windows')),
    ("Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) "
     "Chrome/120.0.0.0 Safari/537.36 Edg/120.0.2210.91",
     ('Edge', 120, 'Windows')),
    ("Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) "
     "Chrome/70.0.3538.102 Safari/537.36 Edge/18.18362",
     ('Edge', 18, 'Windows')),
    ("Mozilla/5.0 (Windows NT 6.1; WOW64; rv:38.0) Gecko/20100101 Firefox/38.0",
     ('Firefox', 38, 'Windows')),
    ("Mozilla/5.0 (X11; Linux x86_64; rv:31.0) Gecko/20100101 Firefox/31.0",
     ('Firefox', 31, 'Linux')),
    ("Mozilla/5.0 (Android 10; Mobile; rv:68.0) Gecko/68.0 Firefox/68.0",
     ('Firefox', 68, 'Android')),
    ("Mozilla/5.0 (Macintosh; Intel Mac OS X 10_9_5) AppleWebKit/600.1.17 (KHTML, like Gecko) "
     "Version/7.1 Safari/600.1.17",
     ('Safari', 600, 'Mac')),
    ("Mozilla/5.0 (Macintosh; Intel Mac OS X 10_15_7) AppleWebKit/605.1.15 (KHTML, like Gecko) "
     "Version/17.1 Safari/605.1.15",
     ('Safari', 605, 'Mac')),
    ("Mozilla/5.0 (iPhone; CPU iPhone OS 8_1 like Mac OS X) AppleWebKit/600.1.4 (KHTML, like Gecko) "
     "Version/8.0 Mobile/12B411 Safari/600.1.4",
     ('Safari', 600, 'iOS')),
    ("Mozilla/5.0 (Linux; Android 4.4.2; Nexus 5 Build/KOT49H) AppleWebKit/537.36 (KHTML, like Gecko) "
     "Chrome/32.0.1700.99 Mobile Safari/537.36",
     ('Chrome', 32, 'Android')),
    ("Mozilla/5.0 (iPad; CPU OS 9_3 like Mac OS X) AppleWebKit/601.1.46 (KHTML, like Gecko) "
     "CriOS/49.0.2623.109 Mobile/13E238 Safari/601.1.46",
     ('Chrome', 49, 'iOS')),
    ("Mozilla/5.0 (iPhone; CPU iPhone OS 10_3 like Mac OS X) AppleWebKit/603.1.30 (KHTML, like Gecko) "
     "FxiOS/7.5b3349 Mobile/14E304 Safari/603.1.30",
     ('Firefox', 7, 'iOS')),
    ("Mozilla/5.0 (compatible; MSIE 9.0; Windows NT 6.1; Trident/5.0)",
     ('MSIE', 9, 'Windows')),
    ("Mozilla/4.0 (compatible; MSIE 6.0; Windows NT 5.1; SV1)",
     ('MSIE', 6, 'Windows')),
    ("Mozilla/5.0 (Windows NT 6.1; WOW64; Trident/7.0; rv:11.0) like Gecko",
     ('MSIE', 11, 'Windows')),
    ("Opera/9.80 (Windows NT 6.1) Presto/2.12.388 Version/12.16",
     ('Opera', 9, 'Windows')),
    ("Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) "
     "Chrome/58.0.3029.110 Safari/537.36 OPR/45.0.2552.888",
     ('Chrome', 58, 'Windows')),
    ("Mozilla/5.0 (compatible; Googlebot/2.1; +http://www.google.com/bot.html)",
     ('Mozilla', 5, 'unknown')),
    ("curl/7.68.0",
     ('curl', 7, 'unknown')),
    ("Wget/1.20.3 (linux-gnu)",
     ('Wget', 1, 'unknown')),
]


class TestAgentSignature:
    """agent_signature"""

    def test_table_has_twenty_agents(self):
        assert len(LABELED_AGENTS) == 20

    @pytest.mark.parametrize('agent, expected', LABELED_AGENTS)
    def test_labeled_agents(self, agent, expected):
        assert agent_signature(agent).as_tuple() == expected

    @pytest.mark.parametrize('agent', [None, '', '   '])
    def test_absent_agent(self, agent):
        assert agent_signature(agent) == AgentSignature()
        assert agent_signature(agent).as_tuple() == ('unknown', None, 'unknown')

    def test_deterministic(self):
        agent = LABELED_AGENTS[0][0]
        assert agent_signature(agent) == agent_signature(str(agent))

    def test_minor_version_ignored(self):
        a = agent_signature("Mozilla/5.0 (Windows NT 6.1; rv:38.0) Gecko/20100101 Firefox/38.0")
        b = agent_signature("Mozilla/5.0 (Windows NT 6.1; rv:38.1) Gecko/20100101 Firefox/38.1")
        assert a == b

    def test_os_from_platform_only(self):
        # 括弧外の "Windows" は無視
        assert agent_signature("MyBot/1.0 Windows-compatible").os_family == 'unknown'
