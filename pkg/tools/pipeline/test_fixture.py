"""フィクスチャ生成のテスト"""
import json

import pytest

from src.pipeline import FixtureSpec, generate_fixture, write_fixture
from src.utils.errors import FixtureSpecError


class TestFixtureSpec:

    @pytest.mark.parametrize('kwargs', [
        dict(n_records=-1),
        dict(n_records=10, n_irrelevant=11, n_users=1),
        dict(n_records=10, n_irrelevant=5, n_users=6),
        dict(n_records=10, n_irrelevant=0, n_users=0),
        dict(sessions_per_user_mean=0.5),
        dict(format='csv'),
    ])
    def test_infeasible_specs(self, kwargs):
        with pytest.raises(FixtureSpecError):
            generate_fixture(FixtureSpec(**kwargs))

    def test_fixture_error_is_config_error(self):
        with pytest.raises(ValueError):
            FixtureSpec(n_users=1000).validate()

    def test_single_record(self):
        lines, truth = generate_fixture(FixtureSpec(n_records=1, n_irrelevant=0, n_users=1))
        assert len(lines) == 1
        assert truth['records'][0]['user_id'] == 1
        assert truth['summary']['sessions'] == 1

    def test_empty_fixture(self):
        lines, truth = generate_fixture(FixtureSpec(n_records=0, n_irrelevant=0, n_users=0))
        assert lines == []
        assert truth['summary']['kept'] == 0

    def test_resources_only(self):
        lines, truth = generate_fixture(FixtureSpec(n_records=5, n_irrelevant=5, n_users=0))
        assert len(lines) == 5
        assert all(row['removed'] and row['user_id'] is None for row in truth['records'])
        assert all(row['reason'].startswith('SUFFIX:') for row in truth['records'])
        assert truth['summary'] == {'records': 5, 'irrelevant': 5, 'kept': 0, 'users': 0, 'sessions': 0}


class TestGenerateFixture:

    def test_default_counts(self):
        lines, truth = generate_fixture(FixtureSpec())
        assert len(lines) == 500
        rows = truth['records']
        assert len(rows) == 500
        assert sum(r['removed'] for r in rows) == 59
        assert len({r['user_id'] for r in rows if not r['removed']}) == 52
        summary = truth['summary']
        assert (summary['records'], summary['irrelevant'], summary['kept'], summary['users']) == (500, 59, 441, 52)
        assert truth['summary']['sessions'] >= 52

    def test_ids_are_dense_and_ordered(self):
        _, truth = generate_fixture(FixtureSpec())
        kept = [r for r in truth['records'] if not r['removed']]
        first_seen = []
        for row in kept:
            if row['user_id'] not in first_seen:
                first_seen.append(row['user_id'])
        assert first_seen == list(range(1, 53))
        sessions = {r['session_id'] for r in kept}
        assert sessions == set(range(1, len(sessions) + 1))

    def test_removed_rows_have_suffix_reason(self):
        _, truth = generate_fixture(FixtureSpec())
        for row in truth['records']:
            if row['removed']:
                assert row['reason'].startswith('SUFFIX:')
                assert row['uri'].endswith(row['reason'].split(':', 1)[1])
                assert row['user_id'] is None and row['session_id'] is None
            else:
                assert row['reason'] is None

    def test_same_seed_same_output(self):
        assert generate_fixture(FixtureSpec()) == generate_fixture(FixtureSpec())

    def test_seed_changes_output(self):
        assert generate_fixture(FixtureSpec(seed=1))[0] != generate_fixture(FixtureSpec(seed=2))[0]

    def test_w3c_has_header(self):
        lines, truth = generate_fixture(FixtureSpec(n_records=20, n_irrelevant=5, n_users=3, format='w3c'))
        assert lines[0].startswith('#')
        assert any(line.startswith('#Fields:') for line in lines)
        assert truth['records'][0]['line_no'] > 1


class TestWriteFixture:

    def test_writes_log_and_truth(self, tmp_path, silent_logger):
        log_path, truth_path = write_fixture(FixtureSpec(), tmp_path / 'fx', logger=silent_logger)
        assert log_path.read_text(encoding='utf-8').count('\n') == 500
        truth = json.loads(truth_path.read_text(encoding='utf-8'))
        assert truth['spec']['seed'] == 42

    def test_byte_identical(self, tmp_path):
        a, _ = write_fixture(FixtureSpec(), tmp_path / 'a')
        b, _ = write_fixture(FixtureSpec(), tmp_path / 'b')
        assert a.read_bytes() == b.read_bytes()
