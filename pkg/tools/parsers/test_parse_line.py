"""形式別パーサー・形式判定のテスト"""
from datetime import datetime, timezone

import pytest

from src.parsers import (
    IIS_FIELD_ORDER,
    IISLogParser,
    NCSALogParser,
    W3CLogParser,
    collect_sample,
    detect_format,
    parse_line,
    parse_w3c_directives,
)
from src.parsers.iis import validate_field_order
from src.parsers.ncsa import split_request
from src.record_model import FormatKind, LogFormat, SkipReason
from src.utils.errors import EmptyInputError, MissingFieldsDirectiveError

W3C_FIELDS = ('date', 'time', 'cs-method', 'cs-uri-stem', 'c-ip', 'cs-version', 'sc-status')
W3C_FORMAT = LogFormat(FormatKind.W3C_EXTENDED, W3C_FIELDS)
NCSA_LINE = '::1 - - [19/Jan/2012:10:00:30 +0530] "GET /Website/ HTTP/1.1" 200 1107'
IIS_LINE = ('192.168.1.5, -, 01/09/2012, 03:56:27, W3SVC1, SRV1, 10.0.0.1, 150, 210, 3401, '
            '200, 0, GET, /home.htm, -,')
COMBINED_LINE = (
    '10.1.2.3 - - [19/Jan/2012:10:00:30 +0530] "GET /Website/about.htm HTTP/1.1" 200 512 '
    '"/Website/" "Mozilla/5.0 (Windows NT 6.1; rv:38.0) Gecko/20100101 Firefox/38.0"'
)


class TestW3CParser:
    """W3C拡張形式"""

    def test_sample_line(self):
        outcome = parse_line('2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1 301', W3C_FORMAT)
        record = outcome.record
        assert record.timestamp == datetime(2012, 1, 9, 3, 56, 27, tzinfo=timezone.utc)
        assert record.offset_minutes == 0
        assert (record.method, record.uri, record.ip) == ('GET', '/Website/', '::1')
        assert (record.protocol, record.status) == ('HTTP/1.1', 301)
        assert record.user_agent is None

    def test_query_and_agent(self):
        fields = ('date', 'time', 'c-ip', 'cs-uri-stem', 'cs-uri-query', 'cs(User-Agent)')
        fmt = LogFormat(FormatKind.W3C_EXTENDED, fields)
        record = parse_line(
            '2012-01-09 03:56:27 1.2.3.4 /a.aspx id=3 Mozilla/5.0+(Windows+NT+6.1)', fmt
        ).record
        assert record.uri == '/a.aspx?id=3'
        assert record.user_agent == 'Mozilla/5.0 (Windows NT 6.1)'
        assert record.method == 'UNKNOWN'

    def test_unknown_tokens_kept_as_extras(self):
        fields = ('date', 'time', 'c-ip', 'cs-uri-stem', 'x-forwarded-for')
        fmt = LogFormat(FormatKind.W3C_EXTENDED, fields)
        record = parse_line('2012-01-09 03:56:27 1.2.3.4 /a.htm 8.8.8.8', fmt).record
        assert record.extras == (('x-forwarded-for', '8.8.8.8'),)

    def test_field_count_mismatch(self):
        outcome = parse_line('2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1', W3C_FORMAT)
        assert outcome.skip.reason is SkipReason.MALFORMED_FIELD_COUNT

    @pytest.mark.parametrize('date_text, time_text', [
        ('2012-13-09', '3:56:27'),
        ('2012/01/09', '3:56:27'),
        ('2012-01-09', '25:00:00'),
    ])
    def test_bad_timestamp(self, date_text, time_text):
        outcome = parse_line(f'{date_text} {time_text} GET /Website/ ::1 HTTP/1.1 301', W3C_FORMAT)
        assert outcome.skip.reason is SkipReason.MALFORMED_TIMESTAMP

    def test_bad_status(self):
        outcome = parse_line('2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1 abc', W3C_FORMAT)
        assert outcome.skip.reason is SkipReason.MALFORMED_STATUS

    def test_later_fields_directive_replaces_map(self):
        parser = W3CLogParser()
        assert parser.parse_line('#Fields: date time c-ip cs-uri-stem', 1).skip.reason is SkipReason.DIRECTIVE
        assert parser.parse_line('2012-01-09 03:56:27 1.1.1.1 /a.htm', 2).ok
        parser.parse_line('#Fields: date time cs-uri-stem', 3)
        record = parser.parse_line('2012-01-09 03:56:28 /b.htm', 4).record
        assert record.uri == '/b.htm'
        assert record.ip == 'unknown'

    def test_date_directive_supplies_missing_date(self):
        parser = W3CLogParser()
        parser.parse_line('#Date: 2012-02-05 06:57:20', 1)
        parser.parse_line('#Fields: time c-ip cs-uri-stem', 2)
        record = parser.parse_line('06:57:21 1.1.1.1 /a.htm', 3).record
        assert record.timestamp == datetime(2012, 2, 5, 6, 57, 21, tzinfo=timezone.utc)

    def test_data_before_fields_directive_aborts(self):
        parser = W3CLogParser()
        parser.parse_line('#Version: 1.0', 1)
        with pytest.raises(MissingFieldsDirectiveError) as exc_info:
            parser.parse_line('2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1 301', 2)
        assert exc_info.value.line_no == 2


class TestW3CDirectives:
    """ディレクティブ解析"""

    def test_fields_directive(self):
        header = [
            '#Software: Microsoft Internet Information Services 7.5',
            '#Version: 1.0',
            '#Fields: date time cs-method cs-uri-stem c-ip cs-version sc-status',
        ]
        assert parse_w3c_directives(header) == W3C_FIELDS

    def test_version_only_then_data(self):
        with pytest.raises(MissingFieldsDirectiveError):
            parse_w3c_directives(['#Version: 1.0', '2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1 301'])

    def test_no_fields_directive(self):
        with pytest.raises(MissingFieldsDirectiveError):
            parse_w3c_directives(['#Version: 1.0'])

    def test_second_directive_wins(self):
        header = ['#Fields: date time c-ip', 'x y z', '#Fields: date time cs-uri-stem']
        assert parse_w3c_directives(header) == ('date', 'time', 'cs-uri-stem')


class TestNCSAParser:
    """NCSA Common / Combined"""

    def test_sample_line(self):
        record = parse_line(NCSA_LINE, LogFormat(FormatKind.NCSA_COMMON)).record
        assert record.ip == '::1'
        assert record.timestamp == datetime(2012, 1, 19, 4, 30, 30, tzinfo=timezone.utc)
        assert record.offset_minutes == 330
        assert (record.method, record.uri, record.protocol) == ('GET', '/Website/', 'HTTP/1.1')
        assert (record.status, record.bytes_sent) == (200, 1107)
        assert record.username is None
        assert record.user_agent is None

    def test_collapsed_ident_spelling(self):
        line = '::1 -- [19/Jan/2012:10:00:30 +0530] "GET /Website/ HTTP/1.1" 200 1107'
        record = NCSALogParser().parse_line(line).record
        assert record.uri == '/Website/'
        assert record.username is None

    def test_combined_line(self):
        record = NCSALogParser(combined=True).parse_line(COMBINED_LINE).record
        assert record.referrer == '/Website/'
        assert record.user_agent.startswith('Mozilla/5.0 (Windows NT 6.1')

    def test_common_parser_accepts_combined_tail(self):
        record = NCSALogParser().parse_line(COMBINED_LINE).record
        assert record.user_agent is not None

    def test_escaped_quotes_in_agent(self):
        line = ('1.1.1.1 - - [19/Jan/2012:10:00:30 -0800] "GET / HTTP/1.0" 200 5 '
                '"-" "say \\"hi\\""')
        record = NCSALogParser(combined=True).parse_line(line).record
        assert record.user_agent == 'say "hi"'
        assert record.referrer is None
        assert record.offset_minutes == -480

    def test_authuser_and_dash_bytes(self):
        line = '192.168.1.9 - alice [19/Jan/2012:10:05:00 +0530] "POST /login HTTP/1.1" 302 -'
        record = NCSALogParser().parse_line(line).record
        assert record.username == 'alice'
        assert record.bytes_sent is None
        assert record.method == 'POST'

    @pytest.mark.parametrize('line, reason', [
        ('::1 - - [19/Foo/2012:10:00:30 +0530] "GET / HTTP/1.1" 200 1', SkipReason.MALFORMED_TIMESTAMP),
        ('::1 - - [19/Jan/2012:10:00:30] "GET / HTTP/1.1" 200 1', SkipReason.MALFORMED_TIMESTAMP),
        ('::1 - - [31/Feb/2012:10:00:30 +0530] "GET / HTTP/1.1" 200 1', SkipReason.MALFORMED_TIMESTAMP),
        ('::1 - - [19/Jan/2012:10:00:30 +0530] "GET" 200 1', SkipReason.MALFORMED_REQUEST),
        ('::1 - - [19/Jan/2012:10:00:30 +0530] "GET / HTTP/1.1" 999 1', SkipReason.MALFORMED_STATUS),
        ('::1 - - [19/Jan/2012:10:00:30 +0530] "GET / HTTP/1.1" 200 abc', SkipReason.MALFORMED_NUMBER),
        ('::1 - - 19/Jan/2012:10:00:30 +0530 GET / 200 1', SkipReason.MALFORMED_FIELD_COUNT),
    ])
    def test_malformed_lines(self, line, reason):
        assert NCSALogParser().parse_line(line).skip.reason is reason

    def test_split_request_with_space_in_uri(self):
        assert split_request('GET /a b.htm HTTP/1.1') == ('GET', '/a b.htm', 'HTTP/1.1')
        assert split_request('get /a') == ('GET', '/a', None)


class TestIISParser:
    """IIS形式"""

    def test_sample_line(self):
        record = IISLogParser().parse_line(IIS_LINE).record
        assert record.ip == '192.168.1.5'
        assert record.username is None
        assert record.timestamp == datetime(2012, 1, 9, 3, 56, 27, tzinfo=timezone.utc)
        assert (record.time_taken_ms, record.bytes_received, record.bytes_sent) == (150, 210, 3401)
        assert (record.status, record.windows_status) == (200, 0)
        assert (record.method, record.uri) == ('GET', '/home.htm')
        assert (record.service_name, record.server_name, record.server_ip) == ('W3SVC1', 'SRV1', '10.0.0.1')

    def test_offset_applied(self):
        record = IISLogParser(offset_minutes=-300).parse_line(IIS_LINE).record
        assert record.timestamp == datetime(2012, 1, 9, 8, 56, 27, tzinfo=timezone.utc)
        assert record.offset_minutes == -300

    def test_without_trailing_comma(self):
        assert IISLogParser().parse_line(IIS_LINE.rstrip(',')).ok

    def test_parameters_join_uri(self):
        line = IIS_LINE.replace('/home.htm, -,', '/search.aspx, q=logs,')
        assert IISLogParser().parse_line(line).record.uri == '/search.aspx?q=logs'

    def test_field_count(self):
        outcome = IISLogParser().parse_line('192.168.1.5, -, 01/09/2012, 03:56:27, W3SVC1')
        assert outcome.skip.reason is SkipReason.MALFORMED_FIELD_COUNT

    def test_custom_field_order(self):
        order = ('date', 'time') + tuple(f for f in IIS_FIELD_ORDER if f not in ('date', 'time'))
        line = ('01/09/2012, 03:56:27, 192.168.1.5, -, W3SVC1, SRV1, 10.0.0.1, 150, 210, 3401, '
                '200, 0, GET, /home.htm, -,')
        record = IISLogParser(field_order=order).parse_line(line).record
        assert record.ip == '192.168.1.5'

    def test_invalid_field_order(self):
        with pytest.raises(ValueError):
            validate_field_order(IIS_FIELD_ORDER[:-1])
        with pytest.raises(ValueError):
            IISLogParser(field_order=IIS_FIELD_ORDER[:-1] + ('client_ip',))


class TestCommonBehaviour:
    """全形式共通"""

    @pytest.mark.parametrize('fmt', [
        W3C_FORMAT, LogFormat(FormatKind.NCSA_COMMON), LogFormat(FormatKind.IIS),
    ])
    def test_blank_line(self, fmt):
        assert parse_line('   \r\n', fmt).skip.reason is SkipReason.BLANK

    def test_crlf_line_ending(self):
        assert parse_line(NCSA_LINE + '\r\n', LogFormat(FormatKind.NCSA_COMMON)).record.bytes_sent == 1107

    def test_pure(self):
        fmt = LogFormat(FormatKind.NCSA_COMMON)
        assert parse_line(NCSA_LINE, fmt, line_no=5) == parse_line(NCSA_LINE, fmt, line_no=5)

    def test_line_number_and_source(self):
        record = parse_line(NCSA_LINE, LogFormat(FormatKind.NCSA_COMMON), line_no=9, source_file='x.log').record
        assert (record.line_no, record.source_file) == (9, 'x.log')


class TestDetectFormat:
    """形式自動判定"""

    def test_w3c(self):
        sample = ['#Software: Microsoft Internet Information Services 7.5', '#Version: 1.0',
                  '#Fields: ' + ' '.join(W3C_FIELDS), '2012-01-09 3:56:27 GET /Website/ ::1 HTTP/1.1 301']
        assert detect_format(sample) == W3C_FORMAT

    def test_ncsa_common(self):
        assert detect_format([NCSA_LINE]).kind is FormatKind.NCSA_COMMON

    def test_ncsa_combined(self):
        assert detect_format([NCSA_LINE, COMBINED_LINE]).kind is FormatKind.NCSA_COMBINED

    def test_iis(self):
        assert detect_format([IIS_LINE]).kind is FormatKind.IIS

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            detect_format(['', '  '])

    def test_collect_sample_skips_blank_lines(self):
        lines = ['\n', 'a\n', '\r\n', 'b\n', 'c\n']
        assert collect_sample(lines, n=2) == ['a', 'b']

    def test_deterministic(self):
        sample = [NCSA_LINE, COMBINED_LINE, IIS_LINE]
        assert detect_format(sample) == detect_format(list(sample))
