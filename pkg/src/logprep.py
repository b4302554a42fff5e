#!/usr/bin/env python3
"""
アクセスログ前処理メインスクリプト

W3C Extended / NCSA Common・Combined / IIS 形式のアクセスログを読み込み、
フィールド抽出 → クリーニング → ユーザー識別 → セッション識別 → パス補完 を実行して
records / users / sessions / assignments の表と統計を出力します。

実行方法:
    python3 src/logprep.py run --input logs/access.log --out output
    python3 src/logprep.py detect --input logs/access.log
    python3 src/logprep.py fixture --records 500 --irrelevant 59 --users 52 --seed 42 --out fixture
    bash ./docker_run.sh python3 src/logprep.py run --input data/access.log
"""
import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.utils.config_manager import ConfigManager
from src.utils.logging_manager import LoggingManager
from src.utils.errors import (
    ConfigError,
    InputFormatError,
    InvariantViolationError,
    LogIOError,
)
from src.parsers import collect_sample, detect_format, open_log
from src.pipeline import FixtureSpec, PipelineConfig, run_pipeline, write_fixture

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INVARIANT = 4
EXIT_INTERRUPTED = 130


def build_parser() -> argparse.ArgumentParser:
    """コマンドライン引数パーサーを構築"""
    parser = argparse.ArgumentParser(
        prog='logprep',
        description='Webアクセスログ前処理パイプライン',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用例:
  logprep run --input access.log --out output
  logprep run --input a.log b.log --identity topology --graph-from-referrers --out output
  logprep detect --input access.log
  logprep fixture --records 500 --irrelevant 59 --users 52 --seed 42 --out fixture
        """
    )
    parser.add_argument('--config', help='設定ファイル（省略時は config/logprep.yaml）')
    parser.add_argument('--log-level', help='ログレベル（DEBUG / INFO / WARNING / ERROR）')
    parser.add_argument('--log-dir', help='ログディレクトリ')

    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='前処理パイプラインを実行')
    run.add_argument('--input', nargs='+', help='入力ログファイル（複数可）')
    run.add_argument('--format', help='入力形式（auto | w3c | ncsa | ncsa-combined | iis）')
    run.add_argument('--suffixes', help='除去するサフィックス（カンマ区切り: .jpg,.gif,...）')
    run.add_argument('--preset', help='サフィックスプリセット（default | extended）')
    run.add_argument('--remove-failed-status', action='store_true', default=None,
                     help='2xx/3xx以外のステータスを除去')
    run.add_argument('--identity', help='ユーザー識別モード（basic | topology）')
    run.add_argument('--graph', help='サイトグラフのエッジリスト（TSV）')
    run.add_argument('--graph-from-referrers', action='store_true', default=None,
                     help='リファラーからサイトグラフを構築')
    run.add_argument('--site-hosts', help='サイト内とみなすホスト（カンマ区切り）')
    run.add_argument('--timeout-min', type=float, help='セッションタイムアウト（分）')
    run.add_argument('--max-page-stay-min', type=float, help='ページ滞在上限（分）')
    run.add_argument('--max-session-min', type=float, help='セッション継続上限（分）')
    run.add_argument('--no-path-completion', action='store_false', dest='path_completion', default=None,
                     help='パス補完を無効化')
    run.add_argument('--iis-offset-min', type=int, help='IISローカル時刻のUTCオフセット（分）')
    run.add_argument('--out', help='出力ディレクトリ')
    run.add_argument('--output-format', help='出力形式（csv | jsonl）')
    run.add_argument('--jobs', type=int, help='並列ファイル数')
    run.add_argument('--backup', action='store_true', default=None, help='既存出力をバックアップ')
    run.add_argument('--progress', action='store_true', default=None, help='プログレスバーを表示')

    detect = sub.add_parser('detect', help='ログ形式を判定')
    detect.add_argument('--input', nargs='+', help='入力ログファイル（複数可）')
    detect.add_argument('--sample-lines', type=int, help='判定に使う先頭行数')

    fixture = sub.add_parser('fixture', help='検証用フィクスチャを生成')
    fixture.add_argument('--records', type=int, help='総レコード数')
    fixture.add_argument('--irrelevant', type=int, help='除去対象レコード数')
    fixture.add_argument('--users', type=int, help='ユーザー数')
    fixture.add_argument('--sessions-mean', type=float, help='ユーザーあたりの平均セッション数')
    fixture.add_argument('--seed', type=int, help='乱数シード')
    fixture.add_argument('--format', help='出力形式（w3c | ncsa | ncsa-combined | iis）')
    fixture.add_argument('--out', help='出力ディレクトリ')

    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """CLIフラグを設定キーに対応付け（未指定は None）"""
    overrides: Dict[str, Any] = {
        'logging.level': args.log_level,
        'logging.log_dir': args.log_dir,
    }
    if args.command == 'run':
        overrides.update({
            'input.paths': args.input,
            'input.format': args.format,
            'cleaning.suffixes': args.suffixes,
            'cleaning.preset': args.preset,
            'cleaning.remove_failed_status': args.remove_failed_status,
            'identity.mode': args.identity,
            'identity.graph_edges': args.graph,
            'identity.graph_from_referrers': args.graph_from_referrers,
            'identity.site_hosts': args.site_hosts,
            'sessions.timeout_minutes': args.timeout_min,
            'sessions.max_page_stay_minutes': args.max_page_stay_min,
            'sessions.max_session_minutes': args.max_session_min,
            'sessions.path_completion': args.path_completion,
            'parsers.iis_offset_minutes': args.iis_offset_min,
            'output.dir': args.out,
            'output.format': args.output_format,
            'pipeline.n_jobs': args.jobs,
            'output.backup.enabled': args.backup,
            'logging.show_progress': args.progress,
        })
    elif args.command == 'detect':
        overrides.update({
            'input.paths': args.input,
            'input.sample_lines': args.sample_lines,
        })
    elif args.command == 'fixture':
        overrides.update({
            'fixture.records': args.records,
            'fixture.irrelevant': args.irrelevant,
            'fixture.users': args.users,
            'fixture.sessions_per_user_mean': args.sessions_mean,
            'fixture.seed': args.seed,
            'fixture.format': args.format,
            'output.dir': args.out,
        })
    return overrides


def command_run(config: ConfigManager, logger: LoggingManager) -> int:
    """run コマンド"""
    cfg = PipelineConfig.from_config(config)
    stats = run_pipeline(cfg, logger=logger)
    logger.info(f"💾 出力先: {cfg.output_dir}")
    logger.info(
        f"📊 {stats.records_parsed:,}件 → {stats.records_after_cleaning:,}件 / "
        f"ユーザー{stats.users_identified:,} / セッション{stats.sessions_identified:,}"
    )
    return EXIT_OK


def command_detect(config: ConfigManager, logger: LoggingManager) -> int:
    """detect コマンド（ファイルごとの判定結果を標準出力へ）"""
    cfg = PipelineConfig.from_config(config)
    cfg.validate(require_inputs=True)

    for path in cfg.inputs:
        if not Path(path).is_file():
            raise FileNotFoundError(f"入力ファイルが見つかりません: {path}")
        with open_log(path) as stream:
            lines = (raw.decode('utf-8', errors='replace') for raw in stream)
            log_format = detect_format(collect_sample(lines, cfg.sample_lines))

        if log_format.field_map:
            print(f"{path}\t{log_format.kind.value}\t{' '.join(log_format.field_map)}")
        else:
            print(f"{path}\t{log_format.kind.value}")
        logger.debug(f"📄 {path}: {log_format.kind.value}")
    return EXIT_OK


def command_fixture(config: ConfigManager, logger: LoggingManager) -> int:
    """fixture コマンド"""
    defaults = FixtureSpec()
    try:
        spec = FixtureSpec(
            n_records=int(config.get('fixture.records', defaults.n_records)),
            n_irrelevant=int(config.get('fixture.irrelevant', defaults.n_irrelevant)),
            n_users=int(config.get('fixture.users', defaults.n_users)),
            sessions_per_user_mean=float(
                config.get('fixture.sessions_per_user_mean', defaults.sessions_per_user_mean)),
            seed=int(config.get('fixture.seed', defaults.seed)),
            format=str(config.get('fixture.format', defaults.format)).lower(),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"fixture 設定が不正です: {e}") from e

    write_fixture(spec, config.get('output.dir', 'fixture'), logger=logger)
    return EXIT_OK


COMMANDS = {
    'run': command_run,
    'detect': command_detect,
    'fixture': command_fixture,
}


def main(argv: Optional[List[str]] = None) -> int:
    """メイン処理"""
    args = build_parser().parse_args(argv)
    logger: Optional[LoggingManager] = None

    try:
        config = ConfigManager(args.config, overrides=collect_overrides(args))

        logger = LoggingManager(
            name=f'logprep_{args.command}',
            log_dir=config.get('logging.log_dir', 'logs'),
            level=config.get('logging.level', 'INFO'),
            timezone_name=config.get('logging.timezone', 'Asia/Tokyo')
        )

        logger.info("=" * 60)
        logger.info(f"🚀 logprep {args.command} 開始")
        logger.info("=" * 60)

        code = COMMANDS[args.command](config, logger)

        logger.info("=" * 60)
        logger.info("🎉 処理完了")
        logger.info("=" * 60)
        return code

    except InvariantViolationError as e:
        print(f"❌ 整合性エラー: {e}", file=sys.stderr)
        return EXIT_INVARIANT

    except LogIOError as e:
        print(f"❌ 入出力エラー: {e}", file=sys.stderr)
        return EXIT_IO

    except InputFormatError as e:
        print(f"❌ 入力形式エラー: {e}", file=sys.stderr)
        return EXIT_IO

    except FileNotFoundError as e:
        print(f"❌ エラー: {e}", file=sys.stderr)
        return EXIT_IO

    except ConfigError as e:
        print(f"❌ 設定エラー: {e}", file=sys.stderr)
        return EXIT_CONFIG

    except OSError as e:
        print(f"❌ 入出力エラー: {e}", file=sys.stderr)
        return EXIT_IO

    except KeyboardInterrupt:
        print("\n⚠️  処理を中断しました", file=sys.stderr)
        return EXIT_INTERRUPTED

    except Exception as e:
        print(f"❌ 予期しないエラー: {e}", file=sys.stderr)
        import traceback
        traceback.print_exc()
        return EXIT_UNEXPECTED

    finally:
        if logger is not None:
            logger.close()


if __name__ == '__main__':
    sys.exit(main())
