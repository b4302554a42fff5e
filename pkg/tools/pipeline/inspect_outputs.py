#!/usr/bin/env python3
"""前処理出力確認ツール"""

import argparse
import json
import sys
from pathlib import Path

project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.pipeline import read_table


def _table(output_dir: Path, name: str):
    for suffix in ('csv', 'jsonl'):
        path = output_dir / f"{name}.{suffix}"
        if path.exists():
            return read_table(path)
    return None


def main():
    """メイン処理"""
    parser = argparse.ArgumentParser(description='前処理出力ディレクトリの内容を要約')
    parser.add_argument('output_dir', nargs='?', default='output', help='出力ディレクトリ')
    parser.add_argument('--top', type=int, default=5, help='表示する上位ページ数')
    args = parser.parse_args()

    output_dir = Path(args.output_dir)
    stats_path = output_dir / "stats.json"
    if not stats_path.exists():
        print(f"❌ stats.json が見つかりません: {stats_path}")
        print("   前処理を実行してください: ./logprep run --input <log> --out " + str(output_dir))
        return 1

    with open(stats_path, 'r', encoding='utf-8') as f:
        stats = json.load(f)

    print(f"📂 出力ディレクトリ: {output_dir}")
    print("=" * 80)

    print("\n📊 ステージ別件数")
    for key in ('lines_read', 'records_parsed', 'records_after_cleaning',
                'users_identified', 'sessions_identified', 'records_inferred'):
        print(f"   {key:24s}: {stats[key]:,}")

    print("\n🧹 除去理由")
    for reason, count in stats['records_removed_by_reason'].items():
        print(f"   {reason:24s}: {count:,}")

    print("\n📄 入力ファイル")
    for entry in stats['files']:
        print(f"   {entry['source_file']}: {entry['format']} / {entry['records_parsed']:,}件")

    sessions = _table(output_dir, 'sessions')
    if sessions is not None and not sessions.empty:
        n_records = sessions['n_records'].astype(int)
        duration = sessions['duration_seconds'].astype(float)
        print("\n🕒 セッション")
        print(f"   レコード数: 平均 {n_records.mean():.2f} / 最大 {n_records.max():,}")
        print(f"   継続時間(秒): 平均 {duration.mean():.1f} / 中央値 {duration.median():.1f}")

    records = _table(output_dir, 'records')
    if records is not None and not records.empty:
        print(f"\n🔝 アクセス上位ページ（{args.top}件）")
        for uri, count in records['uri'].value_counts().head(args.top).items():
            print(f"   {count:6,d}  {uri}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
