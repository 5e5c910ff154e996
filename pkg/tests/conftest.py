"""
概要:
    pytest 全体で利用する共通フィクスチャ群
主な仕様:
    - プロジェクトルートを sys.path に追加し `from src.xxx import ...` を解決
    - ルート系を型ごとに一度だけ構成して共有（build_root_system のキャッシュを利用）
    - テスト中はサイズガード関連の環境変数を既定値に固定
制限事項:
    - 有理数は Fraction の厳密一致で比較する（許容誤差は使わない）
"""

from __future__ import annotations

import os
import sys
from typing import Callable, List

import pytest

# 重要: テスト収集前に 'src' を解決できるよう、プロジェクトルートを sys.path に追加
_HERE = os.path.abspath(os.path.dirname(__file__))
_PROJECT_ROOT = os.path.abspath(os.path.join(_HERE, os.pardir))
if _PROJECT_ROOT not in sys.path:
    sys.path.insert(0, _PROJECT_ROOT)

from src.calculate_roots import admissible_types, build_root_system, parse_simple_type  # noqa: E402
from src.lie_model import RootSystem, SimpleType  # noqa: E402


@pytest.fixture(autouse=True)
def defaultGuardEnv(monkeypatch) -> None:
    """
    サイズガード関連の環境変数を外し、既定値（10^6 / 20000）で実行する。
    """
    monkeypatch.delenv("LIE_INDEX_MAX_DIM", raising=False)
    monkeypatch.delenv("LIE_INDEX_SWEEP_MAX_DIM", raising=False)


@pytest.fixture(scope="session")
def rootSystemOf() -> Callable[[str], RootSystem]:
    """
    "G2" のような型文字列からルート系を返すファクトリ。
    Returns:
        callable: 型文字列 -> RootSystem
    """
    def factory(text: str) -> RootSystem:
        return build_root_system(parse_simple_type(text))
    return factory


@pytest.fixture(scope="session")
def g2System() -> RootSystem:
    return build_root_system(SimpleType("G", 2))


@pytest.fixture(scope="session")
def e8System() -> RootSystem:
    return build_root_system(SimpleType("E", 8))


@pytest.fixture(scope="session")
def smallTypes() -> List[SimpleType]:
    """
    ランク4以下の許容される型（A1〜A4, B2〜B4, C2〜C4, D4, F4, G2）。
    """
    return admissible_types(4)
