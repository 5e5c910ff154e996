"""
概要:
    既約表現のデータ（次元・ウェイト系・Weyl軌道）とDynkin指数/AVE指数を計算するモジュール
主な仕様:
    - Weyl次元公式（厳密な有理数演算、整数性を確認）
    - 支配的ウェイトの列挙（正ルートを引く幅優先探索）
    - Freudenthalの重複度公式（上から順に厳密計算）
    - Weyl軌道の列挙（単純鏡映による幅優先探索）
    - ウェイトの2乗和 Σ(μ,ρ∨)² / Σ⟨μ,ρ⟩²
制限事項:
    - 最高ウェイトは基本ウェイト座標でのみ受け付ける
    - 次元が LIE_INDEX_MAX_DIM（既定 10^6）を超える表現のウェイト系は計算しない
"""
from __future__ import annotations

import logging
import os
from collections import deque
from fractions import Fraction
from functools import lru_cache
from numbers import Integral
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .calculate_roots import (
    adjoint_weight,
    height,
    root_to_weight,
    weight_pairing,
    weight_root_pairing,
    weight_to_root,
)
from .lie_model import (
    ConsistencyError,
    InputError,
    RootSystem,
    SizeGuardError,
    Weight,
    WeightEntry,
    WeightSumMode,
    WeightSystem,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 1_000_000


def get_max_dim(override: Optional[int] = None) -> int:
    """
    サイズガード（表現の次元の上限）を返す
    - 引数指定があればそれを優先
    - 次に環境変数 `LIE_INDEX_MAX_DIM`
    - いずれも無ければ 10^6
    """
    if override is not None:
        return int(override)
    raw = os.environ.get("LIE_INDEX_MAX_DIM", "").strip()
    if not raw:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"get_max_dim: LIE_INDEX_MAX_DIM が整数ではありません value='{raw}'")
    if value <= 0:
        raise InputError(f"get_max_dim: LIE_INDEX_MAX_DIM は正の整数で指定してください value={value}")
    return value


def validate_weight(rs: RootSystem, lam: Sequence[int], dominant: bool = True) -> Weight:
    """
    ウェイト（基本ウェイト座標）を検証してタプルで返す
    例外:
        InputError: 長さがランクと異なる、整数でない、（dominant=Trueで）負の座標がある場合
    """
    if len(lam) != rs.rank:
        raise InputError(
            f"validate_weight: 座標数がランクと一致しません type={rs.simple_type} rank={rs.rank} weight={tuple(lam)}"
        )
    for c in lam:
        if isinstance(c, bool) or not isinstance(c, Integral):
            raise InputError(f"validate_weight: 座標は整数で指定してください weight={tuple(lam)}")
    weight = tuple(int(c) for c in lam)
    if dominant and min(weight) < 0:
        raise InputError(f"validate_weight: 支配的ではありません type={rs.simple_type} weight={weight}")
    return weight


def _add(x: Sequence[int], y: Sequence[int], k: int = 1) -> Weight:
    return tuple(a + k * b for a, b in zip(x, y))


def weyl_dim(rs: RootSystem, lam: Sequence[int]) -> int:
    """
    Weyl次元公式 Π_{γ>0} (λ+ρ,γ)/(ρ,γ)
    :param rs: RootSystem
    :param lam: 最高ウェイト（基本ウェイト座標）
    :return: int 表現の次元
    """
    lam = validate_weight(rs, lam)
    shifted = _add(lam, rs.rho)
    value = Fraction(1)
    for gamma in rs.positive_roots:
        value *= weight_root_pairing(rs, shifted, gamma) / weight_root_pairing(rs, rs.rho, gamma)
    if value.denominator != 1:
        raise ConsistencyError(f"weyl_dim: 次元が整数になりません type={rs.simple_type} weight={lam} value={value}")
    return int(value)


def casimir_value(rs: RootSystem, lam: Sequence[int]) -> Fraction:
    """
    (λ, λ+2ρ)（正規化形式）
    """
    lam = validate_weight(rs, lam)
    return weight_pairing(rs, lam, _add(lam, rs.rho, 2))


def dynkin_index_rep(rs: RootSystem, lam: Sequence[int]) -> Fraction:
    """
    Dynkin指数 ind_D(g, V_λ) = (dim V_λ / dim g)·(λ, λ+2ρ)
    整数であることを確認する
    """
    value = Fraction(weyl_dim(rs, lam), rs.dim_g) * casimir_value(rs, lam)
    if value.denominator != 1 or value < 0:
        raise ConsistencyError(
            f"dynkin_index_rep: 指数が非負整数になりません type={rs.simple_type} weight={tuple(lam)} value={value}"
        )
    return value


def ave_index_rep(rs: RootSystem, lam: Sequence[int]) -> Fraction:
    """
    AVE指数 ind_AVE(g, V_λ) = ind_D(g, V_λ) / (2h*)
    """
    return dynkin_index_rep(rs, lam) / (2 * rs.h_star)


def dynkin_index_sum(rs: RootSystem, lams: Sequence[Sequence[int]]) -> Fraction:
    """
    直和 V_λ1 ⊕ V_λ2 ⊕ … の指数（加法性）
    """
    return sum((dynkin_index_rep(rs, lam) for lam in lams), Fraction(0))


def simple_reflection(rs: RootSystem, mu: Sequence[int], i: int) -> Weight:
    """
    s_i(μ) = μ − μ_i·α_i（α_i の基本ウェイト座標は Cartan行列の第 i 行）
    """
    return _add(mu, rs.cartan[i], -mu[i])


def dominant_conjugate(rs: RootSystem, mu: Sequence[int]) -> Weight:
    current = tuple(mu)
    while True:
        for i, c in enumerate(current):
            if c < 0:
                current = simple_reflection(rs, current, i)
                break
        else:
            return current


def weyl_orbit(rs: RootSystem, mu: Sequence[int]) -> List[Weight]:
    """
    単純鏡映による幅優先探索で Weyl軌道を列挙する
    :return: List[Weight] 辞書順の降順
    """
    mu = validate_weight(rs, mu, dominant=False)
    seen = {mu}
    queue = deque([mu])
    while queue:
        current = queue.popleft()
        for i in range(rs.rank):
            if current[i] == 0:
                continue
            reflected = simple_reflection(rs, current, i)
            if reflected not in seen:
                seen.add(reflected)
                queue.append(reflected)
    return sorted(seen, reverse=True)


def _depth(rs: RootSystem, lam: Weight, mu: Weight) -> int:
    coords = weight_to_root(rs, tuple(a - b for a, b in zip(lam, mu)))
    if any(c.denominator != 1 or c < 0 for c in coords):
        raise ConsistencyError(f"_depth: λ−μ が正ルートの非負整数結合ではありません lam={lam} mu={mu}")
    return height(int(c) for c in coords)


def dominant_weights(rs: RootSystem, lam: Sequence[int]) -> List[Weight]:
    """
    V_λ の支配的ウェイトを列挙する
    λ から正ルートを引く幅優先探索で、支配的なものだけを残す
    :return: List[Weight] λ−μ の高さの昇順（λが先頭）、同じ高さでは辞書順の降順
    """
    lam = validate_weight(rs, lam)
    root_weights = [root_to_weight(rs.cartan, gamma) for gamma in rs.positive_roots]
    seen = {lam}
    queue = deque([lam])
    while queue:
        current = queue.popleft()
        for rw in root_weights:
            lowered = _add(current, rw, -1)
            if min(lowered) >= 0 and lowered not in seen:
                seen.add(lowered)
                queue.append(lowered)
    return sorted(seen, key=lambda mu: (_depth(rs, lam, mu), tuple(-c for c in mu)))


def ensure_within_guard(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> int:
    """
    次元がサイズガード以内であることを確認し、次元を返す
    例外:
        SizeGuardError: 上限を超える場合
    """
    dim = weyl_dim(rs, lam)
    limit = get_max_dim(max_dim)
    if dim > limit:
        raise SizeGuardError(
            f"ensure_within_guard: 表現の次元が上限を超えています type={rs.simple_type} "
            f"weight={tuple(lam)} dim={dim} max_dim={limit}",
            dim=dim,
            max_dim=limit,
        )
    return dim


@lru_cache(maxsize=256)
def _weight_system(rs: RootSystem, lam: Weight) -> WeightSystem:
    dim = weyl_dim(rs, lam)
    dominant = dominant_weights(rs, lam)
    known = set(dominant)

    def norm(mu: Weight) -> Fraction:
        shifted = _add(mu, rs.rho)
        return weight_pairing(rs, shifted, shifted)

    norms = {mu: norm(mu) for mu in dominant}
    top = norms[lam]
    # (μ+ρ, μ+ρ) の降順。同値は辞書順の降順
    order = sorted(dominant, key=lambda mu: (-norms[mu], tuple(-c for c in mu)))
    # (α の基本ウェイト座標, α, (α,α))
    root_data = []
    for gamma in rs.positive_roots:
        rw = root_to_weight(rs.cartan, gamma)
        root_data.append((rw, gamma, weight_root_pairing(rs, rw, gamma)))

    mult: Dict[Weight, int] = {lam: 1}
    for mu in order:
        if mu == lam:
            continue
        total = Fraction(0)
        for rw, gamma, gg in root_data:
            base = weight_root_pairing(rs, mu, gamma)
            k = 1
            shifted = _add(mu, rw)
            while True:
                dom = dominant_conjugate(rs, shifted)
                if dom not in known:
                    break
                if dom not in mult:
                    raise ConsistencyError(f"_weight_system: 計算順序が不正です lam={lam} mu={mu} dom={dom}")
                total += mult[dom] * (base + k * gg)
                k += 1
                shifted = _add(shifted, rw)
        value = 2 * total / (top - norms[mu])
        if value.denominator != 1 or value <= 0:
            raise ConsistencyError(
                f"_weight_system: 重複度が正の整数になりません type={rs.simple_type} lam={lam} mu={mu} value={value}"
            )
        mult[mu] = int(value)

    entries = tuple(
        WeightEntry(weight=mu, multiplicity=mult[mu], orbit_size=len(weyl_orbit(rs, mu)))
        for mu in dominant
    )
    system = WeightSystem(highest_weight=lam, entries=entries, dim=dim)
    if system.mass != dim:
        raise ConsistencyError(
            f"_weight_system: 重複度×軌道の総和が次元と一致しません type={rs.simple_type} lam={lam} "
            f"mass={system.mass} dim={dim}"
        )
    logger.debug(f"_weight_system: type={rs.simple_type} lam={lam} dim={dim} dominant={len(entries)}")
    return system


def freudenthal_multiplicities(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> WeightSystem:
    """
    Freudenthalの重複度公式で V_λ のウェイト系を計算する
    ((λ+ρ,λ+ρ) − (μ+ρ,μ+ρ))·m_μ = 2·Σ_{γ>0} Σ_{k≥1} m_{μ+kγ}·(μ+kγ, γ)
    :param rs: RootSystem
    :param lam: 最高ウェイト
    :param max_dim: int サイズガード（省略時は環境変数/既定値）
    :return: WeightSystem
    """
    lam = validate_weight(rs, lam)
    ensure_within_guard(rs, lam, max_dim)
    return _weight_system(rs, lam)


def iter_weights(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> Iterator[Tuple[Weight, int]]:
    """
    V_λ のすべてのウェイトを (ウェイト, 重複度) で列挙する（軌道を展開）
    """
    system = freudenthal_multiplicities(rs, lam, max_dim)
    for entry in system.entries:
        for mu in weyl_orbit(rs, entry.weight):
            yield mu, entry.multiplicity


def weight_sum_squares(
    rs: RootSystem,
    lam: Sequence[int],
    mode: WeightSumMode = WeightSumMode.RHO_CHECK_NORMALIZED,
    max_dim: Optional[int] = None,
) -> Fraction:
    """
    ウェイトの2乗和（重複度込み）
    - RHO_CHECK_NORMALIZED: Σ (μ, ρ∨)²（正規化形式）
    - RHO_CANONICAL: Σ ⟨μ, ρ⟩²（標準形式 = 正規化/2h*）
    """
    mode = WeightSumMode(mode)
    if mode is WeightSumMode.RHO_CHECK_NORMALIZED:
        target = rs.rho_check
        scale = Fraction(1)
    else:
        target = weight_to_root(rs, rs.rho)
        scale = Fraction(1, 2 * rs.h_star)
    coeffs = [rs.symmetrizer[j] * target[j] * scale for j in range(rs.rank)]
    total = Fraction(0)
    for mu, m in iter_weights(rs, lam, max_dim):
        value = sum((coeffs[j] * mu[j] for j in range(rs.rank) if mu[j]), Fraction(0))
        total += m * value * value
    return total


def adjoint_system(rs: RootSystem) -> WeightSystem:
    return freudenthal_multiplicities(rs, adjoint_weight(rs))
