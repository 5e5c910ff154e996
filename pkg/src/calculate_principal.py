"""
概要:
    主sl2部分環に関する計算モジュール
主な仕様:
    - 主sl2の指数を3つの独立な経路で計算（閉じた式 / 高さの2乗和 / 指数と二項係数）
    - 任意の既約表現の主sl2への制限による分解（h の固有値ヒストグラムから）
    - 随伴表現の分解から指数を読み出し、高さヒストグラムの指数と照合
    - V_λ を主sl2加群とみなしたときのDynkin指数
制限事項:
    - h は常に支配的に取る（単純ルート上で α(h)=2、ルート上の固有値は 2·ht）
    - sl2三つ組の行列表示・冪零元は構成しない
"""
from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence

from .calculate_roots import adjoint_weight, height
from .calculate_weights import iter_weights, validate_weight, weight_sum_squares, weyl_dim, casimir_value
from .lie_model import (
    ConsistencyError,
    IndexReport,
    InputError,
    RootSystem,
    SimpleType,
    SL2Decomposition,
    WeightSumMode,
)

logger = logging.getLogger(__name__)

# h*(sl2)
SL2_DUAL_COXETER = 2


def sl2_module_index(d: int) -> int:
    """
    (d+1)次元の既約sl2加群 R_d のDynkin指数 C(d+2, 3)
    """
    if d < 0:
        raise InputError(f"sl2_module_index: 最高ウェイトは非負で指定してください d={d}")
    return comb(d + 2, 3)


def subalgebra_index(ind_d_s_g: Fraction, ind_d_g_ad: Fraction) -> Fraction:
    """
    ind(s ↪ g) = ind_D(s, g) / ind_D(g, ad)
    """
    return Fraction(ind_d_s_g) / Fraction(ind_d_g_ad)


def subalgebra_index_via_ave(h_star_s: int, h_star_g: int, ave_s_g: Fraction) -> Fraction:
    """
    ind(s ↪ g) = (h*(s)/h*(g))·ind_AVE(s, g)
    """
    return Fraction(h_star_s, h_star_g) * Fraction(ave_s_g)


def principal_h_eigenvalue(rs: RootSystem, mu: Sequence[int]) -> Fraction:
    """
    μ(h) = 2(μ, ρ∨)（μ は基本ウェイト座標）
    """
    mu = validate_weight(rs, mu, dominant=False)
    value = 2 * sum((mu[j] * rs.symmetrizer[j] * rs.rho_check[j] for j in range(rs.rank)), Fraction(0))
    if value.denominator != 1:
        raise ConsistencyError(f"principal_h_eigenvalue: 固有値が整数になりません type={rs.simple_type} mu={mu} value={value}")
    return value


def _height_squares(rs: RootSystem) -> int:
    return sum(height(g) ** 2 for g in rs.positive_roots)


def height_square_closed_form(rs: RootSystem) -> Fraction:
    """
    (dim g/12)·h*(g)·h*(g∨)·r
    """
    return Fraction(rs.dim_g, 12) * rs.h_star * rs.h_star_dual * rs.r


def sum_height_squares(rs: RootSystem) -> int:
    """
    Σ_{γ>0} ht²(γ) を列挙で求め、閉じた式と一致することを確認する
    例外:
        ConsistencyError: 閉じた式と一致しない場合
    """
    value = _height_squares(rs)
    expected = height_square_closed_form(rs)
    if value != expected:
        raise ConsistencyError(
            f"sum_height_squares: 閉じた式と一致しません type={rs.simple_type} sum={value} closed={expected}"
        )
    return value


def principal_index_closed_form(rs: RootSystem) -> Fraction:
    """
    ind((sl2)^pr ↪ g) = (dim g/6)·h*(g∨)·r
    """
    return Fraction(rs.dim_g, 6) * rs.h_star_dual * rs.r


def principal_index(rs: RootSystem, strict: bool = True) -> IndexReport:
    """
    主sl2の指数を3経路で計算する
    (a) (dim g/6)·h*(g∨)·r
    (b) (h*(sl2)/h*(g))·Σht²(γ)
    (c) ind_D((sl2)^pr, g)/ind_D(g, ad) = ΣC(2m_i+2,3)/(2h*)
    :param strict: bool Trueなら不一致・非整数で ConsistencyError
    :return: IndexReport
    """
    closed = principal_index_closed_form(rs)
    via_heights = subalgebra_index_via_ave(SL2_DUAL_COXETER, rs.h_star, Fraction(_height_squares(rs)))
    via_exponents = subalgebra_index(
        Fraction(sum(sl2_module_index(2 * m) for m in rs.exponents)),
        Fraction(2 * rs.h_star),
    )
    report = IndexReport(closed_form=closed, via_heights=via_heights, via_exponents=via_exponents)
    logger.debug(
        f"principal_index: type={rs.simple_type} closed={closed} heights={via_heights} exponents={via_exponents}"
    )
    if strict and (not report.agree or closed.denominator != 1):
        raise ConsistencyError(
            f"principal_index: 3経路の値が一致しません type={rs.simple_type} closed={closed} "
            f"heights={via_heights} exponents={via_exponents}",
            report=report,
        )
    return report


def table_value(t: SimpleType) -> int:
    """
    主sl2の指数の一覧表の値
    A_n: C(n+2,3) / B_n: n(n+1)(2n+1)/3 / C_n: C(2n+1,3) / D_n: (n−1)n(2n−1)/3
    E6: 156 / E7: 399 / E8: 1240 / F4: 156 / G2: 28
    """
    n = t.rank
    if t.family == "A":
        return comb(n + 2, 3)
    if t.family == "B":
        return n * (n + 1) * (2 * n + 1) // 3
    if t.family == "C":
        return comb(2 * n + 1, 3)
    if t.family == "D":
        return (n - 1) * n * (2 * n - 1) // 3
    return {("E", 6): 156, ("E", 7): 399, ("E", 8): 1240, ("F", 4): 156, ("G", 2): 28}[(t.family, n)]


def sl2_decompose(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> SL2Decomposition:
    """
    V_λ を主sl2へ制限したときの既約分解
    n_d = N_d − N_{d+2}（N_k は 2(μ,ρ∨)=k となるウェイトの重複度込みの個数）
    """
    lam = validate_weight(rs, lam)
    histogram: Counter = Counter()
    for mu, m in iter_weights(rs, lam, max_dim):
        histogram[int(principal_h_eigenvalue(rs, mu))] += m
    parts = []
    top = max(histogram) if histogram else 0
    for d in range(0, top + 1):
        n_d = histogram.get(d, 0) - histogram.get(d + 2, 0)
        if n_d < 0:
            raise ConsistencyError(f"sl2_decompose: 重複度が負になりました type={rs.simple_type} lam={lam} d={d} n_d={n_d}")
        if n_d:
            parts.append((d, n_d))
    decomposition = SL2Decomposition(parts=tuple(parts))
    dim = weyl_dim(rs, lam)
    if decomposition.dim != dim:
        raise ConsistencyError(
            f"sl2_decompose: 分解の次元が一致しません type={rs.simple_type} lam={lam} sum={decomposition.dim} dim={dim}"
        )
    return decomposition


def exponents_via_adjoint(rs: RootSystem) -> List[int]:
    """
    随伴表現の分解 g = ⊕ R_{2m_i} から指数を読み出す
    例外:
        ConsistencyError: 高さヒストグラムから得た指数と一致しない場合
    """
    decomposition = sl2_decompose(rs, adjoint_weight(rs))
    result: List[int] = []
    for d, n_d in decomposition.parts:
        if d % 2:
            raise ConsistencyError(f"exponents_via_adjoint: 奇数の最高ウェイトが現れました type={rs.simple_type} d={d}")
        result.extend([d // 2] * n_d)
    if tuple(result) != tuple(rs.exponents):
        raise ConsistencyError(
            f"exponents_via_adjoint: 指数が一致しません type={rs.simple_type} adjoint={result} heights={list(rs.exponents)}"
        )
    return result


def principal_index_rep_closed_form(rs: RootSystem, lam: Sequence[int]) -> Fraction:
    """
    ind_D((sl2)^pr, V_λ) = (dim V_λ/6)·h*(g∨)·r·(λ, λ+2ρ)
    """
    return Fraction(weyl_dim(rs, lam), 6) * rs.h_star_dual * rs.r * casimir_value(rs, lam)


def principal_index_rep(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> Fraction:
    """
    V_λ を主sl2加群とみなしたときのDynkin指数
    閉じた式と、分解 ⊕ n_d R_d からの和 Σ n_d·C(d+2,3) を照合する
    値は整数だが、他の指数と同じく Fraction で返す
    """
    lam = validate_weight(rs, lam)
    closed = principal_index_rep_closed_form(rs, lam)
    decomposition = sl2_decompose(rs, lam, max_dim)
    by_parts = sum(n_d * sl2_module_index(d) for d, n_d in decomposition.parts)
    if closed != by_parts or closed.denominator != 1:
        raise ConsistencyError(
            f"principal_index_rep: 閉じた式と分解の和が一致しません type={rs.simple_type} lam={lam} "
            f"closed={closed} parts={by_parts}"
        )
    return Fraction(by_parts)


def principal_ave_index_rep(rs: RootSystem, lam: Sequence[int], max_dim: Optional[int] = None) -> Fraction:
    """
    ind_AVE((sl2)^pr, V_λ) = Σ_μ (μ, ρ∨)² / 2
    """
    return weight_sum_squares(rs, lam, WeightSumMode.RHO_CHECK_NORMALIZED, max_dim) / 2
