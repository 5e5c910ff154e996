"""
概要:
    calculate_principal の単体テスト
主な仕様:
    - 主sl2の指数の3経路（閉じた式 / 高さの2乗和 / 指数）の一致と一覧表の値
    - Σht² の閉じた式
    - 主sl2への制限による分解、随伴表現からの指数の読み出し
    - V_λ を主sl2加群とみなしたときの指数（ind_D = 4·ind_AVE）
制限事項:
    - 有理数は Fraction の厳密一致で比較する
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.calculate_principal import (
    exponents_via_adjoint,
    height_square_closed_form,
    principal_ave_index_rep,
    principal_h_eigenvalue,
    principal_index,
    principal_index_rep,
    sl2_decompose,
    sl2_module_index,
    subalgebra_index,
    subalgebra_index_via_ave,
    sum_height_squares,
    table_value,
)
from src.calculate_roots import adjoint_weight, admissible_types, build_root_system, height, root_to_weight
from src.calculate_weights import weyl_dim
from src.lie_model import ConsistencyError, InputError, SimpleType


@pytest.mark.parametrize("text, expected", [("A2", 6), ("B2", 15), ("G2", 56), ("A1", 1)])
def test_sum_height_squares(rootSystemOf, text, expected):
    """
    概要:
        Σ ht²(γ) の値と閉じた式 (dim g/12)·h*·h*(g∨)·r の一致。
    """
    rs = rootSystemOf(text)
    assert sum_height_squares(rs) == expected
    assert height_square_closed_form(rs) == expected


@pytest.mark.parametrize(
    "text, expected",
    [("A1", 1), ("A2", 4), ("B2", 10), ("C2", 10), ("B3", 28), ("C3", 35), ("D4", 28),
     ("G2", 28), ("F4", 156), ("E6", 156), ("E7", 399), ("E8", 1240)],
)
def test_principal_index_three_ways(rootSystemOf, text, expected):
    """
    概要:
        主sl2の指数が3経路で一致し、一覧表の値に等しい。
    期待結果:
        - G2: 28、F4 と E6 はともに 156、E7: 399、E8: 1240
    """
    rs = rootSystemOf(text)
    report = principal_index(rs)
    assert report.agree, f"principal_index({text}) report={report}"
    assert report.closed_form == expected, f"principal_index({text}) expected={expected} actual={report.closed_form}"
    assert table_value(rs.simple_type) == expected


def test_principal_index_matches_table_all_ranks():
    """
    概要:
        ランク8以下のすべての型で3経路と一覧表の式が一致する。
    """
    for t in admissible_types(8):
        report = principal_index(build_root_system(t))
        assert report.closed_form == report.via_heights == report.via_exponents == table_value(t), f"{t}: {report}"


@pytest.mark.parametrize(
    "family, rank, expected",
    [("A", 5, 35), ("B", 4, 60), ("C", 4, 84), ("D", 5, 60), ("D", 8, 280)],
)
def test_table_value_formulas(family, rank, expected):
    assert table_value(SimpleType(family, rank)) == expected


def test_sl2_module_index():
    assert [sl2_module_index(d) for d in range(5)] == [0, 1, 4, 10, 20]
    with pytest.raises(InputError):
        sl2_module_index(-1)


def test_subalgebra_index_helpers():
    """
    概要:
        ind(s ↪ g) = ind_D(s,g)/ind_D(g,ad) = (h*(s)/h*(g))·ind_AVE(s,g)。
    期待結果:
        - G2: ind_D = ΣC(2m+2,3) = C(4,3)+C(12,3) = 224、2h* = 8 → 28
        - G2: ind_AVE = Σht² = 56 → (2/4)·56 = 28
    """
    assert subalgebra_index(Fraction(224), Fraction(8)) == 28
    assert subalgebra_index_via_ave(2, 4, Fraction(56)) == 28


def test_principal_h_eigenvalue_on_roots(rootSystemOf):
    """
    概要:
        ルート γ 上で h の固有値は 2·ht(γ)。
    """
    for text in ("B3", "G2", "F4"):
        rs = rootSystemOf(text)
        for gamma in rs.positive_roots:
            assert principal_h_eigenvalue(rs, root_to_weight(rs.cartan, gamma)) == 2 * height(gamma)


def test_sl2_decompose_examples(rootSystemOf, g2System):
    """
    概要:
        主sl2への制限による分解の代表例。
    期待結果:
        - A2 の標準表現: R_2
        - A2 随伴: R_2 ⊕ R_4
        - G2 の7次元表現: R_6
        - G2 随伴: R_2 ⊕ R_10
    """
    assert sl2_decompose(rootSystemOf("A2"), (1, 0)).parts == ((2, 1),)
    assert sl2_decompose(rootSystemOf("A2"), (1, 1)).parts == ((2, 1), (4, 1))
    assert sl2_decompose(g2System, (1, 0)).parts == ((6, 1),)
    decomposition = sl2_decompose(g2System, (0, 1))
    assert decomposition.parts == ((2, 1), (10, 1))
    assert decomposition.dim == 14 and decomposition.count == 2


def test_sl2_decompose_trivial(rootSystemOf):
    assert sl2_decompose(rootSystemOf("E6"), (0,) * 6).parts == ((0, 1),)


@pytest.mark.parametrize("text", ["A4", "B4", "C4", "D5", "E6", "E7", "F4", "G2"])
def test_exponents_via_adjoint(rootSystemOf, text):
    """
    概要:
        g = ⊕ R_{2m_i} から読んだ指数が高さヒストグラムの指数と一致する。
    """
    rs = rootSystemOf(text)
    assert exponents_via_adjoint(rs) == list(rs.exponents)


def test_principal_index_rep_examples(g2System, rootSystemOf):
    """
    概要:
        V_λ を主sl2加群とみなしたときの指数。
    期待結果:
        - G2 随伴: (14/6)·4·3·8 = 224 = C(4,3)+C(12,3)
        - A1 の R_3: 10
        - ind_D = 4·ind_AVE
    """
    assert principal_index_rep(g2System, (0, 1)) == 224
    assert principal_ave_index_rep(g2System, (0, 1)) == 56
    assert principal_index_rep(rootSystemOf("A1"), (3,)) == 10
    assert principal_index_rep(rootSystemOf("A2"), (1, 0)) == 4


def test_principal_index_strict_raises_on_disagreement(rootSystemOf, monkeypatch):
    """
    概要:
        strict=True では経路が一致しないとき ConsistencyError、strict=False ではレポートを返す。
    """
    import src.calculate_principal as principal

    rs = rootSystemOf("B3")
    monkeypatch.setattr(principal, "_height_squares", lambda _rs: 0)
    with pytest.raises(ConsistencyError) as info:
        principal_index(rs)
    assert info.value.report is not None and not info.value.report.agree
    report = principal_index(rs, strict=False)
    assert report.via_heights == 0 and report.closed_form == 28


_SMALL_TYPES = admissible_types(4)


@settings(max_examples=30, deadline=None)
@given(
    type_index=st.integers(min_value=0, max_value=len(_SMALL_TYPES) - 1),
    coords=st.lists(st.integers(min_value=0, max_value=2), min_size=4, max_size=4),
)
def test_principal_index_rep_property(type_index, coords):
    """
    概要:
        任意の小さな (型, λ) で、閉じた式と分解の和が一致し（principal_index_rep 内で確認）、
        ind_D((sl2)^pr, V_λ) = 4·ind_AVE((sl2)^pr, V_λ) が成り立つ。
    """
    rs = build_root_system(_SMALL_TYPES[type_index])
    lam = tuple(coords[: rs.rank])
    assume(weyl_dim(rs, lam) <= 1500)
    value = principal_index_rep(rs, lam)
    assert value == 4 * principal_ave_index_rep(rs, lam)
    assert sl2_decompose(rs, lam).dim == weyl_dim(rs, lam)


def test_principal_index_rep_of_adjoint_is_principal_index_times_2h_star(rootSystemOf):
    """
    概要:
        随伴表現では ind_D((sl2)^pr, g) = ind((sl2)^pr ↪ g)·2h*。
    """
    for text in ("A3", "B3", "C3", "G2", "F4"):
        rs = rootSystemOf(text)
        expected = principal_index(rs).closed_form * 2 * rs.h_star
        assert principal_index_rep(rs, adjoint_weight(rs)) == expected, f"{text}"


def test_principal_index_rep_is_fraction(rootSystemOf):
    value = principal_index_rep(rootSystemOf("A2"), (1, 1))
    assert isinstance(value, Fraction) and value == 24
