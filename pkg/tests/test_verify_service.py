"""
概要:
    IdentityVerifier（恒等式検証サービス）の結合テスト
主な仕様:
    - 各恒等式の代表値（G2 の strange formula、E8 の一覧表、G2/D4 の展開など）
    - スキップ結果、ウェイトごとの結果、並び順、並列実行
    - ランク4以下の全型・全恒等式で失敗0件
制限事項:
    - ランク8までの全件検証は CLI テストでは行わず、ここでも小ランクに限定する
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from src.calculate_roots import admissible_types
from src.lie_model import IdentityId, InputError, SimpleType, SizeGuardError
from src.verify_service import (
    IdentityVerifier,
    VerifyOptions,
    check,
    check_all,
    count_failures,
    get_sweep_max_dim,
    parse_identity,
)


def _single(identity: IdentityId, text: str, opts: VerifyOptions = None):
    results = check(identity, SimpleType(text[0], int(text[1:])), opts)
    assert len(results) == 1, f"{identity.value} {text}: results={results}"
    return results[0]


def test_strange_formula_g2():
    """
    概要:
        G2 で (ρ,ρ) = (14/12)·4 = 14/3。
    """
    result = _single(IdentityId.STRANGE_FORMULA, "G2")
    assert result.passed and result.lhs == result.rhs == Fraction(14, 3)
    assert result.elapsed.total_seconds() >= 0


def test_table_entry_e8_and_e7():
    e8 = _single(IdentityId.TABLE_ENTRY, "E8")
    assert e8.passed and e8.lhs == e8.rhs == 1240
    e7 = _single(IdentityId.TABLE_ENTRY, "E7")
    assert e7.passed and e7.lhs == 399


def test_height_square_sum_g2():
    result = _single(IdentityId.HEIGHT_SQUARE_SUM, "G2")
    assert result.passed and result.lhs == 56 and result.rhs == 56


def test_unfolding_pairs():
    """
    概要:
        (G2, D4), (F4, E6), (C3, A5), (B3, D4) で指数が等しい。B2 はスキップ。
    """
    g2 = _single(IdentityId.UNFOLDING, "G2")
    assert g2.passed and g2.lhs == g2.rhs == 28 and g2.label == "D4"
    f4 = _single(IdentityId.UNFOLDING, "F4")
    assert f4.passed and f4.lhs == 156 and f4.label == "E6"
    assert _single(IdentityId.UNFOLDING, "C3").label == "A5"
    assert _single(IdentityId.UNFOLDING, "B3").passed
    b2 = _single(IdentityId.UNFOLDING, "B2")
    assert b2.skipped and b2.passed and b2.lhs == b2.rhs == 0


def test_simply_laced_height_sum_skip_and_pass():
    b3 = _single(IdentityId.SIMPLY_LACED_HEIGHT_SUM, "B3")
    assert b3.skipped and b3.passed
    e8 = _single(IdentityId.SIMPLY_LACED_HEIGHT_SUM, "E8")
    assert not e8.skipped and e8.passed and e8.lhs == 1240


def test_general_height_sum_g2():
    # Σ ht = 1+1+2+3+4+5 = 16
    result = _single(IdentityId.GENERAL_HEIGHT_SUM, "G2")
    assert result.passed and result.lhs == 16


def test_gram_identities_report_counts():
    """
    概要:
        Gram行列の恒等式は lhs = 成り立つ成分数、rhs = 調べた成分数。
    """
    for identity in (IdentityId.CANONICAL_GRAM, IdentityId.NORMALIZED_REWRITE):
        result = _single(identity, "F4")
        assert result.passed and result.lhs == result.rhs == 16, f"{identity.value}: {result}"


def test_main_theorem_three_way_note():
    result = _single(IdentityId.MAIN_THEOREM_THREE_WAY, "B4")
    assert result.passed and result.lhs == 60
    assert "closed=60" in result.note and "heights=60" in result.note and "exponents=60" in result.note


def test_main_theorem_reports_failure_without_raising(monkeypatch):
    """
    概要:
        経路が一致しない場合も例外にせず passed=False を返す。
    """
    import src.calculate_principal as principal

    monkeypatch.setattr(principal, "_height_squares", lambda _rs: 1)
    result = _single(IdentityId.MAIN_THEOREM_THREE_WAY, "A2")
    assert not result.passed and result.lhs == 4 and result.rhs == Fraction(2, 3)


def test_dual_coxeter_conjecture_note():
    """
    概要:
        h*(g∨) = 1 + ht(θ_s) を確認し、1 だけずれた表記への注記を残す。
    """
    result = _single(IdentityId.DUAL_COXETER_CONJECTURE, "B3")
    assert result.passed and result.lhs == result.rhs == 4
    assert "ht(θ_s)=3" in result.note


def test_exponent_decomposition_e8():
    result = _single(IdentityId.EXPONENT_DECOMPOSITION, "E8")
    assert result.passed and result.lhs == result.rhs == 8
    assert "[1, 7, 11, 13, 17, 19, 23, 29]" in result.note


def test_index_integrality_a1_includes_sl2_binomials():
    # 基本ウェイト1件 + 随伴1件 + d=0..20 の21件
    result = _single(IdentityId.INDEX_INTEGRALITY, "A1")
    assert result.passed and result.rhs == 23


def test_weight_sum_results_per_weight():
    """
    概要:
        ウェイト和の恒等式は λ ごとに結果を返す（G2: 随伴 (0,1) と ω1 (1,0)）。
    """
    results = check(IdentityId.WEIGHT_SUM_RHO_CHECK, SimpleType("G", 2))
    assert [r.label for r in results] == ["(0,1)", "(1,0)"]
    assert all(r.passed for r in results)
    assert results[0].lhs == 112


def test_weight_sum_explicit_weights_and_errors():
    opts = VerifyOptions(weights=((2, 0),))
    results = check(IdentityId.WEIGHT_SUM_FDV, SimpleType("A", 2), opts)
    assert len(results) == 1 and results[0].passed and results[0].label == "(2,0)"

    with pytest.raises(InputError):
        check(IdentityId.WEIGHT_SUM_FDV, SimpleType("A", 2), VerifyOptions(weights=((1, 0, 0),)))
    with pytest.raises(SizeGuardError):
        check(IdentityId.WEIGHT_SUM_RHO_CHECK, SimpleType("A", 2), VerifyOptions(weights=((3, 3),), max_dim=10))


def test_sweep_cap_limits_fundamental_weights(monkeypatch):
    """
    概要:
        既定スイープは次元が上限以内の基本ウェイトだけを含む（随伴は常に含む）。
    """
    monkeypatch.setenv("LIE_INDEX_SWEEP_MAX_DIM", "10")
    assert get_sweep_max_dim() == 10
    results = check(IdentityId.WEIGHT_SUM_FDV, SimpleType("G", 2))
    assert [r.label for r in results] == ["(0,1)", "(1,0)"]
    results = check(IdentityId.WEIGHT_SUM_FDV, SimpleType("B", 3))
    # 随伴 (0,1,0)、ω1 (7次元)、ω3 (8次元)
    assert [r.label for r in results] == ["(0,1,0)", "(1,0,0)", "(0,0,1)"]
    monkeypatch.setenv("LIE_INDEX_SWEEP_MAX_DIM", "7")
    results = check(IdentityId.WEIGHT_SUM_FDV, SimpleType("B", 3))
    assert [r.label for r in results] == ["(0,1,0)", "(1,0,0)"]


def test_check_rejects_inadmissible_type():
    with pytest.raises(InputError):
        check(IdentityId.STRANGE_FORMULA, SimpleType("D", 3))


def test_parse_identity():
    assert parse_identity("HeightSquareSum") is IdentityId.HEIGHT_SQUARE_SUM
    assert parse_identity("tableentry") is IdentityId.TABLE_ENTRY
    assert parse_identity("DUAL_COXETER_CONJECTURE") is IdentityId.DUAL_COXETER_CONJECTURE
    with pytest.raises(InputError):
        parse_identity("Bogus")


def test_check_all_empty():
    assert check_all([]) == []


def test_check_all_small_ranks_no_failures(smallTypes):
    """
    概要:
        ランク4以下の全型・全恒等式で失敗が0件で、結果は (恒等式, 型, ラベル) 順。
    """
    results = check_all(smallTypes)
    failures = [r for r in results if not r.skipped and not r.passed]
    assert count_failures(results) == 0, f"failures={failures}"
    order = [(list(IdentityId).index(r.identity), r.simple_type.sort_key(), r.label) for r in results]
    assert order == sorted(order)
    assert {r.identity for r in results} == set(IdentityId)
    assert all(r.passed == (r.lhs == r.rhs) for r in results)


def test_check_all_parallel_matches_sequential():
    types = admissible_types(2)
    identities = [IdentityId.STRANGE_FORMULA, IdentityId.WEIGHT_SUM_RHO_CHECK, IdentityId.UNFOLDING]
    sequential = IdentityVerifier(VerifyOptions(workers=1)).check_all(types, identities)
    parallel = IdentityVerifier(VerifyOptions(workers=4)).check_all(types, identities)
    strip = lambda rs: [(r.identity, r.simple_type, r.label, r.lhs, r.rhs, r.passed, r.skipped) for r in rs]  # noqa: E731
    assert strip(sequential) == strip(parallel)


def test_index_integrality_rank_six_fundamentals():
    """
    概要:
        ランク6以下のすべての型で、全基本ウェイトの Dynkin指数が整数。
    """
    results = check_all(admissible_types(6), identities=[IdentityId.INDEX_INTEGRALITY])
    assert results and all(r.passed for r in results)


def test_default_sweep_skips_adjoint_over_guard():
    """
    概要:
        既定スイープで随伴表現がサイズガードを超える場合は例外にせずスキップ結果を返す。
    期待結果:
        - G2 (dim 14) を max_dim=10 で検証: ウェイト和はラベル (0,1) のスキップ1件、7次元の ω1 は通常どおり検証
        - ExponentDecomposition もスキップ
    """
    opts = VerifyOptions(max_dim=10)
    results = check(IdentityId.WEIGHT_SUM_RHO_CHECK, SimpleType("G", 2), opts)
    assert [(r.label, r.skipped) for r in results] == [("(0,1)", True), ("(1,0)", False)]
    assert results[0].passed and results[0].lhs == results[0].rhs == 0
    assert "max_dim=10" in results[0].note
    assert results[1].passed
    decomposition = _single(IdentityId.EXPONENT_DECOMPOSITION, "G2", opts)
    assert decomposition.skipped and "max_dim=10" in decomposition.note


def test_check_all_with_low_guard_collects_results():
    results = check_all([SimpleType("E", 8)], VerifyOptions(max_dim=100))
    assert count_failures(results) == 0
    assert any(r.skipped and r.identity is IdentityId.WEIGHT_SUM_FDV for r in results)


@pytest.mark.parametrize("raw", ["0", "-5"])
def test_sweep_max_dim_must_be_positive(monkeypatch, raw):
    monkeypatch.setenv("LIE_INDEX_SWEEP_MAX_DIM", raw)
    with pytest.raises(InputError):
        get_sweep_max_dim()


def test_check_all_rank_eight_no_failures():
    """
    概要:
        ランク8以下の全型・全恒等式で失敗が0件（ウェイト和の恒等式と F4/E6 などの展開も含む）。
    """
    types = admissible_types(8)
    results = check_all(types)
    failures = [r for r in results if not r.skipped and not r.passed]
    assert count_failures(results) == 0, f"failures={failures}"
    checked = {(r.identity, r.simple_type) for r in results if not r.skipped}
    for t in types:
        assert (IdentityId.WEIGHT_SUM_RHO_CHECK, t) in checked and (IdentityId.WEIGHT_SUM_FDV, t) in checked
    f4_unfolding = [r for r in results if r.identity is IdentityId.UNFOLDING and r.simple_type == SimpleType("F", 4)]
    assert f4_unfolding[0].label == "E6" and f4_unfolding[0].lhs == 156
