"""
概要:
    恒等式検証サービス
主な仕様:
    - 恒等式ごとに左辺・右辺を独立な経路で計算し、厳密一致で合否を判定
    - ウェイトに関する恒等式は λ ごとに1件ずつ結果を返す（既定: 随伴表現 + 次元がスイープ上限以内の基本ウェイト）
    - 適用外（SimplyLacedHeightSum の非単純レース型、展開先の無い型）はスキップ結果として返す
    - check_all はスレッドプールで並列実行でき、結果は常に (恒等式, 型, ラベル) 順に並べ直す
制限事項:
    - 不一致は例外にせず passed=False の結果として返す（入力エラーのみ例外）
    - 既定スイープでサイズガードを超える表現（随伴表現を含む）はスキップ結果にする。明示指定の λ は SizeGuardError
"""
from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import timedelta
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .calculate_principal import (
    height_square_closed_form,
    principal_index,
    sl2_decompose,
    table_value,
)
from .calculate_roots import (
    adjoint_weight,
    build_root_system,
    canonical_form,
    exponents,
    fundamental_weights,
    height,
    make_simple_type,
    pairing,
    sum_heights,
    unfolding_partner,
    weight_root_pairing,
    weight_to_root,
)
from .calculate_weights import (
    casimir_value,
    get_max_dim,
    validate_weight,
    weight_sum_squares,
    weyl_dim,
)
from .lie_model import (
    CheckResult,
    ConsistencyError,
    IdentityId,
    InputError,
    RootSystem,
    SimpleType,
    Weight,
    WeightSumMode,
)

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_MAX_DIM = 20_000

# A1 上で ind_D(sl2, R_d) = C(d+2,3) を確認する d の上限
SL2_INDEX_MAX_D = 20

_IDENTITY_ORDER = {identity: i for i, identity in enumerate(IdentityId)}


def get_sweep_max_dim(override: Optional[int] = None) -> int:
    """
    ウェイト和の恒等式で既定スイープに含める基本ウェイトの次元上限
    - 引数指定 > 環境変数 `LIE_INDEX_SWEEP_MAX_DIM` > 20000
    """
    if override is not None:
        return int(override)
    raw = os.environ.get("LIE_INDEX_SWEEP_MAX_DIM", "").strip()
    if not raw:
        return DEFAULT_SWEEP_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"get_sweep_max_dim: LIE_INDEX_SWEEP_MAX_DIM が整数ではありません value='{raw}'")
    if value <= 0:
        raise InputError(f"get_sweep_max_dim: LIE_INDEX_SWEEP_MAX_DIM は正の整数で指定してください value={value}")
    return value


def parse_identity(name: str) -> IdentityId:
    """
    "HeightSquareSum" のような名前から IdentityId を返す（大文字小文字は区別しない）
    """
    for identity in IdentityId:
        if identity.value.lower() == str(name).strip().lower() or identity.name.lower() == str(name).strip().lower():
            return identity
    raise InputError(f"parse_identity: 未知の恒等式です name='{name}'")


def format_weight(weight: Sequence[int]) -> str:
    return "(" + ",".join(str(c) for c in weight) + ")"


@dataclass(frozen=True)
class VerifyOptions:
    """
    検証オプション
    :param weights: Tuple[Weight, ...] ウェイト和の恒等式で使う λ（空なら既定スイープ）
    :param max_dim: int サイズガード（省略時は LIE_INDEX_MAX_DIM / 10^6）
    :param sweep_max_dim: int 既定スイープの基本ウェイト次元上限（省略時は LIE_INDEX_SWEEP_MAX_DIM / 20000）
    :param workers: int check_all の並列数（1なら逐次）
    """
    weights: Tuple[Weight, ...] = field(default_factory=tuple)
    max_dim: Optional[int] = None
    sweep_max_dim: Optional[int] = None
    workers: int = 1


class IdentityVerifier:
    """
    恒等式検証サービスクラス
    """
    def __init__(self, options: Optional[VerifyOptions] = None):
        """
        :param options: VerifyOptions 省略時は既定値
        """
        self.options = options or VerifyOptions()
        self.max_dim = get_max_dim(self.options.max_dim)
        self.sweep_max_dim = get_sweep_max_dim(self.options.sweep_max_dim)
        self._procedures: Dict[IdentityId, Callable[[RootSystem], List[CheckResult]]] = {
            IdentityId.STRANGE_FORMULA: self._check_strange_formula,
            IdentityId.CANONICAL_GRAM: self._check_canonical_gram,
            IdentityId.NORMALIZED_REWRITE: self._check_normalized_rewrite,
            IdentityId.HEIGHT_SQUARE_SUM: self._check_height_square_sum,
            IdentityId.MAIN_THEOREM_THREE_WAY: self._check_main_theorem,
            IdentityId.TABLE_ENTRY: self._check_table_entry,
            IdentityId.UNFOLDING: self._check_unfolding,
            IdentityId.WEIGHT_SUM_RHO_CHECK: self._check_weight_sum_rho_check,
            IdentityId.WEIGHT_SUM_FDV: self._check_weight_sum_fdv,
            IdentityId.SIMPLY_LACED_HEIGHT_SUM: self._check_simply_laced_height_sum,
            IdentityId.GENERAL_HEIGHT_SUM: self._check_general_height_sum,
            IdentityId.EXPONENT_DECOMPOSITION: self._check_exponent_decomposition,
            IdentityId.INDEX_INTEGRALITY: self._check_index_integrality,
            IdentityId.DUAL_COXETER_CONJECTURE: self._check_dual_coxeter_conjecture,
        }

    def _result(self, rs: RootSystem, identity: IdentityId, lhs, rhs, label: str = "", note: str = "") -> CheckResult:
        lhs = Fraction(lhs)
        rhs = Fraction(rhs)
        return CheckResult(
            identity=identity,
            simple_type=rs.simple_type,
            lhs=lhs,
            rhs=rhs,
            passed=lhs == rhs,
            label=label,
            note=note,
        )

    def _skip(self, rs: RootSystem, identity: IdentityId, note: str) -> CheckResult:
        return CheckResult(
            identity=identity,
            simple_type=rs.simple_type,
            lhs=Fraction(0),
            rhs=Fraction(0),
            passed=True,
            skipped=True,
            note=note,
        )

    def _sweep_weights(self, rs: RootSystem) -> List[Weight]:
        """
        ウェイト和の恒等式で調べる λ の一覧
        明示指定があればそれを使い、無ければ随伴表現と次元がスイープ上限以内の基本ウェイト
        随伴表現はスイープ上限に関係なく含める（サイズガード超過は各恒等式でスキップ）
        """
        if self.options.weights:
            return [validate_weight(rs, lam) for lam in self.options.weights]
        adjoint = adjoint_weight(rs)
        result = [adjoint]
        for omega in fundamental_weights(rs):
            if omega != adjoint and weyl_dim(rs, omega) <= min(self.sweep_max_dim, self.max_dim):
                result.append(omega)
        return result

    def _guard_skip(self, rs: RootSystem, identity: IdentityId, lam: Weight) -> Optional[CheckResult]:
        """
        既定スイープの λ がサイズガードを超える場合のスキップ結果（明示指定の λ は SizeGuardError のまま）
        """
        dim = weyl_dim(rs, lam)
        if self.options.weights or dim <= self.max_dim:
            return None
        result = self._skip(rs, identity, f"サイズガード超過のためスキップ dim={dim} max_dim={self.max_dim}")
        return replace(result, label=format_weight(lam))

    def _weight_sum_results(
        self, rs: RootSystem, identity: IdentityId, compute: Callable[[Weight], Tuple[Fraction, Fraction]]
    ) -> List[CheckResult]:
        results = []
        for lam in self._sweep_weights(rs):
            skipped = self._guard_skip(rs, identity, lam)
            if skipped is not None:
                results.append(skipped)
                continue
            lhs, rhs = compute(lam)
            results.append(self._result(rs, identity, lhs, rhs, label=format_weight(lam)))
        return results

    # --- 双線形形式 ---

    def _check_strange_formula(self, rs: RootSystem) -> List[CheckResult]:
        # (ρ,ρ) を Gram行列で計算し、(dim g/12)·h* と比較
        rho = weight_to_root(rs, rs.rho)
        lhs = pairing(rs.form, rho, rho)
        rhs = Fraction(rs.dim_g, 12) * rs.h_star
        return [self._result(rs, IdentityId.STRANGE_FORMULA, lhs, rhs)]

    def _gram_identity(self, rs: RootSystem, identity: IdentityId, form, factor: Fraction, weight: int) -> CheckResult:
        """
        factor·(α_i, α_j) = weight·Σ_{γ>0} (α_i,γ)(α_j,γ) を全成分で調べる
        lhs = 成り立つ成分数、rhs = 調べた成分数
        """
        n = rs.rank
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        values = [[pairing(form, simple[i], gamma) for gamma in rs.positive_roots] for i in range(n)]
        matches = 0
        for i in range(n):
            for j in range(n):
                total = sum((a * b for a, b in zip(values[i], values[j])), Fraction(0))
                if factor * form.gram[i][j] == weight * total:
                    matches += 1
        return self._result(rs, identity, matches, n * n, note=f"{n}x{n} Gram行列")

    def _check_canonical_gram(self, rs: RootSystem) -> List[CheckResult]:
        # ⟨x,y⟩ = 2·Σ_{γ>0}⟨x,γ⟩⟨y,γ⟩
        return [self._gram_identity(rs, IdentityId.CANONICAL_GRAM, canonical_form(rs), Fraction(1), 2)]

    def _check_normalized_rewrite(self, rs: RootSystem) -> List[CheckResult]:
        # h*·(x,y) = Σ_{γ>0}(x,γ)(y,γ)
        return [self._gram_identity(rs, IdentityId.NORMALIZED_REWRITE, rs.form, Fraction(rs.h_star), 1)]

    # --- 高さと主sl2の指数 ---

    def _check_height_square_sum(self, rs: RootSystem) -> List[CheckResult]:
        lhs = sum(height(gamma) ** 2 for gamma in rs.positive_roots)
        return [self._result(rs, IdentityId.HEIGHT_SQUARE_SUM, lhs, height_square_closed_form(rs))]

    def _check_main_theorem(self, rs: RootSystem) -> List[CheckResult]:
        report = principal_index(rs, strict=False)
        rhs = report.via_exponents
        if report.via_heights != report.closed_form:
            rhs = report.via_heights
        note = f"closed={report.closed_form} heights={report.via_heights} exponents={report.via_exponents}"
        return [self._result(rs, IdentityId.MAIN_THEOREM_THREE_WAY, report.closed_form, rhs, note=note)]

    def _check_table_entry(self, rs: RootSystem) -> List[CheckResult]:
        computed = principal_index(rs, strict=False).via_heights
        return [self._result(rs, IdentityId.TABLE_ENTRY, computed, table_value(rs.simple_type))]

    def _check_unfolding(self, rs: RootSystem) -> List[CheckResult]:
        partner = unfolding_partner(rs.simple_type)
        if partner is None:
            return [self._skip(rs, IdentityId.UNFOLDING, f"{rs.simple_type} には展開先の単純レース型がありません")]
        lhs = principal_index(rs, strict=False).via_heights
        rhs = principal_index(build_root_system(partner), strict=False).via_heights
        return [self._result(rs, IdentityId.UNFOLDING, lhs, rhs, label=str(partner))]

    def _check_simply_laced_height_sum(self, rs: RootSystem) -> List[CheckResult]:
        if not rs.simple_type.is_simply_laced:
            return [self._skip(rs, IdentityId.SIMPLY_LACED_HEIGHT_SUM, f"{rs.simple_type} は単純レース型ではありません")]
        rhs = Fraction(rs.dim_g * rs.h, 6)
        return [self._result(rs, IdentityId.SIMPLY_LACED_HEIGHT_SUM, sum_heights(rs), rhs)]

    def _check_general_height_sum(self, rs: RootSystem) -> List[CheckResult]:
        # 2(ρ, ρ∨) = Σ ht(γ)
        lhs = 2 * weight_root_pairing(rs, rs.rho, rs.rho_check)
        return [self._result(rs, IdentityId.GENERAL_HEIGHT_SUM, lhs, sum_heights(rs))]

    def _check_dual_coxeter_conjecture(self, rs: RootSystem) -> List[CheckResult]:
        rhs = 1 + height(rs.theta_s)
        note = (
            f"h*(g∨)=1+ht(θ_s) を確認。h*(g∨)=ht(θ_s) とする表記とは1だけずれる "
            f"(ht(θ_s)={height(rs.theta_s)})"
        )
        return [self._result(rs, IdentityId.DUAL_COXETER_CONJECTURE, rs.h_star_dual, rhs, note=note)]

    # --- 表現のウェイト ---

    def _check_weight_sum_rho_check(self, rs: RootSystem) -> List[CheckResult]:
        # Σ(μ,ρ∨)² = (dim V/12)·h*(g∨)·r·(λ,λ+2ρ)
        def compute(lam: Weight) -> Tuple[Fraction, Fraction]:
            lhs = weight_sum_squares(rs, lam, WeightSumMode.RHO_CHECK_NORMALIZED, self.max_dim)
            rhs = Fraction(weyl_dim(rs, lam), 12) * rs.h_star_dual * rs.r * casimir_value(rs, lam)
            return lhs, rhs

        return self._weight_sum_results(rs, IdentityId.WEIGHT_SUM_RHO_CHECK, compute)

    def _check_weight_sum_fdv(self, rs: RootSystem) -> List[CheckResult]:
        # Σ⟨μ,ρ⟩² = (dim V/24)·⟨λ,λ+2ρ⟩（⟨,⟩ = (,)/2h*）
        def compute(lam: Weight) -> Tuple[Fraction, Fraction]:
            lhs = weight_sum_squares(rs, lam, WeightSumMode.RHO_CANONICAL, self.max_dim)
            rhs = Fraction(weyl_dim(rs, lam), 24) * casimir_value(rs, lam) / (2 * rs.h_star)
            return lhs, rhs

        return self._weight_sum_results(rs, IdentityId.WEIGHT_SUM_FDV, compute)

    def _check_exponent_decomposition(self, rs: RootSystem) -> List[CheckResult]:
        """
        g = ⊕ R_{2m_i}：随伴表現の分解から読んだ指数と高さヒストグラムの指数を位置ごとに比較
        """
        if rs.dim_g > self.max_dim:
            note = f"随伴表現がサイズガードを超えるためスキップ dim={rs.dim_g} max_dim={self.max_dim}"
            return [self._skip(rs, IdentityId.EXPONENT_DECOMPOSITION, note)]
        expected = exponents(rs)
        decomposition = sl2_decompose(rs, adjoint_weight(rs), self.max_dim)
        found: List[int] = []
        odd = 0
        for d, n_d in decomposition.parts:
            if d % 2:
                odd += n_d
                continue
            found.extend([d // 2] * n_d)
        matches = sum(1 for a, b in zip(found, expected) if a == b)
        examined = max(len(found) + odd, len(expected))
        note = f"adjoint={found} heights={expected}"
        return [self._result(rs, IdentityId.EXPONENT_DECOMPOSITION, matches, examined, note=note)]

    def _check_index_integrality(self, rs: RootSystem) -> List[CheckResult]:
        """
        ind_D(g, V_λ) が整数であること（全基本ウェイト）と ind_D(g, ad) = 2h*
        A1 ではさらに ind_D(sl2, R_d) = C(d+2,3)（d ≤ 20）
        lhs = 成り立つ項目数、rhs = 調べた項目数
        """
        items = 0
        ok = 0
        for omega in fundamental_weights(rs):
            value = Fraction(weyl_dim(rs, omega), rs.dim_g) * casimir_value(rs, omega)
            items += 1
            ok += int(value.denominator == 1)
        adjoint = adjoint_weight(rs)
        items += 1
        ok += int(Fraction(weyl_dim(rs, adjoint), rs.dim_g) * casimir_value(rs, adjoint) == 2 * rs.h_star)
        if rs.simple_type == SimpleType("A", 1):
            for d in range(SL2_INDEX_MAX_D + 1):
                value = Fraction(weyl_dim(rs, (d,)), rs.dim_g) * casimir_value(rs, (d,))
                items += 1
                ok += int(value == comb(d + 2, 3))
        return [self._result(rs, IdentityId.INDEX_INTEGRALITY, ok, items)]

    # --- 公開インターフェース ---

    def check(self, identity: IdentityId, t: SimpleType) -> List[CheckResult]:
        """
        1つの型について1つの恒等式を検証する
        :param identity: IdentityId
        :param t: SimpleType
        :return: List[CheckResult] ウェイト和の恒等式は λ ごと、それ以外は1件
        例外:
            InputError: 許容されない型、不正な明示ウェイト、サイズガード超過
        """
        identity = IdentityId(identity)
        t = make_simple_type(t.family, t.rank)
        rs = build_root_system(t)
        start = time.perf_counter()
        try:
            results = self._procedures[identity](rs)
        except ConsistencyError as e:
            # 計算経路の内部で整合性が崩れた場合は不合格として記録
            logger.warning(f"check: {identity.value} {t} で整合性エラー: {e}")
            results = [
                CheckResult(
                    identity=identity,
                    simple_type=t,
                    lhs=Fraction(0),
                    rhs=Fraction(1),
                    passed=False,
                    note=str(e),
                )
            ]
        elapsed = timedelta(seconds=time.perf_counter() - start)
        share = elapsed / max(len(results), 1)
        results = [replace(r, elapsed=share) for r in results]
        for r in results:
            logger.debug(
                f"check: {identity.value} {t} {r.label} lhs={r.lhs} rhs={r.rhs} passed={r.passed} skipped={r.skipped}"
            )
        return results

    def check_all(self, types: Sequence[SimpleType], identities: Optional[Sequence[IdentityId]] = None) -> List[CheckResult]:
        """
        指定された型すべてについて恒等式を検証する
        :param types: Sequence[SimpleType] 対象の型（空なら結果も空）
        :param identities: Sequence[IdentityId] 対象の恒等式（省略時は全件）
        :return: List[CheckResult] (恒等式, 型, ラベル) 順
        """
        selected = list(identities) if identities else list(IdentityId)
        jobs = [(identity, t) for identity in selected for t in types]
        if not jobs:
            return []
        logger.info(f"check_all: types={len(types)} identities={len(selected)} workers={self.options.workers}")
        if self.options.workers > 1:
            with ThreadPoolExecutor(max_workers=self.options.workers) as pool:
                batches = list(pool.map(lambda job: self.check(*job), jobs))
        else:
            batches = [self.check(identity, t) for identity, t in jobs]
        results = [r for batch in batches for r in batch]
        return sorted(results, key=_result_sort_key)


def _result_sort_key(result: CheckResult):
    return (_IDENTITY_ORDER[result.identity], result.simple_type.sort_key(), result.label)


def check(identity: IdentityId, t: SimpleType, opts: Optional[VerifyOptions] = None) -> List[CheckResult]:
    return IdentityVerifier(opts).check(identity, t)


def check_all(
    types: Sequence[SimpleType],
    opts: Optional[VerifyOptions] = None,
    identities: Optional[Sequence[IdentityId]] = None,
) -> List[CheckResult]:
    return IdentityVerifier(opts).check_all(types, identities)


def count_failures(results: Sequence[CheckResult]) -> int:
    return sum(1 for r in results if not r.skipped and not r.passed)
