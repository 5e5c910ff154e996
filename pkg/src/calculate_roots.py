"""
概要:
    単純リー環のルート系を厳密な有理数演算で構成するモジュール
主な仕様:
    - Bourbaki順序のCartan行列（規約 a_ij = 2(α_i,α_j)/(α_j,α_j) = ⟨α_i, α_j∨⟩）
    - ルート列による高さごとの閉包で正ルートを列挙
    - 正規化形式 ((θ,θ)=2) と標準形式 (正規化/2h*)
    - 最高ルート θ、短い支配的ルート θ_s、比 r、ρ∨、Coxeter数、双対Coxeter数、指数
    - 双対ルート系（Cartan行列の転置）
制限事項:
    - 浮動小数点は一切使用しない（Fraction / 整数のみ）
    - D3、B1、C1 は同型な型へ読み替えずに拒否する
"""
from __future__ import annotations

import logging
import re
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
import sympy

from .lie_model import (
    ADMISSIBLE_RANKS,
    BilinearForm,
    ConsistencyError,
    InputError,
    Normalization,
    RationalVector,
    Root,
    RootSystem,
    SimpleType,
    Weight,
)

logger = logging.getLogger(__name__)

_TYPE_PATTERN = re.compile(r"^\s*([A-Ga-g])(\d+)\s*$")

# 双対ルート系の型ラベル（ノード順は転置行列に従う）
_DUAL_FAMILY = {"B": "C", "C": "B"}


def make_simple_type(family: str, rank: int) -> SimpleType:
    """
    (family, rank) が許容される組かを検証して SimpleType を返す
    :param family: str 系列 (A〜G)
    :param rank: int ランク
    :return: SimpleType
    例外:
        InputError: 許容されない組の場合
    """
    family = str(family).upper()
    if family not in ADMISSIBLE_RANKS:
        raise InputError(f"make_simple_type: 未知の系列です family='{family}' rank={rank}")
    low, high = ADMISSIBLE_RANKS[family]
    if isinstance(rank, bool) or not isinstance(rank, (int, np.integer)):
        raise InputError(f"make_simple_type: ランクは整数で指定してください family='{family}' rank={rank!r}")
    rank = int(rank)
    if rank < low or (high is not None and rank > high) or (family == "E" and rank not in (6, 7, 8)):
        raise InputError(f"make_simple_type: 許容されない型です family='{family}' rank={rank}")
    return SimpleType(family, rank)


def parse_simple_type(text: str) -> SimpleType:
    """
    "G2", "b3", "E8" のような型文字列を解釈する（大文字小文字は区別しない）
    :param text: str 型文字列
    :return: SimpleType
    """
    match = _TYPE_PATTERN.match(text or "")
    if match is None:
        raise InputError(f"parse_simple_type: 型文字列を解釈できません value='{text}'")
    return make_simple_type(match.group(1).upper(), int(match.group(2)))


def admissible_types(max_rank: int = 8) -> List[SimpleType]:
    """
    ランク max_rank 以下の許容されるすべての型を A〜G、ランク昇順で返す
    :param max_rank: int ランク上限
    :return: List[SimpleType]
    """
    result: List[SimpleType] = []
    for family, (low, high) in ADMISSIBLE_RANKS.items():
        top = max_rank if high is None else min(high, max_rank)
        for rank in range(low, top + 1):
            if family == "E" and rank not in (6, 7, 8):
                continue
            result.append(SimpleType(family, rank))
    return result


def cartan_matrix(t: SimpleType) -> Tuple[Root, ...]:
    """
    Bourbaki順序の標準Cartan行列を返す
    規約: a_ij = 2(α_i,α_j)/(α_j,α_j)。行 i は α_i の基本ウェイト座標。
    :param t: SimpleType
    :return: Tuple[Root, ...] n×n 整数行列
    """
    t = make_simple_type(t.family, t.rank)
    n = t.rank
    a = 2 * np.eye(n, dtype=np.int64)
    edges: List[Tuple[int, int]] = []
    if t.family in ("A", "B", "C", "F", "G"):
        edges = [(i, i + 1) for i in range(n - 1)]
    elif t.family == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif t.family == "E":
        # α1-α3-α4-α5-…、α2 は α4 に接続
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
    for i, j in edges:
        a[i, j] = a[j, i] = -1
    if t.family == "B":
        # α_n が短い
        a[n - 2, n - 1] = -2
    elif t.family == "C":
        # α_n が長い
        a[n - 1, n - 2] = -2
    elif t.family == "F":
        # α1, α2 が長い
        a[1, 2] = -2
    elif t.family == "G":
        # α1 が短い
        a[1, 0] = -3
    return tuple(tuple(int(v) for v in row) for row in a)


def validate_cartan(cartan: Sequence[Sequence[int]]) -> None:
    """
    Cartan行列の基本的な性質を検証する
    例外:
        InputError: 正方でない、対角が2でない、非対角が正、零パターンが非対称、退化している場合
    """
    a = np.asarray(cartan, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InputError(f"validate_cartan: 正方行列ではありません shape={a.shape}")
    if not np.all(np.diag(a) == 2):
        raise InputError(f"validate_cartan: 対角成分が2ではありません cartan={a.tolist()}")
    off = a - np.diag(np.diag(a))
    if np.any(off > 0):
        raise InputError(f"validate_cartan: 非対角成分に正の値があります cartan={a.tolist()}")
    if not np.array_equal(off == 0, (off == 0).T):
        raise InputError(f"validate_cartan: a_ij=0 と a_ji=0 が対応していません cartan={a.tolist()}")
    if sympy.Matrix(a.tolist()).det() == 0:
        raise InputError(f"validate_cartan: 行列式が0です cartan={a.tolist()}")


def height(gamma: Sequence[int]) -> int:
    return int(sum(gamma))


def root_to_weight(cartan: Sequence[Sequence[int]], gamma: Sequence[int]) -> Weight:
    """
    単純ルート座標 → 基本ウェイト座標（Aᵀ を左から掛ける）
    """
    a = np.asarray(cartan, dtype=np.int64)
    if len(gamma) != a.shape[0]:
        raise InputError(f"root_to_weight: 次元が一致しません len={len(gamma)} rank={a.shape[0]}")
    return tuple(int(v) for v in a.T @ np.asarray(gamma, dtype=np.int64))


def positive_roots(cartan: Sequence[Sequence[int]]) -> Tuple[Root, ...]:
    """
    高さごとの閉包で正ルート全体 Δ⁺ を構成する
    γ+α_i がルート ⟺ p_i(γ) − ⟨γ, α_i∨⟩ > 0（p_i は γ−kα_i が既出となる最大の k）
    :param cartan: Cartan行列
    :return: Tuple[Root, ...] (高さ, 辞書順) でソート済み
    """
    validate_cartan(cartan)
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    known = set(simple)
    layer = sorted(simple)
    result: List[Root] = list(layer)
    while layer:
        upper = set()
        for gamma in layer:
            pairing = root_to_weight(cartan, gamma)
            for i in range(n):
                p = 0
                probe = list(gamma)
                while True:
                    probe[i] -= 1
                    if tuple(probe) not in known:
                        break
                    p += 1
                if p - pairing[i] > 0:
                    raised = list(gamma)
                    raised[i] += 1
                    upper.add(tuple(raised))
        layer = sorted(upper)
        known.update(layer)
        result.extend(layer)
    logger.debug(f"positive_roots: rank={n} count={len(result)} max_height={height(result[-1])}")
    return tuple(sorted(result, key=lambda g: (height(g), g)))


def _symmetrizer(cartan: Sequence[Sequence[int]]) -> RationalVector:
    """
    d_j a_ij = d_i a_ji を満たす d（最大値1に正規化）。d_j = (α_j,α_j)/2。
    """
    n = len(cartan)
    d: Dict[int, Fraction] = {0: Fraction(1)}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and j not in d:
                d[j] = d[i] * Fraction(cartan[j][i], cartan[i][j])
                queue.append(j)
    if len(d) != n:
        raise ConsistencyError(f"_symmetrizer: Dynkin図形が連結ではありません cartan={cartan}")
    top = max(d.values())
    result = tuple(d[j] / top for j in range(n))
    for i in range(n):
        for j in range(n):
            if cartan[i][j] * result[j] != cartan[j][i] * result[i]:
                raise ConsistencyError(f"_symmetrizer: 対称化できません cartan={cartan}")
    return result


def normalized_form(cartan: Sequence[Sequence[int]]) -> BilinearForm:
    """
    正規化された不変双線形形式（長いルートの長さの2乗が2）
    gram_ij = a_ij·d_j
    """
    d = _symmetrizer(cartan)
    n = len(cartan)
    gram = tuple(tuple(cartan[i][j] * d[j] for j in range(n)) for i in range(n))
    return BilinearForm(gram=gram, normalization=Normalization.NORMALIZED)


def canonical_form(rs: RootSystem) -> BilinearForm:
    """
    Killing形式から誘導される標準形式 = 正規化形式 / (2h*)
    """
    factor = Fraction(1, 2 * rs.h_star)
    gram = tuple(tuple(v * factor for v in row) for row in rs.form.gram)
    return BilinearForm(gram=gram, normalization=Normalization.CANONICAL)


def pairing(form: BilinearForm, x: Sequence, y: Sequence) -> Fraction:
    """
    単純ルート座標モデル上の (x, y) を厳密に計算する
    :param form: BilinearForm
    :param x: 単純ルート座標（ウェイトは事前に weight_to_root で変換）
    :param y: 単純ルート座標
    :return: Fraction
    """
    n = form.size
    if len(x) != n or len(y) != n:
        raise InputError(f"pairing: 次元が一致しません len(x)={len(x)} len(y)={len(y)} rank={n}")
    gram = np.array(form.gram, dtype=object)
    value = np.dot(np.dot(np.array(x, dtype=object), gram), np.array(y, dtype=object))
    return Fraction(value)


def weight_to_root(rs: RootSystem, w: Sequence[int]) -> RationalVector:
    """
    基本ウェイト座標 → 単純ルート座標（有理数）
    """
    if len(w) != rs.rank:
        raise InputError(f"weight_to_root: 次元が一致しません len={len(w)} rank={rs.rank}")
    return tuple(sum((row[j] * w[j] for j in range(rs.rank)), Fraction(0)) for row in rs.weight_to_root)


def weight_root_pairing(rs: RootSystem, w: Sequence[int], gamma: Sequence) -> Fraction:
    """
    (w, γ)。(ω_i, α_j) = δ_ij d_j を使い、逆行列を経由せずに計算する
    """
    return sum((Fraction(w[j]) * rs.symmetrizer[j] * gamma[j] for j in range(rs.rank)), Fraction(0))


def weight_pairing(rs: RootSystem, w: Sequence[int], v: Sequence[int]) -> Fraction:
    """
    2つのウェイト（基本ウェイト座標）の正規化形式での内積
    """
    return weight_root_pairing(rs, w, weight_to_root(rs, v))


def _inverse_transpose(cartan: Sequence[Sequence[int]]) -> Tuple[RationalVector, ...]:
    inv = sympy.Matrix(cartan).T.inv()
    n = len(cartan)
    return tuple(tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)) for i in range(n))


def _squared_length(form: BilinearForm, gamma: Sequence[int]) -> Fraction:
    return pairing(form, gamma, gamma)


def _find_distinguished(cartan, roots, form) -> Tuple[Root, Root, int]:
    lengths = {gamma: _squared_length(form, gamma) for gamma in roots}
    longest = max(lengths.values())
    shortest = min(lengths.values())

    def dominant_of_length(value: Fraction) -> Root:
        found = [g for g in roots if lengths[g] == value and min(root_to_weight(cartan, g)) >= 0]
        if len(found) != 1:
            raise ConsistencyError(f"_find_distinguished: 支配的ルートが一意ではありません length={value} found={found}")
        return found[0]

    theta = dominant_of_length(longest)
    theta_s = dominant_of_length(shortest)
    ratio = longest / shortest
    if ratio.denominator != 1 or ratio not in (1, 2, 3):
        raise ConsistencyError(f"_find_distinguished: 長さ比が不正です r={ratio}")
    return theta, theta_s, int(ratio)


def _exponents_from_heights(roots: Sequence[Root]) -> Tuple[int, ...]:
    """
    高さのヒストグラムの共役分割として指数を求める
    """
    counts = np.bincount([height(g) for g in roots])[1:]
    exps = [int(np.count_nonzero(counts >= i)) for i in range(1, int(counts.max()) + 1)]
    return tuple(sorted(exps))


def _core(cartan: Tuple[Root, ...]) -> Dict[str, object]:
    roots = positive_roots(cartan)
    form = normalized_form(cartan)
    theta, theta_s, r = _find_distinguished(cartan, roots, form)
    d = _symmetrizer(cartan)
    n = len(cartan)
    # (ρ, θ∨) = 2(ρ,θ)/(θ,θ)、(ρ, α_j) = d_j
    rho_theta = sum((d[j] * theta[j] for j in range(n)), Fraction(0))
    rho_theta_check = 2 * rho_theta / _squared_length(form, theta)
    if rho_theta_check.denominator != 1:
        raise ConsistencyError(f"_core: (ρ,θ∨) が整数ではありません value={rho_theta_check}")
    return {
        "roots": roots,
        "form": form,
        "symmetrizer": d,
        "theta": theta,
        "theta_s": theta_s,
        "r": r,
        "h_star": 1 + int(rho_theta_check),
    }


def root_system_from_cartan(simple_type: SimpleType, cartan: Sequence[Sequence[int]]) -> RootSystem:
    """
    任意の（検証済み）Cartan行列からルート系一式を構成する
    :param simple_type: SimpleType ラベル
    :param cartan: Cartan行列
    :return: RootSystem
    """
    cartan = tuple(tuple(int(v) for v in row) for row in cartan)
    core = _core(cartan)
    dual_core = _core(tuple(zip(*cartan)))
    roots: Tuple[Root, ...] = core["roots"]
    form: BilinearForm = core["form"]
    n = len(cartan)

    rho_check = [Fraction(0)] * n
    for gamma in roots:
        length = _squared_length(form, gamma)
        for j in range(n):
            rho_check[j] += Fraction(gamma[j]) / length

    exps = _exponents_from_heights(roots)
    h = height(core["theta"]) + 1
    dim_g = n + 2 * len(roots)
    if exps[0] != 1 or exps[-1] != h - 1 or sum(2 * m + 1 for m in exps) != dim_g:
        raise ConsistencyError(f"root_system_from_cartan: 指数の整合性が崩れています type={simple_type} exponents={exps}")
    if any(exps[i] + exps[n - 1 - i] != h for i in range(n)):
        raise ConsistencyError(f"root_system_from_cartan: 指数の対称性が崩れています type={simple_type} exponents={exps}")

    rs = RootSystem(
        simple_type=simple_type,
        cartan=cartan,
        positive_roots=roots,
        form=form,
        symmetrizer=core["symmetrizer"],
        weight_to_root=_inverse_transpose(cartan),
        theta=core["theta"],
        theta_s=core["theta_s"],
        r=core["r"],
        rho=tuple([1] * n),
        rho_check=tuple(rho_check),
        exponents=exps,
        h=h,
        h_star=core["h_star"],
        h_star_dual=dual_core["h_star"],
        dim_g=dim_g,
    )
    logger.debug(
        f"root_system_from_cartan: type={simple_type} dim={dim_g} h={h} h*={rs.h_star} "
        f"h*(dual)={rs.h_star_dual} r={rs.r}"
    )
    return rs


@lru_cache(maxsize=None)
def build_root_system(t: SimpleType) -> RootSystem:
    """
    SimpleType からルート系を構成する（型ごとにキャッシュ）
    """
    t = make_simple_type(t.family, t.rank)
    return root_system_from_cartan(t, cartan_matrix(t))


def distinguished_roots(rs: RootSystem) -> Tuple[Root, Root, int]:
    """
    (θ, θ_s, r) を正ルートと形式から求め直す
    """
    return _find_distinguished(rs.cartan, rs.positive_roots, rs.form)


def dual_simple_type(t: SimpleType) -> SimpleType:
    return SimpleType(_DUAL_FAMILY.get(t.family, t.family), t.rank)


@lru_cache(maxsize=None)
def dual_root_system(rs: RootSystem) -> RootSystem:
    """
    双対ルート系（コルート γ∨ = 2γ/(γ,γ) のなすルート系）
    Cartan行列は元の転置。F4, G2 ではノード順が逆になった同じ型となる。
    """
    return root_system_from_cartan(dual_simple_type(rs.simple_type), tuple(zip(*rs.cartan)))


def coroot(rs: RootSystem, gamma: Sequence[int]) -> RationalVector:
    """
    γ∨ = 2γ/(γ,γ)（元のルート系の単純ルート座標モデル）
    """
    length = _squared_length(rs.form, gamma)
    return tuple(Fraction(2 * c) / length for c in gamma)


def coxeter_data(rs: RootSystem) -> Tuple[int, int, int]:
    """
    (h, h*, h*(g∨)) を返す。h*(g∨) は双対ルート系上で直接計算する。
    """
    h = height(rs.theta) + 1
    rho_theta = weight_root_pairing(rs, rs.rho, rs.theta)
    h_star = 1 + 2 * rho_theta / _squared_length(rs.form, rs.theta)
    if h_star.denominator != 1:
        raise ConsistencyError(f"coxeter_data: h* が整数ではありません type={rs.simple_type} h*={h_star}")
    return h, int(h_star), dual_root_system(rs).h_star


def exponents(rs: RootSystem) -> List[int]:
    """
    正ルートの高さヒストグラムの共役分割として指数を返す（昇順）
    """
    return list(_exponents_from_heights(rs.positive_roots))


def sum_heights(rs: RootSystem) -> int:
    return sum(height(g) for g in rs.positive_roots)


def fundamental_weights(rs: RootSystem) -> List[Weight]:
    n = rs.rank
    return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]


def adjoint_weight(rs: RootSystem) -> Weight:
    """
    随伴表現の最高ウェイト（θ の基本ウェイト座標）
    """
    return root_to_weight(rs.cartan, rs.theta)


def unfolding_partner(t: SimpleType):
    """
    多重辺を持つ型の展開先（単純レース型）を返す。該当しなければ None。
    C_n → A_{2n−1}, B_n → D_{n+1}, F4 → E6, G2 → D4
    """
    if t.family == "C":
        return SimpleType("A", 2 * t.rank - 1)
    if t.family == "B" and t.rank + 1 >= 4:
        return SimpleType("D", t.rank + 1)
    if t.family == "F":
        return SimpleType("E", 6)
    if t.family == "G":
        return SimpleType("D", 4)
    return None
