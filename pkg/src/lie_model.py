"""
概要:
    単純リー環のルート系・表現・主sl2指数計算用のデータモデル定義
主な仕様:
    - 単純型、Cartan行列、双線形形式、ルート系、ウェイト系、sl2分解、指数レポート、検証結果をクラスで定義
    - すべて生成後は不変（frozen dataclass）
    - 有理数は fractions.Fraction（常に既約、分母は正）
制限事項:
    - 座標はBourbaki順序の単純ルート基底（ルート）と基本ウェイト基底（ウェイト）で保持
    - 生成後に値を書き換えられないよう、__init__ を持つ通常のクラスではなく frozen dataclass で定義する
    - RootSystem は eq=False（同一インスタンスのみ等しい）で、lru_cache のキーとして使う
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import timedelta
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

# 型エイリアス（整数座標ベクトル）
Root = Tuple[int, ...]
Weight = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]

# (family, 最小ランク, 最大ランク)。Noneは上限なし
ADMISSIBLE_RANKS: Dict[str, Tuple[int, Optional[int]]] = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (4, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}


class LieIndexError(Exception):
    """
    本パッケージの例外基底クラス
    """


class InputError(LieIndexError, ValueError):
    """
    入力エラー（許容されない型、負の座標、次元不一致など）
    """


class SizeGuardError(InputError):
    """
    表現の次元がサイズガードを超えた場合のエラー
    :param dim: int 表現の次元
    :param max_dim: int 許容上限
    """
    def __init__(self, message: str, dim: int, max_dim: int):
        super().__init__(message)
        self.dim = dim
        self.max_dim = max_dim


class ConsistencyError(LieIndexError, RuntimeError):
    """
    独立な計算経路どうしが一致しない、または整数性が崩れた場合のエラー
    :param report: 不一致を示すオブジェクト（IndexReport等、任意）
    """
    def __init__(self, message: str, report: object = None):
        super().__init__(message)
        self.report = report


class Normalization(Enum):
    """
    双線形形式の正規化
    """
    NORMALIZED = "Normalized"
    CANONICAL = "Canonical"


class WeightSumMode(Enum):
    """
    weight_sum_squares の集計モード
    """
    RHO_CHECK_NORMALIZED = "RhoCheckNormalized"
    RHO_CANONICAL = "RhoCanonical"


class IdentityId(Enum):
    """
    検証する恒等式の識別子（列挙順が結果の並び順）
    """
    STRANGE_FORMULA = "StrangeFormula"
    CANONICAL_GRAM = "CanonicalGram"
    NORMALIZED_REWRITE = "NormalizedRewrite"
    HEIGHT_SQUARE_SUM = "HeightSquareSum"
    MAIN_THEOREM_THREE_WAY = "MainTheoremThreeWay"
    TABLE_ENTRY = "TableEntry"
    UNFOLDING = "Unfolding"
    WEIGHT_SUM_RHO_CHECK = "WeightSumRhoCheck"
    WEIGHT_SUM_FDV = "WeightSumFdV"
    SIMPLY_LACED_HEIGHT_SUM = "SimplyLacedHeightSum"
    GENERAL_HEIGHT_SUM = "GeneralHeightSum"
    EXPONENT_DECOMPOSITION = "ExponentDecomposition"
    INDEX_INTEGRALITY = "IndexIntegrality"
    DUAL_COXETER_CONJECTURE = "DualCoxeterConjecture"


class OutputFormat(Enum):
    """
    CLIの出力形式
    """
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True, order=True)
class SimpleType:
    """
    単純リー環の分類ラベル
    :param family: str 系列 (A〜G)
    :param rank: int ランク
    """
    family: str
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def is_simply_laced(self) -> bool:
        return self.family in ("A", "D", "E")

    def sort_key(self) -> Tuple[int, int]:
        return ("ABCDEFG".index(self.family), self.rank)


@dataclass(frozen=True)
class BilinearForm:
    """
    単純ルート基底上の双線形形式
    :param gram: Tuple[RationalVector, ...] Gram行列 (α_i, α_j)
    :param normalization: Normalization 正規化（Normalized: (θ,θ)=2 / Canonical: Normalized/(2h*)）
    """
    gram: Tuple[RationalVector, ...]
    normalization: Normalization = Normalization.NORMALIZED

    @property
    def size(self) -> int:
        return len(self.gram)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    ルート系一式（生成後は不変。同一インスタンスをキャッシュキーに使うため eq=False）
    :param simple_type: SimpleType 単純型
    :param cartan: Tuple[Root, ...] Cartan行列 a_ij = 2(α_i,α_j)/(α_j,α_j)
    :param positive_roots: Tuple[Root, ...] 正ルート（高さ→辞書順）
    :param form: BilinearForm 正規化形式
    :param symmetrizer: RationalVector d_j = (α_j,α_j)/2
    :param weight_to_root: Tuple[RationalVector, ...] (Aᵀ)⁻¹（基本ウェイト座標→単純ルート座標）
    :param theta: Root 最高ルート
    :param theta_s: Root 短い支配的ルート
    :param r: int 長さ比 (θ,θ)/(θ_s,θ_s)
    :param rho: Weight ρ（基本ウェイト座標ですべて1）
    :param rho_check: RationalVector ρ∨（単純ルート座標）
    :param exponents: Tuple[int, ...] 指数（昇順）
    :param h: int Coxeter数
    :param h_star: int 双対Coxeter数
    :param h_star_dual: int 双対ルート系の双対Coxeter数（双対系上で直接計算）
    :param dim_g: int リー環の次元
    """
    simple_type: SimpleType
    cartan: Tuple[Root, ...]
    positive_roots: Tuple[Root, ...]
    form: BilinearForm
    symmetrizer: RationalVector
    weight_to_root: Tuple[RationalVector, ...]
    theta: Root
    theta_s: Root
    r: int
    rho: Weight
    rho_check: RationalVector
    exponents: Tuple[int, ...]
    h: int
    h_star: int
    h_star_dual: int
    dim_g: int

    @property
    def rank(self) -> int:
        return len(self.cartan)


@dataclass(frozen=True)
class WeightEntry:
    """
    ウェイト系の1エントリ（支配的代表元）
    :param weight: Weight 支配的ウェイト
    :param multiplicity: int 重複度
    :param orbit_size: int Weyl軌道の大きさ
    """
    weight: Weight
    multiplicity: int
    orbit_size: int


@dataclass(frozen=True)
class WeightSystem:
    """
    既約表現のウェイト系（支配的ウェイトのみ保持）
    :param highest_weight: Weight 最高ウェイト λ
    :param entries: Tuple[WeightEntry, ...] dominant_weights と同じ順序
    :param dim: int 表現の次元（Weyl次元公式）
    """
    highest_weight: Weight
    entries: Tuple[WeightEntry, ...]
    dim: int

    def multiplicity(self, weight: Weight) -> int:
        for entry in self.entries:
            if entry.weight == weight:
                return entry.multiplicity
        return 0

    @property
    def mass(self) -> int:
        return sum(e.multiplicity * e.orbit_size for e in self.entries)


@dataclass(frozen=True)
class SL2Decomposition:
    """
    主sl2への制限による既約分解
    :param parts: Tuple[Tuple[int, int], ...] (最高ウェイト d, 重複度 n_d)、d昇順
    """
    parts: Tuple[Tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return sum(n * (d + 1) for d, n in self.parts)

    @property
    def count(self) -> int:
        return sum(n for _, n in self.parts)


@dataclass(frozen=True)
class IndexReport:
    """
    主sl2指数の3経路計算結果
    :param closed_form: Fraction (dim g/6)·h*(g∨)·r
    :param via_heights: Fraction (2/h*)·Σht²
    :param via_exponents: Fraction (1/2h*)·ΣC(2m_i+2,3)
    """
    closed_form: Fraction
    via_heights: Fraction
    via_exponents: Fraction

    @property
    def agree(self) -> bool:
        return self.closed_form == self.via_heights == self.via_exponents


@dataclass(frozen=True)
class CheckResult:
    """
    恒等式検証の結果
    :param identity: IdentityId 恒等式
    :param simple_type: SimpleType 対象の型
    :param lhs: Fraction 左辺
    :param rhs: Fraction 右辺
    :param passed: bool lhs == rhs（厳密一致）
    :param elapsed: timedelta 所要時間
    :param skipped: bool 適用外でスキップしたか
    :param label: str 対象ウェイト・相手型などの補足ラベル
    :param note: str 補足メッセージ
    """
    identity: IdentityId
    simple_type: SimpleType
    lhs: Fraction
    rhs: Fraction
    passed: bool
    elapsed: timedelta = field(default=timedelta(0))
    skipped: bool = False
    label: str = ""
    note: str = ""
