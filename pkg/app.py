"""
概要:
    lie-index のコマンドラインエントリポイント
主な仕様:
    - サブコマンド info / table / index / decompose / verify を受け付ける
    - 出力形式は --format text|json|csv（json は1回の実行で1ドキュメント、csv はヘッダー行付き）
    - 有理数は json/csv では "p/q" 文字列で出力（浮動小数点は使わない）
    - 終了コード: 0 成功 / 1 検証失敗・想定外エラー / 2 入力エラー
制限事項:
    - 実際の計算は src/ 以下のモジュールに委譲
    - ログは標準エラー出力のみ（レベルは環境変数 `LogLevel`、既定 WARNING）
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

_PROJECT_ROOT = os.path.abspath(os.path.dirname(__file__))
if _PROJECT_ROOT not in sys.path:
    sys.path.insert(0, _PROJECT_ROOT)

from src.calculate_principal import (  # noqa: E402
    principal_ave_index_rep,
    principal_index,
    principal_index_rep,
    sl2_decompose,
    table_value,
)
from src.calculate_roots import admissible_types, build_root_system, height, parse_simple_type  # noqa: E402
from src.calculate_weights import ave_index_rep, dynkin_index_rep, ensure_within_guard, validate_weight  # noqa: E402
from src.lie_model import CheckResult, InputError, OutputFormat, RootSystem, SimpleType  # noqa: E402
from src.verify_service import IdentityVerifier, VerifyOptions, count_failures, parse_identity  # noqa: E402

logger = logging.getLogger("app")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

DEFAULT_MAX_RANK = 8


def configure_logging() -> None:
    """
    ルートロガーを標準エラー出力に設定する
    - レベルは環境変数 `LogLevel`（DEBUG/INFO/WARNING/ERROR）、未設定・不正値なら WARNING
    """
    raw = os.environ.get("LogLevel", "WARNING").strip().upper()
    level = getattr(logging, raw, logging.WARNING)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        force=True,
    )


def to_dict(obj):
    """
    オブジェクトを再帰的にdictへ変換。NumPy型はPython標準型に、Fractionは "p/q" 文字列に変換。
    """
    if isinstance(obj, Fraction):
        return str(obj)
    elif isinstance(obj, SimpleType):
        return str(obj)
    elif isinstance(obj, Enum):
        return obj.value
    elif isinstance(obj, np.generic):
        return obj.item()
    elif isinstance(obj, dict):
        return {k: to_dict(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [to_dict(i) for i in obj]
    elif hasattr(obj, '__dict__'):
        return {k: to_dict(v) for k, v in obj.__dict__.items()}
    else:
        return obj


def parse_weight(text: str) -> List[int]:
    """
    "1,0,2" 形式のウェイト指定を整数リストに変換する
    """
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise InputError(f"parse_weight: ウェイトはカンマ区切りの整数で指定してください value='{text}'")


def type_summary(rs: RootSystem) -> Dict[str, Any]:
    """
    型ごとの要約（json のキー構成は固定）
    """
    report = principal_index(rs, strict=False)
    return {
        "type": str(rs.simple_type),
        "rank": rs.rank,
        "dim": rs.dim_g,
        "positive_roots": len(rs.positive_roots),
        "coxeter": rs.h,
        "dual_coxeter": rs.h_star,
        "dual_coxeter_of_dual": rs.h_star_dual,
        "r": rs.r,
        "exponents": list(rs.exponents),
        "height_theta": height(rs.theta),
        "height_theta_s": height(rs.theta_s),
        "index": {
            "closed": report.closed_form,
            "heights": report.via_heights,
            "exponents": report.via_exponents,
        },
    }


def check_to_dict(result: CheckResult) -> Dict[str, Any]:
    # elapsed は出力を決定的に保つため含めない
    return {
        "identity": result.identity,
        "type": result.simple_type,
        "label": result.label,
        "lhs": result.lhs,
        "rhs": result.rhs,
        "passed": result.passed,
        "skipped": result.skipped,
        "note": result.note,
    }


def _flatten(row: Dict[str, Any]) -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in row.items():
        if isinstance(value, dict):
            for sub, inner in value.items():
                flat[f"{key}_{sub}"] = inner
        elif isinstance(value, list):
            flat[key] = " ".join(str(v) for v in value)
        else:
            flat[key] = value
    return flat


def render_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    flat_rows = [_flatten(to_dict(row)) for row in rows]
    if not flat_rows:
        return ""
    writer = csv.DictWriter(buffer, fieldnames=list(flat_rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat_rows)
    return buffer.getvalue()


def render_json(document: Any) -> str:
    return json.dumps(to_dict(document), ensure_ascii=False, indent=2) + "\n"


def _text_value(value: Any) -> str:
    value = to_dict(value)
    if isinstance(value, list):
        return ",".join(str(v) for v in value)
    if isinstance(value, dict):
        return " ".join(f"{k}={_text_value(v)}" for k, v in value.items())
    return str(value)


def render_text_block(row: Dict[str, Any]) -> str:
    return "".join(f"{key}: {_text_value(value)}\n" for key, value in row.items())


# --- サブコマンド ---


def cmd_info(args: argparse.Namespace, fmt: OutputFormat) -> int:
    rs = build_root_system(parse_simple_type(args.type))
    summary = type_summary(rs)
    if fmt is OutputFormat.JSON:
        sys.stdout.write(render_json(summary))
    elif fmt is OutputFormat.CSV:
        sys.stdout.write(render_csv([summary]))
    else:
        sys.stdout.write(render_text_block(summary))
    return EXIT_OK


def cmd_table(args: argparse.Namespace, fmt: OutputFormat) -> int:
    rows = []
    for t in admissible_types(args.max_rank):
        report = principal_index(build_root_system(t), strict=False)
        rows.append({
            "type": str(t),
            "table": table_value(t),
            "closed": report.closed_form,
            "heights": report.via_heights,
            "exponents": report.via_exponents,
            "agree": report.agree and report.closed_form == table_value(t),
        })
    if fmt is OutputFormat.JSON:
        sys.stdout.write(render_json({"rows": rows}))
    elif fmt is OutputFormat.CSV:
        sys.stdout.write(render_csv(rows))
    else:
        lines = [f"{'type':<6}{'table':>8}{'closed':>8}{'heights':>9}{'exponents':>11}  agree"]
        for row in rows:
            lines.append(
                f"{row['type']:<6}{row['table']:>8}{str(row['closed']):>8}{str(row['heights']):>9}"
                f"{str(row['exponents']):>11}  {'yes' if row['agree'] else 'NO'}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if all(row["agree"] for row in rows) else EXIT_FAILURE


def _representation_report(rs: RootSystem, weight: Sequence[int], max_dim: Optional[int]) -> Dict[str, Any]:
    lam = validate_weight(rs, weight)
    dim = ensure_within_guard(rs, lam, max_dim)
    decomposition = sl2_decompose(rs, lam, max_dim)
    return {
        "type": str(rs.simple_type),
        "weight": list(lam),
        "dim": dim,
        "dynkin_index": dynkin_index_rep(rs, lam),
        "ave_index": ave_index_rep(rs, lam),
        "principal_index": principal_index_rep(rs, lam, max_dim),
        "principal_ave_index": principal_ave_index_rep(rs, lam, max_dim),
        "decomposition": [{"d": d, "multiplicity": n} for d, n in decomposition.parts],
    }


def cmd_index(args: argparse.Namespace, fmt: OutputFormat) -> int:
    rs = build_root_system(parse_simple_type(args.type))
    if args.weight is None:
        if args.command == "decompose":
            raise InputError("cmd_index: decompose には --weight の指定が必要です")
        report = principal_index(rs, strict=False)
        row = {
            "type": str(rs.simple_type),
            "closed": report.closed_form,
            "heights": report.via_heights,
            "exponents": report.via_exponents,
            "agree": report.agree,
        }
        if fmt is OutputFormat.JSON:
            sys.stdout.write(render_json(row))
        elif fmt is OutputFormat.CSV:
            sys.stdout.write(render_csv([row]))
        else:
            sys.stdout.write(render_text_block(row))
        return EXIT_OK if report.agree else EXIT_FAILURE

    row = _representation_report(rs, parse_weight(args.weight), args.max_dim)
    if fmt is OutputFormat.JSON:
        sys.stdout.write(render_json(row))
    elif fmt is OutputFormat.CSV:
        if args.command == "decompose":
            parts = [{"type": row["type"], "weight": row["weight"], **part} for part in row["decomposition"]]
            sys.stdout.write(render_csv(parts))
        else:
            summary = dict(row)
            summary["decomposition"] = [f"{p['multiplicity']}xR{p['d']}" for p in row["decomposition"]]
            sys.stdout.write(render_csv([summary]))
    else:
        parts = " + ".join(f"{p['multiplicity']}·R_{p['d']}" for p in row["decomposition"])
        if args.command == "decompose":
            sys.stdout.write(f"{row['type']} {_text_value(row['weight'])} (dim {row['dim']}) = {parts}\n")
        else:
            summary = {k: v for k, v in row.items() if k != "decomposition"}
            summary["decomposition"] = parts
            sys.stdout.write(render_text_block(summary))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, fmt: OutputFormat) -> int:
    # --all と --type は排他。どちらも無い場合は --all と同じ
    if args.all and args.type:
        raise InputError("cmd_verify: --all と --type は同時に指定できません")
    if args.type:
        types = sorted({parse_simple_type(t) for t in args.type}, key=lambda t: t.sort_key())
    else:
        types = admissible_types(args.max_rank)
    identities = [parse_identity(name) for name in args.identity] if args.identity else None
    weights = ()
    if args.weight is not None:
        if len(types) != 1:
            raise InputError("cmd_verify: --weight は --type を1つだけ指定した場合に使えます")
        weights = (tuple(parse_weight(args.weight)),)
    options = VerifyOptions(
        weights=weights,
        max_dim=args.max_dim,
        sweep_max_dim=args.sweep_max_dim,
        workers=args.workers,
    )
    results = IdentityVerifier(options).check_all(types, identities)
    failures = count_failures(results)
    logger.info(f"cmd_verify: results={len(results)} failures={failures}")

    if fmt is OutputFormat.JSON:
        documents = []
        for t in types:
            summary = type_summary(build_root_system(t))
            summary["checks"] = [check_to_dict(r) for r in results if r.simple_type == t]
            documents.append(summary)
        sys.stdout.write(render_json({"types": documents, "total": len(results), "failures": failures}))
    elif fmt is OutputFormat.CSV:
        sys.stdout.write(render_csv([check_to_dict(r) for r in results]))
    else:
        lines = []
        for r in results:
            status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
            label = f" {r.label}" if r.label else ""
            line = f"{status} {r.identity.value} {r.simple_type}{label}"
            if not r.skipped:
                line += f": {r.lhs} = {r.rhs}"
            if r.note:
                line += f"  [{r.note}]"
            lines.append(line)
        lines.append(f"{len(results)} checks, {failures} failures")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if failures == 0 else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--max-rank", type=int, default=DEFAULT_MAX_RANK)
    common.add_argument("--max-dim", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="lie-index",
        description="単純リー環のDynkin指数と主sl2部分環の指数を厳密計算・検証する",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", parents=[common], help="ルート系の基本データ")
    info.add_argument("type")
    info.set_defaults(handler=cmd_info)

    table = sub.add_parser("table", parents=[common], help="主sl2の指数の一覧表")
    table.set_defaults(handler=cmd_table)

    for name, help_text in (("index", "指数（--weight 指定で表現の指数）"), ("decompose", "主sl2への制限による分解")):
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("type")
        cmd.add_argument("--weight", default=None)
        cmd.set_defaults(handler=cmd_index)

    verify = sub.add_parser("verify", parents=[common], help="恒等式の検証")
    verify.add_argument("--type", action="append", default=[])
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--identity", action="append", default=[])
    verify.add_argument("--weight", default=None)
    verify.add_argument("--workers", type=int, default=1)
    verify.add_argument("--sweep-max-dim", type=int, default=None)
    verify.set_defaults(handler=cmd_verify)
    return parser


def _error_document(e: Exception, function: str) -> Dict[str, Any]:
    return {"error": {"message": str(e), "type": type(e).__name__, "function": function}}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLIのエントリポイント
    Args:
        argv (Sequence[str]): 引数（省略時は sys.argv[1:]）
    Returns:
        int: 終了コード
    """
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    fmt = OutputFormat(args.format)
    logger.debug(f"[app.py] args: {vars(args)}")
    try:
        if args.max_rank < 1:
            raise InputError(f"main: --max-rank は1以上で指定してください value={args.max_rank}")
        if args.max_dim is not None and args.max_dim <= 0:
            raise InputError(f"main: --max-dim は正の整数で指定してください value={args.max_dim}")
        return args.handler(args, fmt)
    except InputError as e:
        logger.debug(f"[app.py] input error: {e}")
        if fmt is OutputFormat.JSON:
            sys.stdout.write(render_json(_error_document(e, args.handler.__name__)))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.exception(f"[app.py] unexpected error: {e}")
        if fmt is OutputFormat.JSON:
            sys.stdout.write(render_json(_error_document(e, args.handler.__name__)))
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
