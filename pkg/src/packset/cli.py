"""``packset`` command line.

Every subcommand writes one JSON document (``--out`` or stdout); ``codec``
also writes a JSON-lines transcript. ``--manifest`` records the invocation
so ``packset replay`` can reproduce the output byte for byte.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bounds import (
    bounds_report,
    lower_closed_form,
    max_B_upper,
    maximal_lower_bound_holds,
    min_B_maximal,
)
from .codec import RestrictedCode, build_syndrome_table, decode, encode, inject_error
from .constructions import (
    CyclotomicRun,
    basis_packing_set,
    cyclotomic_construct,
    powers_packing_set,
    quadratic_residue_packing_set,
    sufficient_check,
)
from .errors import EnumerationTooLarge, PacksetError
from .field import FieldCtx, make_extension_field, make_prime_field
from .ntheory import factor, is_prime, make_rng
from .packing import (
    CERTIFIED,
    ErrorAlphabet,
    ErrorVector,
    PackingSet,
    Status,
    enumerate_error_vectors,
    extend_to_maximal,
    verify_packing,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNVERIFIED = 2
EXIT_REFUTED = 3
EXIT_SUFFICIENT_FAILED = 4


class CliError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_list(raw: str) -> list:
    """'1,5', '{1,5}', '[1,5]' or a JSON file holding a list (or an "A" key)."""
    path = Path(raw)
    if path.is_file():
        obj = json.loads(path.read_text())
        return obj["A"] if isinstance(obj, dict) else obj
    raw = raw.strip().strip("{}[]")
    return [int(x) for x in raw.replace(" ", "").split(",") if x]


def _field_for_q(q: int, seed) -> FieldCtx:
    if is_prime(q):
        return make_prime_field(q)
    fact = factor(q)
    if len(fact.factors) != 1:
        raise CliError(f"q = {q} is not a prime power")
    if seed is None:
        raise CliError("extension fields need --seed to pick the modulus")
    p, k = fact.factors[0]
    return make_extension_field(p, k, seed)


def _load_packing(path: str) -> PackingSet:
    obj = json.loads(Path(path).read_text())
    if "packing" in obj:
        obj = obj["packing"]
    return PackingSet.from_json(obj)


def _status_exit(status: Status) -> int:
    if status in CERTIFIED:
        return EXIT_OK
    if status == Status.REFUTED:
        return EXIT_REFUTED
    return EXIT_UNVERIFIED


# -- subcommands -----------------------------------------------------------

def cmd_construct(args) -> tuple[int, str]:
    kind = args.kind
    if kind == "powers":
        ps = powers_packing_set(args.p, args.lam, args.t, args.cap)
        return _status_exit(ps.status), _dump(ps.to_json())
    if kind == "basis":
        if args.seed is None:
            raise CliError("basis needs --seed")
        ps = basis_packing_set(args.p, args.k, args.seed, args.cap)
        return _status_exit(ps.status), _dump(ps.to_json())
    if kind == "qr":
        ps = quadratic_residue_packing_set(args.p, args.cap)
        return _status_exit(ps.status), _dump(ps.to_json())
    if kind == "cyclotomic":
        if args.seed is None:
            raise CliError("cyclotomic needs --seed")
        run = cyclotomic_construct(args.K, args.Q, args.lam, args.t, args.seed, args.cap)
        return _status_exit(run.status), _dump(run.to_json())
    raise CliError(f"unknown construction {kind!r}")


def cmd_verify(args) -> tuple[int, str]:
    ps = _load_packing(args.infile)
    ctx = ps.field
    if args.mode == "exhaustive":
        try:
            verdict = verify_packing(ps, args.cap)
        except EnumerationTooLarge as exc:
            return EXIT_UNVERIFIED, _dump({"verdict": "EnumerationTooLarge", "count": exc.count, "cap": exc.cap})
        out = {"verdict": verdict.status.value, "count": verdict.count}
        if verdict.witness is not None:
            out["witness"] = [w.to_json(ctx) for w in verdict.witness]
        return _status_exit(verdict.status), _dump(out)
    lam = ps.alphabet.lam
    if lam is None:
        raise CliError("sufficient mode needs a limited-magnitude alphabet {1..lambda} over a prime field")
    verdict = sufficient_check(ctx, ps.elements, lam, ps.t, args.cap)
    out = {"verdict": verdict.status.value, "count": verdict.count}
    if verdict.witness is not None:
        out["witness"] = verdict.witness.to_json(ctx)
    code = {Status.VERIFIED_SUFFICIENT: EXIT_OK, Status.TOO_LARGE: EXIT_UNVERIFIED}.get(
        verdict.status, EXIT_SUFFICIENT_FAILED)
    return code, _dump(out)


def cmd_bounds(args) -> tuple[int, str]:
    alphabet = ctx = None
    A = args.A
    if args.alphabet is not None:
        ctx = _field_for_q(args.q, args.seed)
        alphabet = ErrorAlphabet.of(ctx, _parse_list(args.alphabet)).elements
        A = len(alphabet)
    if A is None:
        raise CliError("give --A or --alphabet")
    report = bounds_report(args.q, A, args.t, alphabet, ctx)
    if args.json or args.out:
        return EXIT_OK, _dump(report.to_json())
    return EXIT_OK, report.table() + "\n"


def _random_message(ctx: FieldCtx, n: int, rng) -> list:
    return [ctx.decode(int(x)) for x in rng.integers(0, ctx.q, size=n)]


def _violating_error(ps: PackingSet, rng) -> ErrorVector:
    ctx = ps.field
    allowed = set(ps.alphabet.elements)
    if ps.alphabet.lam is not None and ps.alphabet.lam + 1 < ctx.p:
        bad = [ps.alphabet.lam + 1]
    else:
        bad = [x for x in ctx.elements() if x not in allowed]
    if not bad:
        raise CliError("alphabet is all of F_q^*; no out-of-model value exists")
    pos = int(rng.integers(0, ps.size))
    return ErrorVector((pos,), (bad[int(rng.integers(0, len(bad)))],))


def cmd_codec(args) -> tuple[int, str]:
    if args.seed is None:
        raise CliError("codec needs --seed")
    ps = _load_packing(args.infile)
    if ps.status not in CERTIFIED:
        verdict = verify_packing(ps, args.cap)
        if verdict.status != Status.VERIFIED_EXHAUSTIVE:
            return EXIT_REFUTED, _dump({"error": "packing set is refuted", "verdict": verdict.status.value})
        ps = ps.with_verdict(verdict)
    ctx = ps.field
    code = RestrictedCode(ps)
    table = build_syndrome_table(code, args.cap)
    rng = make_rng(args.seed)

    if args.lambda_violation:
        errors = (_violating_error(ps, rng) for _ in range(args.trials))
    elif args.exhaustive:
        errors = enumerate_error_vectors(ps.size, ps.alphabet.elements, ps.t)
    else:
        errors = None

    lines = []
    ok = mis = uncorrectable = 0
    n_cases = args.trials if errors is None else None
    it = range(n_cases) if errors is None else errors
    for item in it:
        message = _random_message(ctx, code.dimension, rng)
        codeword = encode(code, message)
        if errors is None:
            received, e = inject_error(ctx, codeword, ps.alphabet.elements, ps.t, rng)
        else:
            e = item
            received = list(codeword)
            for i, v in zip(e.support, e.values):
                received[i] = ctx.add(received[i], v)
        result = decode(code, table, received)
        good = result is not None and result.message == message and result.error == e
        if result is None:
            uncorrectable += 1
        elif not good:
            mis += 1
        ok += good
        lines.append(json.dumps({
            "message": [ctx.elem_to_json(x) for x in message],
            "codeword": [ctx.elem_to_json(x) for x in codeword],
            "error": e.to_json(ctx),
            "received": [ctx.elem_to_json(x) for x in received],
            "decoded_ok": bool(good),
        }))
    total = len(lines)
    if args.transcript:
        Path(args.transcript).write_text("".join(line + "\n" for line in lines))
    summary = {
        "cases": total,
        "in_model": not args.lambda_violation,
        "decoded_ok": ok,
        "mis_decodes": mis,
        "uncorrectable": uncorrectable,
        "success_rate": (ok / total) if total else None,
        "table_size": len(table),
        "rate": code.rate,
    }
    failed = not args.lambda_violation and ok != total
    return (EXIT_ERROR if failed else EXIT_OK), _dump(summary)


def cmd_maximal(args) -> tuple[int, str]:
    ctx = _field_for_q(args.q, args.seed)
    alphabet = ErrorAlphabet.of(ctx, _parse_list(args.A))
    start = _parse_list(args.start) if args.start else []
    if args.order == "shuffle" and args.seed is None:
        raise CliError("--order shuffle needs --seed")
    ps = PackingSet.build(ctx, start, alphabet, args.t)
    out_ps = extend_to_maximal(ps, order=args.order, seed=args.seed, cap=args.cap)
    A, size = len(alphabet), out_ps.size
    result = {
        "packing": out_ps.to_json(),
        "size": size,
        "maximal_lower_bound_holds": maximal_lower_bound_holds(size, A, args.t, ctx.q),
        "min_B_maximal": min_B_maximal(A, args.t, ctx.q),
        "max_B_upper": max_B_upper(A, args.t, ctx.q),
        "lower_closed": lower_closed_form(A, args.t, ctx.q),
    }
    return EXIT_OK, _dump(result)


def cmd_replay(args) -> tuple[int, str]:
    manifest = json.loads(Path(args.manifest_file).read_text())
    code, text, failed = _run(build_parser().parse_args(list(manifest["argv"])))
    if failed:
        raise CliError(f"replayed run failed: {text.strip()}")
    return code, text


# -- plumbing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--manifest", help="write a run manifest here")
    common.add_argument("--cap", type=int, default=None,
                        help="enumeration cap (default PACKSET_ENUM_CAP or 1e8)")

    parser = argparse.ArgumentParser(prog="packset", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"packset {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a packing set")
    p.add_argument("kind", choices=["powers", "basis", "qr", "cyclotomic"])
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--K", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="verify a packing-set JSON file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=["exhaustive", "sufficient"], default="exhaustive")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="size bounds for (q, A, t)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--A", type=int)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--alphabet", help="explicit alphabet: '1,5' or a JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("codec", parents=[common], help="encode/corrupt/decode round trips")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int)
    p.add_argument("--exhaustive", action="store_true", help="one case per in-model error vector")
    p.add_argument("--lambda-violation", action="store_true", help="inject out-of-alphabet errors")
    p.add_argument("--transcript", help="JSON-lines transcript path")
    p.set_defaults(func=cmd_codec)

    p = sub.add_parser("maximal", parents=[common], help="greedy maximal packing set")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--A", required=True, help="alphabet elements, e.g. '1' or '1,2'")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--order", choices=["asc", "shuffle"], default="asc")
    p.add_argument("--start", help="initial elements, e.g. '1'")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("replay", help="re-run the invocation recorded in a manifest")
    p.add_argument("manifest_file")
    p.set_defaults(func=cmd_replay, out=None, manifest=None)
    return parser


def _run(args) -> tuple[int, str, bool]:
    """(exit code, output text, whether the text is an error report)."""
    try:
        code, text = args.func(args)
        return code, text, False
    except (PacksetError, CliError, ValueError) as exc:
        return EXIT_ERROR, _dump({"error": type(exc).__name__, "message": str(exc)}), True


def _strip_manifest(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--manifest":
            skip = True
            continue
        if a.startswith("--manifest="):
            continue
        out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    code, text, failed = _run(args)
    if failed:
        sys.stderr.write(text)
    else:
        _emit(text, args.out)
    if args.manifest:
        manifest = {
            "subcommand": args.command,
            "argv": _strip_manifest(argv),
            "params": {k: v for k, v in vars(args).items() if k not in ("func", "manifest")},
            "seed": getattr(args, "seed", None),
            "version": __version__,
            "outcome": {"exit_code": code},
            "duration_s": round(time.perf_counter() - started, 6),
        }
        Path(args.manifest).write_text(_dump(manifest))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
