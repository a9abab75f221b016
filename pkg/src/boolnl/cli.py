"""Command-line interface: ``boolnl <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (size cap, invalid
instance) and 2 on a usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import circuit as circ
from .errors import BoolNLError, ParseError
from .mc_solver import CENSUS_MAX_VARS, MC_MAX_VARS, classify, mc_exact, verify_counting_bound, verify_witness
from .reductions import (
    count_sat_via_nl,
    is_affine,
    is_tautology,
    sat_count_bruteforce,
    sat_count_gadget,
    tautology_to_affine,
)
from .truth_table import MAX_VARS, TruthTable, read_tables
from .walsh import BRUTEFORCE_MAX_VARS, best_affine_approximation, fwt, nonlinearity, nonlinearity_bruteforce


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _bits(vec) -> str:
    return "".join(str(b) for b in vec)


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load(args) -> list[tuple[str, object]]:
    """Inputs as ``("table", TruthTable)`` or ``("circuit", Circuit)`` pairs."""
    if getattr(args, "formula", None):
        return [("circuit", circ.parse_formula(args.formula, args.n))]
    if getattr(args, "tt", None):
        n = args.n
        if n is None:
            n = len(args.tt).bit_length() - 1
            if len(args.tt) != 1 << n:
                raise ParseError("cannot infer n from a table whose length is not a power of two; pass -n")
        return [("table", TruthTable.from_text(args.tt, n))]
    if not getattr(args, "input", None):
        raise ParseError("no input: give --tt, --formula or -i FILE")
    text = _read_source(args.input)
    if any(line.strip().startswith("INPUTS") for line in text.splitlines()):
        return [("circuit", circ.parse(text))]
    tables = read_tables(text)
    if not tables:
        raise ParseError(f"no truth tables found in {args.input}")
    return [("table", t) for t in tables]


def _as_table(kind, obj) -> TruthTable:
    return circ.circuit_truth_table(obj) if kind == "circuit" else obj


def _as_circuit(kind, obj) -> circ.Circuit:
    if kind != "circuit":
        raise ParseError("this subcommand needs a circuit input (file or --formula)")
    return obj


def _emit(args, record: dict, text: str) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True, allow_nan=False))
    else:
        print(text)


# ---- subcommands ---------------------------------------------------------

def cmd_nl(args) -> None:
    for kind, obj in _load(args):
        tt = _as_table(kind, obj)
        nl = nonlinearity(tt)
        best = best_affine_approximation(tt)
        rec = {"n": tt.n, "nl": nl, "a": _bits(best.a), "c": best.c, "agreements": best.agreements}
        text = f"nl={nl} a={_bits(best.a)} c={best.c} agreements={best.agreements}"
        if args.paranoid and tt.n <= BRUTEFORCE_MAX_VARS:
            brute = nonlinearity_bruteforce(tt)
            rec.update(bruteforce=brute, match=brute == nl)
            text += f" bruteforce={brute} match={_bool(brute == nl)}"
        _emit(args, rec, text)


def cmd_mc(args) -> None:
    for kind, obj in _load(args):
        tt = _as_table(kind, obj)
        res = mc_exact(tt)
        if not verify_witness(tt, res):
            raise BoolNLError("witness failed re-verification")
        rec = {"n": tt.n, "mc": res.value, "nodes": res.nodes_explored,
               "witness": res.witness.describe().splitlines()}
        _emit(args, rec, f"mc={res.value}\n{res.witness.describe()}")


def cmd_spectrum(args) -> None:
    for kind, obj in _load(args):
        spec = fwt(_as_table(kind, obj))
        if args.json:
            print(json.dumps({"n": spec.n, "W": spec.coefficients.tolist()}))
        else:
            print("\n".join(spec.lines()))


def cmd_affine(args) -> None:
    for kind, obj in _load(args):
        if kind == "circuit":
            ok, w = is_affine(obj)
            rec = {"affine": ok}
            text = f"affine={_bool(ok)}"
            if w is not None:
                rec.update(x=_bits(w.x), y=_bits(w.y))
                text += f" x={_bits(w.x)} y={_bits(w.y)}"
        else:
            best = best_affine_approximation(obj)
            ok = best.agreements == obj.size
            rec = {"affine": ok, "a": _bits(best.a), "c": best.c}
            text = f"affine={_bool(ok)} a={_bits(best.a)} c={best.c}"
        _emit(args, rec, text)


def cmd_reduce(args) -> None:
    (kind, obj), *_ = _load(args)
    c = _as_circuit(kind, obj)
    if args.kind == "satcount":
        g = sat_count_gadget(c, args.t)
        nl = count_sat_via_nl(c, args.t)
        sat = sat_count_bruteforce(c)
        rec = {"nl": nl, "satcount": sat, "match": nl == sat, "t": args.t}
        out, summary = g.padded, f"nl={nl} satcount={sat} match={_bool(nl == sat)}"
    else:
        out = tautology_to_affine(c)
        aff, _ = is_affine(out)
        taut = is_tautology(c)
        rec = {"affine": aff, "tautology": taut, "match": aff == taut}
        summary = f"affine={_bool(aff)} tautology={_bool(taut)} match={_bool(aff == taut)}"
    if args.json:
        rec["circuit"] = out.serialize()
        print(json.dumps(rec, sort_keys=True))
    else:
        sys.stdout.write(out.serialize())
        print(summary)


def cmd_census(args) -> None:
    census = classify(args.s)
    k_max = census.max_value if args.k_max is None else args.k_max
    rows = verify_counting_bound(args.s, k_max)
    if args.json:
        print(json.dumps({
            "s": args.s,
            "counts": {str(k): v for k, v in sorted(census.counts.items())},
            # bounds can exceed 2^53, so keep them as decimal strings
            "rows": [{"k": r.k, "count": r.count, "cumulative": r.cumulative,
                      "bound": str(r.bound), "ok": r.ok} for r in rows],
        }, sort_keys=True))
    else:
        print(f"s={args.s} " + " ".join(f"{k}:{v}" for k, v in sorted(census.counts.items())))
        for r in rows:
            print(r.line())


def cmd_distinguish(args) -> None:
    from .distinguisher import DistinguisherConfig, run_experiment, toy_family

    # -n is shared with the other subcommands, so its default stays None there
    n = 4 if args.n is None else args.n
    budget = args.budget if args.budget is not None else toy_family(n, args.rounds).and_count
    cfg = DistinguisherConfig(s=args.s, and_budget=budget)
    report = run_experiment(n, cfg, args.trials, args.seed, rounds=args.rounds)
    print(report.to_json(full=args.paranoid))


def cmd_normalform(args) -> None:
    (kind, obj), *_ = _load(args)
    c = _as_circuit(kind, obj)
    nf = circ.to_normal_form(c)
    rebuilt = circ.from_normal_form(nf)
    same = circ.circuit_truth_table(rebuilt) == circ.circuit_truth_table(c)
    xors = circ.count_xor(rebuilt)
    rec = {"n": nf.n, "M": nf.M, "xor": xors, "xor_bound": circ.xor_bound(nf.n, nf.M),
           "size": rebuilt.size, "size_bound": circ.size_bound(nf.n, nf.M), "match": same,
           "normal_form": nf.describe().splitlines()}
    text = (f"{nf.describe()}\nM={nf.M} xor={xors} xor_bound={rec['xor_bound']} "
            f"size={rebuilt.size} size_bound={rec['size_bound']} match={_bool(same)}")
    if args.emit:
        text += "\n" + rebuilt.serialize().rstrip("\n")
        rec["circuit"] = rebuilt.serialize()
    _emit(args, rec, text)


# ---- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="file with 'n:<int> tt:<string>' lines or a circuit; '-' for stdin")
    common.add_argument("--tt", help="inline truth table (binary, or hex for n >= 2)")
    common.add_argument("-n", type=int, help="variable count for --tt / --formula")
    common.add_argument("--formula", help="inline formula over x1..xn with ~ & ^ |")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--paranoid", action="store_true", help="add cross-check fields")

    p = argparse.ArgumentParser(
        prog="boolnl",
        description="Nonlinearity and multiplicative complexity of Boolean functions.",
        epilog=(f"caps: truth tables n <= {MAX_VARS} (truth_table), brute-force NL n <= "
                f"{BRUTEFORCE_MAX_VARS} (walsh), exact MC n <= {MC_MAX_VARS} (mc_solver), "
                f"census s <= {CENSUS_MAX_VARS} (mc_solver)"),
    )
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("nl", parents=[common], help=f"nonlinearity via FWT (n <= {MAX_VARS})").set_defaults(func=cmd_nl)
    sub.add_parser("mc", parents=[common], help=f"exact multiplicative complexity (n <= {MC_MAX_VARS})").set_defaults(func=cmd_mc)
    sub.add_parser("spectrum", parents=[common], help="Walsh spectrum dump").set_defaults(func=cmd_spectrum)
    sub.add_parser("affine", parents=[common], help="affineness test with certificate").set_defaults(func=cmd_affine)

    r = sub.add_parser("reduce", parents=[common], help="tautology->affine or #SAT->NL reductions")
    r.add_argument("kind", choices=["tautology", "satcount"])
    r.add_argument("-t", type=int, default=10, help="padding width for satcount (default 10)")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("census", parents=[common], help=f"MC census of B_s with bound check (s <= {CENSUS_MAX_VARS})")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--k-max", type=int, default=None)
    c.set_defaults(func=cmd_census)

    d = sub.add_parser("distinguish", parents=[common], help=f"restriction distinguisher experiment (s <= {MC_MAX_VARS})")
    d.add_argument("--n", dest="n", type=int, help="data width of the keyed family (default 4)")
    d.add_argument("--s", type=int, default=4)
    d.add_argument("--budget", type=int, default=None, help="AND budget (default: family AND count)")
    d.add_argument("--rounds", type=int, default=2)
    d.add_argument("--trials", type=int, default=200)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_distinguish)

    nf = sub.add_parser("normalform", parents=[common], help="normal form of a circuit and size bounds")
    nf.add_argument("--emit", action="store_true", help="also print the rebuilt circuit")
    nf.set_defaults(func=cmd_normalform)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"boolnl: parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"boolnl: {exc}", file=sys.stderr)
        return 2
    except (BoolNLError, ValueError) as exc:
        print(f"boolnl: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
