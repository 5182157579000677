"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
Verification reports go to stdout as ``check=<name> status=<..> detail=<..>``
lines; the human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import cwd
from . import fixtures as F
from .circuits import (
    CircuitError, CnfError, CvpInstance, cvp_reduction, decode, dump_succinct, encode_explicit,
    min_order_reduction, parse_dimacs, parse_netlist, parse_succinct, pump_circuit,
    sat_reduction, xi_decider,
)
from .circuits.succinct import DECODE_GUARD, DecodeGuardError
from .circuits.xi import XI_FIXTURE_PATH, load_xi_fixture
from .mso.check import SizeGuard, SizeGuardError, models
from .mso.corpus import formula as corpus_formula, load_corpus, load_formula_path
from .mso.parse import FormulaSyntaxError, UnboundVariableError, UnknownSymbolError
from .msotypes import TypeGuardError, type_of
from .pumping import (
    PumpError, PumpVerificationError, extract_pump, make_idempotent, stable_pump, unstable_pump,
    verify_quad,
)
from .structures import GraphFormatError, SignatureError, dump_graph, parse_graph

ENV_DECODE_GUARD = "SUCCINCT_MSO_DECODE_GUARD"
ENV_SET_GUARD = "SUCCINCT_MSO_SET_GUARD"

INPUT_ERRORS = (
    OSError, json.JSONDecodeError, GraphFormatError, SignatureError, CnfError, CircuitError,
    FormulaSyntaxError, UnknownSymbolError, UnboundVariableError, cwd.DecompositionError,
    SizeGuardError, DecodeGuardError, TypeGuardError, KeyError,
)


class InputError(ValueError):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer") from None
    if value < 1:
        raise InputError(f"{name} must be positive")
    return value


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_formula(name: str):
    """A corpus name (``psi1``) or a path to a formula file."""
    if name in load_corpus():
        return corpus_formula(name)
    if not Path(name).exists():
        raise InputError(f"no corpus formula or file named {name!r}")
    return load_formula_path(name)


def _guard(args) -> SizeGuard:
    return SizeGuard(set_vertices=args.set_guard, fo_vertices=4096)


def _load_target(args):
    """The graph named by --graph, --succinct or --decomposition."""
    if args.graph:
        return parse_graph(_read(args.graph))
    if args.succinct:
        return decode(parse_succinct(_read(args.succinct)), args.decode_guard)
    if args.decomposition:
        tree, k = cwd.loads(_read(args.decomposition))
        return cwd.eval_decomposition(tree, tuple(sorted(cwd.arc_symbols(tree))) or ("->",), k).graph
    raise InputError("give one of --graph, --succinct or --decomposition")


# -- subcommands ---------------------------------------------------------------------

def cmd_mc(args) -> int:
    g = _load_target(args)
    f = load_formula(args.formula)
    print("true" if models(g, f, _guard(args)) else "false")
    return 0


def cmd_type(args) -> int:
    g = _load_target(args)
    t = type_of(g, args.rank)
    print(f"type rank={t.rank} digest={t.digest()} nodes={t.tree_size()} n={g.n}")
    return 0


def _triple_from_args(args):
    if args.fixture:
        fx = {f.name: f for f in F.pump_fixtures()}.get(args.fixture)
        if fx is None:
            raise InputError(f"unknown pump fixture {args.fixture!r}")
        return extract_pump(fx.decomposition, fx.phi, fx.m)
    if not (args.decomposition and args.formula):
        raise InputError("give --fixture, or --decomposition with --formula")
    tree, k = cwd.loads(_read(args.decomposition))
    phi = load_formula(args.formula)
    return extract_pump(tree, phi, args.rank, k)


def _load_universe(path):
    """Universe file: ``{"universe": [...], "pump_models": [...]}`` of decomposition docs."""
    doc = json.loads(_read(path))
    if isinstance(doc, list):
        doc = {"universe": doc}

    def trees(key):
        return [cwd.loads(json.dumps(d))[0] for d in doc.get(key, [])]

    universe = trees("universe")
    if not universe:
        raise InputError("the universe file lists no decompositions")
    return universe, trees("pump_models") or None


def cmd_pump_stable(args) -> int:
    if args.stable_fixture:
        fx = {f.name: f for f in F.stable_fixtures()}.get(args.stable_fixture)
        if fx is None:
            raise InputError(f"unknown stable-pump fixture {args.stable_fixture!r}")
        psi, chi, universe, pump_models, m = fx.psi, fx.chi, fx.universe, fx.pump_models, fx.m
    else:
        if not (args.formula and args.chi and args.universe):
            raise InputError("stable pumping needs --formula, --chi and --universe")
        psi, chi = load_formula(args.formula), load_formula(args.chi)
        universe, pump_models = _load_universe(args.universe)
        m = args.rank
    q = stable_pump(psi, chi, universe, pump_models, m)
    rows = verify_quad(q)
    doc = {
        "branch": q.branch, "k": q.k, "symbols": list(q.symbols),
        "sizes": [cwd.size(x) for x in (q.s, q.g, q.b, q.e)],
        "s": cwd.node_to_json(q.s), "g": cwd.node_to_json(q.g),
        "b": cwd.node_to_json(q.b), "e": cwd.node_to_json(q.e),
        "verification": [{"word": w, "chi": c, "psi_prime": p, "expected": want}
                         for w, c, p, want in rows],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    print(f"pump branch={q.branch} |g|={cwd.size(q.g)} words={len(rows)}", file=sys.stderr)
    return 0


def cmd_pump(args) -> int:
    if args.chi or args.stable_fixture:
        return cmd_pump_stable(args)
    t = _triple_from_args(args)
    doc = {
        "sizes": list(t.sizes), "rank": t.m, "k": t.k, "source_size": t.source_size,
        "symbols": list(t.symbols),
        "s": cwd.node_to_json(t.s), "r": cwd.node_to_json(t.r), "e": cwd.node_to_json(t.e),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    print(f"pump sizes={t.sizes} source={t.source_size}", file=sys.stderr)
    return 0


def cmd_synth_pump(args) -> int:
    if args.ell < 0:
        raise InputError("--ell must be non-negative")
    t = make_idempotent(_triple_from_args(args))
    sg = pump_circuit(t, args.ell)
    _emit(dump_succinct(sg), args.out)
    print(f"synth-pump N={sg.N} bits={sg.bits} gates={sg.gates}", file=sys.stderr)
    return 0


def _quad(name: str):
    fx = {f.name: f for f in F.stable_fixtures()}.get(name)
    if fx is None:
        raise InputError(f"unknown stable-pump fixture {name!r}")
    return stable_pump(fx.psi, fx.chi, fx.universe, fx.pump_models, fx.m)


def cmd_reduce_sat(args) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    q = _quad(args.fixture)
    sg = sat_reduction(q, cnf)
    _emit(dump_succinct(sg), args.out)
    print(f"reduce-sat N={sg.N} gates={sg.gates} branch={q.branch}", file=sys.stderr)
    return 0


def cmd_reduce_cvp(args) -> int:
    cvp = CvpInstance(parse_netlist(_read(args.netlist)))
    pair = unstable_pump(corpus_formula("psi1"), corpus_formula("xi"), F.clique_pairs())
    sg = cvp_reduction(pair, cvp)
    _emit(dump_succinct(sg), args.out)
    print(f"reduce-cvp N={sg.N} gates={sg.gates}", file=sys.stderr)
    return 0


def cmd_reduce_minorder(args) -> int:
    sg = min_order_reduction(parse_dimacs(_read(args.cnf)))
    _emit(dump_succinct(sg), args.out)
    print(f"reduce-minorder N={sg.N} gates={sg.gates}", file=sys.stderr)
    return 0


def cmd_decode(args) -> int:
    g = decode(parse_succinct(_read(args.succinct)), args.decode_guard)
    _emit(dump_graph(g), args.out)
    return 0


def cmd_encode(args) -> int:
    sg = encode_explicit(parse_graph(_read(args.graph)))
    _emit(dump_succinct(sg), args.out)
    return 0


def cmd_decide_xi(args) -> int:
    fixture = load_xi_fixture(args.fixture or XI_FIXTURE_PATH)
    sg = parse_succinct(_read(args.succinct))
    print("true" if xi_decider(sg, fixture) else "false")
    return 0


def _report(results, figures=None) -> int:
    from .acceptance import CHECKS
    order = {name: i for i, name, _ in CHECKS}
    results = sorted(results, key=lambda r: order[r.name])
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if figures:
        from .plotting import render_all
        for p in render_all(figures):
            print(f"figure {p}", file=sys.stderr)
    total = sum(r.seconds for r in results)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed in {total:.1f}s"
          + (f"; failing: {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return 1 if failed else 0


def cmd_verify(args) -> int:
    from .acceptance import CHECKS, run_all
    known = {n for _, n, _ in CHECKS}
    only = set(args.check) if args.check else None
    if only and not only <= known:
        raise InputError(f"unknown checks: {sorted(only - known)}")
    return _report(run_all(args.quick, args.seed, only))


def cmd_verify_all(args) -> int:
    from .acceptance import run_all
    return _report(run_all(args.quick, args.seed), args.figures)


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="succinct-mso", description=__doc__.splitlines()[0])
    p.add_argument("--decode-guard", type=int, default=None,
                   help=f"largest N decoded explicitly (default {DECODE_GUARD}, env {ENV_DECODE_GUARD})")
    p.add_argument("--set-guard", type=int, default=None,
                   help=f"largest graph for set quantifiers in model checking (env {ENV_SET_GUARD})")
    sub = p.add_subparsers(dest="command", required=True)

    def target(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph")
        g.add_argument("--succinct")
        g.add_argument("--decomposition")

    sp = sub.add_parser("mc", help="model-check a formula")
    target(sp)
    sp.add_argument("--formula", required=True, help="corpus name or formula file")
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("type", help="print the rank-m type digest")
    target(sp)
    sp.add_argument("--rank", type=int, default=2)
    sp.set_defaults(func=cmd_type)

    for name, func, help_ in (("pump", cmd_pump, "cut a decomposition into s, r, e"),
                              ("synth-pump", cmd_synth_pump, "succinct graph of s r^ell e")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--fixture", help="shipped fixture: loops or tournament")
        sp.add_argument("--decomposition")
        sp.add_argument("--formula")
        sp.add_argument("--rank", type=int, default=2)
        sp.add_argument("--out")
        if name == "synth-pump":
            sp.add_argument("--ell", type=int, required=True)
        else:
            sp.add_argument("--chi", help="restriction formula; switches to stable pumping")
            sp.add_argument("--universe", help="JSON list of decompositions of chi-models")
            sp.add_argument("--stable-fixture", help="shipped stable fixture: psi1-top or loop-deterministic")
        sp.set_defaults(func=func)

    sp = sub.add_parser("reduce-sat", help="SAT instance to a succinct graph")
    sp.add_argument("--cnf", required=True)
    sp.add_argument("--fixture", default="psi1-top")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reduce_sat)

    sp = sub.add_parser("reduce-cvp", help="CVP netlist to a succinct graph")
    sp.add_argument("--netlist", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reduce_cvp)

    sp = sub.add_parser("reduce-minorder", help="SAT instance to an ordered succinct graph")
    sp.add_argument("--cnf", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reduce_minorder)

    sp = sub.add_parser("decode", help="succinct graph to explicit graph text")
    sp.add_argument("--succinct", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("encode", help="explicit graph to a lookup-table succinct graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decide-xi", help="decide psi on a clique-or-independent succinct graph")
    sp.add_argument("--succinct", required=True)
    sp.add_argument("--fixture", help="xi fixture JSON (default: the shipped one)")
    sp.set_defaults(func=cmd_decide_xi)

    for name, func in (("verify", cmd_verify), ("verify-all", cmd_verify_all)):
        sp = sub.add_parser(name, help="run acceptance checks")
        sp.add_argument("--quick", action="store_true")
        sp.add_argument("--seed", type=int, default=0)
        if name == "verify":
            sp.add_argument("--check", action="append", help="run only this check (repeatable)")
        else:
            sp.add_argument("--figures", help="directory for report figures")
        sp.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.decode_guard is None:
            args.decode_guard = _env_int(ENV_DECODE_GUARD, DECODE_GUARD)
        if args.set_guard is None:
            args.set_guard = _env_int(ENV_SET_GUARD, 10)
        if args.decode_guard < 1 or args.set_guard < 1:
            raise InputError("guards must be positive")
        return args.func(args)
    except PumpVerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, PumpError) + INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
