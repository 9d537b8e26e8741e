"""Command-line front end.

Subcommands cover every library operation plus a one-shot ``verify`` that
runs the whole battery of cross-checks over a range of moduli.

Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 domain error (e.g. a word outside the subgroup).
"""

import argparse
import json
import os
import re
import sys

from . import engine, magnus, stallings
from .words import Alphabet, ParseError, omega, parse_word

DEFAULT_CAP = 8
DEFAULT_N_MAX = 100
DEFAULT_D_MAX = 12
# verify sub-bounds: witness words double in length with n, and the float
# spectral reconstruction loses absolute accuracy as entries grow
RECURRENCE_N_CAP = 8
SPECTRAL_N_CAP = 20

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _default_cap():
    try:
        return int(os.environ["FGLAB_MAGNUS_CAP"])
    except (KeyError, ValueError):
        return DEFAULT_CAP


def _alphabet_arg(text):
    return Alphabet(name.strip() for name in text.split(","))


def _infer_alphabet(text):
    names = []
    for name in _NAME_RE.findall(text):
        if name not in names:
            names.append(name)
    return Alphabet(names) if names else Alphabet(("x", "y"))


def _emit(args, payload, human):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


def cmd_reduce(args):
    word = parse_word(args.word, _alphabet_arg(args.alphabet))
    _emit(args, {"word": str(word)}, str(word))
    return 0


def cmd_omega(args):
    word = omega(args.n)
    _emit(args, {"n": args.n, "word": str(word)}, str(word))
    return 0


def _load_subgroup(path):
    with open(path) as fh:
        desc = json.load(fh)
    graph = stallings.from_json(desc)
    preferred = None
    if "kernel" in desc:
        d = int(desc["kernel"]["d"])
        f = desc["kernel"]["f"]
        for name in desc["alphabet"]:
            if f.get(name, 0) % d == 1:
                preferred = name
                break
    return graph, preferred


def cmd_subgroup(args):
    graph, preferred = _load_subgroup(args.file)

    if args.query == "index":
        idx = stallings.index(graph)
        value = "infinite" if idx is stallings.INFINITE else idx
        _emit(args, {"index": value}, str(value))
        return 0
    if args.query == "normal":
        normal = stallings.is_normal(graph)
        _emit(args, {"normal": normal}, str(normal).lower())
        return 0

    if args.query in ("contains", "rewrite") and args.word is None:
        raise ParseError("%s needs a word argument" % args.query)
    if args.word is not None:
        word = parse_word(args.word, graph.alphabet)

    if args.query == "contains":
        ok = stallings.contains(graph, word)
        _emit(args, {"contains": ok}, str(ok).lower())
        return 0

    transversal = stallings.schreier_transversal(graph, preferred=preferred)
    basis = stallings.schreier_basis(graph, transversal)
    if args.query == "basis":
        entries = list(zip(basis.alphabet.names, (str(w) for w in basis.words)))
        _emit(args, {"basis": [{"name": n, "word": w} for n, w in entries]},
              "\n".join("%s = %s" % e for e in entries))
        return 0
    if args.query == "rewrite":
        rewritten = stallings.rewrite(graph, transversal, basis, word)
        _emit(args, {"rewrite": str(rewritten)}, str(rewritten))
        return 0
    raise AssertionError(args.query)


def cmd_weight(args):
    alphabet = (_alphabet_arg(args.alphabet) if args.alphabet
                else _infer_alphabet(args.word))
    word = parse_word(args.word, alphabet)
    weight = magnus.lcs_weight(word, args.cap)
    if weight is magnus.IDENTITY:
        text, value = "identity", "identity"
    elif isinstance(weight, magnus.AtLeast):
        text, value = ">=%d" % weight.bound, "at_least"
    else:
        text, value = str(weight), weight
    _emit(args, {"cap": args.cap, "weight": value}, text)
    return 0


def cmd_witness(args):
    cert = engine.witness(args.d, args.m)
    # re-verify through the module APIs, independent of the issuing path
    if not magnus.in_lcs(cert.witness, args.m, cert.cap):
        raise engine.VerificationError("independent F_m re-check failed")
    graph = stallings.kernel_graph({"x": 1, "y": 0}, args.d, cert.witness.alphabet)
    transversal = stallings.schreier_transversal(graph, preferred="x")
    basis = stallings.schreier_basis(graph, transversal)
    if stallings.in_derived_subgroup(graph, transversal, basis, cert.witness):
        raise engine.VerificationError("independent G_2 re-check failed")
    text = cert.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        if not args.json:
            print("wrote %s" % args.out)
    if args.json:
        print(json.dumps(cert.to_dict(), sort_keys=True, separators=(",", ":")))
    elif not args.out:
        print(text)
    return 0


def cmd_verify(args):
    n_max = args.n_max
    rows = []
    failure = None
    for d in range(2, args.d_max + 1):
        spec = engine.KernelSpec(d)
        checks = {}
        try:
            engine.verify_recurrence(spec, min(n_max, RECURRENCE_N_CAP))
            checks["recurrence"] = True
            checks["char_poly"] = engine.char_poly_check(d)
            if not checks["char_poly"]:
                raise engine.VerificationError("char_poly mismatch")
            engine.eigen_check(d)
            checks["eigen"] = True
            engine.spectral_certificate(d, min(n_max, SPECTRAL_N_CAP))
            checks["spectral"] = True
            checks["nonvanishing"] = engine.nonvanishing_check(d, n_max)
            if not checks["nonvanishing"]:
                raise engine.VerificationError("A^n v_0 vanished")
        except engine.VerificationError as exc:
            if failure is None:
                failure = (d, str(exc))
        rows.append({"d": d, **checks})

    if args.json:
        print(json.dumps({"n_max": n_max, "results": rows,
                          "ok": failure is None},
                         sort_keys=True, separators=(",", ":")))
    else:
        names = ["recurrence", "char_poly", "eigen", "spectral", "nonvanishing"]
        print("d   " + "  ".join("%-12s" % n for n in names))
        for row in rows:
            cells = ["pass" if row.get(n) else "FAIL" for n in names]
            print("%-3d " % row["d"] + "  ".join("%-12s" % c for c in cells))
        if failure:
            print("FAILED at d=%d: %s" % failure)
        else:
            print("all checks passed for 2 <= d <= %d, n <= %d"
                  % (args.d_max, n_max))
    return 0 if failure is None else 1


def _positive(kind):
    def convert(text):
        value = int(text)
        if value < kind:
            raise argparse.ArgumentTypeError("must be >= %d" % kind)
        return value
    return convert


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fglab",
        description="Free-group toolkit: Stallings automata, Schreier "
                    "rewriting, Magnus weights, and witness certificates.")
    parser.add_argument("--json", action="store_true",
                        help="emit structured JSON instead of human output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="freely reduce a word")
    p.add_argument("-a", "--alphabet", required=True,
                   help="comma-separated generator names")
    p.add_argument("word")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("omega", help="the witness word omega_n over {x, y}")
    p.add_argument("n", type=_positive(0))
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("subgroup", help="queries on a subgroup description file")
    p.add_argument("query",
                   choices=["index", "normal", "contains", "rewrite", "basis"])
    p.add_argument("file", help="subgroup JSON file")
    p.add_argument("word", nargs="?")
    p.set_defaults(func=cmd_subgroup)

    p = sub.add_parser("weight", help="lower-central-series weight of a word")
    p.add_argument("--cap", type=_positive(1), default=_default_cap())
    p.add_argument("-a", "--alphabet",
                   help="generator names (default: inferred from the word)")
    p.add_argument("word")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("witness",
                       help="certificate: a word of F_m outside [G, G]")
    p.add_argument("--d", type=_positive(2), required=True)
    p.add_argument("--m", type=_positive(2), required=True)
    p.add_argument("--out", help="write the certificate JSON to this file")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run the full verification battery")
    p.add_argument("--d-max", type=_positive(2), default=DEFAULT_D_MAX)
    p.add_argument("--n-max", type=_positive(1), default=DEFAULT_N_MAX)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except stallings.NotInSubgroupError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except engine.VerificationError as exc:
        print("verification failed: %s" % exc, file=sys.stderr)
        return 1
    except (ParseError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
