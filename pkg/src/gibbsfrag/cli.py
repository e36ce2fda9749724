"""Command-line interface: ``gibbsfrag {stirling,dist,couple,sample,verify}``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 resource guard tripped.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import verify as suites
from .coupling import MonotoneCoupling, build_cover_graph, coupling_to_dot, extreme_coupling, strassen_feasible
from .crp import sample_fragmentation_crp, sample_fragmentation_recursive, sample_record_chain
from .exceptions import GibbsFragError, GuardExceeded, InfeasibleError
from .lattice import gibbs_partition_law, resolve_guard, stirling2
from .records import conditional_bernoulli, record_law
from .rng import spawn
from .weights import as_alpha, block_count_distribution, stirling_table, weight_sequence

SCHEMA = "gibbsfrag/{}/v1"
EXIT_USAGE, EXIT_VERIFY, EXIT_GUARD = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _alpha(text):
    try:
        return as_alpha(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(str(err))


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be unsigned")
    return value


def _cell(text):
    try:
        n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected N,K")
    return n, k


def _with_approx(item, key, value, with_float):
    item[key] = str(value)
    if with_float:
        item[key + "_approx"] = float(value)
    return item


def _check_k(args, k=None):
    k = args.k if k is None else k
    if k is None:
        raise UsageError("--k is required")
    if not 1 <= k <= args.n:
        raise UsageError(f"--k must lie in [1, {args.n}], got {k}")
    return k


def _emit(args, text):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj):
    return json.dumps(obj) + "\n"


def _weights(alpha, n):
    return weight_sequence(alpha, n)


def cmd_stirling(args):
    table = stirling_table(args.alpha, args.n)
    rows = [[str(x) for x in table.row(m)] for m in range(1, args.n + 1)]
    if args.format == "table":
        return "".join(" ".join(r) + "\n" for r in rows)
    return _dumps({"schema": SCHEMA.format("stirling"), "alpha": str(args.alpha),
                   "n": args.n, "rows": rows})


def _layer_json(layer, with_float):
    return [_with_approx({"state": s.to_json()}, "prob", p, with_float) for s, p in layer.items()]


def cmd_dist(args):
    head = {"alpha": str(args.alpha), "n": args.n}
    if args.kind == "block-count":
        if args.theta is None:
            raise UsageError("--kind block-count needs --theta")
        law = block_count_distribution(args.alpha, args.theta, args.n)
        probs = [_with_approx({"k": k}, "prob", p, args.float) for k, p in law.items()]
        return _dumps({"schema": SCHEMA.format("block-count"), **head, "theta": str(args.theta),
                       "probs": probs})
    k = _check_k(args)
    if args.p is not None:
        p = [Fraction(x) for x in args.p.split(",")]
        if len(p) != args.n:
            raise UsageError(f"--p needs {args.n} entries")
        layer = conditional_bernoulli(p, k)
        head["p"] = [str(x) for x in p]
    elif args.kind == "partitions":
        _guard(args.n, k)
        layer = gibbs_partition_law(_weights(args.alpha, args.n), args.n, k)
    else:
        layer = record_law(args.alpha, args.n, k)
    return _dumps({"schema": SCHEMA.format("layer"), **head, "k": k, "kind": args.kind,
                   "states": _layer_json(layer, args.float)})


def _guard(n, k):
    limit = resolve_guard()
    if stirling2(n, k) > limit:
        raise GuardExceeded(f"layer n={n}, k={k} has {stirling2(n, k)} states, guard is {limit}")


def _layers(args, k):
    if args.kind == "partitions":
        _guard(args.n, k)
        _guard(args.n, k + 1)
        w = _weights(args.alpha, args.n)
        return gibbs_partition_law(w, args.n, k), gibbs_partition_law(w, args.n, k + 1)
    return record_law(args.alpha, args.n, k), record_law(args.alpha, args.n, k + 1)


_UPPER_LETTERS = "XYZ"


def _resolve_state(token, states, upper):
    token = token.strip()
    if token.isdigit() and not any(s.name == token for s in states):
        i = int(token)
    elif len(token) == 1 and token.isalpha():
        letters = _UPPER_LETTERS if upper else "ABCDEFGHIJKLMNOPQRSTUVW"
        if token.upper() not in letters:
            raise UsageError(f"unknown state label {token!r}")
        i = letters.index(token.upper())
    else:
        matches = [j for j, s in enumerate(states) if s.name == token]
        if not matches:
            raise UsageError(f"no state named {token!r}")
        i = matches[0]
    if not 0 <= i < len(states):
        raise UsageError(f"state index {i} out of range")
    return states[i]


def cmd_couple(args):
    k = _check_k(args)
    if k >= args.n:
        raise UsageError("--k must be < n to couple k with k+1")
    lower, upper = _layers(args, k)
    graph = build_cover_graph(lower, upper)
    head = {"schema": SCHEMA.format("coupling"), "alpha": str(args.alpha), "n": args.n,
            "k": k, "kind": args.kind}
    if args.extreme:
        if not args.edge or ":" not in args.edge:
            raise UsageError("--extreme needs --edge LOWER:UPPER")
        lo_tok, up_tok = args.edge.split(":", 1)
        edge = (_resolve_state(lo_tok, lower.states, False), _resolve_state(up_tok, upper.states, True))
        try:
            result = extreme_coupling(lower, upper, graph, edge, args.extreme)
        except InfeasibleError as err:
            result = err.certificate
        head["extreme"] = {"direction": args.extreme, "edge": [edge[0].to_json(), edge[1].to_json()]}
    else:
        result = strassen_feasible(lower, upper, graph)
    if not isinstance(result, MonotoneCoupling):
        return _dumps({**head, "status": "infeasible", "certificate": result.to_json()})
    if args.format == "dot":
        labels = {}
        if len(lower) <= 23 and len(upper) <= 3:
            labels.update({s: chr(ord("A") + i) for i, s in enumerate(lower.states)})
            labels.update({s: _UPPER_LETTERS[j] for j, s in enumerate(upper.states)})
        return coupling_to_dot(result, labels, args.float)
    body = result.to_json(args.float)
    body["lower"] = _layer_json(lower, args.float)
    body["upper"] = _layer_json(upper, args.float)
    return _dumps({**head, "status": "feasible", "coupling": body})


def cmd_sample(args):
    if args.seed is None:
        raise UsageError("sampling requires --seed")
    if args.mode in ("crp", "recursive") and args.alpha != 0:
        raise UsageError(
            f"--mode {args.mode} samples partitions and exists only for alpha = 0; for "
            "alpha != 0 partition-valued fragmentations need not exist (for unit weights "
            "none exists at n = 20), so use --mode records")
    lines = []
    for i, rng in enumerate(spawn(args.seed, args.samples)):
        if args.mode == "crp":
            path = sample_fragmentation_crp(args.n, rng, extreme=args.extreme)
            path.validate()
            body = {"partitions": path.to_json()}
        elif args.mode == "recursive":
            tri = sample_fragmentation_recursive(args.n, rng)
            tri.validate()
            body = {"rows": tri.to_json()}
        else:
            chain = sample_record_chain(args.alpha, args.n, rng)
            body = {"records": [b.to_json() for b in chain]}
        lines.append(_dumps({"schema": SCHEMA.format("sample"), "mode": args.mode,
                             "alpha": str(args.alpha), "n": args.n, "seed": args.seed,
                             "index": i, **body}))
    return "".join(lines)


# suites whose cost grows fast in n are capped unless named explicitly
_DEFAULT_CAPS = {"record-oracle": 8, "split-check": 6, "strassen-partitions": 6}


def _suite_kwargs(name, args, explicit):
    n = args.n if explicit else min(args.n, _DEFAULT_CAPS.get(name, args.n))
    if name == "stirling-recursion":
        return {"alphas": args.alphas, "n": n, "corrupt": args.corrupt_stirling}
    if name in ("stirling-logconcave", "record-last-monotone", "v-recursion", "record-oracle", "strassen-records"):
        return {"alphas": args.alphas, "n": n}
    if name == "poisson-logconcave":
        return {"trials": args.trials, "max_n": max(n, 1), "seed": args.seed or 0}
    if name == "efron":
        return {"n": max(n, 2), "seed": args.seed or 0}
    if name == "split-check":
        return {"n": n}
    if name == "strassen-partitions":
        return {"w_name": args.w, "n": n}
    raise KeyError(name)


def _run_suite(job):
    name, kwargs = job
    return suites.SUITES[name](**kwargs)


def cmd_verify(args):
    explicit = bool(args.suite)
    names = args.suite or list(suites.SUITES)
    unknown = [s for s in names if s not in suites.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    jobs = [(name, _suite_kwargs(name, args, explicit)) for name in names]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_suite, jobs))
    else:
        results = [_run_suite(job) for job in jobs]
    if args.format == "table":
        out = "".join(f"{'PASS' if r.passed else 'FAIL'} {r.name} (checked {r.checked})"
                      + ("" if r.passed or r.detail is None else f" {json.dumps(r.detail)}") + "\n"
                      for r in results)
    else:
        out = "".join(_dumps({"schema": SCHEMA.format("verify"), **r.to_json()}) for r in results)
    return out, all(r.passed for r in results)


def build_parser():
    parser = _Parser(prog="gibbsfrag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("json",), default_format="json"):
        p.add_argument("--alpha", type=_alpha, default=Fraction(0),
                       help="rational < 1 or -inf (default 0)")
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--float", action="store_true",
                       help="add approximate decimal values next to exact rationals")

    p = sub.add_parser("stirling", help="generalized Stirling triangle")
    common(p, ("json", "table"))

    p = sub.add_parser("dist", help="exact law of one layer")
    common(p)
    p.add_argument("--k", type=_positive)
    p.add_argument("--theta", type=_rational)
    p.add_argument("--p", help="comma-separated Bernoulli means; p_1 must be 1")
    p.add_argument("--kind", choices=("records", "partitions", "block-count"), default="records")

    p = sub.add_parser("couple", help="monotone coupling of layers k and k+1")
    common(p, ("json", "dot"))
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--kind", choices=("records", "partitions"), default="records")
    p.add_argument("--extreme", choices=("max", "min"))
    p.add_argument("--edge", help="target edge LOWER:UPPER (letters, indices or state names)")

    p = sub.add_parser("sample", help="sample fragmentation paths or record chains")
    common(p)
    p.add_argument("--mode", choices=("crp", "recursive", "records"), default="crp")
    p.add_argument("--samples", type=_positive, default=1)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--extreme", choices=("max", "min"),
                   help="crp mode: use extremal couplings instead of the default flow")

    p = sub.add_parser("verify", help="run exact invariant suites")
    p.add_argument("--n", type=_positive, default=10)
    p.add_argument("--suite", action="append", help=f"one of: {', '.join(suites.SUITES)}")
    p.add_argument("--alphas", type=lambda t: [_alpha(x) for x in t.split(",")],
                   default=list(suites.DEFAULT_ALPHAS))
    p.add_argument("--w", default="ones", help="strassen-partitions weights: ones, factorial or an alpha")
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--corrupt-stirling", type=_cell, metavar="N,K",
                   help="add 1 to one table cell before checking (negative test)")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--output")
    return parser


def _glue_alpha(argv):
    # argparse would read "-inf" after --alpha as an option flag
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--alpha":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--alpha={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_glue_alpha(sys.argv[1:] if argv is None else list(argv)))
    handlers = {"stirling": cmd_stirling, "dist": cmd_dist, "couple": cmd_couple, "sample": cmd_sample}
    try:
        if args.command == "verify":
            text, ok = cmd_verify(args)
            _emit(args, text)
            return 0 if ok else EXIT_VERIFY
        _emit(args, handlers[args.command](args))
        return 0
    except GuardExceeded as err:
        print(f"gibbsfrag: {err}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, GibbsFragError, ValueError, ZeroDivisionError) as err:
        print(f"gibbsfrag: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
