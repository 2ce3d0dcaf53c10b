"""Command-line front end.

Exit codes: 0 yes/true, 1 no/false, 2 error, 3 inconclusive, 64 usage.
"""

import argparse
import json
import sys
from collections import deque

from .ascending import is_ascending
from .decision import Yes, No, Inconclusive, SearchBudget
from .errors import GbsError
from .graph import format_gbs, graph_from_json, graph_to_json, parse_graph, reduce, serialize_graph
from .iso import IsoCertificate, are_isomorphic, enumerate_snm, verify_certificate
from .mobility import mobile_edges
from .smc import has_smc

SCHEMA = "gbs-report/v1"
EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- brute-force oracle -------------------------------------------------------

def _canon(pairs):
    # petals up to order, orientation and a global sign change per petal pair
    return tuple(sorted((min(abs(a), abs(b)), max(abs(a), abs(b)), (a < 0) == (b < 0))
                        for a, b in pairs))


def _successors(pairs):
    """(end id, new pairs) for every single-petal step of every petal end."""
    n = len(pairs)
    for i in range(n):
        for side in (0, 1):
            x = pairs[i][side]
            for j in range(n):
                if j == i:
                    continue
                for t in (0, 1):
                    over, far = pairs[j][t], pairs[j][1 - t]
                    if x % over == 0:
                        new = list(pairs)
                        p = list(pairs[i])
                        p[side] = x // over * far
                        new[i] = tuple(p)
                        yield 2 * i + side, tuple(new)


def oracle_bfs(ga, gb, max_label=10**6, max_depth=10):
    """Brute-force search over slides of a rose, labels and depth capped.

    Shares no code with the deciders: states are tuples of label pairs and a
    step is plain integer arithmetic.  Depth counts slide moves; a move may
    run along a path, so further steps of the end that moved last are free
    (0-1 breadth-first search).  Yes when gb is met, No only when the whole
    space was exhausted without hitting a cap.
    """
    if len(ga.vertices) != 1 or len(gb.vertices) != 1:
        return Inconclusive("oracle handles roses only")
    start = tuple((e.label, e.label_rev) for e in ga.edges)
    goal = _canon((e.label, e.label_rev) for e in gb.edges)
    if _canon(start) == goal:
        return Yes(0, "reached", depth=0, states=1)
    best = {(start, -1): 0}
    frontier = deque([(start, -1, 0)])
    truncated = False
    while frontier:
        cur, last, d = frontier.popleft()
        if best[(cur, last)] < d:
            continue
        if _canon(cur) == goal:
            return Yes(d, "reached", depth=d, states=len(best))
        for end, nxt in _successors(cur):
            nd = d if end == last else d + 1
            if max(abs(v) for p in nxt for v in p) > max_label or nd > max_depth:
                truncated = True
                continue
            if best.get((nxt, end), nd + 1) <= nd:
                continue
            best[(nxt, end)] = nd
            if nd == d:
                frontier.appendleft((nxt, end, nd))
            else:
                frontier.append((nxt, end, nd))
    states = len({_canon(s) for s, _ in best})
    if truncated:
        return Inconclusive("search was cut off by the label or depth cap", states=states)
    return No("state space exhausted", states=states, exhaustive=True)


# -- helpers ------------------------------------------------------------------

def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _budget(args):
    return SearchBudget(slack=args.budget_slack, max_path_len=args.max_path_len,
                        snm_cap=args.snm_cap, max_states=args.budget_paths)


def _code(decision, positive=True):
    if decision.inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_YES if decision.yes == positive else EXIT_NO


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def dump(report):
    return json.dumps(_jsonable(report), sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


# -- subcommands --------------------------------------------------------------

def cmd_reduce(args, budget):
    g, seq = reduce(load_graph(args.file))
    return EXIT_YES, {"verdict": "yes", "graph": graph_to_json(g), "moves": seq.to_json(),
                      "text": serialize_graph(g)}, format_gbs(g).rstrip()


def _reduced_rose(path):
    g, _ = reduce(load_graph(path))
    if len(g.vertices) != 1:
        raise GbsError("the reduced graph is not a rose")
    return g


def cmd_ascending(args, budget):
    got = is_ascending(_reduced_rose(args.file), budget)
    if got.inconclusive:
        return EXIT_INCONCLUSIVE, {"verdict": "inconclusive", "reason": got.reason}, \
            "inconclusive: " + got.reason
    asc = got.witness
    rep = {"verdict": "yes" if asc else "no", "ascending": asc, "reason": got.reason}
    if asc:
        rep["witness"] = got.info["cycle"]
        rep["ascending_loop"] = {"moves": got.info["loop"].moves.to_json(),
                                 "loop": got.info["loop"].loop,
                                 "graph": graph_to_json(got.info["loop"].graph)}
    return (EXIT_YES if asc else EXIT_NO), rep, ("ascending" if asc else "non-ascending")


def cmd_smc(args, budget):
    got = has_smc(_reduced_rose(args.file), budget)
    rep = {"verdict": got.verdict, "reason": got.reason, "witness": got.witness}
    if got.yes:
        text = f"strict monotone cycle: {got.witness.to_json()}"
    elif got.no:
        text = "no strict monotone cycle"
    else:
        text = "inconclusive: " + got.reason
    return _code(got), rep, text


def cmd_mobile(args, budget):
    got = mobile_edges(_reduced_rose(args.file), budget)
    if got.inconclusive:
        return EXIT_INCONCLUSIVE, {"verdict": "inconclusive", "reason": got.reason}, \
            "inconclusive: " + got.reason
    return EXIT_YES, {"verdict": "yes", "mobile": got.witness}, " ".join(got.witness) or "(none)"


def cmd_snm(args, budget):
    got = enumerate_snm(_reduced_rose(args.file), budget.snm_cap, budget)
    if got.inconclusive:
        return EXIT_INCONCLUSIVE, {"verdict": "inconclusive", "reason": got.reason}, \
            "inconclusive: " + got.reason
    graphs = [serialize_graph(e.graph) for e in got.witness]
    return EXIT_YES, {"verdict": "yes", "count": len(graphs), "graphs": graphs}, "\n".join(graphs)


def cmd_iso(args, budget):
    ga, gb = load_graph(args.file_a), load_graph(args.file_b)
    got = are_isomorphic(ga, gb, budget)
    rep = {"verdict": got.verdict, "reason": got.reason, "stage": got.info.get("stage")}
    if got.yes:
        cert = got.witness.to_json()
        cert["graph_a"], cert["graph_b"] = graph_to_json(ga), graph_to_json(gb)
        rep["certificate"] = cert
        if args.cert_out:
            with open(args.cert_out, "w", encoding="utf-8") as fh:
                fh.write(dump(cert) + "\n")
    text = {"yes": "isomorphic", "no": "not isomorphic"}.get(got.verdict, "inconclusive")
    return _code(got), rep, f"{text}: {got.reason}"


def cmd_verify_cert(args, budget):
    ga = load_graph(args.file)
    with open(args.cert, encoding="utf-8") as fh:
        obj = json.load(fh)
    if "graph_b" not in obj:
        raise GbsError("certificate does not carry the target graph")
    gb = graph_from_json(obj["graph_b"])
    cert = IsoCertificate.from_json(obj)
    ok = cert.reduce_a.fingerprint == ga.fingerprint() and verify_certificate(ga, gb, cert)
    return (EXIT_YES if ok else EXIT_NO), {"verdict": "yes" if ok else "no", "valid": ok}, \
        ("certificate replays" if ok else "certificate rejected")


def cmd_oracle(args, budget):
    ga, _ = reduce(load_graph(args.file_a))
    gb, _ = reduce(load_graph(args.file_b))
    got = oracle_bfs(ga, gb, args.max_label, args.max_depth)
    rep = {"verdict": got.verdict, "reason": got.reason, "info": got.info}
    return _code(got), rep, f"{got.verdict}: {got.reason}"


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--budget-slack", "--max-exponent-slack", dest="budget_slack", type=int, default=SearchBudget.slack,
                        help="extra room for exponent-box searches")
    common.add_argument("--budget-paths", type=int, default=SearchBudget.max_states,
                        help="state cap for any single search")
    common.add_argument("--snm-cap", type=int, default=SearchBudget.snm_cap,
                        help="cap on graphs collected by non-mobile sliding")
    common.add_argument("--max-path-len", type=int, default=SearchBudget.max_path_len)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; work runs sequentially")
    p = _Parser(prog="gbs", description="Decision procedures for GBS rose graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in (("reduce", cmd_reduce), ("ascending", cmd_ascending), ("smc", cmd_smc),
                     ("mobile", cmd_mobile), ("snm", cmd_snm)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file")
        s.set_defaults(fn=fn)
    s = sub.add_parser("iso", parents=[common])
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.add_argument("--cert-out", help="write the certificate here on a yes answer")
    s.set_defaults(fn=cmd_iso)
    s = sub.add_parser("verify-cert", parents=[common])
    s.add_argument("file")
    s.add_argument("cert")
    s.set_defaults(fn=cmd_verify_cert)
    s = sub.add_parser("oracle-bfs", parents=[common])
    s.add_argument("file_a")
    s.add_argument("file_b")
    s.add_argument("--max-label", type=int, default=10**6)
    s.add_argument("--max-depth", type=int, default=10)
    s.set_defaults(fn=cmd_oracle)
    return p


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    budget = _budget(args)
    try:
        code, report, text = args.fn(args, budget)
    except (GbsError, OSError, json.JSONDecodeError, KeyError) as exc:
        code = EXIT_ERROR
        report = {"verdict": "error", "error": type(exc).__name__, "reason": str(exc)}
        text = f"error: {type(exc).__name__}: {exc}"
    report = dict(report, schema=SCHEMA, command=args.command, exit_code=code)
    if args.json:
        print(dump(report), file=out)
    else:
        print(text, file=out if code != EXIT_ERROR else err)
    return code


def main():
    sys.exit(run(sys.argv[1:]))
