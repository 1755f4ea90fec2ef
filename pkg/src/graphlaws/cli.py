"""Command-line interface.

Output is JSON on stdout by default (``--format table`` for a plain listing).
Domain errors exit with status 1 and an error object on stderr; usage errors
exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io
from .acceptance import CRITERIA, run_all
from .cliques import clique_vector
from .dag import (
    d_clique_vector,
    d_separated,
    dagoid_members,
    dagoid_of,
    enumerate_dags,
    immoralities,
    induced_subdagoid,
    remainder_dagoid,
)
from .dagoid_law import (
    ExponentialDagoidLaw,
    check_dagoid_structural_markov,
    class_size_law,
    edge_count_dagoid_omega,
    enumerate_dagoids,
)
from .errors import GraphLawError, InvalidInput, UnknownLaw
from .gaussian import GaussHyper, map_dagoid, map_graph, posterior_omega
from .laws import (
    BUILTIN_LAWS,
    GraphFamily,
    builtin_law,
    check_meta_markov,
    check_structural_markov,
    log_normalizer,
    witness_json,
)
from .mcmc import run_chain, run_chains
from .subsets import SubsetVector, members, submasks, vset
from .ugraph import enumerate_decomposable, enumerate_graphs

DAGOID_LAWS = ("uniform", "edge-count", "class-size")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _vertex_list(text: str) -> int:
    try:
        return vset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertices, got {text!r}") from None


def _params(text: str) -> dict:
    try:
        out = json.loads(text)
    except json.JSONDecodeError:
        raise argparse.ArgumentTypeError(f"--params must be a JSON object, got {text!r}") from None
    if not isinstance(out, dict):
        raise argparse.ArgumentTypeError("--params must be a JSON object")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphlaws", description="Structural Markov graph laws over decomposable graphs and dagoids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("json", "table"), default="json")
        return sp

    sp = add("enumerate", "list or count graphs, DAGs or dagoids")
    sp.add_argument("--kind", choices=("decomposable", "graphs", "dags", "dagoids"), default="decomposable")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")

    sp = add("tvec", "clique vector of a graph, or d-clique vector of a DAG or dagoid")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--dag")
    g.add_argument("--dagoid")

    sp = add("law-eval", "log-density of a graph or dagoid under a law")
    sp.add_argument("--law", required=True, help="law JSON file or built-in name")
    sp.add_argument("--params", type=_params, default={})
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--dagoid")
    sp.add_argument("--n", type=int)

    sp = add("check-sm", "verify the structural Markov property")
    sp.add_argument("--law", required=True, help="law JSON file or built-in name")
    sp.add_argument("--params", type=_params, default={})
    sp.add_argument("--n", type=int)
    sp.add_argument("--dagoids", action="store_true", help="treat the law as a law over dagoids")

    sp = add("check-meta", "verify that a graph family is closed under graph products")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", help="JSON list of graphs")
    g.add_argument("--family-kind", choices=("all", "forests", "trees", "bounded", "sandwich"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--max-clique", type=int, default=2)
    sp.add_argument("--min-separator", type=int, default=0)
    sp.add_argument("--lower")
    sp.add_argument("--upper")

    sp = add("posterior", "conjugate update of omega from Gaussian data")
    sp.add_argument("--omega")
    sp.add_argument("--hyper")
    sp.add_argument("--data", required=True)
    sp.add_argument("--header", action="store_true", help="data CSV has a header row")
    sp.add_argument("--n", type=int)

    sp = add("map", "maximum a posteriori graph or dagoid")
    sp.add_argument("--omega", required=True)
    sp.add_argument("--dagoids", action="store_true")

    sp = add("mcmc", "Metropolis-Hastings over decomposable graphs")
    sp.add_argument("--omega", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--burn-in", type=int, default=0)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--chains", type=int, default=1)
    sp.add_argument("--top", type=int, default=10)

    sp = add("dag-equiv", "Markov equivalence of two DAGs")
    sp.add_argument("--dag", action="append", required=True, help="give twice")

    sp = add("dagoid", "equivalence class of a DAG")
    sp.add_argument("--dag", required=True)

    sp = add("remainder", "induced and remainder dagoids for an ancestral set")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--dagoid")
    g.add_argument("--dag")
    sp.add_argument("--set", dest="subset", type=_vertex_list, required=True, help="comma-separated vertices")

    sp = add("oracle", "run the exhaustive acceptance suite")
    sp.add_argument("--criteria", type=lambda s: [int(x) for x in s.split(",")], default=None)
    return p


# -- loaders ---------------------------------------------------------------------

def _load_law(args, dagoids: bool = False):
    name = args.law
    if name in BUILTIN_LAWS or name in DAGOID_LAWS:
        if args.n is None:
            raise InvalidInput(f"built-in law {name!r} needs --n")
        if dagoids:
            if name == "uniform":
                return ExponentialDagoidLaw(SubsetVector.zeros(args.n))
            if name == "edge-count":
                return ExponentialDagoidLaw(edge_count_dagoid_omega(args.n, float(args.params.get("rho", 0.5))))
            if name == "class-size":
                return class_size_law(args.n)
            raise UnknownLaw(f"unknown dagoid law {name!r}; choose from {', '.join(DAGOID_LAWS)}", name=name)
        return builtin_law(name, args.params, args.n)
    if not Path(name).is_file():
        raise UnknownLaw(f"unknown law {name!r}; give a JSON file or one of {', '.join(BUILTIN_LAWS)}", name=name)
    return io.law_from_json(io.load_json(name), dagoid=dagoids)


def _omega(path: str) -> SubsetVector:
    return io.subset_vector_from_json(io.load_json(path))


def _dagoid(path: str):
    obj = io.load_json(path)
    if isinstance(obj, dict) and "skeleton" in obj:
        return io.dagoid_from_json(obj)
    return dagoid_of(io.dag_from_json(obj))


# -- commands ---------------------------------------------------------------------

def cmd_enumerate(args):
    n = args.n
    if args.kind == "dagoids":
        items = enumerate_dagoids(n)
        if args.count_only:
            return {"kind": "dagoids", "n": n, "count": len(items)}
        return {"kind": "dagoids", "n": n, "count": len(items),
                "items": [{"dagoid": io.dagoid_to_json(dg), "members": c} for dg, c in items]}
    if args.kind == "dags":
        items = list(enumerate_dags(n))
        to_json = io.dag_to_json
    else:
        items = list(enumerate_decomposable(n) if args.kind == "decomposable" else enumerate_graphs(n))
        to_json = io.graph_to_json
    out = {"kind": args.kind, "n": n, "count": len(items)}
    if not args.count_only:
        out["items"] = [to_json(x) for x in items]
    return out


def cmd_tvec(args):
    if args.graph:
        return io.subset_vector_to_json(clique_vector(io.graph_from_json(io.load_json(args.graph))))
    return io.subset_vector_to_json(d_clique_vector(_dagoid(args.dag or args.dagoid)))


def cmd_law_eval(args):
    if args.dagoid:
        dg = _dagoid(args.dagoid)
        if args.n is None:
            args.n = dg.n
        law = _load_law(args, dagoids=True)
        value = law.log_density(dg)
        return {"log_density": value}
    g = io.graph_from_json(io.load_json(args.graph))
    if args.n is None:
        args.n = g.n
    law = _load_law(args)
    out = {"log_density": law.log_density(g)}
    if getattr(law, "kind", "") == "exponential" and g.n <= 7:
        log_z = log_normalizer(law)
        out.update(log_normalizer=log_z, normalized_log_density=out["log_density"] - log_z)
    return out


def cmd_check_sm(args):
    law = _load_law(args, dagoids=args.dagoids)
    if args.dagoids:
        w = check_dagoid_structural_markov(law)
        if w is None:
            return {"structurally_markov": True}
        return {"structurally_markov": False, "witness": {
            "A": members(w.a), "D": io.dagoid_to_json(w.d), "D_prime": io.dagoid_to_json(w.d2),
            "recombined": [io.dagoid_to_json(c) for c in w.cross],
            "lhs_log": w.lhs, "rhs_log": w.rhs, "lhs": float(np.exp(w.lhs)), "rhs": float(np.exp(w.rhs))}}
    w = check_structural_markov(law)
    if w is None:
        return {"structurally_markov": True}
    return {"structurally_markov": False, "witness": witness_json(w)}


def cmd_check_meta(args):
    if args.family:
        obj = io.load_json(args.family)
        if not isinstance(obj, list) or not obj:
            raise InvalidInput("family file must hold a nonempty JSON list of graphs")
        fam = GraphFamily(io.graph_from_json(g) for g in obj)
    elif args.family_kind == "sandwich":
        if not (args.lower and args.upper):
            raise InvalidInput("sandwich families need --lower and --upper graphs")
        fam = GraphFamily.sandwich(io.graph_from_json(io.load_json(args.lower)),
                                   io.graph_from_json(io.load_json(args.upper)))
    else:
        if args.n is None:
            raise InvalidInput(f"family kind {args.family_kind!r} needs --n")
        fam = {
            "all": lambda: GraphFamily.all_decomposable(args.n),
            "forests": lambda: GraphFamily.forests(args.n),
            "trees": lambda: GraphFamily.trees(args.n),
            "bounded": lambda: GraphFamily.bounded(args.n, args.max_clique, args.min_separator),
        }[args.family_kind]()
    w = check_meta_markov(fam)
    out = {"meta_markov": w is None, "family_size": len(fam)}
    if w is not None:
        out["witness"] = witness_json(w)
    return out


def cmd_posterior(args):
    x = io.read_data_csv(args.data, header=args.header)
    n = args.n or x.shape[1]
    hyper = io.hyper_from_json(io.load_json(args.hyper)) if args.hyper else GaussHyper.identity(n)
    omega = _omega(args.omega) if args.omega else SubsetVector.zeros(hyper.n)
    if not omega.n == hyper.n == x.shape[1]:
        raise InvalidInput(f"omega ({omega.n}), hyper ({hyper.n}) and data ({x.shape[1]}) disagree on vertex count")
    return io.subset_vector_to_json(posterior_omega(omega, hyper, x))


def cmd_map(args):
    omega = _omega(args.omega)
    if args.dagoids:
        dg = map_dagoid(omega)
        return {"dagoid": io.dagoid_to_json(dg), "score": float(omega.dot(d_clique_vector(dg)))}
    g = map_graph(omega)
    return {"graph": io.graph_to_json(g), "score": float(omega.dot(clique_vector(g)))}


def cmd_mcmc(args):
    omega = _omega(args.omega)
    if args.chains < 1:
        raise InvalidInput("--chains must be at least 1")
    if args.chains == 1:
        report = run_chain(omega, steps=args.steps, burn_in=args.burn_in, seed=args.seed)
    else:
        report = run_chains(omega, args.chains, args.steps, args.burn_in, args.seed)
    return io.report_to_json(report, args.top)


def cmd_dag_equiv(args):
    if len(args.dag) != 2:
        raise InvalidInput("dag-equiv needs --dag exactly twice")
    d1, d2 = (io.dag_from_json(io.load_json(p)) for p in args.dag)
    if d1.n != d2.n or d1.vertices != d2.vertices:
        raise InvalidInput("both DAGs must live on the same vertex set")
    by_structure = d1.skeleton() == d2.skeleton() and immoralities(d1) == immoralities(d2)
    by_vector = d_clique_vector(d1) == d_clique_vector(d2)
    out = {"equivalent": by_structure and by_vector, "skeleton_and_immoralities": by_structure,
           "d_clique_vector": by_vector}
    if d1.n <= 5:
        v = d1.vertices
        same = True
        for a in submasks(v):
            for b in submasks(v & ~a):
                if a and b and a < b:
                    for c in submasks(v & ~a & ~b):
                        if d_separated(d1, a, b, c) != d_separated(d2, a, b, c):
                            same = False
        out["d_separation"] = same
        out["equivalent"] = out["equivalent"] and same
    if len({v for k, v in out.items() if k != "equivalent"}) != 1:
        out["criteria_disagree"] = True
    return out


def cmd_dagoid(args):
    d = io.dag_from_json(io.load_json(args.dag))
    dg = dagoid_of(d)
    mem = dagoid_members(dg)
    return {"dagoid": io.dagoid_to_json(dg), "size": len(mem), "members": [io.dag_to_json(m) for m in mem]}


def cmd_remainder(args):
    dg = _dagoid(args.dagoid or args.dag)
    a = args.subset
    if a & ~dg.vertices:
        raise InvalidInput(f"set {members(a)} is not inside the vertex set")
    return {"set": members(a), "induced": io.dagoid_to_json(induced_subdagoid(dg, a)),
            "remainder": io.dagoid_to_json(remainder_dagoid(dg, a))}


def cmd_oracle(args):
    if args.criteria and any(k not in CRITERIA for k in args.criteria):
        raise InvalidInput(f"criteria must be among {sorted(CRITERIA)}")
    results = run_all(args.criteria)
    return {"all_passed": all(r.passed for r in results),
            "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "details": r.details}
                         for r in results]}


COMMANDS = {
    "enumerate": cmd_enumerate,
    "tvec": cmd_tvec,
    "law-eval": cmd_law_eval,
    "check-sm": cmd_check_sm,
    "check-meta": cmd_check_meta,
    "posterior": cmd_posterior,
    "map": cmd_map,
    "mcmc": cmd_mcmc,
    "dag-equiv": cmd_dag_equiv,
    "dagoid": cmd_dagoid,
    "remainder": cmd_remainder,
    "oracle": cmd_oracle,
}


# -- output -------------------------------------------------------------------------

def _table(obj, indent: int = 0, directed: bool = False) -> list[str]:
    pad = "  " * indent
    arrow = "->" if directed else "-"
    if isinstance(obj, dict):
        if set(obj) >= {"n", "entries"} and isinstance(obj["entries"], list) and all(
                isinstance(e, dict) and "set" in e for e in obj["entries"]):
            return [f"{pad}{{{','.join(map(str, e['set']))}}}\t{e['value']}" for e in obj["entries"]]
        if set(obj) >= {"n", "edges"}:
            edges = " ".join(f"{u}{arrow}{v}" for u, v in obj["edges"]) or "(no edges)"
            return [f"{pad}n={obj['n']} {edges}"]
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1, directed or k == "members"))
            else:
                lines.append(f"{pad}{k}: {v}")
        return lines
    if isinstance(obj, list):
        lines = []
        for item in obj:
            lines.extend(_table(item, indent, directed) if isinstance(item, (dict, list)) else [f"{pad}{item}"])
        return lines
    return [f"{pad}{obj}"]


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except GraphLawError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), default=str) + "\n")
        return 1
    if args.format == "table":
        if args.command == "oracle":
            for r in out["criteria"]:
                status = "PASS" if r["passed"] else "FAIL"
                sys.stdout.write(f"{status}  {r['number']:2d}  {r['title']}\n")
                for d in r["details"]:
                    sys.stdout.write(f"          {d}\n")
        else:
            directed = args.command == "enumerate" and args.kind == "dags"
            sys.stdout.write("\n".join(_table(out, directed=directed)) + "\n")
    else:
        sys.stdout.write(io.dumps(out))
    if args.command == "oracle" and not out["all_passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
