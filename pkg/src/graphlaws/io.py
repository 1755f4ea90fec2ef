"""JSON and CSV formats for graphs, DAGs, dagoids, vectors, laws and reports."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dag import Dag, Dagoid, dagoid_from_parts
from .dagoid_law import DagoidLaw, ExponentialDagoidLaw, TableDagoidLaw
from .errors import InvalidInput
from .gaussian import GaussHyper, check_data
from .laws import ExponentialLaw, GraphLaw, TableLaw
from .subsets import SubsetVector, full, members, vset
from .ugraph import UGraph


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise InvalidInput(f"expected a JSON object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InvalidInput(f"JSON object lacks keys {missing}")


def _int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInput(f"{what} must be an integer, got {value!r}")
    return value


def _vertices_json(n: int, vertices: int) -> dict:
    return {} if vertices == full(n) else {"vertices": members(vertices)}


def _vertices_from(obj: dict, n: int) -> int:
    if "vertices" not in obj:
        return full(n)
    vs = [_int(v, "vertex") for v in obj["vertices"]]
    if any(not 0 <= v < n for v in vs):
        raise InvalidInput(f"vertex out of range 0..{n - 1}")
    return vset(vs)


def _edge_list(obj: dict, n: int) -> list[tuple[int, int]]:
    out = []
    for e in obj["edges"]:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InvalidInput(f"edge {e!r} must be a pair")
        u, v = _int(e[0], "vertex"), _int(e[1], "vertex")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInput(f"edge {e!r} has a vertex out of range 0..{n - 1}")
        out.append((u, v))
    return out


# -- graphs ---------------------------------------------------------------------

def graph_to_json(g: UGraph) -> dict:
    if not isinstance(g, UGraph):
        raise InvalidInput("expected an undirected graph")
    return {"n": g.n, "edges": [list(e) for e in g.edges()], **_vertices_json(g.n, g.vertices)}


def graph_from_json(obj) -> UGraph:
    _require(obj, "n", "edges")
    n = _int(obj["n"], "n")
    return UGraph.from_edges(n, _edge_list(obj, n), _vertices_from(obj, n))


def dag_to_json(d: Dag) -> dict:
    return {"n": d.n, "edges": [list(e) for e in d.edges()], **_vertices_json(d.n, d.vertices)}


def dag_from_json(obj) -> Dag:
    _require(obj, "n", "edges")
    n = _int(obj["n"], "n")
    return Dag.from_edges(n, _edge_list(obj, n), _vertices_from(obj, n))


def dagoid_to_json(dg: Dagoid) -> dict:
    return {"skeleton": graph_to_json(dg.skeleton), "immoralities": [list(t) for t in sorted(dg.immoralities)]}


def dagoid_from_json(obj) -> Dagoid:
    _require(obj, "skeleton", "immoralities")
    skel = graph_from_json(obj["skeleton"])
    imm = []
    for t in obj["immoralities"]:
        if len(t) != 3:
            raise InvalidInput(f"immorality {t!r} must be a triple")
        a, c, b = (_int(x, "vertex") for x in t)
        imm.append((min(a, b), c, max(a, b)))
    return dagoid_from_parts(skel, imm)


# -- vectors ---------------------------------------------------------------------

def _number(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def subset_vector_to_json(v: SubsetVector) -> dict:
    entries = sorted(v.items(), key=lambda kv: (kv[0].bit_count(), members(kv[0])))
    return {"n": v.n, "entries": [{"set": members(k), "value": _number(x)} for k, x in entries]}


def subset_vector_from_json(obj) -> SubsetVector:
    _require(obj, "n", "entries")
    n = _int(obj["n"], "n")
    entries = {}
    for e in obj["entries"]:
        _require(e, "set", "value")
        vs = [_int(x, "vertex") for x in e["set"]]
        if any(not 0 <= x < n for x in vs):
            raise InvalidInput(f"subset {vs} has a vertex out of range")
        value = e["value"]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
            raise InvalidInput(f"subset value {value!r} must be a finite number")
        entries[vset(vs)] = entries.get(vset(vs), 0) + value
    return SubsetVector(n, entries)


# -- laws ------------------------------------------------------------------------

def law_to_json(law) -> dict:
    if isinstance(law, (ExponentialLaw, ExponentialDagoidLaw)):
        return {"kind": "exponential", "omega": subset_vector_to_json(law.omega)}
    if isinstance(law, TableLaw):
        return {"kind": "table", "entries": [{"graph": graph_to_json(g), "logp": lp} for g, lp in law.entries.items()]}
    if isinstance(law, TableDagoidLaw):
        return {"kind": "table",
                "entries": [{"dagoid": dagoid_to_json(d), "logp": lp} for d, lp in law.entries.items()]}
    raise InvalidInput(f"cannot serialise {type(law).__name__}")


def law_from_json(obj, dagoid: bool = False) -> GraphLaw | DagoidLaw:
    _require(obj, "kind")
    if obj["kind"] == "exponential":
        _require(obj, "omega")
        omega = subset_vector_from_json(obj["omega"])
        return ExponentialDagoidLaw(omega) if dagoid else ExponentialLaw(omega)
    if obj["kind"] == "table":
        _require(obj, "entries")
        if dagoid or any("dagoid" in e for e in obj["entries"]):
            return TableDagoidLaw({dagoid_from_json(e["dagoid"]): float(e["logp"]) for e in obj["entries"]})
        return TableLaw({graph_from_json(e["graph"]): float(e["logp"]) for e in obj["entries"]})
    raise InvalidInput(f"unknown law kind {obj['kind']!r}")


# -- Gaussian inputs --------------------------------------------------------------

def hyper_to_json(h: GaussHyper) -> dict:
    return {"delta": h.delta, "phi": h.phi.tolist()}


def hyper_from_json(obj) -> GaussHyper:
    _require(obj, "delta", "phi")
    return GaussHyper(float(obj["delta"]), np.asarray(obj["phi"], dtype=float))


def read_data_csv(path, header: bool = False, n: int | None = None) -> np.ndarray:
    try:
        x = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    except ValueError as exc:
        raise InvalidInput(f"cannot parse data file {path}: {exc}") from None
    return check_data(x, n)


def write_data_csv(path, x: np.ndarray, header: bool = False) -> None:
    x = np.asarray(x, dtype=float)
    head = ",".join(f"x{v}" for v in range(x.shape[1])) if header else ""
    np.savetxt(path, x, delimiter=",", header=head, comments="", fmt="%.17g")


# -- reports ----------------------------------------------------------------------

def report_to_json(report, top: int = 10) -> dict:
    return {
        "steps": report.steps,
        "acceptance_rate": report.acceptance_rate,
        "edge_freq": [[u, v, f] for u, v, f in report.edge_freq()],
        "top_graphs": [{"graph": graph_to_json(g), "freq": f} for g, f in report.top_graphs(top)],
    }


# -- files -------------------------------------------------------------------------

def _render(obj, indent: int, width: int) -> str:
    flat = json.dumps(obj, allow_nan=False)
    if len(flat) + indent <= width or not isinstance(obj, (dict, list)) or not obj:
        return flat
    pad = " " * (indent + 2)
    if isinstance(obj, dict):
        body = [f"{pad}{json.dumps(k)}: {_render(v, indent + 2, width)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(body) + "\n" + " " * indent + "}"
    body = [pad + _render(v, indent + 2, width) for v in obj]
    return "[\n" + ",\n".join(body) + "\n" + " " * indent + "]"


def dumps(obj, width: int = 100) -> str:
    """Indented JSON that keeps short values on one line."""
    return _render(obj, 0, width) + "\n"


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
