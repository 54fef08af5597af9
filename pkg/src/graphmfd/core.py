"""Labeled graphs of graph-manifolds and Z/2 cohomology of their underlying multigraphs.

A labeled graph carries a rational charge on every vertex, a positive
intersection index on every nonoriented edge and, optionally, the Z/2 form
of intersection indices.  Every nonoriented edge ``e`` gives two oriented
half-edges: ``2*e`` runs tail -> head and ``2*e + 1`` runs head -> tail, so
``h ^ 1`` is the reversal of half-edge ``h``.  A loop therefore appears twice
in the star of its vertex, once per orientation.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterator, Sequence

__all__ = [
    "GraphInputError",
    "DisconnectedGraphError",
    "Edge",
    "HalfEdge",
    "Cocycle",
    "LabeledGraph",
    "CohomologyBasis",
    "parse_rational",
    "format_rational",
    "parse_labeled_graph",
    "graph_to_dict",
    "graph_to_json",
    "validate",
    "cohomology_classes",
    "is_coboundary",
    "form_rho_from_signs",
    "normalize_orientation",
    "sign",
]


class GraphInputError(ValueError):
    """Raised when a labeled-graph document is malformed."""


class DisconnectedGraphError(ValueError):
    """Raised by operations that need a connected graph."""


def sign(x) -> int:
    return (x > 0) - (x < 0)


def parse_rational(value: Any) -> Fraction:
    """Parse an integer literal or a ``"p/q"`` string exactly."""
    if isinstance(value, bool):
        raise GraphInputError(f"malformed rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        num, slash, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if slash else 1
        except ValueError:
            raise GraphInputError(f"malformed rational: {value!r}") from None
        if q == 0:
            raise GraphInputError(f"malformed rational (zero denominator): {value!r}")
        return Fraction(p, q)
    raise GraphInputError(f"malformed rational: {value!r}")


def format_rational(x: Fraction | int) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    b: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class HalfEdge:
    index: int
    edge: int
    tail: int
    head: int

    @property
    def reverse(self) -> int:
        return self.index ^ 1


@dataclass(frozen=True)
class Cocycle:
    """A multiplicative Z/2 cochain on nonoriented edges (values +1/-1)."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.values):
            raise ValueError("cocycle values must be +1 or -1")

    @classmethod
    def trivial(cls, n_edges: int) -> "Cocycle":
        return cls((1,) * n_edges)

    def __mul__(self, other: "Cocycle") -> "Cocycle":
        if len(self.values) != len(other.values):
            raise ValueError("cocycles live on different edge sets")
        return Cocycle(tuple(a * b for a, b in zip(self.values, other.values)))

    def __getitem__(self, e: int) -> int:
        return self.values[e]

    def __len__(self) -> int:
        return len(self.values)

    def negative_edges(self) -> tuple[int, ...]:
        return tuple(e for e, v in enumerate(self.values) if v == -1)


@dataclass(frozen=True)
class LabeledGraph:
    """Multigraph with charges on vertices and |b| on nonoriented edges.

    Construction does not validate; use :func:`validate` for diagnostics.
    Documents read through :func:`parse_labeled_graph` are already checked
    except for connectivity.
    """

    charges: tuple[Fraction, ...]
    edges: tuple[Edge, ...]
    rho: Cocycle | None = None
    _half: tuple[HalfEdge, ...] = field(init=False, repr=False, compare=False)
    _star: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "charges", tuple(Fraction(k) for k in self.charges))
        object.__setattr__(self, "edges", tuple(self.edges))
        half = []
        for i, e in enumerate(self.edges):
            half.append(HalfEdge(2 * i, i, e.tail, e.head))
            half.append(HalfEdge(2 * i + 1, i, e.head, e.tail))
        star: list[list[int]] = [[] for _ in self.charges]
        for h in half:
            if 0 <= h.tail < len(star):
                star[h.tail].append(h.index)
        object.__setattr__(self, "_half", tuple(half))
        object.__setattr__(self, "_star", tuple(tuple(s) for s in star))

    @property
    def n(self) -> int:
        return len(self.charges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def half_edges(self) -> tuple[HalfEdge, ...]:
        return self._half

    def star(self, v: int) -> tuple[int, ...]:
        """Half-edges leaving ``v``; a loop at ``v`` contributes both orientations."""
        return self._star[v]

    def cyclomatic_number(self) -> int:
        return self.n_edges - self.n + len(connected_components(self))

    def is_connected(self) -> bool:
        return self.n > 0 and len(connected_components(self)) == 1

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedGraphError("graph not connected")

    def with_charges(self, charges: Sequence[Fraction]) -> "LabeledGraph":
        return replace(self, charges=tuple(charges))


def connected_components(g: LabeledGraph) -> list[list[int]]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if 0 <= e.tail < g.n and 0 <= e.head < g.n:
            ra, rb = find(e.tail), find(e.head)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps: dict[int, list[int]] = {}
    for v in range(g.n):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


# ---------------------------------------------------------------------------
# JSON documents


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphInputError(msg)


def _int_field(obj: dict, key: str, what: str) -> int:
    _require(key in obj, f"{what} missing field {key!r}")
    value = obj[key]
    _require(isinstance(value, int) and not isinstance(value, bool),
             f"{what} field {key!r} must be an integer, got {value!r}")
    return value


def parse_labeled_graph(document: str | bytes | dict) -> LabeledGraph:
    """Read a labeled graph from its JSON document.

    ``rho`` may be supplied three ways: negative ``b`` values, per-edge
    ``"rho": +-1`` entries, or a top-level ``"rho"`` list naming the edge ids
    where the form is -1.  Each supplied source must define the same class.
    When none is supplied the graph has no form of intersection indices.
    """
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphInputError(f"invalid JSON: {exc}") from None
    else:
        data = document
    _require(isinstance(data, dict), "document must be a JSON object")
    _require(isinstance(data.get("vertices"), list), "document needs a 'vertices' list")
    _require(isinstance(data.get("edges", []), list), "'edges' must be a list")

    charges: dict[int, Fraction] = {}
    for item in data["vertices"]:
        _require(isinstance(item, dict), f"vertex entry must be an object: {item!r}")
        vid = _int_field(item, "id", "vertex")
        _require(vid not in charges, f"duplicate vertex id {vid}")
        _require("charge" in item, f"vertex {vid} missing field 'charge'")
        charges[vid] = parse_rational(item["charge"])
    n = len(charges)
    _require(n > 0, "graph has no vertices")
    _require(sorted(charges) == list(range(n)), "vertex ids must be 0..n-1")

    edges: list[Edge] = []
    signed_b: list[int] = []
    explicit: dict[int, int] = {}
    seen: set[int] = set()
    for item in data.get("edges", []):
        _require(isinstance(item, dict), f"edge entry must be an object: {item!r}")
        eid = _int_field(item, "id", "edge")
        _require(eid not in seen, f"duplicate edge id {eid}")
        seen.add(eid)
        tail = _int_field(item, "tail", f"edge {eid}")
        head = _int_field(item, "head", f"edge {eid}")
        for end in (tail, head):
            _require(0 <= end < n, f"edge {eid} references missing vertex {end}")
        _require("b" in item, f"edge {eid} missing field 'b'")
        b = item["b"]
        _require(isinstance(b, int) and not isinstance(b, bool),
                 f"edge {eid}: intersection index must be an integer, got {b!r}")
        _require(b != 0, f"edge {eid}: intersection index must be nonzero")
        if "rho" in item:
            _require(item["rho"] in (1, -1) and not isinstance(item["rho"], bool),
                     f"edge {eid}: rho must be +1 or -1")
            explicit[len(edges)] = item["rho"]
        signed_b.append(b)
        edges.append(Edge(eid, tail, head, abs(b)))

    ids = [e.id for e in edges]
    sources: list[tuple[str, Cocycle]] = []
    if any(b < 0 for b in signed_b):
        sources.append(("signed b", form_rho_from_signs(signed_b)))
    if explicit:
        sources.append(("edge rho entries",
                        Cocycle(tuple(explicit.get(i, 1) for i in range(len(edges))))))
    if "rho" in data:
        neg = data["rho"]
        _require(isinstance(neg, list), "top-level 'rho' must be a list of edge ids")
        for eid in neg:
            _require(eid in seen, f"top-level rho names unknown edge {eid!r}")
        sources.append(("rho edge list",
                        Cocycle(tuple(-1 if eid in neg else 1 for eid in ids))))

    g = LabeledGraph(tuple(charges[v] for v in range(n)), tuple(edges))
    rho = None
    if sources:
        rho = sources[-1][1]
        for name, other in sources[:-1]:
            if g.is_connected():
                agree = is_coboundary(g, rho * other) is not None
            else:
                agree = rho == other
            _require(agree, f"rho from {name} disagrees with rho from {sources[-1][0]}")
    return replace(g, rho=rho)


def graph_to_dict(g: LabeledGraph) -> dict:
    doc: dict[str, Any] = {
        "vertices": [{"id": v, "charge": format_rational(k)} for v, k in enumerate(g.charges)],
        "edges": [],
    }
    for i, e in enumerate(g.edges):
        entry = {"id": e.id, "tail": e.tail, "head": e.head, "b": e.b}
        if g.rho is not None:
            entry["rho"] = g.rho[i]
        doc["edges"].append(entry)
    return doc


def graph_to_json(g: LabeledGraph) -> str:
    return json.dumps(graph_to_dict(g), sort_keys=True, indent=2)


def validate(g: LabeledGraph) -> list[str]:
    """Return one diagnostic per violated invariant; empty means usable."""
    out: list[str] = []
    if g.n == 0:
        return ["graph has no vertices"]
    ids = [e.id for e in g.edges]
    if len(set(ids)) != len(ids):
        out.append("duplicate edge ids")
    for e in g.edges:
        if not (0 <= e.tail < g.n and 0 <= e.head < g.n):
            out.append(f"edge {e.id} has a dangling endpoint")
        if e.b == 0:
            out.append("intersection index must be nonzero")
        elif e.b < 0:
            out.append(f"edge {e.id}: stored intersection index must be |b| > 0")
    if g.rho is not None and len(g.rho) != g.n_edges:
        out.append("rho does not match the edge set")
    if not any(m.startswith("edge") and "dangling" in m for m in out):
        if not g.is_connected():
            out.append("graph not connected")
    return out


# ---------------------------------------------------------------------------
# Z/2 cohomology


@dataclass(frozen=True)
class CohomologyBasis:
    """Spanning-tree description of H^1(Gamma; Z/2).

    The class with index ``mask`` is represented by the cocycle equal to -1
    exactly on the non-tree edges ``cotree[i]`` whose bit ``i`` is set.
    """

    n_edges: int
    tree: tuple[int, ...]
    cotree: tuple[int, ...]
    root_paths: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return 1 << len(self.cotree)

    def representative(self, mask: int) -> Cocycle:
        if not 0 <= mask < self.count:
            raise IndexError(f"class index {mask} out of range 0..{self.count - 1}")
        values = [1] * self.n_edges
        for i, e in enumerate(self.cotree):
            if mask >> i & 1:
                values[e] = -1
        return Cocycle(tuple(values))

    def class_index(self, g: LabeledGraph, lam: Cocycle) -> int:
        """Index of the representative cohomologous to ``lam``."""
        eps = self._tree_potential(g, lam)
        mask = 0
        for i, e in enumerate(self.cotree):
            edge = g.edges[e]
            if lam[e] * eps[edge.tail] * eps[edge.head] == -1:
                mask |= 1 << i
        return mask

    def _tree_potential(self, g: LabeledGraph, lam: Cocycle) -> list[int]:
        # root_paths[v] lists the tree edges from the root down to v
        eps = []
        for path in self.root_paths:
            s = 1
            for e in path:
                s *= lam[e]
            eps.append(s)
        return eps

    def __iter__(self) -> Iterator[Cocycle]:
        return (self.representative(m) for m in range(self.count))


def _spanning_tree(g: LabeledGraph) -> tuple[list[int], list[tuple[int, ...]]]:
    paths: list[tuple[int, ...] | None] = [None] * g.n
    tree: list[int] = []
    paths[0] = ()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for h in g.star(v):
            he = g.half_edges[h]
            if paths[he.head] is None:
                paths[he.head] = paths[v] + (he.edge,)
                tree.append(he.edge)
                queue.append(he.head)
    return sorted(tree), paths  # type: ignore[return-value]


def cohomology_classes(g: LabeledGraph) -> tuple[CohomologyBasis, Iterator[Cocycle]]:
    """Spanning-tree basis of H^1 and an iterator over its 2^|C| representatives."""
    g.require_connected()
    tree, paths = _spanning_tree(g)
    tree_set = set(tree)
    cotree = tuple(e for e in range(g.n_edges) if e not in tree_set)
    basis = CohomologyBasis(g.n_edges, tuple(tree), cotree, tuple(paths))
    return basis, iter(basis)


def is_coboundary(g: LabeledGraph, lam: Cocycle) -> tuple[int, ...] | None:
    """Potential eps with lam_e = eps(tail) * eps(head), or None."""
    g.require_connected()
    eps: list[int | None] = [None] * g.n
    eps[0] = 1
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for h in g.star(v):
            he = g.half_edges[h]
            want = eps[v] * lam[he.edge]
            if eps[he.head] is None:
                eps[he.head] = want
                queue.append(he.head)
            elif eps[he.head] != want:
                return None
    return tuple(eps)  # type: ignore[arg-type]


def form_rho_from_signs(signed_b: Sequence[int]) -> Cocycle:
    if any(b == 0 for b in signed_b):
        raise GraphInputError("intersection index must be nonzero")
    return Cocycle(tuple(sign(b) for b in signed_b))


def normalize_orientation(g: LabeledGraph) -> tuple[LabeledGraph, bool]:
    """Flip the orientation when no charge is positive but some is nonzero.

    Reversing the orientation negates every charge and every intersection
    index, so the form rho is multiplied by the constant cocycle -1.
    Returns the (possibly) flipped graph and whether a flip happened.
    """
    if any(k != 0 for k in g.charges) and not any(k > 0 for k in g.charges):
        rho = None if g.rho is None else Cocycle(tuple(-x for x in g.rho.values))
        return replace(g, charges=tuple(-k for k in g.charges), rho=rho), True
    return g, False
