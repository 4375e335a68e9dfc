"""Toric diagrams: data model, text format, balancing checks and builtins.

File format (UTF-8, line oriented, ``#`` starts a comment)::

    diagram resolved_conifold
    vertex v1 trivalent (1,0) (0,1) (-1,-1)
    vertex l1 univalent
    edge v1:1 v2:1
    edge v1:2 l1:0

Slots 1..3 index the weights of a trivalent vertex; slot 0 marks a
univalent end.  Parsing checks referential integrity only; balancing is
reported by :func:`validate`.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .errors import (
    DanglingEdgeRef,
    DiagramSyntaxError,
    DuplicateId,
    InvalidDiagram,
    SlotReused,
    UnknownBuiltin,
)


@dataclass(frozen=True, order=True)
class WeightVector:
    a: int
    b: int

    def __add__(self, other: "WeightVector") -> "WeightVector":
        return WeightVector(self.a + other.a, self.b + other.b)

    def __neg__(self) -> "WeightVector":
        return WeightVector(-self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


@dataclass(frozen=True)
class TrivalentVertex:
    id: str
    weights: tuple[WeightVector, WeightVector, WeightVector]

    def __post_init__(self):
        if len(self.weights) != 3:
            raise ValueError(f"vertex {self.id}: need exactly three weights")
        object.__setattr__(self, "weights", tuple(_wv(w) for w in self.weights))


@dataclass(frozen=True)
class Endpoint:
    vertex: str
    slot: int  # 1..3 on a trivalent vertex, 0 on a univalent one

    def __str__(self) -> str:
        return f"{self.vertex}:{self.slot}"


@dataclass(frozen=True)
class Edge:
    a: Endpoint
    b: Endpoint

    def __str__(self) -> str:
        return f"{self.a}-{self.b}"


@dataclass(frozen=True)
class ToricDiagram:
    name: str
    trivalent: tuple[TrivalentVertex, ...] = ()
    univalent: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        for f in ("trivalent", "univalent", "edges"):
            object.__setattr__(self, f, tuple(getattr(self, f)))
        _check_structure(self)

    def vertex(self, vid: str) -> TrivalentVertex:
        for v in self.trivalent:
            if v.id == vid:
                return v
        raise KeyError(vid)


def _wv(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(*w)


def _check_structure(d: ToricDiagram) -> None:
    kinds: dict[str, str] = {}
    for vid, kind in [(v.id, "trivalent") for v in d.trivalent] + [(u, "univalent") for u in d.univalent]:
        if vid in kinds:
            raise DuplicateId(f"duplicate vertex id {vid!r}")
        kinds[vid] = kind
    used: set[tuple[str, int]] = set()
    for e in d.edges:
        for end in (e.a, e.b):
            kind = kinds.get(end.vertex)
            if kind is None:
                raise DanglingEdgeRef(f"edge {e} references unknown vertex {end.vertex!r}")
            if kind == "trivalent" and end.slot not in (1, 2, 3):
                raise DanglingEdgeRef(f"edge {e}: trivalent vertex {end.vertex!r} has no slot {end.slot}")
            if kind == "univalent" and end.slot != 0:
                raise DanglingEdgeRef(f"edge {e}: univalent vertex {end.vertex!r} takes slot 0")
            key = (end.vertex, end.slot)
            if key in used:
                raise SlotReused(f"slot {end} used by more than one edge")
            used.add(key)


# parsing / serialization

_VEC = re.compile(r"\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)")
_EDGE = re.compile(r"^edge\s+([^\s:()#]+)\s*:\s*(\d+)\s+([^\s:()#]+)\s*:\s*(\d+)$")
_ID = re.compile(r"^[^\s:()#]+$")


def parse_diagram(text: str) -> ToricDiagram:
    name = None
    trivalent: list[TrivalentVertex] = []
    univalent: list[str] = []
    edges: list[tuple[int, Edge]] = []
    seen: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if name is None:
            if head != "diagram" or len(line.split(None, 1)) < 2:
                raise DiagramSyntaxError(lineno, "expected 'diagram <name>' first")
            name = line.split(None, 1)[1].strip()
            continue
        if head == "diagram":
            raise DiagramSyntaxError(lineno, "second 'diagram' header")
        if head == "vertex":
            parts = line.split(None, 3)
            if len(parts) < 3:
                raise DiagramSyntaxError(lineno, "expected 'vertex <id> trivalent|univalent'")
            vid, kind = parts[1], parts[2]
            if not _ID.match(vid):
                raise DiagramSyntaxError(lineno, f"bad vertex id {vid!r}")
            if vid in seen:
                raise DuplicateId(f"line {lineno}: duplicate vertex id {vid!r}")
            seen.add(vid)
            rest = parts[3] if len(parts) > 3 else ""
            if kind == "univalent":
                if rest.strip():
                    raise DiagramSyntaxError(lineno, "univalent vertex takes no weights")
                univalent.append(vid)
            elif kind == "trivalent":
                vecs = _VEC.findall(rest)
                if len(vecs) != 3 or _VEC.sub("", rest).strip():
                    raise DiagramSyntaxError(lineno, "trivalent vertex needs exactly three (a,b) weights")
                trivalent.append(TrivalentVertex(vid, tuple(WeightVector(int(a), int(b)) for a, b in vecs)))
            else:
                raise DiagramSyntaxError(lineno, f"unknown vertex kind {kind!r}")
        elif head == "edge":
            m = _EDGE.match(line)
            if not m:
                raise DiagramSyntaxError(lineno, "expected 'edge <id>:<slot> <id>:<slot>'")
            edges.append((lineno, Edge(Endpoint(m[1], int(m[2])), Endpoint(m[3], int(m[4])))))
        else:
            raise DiagramSyntaxError(lineno, f"unknown directive {head!r}")

    if name is None:
        raise DiagramSyntaxError(1, "empty input; expected 'diagram <name>'")
    # report reference errors with their line numbers before building
    kinds = {v.id: "trivalent" for v in trivalent} | {u: "univalent" for u in univalent}
    used: set[tuple[str, int]] = set()
    for lineno, e in edges:
        for end in (e.a, e.b):
            if end.vertex not in kinds:
                raise DanglingEdgeRef(f"line {lineno}: edge references unknown vertex {end.vertex!r}")
            if (end.vertex, end.slot) in used:
                raise SlotReused(f"line {lineno}: slot {end} used by more than one edge")
            used.add((end.vertex, end.slot))
    return ToricDiagram(name, tuple(trivalent), tuple(univalent), tuple(e for _, e in edges))


def serialize(d: ToricDiagram) -> str:
    lines = [f"diagram {d.name}"]
    for v in d.trivalent:
        lines.append(f"vertex {v.id} trivalent " + " ".join(str(w) for w in v.weights))
    for u in d.univalent:
        lines.append(f"vertex {u} univalent")
    for e in d.edges:
        lines.append(f"edge {e.a} {e.b}")
    return "\n".join(lines) + "\n"


# validation


@dataclass(frozen=True)
class Violation:
    kind: str  # VertexImbalance | EdgeImbalance | ZeroWeight
    where: str
    total: WeightVector = field(default_factory=lambda: WeightVector(0, 0))

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: sum = {self.total}"


def validate(d: ToricDiagram) -> list[Violation]:
    out: list[Violation] = []
    weights = {v.id: v.weights for v in d.trivalent}
    for v in d.trivalent:
        for j, w in enumerate(v.weights, start=1):
            if w.is_zero():
                out.append(Violation("ZeroWeight", f"{v.id}:{j}", w))
        s = v.weights[0] + v.weights[1] + v.weights[2]
        if not s.is_zero():
            out.append(Violation("VertexImbalance", v.id, s))
    for e in d.edges:
        if e.a.vertex in weights and e.b.vertex in weights:
            s = weights[e.a.vertex][e.a.slot - 1] + weights[e.b.vertex][e.b.slot - 1]
            if not s.is_zero():
                out.append(Violation("EdgeImbalance", str(e), s))
    return out


def require_valid(d: ToricDiagram) -> None:
    bad = validate(d)
    if bad:
        raise InvalidDiagram(f"diagram {d.name!r} fails balancing: " + "; ".join(map(str, bad)), bad)


def negate_weights(d: ToricDiagram) -> ToricDiagram:
    return ToricDiagram(
        d.name,
        tuple(TrivalentVertex(v.id, tuple(-w for w in v.weights)) for v in d.trivalent),
        d.univalent,
        d.edges,
    )


def euler_characteristic(d: ToricDiagram) -> int:
    """Number of torus fixed points, i.e. trivalent vertices."""
    require_valid(d)
    return len(d.trivalent)


def _weight_key(ws) -> tuple[WeightVector, ...]:
    return tuple(sorted(ws))


def balanced_pairing(d: ToricDiagram) -> dict[str, str] | None:
    """Perfect matching of vertices with mutually negated weight multisets.

    Returns a symmetric map id -> partner id, or None when no matching
    exists.  Vertices sharing a weight multiset are interchangeable, so
    matching bucket against bucket is exhaustive.
    """
    require_valid(d)
    buckets: dict[tuple, list[str]] = defaultdict(list)
    for v in d.trivalent:
        buckets[_weight_key(v.weights)].append(v.id)
    pairing: dict[str, str] = {}
    for key, ids in buckets.items():
        partner_key = _weight_key(-w for w in key)
        if partner_key == key:
            return None
        partners = buckets.get(partner_key, [])
        if len(partners) != len(ids):
            return None
        for a, b in zip(ids, partners):
            pairing[a] = b
    return pairing


def weight_multiset(d: ToricDiagram) -> Counter:
    """Vertex weight multisets, for comparing diagrams up to relabeling."""
    return Counter(_weight_key(v.weights) for v in d.trivalent)


# builtin catalog


def _diagram(name, verts, edges, legs) -> ToricDiagram:
    trivalent = tuple(TrivalentVertex(vid, tuple(WeightVector(*w) for w in ws)) for vid, ws in verts)
    edge_objs = [Edge(Endpoint(a, sa), Endpoint(b, sb)) for (a, sa), (b, sb) in edges]
    univalent = []
    for i, (vid, slot) in enumerate(legs, start=1):
        leg = f"l{i}"
        univalent.append(leg)
        edge_objs.append(Edge(Endpoint(vid, slot), Endpoint(leg, 0)))
    return ToricDiagram(name, trivalent, tuple(univalent), tuple(edge_objs))


def _resolved_conifold() -> ToricDiagram:
    return _diagram(
        "resolved_conifold",
        [("v1", [(1, 0), (0, 1), (-1, -1)]), ("v2", [(-1, 0), (0, -1), (1, 1)])],
        [(("v1", 1), ("v2", 1))],
        [("v1", 2), ("v1", 3), ("v2", 2), ("v2", 3)],
    )


def _local_p2() -> ToricDiagram:
    return _diagram(
        "local_p2",
        [
            ("v1", [(1, 0), (0, 1), (-1, -1)]),
            ("v2", [(-1, 0), (-1, 1), (2, -1)]),
            ("v3", [(0, -1), (1, -1), (-1, 2)]),
        ],
        [(("v1", 1), ("v2", 1)), (("v1", 2), ("v3", 1)), (("v2", 2), ("v3", 2))],
        [("v1", 3), ("v2", 3), ("v3", 3)],
    )


def _local_p1xp1() -> ToricDiagram:
    # square web, corners named by position; legs point diagonally outward
    return _diagram(
        "local_p1xp1",
        [
            ("bl", [(1, 0), (0, 1), (-1, -1)]),
            ("br", [(-1, 0), (0, 1), (1, -1)]),
            ("tr", [(-1, 0), (0, -1), (1, 1)]),
            ("tl", [(1, 0), (0, -1), (-1, 1)]),
        ],
        [
            (("bl", 1), ("br", 1)),
            (("bl", 2), ("tl", 2)),
            (("br", 2), ("tr", 2)),
            (("tl", 1), ("tr", 1)),
        ],
        [("bl", 3), ("br", 3), ("tr", 3), ("tl", 3)],
    )


BUILTINS = {
    "resolved_conifold": _resolved_conifold,
    "local_p2": _local_p2,
    "local_p1xp1": _local_p1xp1,
}


def builtin(name: str) -> ToricDiagram:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise UnknownBuiltin(f"unknown builtin diagram {name!r}; choose from {sorted(BUILTINS)}") from None
