"""Diagram rewrites used by the invariance tests."""

from ellgen.toric import Edge, Endpoint, ToricDiagram, TrivalentVertex


def relabel(d: ToricDiagram, rename) -> ToricDiagram:
    def end(e):
        return Endpoint(rename(e.vertex), e.slot)

    return ToricDiagram(
        d.name,
        tuple(TrivalentVertex(rename(v.id), v.weights) for v in d.trivalent),
        tuple(rename(u) for u in d.univalent),
        tuple(Edge(end(e.a), end(e.b)) for e in d.edges),
    )


def permute_slots(d: ToricDiagram, perms: dict) -> ToricDiagram:
    """perms[id] = p means new slot i+1 holds old weight p[i]; edges follow."""
    moved = {}
    verts = []
    for v in d.trivalent:
        p = perms.get(v.id, (0, 1, 2))
        verts.append(TrivalentVertex(v.id, tuple(v.weights[k] for k in p)))
        for new, old in enumerate(p):
            moved[(v.id, old + 1)] = new + 1

    def end(e):
        return Endpoint(e.vertex, moved.get((e.vertex, e.slot), e.slot))

    return ToricDiagram(d.name, tuple(verts), d.univalent, tuple(Edge(end(e.a), end(e.b)) for e in d.edges))
