"""Operahedron skeletons: vertices, rewrite-classified edges, and 2-faces.

The operahedron of a planar tree has one face per nesting containing the
full nest; vertices are the maximal nestings, edges the pairs differing in a
single nest, and 2-faces the nestings of size p - 3.  Every edge is a single
nest replacement and is classified as a sequential move (the replaced and
replacing nests share no top vertex) or a parallel move (they share it);
the forward direction is the rewrite towards the unique normal form.
"""

from functools import lru_cache
from typing import NamedTuple

from . import trees
from .complexes import Complex2
from .errors import MalformedEdgeError, ShapeError

BETA = "beta"
THETA = "theta"

SHAPE_BY_LENGTH = {4: "square", 5: "pentagon", 6: "hexagon"}


class SkeletonEdge(NamedTuple):
    a: int
    b: int
    removed: frozenset  # the nest present at endpoint a only
    added: frozenset  # the nest present at endpoint b only
    kind: str  # BETA or THETA
    forward: bool  # True when a -> b is the forward rewrite


class TwoFace(NamedTuple):
    nesting: frozenset  # p - 3 nests including the full nest
    vertices: tuple  # boundary cycle as vertex indices
    steps: tuple  # boundary walk as signed edge steps
    shape: str  # "square" | "pentagon" | "hexagon"
    template: str  # which 4-vertex configuration the face instantiates


def classify_flip(tree, removed, added):
    """Classify a single-nest replacement and give its forward direction.

    The union of the two nests is connected with a unique topmost vertex r.
    The move is parallel (theta) when r lies in both nests, sequential
    (beta) otherwise.  Beta runs from the side whose nest contains r; theta
    from the side whose hanging piece sits at the smaller planar position.
    """
    removed = frozenset(removed)
    added = frozenset(added)
    if (
        not removed & added
        or removed <= added
        or added <= removed
    ):
        raise MalformedEdgeError("the two nests must overlap without nesting")
    r = min(removed | added)
    if r in removed and r in added:
        return THETA, min(removed - added) < min(added - removed)
    return BETA, r in removed


def classify_edge(tree, nesting_a, nesting_b):
    """(kind, forward) for the edge between two maximal nestings; raises
    MalformedEdgeError unless they differ in exactly one nest."""
    diff_a = nesting_a - nesting_b
    diff_b = nesting_b - nesting_a
    if len(diff_a) != 1 or len(diff_b) != 1:
        raise MalformedEdgeError(
            f"endpoints differ in {len(diff_a)} + {len(diff_b)} nests, expected 1 + 1"
        )
    return classify_flip(tree, next(iter(diff_a)), next(iter(diff_b)))


def flip_nest(tree, nesting, nest):
    """Replace ``nest`` in a maximal nesting by the unique alternative.

    Dropping a non-full nest leaves its parent with three immediate pieces;
    the quotient of those pieces is a three-vertex tree, so exactly two
    groupings are connected and the flip swaps one for the other.
    """
    rest = nesting - {nest}
    enclosing = [m for m in rest if nest < m]
    if not enclosing:
        raise ValueError("the full nest cannot be flipped")
    parent = min(enclosing, key=len)
    parts = trees.pieces(rest, parent)
    assert len(parts) == 3, "dropping one nest must leave a ternary parent"
    top = parts[0]  # pieces are ordered by min id; the first holds the top

    def holder(piece):
        pv = tree.parent[min(piece)]
        return next(q for q in parts if pv in q)

    x, y = parts[1], parts[2]
    hx, hy = holder(x), holder(y)
    if hx is top and hy is top:
        groupings = (top | x, top | y)
    elif hx is top and hy is x:
        groupings = (top | x, x | y)
    elif hy is top and hx is y:
        groupings = (top | y, x | y)
    else:
        raise AssertionError("pieces do not form a three-vertex quotient tree")
    if nest == groupings[0]:
        added = groupings[1]
    elif nest == groupings[1]:
        added = groupings[0]
    else:
        raise AssertionError("the dropped nest is not a grouping of the pieces")
    added = frozenset(added)
    return rest | {added}, added


def _quotient_template(tree, parts):
    """Which of the five 4-vertex planar tree shapes four pieces form."""
    top = parts[0]

    def holder(piece):
        pv = tree.parent[min(piece)]
        return next(q for q in parts if pv in q)

    kids = {id(q): [] for q in parts}
    for q in parts[1:]:
        kids[id(holder(q))].append(q)
    for lst in kids.values():
        lst.sort(key=min)

    top_kids = kids[id(top)]
    if len(top_kids) == 3:
        return "hexagon.2"
    if len(top_kids) == 1:
        mid = top_kids[0]
        mid_kids = kids[id(mid)]
        if len(mid_kids) == 2:
            return "hexagon.1"
        assert len(mid_kids) == 1
        return "pentagon.1"
    assert len(top_kids) == 2
    left, right = top_kids
    if kids[id(left)]:
        return "pentagon.2"
    assert kids[id(right)]
    return "pentagon.3"


def face_shape(tree, face_nesting):
    """(shape, template) of a 2-face nesting, from its piece decomposition.

    A 2-face concentrates its excess in either one nest with four pieces
    (one of the five 4-vertex configurations: the first three are pentagons,
    the last two hexagons) or two nests with three pieces each (a square
    witnessing two commuting moves, with nested or disjoint supports).
    """
    ternary = []
    quaternary = []
    for nest in face_nesting:
        parts = trees.pieces(face_nesting, nest)
        if len(parts) == 3:
            ternary.append(nest)
        elif len(parts) == 4:
            quaternary.append((nest, parts))
        elif len(parts) != 2:
            raise ShapeError(f"nest with {len(parts)} pieces in a 2-face")
    if len(quaternary) == 1 and not ternary:
        template = _quotient_template(tree, quaternary[0][1])
        return template.split(".")[0], template
    if len(ternary) == 2 and not quaternary:
        n1, n2 = ternary
        sub = "nested" if (n1 < n2 or n2 < n1) else "disjoint"
        return "square", f"square.{sub}"
    raise ShapeError("face excess is not one quaternary or two ternary nests")


class Skeleton:
    """The 2-skeleton of the operahedron of a planar tree.

    Vertices, edges and faces are kept in deterministic orders; `complex`
    exposes the same data as a plain Complex2 whose edge ids match, and
    `orientation` directs every edge along its forward rewrite.
    """

    def __init__(self, tree):
        self.tree = tree
        p = tree.p
        self.vertices = trees.enumerate_maximal_nestings(tree)
        self.index = {m: i for i, m in enumerate(self.vertices)}
        full = trees.full_nest(tree)

        edge_map = {}
        for i, m in enumerate(self.vertices):
            for nest in sorted(m - {full}, key=lambda n: tuple(sorted(n))):
                flipped, added = flip_nest(tree, m, nest)
                j = self.index[flipped]
                if i < j:
                    kind, forward = classify_flip(tree, nest, added)
                    edge_map[(i, j)] = SkeletonEdge(i, j, nest, added, kind, forward)
        self.edges = [edge_map[k] for k in sorted(edge_map)]
        self.edge_index = {(e.a, e.b): idx for idx, e in enumerate(self.edges)}

        self.faces = self._build_faces()
        self.complex = Complex2(
            len(self.vertices),
            [(e.a, e.b) for e in self.edges],
            [f.steps for f in self.faces],
        )
        self.orientation = tuple(0 if e.forward else 1 for e in self.edges)
        self._morse = None
        self._builder = None

    # -- construction ---------------------------------------------------------

    def _build_faces(self):
        tree = self.tree
        p = tree.p
        if p < 4:
            return []
        full = trees.full_nest(tree)
        others = [n for n in trees.enumerate_nests(tree) if n != full]
        found = []

        def rec(start, chosen):
            if len(chosen) == p - 4:
                found.append(frozenset(chosen) | {full})
                return
            for idx in range(start, len(others)):
                n = others[idx]
                if all(trees.nests_compatible(n, c) for c in chosen):
                    rec(idx + 1, chosen + [n])

        rec(0, [])
        found.sort(key=trees.nesting_sort_key)

        faces = []
        for nesting in found:
            shape, template = face_shape(tree, nesting)
            cycle = self._boundary_cycle(nesting)
            if SHAPE_BY_LENGTH.get(len(cycle)) != shape:
                raise ShapeError(
                    f"face {trees.nesting_to_json(nesting)}: boundary length "
                    f"{len(cycle)} does not match shape {shape}"
                )
            steps = tuple(
                self._step_between(cycle[k], cycle[(k + 1) % len(cycle)])
                for k in range(len(cycle))
            )
            faces.append(TwoFace(nesting, tuple(cycle), steps, shape, template))
        return faces

    def _boundary_cycle(self, face_nesting):
        members = [i for i, m in enumerate(self.vertices) if face_nesting <= m]
        member_set = set(members)
        adj = {i: [] for i in members}
        for e in self.edges:
            if e.a in member_set and e.b in member_set:
                adj[e.a].append(e.b)
                adj[e.b].append(e.a)
        if any(len(v) != 2 for v in adj.values()):
            raise ShapeError("2-face restriction is not a plain cycle")
        start = min(members)
        second = min(adj[start])
        cycle = [start, second]
        while True:
            prev, cur = cycle[-2], cycle[-1]
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            cycle.append(nxt)
        if len(cycle) != len(members):
            raise ShapeError("2-face boundary does not visit all its vertices")
        return cycle

    def _step_between(self, u, v):
        key = (u, v) if u < v else (v, u)
        e = self.edge_index[key]
        return (e + 1) if u < v else -(e + 1)

    # -- queries ---------------------------------------------------------------

    def vertex_of(self, nesting):
        return self.index[frozenset(frozenset(n) for n in nesting)]

    def expression_of(self, vid):
        return trees.nesting_to_expression(self.tree, self.vertices[vid])

    def f_vector(self):
        return (len(self.vertices), len(self.edges), len(self.faces))

    def shape_counts(self):
        counts = {"square": 0, "pentagon": 0, "hexagon": 0}
        for f in self.faces:
            counts[f.shape] += 1
        return counts

    def morse(self):
        """Morse certificate of the forward orientation (computed lazily)."""
        from . import complexes

        if self._morse is None:
            result = complexes.morse_certificate(self.complex, self.orientation)
            if not isinstance(result, complexes.MorseCertificate):
                raise ShapeError(
                    f"forward orientation failed Morse hypotheses: {result}"
                )
            self._morse = result
        return self._morse

    def homotopy_builder(self):
        from .homotopy import HomotopyBuilder

        if self._builder is None:
            self._builder = HomotopyBuilder(
                self.complex, self.orientation, self.morse()
            )
        return self._builder

    def to_dot(self):
        """DOT digraph with rewrite kinds and forward arrowheads."""
        lines = ["digraph skeleton {"]
        for i in range(len(self.vertices)):
            lines.append(f'  v{i} [label="{i}"];')
        for e in self.edges:
            src, dst = (e.a, e.b) if e.forward else (e.b, e.a)
            style = "solid" if e.kind == BETA else "dashed"
            lines.append(
                f'  v{src} -> v{dst} [label="{e.kind}", style="{style}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def build_skeleton(tree):
    """Skeleton of the operahedron of ``tree``; cached per tree."""
    return Skeleton(tree)
