"""Exact rational realizations of associahedra and vector-induced orientations.

Linear trees are realized through the classical coordinates: a vertex of the
associahedron is a binary combination tree, and its i-th coordinate (internal
nodes in infix order) is the product of the leaf counts of the two subtrees
it joins.  All arithmetic is exact; genericity of a direction vector is a
decided question, never a rounded one.
"""

from fractions import Fraction

from . import complexes, trees
from .errors import NotGenericError


def loday_point(expr):
    """Coordinates of a binary combination tree with n leaves, in dim n - 1.

    Internal nodes are taken in infix order; each contributes the product of
    the leaf counts of its two subtrees.  The coordinates always sum to
    n(n-1)/2.
    """

    def rec(e):
        if isinstance(e, trees.Generator):
            return [], 1
        left, nl = rec(e.left)
        right, nr = rec(e.right)
        return left + [Fraction(nl * nr)] + right, nl + nr

    coords, _ = rec(expr)
    return tuple(coords)


def realize_linear(skeleton):
    """Vertex -> exact point for the operahedron of a linear tree."""
    tree = skeleton.tree
    if any(len(cs) > 1 for cs in tree.children):
        raise ValueError("realization is implemented for linear trees only")
    return {
        v: loday_point(trees.nesting_to_expression(tree, m))
        for v, m in enumerate(skeleton.vertices)
    }


def dot(vec, point):
    if len(vec) != len(point):
        raise ValueError(f"dimension mismatch: {len(vec)} vs {len(point)}")
    return sum(Fraction(a) * b for a, b in zip(vec, point))


def induced_orientation(c, points, vec):
    """Direct every edge towards the endpoint where <vec, .> is larger.

    Raises NotGenericError naming the first edge whose endpoints tie.
    """
    orientation = []
    for e, (a, b) in enumerate(c.edges):
        ha = dot(vec, points[a])
        hb = dot(vec, points[b])
        if ha == hb:
            raise NotGenericError(e)
        orientation.append(0 if hb > ha else 1)
    return tuple(orientation)


def is_generic(c, points, vec):
    try:
        induced_orientation(c, points, vec)
    except NotGenericError:
        return False
    return True


def polytope_morse_check(c, points, vec):
    """Morse analysis of the orientation induced by a generic vector."""
    return complexes.morse_certificate(c, induced_orientation(c, points, vec))


def random_generic_vector(c, points, rng, dim=None, bound=999):
    """Rational vector generic on the edges, by rejection sampling."""
    if dim is None:
        dim = len(next(iter(points.values())))
    while True:
        vec = tuple(
            Fraction(rng.randint(-bound, bound), rng.randint(1, 60)) for _ in range(dim)
        )
        if all(x == 0 for x in vec):
            continue
        if is_generic(c, points, vec):
            return vec


def decreasing_vector(dim):
    """The vector (dim-1, ..., 1, 0) whose orientation is the forward rewrite."""
    return tuple(Fraction(dim - 1 - i) for i in range(dim))


def realization_to_json(points):
    return {
        "schema": "v1",
        "points": {
            str(v): [f"{x.numerator}/{x.denominator}" for x in pt]
            for v, pt in sorted(points.items())
        },
    }


def realization_from_json(data):
    points = {}
    for key, coords in data["points"].items():
        points[int(key)] = tuple(Fraction(s) for s in coords)
    return points
