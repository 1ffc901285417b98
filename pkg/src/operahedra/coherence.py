"""Deciding coherence: words of moves, certificates, normal forms, confluence.

A morphism word is an expression together with a sequence of single-nest
replacements, each one a forward rewrite or the inverse of one.  Two parallel
words always bound a certificate of elementary homotopies on the operahedron
of their underlying tree; this module produces and packages it, computes the
unique rewrite normal form, checks local confluence at every 2-face, and
translates fully parenthesised monoidal words into the arity-one fragment.
"""

import re
from typing import NamedTuple

from . import complexes, trees
from .errors import IllegalMoveError, NotParallelError, ParseError
from .homotopy import (
    BacktrackDelete,
    BacktrackInsert,
    FaceSubstitute,
    Path,
    verify_certificate,
)
from .skeleton import build_skeleton, classify_flip, flip_nest


class MorphismWord(NamedTuple):
    expr: object  # the domain expression
    moves: tuple  # (removed, added, sign): replace removed by added; sign=+1
    # when that replacement is the forward rewrite, -1 when inverse

    def to_json(self):
        return {
            "schema": "v1",
            "object": str(self.expr),
            "moves": [
                {"remove": sorted(rm), "add": sorted(ad), "sign": sg}
                for rm, ad, sg in self.moves
            ],
        }


class CoherenceVerdict(NamedTuple):
    equal: bool
    certificate: object
    statistics: dict


def replay_word(word):
    """Validate a word and return (tree, list of nestings visited).

    Every move must remove a nest that is present, add the unique flip
    partner, and carry the sign matching its forward classification.
    """
    tree, nesting = trees.expression_to_nesting(word.expr)
    visited = [nesting]
    current = nesting
    for k, (removed, added, sign) in enumerate(word.moves):
        removed = frozenset(removed)
        added = frozenset(added)
        if removed not in current:
            raise IllegalMoveError(k, f"nest {sorted(removed)} is not present")
        try:
            flipped, expected = flip_nest(tree, current, removed)
        except (ValueError, AssertionError) as exc:
            raise IllegalMoveError(k, str(exc)) from exc
        if added != expected:
            raise IllegalMoveError(
                k, f"adding {sorted(added)} does not complete a maximal nesting"
            )
        kind, forward = classify_flip(tree, removed, added)
        if sign != (1 if forward else -1):
            raise IllegalMoveError(
                k, f"sign {sign} contradicts the {kind} forward direction"
            )
        current = flipped
        visited.append(current)
    return tree, visited


def word_to_path(word):
    """The combinatorial path a word traces on its operahedron skeleton."""
    tree, visited = replay_word(word)
    sk = build_skeleton(tree)
    steps = []
    for a, b in zip(visited, visited[1:]):
        u, v = sk.index[a], sk.index[b]
        key = (u, v) if u < v else (v, u)
        e = sk.edge_index[key]
        steps.append((e + 1) if u < v else -(e + 1))
    return sk, Path(sk.index[visited[0]], tuple(steps))


def moves_from_steps(sk, start_vertex, steps):
    """Rebuild word moves from a skeleton walk; inverse of word_to_path."""
    moves = []
    at = start_vertex
    for s in steps:
        e = sk.edges[abs(s) - 1]
        if s > 0:
            removed, added = e.removed, e.added
            forward = e.forward
        else:
            removed, added = e.added, e.removed
            forward = not e.forward
        moves.append((removed, added, 1 if forward else -1))
        at = sk.complex.step_ends(s)[1]
    return tuple(moves)


def decide_coherence(w1, w2):
    """Certify that two parallel words are equal, with verified evidence.

    Raises NotParallelError when domains or codomains differ.  The verdict
    carries a homotopy certificate accepted by the independent verifier.
    """
    if w1.expr != w2.expr:
        raise NotParallelError("words have different domain objects")
    sk, p1 = word_to_path(w1)
    _, p2 = word_to_path(w2)
    from .homotopy import path_end

    if path_end(sk.complex, p1) != path_end(sk.complex, p2):
        raise NotParallelError("words have different codomain objects")
    builder = sk.homotopy_builder()
    cert = builder.general(p1, p2)
    check = verify_certificate(sk.complex, cert)
    if not check.ok:
        raise AssertionError(f"generated certificate rejected: {check}")
    stats = {
        "moves": len(cert.moves),
        "backtrack_inserts": sum(isinstance(m, BacktrackInsert) for m in cert.moves),
        "backtrack_deletes": sum(isinstance(m, BacktrackDelete) for m in cert.moves),
        "face_substitutions": sum(isinstance(m, FaceSubstitute) for m in cert.moves),
        "faces_by_shape": _face_usage(sk, cert.moves),
        "word_lengths": [len(w1.moves), len(w2.moves)],
    }
    return CoherenceVerdict(True, cert, stats)


def _face_usage(sk, moves):
    usage = {}
    for m in moves:
        if isinstance(m, FaceSubstitute):
            shape = sk.faces[m.cell].shape
            usage[shape] = usage.get(shape, 0) + 1
    return dict(sorted(usage.items()))


def normal_form(expr):
    """Rewrite an expression to the unique sink of its operahedron.

    Follows the least-edge forward strategy; confluence makes the endpoint
    strategy-independent.  Returns the sink expression and the trace word.
    """
    tree, nesting = trees.expression_to_nesting(expr)
    sk = build_skeleton(tree)
    builder = sk.homotopy_builder()
    at = sk.index[nesting]
    steps = builder.descent(at)
    moves = moves_from_steps(sk, at, steps)
    end = at
    for s in steps:
        end = sk.complex.step_ends(s)[1]
    return sk.expression_of(end), MorphismWord(expr, moves)


def random_normal_form(expr, rng):
    """Sink expression via a random forward strategy (for Newman checks)."""
    tree, nesting = trees.expression_to_nesting(expr)
    sk = build_skeleton(tree)
    out = complexes.out_edges(sk.complex, sk.orientation)
    at = sk.index[nesting]
    while out[at]:
        e = rng.choice(out[at])
        src, dst = complexes.directed_ends(sk.complex, sk.orientation, e)
        assert src == at
        at = dst
    return sk.expression_of(at)


class ConfluenceReport(NamedTuple):
    tree: object
    faces: int
    joinable: int
    by_shape: dict

    @property
    def all_joinable(self):
        return self.joinable == self.faces


def check_local_confluence(tree):
    """Check every critical pair: the two forward moves out of a face source
    must rejoin at the face sink along the two boundary arcs."""
    sk = build_skeleton(tree)
    joinable = 0
    by_shape = {}
    for ci, face in enumerate(sk.faces):
        sources, sinks = complexes.cell_sources_sinks(
            sk.complex, sk.orientation, face.steps
        )
        if len(sources) == 1 and len(sinks) == 1:
            joinable += 1
            by_shape[face.shape] = by_shape.get(face.shape, 0) + 1
    return ConfluenceReport(tree, len(sk.faces), joinable, dict(sorted(by_shape.items())))


# ---------------------------------------------------------------------------
# Monoidal (arity-one) words


def maclane_parse(word):
    """Fully parenthesised product of increasing distinct letters as an
    arity-one expression over a linear tree.

    Letters out of planar order signal the symmetric setting and are
    rejected.  ``(ab)`` becomes a o1 b; ``((ab)c)d`` the left comb on four.
    """
    text = word.strip()
    pos = 0

    def fail(msg):
        raise ParseError(f"column {pos}: {msg}")

    def item():
        nonlocal pos
        if pos >= len(text):
            fail("unexpected end of word")
        ch = text[pos]
        if ch == "(":
            pos += 1
            first = item()
            second = item()
            if pos >= len(text) or text[pos] != ")":
                fail("expected ')'")
            pos += 1
            return (first, second)
        if not ch.isalpha():
            fail(f"expected a letter or '(', found {ch!r}")
        pos += 1
        return ch

    first = item()
    if pos < len(text):
        second = item()
        if pos != len(text):
            fail("a product must pair exactly two fully parenthesised factors")
        tree = (first, second)
    else:
        tree = first

    letters = []

    def collect(t):
        if isinstance(t, tuple):
            collect(t[0])
            collect(t[1])
        else:
            letters.append(t)

    collect(tree)
    if len(set(letters)) != len(letters):
        raise ParseError("letters must be distinct")
    if letters != sorted(letters):
        raise ParseError(
            "letters out of planar order: the symmetric case is not supported"
        )

    def to_expr(t):
        if isinstance(t, tuple):
            return trees.Composition(to_expr(t[0]), to_expr(t[1]), 1)
        return trees.Generator(t, 1)

    return to_expr(tree)


_SUGAR_RE = re.compile(r"^(-?)(beta|theta)@([0-9]+(?:\.[0-9]+)*)$")


def parse_word_text(expr, text):
    """Sugared move syntax: whitespace-separated ``beta@0.1`` tokens.

    Each token flips the named nest out of the current nesting; the kind
    must match the classifier and a leading ``-`` marks an inverse
    traversal (sign -1).
    """
    tree, nesting = trees.expression_to_nesting(expr)
    current = nesting
    moves = []
    for k, token in enumerate(text.split()):
        m = _SUGAR_RE.match(token)
        if not m:
            raise ParseError(f"move {k}: bad token {token!r}")
        inverse, kind, ids = m.groups()
        removed = frozenset(int(x) for x in ids.split("."))
        if removed not in current:
            raise IllegalMoveError(k, f"nest {sorted(removed)} is not present")
        current, added = flip_nest(tree, current, removed)
        got_kind, forward = classify_flip(tree, removed, added)
        sign = -1 if inverse else 1
        if got_kind != kind:
            raise IllegalMoveError(k, f"move is {got_kind}, token says {kind}")
        if sign != (1 if forward else -1):
            raise IllegalMoveError(
                k,
                f"token sign {sign} contradicts the {got_kind} forward direction",
            )
        moves.append((removed, added, sign))
    return MorphismWord(expr, tuple(moves))


def word_from_json(data, expr=None):
    """Word from JSON: {"object": "...", "moves": [{"remove": [...],
    "add": [...]?, "sign": n?}, ...]}; omitted fields are inferred."""
    if expr is None:
        expr = trees.parse_expression(data["object"])
    tree, nesting = trees.expression_to_nesting(expr)
    current = nesting
    moves = []
    for k, mv in enumerate(data.get("moves", ())):
        removed = frozenset(int(v) for v in mv["remove"])
        if removed not in current:
            raise IllegalMoveError(k, f"nest {sorted(removed)} is not present")
        current, added = flip_nest(tree, current, removed)
        if "add" in mv and frozenset(int(v) for v in mv["add"]) != added:
            raise IllegalMoveError(k, "stated 'add' nest is not the flip partner")
        _, forward = classify_flip(tree, removed, added)
        sign = 1 if forward else -1
        if "sign" in mv and int(mv["sign"]) != sign:
            raise IllegalMoveError(k, "stated sign contradicts the classifier")
        moves.append((removed, added, sign))
    return MorphismWord(expr, tuple(moves))
