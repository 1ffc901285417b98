"""Combinatorial paths, elementary moves, and homotopy certificates.

A path is a start vertex plus a word of signed steps on a Complex2.  Two
parallel paths are related by a certificate: a sequence of elementary moves,
each inserting a backtrack, deleting one, or substituting a subword across a
2-cell boundary.  Certificates are generated by descending both paths to a
canonical form through the oriented 1-skeleton (the unique-sink induction)
and are re-checked by a verifier that shares nothing with the generator
beyond these data types.
"""

from typing import NamedTuple

from .complexes import MorseCertificate, step_ascends, step_from
from .errors import (
    BrokenChainError,
    NotOrientedError,
    NotParallelError,
)


class Path(NamedTuple):
    start: int
    steps: tuple

    def to_json(self):
        return {
            "schema": "v1",
            "start": self.start,
            "steps": [[abs(s) - 1, 1 if s > 0 else -1] for s in self.steps],
        }

    @classmethod
    def from_json(cls, data):
        steps = tuple(
            (e + 1) if sign > 0 else -(e + 1) for e, sign in data["steps"]
        )
        return cls(int(data["start"]), steps)


class BacktrackInsert(NamedTuple):
    position: int
    step: int  # inserts (step, -step) at position


class BacktrackDelete(NamedTuple):
    position: int  # deletes the backtrack pair at position


class FaceSubstitute(NamedTuple):
    position: int
    cell: int
    matched: int  # length of the replaced subword; may be 0
    offset: int  # rotation offset into the (possibly reversed) boundary
    reverse: bool  # match against the reversed-inverse boundary walk


class Certificate(NamedTuple):
    source: Path
    target: Path
    moves: tuple

    def to_json(self):
        out = []
        for m in self.moves:
            if isinstance(m, BacktrackInsert):
                out.append(
                    {
                        "op": "insert",
                        "position": m.position,
                        "edge": abs(m.step) - 1,
                        "sign": 1 if m.step > 0 else -1,
                    }
                )
            elif isinstance(m, BacktrackDelete):
                out.append({"op": "delete", "position": m.position})
            else:
                out.append(
                    {
                        "op": "face",
                        "position": m.position,
                        "cell": m.cell,
                        "matched": m.matched,
                        "offset": m.offset,
                        "reverse": bool(m.reverse),
                    }
                )
        return {
            "schema": "v1",
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "moves": out,
        }

    @classmethod
    def from_json(cls, data):
        moves = []
        for m in data["moves"]:
            if m["op"] == "insert":
                step = (m["edge"] + 1) * (1 if m["sign"] > 0 else -1)
                moves.append(BacktrackInsert(m["position"], step))
            elif m["op"] == "delete":
                moves.append(BacktrackDelete(m["position"]))
            elif m["op"] == "face":
                moves.append(
                    FaceSubstitute(
                        m["position"],
                        m["cell"],
                        m["matched"],
                        m["offset"],
                        bool(m["reverse"]),
                    )
                )
            else:
                raise ValueError(f"unknown move op {m['op']!r}")
        return cls(
            Path.from_json(data["source"]),
            Path.from_json(data["target"]),
            tuple(moves),
        )


def validate_path(c, path):
    """Check the steps chain endpoint-to-endpoint starting at path.start."""
    at = path.start
    if not 0 <= at < c.vertex_count:
        raise BrokenChainError(f"start vertex {at} out of range")
    for i, s in enumerate(path.steps):
        if s == 0 or abs(s) - 1 >= len(c.edges):
            raise BrokenChainError(f"step {i}: bad edge reference {s}")
        tail, head = c.step_ends(s)
        if tail != at:
            raise BrokenChainError(f"step {i}: expected to leave {at}, leaves {tail}")
        at = head
    return at


def path_end(c, path):
    return validate_path(c, path)


def reduce_path(c, path):
    """Free-groupoid normal form: cancel adjacent inverse pairs until none
    remain.  Idempotent; endpoint-preserving."""
    validate_path(c, path)
    word = list(path.steps)
    i = 0
    while i + 1 < len(word):
        if word[i + 1] == -word[i]:
            del word[i : i + 2]
            i = max(i - 1, 0)
        else:
            i += 1
    return Path(path.start, tuple(word))


def rotated_boundary(c, cell_id, offset, reverse):
    """The cell boundary as a closed word, optionally reversed, rotated to
    start at the given offset."""
    walk = c.cells[cell_id]
    if reverse:
        walk = tuple(-s for s in reversed(walk))
    return walk[offset:] + walk[:offset]


def _shift(moves, delta):
    if delta == 0:
        return list(moves)
    return [m._replace(position=m.position + delta) for m in moves]


def _inverse_word(word):
    return tuple(-s for s in reversed(word))


# ---------------------------------------------------------------------------
# Certificate generation


class HomotopyBuilder:
    """Certificate generator for one oriented complex with Morse data.

    Caches canonical descents, longest-path lengths, and the sub-certificates
    of the unique-sink induction, so that batches of queries on the same
    skeleton amortise their work.
    """

    def __init__(self, c, orientation, cert):
        if not isinstance(cert, MorseCertificate):
            raise ValueError("a MorseCertificate is required to build homotopies")
        self.c = c
        self.o = tuple(orientation)
        self.cert = cert
        self.sink = cert.global_sink
        self._out = [[] for _ in range(c.vertex_count)]  # sorted steps per vertex
        for e in range(len(c.edges)):
            s = step_from(c, self.o, e)
            self._out[c.step_ends(s)[0]].append(s)
        for steps in self._out:
            steps.sort(key=abs)
        # (vertex, edge, edge) -> a cell with that source and those two edges
        self._pair_cell = {}
        for ci, cell in enumerate(c.cells):
            m = len(cell)
            for k in range(m):
                v = c.step_ends(cell[k])[0]
                arriving, leaving = cell[(k - 1) % m], cell[k]
                if step_ascends(c, self.o, leaving) and not step_ascends(
                    c, self.o, arriving
                ):
                    pair = frozenset((abs(arriving) - 1, abs(leaving) - 1))
                    self._pair_cell.setdefault((v, pair), ci)
        self._descent = {}
        self._arcs = {}
        self._memo = {}

    # -- canonical structure ------------------------------------------------

    def descent(self, x):
        """Oriented path x -> global sink taking the least edge id each step."""
        if x in self._descent:
            return self._descent[x]
        steps = []
        at = x
        while at != self.sink:
            s = self._out[at][0]
            steps.append(s)
            at = self.c.step_ends(s)[1]
        word = tuple(steps)
        self._descent[x] = word
        return word

    def face_arcs(self, ci):
        """The two directed source->sink arcs of a cell, keyed by first edge."""
        if ci in self._arcs:
            return self._arcs[ci]
        cell = self.c.cells[ci]
        source, snk = self.cert.face_source_sink[ci]
        m = len(cell)
        k = next(i for i in range(m) if self.c.step_ends(cell[i])[0] == source)
        forward = []
        i, at = k, source
        while at != snk:
            s = cell[i % m]
            forward.append(s)
            at = self.c.step_ends(s)[1]
            i += 1
        backward = []
        i, at = k - 1, source
        while at != snk:
            s = -cell[i % m]
            backward.append(s)
            at = self.c.step_ends(s)[1]
            i -= 1
        arcs = {
            abs(forward[0]) - 1: tuple(forward),
            abs(backward[0]) - 1: tuple(backward),
        }
        self._arcs[ci] = arcs
        return arcs

    def face_move(self, ci, matched_word, replacement, position):
        """FaceSubstitute parameters realising matched -> replacement across
        cell ci; the closed word matched . replacement^-1 must be a rotation
        of the boundary or of its reversed inverse."""
        loop = tuple(matched_word) + _inverse_word(replacement)
        n = len(self.c.cells[ci])
        for reverse in (False, True):
            for offset in range(n):
                if rotated_boundary(self.c, ci, offset, reverse) == loop:
                    return FaceSubstitute(position, ci, len(matched_word), offset, reverse)
        raise AssertionError("matched/replacement pair is not a boundary rotation")

    # -- the unique-sink induction ------------------------------------------

    def oriented_to_sink(self, x, g1, g2):
        """Moves transforming oriented word g1 into g2, both from x to the
        global sink.  Induction on the first steps: shared first edge
        recurses on the tails; co-facial first edges substitute across their
        face after aligning both tails on the canonical descent; otherwise a
        walk through the outgoing link chains the co-facial case."""
        if g1 == g2:
            return []
        key = (x, g1, g2)
        hit = self._memo.get(key)
        if hit is not None:
            return list(hit)
        s1, s2 = g1[0], g2[0]
        if s1 == s2:
            nxt = self.c.step_ends(s1)[1]
            moves = _shift(self.oriented_to_sink(nxt, g1[1:], g2[1:]), 1)
        else:
            e1, e2 = abs(s1) - 1, abs(s2) - 1
            ci = self._pair_cell.get((x, frozenset((e1, e2))))
            if ci is not None:
                moves = self._across_face(x, ci, g1, g2)
            else:
                moves = self._across_link(x, g1, g2)
        self._memo[key] = tuple(moves)
        return moves

    def _across_face(self, x, ci, g1, g2):
        arcs = self.face_arcs(ci)
        arc1 = arcs[abs(g1[0]) - 1]
        arc2 = arcs[abs(g2[0]) - 1]
        tail = self.descent(self.cert.face_source_sink[ci][1])
        d1 = arc1 + tail
        d2 = arc2 + tail
        moves = self.oriented_to_sink(x, g1, d1)
        moves.append(self.face_move(ci, arc1, arc2, 0))
        moves += self.oriented_to_sink(x, d2, g2)
        return moves

    def _across_link(self, x, g1, g2):
        e1, e2 = abs(g1[0]) - 1, abs(g2[0]) - 1
        chain = self._link_path(x, e1, e2)
        seq = [g1]
        for e in chain[1:-1]:
            s = step_from(self.c, self.o, e)
            seq.append((s,) + self.descent(self.c.step_ends(s)[1]))
        seq.append(g2)
        moves = []
        for qa, qb in zip(seq, seq[1:]):
            moves += self.oriented_to_sink(x, qa, qb)
        return moves

    def _link_path(self, x, e1, e2):
        adj = {}
        for a, b, _ in self.cert.link_witness[x]:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        prev = {e1: None}
        queue = [e1]
        while queue:
            v = queue.pop(0)
            if v == e2:
                break
            for w in adj.get(v, ()):
                if w not in prev:
                    prev[w] = v
                    queue.append(w)
        if e2 not in prev:
            raise AssertionError(f"outgoing link of {x} does not join {e1} and {e2}")
        path = [e2]
        while path[-1] != e1:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    # -- public operations ---------------------------------------------------

    def oriented(self, p1, p2):
        """Certificate between parallel oriented paths (all steps ascending)."""
        end1 = validate_path(self.c, p1)
        end2 = validate_path(self.c, p2)
        if p1.start != p2.start or end1 != end2:
            raise NotParallelError("paths must share both endpoints")
        for p in (p1, p2):
            for i, s in enumerate(p.steps):
                if not step_ascends(self.c, self.o, s):
                    raise NotOrientedError(f"step {i} runs against the orientation")
        moves = []
        if end1 == self.sink:
            moves = self.oriented_to_sink(p1.start, p1.steps, p2.steps)
        else:
            tail = self.descent(end1)
            k = len(tail)
            for idx, t in enumerate(tail):
                moves.append(BacktrackInsert(len(p1.steps) + idx, t))
            moves += self.oriented_to_sink(
                p1.start, p1.steps + tail, p2.steps + tail
            )
            for idx in reversed(range(k)):
                moves.append(BacktrackDelete(len(p2.steps) + idx))
        return Certificate(p1, p2, tuple(moves))

    def to_canonical(self, path):
        """Moves rewriting `path` into descent(start) . descent(end)^-1.

        Walks the word right to left; each step is absorbed into the descent
        of its tail vertex, ascending steps by an oriented homotopy and
        descending ones by one homotopy plus a backtrack deletion.
        """
        verts = [path.start]
        for s in path.steps:
            verts.append(self.c.step_ends(s)[1])
        y = verts[-1]
        dy = self.descent(y)
        moves = [
            BacktrackInsert(len(path.steps) + idx, t) for idx, t in enumerate(dy)
        ]
        for i in reversed(range(len(path.steps))):
            s = path.steps[i]
            zi, zj = verts[i], verts[i + 1]
            di, dj = self.descent(zi), self.descent(zj)
            if step_ascends(self.c, self.o, s):
                moves += _shift(self.oriented_to_sink(zi, (s,) + dj, di), i)
            else:
                moves += _shift(self.oriented_to_sink(zj, dj, (-s,) + di), i + 1)
                moves.append(BacktrackDelete(i))
        return moves

    def general(self, p1, p2):
        """Certificate between parallel paths with arbitrary step signs."""
        end1 = validate_path(self.c, p1)
        end2 = validate_path(self.c, p2)
        if p1.start != p2.start or end1 != end2:
            raise NotParallelError("paths must share both endpoints")
        forward = self.to_canonical(p1)
        backward = self.to_canonical(p2)
        inverse = invert_moves(self.c, p2, backward)
        return Certificate(p1, p2, tuple(forward) + tuple(inverse))


def apply_moves(c, path, moves):
    """Replay moves over a word without validating them; generation-side."""
    word = list(path.steps)
    for m in moves:
        if isinstance(m, BacktrackInsert):
            word[m.position : m.position] = [m.step, -m.step]
        elif isinstance(m, BacktrackDelete):
            del word[m.position : m.position + 2]
        else:
            w = rotated_boundary(c, m.cell, m.offset, m.reverse)
            replacement = _inverse_word(w[m.matched :])
            word[m.position : m.position + m.matched] = replacement
    return Path(path.start, tuple(word))


def invert_moves(c, path, moves):
    """The reversed move list undoing `moves`, computed by forward replay."""
    word = list(path.steps)
    inverted = []
    for m in moves:
        if isinstance(m, BacktrackInsert):
            inverted.append(BacktrackDelete(m.position))
            word[m.position : m.position] = [m.step, -m.step]
        elif isinstance(m, BacktrackDelete):
            inverted.append(BacktrackInsert(m.position, word[m.position]))
            del word[m.position : m.position + 2]
        else:
            n = len(c.cells[m.cell])
            inverted.append(
                FaceSubstitute(
                    m.position,
                    m.cell,
                    n - m.matched,
                    (n - m.offset) % n,
                    not m.reverse,
                )
            )
            w = rotated_boundary(c, m.cell, m.offset, m.reverse)
            replacement = _inverse_word(w[m.matched :])
            word[m.position : m.position + m.matched] = replacement
    inverted.reverse()
    return inverted


def canonical_descent(c, orientation, cert, x):
    """Oriented path from x to the global sink, least edge id at each step."""
    return Path(x, HomotopyBuilder(c, orientation, cert).descent(x))


def oriented_homotopy(c, orientation, cert, p1, p2):
    return HomotopyBuilder(c, orientation, cert).oriented(p1, p2)


def general_homotopy(c, orientation, cert, p1, p2):
    return HomotopyBuilder(c, orientation, cert).general(p1, p2)


# ---------------------------------------------------------------------------
# Independent verification


class VerifyResult(NamedTuple):
    ok: bool
    reject_index: int  # -1 when ok; len(moves) flags a final-word mismatch
    reason: str


def verify_certificate(c, cert):
    """Replay a certificate move by move, validating everything from scratch.

    Deliberately independent of the generator: it recomputes the vertex at
    every position by walking from the start, and re-derives each face
    substitution from the stored cell boundary.  Returns ok, or the index of
    the first offending move.
    """

    def vertex_at(word, start, k):
        at = start
        for s in word[:k]:
            tail, head = c.step_ends(s)
            if tail != at:
                return None
            at = head
        return at

    def word_is_chain(word, start):
        return vertex_at(word, start, len(word)) is not None

    source, target, moves = cert.source, cert.target, cert.moves
    if source.start != target.start:
        return VerifyResult(False, -1, "source and target start at different vertices")
    if not word_is_chain(list(source.steps), source.start):
        return VerifyResult(False, -1, "source path does not chain")
    if not word_is_chain(list(target.steps), target.start):
        return VerifyResult(False, -1, "target path does not chain")

    word = list(source.steps)
    for idx, m in enumerate(moves):
        if isinstance(m, BacktrackInsert):
            if not 0 <= m.position <= len(word):
                return VerifyResult(False, idx, "insert position out of range")
            if m.step == 0 or abs(m.step) - 1 >= len(c.edges):
                return VerifyResult(False, idx, "insert references a bad edge")
            at = vertex_at(word, source.start, m.position)
            if at is None or c.step_ends(m.step)[0] != at:
                return VerifyResult(False, idx, "inserted backtrack does not chain")
            word[m.position : m.position] = [m.step, -m.step]
        elif isinstance(m, BacktrackDelete):
            if not 0 <= m.position <= len(word) - 2:
                return VerifyResult(False, idx, "delete position out of range")
            if word[m.position + 1] != -word[m.position]:
                return VerifyResult(False, idx, "deleted pair is not a backtrack")
            del word[m.position : m.position + 2]
        elif isinstance(m, FaceSubstitute):
            if not 0 <= m.cell < len(c.cells):
                return VerifyResult(False, idx, "face move references a bad cell")
            boundary = c.cells[m.cell]
            n = len(boundary)
            if not (0 <= m.matched <= n and 0 <= m.offset < n):
                return VerifyResult(False, idx, "face move parameters out of range")
            if not 0 <= m.position <= len(word) - m.matched:
                return VerifyResult(False, idx, "face position out of range")
            if m.reverse:
                boundary = tuple(-s for s in reversed(boundary))
            loop = boundary[m.offset :] + boundary[: m.offset]
            if tuple(word[m.position : m.position + m.matched]) != loop[: m.matched]:
                return VerifyResult(False, idx, "matched subword differs from the cell")
            at = vertex_at(word, source.start, m.position)
            if at is None or c.step_ends(loop[0])[0] != at:
                return VerifyResult(False, idx, "face move anchored at the wrong vertex")
            replacement = [-s for s in reversed(loop[m.matched :])]
            word[m.position : m.position + m.matched] = replacement
        else:
            return VerifyResult(False, idx, f"unknown move {m!r}")

    if tuple(word) != target.steps:
        return VerifyResult(False, len(moves), "replay does not end at the target word")
    return VerifyResult(True, -1, "")
