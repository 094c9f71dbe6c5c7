"""Combinatorics of closed walks on a curve complex.

First Betti number, spanning-tree cycle bases, homology coefficients of edge
words, free reduction over the chord generators, Eulerian classification with
a witness trail, and the trail-covering test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .curve_model import CurveComplex, Edge, EdgeWord
from .errors import ComplexDisconnected, NotClosed


def _require_connected(complex: CurveComplex):
    if not complex.is_connected():
        raise ComplexDisconnected([complex.n_vertices])


def betti1(complex: CurveComplex) -> int:
    """Rank of the first homology of a connected complex: E - V + 1."""
    _require_connected(complex)
    return complex.n_edges - complex.n_vertices + 1


@dataclass(frozen=True)
class CycleBasis:
    """Spanning tree plus one closed loop word per non-tree chord edge."""

    tree_edges: frozenset
    chords: tuple
    loops: tuple  # EdgeWord per chord: tree path, chord, tree path back
    root: int

    @property
    def rank(self) -> int:
        return len(self.chords)

    def chord_index(self, edge_id: int):
        try:
            return self.chords.index(edge_id)
        except ValueError:
            return None


def cycle_basis(complex: CurveComplex, seed: int = 0) -> CycleBasis:
    """Deterministic cycle basis: BFS tree from the lexicographically smallest
    vertex, neighbors explored in edge-id order permuted by ``seed``."""
    _require_connected(complex)
    root = int(min(range(complex.n_vertices), key=lambda v: tuple(complex.vertices[v])))
    rng = random.Random(seed)

    order = {}
    for v in range(complex.n_vertices):
        ids = sorted(complex.adjacency[v])
        if seed != 0:
            rng.shuffle(ids)
        order[v] = ids

    parent_edge = {root: None}  # vertex -> (edge_id, sign) leading back toward root
    tree_edges = set()
    queue = [root]
    while queue:
        v = queue.pop(0)
        for ei in order[v]:
            e = complex.edges[ei]
            if e.is_loop:
                continue
            w = e.v_to if e.v_from == v else e.v_from
            if w in parent_edge:
                continue
            sign = 1 if e.v_from == v else -1  # traversal direction v -> w
            parent_edge[w] = (ei, sign)
            tree_edges.add(ei)
            queue.append(w)

    def path_from_root(v):
        letters = []
        while v != root:
            ei, sign = parent_edge[v]
            letters.append((ei, sign))
            e = complex.edges[ei]
            v = e.v_from if (sign == 1) else e.v_to
        return list(reversed(letters))

    chords = tuple(i for i in range(complex.n_edges) if i not in tree_edges)
    loops = []
    for ci in chords:
        e = complex.edges[ci]
        up = path_from_root(e.v_from)
        down = [(ei, -s) for ei, s in reversed(path_from_root(e.v_to))]
        loops.append(EdgeWord(tuple(up) + ((ci, 1),) + tuple(down)))
    return CycleBasis(
        tree_edges=frozenset(tree_edges), chords=chords, loops=tuple(loops), root=root
    )


def homology_coefficients(word: EdgeWord, basis: CycleBasis, complex: CurveComplex):
    """Signed chord traversal counts of a closed word: its homology class."""
    if not word.is_closed(complex):
        raise NotClosed("homology coefficients need a closed word")
    counts = np.zeros(basis.rank, dtype=int)
    index = {c: k for k, c in enumerate(basis.chords)}
    for e, s in word:
        k = index.get(e)
        if k is not None:
            counts[k] += s
    return counts


def reduce_word(word: EdgeWord, basis: CycleBasis, complex: CurveComplex):
    """Free reduction of a closed word over the chord generators.

    Tree letters are erased (collapsing the spanning tree is a homotopy
    equivalence), then adjacent inverse pairs cancel.  The result is empty
    exactly when the word is contractible on the complex.
    """
    if not word.is_closed(complex):
        raise NotClosed("free reduction needs a closed word")
    stack = []
    for e, s in word:
        if e in basis.tree_edges:
            continue
        if stack and stack[-1] == (e, -s):
            stack.pop()
        else:
            stack.append((e, s))
    return tuple(stack)


@dataclass(frozen=True)
class EulerClassification:
    """``kind`` is one of ``not_traversable``, ``traversable``, ``unicursal``;
    the latter two carry a witness trail using every edge exactly once."""

    kind: str
    trail: EdgeWord | None = None


def euler_classify(complex: CurveComplex) -> EulerClassification:
    """Degree census plus a Hierholzer trail when one exists."""
    _require_connected(complex)
    if complex.n_edges == 0:
        return EulerClassification("unicursal", EdgeWord(()))
    odd = [v for v in range(complex.n_vertices) if complex.degree(v) % 2 == 1]
    if len(odd) > 2:
        return EulerClassification("not_traversable", None)
    start = min(odd) if odd else 0
    if not odd:
        start = complex.edges[0].v_from

    remaining = {v: list(complex.adjacency[v]) for v in range(complex.n_vertices)}
    used = set()

    def next_dart(v):
        while remaining[v]:
            ei = remaining[v][-1]
            if ei in used:
                remaining[v].pop()
                continue
            used.add(ei)
            remaining[v].pop()
            e = complex.edges[ei]
            w = e.v_to if e.v_from == v else e.v_from
            sign = 1 if e.v_from == v else -1
            if e.is_loop:
                sign = 1
            return (ei, sign, w)
        return None

    # Hierholzer: walk until stuck, then splice side circuits in
    trail_vertices = [start]
    trail_letters = []
    pos = 0
    while len(used) < complex.n_edges and pos < len(trail_vertices):
        v0 = trail_vertices[pos]
        sub_letters = []
        sub_vertices = []
        v = v0
        while True:
            nxt = next_dart(v)
            if nxt is None:
                break
            ei, sign, w = nxt
            sub_letters.append((ei, sign))
            sub_vertices.append(w)
            v = w
        if sub_letters:
            trail_letters[pos:pos] = sub_letters
            trail_vertices[pos + 1 : pos + 1] = sub_vertices
        else:
            pos += 1

    if len(set(e for e, _ in trail_letters)) != complex.n_edges:
        return EulerClassification("not_traversable", None)
    word = EdgeWord(tuple(trail_letters))
    verts = word.vertex_sequence(complex)
    kind = "unicursal" if (not odd and verts[0] == verts[-1]) else "traversable"
    if odd:
        kind = "traversable"
    return EulerClassification(kind, word)


def covers_trail(word: EdgeWord, trail: EdgeWord, complex: CurveComplex) -> bool:
    """True when the word is a forward/backward walk over the trail positions.

    Positions are the waypoints of the trail (cyclic when the trail is
    closed); a forward step across position ``p`` emits ``trail[p]``, a
    backward step emits its inverse.  The word is covered exactly when some
    walk emits it.
    """
    letters = trail.letters
    L = len(letters)
    if not word.letters:
        return True
    if L == 0:
        return False
    verts = trail.vertex_sequence(complex)
    cyclic = verts[0] == verts[-1]
    n_pos = L if cyclic else L + 1

    def steps(p):
        # (next position, emitted letter)
        out = []
        if cyclic:
            out.append(((p + 1) % n_pos, letters[p]))
            q = (p - 1) % n_pos
            out.append((q, (letters[q][0], -letters[q][1])))
        else:
            if p < L:
                out.append((p + 1, letters[p]))
            if p > 0:
                out.append((p - 1, (letters[p - 1][0], -letters[p - 1][1])))
        return out

    states = set(range(n_pos))
    for letter in word.letters:
        nxt = set()
        for p in states:
            for q, emitted in steps(p):
                if emitted == letter:
                    nxt.add(q)
        if not nxt:
            return False
        states = nxt
    return True


def word_support(word: EdgeWord, complex: CurveComplex):
    """Subcomplex spanned by the edges the word uses, plus the edge-id map.

    Returns ``(subcomplex, {original edge id: subcomplex edge id})``.
    """
    edge_ids = sorted(set(e for e, _ in word))
    vs = sorted(
        set(
            v
            for ei in edge_ids
            for v in (complex.edges[ei].v_from, complex.edges[ei].v_to)
        )
    )
    vmap = {v: i for i, v in enumerate(vs)}
    edges = tuple(
        Edge(
            v_from=vmap[complex.edges[ei].v_from],
            v_to=vmap[complex.edges[ei].v_to],
            geometry=complex.edges[ei].geometry,
        )
        for ei in edge_ids
    )
    sub = CurveComplex(vertices=complex.vertices[vs], edges=edges)
    return sub, {ei: k for k, ei in enumerate(edge_ids)}
