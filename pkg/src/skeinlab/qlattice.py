"""Quantum lattice gauge field theory on ciliated graphs.

The classical SL(2) holonomies are replaced by elements of the quantized
function algebra, represented here through words in the quantum-group
letters E, F, K, Ki (Ki = K^-1), acted on in the fundamental representation

    rho(K) = diag(t, 1/t),  rho(E) = [[0,1],[0,0]],  rho(F) = [[0,0],[1,0]],

where t is a square root of the quantum parameter q = t^2.  Words multiply
by concatenation; adjacent K Ki pairs cancel, which is sound because K is
group-like and invertible in every representation.  The Hopf operations act
by letter:

    coproduct   D(K) = K (x) K,   D(E) = E (x) K + Ki (x) E,
                D(F) = F (x) K + Ki (x) F,
    antipode    S(K) = Ki,  S(E) = -K E Ki,  S(F) = -K F Ki,
    counit      eps(K) = 1,  eps(E) = eps(F) = 0,

so the antipode needs no reference to t and squares to conjugation by the
charmed element k = K^2, whose trace t^2 + t^-2 is the quantum loop weight.

A quantum holonomy ("q-link") is a collection of edge loops with a chosen
over/under sign at each transverse self-intersection.  Its Wilson
observable decorates the edge words in three stages - R-matrix factors at
crossings, S(. k) on edges run against their orientation, and a k for each
cilium crossed - then traces the product around every loop and applies a
minus sign per loop.  At t = 1 everything collapses to the classical
theory, and the Kauffman bracket skein relation holds among the three
resolutions of any crossing.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .lattice import CiliatedGraph, EdgeEnd, Step

Word = tuple[str, ...]
_LETTERS = ("E", "F", "K", "Ki")
_CANCEL = {("K", "Ki"), ("Ki", "K")}


def _reduce(letters: Iterable[str]) -> Word:
    out: list[str] = []
    for ch in letters:
        if ch not in _LETTERS:
            raise ValueError(f"unknown letter {ch!r}")
        if out and (out[-1], ch) in _CANCEL:
            out.pop()
        else:
            out.append(ch)
    return tuple(out)


def _concat(w1: Word, w2: Word) -> Word:
    out = list(w1)
    for ch in w2:
        if out and (out[-1], ch) in _CANCEL:
            out.pop()
        else:
            out.append(ch)
    return tuple(out)


class UqWord:
    """Linear combination of reduced words in E, F, K, Ki."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, complex] = ()):
        table: dict[Word, complex] = {}
        for word, c in dict(terms).items():
            word = _reduce(word)
            c = table.get(word, 0) + c
            if c == 0:
                table.pop(word, None)
            else:
                table[word] = c
        self._terms = table

    # -- constructors --------------------------------------------------
    @classmethod
    def unit(cls) -> "UqWord":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "UqWord":
        return cls()

    @classmethod
    def letter(cls, name: str) -> "UqWord":
        return cls({(name,): 1})

    @classmethod
    def from_word(cls, word: Iterable[str], coeff: complex = 1) -> "UqWord":
        return cls({tuple(word): coeff})

    # -- inspection ----------------------------------------------------
    def items(self) -> list[tuple[Word, complex]]:
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def coeff(self, word: Iterable[str]) -> complex:
        return self._terms.get(_reduce(word), 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex)):
            other = UqWord({(): other})
        if not isinstance(other, UqWord):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def diff_norm(self, other: "UqWord") -> float:
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys),
                   default=0.0)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "UqWord":
        if isinstance(other, (int, float, complex)):
            other = UqWord({(): other})
        if not isinstance(other, UqWord):
            return NotImplemented
        table = dict(self._terms)
        for w, c in other._terms.items():
            c = table.get(w, 0) + c
            if c == 0:
                table.pop(w, None)
            else:
                table[w] = c
        out = UqWord.__new__(UqWord)
        out._terms = table
        return out

    __radd__ = __add__

    def __neg__(self) -> "UqWord":
        out = UqWord.__new__(UqWord)
        out._terms = {w: -c for w, c in self._terms.items()}
        return out

    def __sub__(self, other) -> "UqWord":
        if isinstance(other, (int, float, complex)):
            other = UqWord({(): other})
        if not isinstance(other, UqWord):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UqWord":
        return (-self) + other

    def __mul__(self, other) -> "UqWord":
        if isinstance(other, (int, float, complex)):
            out = UqWord.__new__(UqWord)
            out._terms = {} if other == 0 else {w: c * other for w, c in self._terms.items()}
            return out
        if not isinstance(other, UqWord):
            return NotImplemented
        table: dict[Word, complex] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = _concat(w1, w2)
                c = table.get(w, 0) + c1 * c2
                if c == 0:
                    table.pop(w, None)
                else:
                    table[w] = c
        out = UqWord.__new__(UqWord)
        out._terms = table
        return out

    def __rmul__(self, other) -> "UqWord":
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"({c})*{'.'.join(w) if w else '1'}" for w, c in self.items())

    def __repr__(self) -> str:
        return f"UqWord({self._terms!r})"


W_ONE = UqWord.unit()
W_E = UqWord.letter("E")
W_F = UqWord.letter("F")
W_K = UqWord.letter("K")
W_KI = UqWord.letter("Ki")
W_CHARM = UqWord.from_word(("K", "K"))        # the charmed element k = K^2


def charmed_k() -> UqWord:
    return W_CHARM


# ----------------------------------------------------------------------
# Hopf structure


_S_IMAGE: dict[str, tuple[int, Word]] = {
    "K": (1, ("Ki",)),
    "Ki": (1, ("K",)),
    "E": (-1, ("K", "E", "Ki")),
    "F": (-1, ("K", "F", "Ki")),
}


def uq_antipode(w: UqWord) -> UqWord:
    """Antipode: an algebra antihomomorphism, independent of t at word level."""
    table: dict[Word, complex] = {}
    for word, c in w._terms.items():
        sign = 1
        image: Word = ()
        for ch in reversed(word):
            s, rep = _S_IMAGE[ch]
            sign *= s
            image = _concat(image, rep)
        c = sign * c
        prev = table.get(image, 0) + c
        if prev == 0:
            table.pop(image, None)
        else:
            table[image] = prev
    return UqWord(table)


def uq_counit(w: UqWord) -> complex:
    return sum((c for word, c in w._terms.items()
                if not any(ch in ("E", "F") for ch in word)), 0)


_COPRODUCT_CASES: dict[str, tuple[tuple[Word, Word], ...]] = {
    "K": ((("K",), ("K",)),),
    "Ki": ((("Ki",), ("Ki",)),),
    "E": ((("E",), ("K",)), (("Ki",), ("E",))),
    "F": ((("F",), ("K",)), (("Ki",), ("F",))),
}


def uq_coproduct(w: UqWord) -> list[tuple[UqWord, UqWord]]:
    """Coproduct as a list of pure tensors; coefficients ride on the left leg."""
    out = []
    for word, c in w.items():
        partial: list[tuple[Word, Word]] = [((), ())]
        for ch in word:
            partial = [(_concat(left, dl), _concat(right, dr))
                       for left, right in partial
                       for dl, dr in _COPRODUCT_CASES[ch]]
        for left, right in partial:
            out.append((UqWord.from_word(left, c), UqWord.from_word(right)))
    return out


def _delta_n_letter(ch: str, n: int) -> list[tuple[Word, ...]]:
    if ch in ("K", "Ki"):
        return [((ch,),) * n]
    return [tuple(("Ki",) if j < i else ((ch,) if j == i else ("K",))
                  for j in range(n))
            for i in range(n)]


def uq_coproduct_n(w: UqWord, n: int) -> list[tuple[complex, tuple[Word, ...]]]:
    """Iterated coproduct D^(n-1) as pure tensors of n reduced words."""
    if n < 1:
        raise ValueError("need at least one tensor factor")
    out = []
    for word, c in w.items():
        partial: list[tuple[Word, ...]] = [((),) * n]
        for ch in word:
            cases = _delta_n_letter(ch, n)
            partial = [tuple(_concat(acc[j], case[j]) for j in range(n))
                       for acc in partial for case in cases]
        for words in partial:
            out.append((c, words))
    return out


# ----------------------------------------------------------------------
# fundamental representation and R-matrix


_RHO_CACHE: dict[tuple[Word, complex], np.ndarray] = {}

_E_MAT = np.array([[0, 1], [0, 0]], dtype=complex)
_F_MAT = np.array([[0, 0], [1, 0]], dtype=complex)


def _letter_matrix(ch: str, t: complex) -> np.ndarray:
    if ch == "K":
        return np.array([[t, 0], [0, 1 / t]], dtype=complex)
    if ch == "Ki":
        return np.array([[1 / t, 0], [0, t]], dtype=complex)
    return _E_MAT if ch == "E" else _F_MAT


def _word_matrix(word: Word, t: complex) -> np.ndarray:
    key = (word, complex(t))
    cached = _RHO_CACHE.get(key)
    if cached is not None:
        return cached
    m = np.eye(2, dtype=complex)
    for ch in word:
        m = m @ _letter_matrix(ch, t)
    if len(_RHO_CACHE) > 1 << 16:
        _RHO_CACHE.clear()
    _RHO_CACHE[key] = m
    return m


def uq_fundamental(w: UqWord, t: complex) -> np.ndarray:
    """Image of a word combination in the fundamental representation at t."""
    if t == 0:
        raise ValueError("t must be nonzero")
    out = np.zeros((2, 2), dtype=complex)
    for word, c in w._terms.items():
        out = out + c * _word_matrix(word, t)
    return out


def uq_trace(w: UqWord, t: complex) -> complex:
    return complex(np.trace(uq_fundamental(w, t)))


def charmed_k_matrix(t: complex) -> np.ndarray:
    return np.array([[t * t, 0], [0, 1 / (t * t)]], dtype=complex)


def r_matrix_terms(t: complex) -> list[tuple[UqWord, UqWord]]:
    """R-matrix as a sum of pure tensors of quantum-group words.

    Generically R = a (K(x)K + Ki(x)Ki) + c (K(x)Ki + Ki(x)K) + (t-t^-3) E(x)F
    with a = t^3/(t^4-1), c = -t/(t^4-1).  At t^4 = 1 the generic
    coefficients blow up but the matrix itself degenerates to a single
    group-like tensor: t*(1(x)1) at t = +-1 and -t*(K(x)K) at t = +-i.
    """
    t = complex(t)
    if abs(t ** 4 - 1) < 1e-12:
        if abs(t * t - 1) < 1e-12:
            return [(W_ONE * t, W_ONE)]
        return [(W_K * (-t), W_K)]
    a = t ** 3 / (t ** 4 - 1)
    c = -t / (t ** 4 - 1)
    return [
        (W_K * a, W_K),
        (W_KI * a, W_KI),
        (W_K * c, W_KI),
        (W_KI * c, W_K),
        (W_E * (t - t ** -3), W_F),
    ]


def r_matrix(t: complex) -> np.ndarray:
    """The 4x4 R-matrix sum of kron(rho(alpha), rho(beta))."""
    out = np.zeros((4, 4), dtype=complex)
    for alpha, beta in r_matrix_terms(t):
        out = out + np.kron(uq_fundamental(alpha, t), uq_fundamental(beta, t))
    return out


def yang_baxter_residual(t: complex) -> float:
    """Max-entry defect of R12 R13 R23 = R23 R13 R12 on three tensor factors."""
    r = r_matrix(t)
    eye = np.eye(2)
    r12 = np.kron(r, eye)
    r23 = np.kron(eye, r)
    swap23 = np.zeros((8, 8))
    for a in range(2):
        for b in range(2):
            for c in range(2):
                swap23[a * 4 + c * 2 + b, a * 4 + b * 2 + c] = 1
    r13 = swap23 @ r12 @ swap23
    return float(np.abs(r12 @ r13 @ r23 - r23 @ r13 @ r12).max())


# ----------------------------------------------------------------------
# q-links


class QLink:
    """Loops on a ciliated graph with over/under signs at double points.

    Each loop is a closed edge path of steps (eid, +-1); an edge may be used
    at most once across all loops, and a vertex at most twice.  A vertex
    passed twice is a transverse double point: its four edge-ends must
    alternate between the two passages in the cilial cyclic order, and the
    crossing list must record a sign there, '+' if the first passage in
    traversal order runs over, '-' if under.
    """

    def __init__(self, loops: Sequence[Sequence[Step]],
                 crossings: Sequence[tuple[object, str]] = ()):
        self.loops = [[(int(e), int(d)) for e, d in loop] for loop in loops]
        self.crossings = [(v, str(sign)) for v, sign in crossings]
        for _, sign in self.crossings:
            if sign not in ("+", "-"):
                raise ValueError(f"crossing sign must be '+' or '-', got {sign!r}")

    def used_edges(self) -> list[int]:
        return [e for loop in self.loops for e, _ in loop]

    def validate(self, graph: CiliatedGraph) -> None:
        for loop in self.loops:
            graph._check_path(loop, closed=True)
        used = self.used_edges()
        if len(used) != len(set(used)):
            raise ValueError("an edge is traversed more than once")
        passages = _passages(graph, self)
        if any(len(ps) > 2 for ps in passages.values()):
            raise ValueError("a vertex is visited more than twice")
        transverse = set()
        for v, ps in passages.items():
            if len(ps) == 2 and _is_transverse(_double_ends(graph, passages, v)):
                transverse.add(v)
        listed = [v for v, _ in self.crossings]
        if len(listed) != len(set(listed)):
            raise ValueError("duplicate crossing vertex")
        if set(listed) != transverse:
            raise ValueError(
                "crossing signs must be given exactly at transverse double points; "
                f"expected {sorted(map(str, transverse))}, got {sorted(map(str, listed))}")


class _Passage(NamedTuple):
    order: tuple[int, int]        # (loop index, arrival step index): traversal order
    loop: int
    in_end: EdgeEnd
    out_end: EdgeEnd


def _step_arrival_end(step: Step) -> EdgeEnd:
    e, d = step
    return (e, 1) if d == 1 else (e, 0)


def _step_departure_end(step: Step) -> EdgeEnd:
    e, d = step
    return (e, 0) if d == 1 else (e, 1)


def _passages(graph: CiliatedGraph, qlink: QLink) -> dict[object, list[_Passage]]:
    out: dict[object, list[_Passage]] = {}
    for li, loop in enumerate(qlink.loops):
        for i, step in enumerate(loop):
            nxt = loop[(i + 1) % len(loop)]
            in_end = _step_arrival_end(step)
            v = graph.end_vertex(in_end)
            p = _Passage((li, i), li, in_end, _step_departure_end(nxt))
            out.setdefault(v, []).append(p)
    for ps in out.values():
        ps.sort(key=lambda p: p.order)
    return out


def _double_ends(graph: CiliatedGraph, passages: Mapping[object, list[_Passage]],
                 vertex: object) -> list[tuple[EdgeEnd, int]]:
    """The four link ends at a twice-visited vertex in cilial order, tagged
    with the passage (0 = first in traversal order, 1 = second) each serves."""
    ps = passages[vertex]
    owner = {}
    for idx, p in enumerate(ps):
        owner[p.in_end] = idx
        owner[p.out_end] = idx
    ends = [(end, owner[end]) for end in graph.ciliation[vertex] if end in owner]
    if len(ends) != 4 or len(owner) != 4:
        raise ValueError(f"double point at {vertex!r} does not use four distinct ends")
    return ends


def _is_transverse(ends: list[tuple[EdgeEnd, int]]) -> bool:
    """Whether the passages alternate around the vertex (cross transversally)."""
    tags = [tag for _, tag in ends]
    return tags in ([0, 1, 0, 1], [1, 0, 1, 0])


def _crossing_ends(graph: CiliatedGraph, passages: Mapping[object, list[_Passage]],
                   vertex: object) -> list[tuple[EdgeEnd, int]]:
    ends = _double_ends(graph, passages, vertex)
    if not _is_transverse(ends):
        raise ValueError(f"passages at {vertex!r} do not alternate (not transverse)")
    return ends


QConnection = Mapping[int, UqWord]


def _as_uq(value) -> UqWord:
    if isinstance(value, UqWord):
        return value
    raise TypeError(f"expected UqWord, got {type(value).__name__}")


def decorated_words(graph: CiliatedGraph, qlink: QLink, conn: QConnection,
                    t: complex) -> list[list[UqWord]]:
    """Per R-state, the decorated word products around each loop.

    This exposes the structural content of the Wilson observable: each state
    picks one pure tensor alpha (x) beta of the R-matrix at every crossing,
    decorates edge words (alpha and beta at the crossing ends, S(. k) on
    edges against orientation, k per cilium crossed), and multiplies along
    each loop in traversal order.
    """
    qlink.validate(graph)
    passages = _passages(graph, qlink)
    rterms = r_matrix_terms(t)

    # crossing data: (cilially first end, its edge side, on-over?, second end, ...)
    cross_plans = []
    for vertex, sign in qlink.crossings:
        ends = _crossing_ends(graph, passages, vertex)
        (c0, tag0), (c1, tag1) = ends[0], ends[1]
        over_tag = 0 if sign == "+" else 1
        cross_plans.append((c0, c1, tag0 == over_tag))

    # cilium steps: one k for each transition whose incoming end sits after
    # the outgoing end in the cilial order of the vertex where they meet
    cilium_edges = []
    for v, ps in passages.items():
        for p in ps:
            if graph.cilial_position(v, p.in_end) > graph.cilial_position(v, p.out_end):
                cilium_edges.append(p.in_end[0])

    against = [e for loop in qlink.loops for e, d in loop if d == -1]

    out = []
    for combo in itertools.product(rterms, repeat=len(cross_plans)):
        dec = {e: _as_uq(conn[e]) for loop in qlink.loops for e, _ in loop}
        for (c0, c1, c0_over), (alpha, beta) in zip(cross_plans, combo):
            d0, d1 = (alpha, beta) if c0_over else (beta, uq_antipode(alpha))
            for (e, side), deco in ((c0, d0), (c1, d1)):
                dec[e] = deco * dec[e] if side == 0 else dec[e] * uq_antipode(deco)
        for e in against:
            dec[e] = uq_antipode(dec[e] * W_CHARM)
        for e in cilium_edges:
            dec[e] = dec[e] * W_CHARM
        products = []
        for loop in qlink.loops:
            word = W_ONE
            for e, _ in loop:
                word = word * dec[e]
            products.append(word)
        out.append(products)
    return out


def wilson_qlink(graph: CiliatedGraph, qlink: QLink, conn: QConnection,
                 t: complex) -> complex:
    """Quantum Wilson observable of a q-link.

    Sums the traces of the decorated loop products over all R-states, with a
    factor of -1 per loop and a counit factor for every unused edge.
    """
    total = 0
    for products in decorated_words(graph, qlink, conn, t):
        term = 1
        for word in products:
            term *= uq_trace(word, t)
        total += term
    unused = set(graph.edges) - set(qlink.used_edges())
    for e in unused:
        total *= uq_counit(_as_uq(conn[e]))
    return complex((-1) ** len(qlink.loops) * total)


def skein_residual(graph: CiliatedGraph, d: QLink, d_a: QLink, d_b: QLink,
                   conn: QConnection, t: complex) -> complex:
    """Kauffman relation defect W(d) + t W(d_a) + t^-1 W(d_b) at one crossing.

    d_a and d_b must be the two planar resolutions of a chosen crossing of d;
    the residual vanishes for flat quantum connections.
    """
    return (wilson_qlink(graph, d, conn, t)
            + t * wilson_qlink(graph, d_a, conn, t)
            + (1 / t) * wilson_qlink(graph, d_b, conn, t))


def bowtie_qlinks() -> tuple[QLink, QLink, QLink]:
    """A self-crossing loop on the bowtie graph and its two resolutions.

    On `lattice.bowtie_graph` the loop d runs around both triangles and
    crosses itself at the shared vertex v3, first passage over.  d_a smooths
    the crossing the orientation-reversing way (one loop through all six
    edges), d_b the orientation-preserving way (the two triangle loops).
    The three satisfy W(d) + t W(d_a) + t^-1 W(d_b) = 0 for flat connections.
    """
    d = QLink([[(1, 1), (2, 1), (3, 1), (4, 1), (5, -1), (6, 1)]], [("v3", "+")])
    d_a = QLink([[(1, 1), (2, 1), (3, 1), (6, -1), (5, 1), (4, -1)]])
    d_b = QLink([[(1, 1), (2, 1), (3, 1)], [(4, 1), (5, -1), (6, 1)]])
    return d, d_a, d_b


# ----------------------------------------------------------------------
# gauge transformations


def gauge_act_q(graph: CiliatedGraph, y: UqWord, vertex: object,
                conn: QConnection) -> list[dict[int, UqWord]]:
    """Quantum gauge action of y at a vertex, as a sum of pure-tensor connections.

    The iterated coproduct of y spreads one Sweedler leg onto each incident
    edge-end in cilial order: a source end multiplies the edge word on the
    left, a target end multiplies by the antipode of the leg on the right.
    Summing any gauge-invariant observable over the returned list equals
    eps(y) times its original value.
    """
    ends = graph.ciliation[vertex]
    if not ends:
        raise ValueError(f"vertex {vertex!r} has no incident edge-ends")
    out = []
    for coeff, words in uq_coproduct_n(y, len(ends)):
        c2 = {e: _as_uq(w) for e, w in conn.items()}
        scale = coeff
        for (e, side), word in zip(ends, words):
            leg = UqWord.from_word(word, scale)
            scale = 1
            c2[e] = leg * c2[e] if side == 0 else c2[e] * uq_antipode(leg)
        out.append(c2)
    return out


def classical_to_quantum(conn: Mapping[int, np.ndarray]) -> dict[int, UqWord]:
    """Encode a matrix connection as quantum words with the same image at every t.

    A 2x2 matrix m equals m11*1 + (m00-m11)*EF + m01*E + m10*F in the
    fundamental representation, with no K letters, so the encoding is
    t-independent and restricts to the classical theory at t = 1.
    """
    out = {}
    for e, m in conn.items():
        m = np.asarray(m, dtype=complex)
        out[e] = (UqWord({
            (): m[1, 1],
            ("E", "F"): m[0, 0] - m[1, 1],
            ("E",): m[0, 1],
            ("F",): m[1, 0],
        }))
    return out


# ----------------------------------------------------------------------
# vertex splitting (the coproduct of the theory)


class Tangle(NamedTuple):
    """Combinatorial splitting tangle at a vertex of valence n.

    Each incident edge-end contributes a coupon emitting two strands
    (2i-1, 2i) for coupon i; `permutation` sends strand s to its final
    position, separating first copies (positions 1..n) from second copies
    (positions n+1..2n); `crossings` lists (position, over, under) braid
    swaps in application order, the over strand always an even one.
    """
    n: int
    coupons: tuple[EdgeEnd, ...]
    permutation: tuple[int, ...]
    crossings: tuple[tuple[int, int, int], ...]


def fundamental_tangle(graph: CiliatedGraph, vertex: object) -> Tangle:
    ends = tuple(graph.ciliation[vertex])
    n = len(ends)
    rank = {}
    for s in range(1, 2 * n + 1):
        i = (s + 1) // 2
        rank[s] = i if s % 2 else n + i
    order = list(range(1, 2 * n + 1))
    crossings = []
    changed = True
    while changed:
        changed = False
        for p in range(2 * n - 1):
            a, b = order[p], order[p + 1]
            if rank[a] > rank[b]:
                over, under = (a, b) if a % 2 == 0 else (b, a)
                crossings.append((p + 1, over, under))
                order[p], order[p + 1] = b, a
                changed = True
    permutation = tuple(rank[s] for s in range(1, 2 * n + 1))
    return Tangle(n, ends, permutation, tuple(crossings))


def nabla_vertex(graph: CiliatedGraph, vertex: object, inputs: Sequence[UqWord],
                 t: complex) -> list[tuple[UqWord, ...]]:
    """Split a vertex: coproduct on every incident edge word, then braid.

    `inputs` lists one word per incident edge-end in cilial order.  Each is
    split by the coproduct into two strands, the left Sweedler leg on the
    first copy; the strands braid past each other through the fundamental
    tangle, each crossing left-multiplying the over strand by alpha and the
    under strand by beta for every pure tensor alpha (x) beta of the
    R-matrix; finally the strands sort into first copies then second
    copies.  Returns the resulting sum of pure tensors of length 2n.

    The uniform left multiplication at crossings (rather than an
    orientation-dependent rule) is forced by coassociativity: it is the
    unique side convention, up to the global mirror symmetries of the
    tangle, for which the iterated splittings agree.
    """
    tangle = fundamental_tangle(graph, vertex)
    n = tangle.n
    if len(inputs) != n:
        raise ValueError(f"expected {n} inputs at {vertex!r}, got {len(inputs)}")
    rterms = r_matrix_terms(t)

    states: list[dict[int, UqWord]] = [{}]
    for i, w in enumerate(inputs, start=1):
        pairs = uq_coproduct(w)
        nxt = []
        for state in states:
            for left, right in pairs:
                s2 = dict(state)
                s2[2 * i - 1] = left
                s2[2 * i] = right
                nxt.append(s2)
        states = nxt

    for _, over, under in tangle.crossings:
        nxt = []
        for state in states:
            for alpha, beta in rterms:
                s2 = dict(state)
                s2[over] = alpha * s2[over]
                s2[under] = beta * s2[under]
                nxt.append(s2)
        states = nxt

    out = []
    for state in states:
        factors: list[UqWord | None] = [None] * (2 * n)
        for s in range(1, 2 * n + 1):
            factors[tangle.permutation[s - 1] - 1] = state[s]
        out.append(tuple(factors))          # type: ignore[arg-type]
    return out


def _collapse_tensors(terms: Iterable[tuple[UqWord, ...]]) -> dict[tuple[Word, ...], complex]:
    """Combine pure tensors of single-term words into a word-tuple -> coeff map."""
    table: dict[tuple[Word, ...], complex] = {}
    for factors in terms:
        coeff: complex = 1
        words = []
        for f in factors:
            items = f.items()
            if len(items) != 1:
                raise ValueError("expected single-term tensor factors")
            word, c = items[0]
            coeff *= c
            words.append(word)
        key = tuple(words)
        c = table.get(key, 0) + coeff
        if c == 0:
            table.pop(key, None)
        else:
            table[key] = c
    return table


def nabla_coassociativity_residual(graph: CiliatedGraph, vertex: object,
                                   inputs: Sequence[UqWord], t: complex,
                                   rng: np.random.Generator) -> float:
    """Relative defect of (nabla (x) id) nabla = (id (x) nabla) nabla.

    Both iterates are expanded symbolically into 3n-fold pure tensors of
    words; equality is probed by contracting every slot with fixed random
    vectors in the fundamental representation, so the check is basis-free
    and collapses the enormous symbolic sums to two numbers.
    """
    n = len(graph.ciliation[vertex])
    first = nabla_vertex(graph, vertex, inputs, t)
    left_terms: list[tuple[UqWord, ...]] = []
    right_terms: list[tuple[UqWord, ...]] = []
    for factors in first:
        for again in nabla_vertex(graph, vertex, factors[:n], t):
            left_terms.append(tuple(again) + tuple(factors[n:]))
        for again in nabla_vertex(graph, vertex, factors[n:], t):
            right_terms.append(tuple(factors[:n]) + tuple(again))
    left = _collapse_tensors(left_terms)
    right = _collapse_tensors(right_terms)

    probes = [(rng.standard_normal(2) + 1j * rng.standard_normal(2),
               rng.standard_normal(2) + 1j * rng.standard_normal(2))
              for _ in range(3 * n)]
    cache: dict[tuple[int, Word], complex] = {}

    def contract(table: Mapping[tuple[Word, ...], complex]) -> complex:
        total: complex = 0
        for words, coeff in table.items():
            prod = coeff
            for slot, word in enumerate(words):
                key = (slot, word)
                val = cache.get(key)
                if val is None:
                    u, v = probes[slot]
                    val = complex(u @ _word_matrix(word, t) @ v)
                    cache[key] = val
                prod *= val
            total += prod
        return total

    lv, rv = contract(left), contract(right)
    return abs(lv - rv) / max(1.0, abs(lv), abs(rv))
