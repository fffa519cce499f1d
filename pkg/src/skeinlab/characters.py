"""Trace functions on SL(2, C) representations of free groups.

Words in the generators are written as strings of letters, with capitals
denoting inverses: "abA" means a * b * a^-1.  A representation is a mapping
from lowercase generator names to 2x2 complex matrices of determinant one.

The punctured torus has free fundamental group on two generators a, b.  Its
character variety embeds in C^3 through the coordinates

    x = -tr rho(a),   y = -tr rho(b),   z = -tr rho(ab),

the sign convention that matches loop values in the skein algebra (a simple
loop evaluates to minus the trace of its holonomy).  `phi_evaluate` pushes a
commutative polynomial in x, y, z to a number through these coordinates.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .torus_skein import CommPoly

Rep = Mapping[str, np.ndarray]


def sl2_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a determinant-one 2x2 matrix via the adjugate."""
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


def random_sl2(rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Random SL(2, C) matrix: complex normal entries scaled to determinant one."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    while True:
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) > 1e-3:
            return m / np.sqrt(det)


def random_rep(names: Iterable[str], rng: np.random.Generator | int | None = None) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    return {name: random_sl2(rng) for name in names}


def inverse_word(word: str) -> str:
    return word[::-1].swapcase()


def evaluate_word(rep: Rep, word: str) -> np.ndarray:
    """Product of generator images; empty word gives the identity."""
    out = np.eye(2, dtype=complex)
    for ch in word:
        name = ch.lower()
        if name not in rep:
            raise KeyError(f"generator {name!r} missing from representation")
        m = rep[name]
        out = out @ (sl2_inverse(m) if ch.isupper() else m)
    return out


def trace_word(rep: Rep, word: str) -> complex:
    return complex(np.trace(evaluate_word(rep, word)))


def trace_identity_residual(rep: Rep, u: str, v: str) -> complex:
    """Defect of tr(UV) + tr(UV^-1) = tr(U) tr(V); zero on SL(2)."""
    return (trace_word(rep, u + v) + trace_word(rep, u + inverse_word(v))
            - trace_word(rep, u) * trace_word(rep, v))


def character_point(rep: Rep) -> tuple[complex, complex, complex]:
    """Coordinates (x, y, z) = (-tr a, -tr b, -tr ab) of a two-generator rep."""
    return (-trace_word(rep, "a"), -trace_word(rep, "b"), -trace_word(rep, "ab"))


def phi_evaluate(p: CommPoly, rep: Rep) -> complex:
    """Evaluate a polynomial in x, y, z at the character of rep.

    This is the evaluation map from the classical limit of the skein algebra
    to functions on the character variety; it is an algebra homomorphism.
    """
    x, y, z = character_point(rep)
    return complex(p.evaluate(x, y, z))


def conjugate_rep(rep: Rep, g: np.ndarray) -> dict[str, np.ndarray]:
    ginv = sl2_inverse(g)
    return {name: g @ m @ ginv for name, m in rep.items()}


def commutator_trace(rep: Rep) -> complex:
    """Trace of rho(a b a^-1 b^-1), the peripheral loop of the punctured torus."""
    return trace_word(rep, "abAB")
