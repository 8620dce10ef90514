"""
Base-q Arithmetic on Z^d

Componentwise division with remainder modulo q^n, q-adic digits, powers and
carry sets. Lattice points are plain tuples of Python integers so that indices
multiplied by q^n never overflow.
"""

import itertools
import logging
import math

import numpy as np

from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("ZdArith")

# Carry sets above this exponent are tested lazily instead of materialised
MATERIALISE_LIMIT = 8


class Expansion:
    """Expansion vector q of a q-substitution together with Q = q_1 ... q_d"""

    def __init__(self, q):
        q = tuple(int(x) for x in q)
        if not q:
            raise SubstitutionInputError("expansion must have at least one coordinate")
        if any(x < 2 for x in q):
            raise SubstitutionInputError(f"every coordinate of q must be >= 2, got {list(q)}")
        self.q = q
        self.d = len(q)
        self.Q = math.prod(q)

    def power(self, n):
        """Componentwise q^n"""
        return tuple(x ** n for x in self.q)

    def telescoped(self, h):
        return Expansion(self.power(h))

    def __eq__(self, other):
        return isinstance(other, Expansion) and self.q == other.q

    def __hash__(self):
        return hash(self.q)

    def __repr__(self):
        return f"Expansion({list(self.q)})"


def as_expansion(q):
    return q if isinstance(q, Expansion) else Expansion(q if not isinstance(q, int) else (q,))


def as_point(k, d=None):
    """Normalise an int or a sequence of ints into a lattice point tuple"""
    if isinstance(k, (int, np.integer)):
        point = (int(k),)
    else:
        point = tuple(int(x) for x in k)
    if d is not None and len(point) != d:
        raise SubstitutionInputError(f"lattice point {list(point)} does not have dimension {d}")
    return point


def zero(d):
    return (0,) * d


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def scale(a, b):
    """Componentwise product a·b"""
    return tuple(x * y for x, y in zip(a, b))


def divmod_qn(k, q, n):
    """
    Floored division of k by q^n in each coordinate

    Args:
        k: lattice point
        q: expansion (Expansion or sequence)
        n: nonnegative exponent

    Returns:
        (remainder, quotient) with remainder in [0, q^n) and k = remainder + quotient·q^n
    """
    if n < 0:
        raise SubstitutionInputError(f"exponent must be nonnegative, got {n}")
    q = as_expansion(q)
    k = as_point(k, q.d)
    pairs = [divmod(x, m) for x, m in zip(k, q.power(n))]
    remainder = tuple(r for _, r in pairs)
    quotient = tuple(c for c, _ in pairs)
    return remainder, quotient


def digits(k, q, n):
    """The first n q-adic digits (k_0, ..., k_{n-1}) of k, each in [0, q)"""
    q = as_expansion(q)
    remainder, _ = divmod_qn(k, q, n)
    result = []
    current = list(remainder)
    for _ in range(n):
        digit = tuple(c % m for c, m in zip(current, q.q))
        current = [c // m for c, m in zip(current, q.q)]
        result.append(digit)
    return result


def power_of(k, q):
    """Minimal p >= 0 with k in (-q^p, q^p) componentwise"""
    q = as_expansion(q)
    k = as_point(k, q.d)
    p = 0
    while any(abs(x) >= m ** p for x, m in zip(k, q.q)):
        p += 1
    return p


def box(shape):
    """All lattice points of [0, shape) in lexicographic order, last coordinate fastest"""
    return itertools.product(*(range(x) for x in shape))


def in_carry_set(j, k, q, n):
    """Membership test j in Delta_n(k) without enumerating the set"""
    q = as_expansion(q)
    j = as_point(j, q.d)
    if any(not 0 <= x < m for x, m in zip(j, q.power(n))):
        return False
    _, quotient = divmod_qn(add(j, as_point(k, q.d)), q, n)
    return any(quotient)


def carry_set(k, q, n):
    """
    The n-carry set of k: indices j in [0, q^n) with j + k leaving the q^n-block

    Materialised as a sorted list up to MATERIALISE_LIMIT; beyond that use
    in_carry_set.
    """
    q = as_expansion(q)
    k = as_point(k, q.d)
    if n > MATERIALISE_LIMIT:
        raise SubstitutionInputError(
            f"carry sets are materialised only for n <= {MATERIALISE_LIMIT}; use in_carry_set for n={n}")
    if not any(k):
        return []
    return [j for j in box(q.power(n)) if in_carry_set(j, k, q, n)]


def carry_count(k, q, n):
    """Card Delta_n(k), counted coordinate by coordinate"""
    q = as_expansion(q)
    k = as_point(k, q.d)
    staying = 1
    for x, m in zip(k, q.power(n)):
        staying *= max(m - abs(x), 0)
    return q.Q ** n - staying


def window(q, power):
    """All lattice points k with power_of(k) <= power, in lexicographic order"""
    q = as_expansion(q)
    ranges = [range(-(m ** power) + 1, m ** power) for m in q.q]
    return [tuple(k) for k in itertools.product(*ranges)]


def corners(d):
    """Points of {-1, 0, 1}^d ordered by support size, then lexicographically"""
    points = list(itertools.product((-1, 0, 1), repeat=d))
    return sorted(points, key=lambda c: (sum(1 for x in c if x), c))


def index_grid(q, n):
    """Integer array of shape (Q^n, d) listing [0, q^n) in block order"""
    q = as_expansion(q)
    shape = q.power(n)
    return np.array(np.unravel_index(np.arange(math.prod(shape)), shape)).T.astype(np.int64)


def flat_index(points, shape):
    """Row-major flat index of points inside [0, shape)"""
    return np.ravel_multi_index(tuple(np.asarray(points).T), shape)
