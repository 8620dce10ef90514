"""
Empirical Pair-Frequency Oracle

Brute-force check of the exact coefficients: expand a superblock S^n(γ),
count the letter pairs (block(j + k), block(j)) and compare the normalized
counts with Σ̂(k). Frequencies are normalized by Q^n, so the positions whose
partner falls outside the superblock are part of the reported deviation.
"""

import logging

import numpy as np
import sympy

from scripts.Substitution import zd_arith
from scripts.Substitution.substitution_core import DEFAULT_CELL_BUDGET, expand_cells
from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("EmpiricalOracle")


class FrequencyVector:
    """Pair counts of one superblock at offset k"""

    def __init__(self, letter, n, k, counts, Q_n):
        self.letter = letter
        self.n = n
        self.k = k
        self.counts = counts
        self.positions = int(counts.sum())
        self.normalized = [sympy.Rational(int(c), Q_n) for c in counts]

    def to_floats(self):
        return [float(x) for x in self.normalized]


def _overlap_slices(shape, k):
    """Slices of [0, shape) for positions j and j + k with both inside"""
    source, target = [], []
    for size, offset in zip(shape, k):
        if offset >= 0:
            source.append(slice(0, max(size - offset, 0)))
            target.append(slice(offset, size))
        else:
            source.append(slice(-offset, size))
            target.append(slice(0, max(size + offset, 0)))
    return source, target


def pair_frequency(S, letter, n, k, budget=DEFAULT_CELL_BUDGET):
    """
    Frequencies of (block(j + k), block(j)) in S^n(letter), normalized by Q^n

    Args:
        S: Substitution
        letter: letter name
        n: iteration depth, at least power_of(k) + 1
        k: offset
        budget: cell budget for the expansion
    """
    k = zd_arith.as_point(k, S.d)
    if n < zd_arith.power_of(k, S.expansion) + 1:
        raise SubstitutionInputError(f"depth {n} too small for offset {list(k)}")
    cells = expand_cells(S, S.alphabet.id(letter), n, budget)
    source, target = _overlap_slices(cells.shape, k)
    size = S.s * S.s
    if S.d == 1:
        counts = np.bincount(cells[target[0]] * S.s + cells[source[0]], minlength=size)
        return FrequencyVector(letter, n, k, counts, S.Q ** n)
    counts = np.zeros(size, dtype=np.int64)
    # one row of the first axis at a time
    rows = zip(range(*source[0].indices(cells.shape[0])), range(*target[0].indices(cells.shape[0])))
    for i, j in rows:
        base = cells[(i,) + tuple(source[1:])].ravel()
        shifted = cells[(j,) + tuple(target[1:])].ravel()
        counts += np.bincount(shifted * S.s + base, minlength=size)
    return FrequencyVector(letter, n, k, counts, S.Q ** n)


class Comparison:
    """Exact distances between an oracle run and an exact coefficient"""

    def __init__(self, oracle, exact, deviations, carry_fraction):
        self.oracle = oracle
        self.exact = exact
        self.deviations = deviations
        self.l1 = sum(deviations)
        self.max_deviation = max(deviations)
        self.carry_fraction = carry_fraction

    def to_dict(self):
        return {
            "n": self.oracle.n,
            "k": list(self.oracle.k),
            "l1": str(self.l1),
            "max_deviation": str(self.max_deviation),
            "carry_fraction": str(self.carry_fraction),
        }


def compare(oracle, exact, q=None):
    """L1 distance and largest entrywise deviation, as exact rationals"""
    exact = [sympy.Rational(x) for x in exact]
    if len(exact) != len(oracle.normalized):
        raise SubstitutionInputError("oracle and exact vectors differ in length")
    deviations = [abs(a - b) for a, b in zip(oracle.normalized, exact)]
    carry_fraction = None
    if q is not None:
        expansion = zd_arith.as_expansion(q)
        carry_fraction = sympy.Rational(zd_arith.carry_count(oracle.k, expansion, oracle.n), expansion.Q ** oracle.n)
    return Comparison(oracle, exact, deviations, carry_fraction)


def depth_sweep(S, letter, depths, k, exact, budget=DEFAULT_CELL_BUDGET):
    """Comparisons at several depths, shallowest first"""
    results = []
    for n in sorted(depths):
        comparison = compare(pair_frequency(S, letter, n, k, budget), exact, S.expansion)
        logger.info(f"depth {n}, k={list(comparison.oracle.k)}: L1 {float(comparison.l1):.3g}, "
                    f"carry fraction {float(comparison.carry_fraction):.3g}")
        results.append(comparison)
    return results


def letter_spread(S, n, k, budget=DEFAULT_CELL_BUDGET):
    """Largest L1 distance between the frequency vectors of different starting letters"""
    vectors = [pair_frequency(S, a, n, k, budget).normalized for a in S.alphabet]
    spread = sympy.Integer(0)
    for i, a in enumerate(vectors):
        for b in vectors[i + 1:]:
            spread = max(spread, sum(abs(x - y) for x, y in zip(a, b)))
    return spread


def frequency_rows(S, comparisons):
    """Rows (n, k, pair, frequency, exact, deviation) for CSV emission"""
    pairs = S.alphabet.pairs()
    rows = []
    for c in comparisons:
        for pair, frequency, exact, deviation in zip(pairs, c.oracle.normalized, c.exact, c.deviations):
            rows.append({
                "n": c.oracle.n,
                "k": ",".join(str(x) for x in c.oracle.k),
                "pair": pair,
                "frequency": float(frequency),
                "exact": str(exact),
                "deviation": float(deviation),
                "carry_fraction": float(c.carry_fraction) if c.carry_fraction is not None else None,
            })
    return rows
