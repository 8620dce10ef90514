"""
Fourier Engine

Exact Fourier coefficients of the correlation vector of a q-substitution.

Every coefficient follows from the recursion
    Σ̂(k) = Q^{-p} sum_{j in [0, q^p)} (R_r^(p) (x) R_j^(p)) Σ̂(c),    j + k = r + c·q^p,
where σ̂_ab(k) is the frequency of a at j + k and b at j. For p >= power_of(k)
it only refers to quotients c in {-1, 0, 1}^d. The corner values are solved
first, by increasing support, from linear systems whose self-referential part
is inverted exactly. The same recursion grounded at the coincidence projection
gives the bicorrelation coefficients C_k.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import sympy

from scripts.Substitution import exact_linalg, zd_arith
from scripts.Substitution.structure_analysis import q_eigen_projection
from scripts.Substitution.substitution_core import (
    DEFAULT_CELL_BUDGET, check_budget, coincidence_matrix, pair_transfer_counts)
from scripts.Substitution.substitution_errors import AnalysisPreconditionError

logger = logging.getLogger("FourierEngine")


def sigma_zero(weights, s):
    """Σ̂(0) = sum_a u_a e_aa"""
    vector = sympy.zeros(s * s, 1)
    for a in range(s):
        vector[a * s + a] = sympy.sympify(weights[a])
    return vector


def quotient_blocks(S, k, p):
    """
    Integer transfer matrices of the recursion at k with exponent p

    Returns:
        dict quotient c -> (s^2, s^2) int64 array of sum_j R_r^(p) (x) R_j^(p)
        over the j whose carry is c
    """
    maps = S.generalized_maps(p)
    grid = zd_arith.index_grid(S.expansion, p)
    modulus = np.array(S.expansion.power(p), dtype=np.int64)
    shifted = grid + np.array(k, dtype=np.int64)
    remainders = np.mod(shifted, modulus)
    quotients = np.floor_divide(shifted, modulus)
    right = maps[zd_arith.flat_index(remainders, tuple(modulus))]
    blocks = {}
    for c in sorted(set(map(tuple, quotients.tolist()))):
        rows = np.all(quotients == np.array(c), axis=1)
        blocks[c] = pair_transfer_counts(right[rows], maps[rows], S.s)
    return blocks


class CorrelationTable:
    """
    Map from lattice points to exact coefficients, grounded at k = 0

    Entries are column vectors Σ̂(k) for the correlation vector, or s^2×s^2
    matrices C_k for the bicorrelation coefficients. Inserts are idempotent.
    """

    def __init__(self, ground, d):
        self.d = d
        self.base = {zd_arith.zero(d): ground}
        self.cache = {zd_arith.zero(d): ground}
        self.provenance = {zd_arith.zero(d): {"p": 0, "source": "ground"}}
        self._lock = threading.Lock()

    def get(self, k):
        return self.cache.get(k)

    def store(self, k, value, p, source):
        with self._lock:
            if k not in self.cache:
                self.cache[k] = value
                self.provenance[k] = {"p": p, "source": source}
            return self.cache[k]

    def __contains__(self, k):
        return k in self.cache

    def __len__(self):
        return len(self.cache)

    def items(self):
        return sorted(self.cache.items())


class FourierEngine:
    """
    Exact coefficient engine for one (telescoped) substitution and weight vector

    Args:
        substitution: Substitution with index 1 for S and S (x) S
        weights: InvariantWeights of the chosen invariant measure
        p_max: largest exponent tried for the corner systems
        cell_budget: limit on Q^p cells per recursion step
        jobs: worker threads for window batches
    """

    def __init__(self, substitution, weights, p_max=6, cell_budget=DEFAULT_CELL_BUDGET, jobs=1):
        self.substitution = substitution
        self.weights = weights
        self.p_max = p_max
        self.cell_budget = cell_budget
        self.jobs = jobs
        self.sigma = CorrelationTable(sigma_zero(weights, substitution.s), substitution.d)
        self.bicorrelation = None
        self._sigma_solved = False
        logger.info(f"FourierEngine initialized for {substitution.name} (p_max={p_max})")

    @property
    def s(self):
        return self.substitution.s

    def _solve_corners(self, table, label):
        S = self.substitution
        size = self.s * self.s
        for corner in zd_arith.corners(S.d):
            if not any(corner):
                continue
            for p in range(1, self.p_max + 1):
                check_budget(S, p, self.cell_budget)
                blocks = quotient_blocks(S, corner, p)
                scale = S.Q ** p
                system = scale * sympy.eye(size) - sympy.Matrix(blocks.get(corner, np.zeros((size, size))).tolist())
                if not exact_linalg.is_invertible(system):
                    logger.warning(f"Corner {corner} of {label}: system singular at p={p}, raising p")
                    continue
                rhs = sympy.zeros(*table.get(zd_arith.zero(S.d)).shape)
                for c, counts in blocks.items():
                    if c == corner:
                        continue
                    if c not in table:
                        raise AnalysisPreconditionError(f"corner {c} needed by {corner} is not solved yet")
                    rhs += sympy.Matrix(counts.tolist()) * table.get(c)
                value = exact_linalg.solve(system, rhs)
                table.base[corner] = value
                table.store(corner, value, p, "corner-solve")
                break
            else:
                raise AnalysisPreconditionError(
                    f"corner system for {list(corner)} is singular up to p_max={self.p_max}; increase p_max")
        logger.info(f"Solved {len(table.base) - 1} corner values of {label}")

    def base_coefficients(self):
        """Corner values Σ̂(c), c in {-1, 0, 1}^d"""
        if not self._sigma_solved:
            self._solve_corners(self.sigma, "Σ̂")
            self._sigma_solved = True
        return self.sigma.base

    def _recurse(self, table, k):
        k = zd_arith.as_point(k, self.substitution.d)
        cached = table.get(k)
        if cached is not None:
            return cached
        S = self.substitution
        p = max(zd_arith.power_of(k, S.expansion), 1)
        check_budget(S, p, self.cell_budget)
        total = None
        for c, counts in quotient_blocks(S, k, p).items():
            term = sympy.Matrix(counts.tolist()) * table.get(c)
            total = term if total is None else total + term
        return table.store(k, total / S.Q ** p, p, "recursion")

    def coefficient(self, k):
        """Σ̂(k) as an exact column vector over the bialphabet"""
        self.base_coefficients()
        return self._recurse(self.sigma, k)

    def window_coefficients(self, power, extra=()):
        """
        Σ̂(k) for every k with power_of(k) <= power, plus any extra points

        Returns:
            dict k -> vector in lexicographic order of k
        """
        self.base_coefficients()
        points = zd_arith.window(self.substitution.expansion, power)
        points += [zd_arith.as_point(k, self.substitution.d) for k in extra if k not in points]
        logger.info(f"Computing {len(points)} coefficients on the window of power {power}")
        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                values = list(pool.map(self.coefficient, points))
        else:
            values = [self.coefficient(k) for k in points]
        return dict(sorted(zip(points, values)))

    def provenance(self, k):
        return self.sigma.provenance.get(zd_arith.as_point(k, self.substitution.d))

    def bicorrelation_coefficient(self, k):
        """C_k, grounded at C_0 = projection of C_S onto its Q-eigenspace"""
        if self.bicorrelation is None:
            projection = q_eigen_projection(coincidence_matrix(self.substitution), self.substitution.Q)
            self.bicorrelation = CorrelationTable(projection, self.substitution.d)
            self._solve_corners(self.bicorrelation, "C_k")
        return self._recurse(self.bicorrelation, k)

    def scaled_prediction(self, a):
        """(1/Q) C_S Σ̂(a), the value Σ̂(a·q) must take"""
        return coincidence_matrix(self.substitution) * self.coefficient(a) / self.substitution.Q


def pair_matrix(vector, s):
    """Associated s×s matrix [σ̂_ab(k)] of a coefficient vector"""
    return exact_linalg.vec_to_square(vector, s)


def coefficient_rows(engine, coefficients):
    """Rows (k, pair, numerator, denominator, value) for CSV emission"""
    names = engine.substitution.alphabet.pairs()
    rows = []
    for k, vector in coefficients.items():
        for pair, value in zip(names, vector):
            value = sympy.Rational(value)
            rows.append({
                "k": ",".join(str(x) for x in k),
                "pair": pair,
                "numerator": int(value.p),
                "denominator": int(value.q),
                "value": str(value),
                "p": engine.sigma.provenance[k]["p"],
            })
    return rows
