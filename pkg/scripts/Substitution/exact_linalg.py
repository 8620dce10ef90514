"""
Exact Linear Algebra Helpers

Thin wrappers over sympy for the rational matrix work of the analysis:
solves and inverses run on DomainMatrix over QQ, nullspaces on Matrix.
Floating helpers for the complex paths live here as well so every module
converts the same way.
"""

import logging

import numpy as np
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger("ExactLinalg")


def to_domain(matrix):
    return DomainMatrix.from_Matrix(sympy.Matrix(matrix)).convert_to(QQ)


def solve(system, rhs):
    """Exact solution X of system·X = rhs (rhs may have several columns)"""
    return to_domain(system).lu_solve(to_domain(rhs)).to_Matrix()


def inverse(matrix):
    return to_domain(matrix).inv().to_Matrix()


def rank(matrix):
    return to_domain(matrix).rank()


def is_invertible(matrix):
    return rank(matrix) == sympy.Matrix(matrix).shape[0]


def nullspace(matrix):
    """Basis of the right nullspace as a list of column Matrices"""
    return sympy.Matrix(matrix).nullspace()


def left_nullspace(matrix):
    """Basis of the left nullspace as a list of row Matrices"""
    return [v.T for v in sympy.Matrix(matrix).T.nullspace()]


def vec_to_square(vector, s):
    """Associated s×s matrix of a length s^2 vector, read row-major"""
    return sympy.Matrix(s, s, list(vector))


def charpoly_signs_psd(matrix):
    """
    Exact positive semidefiniteness of a real symmetric rational matrix

    The eigenvalues are all >= 0 exactly when the coefficients of
    det(tI - M) alternate in sign.
    """
    t = sympy.Symbol("t")
    coefficients = sympy.Matrix(matrix).charpoly(t).all_coeffs()
    return all((-1) ** i * c >= 0 for i, c in enumerate(coefficients))


def is_rational_vector(vector):
    return all(sympy.sympify(x).is_rational for x in vector)


def to_complex_array(values):
    return np.array([complex(sympy.N(x, 30)) if not isinstance(x, (complex, float, int)) else complex(x)
                     for x in values], dtype=complex)


def hermitian_min_eigenvalue(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    hermitian = (matrix + matrix.conj().T) / 2
    return float(np.linalg.eigvalsh(hermitian).min())


def snap_rational(value, max_denominator, tolerance):
    """Nearest simple rational to a float, or None when it is not within tolerance"""
    candidate = sympy.Rational(float(value)).limit_denominator(max_denominator)
    if abs(float(candidate) - float(value)) <= tolerance:
        return candidate
    return None


def format_exact(value):
    """String form of an exact or complex value for reports and CSVs"""
    if isinstance(value, (complex, np.complexfloating)):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(sympy.sympify(value))
