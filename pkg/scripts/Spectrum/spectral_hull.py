"""
Spectral Hull

Builds the spectral hull K(S): the left Q-eigenvectors v of the coincidence
matrix whose associated matrix v̊ is positive semidefinite and which are
normalized by sum_a v_aa u_a = 1. The hull is parametrized affinely over the
ergodic classes of the bisubstitution, and its extreme points K* are found
exactly when the hull is an interval or the instructions commute, and by a
semidefinite vertex search otherwise.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import cvxpy as cp
import numpy as np
import sympy
from scipy import linalg as sla

from scripts.Substitution import exact_linalg
from scripts.Substitution.structure_analysis import ergodic_decomposition, structural_predicates
from scripts.Substitution.substitution_core import bisubstitution, coincidence_matrix
from scripts.Substitution.substitution_errors import AnalysisPreconditionError, SubstitutionInputError

logger = logging.getLogger("SpectralHull")

METHODS = ("auto", "exact-1d", "commutative-exact", "numeric", "verify-candidates")

NUMERIC_CAVEAT = "method: numeric, completeness not certified"

# interior point solver, used when installed
SDP_SOLVER = "CLARABEL"


class HullVector:
    """
    A vector over the bialphabet together with its associated s×s matrix

    Entries are sympy numbers when exact and Python complex numbers otherwise.
    """

    def __init__(self, entries, s, exact=True):
        self.entries = list(entries)
        self.s = s
        self.exact = exact

    @property
    def is_rational(self):
        return self.exact and exact_linalg.is_rational_vector(self.entries)

    def associated_matrix(self):
        """v̊ with v̊[a, b] = v_ab"""
        if self.exact:
            return exact_linalg.vec_to_square(self.entries, self.s)
        return np.array(self.entries, dtype=complex).reshape(self.s, self.s)

    def to_numpy(self):
        return exact_linalg.to_complex_array(self.entries)

    def is_all_ones(self, tolerance=1e-9):
        if self.exact:
            return all(sympy.simplify(x - 1) == 0 for x in self.entries)
        return bool(np.allclose(self.to_numpy(), 1, atol=tolerance))

    def to_strings(self):
        return [exact_linalg.format_exact(x) for x in self.entries]

    def sort_key(self):
        values = self.to_numpy()
        return (not self.is_all_ones(),) + tuple((round(x.real, 9), round(x.imag, 9)) for x in values)

    def __repr__(self):
        return f"HullVector({self.to_strings()})"


class HullParametrization:
    """
    Affine map t -> v0 + sum_i t_i D_i onto the self-adjoint, normalized
    Q-eigenvectors of C_S^t; every real t gives a candidate, the hull is the
    set where v̊ is positive semidefinite.
    """

    def __init__(self, substitution, weights, base, directions, parameters, decomposition, coincidence,
                 vanishing=None):
        self.substitution = substitution
        self.weights = weights
        self.base = base
        self.directions = directions
        self.parameters = parameters
        self.decomposition = decomposition
        self.coincidence = coincidence
        self.vanishing = vanishing or []
        logger.info(f"HullParametrization initialized with {self.dimension} free parameter(s)")

    @property
    def s(self):
        return self.substitution.s

    @property
    def dimension(self):
        return len(self.directions)

    def vector(self, t):
        """Exact candidate vector at parameter values t"""
        entries = sympy.Matrix(self.base)
        for value, direction in zip(t, self.directions):
            entries += sympy.sympify(value) * direction
        return HullVector([sympy.nsimplify(x) if x.is_Float else sympy.expand(x) for x in entries], self.s)

    def numeric_vector(self, t):
        values = exact_linalg.to_complex_array(self.base)
        for value, direction in zip(t, self.directions):
            values = values + complex(value) * exact_linalg.to_complex_array(direction)
        return HullVector(values.tolist(), self.s, exact=False)

    def associated_matrices(self):
        """(E0, [E_1, ...]) as complex numpy arrays"""
        base = exact_linalg.to_complex_array(self.base).reshape(self.s, self.s)
        return base, [exact_linalg.to_complex_array(d).reshape(self.s, self.s) for d in self.directions]

    @property
    def is_real(self):
        return all(sympy.sympify(x).is_real for d in self.directions for x in d) and \
            all(sympy.sympify(x).is_real for x in self.base)

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "parameters": self.parameters,
            "vanishing": self.vanishing,
            "base": [exact_linalg.format_exact(x) for x in self.base],
        }


def transpose_index(s):
    """Permutation of pair ids ab -> ba"""
    return [b * s + a for a in range(s) for b in range(s)]


def transpose_pairing(decomposition, s):
    """
    Pair every bisubstitution class with the class of its transposed pairs

    Args:
        decomposition: ErgodicDecomposition of S (x) S
        s: alphabet size of S

    Returns:
        list where entry i is the index of the transpose class of class i
    """
    swap = transpose_index(s)
    lookup = {frozenset(c): i for i, c in enumerate(decomposition.classes)}
    pairing = []
    for letters in decomposition.classes:
        image = frozenset(swap[x] for x in letters)
        if image not in lookup:
            raise AnalysisPreconditionError(f"transpose of class {list(letters)} is not an ergodic class")
        pairing.append(lookup[image])
    return pairing


def is_diagonal_class(letters, s):
    return all(x // s == x % s for x in letters)


def hull_parametrization(S, weights):
    """
    Parametrize the normalized self-adjoint left Q-eigenvectors of C_S

    Each ergodic class F of S (x) S contributes
    b_F = V_F - (QI - C^t P_T)^{-1} (QI - C^t) V_F, where V_F indicates F and
    P_T projects onto the transient pairs. Diagonal classes carry the
    normalization, transpose-paired classes share one complex parameter.

    A class whose pairs join letters of two different ergodic classes of S
    has zero correlation under every invariant measure. Its parameter is
    fixed at 0, which restricts the hull to the face with the same measures
    λ_v; the fixed classes are listed in `vanishing`.
    """
    s, Q = S.s, S.Q
    decomposition = ergodic_decomposition(bisubstitution(S))
    if decomposition.index_h != 1:
        raise AnalysisPreconditionError("bisubstitution has index > 1; telescope the substitution first")
    coincidence = coincidence_matrix(S)
    ct = coincidence.T
    size = s * s
    transient = sympy.zeros(size, size)
    for x in decomposition.transient:
        transient[x, x] = 1
    system = Q * sympy.eye(size) - ct * transient
    if not exact_linalg.is_invertible(system):
        raise AnalysisPreconditionError("QI - C^t P_T is singular; the input is not properly telescoped")

    indicators = []
    for letters in decomposition.classes:
        vector = sympy.zeros(size, 1)
        for x in letters:
            vector[x] = 1
        indicators.append(vector)
    stacked = sympy.Matrix.hstack(*indicators)
    corrections = exact_linalg.solve(system, (Q * sympy.eye(size) - ct) * stacked)
    b = [indicators[i] - corrections[:, i] for i in range(len(indicators))]

    pairing = transpose_pairing(decomposition, s)
    pair_names = S.alphabet.pairs()
    names = [[pair_names[x] for x in c] for c in decomposition.classes]

    diagonal = [i for i, c in enumerate(decomposition.classes) if is_diagonal_class(c, s)]
    masses = [sum(weights[x // s] for x in decomposition.classes[i]) for i in diagonal]
    base = sympy.zeros(size, 1)
    for i in diagonal:
        base += b[i]

    letter_class = ergodic_decomposition(S).class_of()
    vanishing = [i for i, c in enumerate(decomposition.classes)
                 if letter_class.get(c[0] // s) != letter_class.get(c[0] % s)]

    directions, parameters = [], []
    first = diagonal[0]
    for i, mass in zip(diagonal[1:], masses[1:]):
        directions.append(b[i] / mass - b[first] / masses[0])
        parameters.append({"kind": "diagonal-weight", "classes": [names[i], names[first]]})
    for i, letters in enumerate(decomposition.classes):
        if i in diagonal or i in vanishing or pairing[i] < i:
            continue
        if pairing[i] == i:
            directions.append(b[i])
            parameters.append({"kind": "real", "classes": [names[i]]})
        else:
            j = pairing[i]
            directions.append(b[i] + b[j])
            parameters.append({"kind": "real-part", "classes": [names[i], names[j]]})
            directions.append(sympy.I * (b[i] - b[j]))
            parameters.append({"kind": "imaginary-part", "classes": [names[i], names[j]]})
    if vanishing:
        logger.info(f"{len(vanishing)} class(es) across letter classes fixed at 0")
    return HullParametrization(S, weights, base, directions, parameters, decomposition, coincidence,
                               vanishing=[names[i] for i in vanishing])


class MembershipCertificate:
    """Itemized outcome of a hull membership check"""

    def __init__(self, eigenvector, self_adjoint, positive_semidefinite, normalized, min_eigenvalue):
        self.eigenvector = eigenvector
        self.self_adjoint = self_adjoint
        self.positive_semidefinite = positive_semidefinite
        self.normalized = normalized
        self.min_eigenvalue = min_eigenvalue

    @property
    def is_member(self):
        return self.eigenvector and self.self_adjoint and self.positive_semidefinite and self.normalized

    def __bool__(self):
        return self.is_member

    def failures(self):
        return [name for name in ("eigenvector", "self_adjoint", "positive_semidefinite", "normalized")
                if not getattr(self, name)]

    def to_dict(self):
        return {
            "member": self.is_member,
            "eigenvector": self.eigenvector,
            "self_adjoint": self.self_adjoint,
            "positive_semidefinite": self.positive_semidefinite,
            "normalized": self.normalized,
            "min_eigenvalue": self.min_eigenvalue,
        }


def verify_membership(v, S, weights, tolerance=1e-9, coincidence=None):
    """
    Check C_S^t v = Qv, v̊ = v̊^*, v̊ PSD and sum_a v_aa u_a = 1

    Rational vectors are checked exactly (PSD through the characteristic
    polynomial); anything else in floating point within tolerance.
    """
    s, Q = S.s, S.Q
    coincidence = coincidence if coincidence is not None else coincidence_matrix(S)
    u = [weights[a] for a in range(s)]
    if v.is_rational:
        vector = sympy.Matrix(v.entries)
        matrix = v.associated_matrix()
        eigenvector = coincidence.T * vector == Q * vector
        self_adjoint = matrix == matrix.T
        normalized = sum(vector[a * s + a] * u[a] for a in range(s)) == 1
        psd = bool(self_adjoint and exact_linalg.charpoly_signs_psd(matrix))
        smallest = exact_linalg.hermitian_min_eigenvalue(np.array(matrix.tolist(), dtype=float))
    else:
        vector = v.to_numpy()
        matrix = vector.reshape(s, s)
        ct = np.array(coincidence.T.tolist(), dtype=float)
        eigenvector = bool(np.allclose(ct @ vector, Q * vector, atol=tolerance))
        self_adjoint = bool(np.allclose(matrix, matrix.conj().T, atol=tolerance))
        weights_float = np.array([float(x) for x in u])
        normalized = bool(abs(np.dot(np.diag(matrix), weights_float) - 1) <= tolerance)
        smallest = exact_linalg.hermitian_min_eigenvalue(matrix)
        psd = smallest >= -tolerance
    return MembershipCertificate(bool(eigenvector), bool(self_adjoint), bool(psd), bool(normalized), smallest)


def is_extreme(parametrization, v, tolerance=1e-7):
    """
    Face-dimension test: v is extreme when no hull direction D has D N = 0,
    N spanning the null space of v̊
    """
    if parametrization.dimension == 0:
        return True
    matrix = v.to_numpy().reshape(v.s, v.s)
    matrix = (matrix + matrix.conj().T) / 2
    null = sla.null_space(matrix, rcond=tolerance)
    if null.shape[1] == 0:
        return False
    _, directions = parametrization.associated_matrices()
    columns = []
    for direction in directions:
        image = (direction @ null).ravel()
        columns.append(np.concatenate([image.real, image.imag]))
    return np.linalg.matrix_rank(np.column_stack(columns), tol=tolerance) == parametrization.dimension


class HullEnumeration:
    """Extreme points found by one method, with completeness flags and diagnostics"""

    def __init__(self, points, method, complete=True, caveats=None, diagnostics=None, certificates=None):
        self.points = sorted(points, key=lambda v: v.sort_key())
        self.method = method
        self.complete = complete
        self.caveats = caveats or []
        self.diagnostics = diagnostics or []
        self.certificates = certificates or []

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, index):
        return self.points[index]

    def to_dict(self):
        return {
            "method": self.method,
            "complete": self.complete,
            "caveats": self.caveats,
            "diagnostics": self.diagnostics,
            "points": [v.to_strings() for v in self.points],
        }


def _real_roots(polynomials):
    """Distinct real roots of all polynomials, rational representatives preferred"""
    roots = []
    for polynomial in polynomials:
        if polynomial.is_zero or polynomial.degree() < 1:
            continue
        for r in polynomial.real_roots():
            match = [i for i, x in enumerate(roots) if abs(float(sympy.N(x - r, 50))) < 1e-30]
            if not match:
                roots.append(r)
            elif r.is_Rational and not roots[match[0]].is_Rational:
                roots[match[0]] = r
    return sorted(roots, key=lambda r: float(sympy.N(r, 30)))


def _sign_at(polynomial, value):
    if polynomial.is_zero:
        return 0
    result = polynomial.as_expr().subs(polynomial.gens[0], value)
    if sympy.sympify(value).is_Rational:
        return sympy.sign(result)
    numeric = sympy.N(result, 60)
    return 0 if abs(numeric) < sympy.Float("1e-40") else sympy.sign(numeric)


def interval_extreme_points(parametrization):
    """
    Exact endpoints of the feasible interval of a one-parameter real hull

    v̊(w) = A + wB is PSD exactly when the coefficients of det(tI - v̊(w))
    alternate in sign; every endpoint is a real root of one of them.
    """
    w, t = sympy.Symbol("w", real=True), sympy.Symbol("t")
    base = exact_linalg.vec_to_square(parametrization.base, parametrization.s)
    direction = exact_linalg.vec_to_square(parametrization.directions[0], parametrization.s)
    coefficients = [sympy.Poly(sympy.expand(c), w) for c in (base + w * direction).charpoly(t).all_coeffs()]

    def feasible(value):
        return all((-1) ** i * _sign_at(c, value) >= 0 for i, c in enumerate(coefficients))

    roots = _real_roots(coefficients)
    if not roots:
        raise AnalysisPreconditionError("hull is unbounded or empty: no boundary in the single parameter")
    outer = [roots[0] - 1, roots[-1] + 1]
    if any(feasible(x) for x in outer):
        raise AnalysisPreconditionError("hull is unbounded in its single parameter")
    midpoints = [(a + b) / 2 for a, b in zip(roots, roots[1:])]
    feasible_points = [r for r in roots if feasible(r)]
    if not feasible_points:
        raise AnalysisPreconditionError("hull is empty: no feasible parameter value")
    low, high = feasible_points[0], feasible_points[-1]
    for m in midpoints:
        if float(sympy.N(low)) < float(sympy.N(m)) < float(sympy.N(high)) and not feasible(m):
            raise AnalysisPreconditionError("feasible set is not an interval; the parametrization is inconsistent")
    return [low] if low == high else [low, high]


def joint_eigenvectors(S, seed=0, tolerance=1e-9):
    """
    Joint eigenvectors of commuting permutation instructions

    Returns (vectors, degenerate) where degenerate marks repeated joint
    eigenvalues, in which case the hull has infinitely many extreme points.
    """
    maps = S.instruction_maps()
    matrices = []
    for letter_map in maps:
        matrix = np.zeros((S.s, S.s))
        matrix[np.asarray(letter_map), np.arange(S.s)] = 1
        matrices.append(matrix)
    rng = np.random.default_rng(seed)
    combination = sum(x * m for x, m in zip(rng.standard_normal(len(matrices)), matrices))
    _, vectors = np.linalg.eig(combination)
    signatures = []
    for p in vectors.T:
        signatures.append(np.array([np.vdot(p, m @ p) / np.vdot(p, p) for m in matrices]))
    degenerate = any(np.allclose(a, b, atol=tolerance)
                     for i, a in enumerate(signatures) for b in signatures[i + 1:])
    return [p for p in vectors.T], degenerate


def _snap_complex(value, max_denominator, tolerance):
    real = exact_linalg.snap_rational(value.real, max_denominator, tolerance)
    imag = exact_linalg.snap_rational(value.imag, max_denominator, tolerance)
    if real is None or imag is None:
        return None
    return real + sympy.I * imag if imag != 0 else real


def snap_vector(values, s, max_denominator, tolerance):
    """Exact HullVector when every entry is a simple rational (complex allowed)"""
    snapped = [_snap_complex(complex(x), max_denominator, tolerance) for x in values]
    if any(x is None for x in snapped):
        return None
    return HullVector(snapped, s)


def commutative_extreme_points(parametrization, seed=0, tolerance=1e-9, precision=1e-12, max_denominator=1000):
    """
    Extreme points c·p p^* from the joint eigenvectors p of the instructions,
    with c = 1 / sum_a |p_a|^2 u_a

    precision bounds the floating error of the eigen decomposition: joint
    eigenvalues closer than it count as repeated, and entries snap to rationals
    only within it. tolerance is the acceptance tolerance of the membership check.
    """
    S = parametrization.substitution
    u = np.array([float(parametrization.weights[a]) for a in range(S.s)])
    vectors, degenerate = joint_eigenvectors(S, seed=seed, tolerance=precision)
    points = []
    for p in vectors:
        anchor = p[np.argmax(np.abs(p))]
        p = p * (abs(anchor) / anchor)
        scale = 1.0 / float(np.dot(np.abs(p) ** 2, u))
        matrix = scale * np.outer(p, p.conj())
        exact = snap_vector(matrix.ravel(), S.s, max_denominator, precision)
        if exact is not None and verify_membership(exact, S, parametrization.weights, tolerance,
                                                   parametrization.coincidence):
            points.append(exact)
        else:
            points.append(HullVector(matrix.ravel().tolist(), S.s, exact=False))
    return points, degenerate


def _embed(matrix):
    """Real symmetric embedding of a Hermitian matrix"""
    return np.block([[matrix.real, -matrix.imag], [matrix.imag, matrix.real]])


def _maximize(parametrization, objective):
    base, directions = parametrization.associated_matrices()
    size = 2 * parametrization.s
    t = cp.Variable(parametrization.dimension)
    X = cp.Variable((size, size), symmetric=True)
    expression = _embed(base)
    for i, direction in enumerate(directions):
        expression = expression + t[i] * _embed(direction)
    problem = cp.Problem(cp.Maximize(t @ objective), [X == expression, X >> 0])
    problem.solve(solver=SDP_SOLVER if SDP_SOLVER in cp.installed_solvers() else None)
    return problem.status, None if t.value is None else np.array(t.value)


def _cluster(optima, tolerance):
    """Group parameter vectors lying within tolerance of a cluster's first member"""
    clusters = []
    for objective, t in optima:
        for cluster in clusters:
            if np.max(np.abs(cluster[0][1] - t)) <= tolerance:
                cluster.append((objective, t))
                break
        else:
            clusters.append([(objective, t)])
    return clusters


def numeric_extreme_points(parametrization, objectives=24, seed=0, tolerance=1e-9, snap_tolerance=1e-6,
                           max_denominator=1000, jobs=1):
    """
    Vertex search over the spectrahedron by maximizing linear objectives

    Objectives are ±e_i followed by seeded random directions. Optima within
    snap_tolerance of each other form one cluster; its mean is snapped to
    simple rationals and kept exact when the exact membership check confirms
    it. Clusters failing the face-dimension test are dropped. A kept point
    that stays floating is uncertified and makes the result incomplete.

    Returns:
        (points, complete, diagnostics)
    """
    m = parametrization.dimension
    rng = np.random.default_rng(seed)
    directions = [sign * np.eye(m)[i] for i in range(m) for sign in (1, -1)]
    while len(directions) < max(objectives, 2 * m):
        directions.append(rng.standard_normal(m))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda c: _maximize(parametrization, c), directions))
    else:
        outcomes = [_maximize(parametrization, c) for c in directions]

    S = parametrization.substitution
    optima, diagnostics, complete = [], [], True
    for objective, (status, t) in zip(directions, outcomes):
        if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or t is None:
            complete = False
            diagnostics.append(f"objective {np.round(objective, 6).tolist()}: solver status {status}")
        else:
            optima.append((objective, t))

    points = []
    for cluster in _cluster(optima, snap_tolerance):
        t = np.mean([x for _, x in cluster], axis=0)
        label = f"objective {np.round(cluster[0][0], 6).tolist()}"
        snapped = [exact_linalg.snap_rational(x, max_denominator, snap_tolerance) for x in t]
        candidate = None
        if all(x is not None for x in snapped):
            candidate = parametrization.vector(snapped)
            if not verify_membership(candidate, S, parametrization.weights, tolerance, parametrization.coincidence):
                candidate = None
        if candidate is None:
            candidate = parametrization.numeric_vector(t)
        if not is_extreme(parametrization, candidate):
            diagnostics.append(f"{label}: optimum is not an extreme point")
            continue
        if candidate.exact and any(p.exact and p.entries == candidate.entries for p in points):
            continue
        if not candidate.exact:
            complete = False
            diagnostics.append(f"{label}: optimum {np.round(t, 6).tolist()} could not be certified exactly")
        points.append(candidate)
    logger.info(f"Numeric search kept {len(points)} of {len(optima)} optima")
    return points, complete, diagnostics


def parse_candidate(entries, s):
    """Candidate from strings or numbers; sympy syntax, I for the imaginary unit"""
    if len(entries) != s * s:
        raise SubstitutionInputError(f"hull candidate needs {s * s} entries, found {len(entries)}")
    values = [sympy.sympify(x) for x in entries]
    if all(x.is_number for x in values):
        return HullVector(values, s)
    raise SubstitutionInputError("hull candidate entries must be numbers")


def choose_method(parametrization, candidates=None):
    if candidates:
        return "verify-candidates"
    if parametrization.dimension == 0:
        return "exact-1d"
    if parametrization.dimension == 1 and parametrization.is_real:
        return "exact-1d"
    predicates = structural_predicates(parametrization.substitution)
    if predicates["bijective"] and predicates["commutative"]:
        return "commutative-exact"
    return "numeric"


def extreme_points(parametrization, method="auto", candidates=None, psd_tolerance=1e-9,
                   working_precision=1e-12, objectives=24, seed=0, max_denominator=1000, jobs=1):
    """
    Extreme points K* of the hull, all-ones vector first

    Args:
        parametrization: HullParametrization
        method: one of METHODS
        candidates: list of HullVector (verify-candidates)
        psd_tolerance: acceptance tolerance of the floating checks
        working_precision: floating precision of the joint eigenvectors (commutative-exact)
        objectives: number of linear objectives for the numeric search
        seed: seed of the random objectives and eigen-combinations
        max_denominator: largest denominator tried when snapping to rationals
        jobs: parallel solver runs for the numeric search

    Returns:
        HullEnumeration
    """
    if method not in METHODS:
        raise SubstitutionInputError(f"unknown hull method '{method}', expected one of {list(METHODS)}")
    if method == "auto":
        method = choose_method(parametrization, candidates)
    S = parametrization.substitution
    logger.info(f"Enumerating extreme points of the spectral hull of {S.name} with method {method}")

    if parametrization.dimension == 0 and method != "verify-candidates":
        return HullEnumeration([parametrization.vector([])], method)

    if method == "exact-1d":
        if parametrization.dimension != 1 or not parametrization.is_real:
            raise AnalysisPreconditionError(
                f"exact-1d needs one real parameter, hull has dimension {parametrization.dimension}")
        points = [parametrization.vector([w]) for w in interval_extreme_points(parametrization)]
        return HullEnumeration(points, method)

    if method == "commutative-exact":
        predicates = structural_predicates(S)
        if not (predicates["bijective"] and predicates["commutative"]):
            raise AnalysisPreconditionError("commutative-exact needs a bijective commutative substitution")
        points, degenerate = commutative_extreme_points(parametrization, seed=seed, tolerance=psd_tolerance,
                                                        precision=working_precision,
                                                        max_denominator=max_denominator)
        diagnostics, complete = [], True
        if degenerate:
            complete = False
            diagnostics.append("repeated joint eigenvalues: the hull has infinitely many extreme points")
        elif len(points) != parametrization.dimension + 1:
            complete = False
            diagnostics.append(f"found {len(points)} joint eigenvectors for a hull of dimension "
                               f"{parametrization.dimension}")
        if not complete:
            logger.warning(f"Hull enumeration for {S.name} is incomplete: {diagnostics[-1]}")
        return HullEnumeration(points, method, complete=complete, diagnostics=diagnostics)

    if method == "numeric":
        logger.warning(f"Numeric vertex search for {S.name}; completeness is not certified")
        points, complete, diagnostics = numeric_extreme_points(
            parametrization, objectives=objectives, seed=seed, tolerance=psd_tolerance,
            max_denominator=max_denominator, jobs=jobs)
        if not complete:
            logger.warning(f"Hull enumeration for {S.name} is incomplete: {diagnostics[-1]}")
        return HullEnumeration(points, method, complete=complete, caveats=[NUMERIC_CAVEAT],
                               diagnostics=diagnostics)

    points, diagnostics, certificates = [], [], []
    for candidate in candidates or []:
        certificate = verify_membership(candidate, S, parametrization.weights, psd_tolerance,
                                        parametrization.coincidence)
        extreme = bool(certificate) and is_extreme(parametrization, candidate)
        certificates.append(dict(certificate.to_dict(), extreme=extreme))
        if extreme:
            points.append(candidate)
        else:
            diagnostics.append(f"candidate {candidate.to_strings()} rejected: "
                               f"{certificate.failures() or ['not extreme']}")
    return HullEnumeration(points, method,
                           caveats=["candidates verified individually; other extreme points may exist"],
                           diagnostics=diagnostics, certificates=certificates)
