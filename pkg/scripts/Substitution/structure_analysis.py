"""
Structure Analysis of q-Substitutions

Ergodic decomposition (primitive reduced form) from the letter-orbit digraph,
index of imprimitivity, telescoping, Perron vectors, spectral projections onto
the Q-eigenspace, the neighborhood test for aperiodicity and the bijective /
commutative predicates.
"""

import logging
import math

import networkx as nx
import numpy as np
import sympy
from scipy import linalg as sla

from scripts.Substitution import exact_linalg
from scripts.Substitution.substitution_core import (
    DEFAULT_CELL_BUDGET, Substitution, bisubstitution, check_budget, expand_cells, substitution_matrix)
from scripts.Substitution.substitution_errors import AnalysisPreconditionError, SubstitutionInputError
from scripts.Substitution.substitution_families import restrict

logger = logging.getLogger("StructureAnalysis")


class ErgodicDecomposition:
    """Ergodic classes, transient letters and index of imprimitivity of a substitution"""

    def __init__(self, alphabet, classes, transient, index_h):
        self.alphabet = alphabet
        self.classes = [tuple(sorted(c)) for c in classes]
        self.transient = tuple(sorted(transient))
        self.index_h = index_h

    def class_names(self):
        return [[self.alphabet.name(g) for g in c] for c in self.classes]

    def transient_names(self):
        return [self.alphabet.name(g) for g in self.transient]

    def class_of(self):
        """Letter id -> class index, transient letters omitted"""
        return {g: i for i, c in enumerate(self.classes) for g in c}

    @property
    def is_primitive(self):
        return len(self.classes) == 1 and not self.transient and self.index_h == 1

    def to_dict(self):
        return {
            "classes": self.class_names(),
            "transient": self.transient_names(),
            "index_of_imprimitivity": self.index_h,
        }

    def __repr__(self):
        return f"ErgodicDecomposition(classes={self.class_names()}, transient={self.transient_names()}, h={self.index_h})"


def letter_graph(S, n=1):
    """Digraph with an edge g -> a whenever a occurs in S^n(g)"""
    adjacency = np.zeros((S.s, S.s), dtype=bool)
    adjacency[np.repeat(np.arange(S.s), S.Q), S.table.ravel()] = True
    reach = np.eye(S.s, dtype=bool)
    for _ in range(n):
        reach = (reach.astype(np.int64) @ adjacency.astype(np.int64)) > 0
    graph = nx.DiGraph()
    graph.add_nodes_from(range(S.s))
    graph.add_edges_from(zip(*np.nonzero(reach)))
    return graph


def cyclic_period(graph, nodes):
    """gcd of the cycle lengths of a strongly connected node set"""
    sub = graph.subgraph(nodes)
    root = min(nodes)
    level = nx.single_source_shortest_path_length(sub, root)
    period = 0
    for u, v in sub.edges():
        period = math.gcd(period, level[u] + 1 - level[v])
    return period or 1


def ergodic_decomposition(S):
    """
    Final strongly connected components of the letter-orbit digraph

    The index of imprimitivity is the lcm of the cyclic periods of the final
    components; the classes are read off the digraph of S^h, where every class
    is primitive.
    """
    graph = letter_graph(S)
    finals = [sorted(c) for c in nx.attracting_components(graph)]
    index_h = math.lcm(*(cyclic_period(graph, c) for c in finals)) if finals else 1
    if index_h > 1:
        graph = letter_graph(S, index_h)
        finals = [sorted(c) for c in nx.attracting_components(graph)]
    classes = sorted(finals)
    recurrent = {g for c in classes for g in c}
    transient = [g for g in range(S.s) if g not in recurrent]
    decomposition = ErgodicDecomposition(S.alphabet, classes, transient, index_h)
    logger.info(f"{S.name}: {len(classes)} ergodic classes, {len(transient)} transient letters, index {index_h}")
    return decomposition


def index_from_eigenvalues(M, Q, tolerance=1e-8):
    """
    Floating cross-check of the index: least h with lambda^h = Q^h for every
    eigenvalue of modulus Q
    """
    values = sla.eigvals(np.array(M.tolist(), dtype=float))
    peripheral = [v for v in values if abs(abs(v) - Q) < tolerance * max(Q, 1)]
    index_h = 1
    for v in peripheral:
        turn = sympy.Rational(float(np.angle(v) / (2 * np.pi))).limit_denominator(len(values))
        index_h = math.lcm(index_h, int(turn.q))
    return index_h


def telescope(S, h, budget=DEFAULT_CELL_BUDGET):
    """S^h as a q^h-substitution: its j-th instruction is R_j^(h)"""
    if h < 1:
        raise SubstitutionInputError(f"telescoping exponent must be >= 1, got {h}")
    if h == 1:
        return S
    check_budget(S, h, budget)
    table = np.stack([expand_cells(S, g, h, budget).ravel() for g in range(S.s)])
    return Substitution.from_table(S.expansion.power(h), S.alphabet, table,
                                   aperiodicity=S.aperiodicity, name=f"{S.name}^{h}")


def analysis_exponent(S):
    """lcm of the indices of S and S (x) S"""
    return math.lcm(ergodic_decomposition(S).index_h, ergodic_decomposition(bisubstitution(S)).index_h)


def telescope_for_analysis(S, budget=DEFAULT_CELL_BUDGET):
    """Telescope so that both S and its bisubstitution have index 1"""
    h = analysis_exponent(S)
    if h > 1:
        logger.info(f"Telescoping {S.name} by {h} before spectral analysis")
    return telescope(S, h, budget), h


class InvariantWeights:
    """Cylinder weights u of the invariant measure, as exact rationals"""

    def __init__(self, u, class_coefficients, decomposition):
        self.u = u
        self.class_coefficients = class_coefficients
        self.decomposition = decomposition

    def __getitem__(self, letter_id):
        return self.u[letter_id]

    def __len__(self):
        return len(self.u)

    def to_dict(self):
        alphabet = self.decomposition.alphabet
        return {
            "u": {alphabet.name(g): str(x) for g, x in enumerate(self.u)},
            "class_coefficients": [str(c) for c in self.class_coefficients],
        }


def perron_vector(M, scale_value):
    """Exact probability vector spanning the nullspace of M - scale_value·I"""
    basis = exact_linalg.nullspace(M - scale_value * sympy.eye(M.shape[0]))
    if len(basis) != 1:
        raise AnalysisPreconditionError(
            f"expected a one-dimensional Perron eigenspace, found dimension {len(basis)}")
    vector = basis[0] / sum(basis[0])
    if any(x <= 0 for x in vector):
        raise AnalysisPreconditionError("Perron vector of an ergodic class is not strictly positive")
    return vector


def invariant_weights(S, class_coefficients="uniform", decomposition=None):
    """
    u = sum_j c_j u^(j), u^(j) the Perron probability vector of class E_j

    Perron vectors are taken for M_{S^h} = M_S^h restricted to each class, so the
    result satisfies M_{S^h} u = Q^h u; after telescoping to index 1 this is
    M_S u = Q u.
    """
    decomposition = decomposition or ergodic_decomposition(S)
    count = len(decomposition.classes)
    if class_coefficients in (None, "uniform"):
        coefficients = [sympy.Rational(1, count)] * count
    else:
        coefficients = [sympy.Rational(c) for c in class_coefficients]
        if len(coefficients) != count:
            raise SubstitutionInputError(f"expected {count} class weights, got {len(coefficients)}")
        if any(c <= 0 for c in coefficients) or sum(coefficients) != 1:
            raise SubstitutionInputError("class weights must be strictly positive and sum to 1")

    h = decomposition.index_h
    M = substitution_matrix(S) ** h
    u = [sympy.Integer(0)] * S.s
    for c, letters in zip(coefficients, decomposition.classes):
        block = M.extract(list(letters), list(letters))
        for g, x in zip(letters, perron_vector(block, S.Q ** h)):
            u[g] = c * x
    return InvariantWeights(u, coefficients, decomposition)


def q_eigen_projection(M, Q):
    """
    Projection onto the Q-eigenspace along the other generalized eigenspaces

    P = A (B A)^{-1} B with the columns of A spanning the right and the rows of B
    the left Q-eigenspace; P^2 = P and M P = P M = Q P.
    """
    M = sympy.Matrix(M)
    peripheral = [v for v in np.linalg.eigvals(np.array(M.tolist(), dtype=float))
                  if abs(abs(v) - Q) < 1e-8 * Q and abs(v - Q) > 1e-8 * Q]
    if peripheral:
        raise AnalysisPreconditionError(
            "matrix has eigenvalues of modulus Q other than Q; telescope by the index first")
    shifted = M - Q * sympy.eye(M.shape[0])
    right = exact_linalg.nullspace(shifted)
    left = exact_linalg.left_nullspace(shifted)
    if not right or len(right) != len(left):
        raise AnalysisPreconditionError("right and left Q-eigenspaces do not match")
    A = sympy.Matrix.hstack(*right)
    B = sympy.Matrix.vstack(*left)
    core = B * A
    if not exact_linalg.is_invertible(core):
        raise AnalysisPreconditionError("Q is not a semisimple eigenvalue; telescoping needed first")
    return A * exact_linalg.inverse(core) * B


class AperiodicityVerdict:
    """Outcome of the aperiodicity check with its witnesses"""

    STATUSES = ("aperiodic-verified", "asserted", "inapplicable", "unknown")

    def __init__(self, status, witness=None, explanation=""):
        if status not in self.STATUSES:
            raise ValueError(f"unknown aperiodicity status '{status}'")
        self.status = status
        self.witness = witness or []
        self.explanation = explanation

    @property
    def is_aperiodic(self):
        return self.status in ("aperiodic-verified", "asserted")

    def to_dict(self):
        return {"status": self.status, "witness": self.witness, "explanation": self.explanation}

    def __repr__(self):
        return f"AperiodicityVerdict({self.status}, witness={self.witness})"


def is_injective(S):
    return len({tuple(row) for row in S.table}) == S.s


def neighborhood_witness(S, depth, budget):
    """
    First letter seen with two distinct neighborhoods in the iterates S^n(g)

    Iterates n = 1..depth, letters in alphabet order, positions left to right.
    Returns (letter, [first, second]) or None.
    """
    seen = {}
    joiner = "" if all(len(a) == 1 for a in S.alphabet) else " "
    for n in range(1, depth + 1):
        if S.Q ** n > budget:
            logger.warning(f"Neighborhood search stopped at depth {n - 1}: cell budget reached")
            return None
        for g in range(S.s):
            word = expand_cells(S, g, n, budget).ravel()
            for i in range(1, len(word) - 1):
                triple = tuple(int(x) for x in word[i - 1:i + 2])
                known = seen.setdefault(triple[1], [])
                if triple not in known:
                    known.append(triple)
                if len(known) >= 2:
                    names = [joiner.join(S.alphabet.name(x) for x in t) for t in known[:2]]
                    return S.alphabet.name(triple[1]), names
    return None


def check_aperiodicity(S, decomposition=None, depth=8, budget=DEFAULT_CELL_BUDGET):
    """
    Neighborhood criterion for d = 1, applied to every primitive component

    The telescoped substitution restricted to each ergodic class must be
    injective; aperiodicity is verified when every component shows a letter
    with two distinct neighborhoods within the depth bound.
    """
    fallback = "asserted" if S.aperiodicity == "asserted" else None
    if S.d != 1:
        return AperiodicityVerdict(fallback or "unknown",
                                   explanation="no neighborhood criterion for d > 1; aperiodicity must be asserted")

    decomposition = decomposition or ergodic_decomposition(S)
    if decomposition.is_primitive:
        components = [S]
    else:
        powered = telescope(S, decomposition.index_h, budget)
        components = [restrict(powered, [S.alphabet.name(g) for g in c]) for c in decomposition.classes]

    witnesses = []
    for component in components:
        if not is_injective(component):
            return AperiodicityVerdict(
                fallback or "inapplicable",
                explanation=f"{component.name} is not one-to-one on letters; the neighborhood criterion does not apply")
        found = neighborhood_witness(component, depth, budget)
        if found is None:
            return AperiodicityVerdict(
                fallback or "unknown",
                explanation=f"no letter with two neighborhoods within depth {depth} for {component.name}")
        letter, neighborhoods = found
        witnesses.append({"letter": letter, "neighborhoods": neighborhoods,
                          "component": list(component.alphabet.letters)})
    logger.info(f"{S.name}: aperiodicity verified on {len(witnesses)} component(s)")
    return AperiodicityVerdict("aperiodic-verified", witness=witnesses,
                               explanation="letter with two distinct neighborhoods in every primitive component")


def structural_predicates(S):
    """bijective: all instructions permute letters; commutative: they pairwise commute"""
    maps = [np.asarray(m) for m in S.instruction_maps()]
    bijective = all(len(set(m.tolist())) == S.s for m in maps)
    commutative = all(np.array_equal(a[b], b[a]) for i, a in enumerate(maps) for b in maps[i + 1:])
    return {"bijective": bijective, "commutative": commutative}


def describe(S, budget=DEFAULT_CELL_BUDGET):
    """Structural summary used by the analyze command"""
    decomposition = ergodic_decomposition(S)
    bi_decomposition = ergodic_decomposition(bisubstitution(S))
    return {
        "decomposition": decomposition,
        "bisubstitution_decomposition": bi_decomposition,
        "eigenvalue_index": index_from_eigenvalues(substitution_matrix(S), S.Q),
        "predicates": structural_predicates(S),
    }
