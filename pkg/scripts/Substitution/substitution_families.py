"""
Named Substitution Families

Generators for substitutions that come in families rather than single files:
the height examples H_h, Frank-type substitutions built from Hadamard matrices,
configuration permutations and restrictions to closed letter sets.
"""

import itertools
import logging

import numpy as np

from scripts.Substitution import zd_arith
from scripts.Substitution.substitution_core import Substitution
from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("SubstitutionFamilies")


def height_substitution(h):
    """
    H_h on the letters Z^d / 2hZ^d with q = h + 1 and R_k: a -> a + k (mod 2h)

    Args:
        h: int or sequence of ints >= 1 (one per dimension)

    Letters are named by their residues in [0, 2h), joined with commas when d > 1.
    """
    h = zd_arith.as_point(h)
    if any(x < 1 for x in h):
        raise SubstitutionInputError(f"height must be >= 1 in every coordinate, got {list(h)}")
    modulus = tuple(2 * x for x in h)
    q = tuple(x + 1 for x in h)
    residues = list(zd_arith.box(modulus))
    names = [str(a[0]) if len(h) == 1 else ",".join(str(x) for x in a) for a in residues]
    ids = {a: i for i, a in enumerate(residues)}
    table = np.zeros((len(residues), int(np.prod(q))), dtype=np.int64)
    for a in residues:
        for cell, k in enumerate(zd_arith.box(q)):
            table[ids[a], cell] = ids[tuple((x + y) % m for x, y, m in zip(a, k, modulus))]
    label = "height-h" + "x".join(str(x) for x in h)
    return Substitution.from_table(q, names, table, aperiodicity="asserted", name=label)


def hadamard_substitution(hadamard, q, configuration=None):
    """
    Frank-type substitution from the induced instructions of a Q×Q Hadamard matrix

    The alphabet is {+1, -1, ..., +Q, -Q} (named "1", "-1", ...); instruction k
    sends a to sign(a)·H[|a|, k]·k. The configuration maps block cells (block
    order) to columns k; the identity configuration by default.
    """
    hadamard = np.asarray(hadamard, dtype=np.int64)
    size = hadamard.shape[0]
    if hadamard.shape != (size, size) or not np.isin(hadamard, (-1, 1)).all():
        raise SubstitutionInputError("Hadamard matrix must be square with entries ±1")
    if not np.array_equal(hadamard @ hadamard.T, size * np.eye(size, dtype=np.int64)):
        raise SubstitutionInputError("Hadamard matrix rows must be mutually orthogonal")
    expansion = zd_arith.as_expansion(q)
    if expansion.Q != size:
        raise SubstitutionInputError(f"Q = {expansion.Q} must equal the Hadamard size {size}")
    configuration = list(range(size)) if configuration is None else list(configuration)
    if sorted(configuration) != list(range(size)):
        raise SubstitutionInputError("configuration must be a permutation of the Hadamard columns")

    signed = [sign * k for k in range(1, size + 1) for sign in (1, -1)]
    names = [str(a) for a in signed]
    rules = {}
    for a in signed:
        sign, magnitude = (1 if a > 0 else -1), abs(a)
        rules[str(a)] = [str(sign * int(hadamard[magnitude - 1, k]) * (k + 1)) for k in configuration]
    return Substitution(expansion.q, names, rules, aperiodicity="asserted", name=f"hadamard-{size}")


def permute_configuration(S, permutation):
    """Move the instruction at block cell permutation[i] to cell i"""
    permutation = list(permutation)
    if sorted(permutation) != list(range(S.Q)):
        raise SubstitutionInputError(f"configuration permutation must rearrange all {S.Q} cells")
    return Substitution.from_table(S.q, S.alphabet, S.table[:, permutation],
                                   aperiodicity=S.aperiodicity, name=f"{S.name}-permuted")


def configurations(S):
    """Every rearrangement of the instructions of S, identity first"""
    for permutation in itertools.permutations(range(S.Q)):
        yield permute_configuration(S, permutation)


def restrict(S, letters, name=None):
    """Restriction of S to a letter set closed under S"""
    ids = sorted(S.alphabet.id(a) for a in letters)
    position = {g: i for i, g in enumerate(ids)}
    rows = S.table[ids]
    if not np.isin(rows, ids).all():
        raise SubstitutionInputError(f"letters {sorted(letters)} are not closed under {S.name}")
    table = np.vectorize(position.get)(rows)
    return Substitution.from_table(S.q, [S.alphabet.name(g) for g in ids], table,
                                   aperiodicity=S.aperiodicity, name=name or f"{S.name}|{len(ids)}")
