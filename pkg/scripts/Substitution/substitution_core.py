"""
Constant-Shape Substitution Core

Represents a q-substitution as a configuration of instructions j -> R_j on a
finite alphabet, and builds what the spectral analysis needs from it:
instruction and generalized instruction matrices, superblock expansions,
the substitution matrix M_S, the coincidence matrix C_S and substitution
products.

Conventions used throughout the package:
    - letters are interned to ids 0..s-1 in alphabet order
    - a block over [0, q) is stored flat, lexicographically in j with the last
      coordinate varying fastest
    - R_j[a, g] = 1 exactly when a = S(g)(j), so every column holds one 1
    - R_j^(n) = R_{j_0} R_{j_1} ... R_{j_{n-1}} over the q-adic digits of j
    - (A (x) B) sends e_{gd} to e_{A(g) B(d)}; pairs gd are ordered g first
"""

import logging

import numpy as np
import sympy

from scripts.Substitution import zd_arith
from scripts.Substitution.substitution_errors import CellBudgetExceeded, SubstitutionInputError

logger = logging.getLogger("SubstitutionCore")

DEFAULT_CELL_BUDGET = 2 ** 26

APERIODICITY_POLICIES = ("check-pansiot", "asserted", "unknown")


class Alphabet:
    """Ordered set of letter names; the order fixes every matrix index"""

    def __init__(self, letters):
        letters = tuple(str(a) for a in letters)
        if len(letters) < 2:
            raise SubstitutionInputError(f"alphabet needs at least 2 letters, got {len(letters)}")
        if len(set(letters)) != len(letters):
            raise SubstitutionInputError("alphabet entries must be unique")
        self.letters = letters
        self.s = len(letters)
        self._ids = {a: i for i, a in enumerate(letters)}

    def id(self, letter):
        try:
            return self._ids[str(letter)]
        except KeyError:
            raise SubstitutionInputError(f"unknown letter '{letter}'") from None

    def name(self, letter_id):
        return self.letters[letter_id]

    def pairs(self):
        """Bialphabet names in lexicographic order"""
        return [pair_name(a, b, self.letters) for a in self.letters for b in self.letters]

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return self.s

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __repr__(self):
        return f"Alphabet({list(self.letters)})"


def pair_name(a, b, letters=None):
    """Name of a product letter: plain concatenation when every name is one character"""
    if letters is None or all(len(x) == 1 for x in letters):
        if len(a) == 1 and len(b) == 1:
            return f"{a}{b}"
    return f"{a}:{b}"


class Block:
    """Letters placed on a finite box [0, shape); cells are letter ids"""

    def __init__(self, cells, alphabet):
        self.cells = np.asarray(cells)
        self.alphabet = alphabet

    @property
    def shape(self):
        return self.cells.shape

    @property
    def support(self):
        return zd_arith.box(self.cells.shape)

    def __getitem__(self, j):
        return self.alphabet.name(int(self.cells[zd_arith.as_point(j, self.cells.ndim)]))

    def word(self):
        """Cells as a string in block order (d = 1: the word itself)"""
        return "".join(self.alphabet.name(int(x)) for x in self.cells.ravel())

    def __repr__(self):
        return f"Block(shape={self.shape}, cells='{self.word()}')"


class Substitution:
    """
    A q-substitution: every letter is replaced by a block supported on [0, q)

    Args:
        q: expansion vector (sequence of ints >= 2)
        alphabet: sequence of letter names or an Alphabet
        rules: mapping letter name -> list of Q letter names in block order
        aperiodicity: one of APERIODICITY_POLICIES, as declared by the input file
        name: optional label used in reports
    """

    def __init__(self, q, alphabet, rules, aperiodicity="unknown", name=None):
        self.expansion = zd_arith.as_expansion(q)
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        if aperiodicity not in APERIODICITY_POLICIES:
            raise SubstitutionInputError(
                f"aperiodicity policy must be one of {list(APERIODICITY_POLICIES)}, got '{aperiodicity}'")
        self.aperiodicity = aperiodicity
        self.name = name or "substitution"

        table = np.zeros((self.s, self.Q), dtype=np.int64)
        for letter in self.alphabet:
            if letter not in rules:
                raise SubstitutionInputError(f"rule '{letter}': missing")
            cells = list(rules[letter])
            if len(cells) != self.Q:
                raise SubstitutionInputError(f"rule '{letter}': expected {self.Q} cells, found {len(cells)}")
            table[self.alphabet.id(letter)] = [self.alphabet.id(c) for c in cells]
        self.table = table
        self.table.setflags(write=False)
        self._generalized = {}

    @classmethod
    def from_table(cls, q, alphabet, table, aperiodicity="unknown", name=None):
        """Build from an (s, Q) array of letter ids"""
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        table = np.asarray(table, dtype=np.int64)
        rules = {a: [alphabet.name(int(x)) for x in table[i]] for i, a in enumerate(alphabet)}
        return cls(q, alphabet, rules, aperiodicity=aperiodicity, name=name)

    @property
    def q(self):
        return self.expansion.q

    @property
    def Q(self):
        return self.expansion.Q

    @property
    def d(self):
        return self.expansion.d

    @property
    def s(self):
        return self.alphabet.s

    def rules(self):
        """Rules as letter name -> list of letter names"""
        return {a: [self.alphabet.name(int(x)) for x in self.table[i]] for i, a in enumerate(self.alphabet)}

    def block(self, letter):
        """S(letter) as a Block of shape q"""
        return Block(self.table[self.alphabet.id(letter)].reshape(self.q), self.alphabet)

    def instruction_map(self, j):
        """R_j as an array of letter ids: R_j[g] = S(g)(j), j reduced mod q"""
        remainder, _ = zd_arith.divmod_qn(j, self.expansion, 1)
        return self.table[:, int(np.ravel_multi_index(remainder, self.q))]

    def instruction_maps(self):
        """All instructions as an (Q, s) array, rows in block order"""
        return self.table.T

    def generalized_maps(self, n):
        """
        All generalized instructions R_j^(n) for j in [0, q^n) as a (Q^n, s) array

        Row j (block order over [0, q^n)) maps g to (S^n g)(j).
        """
        if n not in self._generalized:
            maps = np.stack([expand_cells(self, g, n).ravel() for g in range(self.s)], axis=1)
            maps.setflags(write=False)
            self._generalized[n] = maps
        return self._generalized[n]

    def __eq__(self, other):
        return (isinstance(other, Substitution) and self.q == other.q
                and self.alphabet == other.alphabet and np.array_equal(self.table, other.table))

    def __repr__(self):
        return f"Substitution(name='{self.name}', q={list(self.q)}, s={self.s})"


def map_matrix(letter_map, s):
    """0/1 matrix of a letter map: column g has its 1 in row letter_map[g]"""
    matrix = np.zeros((s, s), dtype=np.int64)
    matrix[np.asarray(letter_map), np.arange(s)] = 1
    return matrix


def instruction(S, j):
    """Instruction matrix R_j (j reduced mod q)"""
    j = zd_arith.as_point(j, S.d)
    return map_matrix(S.instruction_map(j), S.s)


def generalized_instruction(S, j, n):
    """R_j^(n) = R_{j_0} ... R_{j_{n-1}}; the identity when n = 0"""
    if n < 0:
        raise SubstitutionInputError(f"n must be nonnegative, got {n}")
    result = np.eye(S.s, dtype=np.int64)
    for digit in zd_arith.digits(j, S.expansion, n):
        result = result @ instruction(S, digit)
    return result


def check_budget(S, n, budget):
    cells = S.Q ** n
    if cells > budget:
        raise CellBudgetExceeded(cells, budget)
    return cells


def expand_cells(S, letter_id, n, budget=DEFAULT_CELL_BUDGET):
    """
    Letter ids of S^n(letter) as an array of shape q^n

    Each step replaces every cell by its rule block and interleaves the new
    digit below the old index: position j' q + i receives S(a)(i).
    """
    check_budget(S, n, budget)
    cells = np.full((1,) * S.d, letter_id, dtype=np.int64)
    blocks = S.table.reshape((S.s,) + S.q)
    for _ in range(n):
        grown = blocks[cells]
        d = S.d
        order = [axis for pair in zip(range(d), range(d, 2 * d)) for axis in pair]
        cells = grown.transpose(order).reshape(tuple(a * b for a, b in zip(cells.shape, S.q)))
    return cells


def expand(S, letter, n, budget=DEFAULT_CELL_BUDGET):
    """S^n(letter) as a Block over [0, q^n)"""
    if n < 0:
        raise SubstitutionInputError(f"n must be nonnegative, got {n}")
    letter_id = letter if isinstance(letter, (int, np.integer)) else S.alphabet.id(letter)
    return Block(expand_cells(S, int(letter_id), n, budget), S.alphabet)


def substitution_matrix(S):
    """M_S = sum of the instruction matrices, as an exact sympy Matrix"""
    counts = np.zeros((S.s, S.s), dtype=np.int64)
    for letter_map in S.instruction_maps():
        counts[letter_map, np.arange(S.s)] += 1
    return sympy.Matrix(counts.tolist())


def pair_transfer_counts(left_maps, right_maps, s):
    """
    Integer matrix of sum_j (L_j (x) R_j) for aligned stacks of letter maps

    Args:
        left_maps: (N, s) array of letter maps
        right_maps: (N, s) array of letter maps
        s: alphabet size

    Returns:
        (s^2, s^2) int64 array
    """
    left_maps = np.asarray(left_maps)
    right_maps = np.asarray(right_maps)
    counts = np.zeros((s * s, s * s), dtype=np.int64)
    if len(left_maps) == 0:
        return counts
    sources = np.arange(s * s)
    targets = (left_maps[:, :, None] * s + right_maps[:, None, :]).reshape(len(left_maps), s * s)
    np.add.at(counts, (targets, np.broadcast_to(sources, targets.shape)), 1)
    return counts


def coincidence_matrix(S):
    """C_S = sum_j R_j (x) R_j, indexed by the lexicographic bialphabet"""
    maps = S.instruction_maps()
    return sympy.Matrix(pair_transfer_counts(maps, maps, S.s).tolist())


def product(S, T, name=None):
    """
    Substitution product S (x) T on the product alphabet

    The j-th instruction of the product is the Kronecker product of the factors'
    j-th instructions.
    """
    if S.q != T.q:
        raise SubstitutionInputError(f"product needs a common expansion, got {list(S.q)} and {list(T.q)}")
    letters = [pair_name(a, b, S.alphabet.letters + T.alphabet.letters) for a in S.alphabet for b in T.alphabet]
    table = (S.table[:, None, :] * T.s + T.table[None, :, :]).reshape(S.s * T.s, S.Q)
    policy = "asserted" if S.aperiodicity == "asserted" or T.aperiodicity == "asserted" else "unknown"
    return Substitution.from_table(S.q, letters, table, aperiodicity=policy,
                                   name=name or f"{S.name}x{T.name}")


def bisubstitution(S):
    """S (x) S"""
    return product(S, S, name=f"{S.name}^2")


def relabel(S, mapping, name=None):
    """Rename letters through mapping old name -> new name, keeping the id order"""
    letters = [mapping[a] for a in S.alphabet]
    return Substitution.from_table(S.q, letters, S.table, aperiodicity=S.aperiodicity, name=name or S.name)
