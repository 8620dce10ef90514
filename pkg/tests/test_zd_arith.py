import pytest

from scripts.Substitution import zd_arith
from scripts.Substitution.substitution_errors import SubstitutionInputError


def test_divmod_examples():
    assert zd_arith.divmod_qn(12, (2,), 2) == ((0,), (3,))
    assert zd_arith.divmod_qn(-1, (2,), 3) == ((7,), (-1,))
    assert zd_arith.divmod_qn((5, 3), (2, 2), 1) == ((1, 1), (2, 1))


@pytest.mark.parametrize("q", [(2,), (3,), (2, 3)])
def test_divmod_reassembles(q):
    expansion = zd_arith.as_expansion(q)
    for n in range(5):
        for x in range(-20, 21):
            k = (x,) + tuple(x // 2 - 3 for _ in range(expansion.d - 1))
            remainder, quotient = zd_arith.divmod_qn(k, expansion, n)
            assert all(0 <= r < m for r, m in zip(remainder, expansion.power(n)))
            assert tuple(r + c * m for r, c, m in zip(remainder, quotient, expansion.power(n))) == k


def test_digits():
    assert zd_arith.digits(12, (2,), 4) == [(0,), (0,), (1,), (1,)]
    assert zd_arith.digits(0, (3,), 3) == [(0,), (0,), (0,)]
    assert zd_arith.digits(5, (3,), 2) == [(2,), (1,)]


def test_digits_extend_and_reassemble():
    for k in range(-30, 31):
        short = zd_arith.digits(k, (3,), 3)
        assert zd_arith.digits(k, (3,), 4)[:3] == short
        assert (sum(x * 3 ** i for i, (x,) in enumerate(short)),) == zd_arith.divmod_qn(k, (3,), 3)[0]


def test_power_of():
    assert zd_arith.power_of(0, (2,)) == 0
    assert zd_arith.power_of(5, (2,)) == 3
    assert zd_arith.power_of((1, 0), (2, 2)) == 1
    assert zd_arith.power_of(-4, (2,)) == 3


def test_carry_set_examples():
    assert zd_arith.carry_set(1, (2,), 1) == [(1,)]
    assert zd_arith.carry_set(1, (3,), 1) == [(2,)]
    assert zd_arith.carry_set((0, 0), (2, 2), 3) == []


def test_scalar_point_needs_dimension_one():
    assert zd_arith.as_point(5) == (5,)
    with pytest.raises(SubstitutionInputError, match="does not have dimension 2"):
        zd_arith.carry_set(0, (2, 2), 3)


@pytest.mark.parametrize("q,max_n", [((2,), 6), ((3,), 6), ((2, 2), 4), ((2, 3), 4), ((3, 3), 3)])
def test_carry_count_of_powers(q, max_n):
    expansion = zd_arith.as_expansion(q)
    for n in range(1, max_n + 1):
        for p in range(n + 1):
            k = expansion.power(p)
            expected = expansion.Q ** n
            staying = 1
            for m in expansion.q:
                staying *= m ** n - m ** p
            expected -= staying
            assert zd_arith.carry_count(k, expansion, n) == expected
            assert len(zd_arith.carry_set(k, expansion, n)) == expected


def test_carry_fraction_nonincreasing():
    for q in [(2,), (3,)]:
        for k in range(-8, 9):
            p = zd_arith.power_of(k, q)
            fractions = [zd_arith.carry_count(k, q, n) / q[0] ** n for n in range(max(p, 1), 9)]
            assert all(b <= a for a, b in zip(fractions, fractions[1:]))
    for k in [(1, 0), (-2, 3), (5, -8)]:
        p = zd_arith.power_of(k, (2, 2))
        fractions = [zd_arith.carry_count(k, (2, 2), n) / 4 ** n for n in range(p, 7)]
        assert all(b <= a for a, b in zip(fractions, fractions[1:]))


def test_lazy_membership_matches_materialised_set():
    carry = set(zd_arith.carry_set((3, -1), (2, 2), 3))
    for j in zd_arith.box((8, 8)):
        assert zd_arith.in_carry_set(j, (3, -1), (2, 2), 3) == (j in carry)


def test_large_carry_sets_are_not_materialised():
    with pytest.raises(SubstitutionInputError):
        zd_arith.carry_set(1, (2,), zd_arith.MATERIALISE_LIMIT + 1)
    assert zd_arith.in_carry_set((2 ** 12 - 1,), 1, (2,), 12)


def test_expansion_rejects_small_q():
    with pytest.raises(SubstitutionInputError):
        zd_arith.Expansion((2, 1))


def test_window_and_corners():
    assert len(zd_arith.window((2,), 3)) == 15
    assert zd_arith.corners(2)[0] == (0, 0)
    assert len(zd_arith.corners(2)) == 9
    assert [sum(1 for x in c if x) for c in zd_arith.corners(2)] == [0, 1, 1, 1, 1, 2, 2, 2, 2]
