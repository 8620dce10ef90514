import numpy as np
import pytest
import sympy
from sympy import Rational as R

from scripts.Spectrum.spectral_hull import (
    NUMERIC_CAVEAT, HullVector, choose_method, extreme_points, hull_parametrization, is_extreme, parse_candidate,
    transpose_pairing, verify_membership)
from scripts.Substitution.structure_analysis import invariant_weights
from scripts.Substitution.substitution_errors import AnalysisPreconditionError, SubstitutionInputError
from scripts.Substitution.substitution_families import configurations


def vector(entries, s):
    return HullVector([sympy.sympify(x) for x in entries], s)


def character_matrix(m, s=6):
    return np.array([[np.exp(2j * np.pi * m * (a - b) / s) for b in range(s)] for a in range(s)])


def test_transpose_pairing(parametrized):
    tm = parametrized("thue-morse")
    assert transpose_pairing(tm.decomposition, 2) == [0, 1]
    h3 = parametrized("height-h3")
    pairing = transpose_pairing(h3.decomposition, 6)
    assert sorted(pairing) == list(range(6))
    assert all(pairing[pairing[i]] == i for i in range(6))


def test_parametrization_dimensions(parametrized):
    assert parametrized("thue-morse").dimension == 1
    assert parametrized("rudin-shapiro").dimension == 1
    assert parametrized("queffelec-zeta").dimension == 1
    assert parametrized("table").dimension == 1
    h3 = parametrized("height-h3")
    assert h3.dimension == 5
    assert not h3.is_real


def test_rudin_shapiro_transient_entries(parametrized):
    w = sympy.Symbol("w")
    entries = parametrized("rudin-shapiro").vector([w]).entries
    for pair in (1, 2, 4, 7, 8, 11, 13, 14):
        assert sympy.simplify(entries[pair] - (1 + w) / 2) == 0
    assert entries[0] == 1
    assert sympy.simplify(entries[3] - w) == 0


def test_choose_method(parametrized):
    assert choose_method(parametrized("thue-morse")) == "exact-1d"
    assert choose_method(parametrized("height-h3")) == "commutative-exact"
    assert choose_method(parametrized("thue-morse"), [vector([1, 1, 1, 1], 2)]) == "verify-candidates"


def test_thue_morse_extreme_points(parametrized):
    hull = extreme_points(parametrized("thue-morse"))
    assert hull.method == "exact-1d"
    assert hull.complete
    assert [v.to_strings() for v in hull] == [["1", "1", "1", "1"], ["1", "-1", "-1", "1"]]


@pytest.mark.parametrize("name,other", [
    ("queffelec-zeta", R(-1, 2)),
    ("table", R(-1, 3)),
    ("rudin-shapiro", -1),
])
def test_interval_extreme_points(parametrized, name, other):
    parametrization = parametrized(name)
    hull = extreme_points(parametrization)
    assert len(hull) == 2
    assert hull[0].is_all_ones()
    assert hull[1].entries == parametrization.vector([other]).entries


def test_rudin_shapiro_second_point(parametrized):
    hull = extreme_points(parametrized("rudin-shapiro"))
    assert hull[1].to_strings() == [str(x) for x in (1, 0, 0, -1, 0, 1, -1, 0, 0, -1, 1, 0, -1, 0, 0, 1)]


def test_membership_certificates(prepared):
    S, weights, _ = prepared("thue-morse")
    assert verify_membership(vector([1, 0, 0, 1], 2), S, weights)
    assert verify_membership(vector([2, 0, 0, 2], 2), S, weights).failures() == ["normalized"]
    assert verify_membership(vector([1, 2, 2, 1], 2), S, weights).failures() == ["positive_semidefinite"]
    assert "eigenvector" in verify_membership(vector([1, 1, 0, 1], 2), S, weights).failures()


def test_membership_floating_point(prepared):
    S, weights, _ = prepared("thue-morse")
    assert verify_membership(HullVector([1.0, -1.0, -1.0, 1.0], 2, exact=False), S, weights)
    assert not verify_membership(HullVector([1.0, -1.2, -1.2, 1.0], 2, exact=False), S, weights)


def test_face_dimension(parametrized):
    tm = parametrized("thue-morse")
    assert is_extreme(tm, vector([1, 1, 1, 1], 2))
    assert not is_extreme(tm, vector([1, 0, 0, 1], 2))


def test_height_three_extreme_points(parametrized):
    parametrization = parametrized("height-h3")
    hull = extreme_points(parametrization)
    assert hull.method == "commutative-exact"
    assert hull.complete
    assert len(hull) == 6
    assert hull[0].is_all_ones()
    found = []
    for point in hull:
        matrix = point.to_numpy().reshape(6, 6)
        found += [m for m in range(6) if np.allclose(matrix, character_matrix(m), atol=1e-8)]
        assert is_extreme(parametrization, point)
    assert sorted(found) == list(range(6))


def test_height_three_mixture_is_not_extreme(parametrized):
    parametrization = parametrized("height-h3")
    identity = vector(np.eye(6, dtype=int).ravel().tolist(), 6)
    assert verify_membership(identity, parametrization.substitution, parametrization.weights)
    assert not is_extreme(parametrization, identity)


def test_verify_candidates(parametrized):
    hull = extreme_points(parametrized("thue-morse"), method="verify-candidates",
                          candidates=[vector([1, 1, 1, 1], 2), vector([1, 0, 0, 1], 2)])
    assert hull.complete
    assert len(hull) == 1
    assert len(hull.certificates) == 2
    assert hull.certificates[1]["member"] and not hull.certificates[1]["extreme"]
    assert len(hull.diagnostics) == 1


def test_numeric_search_matches_exact(parametrized):
    hull = extreme_points(parametrized("thue-morse"), method="numeric", objectives=4)
    assert hull.caveats == [NUMERIC_CAVEAT]
    assert hull.complete
    assert len(hull) == 2
    assert np.allclose(hull[0].to_numpy(), [1, 1, 1, 1], atol=1e-5)
    assert np.allclose(hull[1].to_numpy(), [1, -1, -1, 1], atol=1e-5)


def test_method_preconditions(parametrized):
    with pytest.raises(AnalysisPreconditionError):
        extreme_points(parametrized("height-h3"), method="exact-1d")
    with pytest.raises(AnalysisPreconditionError):
        extreme_points(parametrized("rudin-shapiro"), method="commutative-exact")
    with pytest.raises(SubstitutionInputError):
        extreme_points(parametrized("thue-morse"), method="simplex")


def test_parse_candidate():
    candidate = parse_candidate(["1", "1/2", "1/2", "1"], 2)
    assert candidate.entries[1] == R(1, 2)
    assert parse_candidate(["1", "I", "-I", "1"], 2).entries[1] == sympy.I
    with pytest.raises(SubstitutionInputError):
        parse_candidate(["1", "1"], 2)
    with pytest.raises(SubstitutionInputError):
        parse_candidate(["1", "x", "x", "1"], 2)


def test_hull_invariant_under_configuration(load):
    zeta = load("queffelec-zeta")
    reference = None
    for S in configurations(zeta):
        hull = extreme_points(hull_parametrization(S, invariant_weights(S)))
        points = [v.to_strings() for v in hull]
        reference = reference or points
        assert points == reference


def test_six_letter_cross_classes_vanish(parametrized):
    parametrization = parametrized("six-letter")
    assert parametrization.dimension == 3
    assert parametrization.is_real
    cross = [["12", "35"], ["15", "32"], ["21", "53"], ["23", "51"]]
    assert sorted(map(sorted, parametrization.vanishing)) == cross
    assert parametrization.to_dict()["vanishing"] == parametrization.vanishing


def test_six_letter_extreme_points(parametrized):
    parametrization = parametrized("six-letter")
    hull = extreme_points(parametrization)
    assert hull.method == "numeric"
    assert hull.complete
    assert all(v.is_rational for v in hull)
    # (v_11, v_13, v_22, v_25) with letters 1, 2, 3, 5 at ids 0, 1, 2, 4
    corners = {tuple(int(v.entries[x]) for x in (0, 2, 7, 10)) for v in hull}
    assert len(hull) == 4
    assert corners == {(2, 2, 0, 0), (2, -2, 0, 0), (0, 0, 2, 2), (0, 0, 2, -2)}
    for v in hull:
        assert v.entries[1] == v.entries[4] == 0
        assert verify_membership(v, parametrization.substitution, parametrization.weights)


def test_irrational_optima_leave_the_search_incomplete(parametrized):
    hull = extreme_points(parametrized("height-h3"), method="numeric")
    assert not hull.complete
    assert any(not v.exact for v in hull)
    assert any("could not be certified" in d for d in hull.diagnostics)
    assert all(is_extreme(parametrized("height-h3"), v) for v in hull)


def test_working_precision_separates_joint_eigenvalues(parametrized):
    assert extreme_points(parametrized("height-h3"), working_precision=1e-12).complete
    coarse = extreme_points(parametrized("height-h3"), working_precision=10.0)
    assert coarse.method == "commutative-exact"
    assert not coarse.complete
    assert "repeated joint eigenvalues" in coarse.diagnostics[0]
