import itertools

import pytest
import sympy
from sympy import Rational as R

from scripts.Spectrum.fourier_engine import FourierEngine, coefficient_rows, pair_matrix, sigma_zero
from scripts.Substitution.structure_analysis import q_eigen_projection
from scripts.Substitution.substitution_core import coincidence_matrix
from scripts.Substitution.substitution_errors import CellBudgetExceeded

WINDOW_POWERS = {
    "thue-morse": 3,
    "rudin-shapiro": 3,
    "queffelec-zeta": 2,
    "table": 2,
    "tm-rs-product": 2,
    "height-h3": 1,
    "six-letter": 1,
}


def scaled(denominator, numerators):
    return [R(n, denominator) for n in numerators]


def test_thue_morse_values(prepared):
    _, _, engine = prepared("thue-morse")
    assert list(engine.coefficient(1)) == scaled(6, [1, 2, 2, 1])
    assert list(engine.coefficient(5)) == scaled(4, [1, 1, 1, 1])
    assert list(engine.coefficient(-1)) == scaled(6, [1, 2, 2, 1])


def test_zeta_values(prepared):
    _, _, engine = prepared("queffelec-zeta")
    assert list(engine.coefficient(1)) == scaled(39, [5, 6, 2, 6, 2, 5, 2, 5, 6])
    assert list(engine.coefficient(2)) == scaled(117, [7, 7, 25, 25, 7, 7, 7, 25, 7])


def test_table_value(prepared):
    _, _, engine = prepared("table")
    assert list(engine.coefficient((1, 0))) == scaled(20, [0, 2, 1, 2, 0, 2, 2, 1, 5, 0, 0, 0, 0, 1, 2, 2])


def test_rudin_shapiro_values(prepared):
    _, _, engine = prepared("rudin-shapiro")
    assert list(engine.coefficient(1)) == scaled(8, [0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0])
    assert list(engine.coefficient(2)) == scaled(8, [1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1])


def test_base_coefficients_hold_the_corners(prepared):
    _, _, engine = prepared("thue-morse")
    base = engine.base_coefficients()
    assert sorted(base) == [(-1,), (0,), (1,)]
    assert list(base[(0,)]) == [R(1, 2), 0, 0, R(1, 2)]
    assert list(base[(1,)]) == list(base[(-1,)]) == scaled(6, [1, 2, 2, 1])


def test_height_three_values(prepared):
    # Σ̂(k) as a combination of the shifts a -> a + j, with σ̂_ab(k) for a at j + k and b at j
    shifts = {
        1: {2: R(1, 30), 5: R(4, 30)},
        2: {1: R(2, 30), 4: R(3, 30)},
        3: {0: R(3, 30), 3: R(2, 30)},
    }
    _, _, engine = prepared("height-h3")
    for k, weights in shifts.items():
        matrix = pair_matrix(engine.coefficient(k), 6)
        for a, b in itertools.product(range(6), repeat=2):
            assert matrix[a, b] == weights.get((b - a) % 6, 0), (k, a, b)


def test_sigma_zero(prepared):
    _, weights, _ = prepared("thue-morse")
    assert list(sigma_zero(weights, 2)) == [R(1, 2), 0, 0, R(1, 2)]


def test_window_properties(prepared, bundled_name):
    S, weights, engine = prepared(bundled_name)
    s = S.s
    u = sympy.Matrix(list(weights.u))
    coefficients = engine.window_coefficients(WINDOW_POWERS[bundled_name])
    for k, vector in coefficients.items():
        assert sum(vector) == 1
        assert all(0 <= x <= 1 for x in vector)
        matrix = pair_matrix(vector, s)
        assert matrix * sympy.ones(s, 1) == u
        assert matrix.T * sympy.ones(s, 1) == u
        opposite = tuple(-x for x in k)
        if opposite in coefficients:
            assert pair_matrix(coefficients[opposite], s) == matrix.T


def test_scaling_relation(prepared, bundled_name):
    S, _, engine = prepared(bundled_name)
    for a in engine.window_coefficients(1):
        scaled_point = tuple(x * m for x, m in zip(a, S.q))
        assert engine.coefficient(scaled_point) == engine.scaled_prediction(a)


@pytest.mark.parametrize("name", ["thue-morse", "queffelec-zeta", "table", "rudin-shapiro"])
def test_bicorrelation_maps_ground_to_coefficients(prepared, name):
    S, _, engine = prepared(name)
    ground = engine.coefficient(tuple([0] * S.d))
    for k in engine.window_coefficients(1):
        assert engine.bicorrelation_coefficient(k) * ground == engine.coefficient(k)


def test_bicorrelation_ground_is_projection(prepared):
    S, _, engine = prepared("rudin-shapiro")
    projection = engine.bicorrelation_coefficient(0)
    assert projection == q_eigen_projection(coincidence_matrix(S), 2)


def test_provenance(prepared):
    _, _, engine = prepared("thue-morse")
    engine.coefficient(5)
    assert engine.provenance(0) == {"p": 0, "source": "ground"}
    assert engine.provenance(1)["source"] == "corner-solve"
    assert engine.provenance(5) == {"p": 3, "source": "recursion"}


def test_coefficient_rows(prepared):
    _, _, engine = prepared("thue-morse")
    rows = coefficient_rows(engine, {(5,): engine.coefficient(5)})
    assert [row["pair"] for row in rows] == ["00", "01", "10", "11"]
    assert {row["value"] for row in rows} == {"1/4"}
    assert rows[0]["numerator"] == 1 and rows[0]["denominator"] == 4


def test_cell_budget_is_enforced(prepared):
    S, weights, _ = prepared("thue-morse")
    engine = FourierEngine(S, weights, cell_budget=8)
    with pytest.raises(CellBudgetExceeded):
        engine.coefficient(1000)
