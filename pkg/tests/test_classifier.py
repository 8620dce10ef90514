import cmath
import math

import numpy as np
import pytest
from sympy import Rational as R

from scripts.Spectrum.classifier import (
    DISCRETE, INCONCLUSIVE, LEBESGUE, SINGULAR_CONTINUOUS, Classification, abc_shortcut, candidate_lattices,
    classify, lambda_coefficient, lattice_measure_coefficient, mixing_table, simplified_statement,
    spectral_report)
from scripts.Spectrum.spectral_hull import extreme_points
from scripts.Substitution.structure_analysis import AperiodicityVerdict, check_aperiodicity, structural_predicates
from scripts.Substitution.substitution_errors import SubstitutionInputError

ROOT3 = math.sqrt(3)

# λ̂(1), λ̂(2), λ̂(3) of the measure for X_ab = exp(2πi m(a - b)/6)
HEIGHT_THREE = {
    0: [1, 1, 1],
    1: [complex(3 / 10, 3 * ROOT3 / 10), complex(-1 / 10, ROOT3 / 10), 1 / 5],
    2: [cmath.exp(2j * cmath.pi / 3), cmath.exp(4j * cmath.pi / 3), 1],
    3: [-3 / 5, 1 / 5, 1 / 5],
}
HEIGHT_THREE[4] = [complex(x).conjugate() for x in HEIGHT_THREE[2]]
HEIGHT_THREE[5] = [complex(x).conjugate() for x in HEIGHT_THREE[1]]


def report_for(name, load, prepared, parametrized, window_power):
    S, _, engine = prepared(name)
    hull = extreme_points(parametrized(name))
    verdict = check_aperiodicity(load(name))
    return spectral_report(S, hull, engine, window_power, verdict, structural_predicates(S))


def character_index(w):
    matrix = w.to_numpy().reshape(6, 6)
    for m in range(6):
        expected = np.array([[cmath.exp(2j * cmath.pi * m * (a - b) / 6) for b in range(6)] for a in range(6)])
        if np.allclose(matrix, expected, atol=1e-8):
            return m
    raise AssertionError(f"not a character matrix: {w}")


def test_thue_morse_lambda_values(prepared, parametrized):
    _, _, engine = prepared("thue-morse")
    ones, second = extreme_points(parametrized("thue-morse"))
    assert lambda_coefficient(ones, engine.coefficient(7)) == 1
    assert lambda_coefficient(second, engine.coefficient(1)) == R(-1, 3)
    assert lambda_coefficient(second, engine.coefficient(5)) == 0


def test_zeta_lambda_values(prepared, parametrized):
    _, _, engine = prepared("queffelec-zeta")
    second = extreme_points(parametrized("queffelec-zeta"))[1]
    assert lambda_coefficient(second, engine.coefficient(1)) == 0
    assert lambda_coefficient(second, engine.coefficient(2)) == R(-3, 13)


def test_table_lambda_value(prepared, parametrized):
    _, _, engine = prepared("table")
    second = extreme_points(parametrized("table"))[1]
    assert lambda_coefficient(second, engine.coefficient((1, 0))) == R(-1, 15)


def test_lambda_length_mismatch(prepared, parametrized):
    _, _, engine = prepared("queffelec-zeta")
    with pytest.raises(SubstitutionInputError):
        lambda_coefficient(extreme_points(parametrized("thue-morse"))[0], engine.coefficient(1))


def test_candidate_lattices():
    assert candidate_lattices((2,), 2) == [(1,)]
    assert candidate_lattices((4,), 6) == [(1,), (3,), (5,)]
    assert candidate_lattices((2, 3), 4) == [(1, 1), (1, 2), (3, 1), (1, 4), (3, 2), (3, 4)]


def test_lattice_measure_coefficient():
    assert lattice_measure_coefficient((6,), (3,)) == 1
    assert lattice_measure_coefficient((4,), (3,)) == 0
    assert lattice_measure_coefficient((2, 4), (1, 2)) == 1


def test_classify_edge_cases():
    with pytest.raises(SubstitutionInputError):
        classify({}, (2,), 2)
    assert classify({(0,): 1}, (2,), 2).label == INCONCLUSIVE
    assert classify({(-1,): 0, (0,): 1, (1,): 0}, (2,), 2).label == LEBESGUE
    assert classify({(-1,): 1, (0,): 1, (1,): 1}, (2,), 2).describe() == "discrete(1Z^d)"


def test_classify_periodic_and_singular():
    periodic = {(k,): 1 if k % 3 == 0 else R(-1, 2) for k in range(-8, 9)}
    result = classify(periodic, (2,), 4)
    assert result.label == DISCRETE
    assert result.lattice == (3,)
    assert result.describe() == "discrete(3Z^d)"
    assert classify(periodic, (3,), 4).label == SINGULAR_CONTINUOUS

    tilted = {(-1,): R(-1, 3), (0,): 1, (1,): R(-1, 3), (2,): R(1, 3)}
    singular = classify(tilted, (2,), 2)
    assert singular.label == SINGULAR_CONTINUOUS
    assert singular.evidence["nonzero_witness"] == [-1]


def test_classify_tolerates_rounding():
    values = {(-1,): complex(1e-12, 0), (0,): 1.0, (1,): complex(0, -1e-12)}
    assert classify(values, (2,), 2).label == LEBESGUE


def test_abc_shortcut(load):
    tm = load("thue-morse")
    verdict = check_aperiodicity(tm)
    flag = abc_shortcut(tm, verdict, structural_predicates(tm))
    assert flag["flag"] == "purely-singular"
    assert abc_shortcut(tm, AperiodicityVerdict("unknown"), structural_predicates(tm)) is None
    rs = load("rudin-shapiro")
    assert abc_shortcut(rs, check_aperiodicity(rs), structural_predicates(rs)) is None


def test_thue_morse_report(load, prepared, parametrized):
    report = report_for("thue-morse", load, prepared, parametrized, 3)
    assert report.labels == [DISCRETE, SINGULAR_CONTINUOUS]
    assert report.statement == "σ_max ~ ω_q ∗ (λ_1 + λ_2)"
    assert report.simplified == "σ_max ~ ω_2 + ω_2 ∗ λ_2"
    assert report.shortcut["flag"] == "purely-singular"
    assert report.complete
    assert not any("q-shift" in c for c in report.caveats)
    assert "λ_2: singular-continuous" in report.render()


def test_rudin_shapiro_report(load, prepared, parametrized):
    report = report_for("rudin-shapiro", load, prepared, parametrized, 3)
    assert report.labels == [DISCRETE, LEBESGUE]
    assert report.simplified == "σ_max ~ ω_2 + m"
    assert report.shortcut is None


def test_zeta_report(load, prepared, parametrized):
    report = report_for("queffelec-zeta", load, prepared, parametrized, 2)
    assert report.labels == [DISCRETE, SINGULAR_CONTINUOUS]
    assert report.measures[0].classification.lattice == (1,)


def test_table_report(load, prepared, parametrized):
    report = report_for("table", load, prepared, parametrized, 2)
    assert report.measures[0].classification.describe() == "discrete(1x1Z^d)"
    assert report.labels[1] != LEBESGUE
    assert report.shortcut is None


def test_report_document(load, prepared, parametrized):
    document = report_for("thue-morse", load, prepared, parametrized, 2).to_dict()
    assert document["components"][1]["coefficients"]["1"] == "-1/3"
    assert document["shortcut_flags"][0]["flag"] == "purely-singular"
    assert len(document["strong_mixing"]) == 2


def test_mixing_table(prepared, parametrized):
    _, _, engine = prepared("thue-morse")
    ones = extreme_points(parametrized("thue-morse"))[0]
    rows = mixing_table(engine, ones, [2, 3, 4])
    assert rows == [{"a": [1], "b": [1], "powers": [2, 3, 4], "deviations": [0.0, 0.0, 0.0], "nonincreasing": True}]


def test_height_three_measures(load, prepared, parametrized):
    report = report_for("height-h3", load, prepared, parametrized, 2)
    assert report.shortcut["flag"] == "purely-singular"
    by_character = {character_index(m.w): m for m in report.measures}
    assert sorted(by_character) == list(range(6))

    for m, expected in HEIGHT_THREE.items():
        values = by_character[m].coefficients
        for k, value in zip((1, 2, 3), expected):
            assert complex(values[(k,)]) == pytest.approx(complex(value), abs=1e-8), (m, k)

    descriptions = {m: measure.classification.describe() for m, measure in by_character.items()}
    assert descriptions[0] == "discrete(1Z^d)"
    assert descriptions[2] == descriptions[4] == "discrete(3Z^d)"
    assert all(descriptions[m] == SINGULAR_CONTINUOUS for m in (1, 3, 5))


def test_height_three_lattice_identity(load, prepared, parametrized):
    report = report_for("height-h3", load, prepared, parametrized, 2)
    by_character = {character_index(m.w): m for m in report.measures}
    for k in by_character[0].coefficients:
        total = sum(complex(by_character[m].coefficients[k]) for m in (0, 2, 4))
        assert abs(total - 3 * lattice_measure_coefficient(k, (3,))) < 1e-8


def test_simplified_statement_merges_terms():
    class Measure:
        def __init__(self, name, classification):
            self.name = name
            self.classification = classification

    measures = [Measure("λ_1", Classification(DISCRETE, (1,))), Measure("λ_2", Classification(LEBESGUE)),
                Measure("λ_3", Classification(LEBESGUE))]
    assert simplified_statement(measures, (2,)) == "σ_max ~ ω_2 + m"
