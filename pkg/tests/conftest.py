import os

import pytest

from scripts.Spectrum.fourier_engine import FourierEngine
from scripts.Spectrum.spectral_hull import hull_parametrization
from scripts.Substitution.structure_analysis import invariant_weights, telescope_for_analysis
from scripts.Substitution.substitution_parser import parse_spec

SPEC_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, "data", "substitutions")

BUNDLED = ["thue-morse", "queffelec-zeta", "table", "rudin-shapiro", "tm-rs-product", "height-h3", "six-letter"]


def spec_path(name):
    return os.path.join(SPEC_DIR, f"{name}.json")


@pytest.fixture(scope="session")
def load():
    def _load(name):
        return parse_spec(spec_path(name)).substitution
    return _load


@pytest.fixture(scope="session")
def prepared(load):
    """Telescoped substitution, uniform weights and a Fourier engine per bundled file"""
    cache = {}

    def _prepared(name):
        if name not in cache:
            S, _ = telescope_for_analysis(load(name))
            weights = invariant_weights(S)
            cache[name] = (S, weights, FourierEngine(S, weights))
        return cache[name]
    return _prepared


@pytest.fixture(scope="session")
def parametrized(prepared):
    cache = {}

    def _parametrized(name):
        if name not in cache:
            S, weights, _ = prepared(name)
            cache[name] = hull_parametrization(S, weights)
        return cache[name]
    return _parametrized


@pytest.fixture(params=BUNDLED)
def bundled_name(request):
    return request.param
