"""
Analysis Configuration

Layers the analysis settings: built-in defaults, config/analysis_defaults.json,
the "analysis" block of a substitution file, the SUBSTITUTION_CELL_BUDGET
environment variable and finally command-line flags.
"""

import json
import logging
import os

from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("AnalysisConfig")

DEFAULT_CONFIG_PATH = os.path.join("config", "analysis_defaults.json")

CELL_BUDGET_VARIABLE = "SUBSTITUTION_CELL_BUDGET"

DEFAULTS = {
    "cell_budget": 2 ** 26,
    "p_max": 6,
    "pansiot_depth": 8,
    "window_power": 3,
    "psd_tolerance": 1e-9,
    "working_precision": 1e-12,
    "numeric_objectives": 24,
    "numeric_seed": 0,
    "rational_snap_denominator": 1000,
    "mixing_powers": [2, 3, 4, 5],
    "height_bound": None,
    "jobs": 1,
    "output_dir": os.path.join("data", "reports"),
}

POSITIVE_INTEGERS = ("cell_budget", "p_max", "pansiot_depth", "numeric_objectives",
                     "rational_snap_denominator", "jobs")


class AnalysisConfig:
    """Resolved settings with attribute access"""

    def __init__(self, values, sources):
        self._values = dict(values)
        self.sources = sources

    def __getattr__(self, key):
        try:
            return self.__dict__["_values"][key]
        except KeyError:
            raise AttributeError(key) from None

    def to_dict(self):
        return dict(self._values)

    def __repr__(self):
        return f"AnalysisConfig({self._values})"


def _merge(values, layer, source, sources):
    for key, value in layer.items():
        if key not in DEFAULTS:
            raise SubstitutionInputError(f"{source}: unknown analysis setting '{key}'")
        if value is None and key != "height_bound":
            continue
        values[key] = value
        sources[key] = source


def _validate(values):
    for key in POSITIVE_INTEGERS:
        if not isinstance(values[key], int) or values[key] < 1:
            raise SubstitutionInputError(f"{key} must be a positive integer, got {values[key]!r}")
    if values["window_power"] < 0:
        raise SubstitutionInputError("window_power must be nonnegative")
    if values["height_bound"] is not None and values["height_bound"] < 1:
        raise SubstitutionInputError("height_bound must be at least 1")


def load_analysis_config(config_path=DEFAULT_CONFIG_PATH, file_analysis=None, overrides=None, environ=None):
    """
    Resolve the analysis settings

    Args:
        config_path: JSON defaults file; skipped when it does not exist
        file_analysis: the "analysis" block of the substitution file
        overrides: command-line values (None entries are ignored)
        environ: environment mapping, os.environ by default

    Returns:
        AnalysisConfig
    """
    values = dict(DEFAULTS)
    sources = {key: "default" for key in DEFAULTS}

    if config_path and os.path.exists(config_path):
        with open(config_path, 'r', encoding='utf-8') as f:
            _merge(values, json.load(f), config_path, sources)
    _merge(values, file_analysis or {}, "substitution file", sources)

    environ = os.environ if environ is None else environ
    if environ.get(CELL_BUDGET_VARIABLE):
        try:
            values["cell_budget"] = int(environ[CELL_BUDGET_VARIABLE])
        except ValueError:
            raise SubstitutionInputError(
                f"{CELL_BUDGET_VARIABLE} must be an integer, got '{environ[CELL_BUDGET_VARIABLE]}'") from None
        sources["cell_budget"] = CELL_BUDGET_VARIABLE

    _merge(values, {k: v for k, v in (overrides or {}).items() if v is not None}, "command line", sources)
    _validate(values)
    logger.info(f"Analysis settings resolved (cell budget {values['cell_budget']}, p_max {values['p_max']})")
    return AnalysisConfig(values, sources)
