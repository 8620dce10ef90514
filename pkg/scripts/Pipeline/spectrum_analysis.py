"""
Spectrum Analysis Stages

Runs the analysis of one substitution stage by stage: telescoping to index 1,
ergodic decomposition and invariant weights, aperiodicity, spectral hull,
Fourier coefficients, classification. Each stage is computed once and reused
by the later ones; the pipeline commands pick the stages they need.
"""

import logging

import sympy

from scripts.Oracle.empirical_oracle import depth_sweep
from scripts.Spectrum.classifier import spectral_report
from scripts.Spectrum.fourier_engine import FourierEngine
from scripts.Spectrum.spectral_hull import extreme_points, hull_parametrization, parse_candidate
from scripts.Substitution import exact_linalg
from scripts.Substitution.structure_analysis import (
    check_aperiodicity, describe, ergodic_decomposition, invariant_weights, q_eigen_projection,
    structural_predicates, telescope_for_analysis)
from scripts.Substitution.substitution_core import coincidence_matrix, substitution_matrix
from scripts.Substitution.substitution_errors import AnalysisPreconditionError

logger = logging.getLogger("SpectrumAnalysis")


def matrix_strings(matrix):
    return [[exact_linalg.format_exact(x) for x in matrix.row(i)] for i in range(matrix.shape[0])]


class SpectrumAnalysis:
    """Staged analysis of one substitution under one configuration"""

    def __init__(self, spec, config, method="auto", weights=None):
        """
        Initialize the analysis

        Args:
            spec: SubstitutionSpec from the definition file
            config: AnalysisConfig
            method: hull method, "auto" by default
            weights: class weights overriding the file's, or None
        """
        self.spec = spec
        self.config = config
        self.method = method
        self.class_weights = weights if weights is not None else spec.weights
        self.original = spec.substitution
        self._stages = {}

        logger.info(f"Spectrum Analysis initialized for {self.original.name}")

    def _stage(self, name, build):
        if name not in self._stages:
            logger.info(f"Running stage {name}")
            self._stages[name] = build()
        return self._stages[name]

    @property
    def telescoped(self):
        return self._stage("telescope", lambda: telescope_for_analysis(self.original, self.config.cell_budget))

    @property
    def substitution(self):
        return self.telescoped[0]

    @property
    def exponent(self):
        return self.telescoped[1]

    @property
    def decomposition(self):
        return self._stage("decomposition", lambda: ergodic_decomposition(self.original))

    @property
    def weights(self):
        return self._stage("weights", lambda: invariant_weights(self.substitution, self.class_weights))

    @property
    def verdict(self):
        return self._stage("aperiodicity", lambda: check_aperiodicity(
            self.original, self.decomposition, self.config.pansiot_depth, self.config.cell_budget))

    @property
    def predicates(self):
        return self._stage("predicates", lambda: structural_predicates(self.substitution))

    def require_aperiodic(self):
        if not self.verdict.is_aperiodic:
            raise AnalysisPreconditionError(
                f"aperiodicity of {self.original.name} is {self.verdict.status}: {self.verdict.explanation}; "
                "declare \"aperiodic\": \"asserted\" in the definition file if it is known")
        if self.verdict.status == "asserted":
            logger.warning(f"Aperiodicity of {self.original.name} is asserted, not verified")

    @property
    def parametrization(self):
        return self._stage("parametrization", lambda: hull_parametrization(self.substitution, self.weights))

    @property
    def hull(self):
        def build():
            candidates = [parse_candidate(c, self.substitution.s) for c in self.spec.hull_candidates]
            method = self.method
            if method == "candidates":
                method = "verify-candidates"
            if method == "auto" and candidates:
                method = "verify-candidates"
            return extreme_points(
                self.parametrization, method=method, candidates=candidates,
                psd_tolerance=self.config.psd_tolerance, working_precision=self.config.working_precision,
                objectives=self.config.numeric_objectives,
                seed=self.config.numeric_seed, max_denominator=self.config.rational_snap_denominator,
                jobs=self.config.jobs)
        return self._stage("hull", build)

    @property
    def engine(self):
        def build():
            self.require_aperiodic()
            return FourierEngine(self.substitution, self.weights, p_max=self.config.p_max,
                                 cell_budget=self.config.cell_budget, jobs=self.config.jobs)
        return self._stage("engine", build)

    def report(self, window_power=None):
        window_power = self.config.window_power if window_power is None else window_power
        return spectral_report(self.substitution, self.hull, self.engine, window_power, self.verdict,
                               self.predicates, height_bound=self.config.height_bound,
                               mixing_powers=self.config.mixing_powers, tolerance=self.config.psd_tolerance,
                               original=self.original, exponent=self.exponent)

    def frequencies(self, letter, depths, k):
        """Oracle runs on the untelescoped substitution; Σ̂ is the same for S and S^h"""
        return depth_sweep(self.original, letter, depths, k, list(self.engine.coefficient(k)),
                           self.config.cell_budget)

    def substitution_summary(self):
        S = self.original
        return {
            "name": S.name,
            "dimension": S.d,
            "q": list(S.q),
            "alphabet": list(S.alphabet.letters),
            "aperiodic": S.aperiodicity,
            "telescoping_exponent": self.exponent,
        }

    def structure_document(self):
        """Decomposition, matrices, predicates, aperiodicity, weights and projections"""
        summary = describe(self.original, self.config.cell_budget)
        S = self.substitution
        M = substitution_matrix(S)
        C = coincidence_matrix(S)
        return {
            "substitution": self.substitution_summary(),
            "decomposition": summary["decomposition"].to_dict(),
            "bisubstitution_decomposition": summary["bisubstitution_decomposition"].to_dict(),
            "eigenvalue_index": summary["eigenvalue_index"],
            "predicates": summary["predicates"],
            "aperiodicity": self.verdict.to_dict(),
            "invariant_weights": self.weights.to_dict(),
            "substitution_matrix": matrix_strings(substitution_matrix(self.original)),
            "coincidence_matrix": matrix_strings(coincidence_matrix(self.original)),
            "projection": matrix_strings(q_eigen_projection(M, S.Q)),
            "coincidence_projection": matrix_strings(q_eigen_projection(C, S.Q)),
        }

    def hull_document(self):
        return {
            "substitution": self.substitution_summary(),
            "parametrization": self.parametrization.to_dict(),
            "hull": self.hull.to_dict(),
        }

    def coefficient_document(self, coefficients):
        names = self.substitution.alphabet.pairs()
        return {
            "substitution": self.substitution_summary(),
            "coefficients": {
                ",".join(str(x) for x in k): {n: str(sympy.Rational(v)) for n, v in zip(names, vector)}
                for k, vector in sorted(coefficients.items())
            },
        }
