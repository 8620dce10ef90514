"""
Spectral Classifier

Forms the measures λ_w = w^t Σ for the extreme points w of the spectral hull,
labels each as discrete, singular continuous or Lebesgue from its Fourier
coefficients on a finite window, and assembles the maximal spectral type
report σ_max ~ ω_q ∗ (λ_1 + ... + λ_n).

Labels are evidence on the window, not proofs; the one proof-backed statement
is the purely singular flag for aperiodic bijective commutative substitutions.
"""

import itertools
import logging
import math

import sympy

from scripts.Substitution import exact_linalg, zd_arith
from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("SpectralClassifier")

LEBESGUE = "lebesgue"
DISCRETE = "discrete"
SINGULAR_CONTINUOUS = "singular-continuous"
INCONCLUSIVE = "inconclusive"


def lambda_coefficient(w, sigma_k):
    """λ̂_w(k) = w^t Σ̂(k); exact unless w is floating"""
    if len(w.entries) != len(sigma_k):
        raise SubstitutionInputError(f"vector of length {len(w.entries)} against coefficient of length {len(sigma_k)}")
    if w.exact:
        return sympy.expand(sum(a * b for a, b in zip(w.entries, sigma_k)))
    return complex(sum(complex(a) * float(b) for a, b in zip(w.entries, sigma_k)))


def lattice_measure_coefficient(k, h):
    """ν̂_{hZ^d}(k): 1 on the lattice hZ^d, 0 off it"""
    return 1 if all(x % m == 0 for x, m in zip(zd_arith.as_point(k), zd_arith.as_point(h))) else 0


def _as_complex(value):
    return value if isinstance(value, complex) else complex(sympy.N(value, 30))


def values_equal(a, b, tolerance=1e-9):
    if not isinstance(a, complex) and not isinstance(b, complex):
        a, b = sympy.sympify(a), sympy.sympify(b)
        if a.is_Rational and b.is_Rational:
            return a == b
    return abs(_as_complex(a) - _as_complex(b)) <= tolerance


def is_zero(value, tolerance=1e-9):
    return values_equal(value, 0, tolerance)


def candidate_lattices(q, bound):
    """Diagonal periods h with 1 <= h_i <= bound and gcd(h_i, q_i) = 1, smallest first"""
    ranges = [[h for h in range(1, bound + 1) if math.gcd(h, m) == 1] for m in q]
    return sorted(itertools.product(*ranges), key=lambda h: (math.prod(h), h))


def _period_violation(coefficients, h, tolerance):
    first = {}
    for k, value in coefficients.items():
        residue = tuple(x % m for x, m in zip(k, h))
        if residue not in first:
            first[residue] = (k, value)
        elif not values_equal(first[residue][1], value, tolerance):
            return first[residue][0], k
    return None


class Classification:
    """Label of one measure with the window evidence behind it"""

    def __init__(self, label, lattice=None, evidence=None):
        self.label = label
        self.lattice = lattice
        self.evidence = evidence or {}

    def describe(self):
        if self.label == DISCRETE:
            return f"discrete({'x'.join(str(x) for x in self.lattice)}Z^d)"
        return self.label

    def to_dict(self):
        return {
            "label": self.label,
            "lattice": list(self.lattice) if self.lattice else None,
            "evidence": self.evidence,
        }

    def __repr__(self):
        return f"Classification({self.describe()})"


def classify(coefficients, q, s, height_bound=None, tolerance=1e-9):
    """
    Pure-type label of a measure from its coefficients on a window

    Args:
        coefficients: dict k -> λ̂(k) over the window
        q: expansion vector
        s: alphabet size, the default bound on the lattice periods
        height_bound: optional override of that bound
        tolerance: equality tolerance for non-rational values

    Lebesgue when every off-zero coefficient vanishes; discrete(hZ^d) when the
    coefficients only depend on k mod h for the smallest admissible h;
    singular-continuous otherwise.
    """
    if not coefficients:
        raise SubstitutionInputError("classification window is empty")
    q = zd_arith.as_point(q)
    points = sorted(coefficients)
    evidence = {"window_size": len(points), "caveat": "evidence on the finite window only"}
    off_zero = [k for k in points if any(k)]
    if not off_zero:
        return Classification(INCONCLUSIVE, evidence=dict(evidence, reason="window holds only k = 0"))

    nonzero = [k for k in off_zero if not is_zero(coefficients[k], tolerance)]
    if not nonzero:
        return Classification(LEBESGUE, evidence=dict(evidence, reason="all coefficients vanish off 0"))

    bound = height_bound or s
    rejected = []
    for h in candidate_lattices(q, bound):
        violation = _period_violation(coefficients, h, tolerance)
        if violation is None:
            return Classification(DISCRETE, lattice=h,
                                  evidence=dict(evidence, reason=f"coefficients constant modulo {list(h)}"))
        rejected.append({"lattice": list(h), "witness": [list(violation[0]), list(violation[1])]})
    return Classification(SINGULAR_CONTINUOUS, evidence=dict(
        evidence, nonzero_witness=list(nonzero[0]), rejected_lattices=rejected))


class ExtremalMeasure:
    """λ_w for one extreme point w, its coefficient table and label"""

    def __init__(self, index, w, coefficients, classification):
        self.index = index
        self.w = w
        self.coefficients = coefficients
        self.classification = classification

    @property
    def name(self):
        return f"λ_{self.index}"

    def q_shift_invariant(self, q, tolerance=1e-9):
        """λ̂(a·q) = λ̂(a) wherever both points are in the window"""
        for a, value in self.coefficients.items():
            scaled = zd_arith.scale(a, q)
            if scaled in self.coefficients and not values_equal(self.coefficients[scaled], value, tolerance):
                return False
        return True

    def to_dict(self):
        return {
            "name": self.name,
            "vector": self.w.to_strings(),
            "classification": self.classification.to_dict(),
            "coefficients": {",".join(str(x) for x in k): exact_linalg.format_exact(v)
                             for k, v in sorted(self.coefficients.items())},
        }


def abc_shortcut(S, verdict, predicates):
    """Proof-backed purely singular flag for aperiodic bijective commutative S, else None"""
    if verdict.is_aperiodic and predicates["bijective"] and predicates["commutative"]:
        return {"flag": "purely-singular", "reason": "aperiodic bijective commutative substitution"}
    return None


def mixing_points(d):
    unit = tuple(1 if i == 0 else 0 for i in range(d))
    ones = (1,) * d
    return sorted({(unit, unit), (ones, unit)})


def mixing_table(engine, w, powers, tolerance=1e-9):
    """
    |λ̂(b + a·q^p) - λ̂(b)·λ̂(a)| for increasing p

    Returns:
        list of dicts, one per (a, b), with the deviations and whether they
        are nonincreasing in p
    """
    S = engine.substitution
    rows = []
    for a, b in mixing_points(S.d):
        target = lambda_coefficient(w, engine.coefficient(b)) * lambda_coefficient(w, engine.coefficient(a))
        deviations = []
        for p in powers:
            k = zd_arith.add(b, zd_arith.scale(a, S.expansion.power(p)))
            value = lambda_coefficient(w, engine.coefficient(k))
            deviations.append(abs(_as_complex(value) - _as_complex(target)))
        nonincreasing = all(y <= x + tolerance for x, y in zip(deviations, deviations[1:]))
        rows.append({"a": list(a), "b": list(b), "powers": list(powers),
                     "deviations": deviations, "nonincreasing": nonincreasing})
    return rows


def _omega(q):
    return f"ω_{q[0]}" if len(q) == 1 else f"ω_({','.join(str(x) for x in q)})"


def statement(measures):
    return "σ_max ~ ω_q ∗ (" + " + ".join(m.name for m in measures) + ")"


def simplified_statement(measures, q):
    """Discrete parts on Z^d read as ω_q, Lebesgue parts as m"""
    omega = _omega(q)
    terms = []
    for m in measures:
        c = m.classification
        if c.label == DISCRETE and all(x == 1 for x in c.lattice):
            term = omega
        elif c.label == LEBESGUE:
            term = "m"
        else:
            term = f"{omega} ∗ {m.name}"
        if term not in terms:
            terms.append(term)
    return "σ_max ~ " + " + ".join(terms)


class SpectralReport:
    """Maximal spectral type with one component per extreme point"""

    def __init__(self, substitution, measures, shortcut, mixing, caveats, complete, original=None, exponent=1):
        self.substitution = substitution
        self.original = original or substitution
        self.exponent = exponent
        self.measures = measures
        self.shortcut = shortcut
        self.mixing = mixing
        self.caveats = caveats
        self.complete = complete
        self.statement = statement(measures)
        self.simplified = simplified_statement(measures, self.original.q)

    @property
    def labels(self):
        return [m.classification.label for m in self.measures]

    def to_dict(self):
        return {
            "substitution": self.original.name,
            "telescoping_exponent": self.exponent,
            "statement": self.statement,
            "simplified_statement": self.simplified,
            "components": [m.to_dict() for m in self.measures],
            "shortcut_flags": [self.shortcut] if self.shortcut else [],
            "strong_mixing": self.mixing,
            "caveats": self.caveats,
            "complete": self.complete,
            "note": "the components are mutually singular measures",
        }

    def render(self):
        """Human readable report"""
        title = f"Spectral report for {self.original.name}"
        if self.exponent > 1:
            title += f" (analysed through its power {self.exponent})"
        lines = [title, self.statement, self.simplified, ""]
        for m in self.measures:
            lines.append(f"{m.name}: {m.classification.describe()}  w = ({', '.join(m.w.to_strings())})")
        if self.shortcut:
            lines.append(f"shortcut: {self.shortcut['flag']} ({self.shortcut['reason']})")
        lines.extend(f"caveat: {c}" for c in self.caveats)
        return "\n".join(lines) + "\n"


def spectral_report(S, hull, engine, window_power, verdict, predicates, height_bound=None,
                    mixing_powers=(2, 3, 4, 5), tolerance=1e-9, original=None, exponent=1):
    """
    Classify every extreme point of the hull and assemble the report

    Args:
        S: analysed (telescoped) substitution
        hull: HullEnumeration of K*
        engine: FourierEngine for S and the chosen weights
        window_power: classify on all k with power_of(k) <= window_power
        verdict: AperiodicityVerdict
        predicates: structural predicates of S
        original: substitution named in the report, S itself by default
        exponent: power of original that S is
    """
    coefficients = engine.window_coefficients(window_power)
    measures = []
    for index, w in enumerate(hull, start=1):
        values = {k: lambda_coefficient(w, sigma) for k, sigma in coefficients.items()}
        measures.append(ExtremalMeasure(index, w, values, classify(values, S.q, S.s, height_bound, tolerance)))
        logger.info(f"λ_{index}: {measures[-1].classification.describe()}")

    shortcut = abc_shortcut(S, verdict, predicates)
    caveats = list(hull.caveats) + [f"labels are evidence on the window power_of(k) <= {window_power}"]
    if not hull.complete:
        caveats.append("hull enumeration incomplete: " + "; ".join(hull.diagnostics))
    if shortcut and LEBESGUE in [m.classification.label for m in measures]:
        caveats.append("a component looks Lebesgue on the window although the spectrum is purely singular")
    for m in measures:
        if not m.q_shift_invariant(S.q, tolerance):
            caveats.append(f"{m.name} is not q-shift invariant on the window")
    mixing = [{"component": m.name, "rows": mixing_table(engine, m.w, mixing_powers, tolerance)}
              for m in measures]
    return SpectralReport(S, measures, shortcut, mixing, caveats, hull.complete,
                          original=original, exponent=exponent)
