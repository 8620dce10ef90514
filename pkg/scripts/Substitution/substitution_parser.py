"""
Substitution Definition Files

Reads and writes the JSON definition of a q-substitution:

    {
      "name": "thue-morse",
      "dimension": 1,
      "q": [2],
      "alphabet": ["0", "1"],
      "aperiodic": "check-pansiot",
      "rules": {"0": ["0", "1"], "1": ["1", "0"]},
      "weights": "uniform",
      "hull_candidates": [],
      "analysis": {"window_power": 3}
    }

Rule lists hold Q letters in block order: lexicographic in j, last coordinate
fastest. For q = (2, 2) the cells are (0,0), (0,1), (1,0), (1,1).
A "family" block may replace dimension, q, alphabet and rules; see build_family.
All problems found in a file are reported together.
"""

import json
import logging
import math
import os

from scripts.Substitution.substitution_core import APERIODICITY_POLICIES, Substitution
from scripts.Substitution.substitution_families import hadamard_substitution, height_substitution
from scripts.Substitution.substitution_errors import SubstitutionInputError

logger = logging.getLogger("SubstitutionParser")

REQUIRED_KEYS = ("dimension", "q", "alphabet", "rules")
OPTIONAL_KEYS = ("name", "aperiodic", "weights", "hull_candidates", "analysis")
FAMILY_KINDS = ("hadamard", "height")


class SubstitutionSpec:
    """A parsed definition file: the substitution plus its options"""

    def __init__(self, substitution, weights="uniform", hull_candidates=None, analysis=None, path=None):
        self.substitution = substitution
        self.weights = weights
        self.hull_candidates = hull_candidates or []
        self.analysis = analysis or {}
        self.path = path

    def __repr__(self):
        return f"SubstitutionSpec({self.substitution!r}, path={self.path})"


def _check_shape(document, diagnostics):
    for key in REQUIRED_KEYS:
        if key not in document:
            diagnostics.append(f"missing key '{key}'")
    for key in document:
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            diagnostics.append(f"unknown key '{key}'")

    q = document.get("q")
    if q is not None:
        if not isinstance(q, list) or not q or not all(isinstance(x, int) for x in q):
            diagnostics.append("q: expected a non-empty list of integers")
            q = None
        else:
            for i, x in enumerate(q):
                if x < 2:
                    diagnostics.append(f"q[{i}]: every coordinate must be >= 2, found {x}")
            if "dimension" in document and document["dimension"] != len(q):
                diagnostics.append(f"dimension: {document['dimension']} does not match len(q) = {len(q)}")
    return q


def _check_rules(document, q, diagnostics):
    alphabet = document.get("alphabet")
    if not isinstance(alphabet, list) or len(alphabet) < 2:
        diagnostics.append("alphabet: expected a list of at least 2 letters")
        return
    names = [str(a) for a in alphabet]
    if len(set(names)) != len(names):
        diagnostics.append("alphabet: entries must be unique")
    rules = document.get("rules")
    if not isinstance(rules, dict):
        diagnostics.append("rules: expected a mapping letter -> list of letters")
        return
    Q = math.prod(q) if q else None
    known = set(names)
    for letter in names:
        if letter not in rules:
            diagnostics.append(f"rule '{letter}': missing")
            continue
        if not isinstance(rules[letter], list):
            diagnostics.append(f"rule '{letter}': expected a list of letters, found {type(rules[letter]).__name__}")
            continue
        cells = [str(c) for c in rules[letter]]
        if Q is not None and len(cells) != Q:
            diagnostics.append(f"rule '{letter}': expected {Q} cells, found {len(cells)}")
        for i, c in enumerate(cells):
            if c not in known:
                diagnostics.append(f"rule '{letter}' cell {i}: unknown letter '{c}'")
    for letter in rules:
        if str(letter) not in known:
            diagnostics.append(f"rule '{letter}': letter not in alphabet")


def _check_options(document, diagnostics):
    policy = document.get("aperiodic", "unknown")
    if policy not in APERIODICITY_POLICIES:
        diagnostics.append(f"aperiodic: expected one of {list(APERIODICITY_POLICIES)}, found '{policy}'")
    weights = document.get("weights", "uniform")
    if weights != "uniform" and not isinstance(weights, list):
        diagnostics.append("weights: expected \"uniform\" or a list of class weights")
    candidates = document.get("hull_candidates", [])
    if not isinstance(candidates, list) or not all(isinstance(c, list) for c in candidates):
        diagnostics.append("hull_candidates: expected a list of vectors")
    if not isinstance(document.get("analysis", {}), dict):
        diagnostics.append("analysis: expected a mapping of analysis defaults")


def build_family(family, diagnostics):
    """
    Substitution generated by a "family" block, or None with the problems appended

    Supported blocks:
        {"kind": "height", "h": [3]}
        {"kind": "hadamard", "matrix": [[1, -1], [-1, -1]], "q": [2], "configuration": [0, 1]}
    """
    if not isinstance(family, dict) or "kind" not in family:
        diagnostics.append("family: expected a mapping with a 'kind'")
        return None
    kind = family["kind"]
    if kind not in FAMILY_KINDS:
        diagnostics.append(f"family: unknown kind '{kind}', expected one of {list(FAMILY_KINDS)}")
        return None
    try:
        if kind == "height":
            return height_substitution(family.get("h", 1))
        return hadamard_substitution(family.get("matrix"), family.get("q"), family.get("configuration"))
    except SubstitutionInputError as e:
        diagnostics.extend(f"family: {d}" for d in e.diagnostics)
    except (TypeError, ValueError, IndexError) as e:
        diagnostics.append(f"family: invalid parameters for '{kind}' ({e})")
    return None


def _check_family(document, diagnostics):
    for key in REQUIRED_KEYS:
        if key in document:
            diagnostics.append(f"{key}: not allowed together with 'family'")
    for key in document:
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS + ("family",):
            diagnostics.append(f"unknown key '{key}'")
    return build_family(document["family"], diagnostics)


def validate_document(document):
    """Every problem of a decoded definition, as a list of messages"""
    if not isinstance(document, dict):
        return ["top level: expected a JSON object"]
    diagnostics = []
    if "family" in document:
        _check_family(document, diagnostics)
    else:
        q = _check_shape(document, diagnostics)
        _check_rules(document, q, diagnostics)
    _check_options(document, diagnostics)
    return diagnostics


def from_document(document, path=None):
    diagnostics = validate_document(document)
    if diagnostics:
        label = path or "definition"
        raise SubstitutionInputError(f"{label}: {len(diagnostics)} problem(s): " + "; ".join(diagnostics),
                                     diagnostics)
    name = document.get("name") or (os.path.splitext(os.path.basename(path))[0] if path else None)
    if "family" in document:
        built = build_family(document["family"], [])
        substitution = Substitution(built.q, built.alphabet, built.rules(),
                                    aperiodicity=document.get("aperiodic", built.aperiodicity),
                                    name=name or built.name)
    else:
        substitution = Substitution(
            document["q"], document["alphabet"],
            {str(a): [str(c) for c in cells] for a, cells in document["rules"].items()},
            aperiodicity=document.get("aperiodic", "unknown"),
            name=name,
        )
    return SubstitutionSpec(substitution, weights=document.get("weights", "uniform"),
                            hull_candidates=document.get("hull_candidates", []),
                            analysis=document.get("analysis", {}), path=path)


def parse_spec(path):
    """
    Load and validate a substitution definition file

    Args:
        path: path to a JSON definition

    Returns:
        SubstitutionSpec
    """
    logger.info(f"Reading substitution definition {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except FileNotFoundError:
        raise SubstitutionInputError(f"{path}: file not found", [f"file not found: {path}"]) from None
    except json.JSONDecodeError as e:
        message = f"line {e.lineno} column {e.colno}: {e.msg}"
        raise SubstitutionInputError(f"{path}: {message}", [message]) from None
    return from_document(document, path)


def serialize(spec):
    """Canonical JSON-ready form of a SubstitutionSpec"""
    S = spec.substitution
    return {
        "name": S.name,
        "dimension": S.d,
        "q": list(S.q),
        "alphabet": list(S.alphabet.letters),
        "aperiodic": S.aperiodicity,
        "rules": S.rules(),
        "weights": spec.weights,
        "hull_candidates": spec.hull_candidates,
        "analysis": spec.analysis,
    }


def write_spec(spec, path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(serialize(spec), f, indent=2)
    logger.info(f"Saved substitution definition to {path}")
    return path
