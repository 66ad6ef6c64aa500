"""Problem documents: JSON with complex numbers stored as ``[re, im]`` pairs.

Layout::

    {
      "n": 3, "m": 2,
      "coefficients": [A_0, ..., A_m],      # each n rows of n [re, im] pairs
      "targets": [[re, im], ...],
      "weights": [w_0, ..., w_m] | "unit" | "norms",   # optional, default "norms"
      "gamma_range": [lo, hi],              # optional
      "strategy": "min-upper"               # optional
    }

Perturbed-polynomial documents have the same layout (coefficients of Q) plus
a ``"perturbation"`` object.
"""
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PolydistError, ProblemFormatError
from .matpoly import MatrixPolynomial, TargetSet, WeightSet

FORMAT_TAG = "polydist-problem/1"


@dataclass(frozen=True, eq=False)
class Problem:
    P: MatrixPolynomial
    targets: TargetSet
    weights: WeightSet
    weights_spec: Optional[str] = None  # "unit"/"norms" when given symbolically, None when defaulted
    gamma_range: Optional[tuple] = None
    strategy: Optional[str] = None
    extra: Optional[dict] = None


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(M):
    return [[complex_to_json(z) for z in row] for row in np.asarray(M)]


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ProblemFormatError(f"expected a number, got {json.dumps(x)}", where)
    if not math.isfinite(x):
        raise ProblemFormatError("number is not finite", where)
    return float(x)


def _complex(x, where):
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(_number(x, where))
    if not isinstance(x, list) or len(x) != 2:
        raise ProblemFormatError("expected a [re, im] pair", where)
    return complex(_number(x[0], f"{where}[0]"), _number(x[1], f"{where}[1]"))


def _matrix(x, n, where):
    if not isinstance(x, list) or len(x) != n:
        raise ProblemFormatError(f"expected {n} rows", where)
    out = np.zeros((n, n), dtype=np.complex128)
    for r, row in enumerate(x):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFormatError(f"expected {n} entries", f"{where}[{r}]")
        for c, z in enumerate(row):
            out[r, c] = _complex(z, f"{where}[{r}][{c}]")
    return out


def _require(doc, key):
    if key not in doc:
        raise ProblemFormatError("missing field", key)
    return doc[key]


def problem_from_dict(doc):
    if not isinstance(doc, dict):
        raise ProblemFormatError("top level must be an object")
    coeffs = _require(doc, "coefficients")
    if not isinstance(coeffs, list) or not coeffs:
        raise ProblemFormatError("expected a nonempty list of matrices", "coefficients")
    n = doc.get("n")
    if n is None:
        n = len(coeffs[0]) if isinstance(coeffs[0], list) else 0
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ProblemFormatError("must be a positive integer", "n")
    m = doc.get("m", len(coeffs) - 1)
    if isinstance(m, bool) or not isinstance(m, int) or m != len(coeffs) - 1:
        raise ProblemFormatError(f"degree {m} disagrees with {len(coeffs)} coefficients", "m")
    mats = tuple(_matrix(A, n, f"coefficients[{j}]") for j, A in enumerate(coeffs))
    try:
        P = MatrixPolynomial(mats)
    except PolydistError as exc:
        raise ProblemFormatError(str(exc), "coefficients") from exc

    raw_targets = _require(doc, "targets")
    if not isinstance(raw_targets, list) or not raw_targets:
        raise ProblemFormatError("expected a nonempty list", "targets")
    mu = [_complex(z, f"targets[{i}]") for i, z in enumerate(raw_targets)]
    try:
        targets = TargetSet(mu)
        targets.check_fits(P)
    except PolydistError as exc:
        raise ProblemFormatError(str(exc), "targets") from exc

    spec = doc.get("weights")
    try:
        if spec is None:
            weights, weights_spec = WeightSet.coefficient_norms(P), None
        elif spec == "norms":
            weights, weights_spec = WeightSet.coefficient_norms(P), "norms"
        elif spec == "unit":
            weights, weights_spec = WeightSet.unit(P.m), "unit"
        elif isinstance(spec, list):
            w = [_number(x, f"weights[{j}]") for j, x in enumerate(spec)]
            if len(w) != m + 1:
                raise ProblemFormatError(f"expected {m + 1} weights", "weights")
            weights, weights_spec = WeightSet(w), None
        else:
            raise ProblemFormatError('expected a list, "unit" or "norms"', "weights")
    except ProblemFormatError:
        raise
    except PolydistError as exc:
        raise ProblemFormatError(str(exc), "weights") from exc

    gamma_range = doc.get("gamma_range")
    if gamma_range is not None:
        if not isinstance(gamma_range, list) or len(gamma_range) != 2:
            raise ProblemFormatError("expected [lo, hi]", "gamma_range")
        gamma_range = (_number(gamma_range[0], "gamma_range[0]"), _number(gamma_range[1], "gamma_range[1]"))
        if not 0 <= gamma_range[0] < gamma_range[1]:
            raise ProblemFormatError("need 0 <= lo < hi", "gamma_range")
    strategy = doc.get("strategy")
    if strategy is not None and strategy not in ("min-upper", "max-lower", "min-gap"):
        raise ProblemFormatError(f"unknown strategy {strategy!r}", "strategy")
    extra = {k: v for k, v in doc.items() if k == "perturbation"} or None
    return Problem(P, targets, weights, weights_spec, gamma_range, strategy, extra)


def problem_to_dict(problem, explicit_weights=False):
    doc = {
        "format": FORMAT_TAG,
        "n": problem.P.n,
        "m": problem.P.m,
        "coefficients": [matrix_to_json(A) for A in problem.P.coeffs],
        "targets": [complex_to_json(z) for z in problem.targets.targets],
    }
    if problem.weights_spec is not None and not explicit_weights:
        doc["weights"] = problem.weights_spec
    else:
        doc["weights"] = [float(x) for x in problem.weights.weights]
    if problem.gamma_range is not None:
        doc["gamma_range"] = list(problem.gamma_range)
    if problem.strategy is not None:
        doc["strategy"] = problem.strategy
    if problem.extra:
        doc.update(problem.extra)
    return doc


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return problem_from_dict(doc)


def _depth(x):
    if isinstance(x, list):
        return 1 + max((_depth(y) for y in x), default=0)
    if isinstance(x, dict):
        return 99
    return 0


def to_text(obj, indent=0):
    """JSON with shallow lists kept on one line, so a matrix prints one row per line."""
    pad = " " * (indent + 1)
    if isinstance(obj, dict):
        items = [f"{pad}{json.dumps(k)}: {to_text(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    if isinstance(obj, list) and _depth(obj) > 2:
        items = [pad + to_text(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"
    return json.dumps(obj)


def dumps(problem, **kwargs):
    return to_text(problem_to_dict(problem, **kwargs)) + "\n"


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def parse_targets(text):
    """Targets from a JSON list (``[[re, im], ...]`` or plain reals) or from a file holding one."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        try:
            with open(text, encoding="utf-8") as fh:
                raw = json.loads(fh.read())
        except OSError as exc:
            raise ProblemFormatError(f"neither a JSON list nor a readable file: {exc}", "--targets") from exc
        except json.JSONDecodeError as exc:
            raise ProblemFormatError(exc.msg, f"{text}: line {exc.lineno}, column {exc.colno}") from exc
    if isinstance(raw, dict):
        raw = _require(raw, "targets")
    if not isinstance(raw, list) or not raw:
        raise ProblemFormatError("expected a nonempty list", "targets")
    try:
        return TargetSet([_complex(z, f"targets[{i}]") for i, z in enumerate(raw)])
    except ProblemFormatError:
        raise
    except PolydistError as exc:
        raise ProblemFormatError(str(exc), "targets") from exc
