"""Problem files: JSON documents with exact decimal or rational entries.

    {
      "name": "jp-pair",
      "matrices": [[["1/5", "0"], ["1/5", "3/5"]], [["3/5", "1/5"], ["0", "1/5"]]],
      "p": "3.5",
      "weights": null,
      "conjugator": [["3", "-1"], ["-1", "3"]],
      "precision_bits": 256,
      "methods": {"det": {"n": 12}}
    }

Numbers may be JSON strings (preferred, parsed exactly) or JSON integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .linalg import DEFAULT_PRECISION, Matrix, MatrixTuple, PRadiusError, parse_scalar, working_precision

FIXTURES = {
    "jp-pair": {
        "name": "jp-pair",
        "matrices": [
            [["1/5", "0"], ["1/5", "3/5"]],
            [["3/5", "1/5"], ["0", "1/5"]],
        ],
        "p": "3.5",
        "conjugator": [["3", "-1"], ["-1", "3"]],
        "precision_bits": DEFAULT_PRECISION,
    },
}


class ProblemError(PRadiusError, ValueError):
    """A problem file is malformed."""


@dataclass
class ProblemSpec:
    matrices: list
    p: str
    weights: list | None = None
    conjugator: list | None = None
    precision_bits: int = DEFAULT_PRECISION
    methods: dict = field(default_factory=dict)
    name: str | None = None

    def matrix_tuple(self) -> MatrixTuple:
        return MatrixTuple.from_rows(self.matrices, self.weights, self.precision_bits)

    def conjugator_matrix(self) -> Matrix | None:
        if self.conjugator is None:
            return None
        with working_precision(self.precision_bits):
            return Matrix.from_rows(self.conjugator)


def _line_of(text: str | None, needle) -> str:
    if not text or needle is None:
        return ""
    idx = text.find(json.dumps(needle) if not isinstance(needle, str) else f'"{needle}"')
    if idx < 0:
        return ""
    return f" (line {text.count(chr(10), 0, idx) + 1})"


def _check_number(value, where: str, text: str | None):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ProblemError(f"{where}: expected a string or integer, got {value!r}{_line_of(text, value)}")
    try:
        parse_scalar(value)
    except (ValueError, TypeError):
        raise ProblemError(f"{where}: cannot parse {value!r} as a real number{_line_of(text, value)}") from None
    return str(value)


def parse_problem(data: dict, text: str | None = None) -> ProblemSpec:
    """Validate a decoded problem document; errors name the offending field."""
    if not isinstance(data, dict):
        raise ProblemError("problem must be a JSON object")
    if "matrices" not in data:
        raise ProblemError("missing field 'matrices'")
    mats = data["matrices"]
    if not isinstance(mats, list) or not mats:
        raise ProblemError("matrices: expected a non-empty list of square matrices")
    d = None
    clean = []
    for i, m in enumerate(mats):
        if not isinstance(m, list) or not m or any(not isinstance(r, list) or len(r) != len(m) for r in m):
            raise ProblemError(f"matrices[{i}]: expected a square list of rows")
        if d is None:
            d = len(m)
        elif len(m) != d:
            raise ProblemError(f"matrices[{i}]: dimension {len(m)} differs from {d}")
        clean.append([[_check_number(x, f"matrices[{i}][{r}][{c}]", text) for c, x in enumerate(row)]
                      for r, row in enumerate(m)])
    p = _check_number(data.get("p", "1"), "p", text)
    weights = data.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != len(clean):
            raise ProblemError(f"weights: expected a list of {len(clean)} entries")
        weights = [_check_number(w, f"weights[{i}]", text) for i, w in enumerate(weights)]
    conj = data.get("conjugator")
    if conj is not None:
        if not isinstance(conj, list) or len(conj) != d or any(not isinstance(r, list) or len(r) != d
                                                               for r in conj):
            raise ProblemError(f"conjugator: expected a {d}x{d} list of rows")
        conj = [[_check_number(x, f"conjugator[{r}][{c}]", text) for c, x in enumerate(row)]
                for r, row in enumerate(conj)]
    prec = data.get("precision_bits", DEFAULT_PRECISION)
    if isinstance(prec, bool) or not isinstance(prec, int) or prec < 64:
        raise ProblemError(f"precision_bits: expected an integer >= 64, got {prec!r}")
    methods = data.get("methods", {})
    if not isinstance(methods, dict):
        raise ProblemError("methods: expected an object keyed by method name")
    return ProblemSpec(clean, p, weights, conj, prec, methods, data.get("name"))


def load_problem(source: str | Path) -> ProblemSpec:
    """Read a problem file, or return a built-in fixture such as ``"jp-pair"``."""
    path = Path(source)
    if not path.exists() and str(source) in FIXTURES:
        return parse_problem(FIXTURES[str(source)])
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemError(f"{source}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse_problem(data, text)
    except ProblemError as exc:
        raise ProblemError(f"{source}: {exc}") from None
