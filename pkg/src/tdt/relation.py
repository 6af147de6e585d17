"""Program-input accept relations: construction, on-disk formats, restrictions, statistics.

A relation records which of m programs accept which of n inputs as an m x n
boolean matrix. Program subsets are plain int bitmasks: bit j corresponds to
``programs[j]``. Everything downstream (diagrams, complexes, scores) consumes
these two representations.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import FormatError, StatisticUndefinedError, ValidationError
from .util import canonical_dumps, write_text

# Analysis operations hold dense vectors over all 2^m program subsets, so the
# program count is capped there (loading itself is not).
MAX_PROGRAMS = 24


@dataclass(frozen=True, eq=False)
class Relation:
    """Boolean accept matrix between named programs (rows) and named inputs (columns)."""

    programs: tuple[str, ...]
    inputs: tuple[str, ...]
    accepts: np.ndarray  # bool, shape (m, n)

    def __post_init__(self):
        programs = tuple(self.programs)
        inputs = tuple(self.inputs)
        matrix = np.asarray(self.accepts, dtype=bool)
        if matrix.ndim != 2:
            raise ValidationError("accept matrix must be two-dimensional")
        if len(programs) < 1:
            raise ValidationError("a relation needs at least one program")
        if matrix.shape != (len(programs), len(inputs)):
            raise ValidationError(
                f"matrix shape {matrix.shape} does not match "
                f"{len(programs)} programs x {len(inputs)} inputs"
            )
        if len(set(programs)) != len(programs):
            raise ValidationError("duplicate program identifiers")
        if len(set(inputs)) != len(inputs):
            raise ValidationError("duplicate input identifiers")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        object.__setattr__(self, "programs", programs)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "accepts", matrix)

    @property
    def m(self) -> int:
        return len(self.programs)

    @property
    def n(self) -> int:
        return len(self.inputs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (
            self.programs == other.programs
            and self.inputs == other.inputs
            and np.array_equal(self.accepts, other.accepts)
        )

    def __repr__(self) -> str:
        return f"Relation({self.m} programs x {self.n} inputs)"


@dataclass(frozen=True, eq=False)
class FeatureRelation:
    """Boolean matrix between named inputs (rows) and named features (columns)."""

    inputs: tuple[str, ...]
    features: tuple[str, ...]
    has_feature: np.ndarray  # bool, shape (n, p)

    def __post_init__(self):
        inputs = tuple(self.inputs)
        features = tuple(self.features)
        matrix = np.asarray(self.has_feature, dtype=bool)
        if matrix.ndim != 2 or matrix.shape != (len(inputs), len(features)):
            raise ValidationError(
                f"feature matrix shape {matrix.shape} does not match "
                f"{len(inputs)} inputs x {len(features)} features"
            )
        if len(set(inputs)) != len(inputs):
            raise ValidationError("duplicate input identifiers")
        if len(set(features)) != len(features):
            raise ValidationError("duplicate feature identifiers")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "has_feature", matrix)

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def p(self) -> int:
        return len(self.features)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureRelation):
            return NotImplemented
        return (
            self.inputs == other.inputs
            and self.features == other.features
            and np.array_equal(self.has_feature, other.has_feature)
        )


# ---------------------------------------------------------------------------
# mask helpers


def validate_mask(rel: Relation, mask: int) -> None:
    if mask < 0 or mask >> rel.m:
        raise ValidationError(f"mask {mask:#x} sets bits outside the {rel.m} programs")


def mask_from_names(rel: Relation, names: Iterable[str]) -> int:
    """Bitmask for a collection of program names."""
    index = {name: j for j, name in enumerate(rel.programs)}
    mask = 0
    for name in names:
        try:
            mask |= 1 << index[name]
        except KeyError:
            raise ValidationError(f"unknown program {name!r}") from None
    return mask


def names_from_mask(rel: Relation, mask: int) -> tuple[str, ...]:
    """Program names of a bitmask, in program order."""
    validate_mask(rel, mask)
    return tuple(rel.programs[j] for j in range(rel.m) if mask >> j & 1)


def column_masks(rel: Relation) -> list[int]:
    """Accept-set mask of every input, in input order."""
    if rel.m > 62:  # wider than int64: fall back to Python ints
        return [accept_set(rel, k) for k in range(rel.n)]
    weights = 1 << np.arange(rel.m, dtype=np.int64)
    return [int(v) for v in weights @ rel.accepts.astype(np.int64)]


def accept_set(rel: Relation, k: int) -> int:
    """Mask of the programs accepting input k."""
    if not 0 <= k < rel.n:
        raise ValidationError(f"input index {k} out of range for n={rel.n}")
    return sum(1 << j for j in range(rel.m) if rel.accepts[j, k])


# ---------------------------------------------------------------------------
# restrictions


def restrict_programs(rel: Relation, keep: int) -> Relation:
    """Row restriction to the programs in ``keep``; inputs are unchanged."""
    validate_mask(rel, keep)
    if keep == 0:
        raise ValidationError("cannot restrict to an empty program set")
    rows = [j for j in range(rel.m) if keep >> j & 1]
    return Relation(
        programs=tuple(rel.programs[j] for j in rows),
        inputs=rel.inputs,
        accepts=rel.accepts[rows, :],
    )


def restrict_inputs(rel: Relation, keep: Iterable[int]) -> Relation:
    """Column restriction to the given input indices (kept in ascending order)."""
    indices = sorted(set(keep))
    for k in indices:
        if not 0 <= k < rel.n:
            raise ValidationError(f"input index {k} out of range for n={rel.n}")
    return Relation(
        programs=rel.programs,
        inputs=tuple(rel.inputs[k] for k in indices),
        accepts=rel.accepts[:, indices] if indices else rel.accepts[:, :0],
    )


# ---------------------------------------------------------------------------
# elementary statistics


def acceptance_rates(rel: Relation) -> np.ndarray:
    """Fraction of the corpus each program accepts."""
    if rel.n == 0:
        raise StatisticUndefinedError("acceptance rate is undefined on an empty corpus")
    return rel.accepts.sum(axis=1) / rel.n


def conditional_acceptance(rel: Relation) -> np.ndarray:
    """m x m matrix: entry (j, i) = P(program i accepts | program j accepts).

    Rows conditioned on a program with zero acceptances are NaN (undefined),
    never 0.
    """
    counts = rel.accepts.astype(np.int64)
    both = counts @ counts.T
    per_program = counts.sum(axis=1)
    out = np.full((rel.m, rel.m), np.nan)
    defined = per_program > 0
    out[defined, :] = both[defined, :] / per_program[defined, None]
    return out


# ---------------------------------------------------------------------------
# on-disk formats


def _infer_format(path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("json", "csv"):
            raise ValidationError(f"unknown relation format {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".csv":
        return "csv"
    raise ValidationError(f"cannot infer relation format from {path!r}")


def load_relation(path, fmt: str | None = None) -> Relation:
    """Load a relation from the canonical JSON format or the transposed CSV format."""
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        return _load_json(path)
    return _load_csv(path)


def save_relation(rel: Relation, path, fmt: str | None = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        write_text(path, relation_json(rel))
    else:
        write_text(path, relation_csv(rel))


def relation_json(rel: Relation) -> str:
    """Canonical JSON serialization (rows are '0'/'1' strings, one per program)."""
    payload = {
        "programs": list(rel.programs),
        "inputs": list(rel.inputs),
        "rows": ["".join("1" if v else "0" for v in row) for row in rel.accepts],
    }
    return canonical_dumps(payload)


def _load_json(path) -> Relation:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(payload, dict):
        raise FormatError(f"{path}: top-level value must be an object")
    for field in ("programs", "inputs", "rows"):
        if field not in payload:
            raise FormatError(f"{path}: missing field {field!r}")
        if not isinstance(payload[field], list):
            raise FormatError(f"{path}: field {field!r} must be an array")
    programs = payload["programs"]
    inputs = payload["inputs"]
    rows = payload["rows"]
    if len(rows) != len(programs):
        raise FormatError(
            f"{path}: field 'rows' has {len(rows)} entries for {len(programs)} programs"
        )
    n = len(inputs)
    matrix = np.zeros((len(programs), n), dtype=bool)
    for j, row in enumerate(rows):
        if not isinstance(row, str) or len(row) != n:
            raise FormatError(f"{path}: rows[{j}] must be a string of length {n}")
        for k, cell in enumerate(row):
            if cell == "1":
                matrix[j, k] = True
            elif cell != "0":
                raise FormatError(f"{path}: rows[{j}][{k}] is {cell!r}, expected '0' or '1'")
    return Relation(programs=tuple(programs), inputs=tuple(inputs), accepts=matrix)


def relation_csv(rel: Relation) -> str:
    """Transposed CSV: header ``input,<prog...>``, one row per input, cells 0/1."""
    lines = ["input," + ",".join(rel.programs)]
    for k, name in enumerate(rel.inputs):
        cells = ",".join("1" if rel.accepts[j, k] else "0" for j in range(rel.m))
        lines.append(f"{name},{cells}" if rel.m else name)
    return "\n".join(lines) + "\n"


def _load_csv(path) -> Relation:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if not header or header[0] != "input":
            raise FormatError(f"{path}: line 1: header must start with 'input'")
        programs = header[1:]
        if not programs:
            raise FormatError(f"{path}: line 1: no program columns")
        inputs: list[str] = []
        columns: list[list[bool]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(programs) + 1:
                raise FormatError(
                    f"{path}: line {lineno}: expected {len(programs) + 1} cells, got {len(row)}"
                )
            inputs.append(row[0])
            col = []
            for field, cell in zip(programs, row[1:]):
                if cell not in ("0", "1"):
                    raise FormatError(
                        f"{path}: line {lineno}: column {field!r} is {cell!r}, expected 0 or 1"
                    )
                col.append(cell == "1")
            columns.append(col)
    matrix = (
        np.array(columns, dtype=bool).T
        if columns
        else np.zeros((len(programs), 0), dtype=bool)
    )
    return Relation(programs=tuple(programs), inputs=tuple(inputs), accepts=matrix)


def relation_pgm(rel: Relation) -> str:
    """ASCII PGM (P2) image of the matrix: accept=255, reject=0, one pixel per cell."""
    lines = ["P2", f"{rel.n} {rel.m}", "255"]
    for row in rel.accepts:
        lines.append(" ".join("255" if v else "0" for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# feature relation CSV


def load_feature_relation(path) -> FeatureRelation:
    """CSV with header ``input,<feat...>`` and 0/1 cells."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if not header or header[0] != "input":
            raise FormatError(f"{path}: line 1: header must start with 'input'")
        features = header[1:]
        inputs: list[str] = []
        rows: list[list[bool]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(features) + 1:
                raise FormatError(
                    f"{path}: line {lineno}: expected {len(features) + 1} cells, got {len(row)}"
                )
            inputs.append(row[0])
            for cell in row[1:]:
                if cell not in ("0", "1"):
                    raise FormatError(f"{path}: line {lineno}: cell {cell!r}, expected 0 or 1")
            rows.append([cell == "1" for cell in row[1:]])
    matrix = (
        np.array(rows, dtype=bool)
        if rows
        else np.zeros((0, len(features)), dtype=bool)
    )
    return FeatureRelation(inputs=tuple(inputs), features=tuple(features), has_feature=matrix)


def feature_relation_csv(feats: FeatureRelation) -> str:
    lines = ["input," + ",".join(feats.features)]
    for k, name in enumerate(feats.inputs):
        cells = ",".join("1" if v else "0" for v in feats.has_feature[k])
        lines.append(f"{name},{cells}" if feats.p else name)
    return "\n".join(lines) + "\n"
