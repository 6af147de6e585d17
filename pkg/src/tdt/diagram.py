"""Weighted Venn diagrams: exact region weights over the program power set.

The weight of a program subset X is the number of inputs whose accept-set is
exactly X. A region is deficient when some facet (one program fewer) outweighs
it; a diagram with no deficient region is consistent, i.e. its weights are
nondecreasing along inclusion. Equal weights along a covering pair count as
consistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapacityError, ValidationError
from .relation import MAX_PROGRAMS, Relation, column_masks, names_from_mask, validate_mask
from .util import canonical_dumps, facet_masks, popcount


@dataclass(frozen=True)
class WeightedDiagram:
    """Dense weight vector indexed by program-subset mask (length 2^m)."""

    m: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("diagram needs at least one program")
        weights = tuple(int(w) for w in self.weights)
        if len(weights) != 1 << self.m:
            raise ValidationError(
                f"expected {1 << self.m} region weights, got {len(weights)}"
            )
        if any(w < 0 for w in weights):
            raise ValidationError("region weights must be non-negative")
        object.__setattr__(self, "weights", weights)

    @property
    def total(self) -> int:
        return sum(self.weights)

    def weight(self, mask: int) -> int:
        return self.weights[mask]


def _check_capacity(m: int) -> None:
    if m > MAX_PROGRAMS:
        raise CapacityError(
            f"{m} programs exceed the {MAX_PROGRAMS}-program cap for dense power-set analysis"
        )


def build_diagram(rel: Relation) -> WeightedDiagram:
    """Count, for every program subset, the inputs accepted by exactly that subset."""
    _check_capacity(rel.m)
    weights = [0] * (1 << rel.m)
    for mask in column_masks(rel):
        weights[mask] += 1
    return WeightedDiagram(m=rel.m, weights=tuple(weights))


def deficiency(diag: WeightedDiagram, mask: int) -> int:
    """How far a region falls short of its heaviest facet (positive iff deficient)."""
    if mask == 0:
        return 0
    return max(diag.weights[f] for f in facet_masks(mask)) - diag.weights[mask]


def deficient_regions(diag: WeightedDiagram) -> set[int]:
    """Regions strictly outweighed by one of their facets. The empty region never is."""
    return {
        mask
        for mask in range(1, 1 << diag.m)
        if deficiency(diag, mask) > 0
    }


def is_consistent(diag: WeightedDiagram) -> bool:
    return not any(deficiency(diag, mask) > 0 for mask in range(1, 1 << diag.m))


def project_diagram(diag: WeightedDiagram, sigma: int) -> WeightedDiagram:
    """Diagram of the relation restricted to the programs in ``sigma``.

    Region Z of the projection collects every region X with X & sigma == Z;
    bit t of the result corresponds to the t-th set bit of sigma.
    """
    if sigma == 0:
        raise ValidationError("cannot project onto an empty program set")
    if sigma >> diag.m:
        raise ValidationError(f"mask {sigma:#x} sets bits outside the {diag.m} programs")
    kept = [j for j in range(diag.m) if sigma >> j & 1]
    out = [0] * (1 << len(kept))
    for mask, w in enumerate(diag.weights):
        z = 0
        for t, j in enumerate(kept):
            if mask >> j & 1:
                z |= 1 << t
        out[z] += w
    return WeightedDiagram(m=len(kept), weights=tuple(out))


def pair_inconsistent_inputs(rel: Relation, sigma: int, tau: int) -> set[int]:
    """Inputs blamed for the inconsistency of a nested pair sigma <= tau.

    Empty unless weight(sigma) > weight(tau); otherwise the inputs accepted by
    every program in sigma but rejected by at least one program in tau - sigma.
    """
    validate_mask(rel, sigma)
    validate_mask(rel, tau)
    if sigma & ~tau:
        raise ValidationError("sigma must be a subset of tau")
    diag = build_diagram(rel)
    if diag.weights[sigma] <= diag.weights[tau]:
        return set()
    extra = tau & ~sigma
    out = set()
    for k, mask in enumerate(column_masks(rel)):
        if mask & sigma == sigma and extra & ~mask:
            out.add(k)
    return out


def regions_by_mask_order(m: int) -> Iterator[int]:
    """All nonempty masks ordered by (popcount, mask) — the canonical report order."""
    return iter(sorted(range(1, 1 << m), key=lambda mask: (popcount(mask), mask)))


def subset_label(names: Sequence[str]) -> str:
    """Stable text key for a program subset: sorted names, comma-joined ('' for the empty set)."""
    return ",".join(sorted(names))


def diagram_report(rel: Relation, diag: WeightedDiagram | None = None) -> str:
    """Canonical JSON report: every region weight, the deficient regions, the verdict."""
    if diag is None:
        diag = build_diagram(rel)
    weights = {
        subset_label(names_from_mask(rel, mask)): diag.weights[mask]
        for mask in range(1 << diag.m)
    }
    deficient = [
        subset_label(names_from_mask(rel, mask))
        for mask in sorted(deficient_regions(diag), key=lambda m_: (popcount(m_), m_))
    ]
    payload = {
        "weights": weights,
        "deficient": deficient,
        "consistent": not deficient,
    }
    return canonical_dumps(payload)
