"""Distilling a consistent program subset and a consistent subcorpus.

Three stages: a singleton screen drops programs that reject more than they
accept; an iterative pass removes one program at a time until no region of the
weighted diagram is deficient; a filtration threshold then selects the inputs
whose region weight clears the cut.  Alongside, every input gets an
inconsistency score: the number of swept program subsets under whose
restriction it is inconsistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .diagram import (
    WeightedDiagram,
    build_diagram,
    deficiency,
    deficient_regions,
    is_consistent,
)
from .dowker import DowkerComplex, maximal_masks, connected_components, inconsistent_inputs
from .errors import (
    CapacityError,
    EmptyScreenError,
    InconsistentDiagramError,
    ValidationError,
)
from .relation import MAX_PROGRAMS, Relation, column_masks, restrict_programs
from .util import canonical_dumps, facet_masks, popcount, submasks


@dataclass(frozen=True)
class ScreenRemoval:
    program: str
    accepted: int
    rejected: int


@dataclass(frozen=True)
class DistillStep:
    region: tuple[str, ...]   # deficient region chosen this round
    face: tuple[str, ...]     # its heaviest facet
    removed: str              # the program separating the two


@dataclass(frozen=True)
class DistillTrace:
    initial_removals: tuple[ScreenRemoval, ...]
    steps: tuple[DistillStep, ...]
    final_programs: tuple[str, ...]
    final_relation: Relation


@dataclass(frozen=True)
class ScoreVector:
    """Per-input inconsistency scores plus the subset sweep that produced them."""

    inputs: tuple[str, ...]
    scores: tuple[int, ...]
    swept: tuple[int, ...]          # program-subset masks, ascending
    min_subset_size: int
    mode: str

    def histogram(self) -> list[tuple[int, int]]:
        counts: dict[int, int] = {}
        for s in self.scores:
            counts[s] = counts.get(s, 0) + 1
        return sorted(counts.items())


@dataclass(frozen=True)
class ThresholdRow:
    threshold: int
    excluded: int
    components: int


def singleton_screen(rel: Relation) -> tuple[Relation, tuple[ScreenRemoval, ...]]:
    """Keep the programs whose one-program diagram is consistent (accepts >= rejects)."""
    if rel.n < 1:
        raise ValidationError("singleton screen needs a non-empty corpus")
    removed = []
    keep = 0
    for j, name in enumerate(rel.programs):
        accepted = int(rel.accepts[j].sum())
        rejected = rel.n - accepted
        if accepted >= rejected:
            keep |= 1 << j
        else:
            removed.append(ScreenRemoval(program=name, accepted=accepted, rejected=rejected))
    if keep == 0:
        detail = ", ".join(f"{r.program}: {r.accepted}/{rel.n} accepted" for r in removed)
        raise EmptyScreenError(f"every program rejects a majority of the corpus ({detail})")
    return restrict_programs(rel, keep), tuple(removed)


def _pick_deficient_region(diag: WeightedDiagram) -> int:
    """Largest deficient region; ties by larger deficiency, then ascending mask."""
    regions = deficient_regions(diag)
    return min(
        regions,
        key=lambda mask: (-popcount(mask), -deficiency(diag, mask), mask),
    )


def _pick_heaviest_facet(diag: WeightedDiagram, region: int) -> int:
    """Heaviest facet of a region (the empty set counts); ties by ascending mask."""
    return min(facet_masks(region), key=lambda f: (-diag.weights[f], f))


def distill(rel: Relation) -> DistillTrace:
    """Screen singletons, then drop one program per round until the diagram is consistent."""
    if rel.m > MAX_PROGRAMS:
        raise CapacityError(
            f"{rel.m} programs exceed the {MAX_PROGRAMS}-program cap for distillation"
        )
    current, removed = singleton_screen(rel)
    steps = []
    while True:
        diag = build_diagram(current)
        if is_consistent(diag):
            break
        region = _pick_deficient_region(diag)
        face = _pick_heaviest_facet(diag, region)
        removed_bit = region & ~face
        removed_index = removed_bit.bit_length() - 1
        steps.append(
            DistillStep(
                region=tuple(current.programs[j] for j in range(current.m) if region >> j & 1),
                face=tuple(current.programs[j] for j in range(current.m) if face >> j & 1),
                removed=current.programs[removed_index],
            )
        )
        keep = ((1 << current.m) - 1) & ~(1 << removed_index)
        current = restrict_programs(current, keep)
    return DistillTrace(
        initial_removals=removed,
        steps=tuple(steps),
        final_programs=current.programs,
        final_relation=current,
    )


def trace_json(trace: DistillTrace) -> str:
    payload = {
        "screened": [r.program for r in trace.initial_removals],
        "steps": [
            {"region": list(s.region), "face": list(s.face), "removed": s.removed}
            for s in trace.steps
        ],
        "final": list(trace.final_programs),
    }
    return canonical_dumps(payload)


def inconsistency_scores(
    rel: Relation,
    min_subset_size: int = 2,
    mode: Literal["subset", "pairs"] = "subset",
) -> ScoreVector:
    """Score every input by how many swept program subsets call it inconsistent.

    ``subset`` mode (canonical) sweeps the restrictions to every program subset
    of size >= min_subset_size and collects each restriction's inconsistent
    inputs.  ``pairs`` mode instead sweeps every nested pair of subsets and
    counts pairwise blame.
    """
    if rel.m > MAX_PROGRAMS:
        raise CapacityError(
            f"{rel.m} programs exceed the {MAX_PROGRAMS}-program cap for the score sweep"
        )
    if min_subset_size < 1:
        raise ValidationError("min_subset_size must be >= 1")
    if mode not in ("subset", "pairs"):
        raise ValidationError(f"unknown score mode {mode!r}")
    scores = [0] * rel.n
    swept = [
        mask for mask in range(1, 1 << rel.m) if popcount(mask) >= min_subset_size
    ]
    if mode == "subset":
        for mask in swept:
            for k in inconsistent_inputs(restrict_programs(rel, mask)):
                scores[k] += 1
    else:
        diag = build_diagram(rel)
        masks = column_masks(rel)
        for tau in swept:
            for sigma in submasks(tau):
                if sigma == tau or diag.weights[sigma] <= diag.weights[tau]:
                    continue
                extra = tau & ~sigma
                for k, mask in enumerate(masks):
                    if mask & sigma == sigma and extra & ~mask:
                        scores[k] += 1
    return ScoreVector(
        inputs=rel.inputs,
        scores=tuple(scores),
        swept=tuple(swept),
        min_subset_size=min_subset_size,
        mode=mode,
    )


def scores_csv(vec: ScoreVector) -> str:
    lines = ["input_id,score"]
    lines.extend(f"{name},{score}" for name, score in zip(vec.inputs, vec.scores))
    return "\n".join(lines) + "\n"


def histogram_csv(vec: ScoreVector) -> str:
    lines = ["score,count"]
    lines.extend(f"{score},{count}" for score, count in vec.histogram())
    return "\n".join(lines) + "\n"


def select_inputs(
    rel: Relation, threshold: int
) -> tuple[tuple[int, ...], tuple[ThresholdRow, ...]]:
    """Keep the inputs whose region weight reaches the threshold.

    Requires a consistent diagram (distill first), so the weights form a
    filtration and the cut is a sublevel selection.  The report lists, for
    every candidate threshold, how many inputs it would exclude and how many
    connected components the surviving complex has.
    """
    if threshold < 0:
        raise ValidationError("threshold must be >= 0")
    diag = build_diagram(rel)
    if not is_consistent(diag):
        raise InconsistentDiagramError(
            "the diagram is inconsistent; distill the relation before selecting inputs"
        )
    masks = column_masks(rel)
    kept = tuple(k for k, mask in enumerate(masks) if diag.weights[mask] >= threshold)
    candidates = sorted({w for w in diag.weights if w > 0} | {threshold})
    report = []
    for t in candidates:
        excluded = sum(1 for mask in masks if diag.weights[mask] < t)
        surviving = [
            mask for mask in range(1, 1 << rel.m) if diag.weights[mask] >= t
        ]
        cpx = DowkerComplex(
            width=rel.m,
            labels=rel.programs,
            facets=maximal_masks(surviving),
            weights={},
        )
        count, _ = connected_components(cpx)
        report.append(ThresholdRow(threshold=t, excluded=excluded, components=count))
    return kept, tuple(report)


def selection_report_csv(report: tuple[ThresholdRow, ...]) -> str:
    lines = ["threshold,excluded,components"]
    lines.extend(f"{r.threshold},{r.excluded},{r.components}" for r in report)
    return "\n".join(lines) + "\n"
