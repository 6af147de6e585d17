"""Attributing inconsistency to input features.

The relation product asks, for a program subset X and a feature, whether every
input that is inconsistent under the restriction to X carries the feature (the
strict variant also forbids the feature on consistent inputs).  Features are
then stratified by the smallest number of dropped programs at which they pass
that test for every subset of the corresponding size, and greedy pruning
removes the features whose deletion perturbs the stratification least, as
measured by variation of information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .dowker import inconsistent_inputs
from .errors import ValidationError
from .relation import FeatureRelation, Relation, restrict_programs
from .util import canonical_dumps, mask_of


def _check_alignment(rel: Relation, feats: FeatureRelation) -> None:
    if rel.inputs != feats.inputs:
        raise ValidationError("feature relation inputs do not match the relation's inputs")


def relation_product(
    rel: Relation, feats: FeatureRelation, subset: int, strict: bool = False
) -> np.ndarray:
    """Per-feature flags: does every input inconsistent under the restriction to
    ``subset`` carry the feature?  Empty conjunctions are true.

    Strict mode additionally requires that no other input carries the feature
    (the complement is taken within the whole corpus).
    """
    _check_alignment(rel, feats)
    if subset == 0:
        raise ValidationError("program subset must be nonempty")
    inc = inconsistent_inputs(restrict_programs(rel, subset))
    inc_rows = sorted(inc)
    out = (
        feats.has_feature[inc_rows].all(axis=0)
        if inc_rows
        else np.ones(feats.p, dtype=bool)
    )
    if strict:
        other_rows = [k for k in range(rel.n) if k not in inc]
        if other_rows:
            out = out & ~feats.has_feature[other_rows].any(axis=0)
    return out


@dataclass(frozen=True)
class FeatureAttribution:
    """Full feature-attribution sweep over the program subsets of each size.

    ``product[(mask, feature)]`` is the relation-product flag for that subset;
    level r collects the features flagged for EVERY subset of size m - r; the
    stratification assigns each feature the smallest such r (None if it reaches
    none within the sweep).  Raw levels may overlap, the stratification is a
    partition by construction.
    """

    features: tuple[str, ...]
    product: dict[tuple[int, str], bool]
    levels: dict[int, frozenset[str]]
    stratification: dict[str, int | None]


def attribute_features(
    rel: Relation,
    feats: FeatureRelation,
    max_removed: int | None = None,
    strict: bool = False,
) -> FeatureAttribution:
    """Sweep the relation product over every subset of size m-r for r = 0..max_removed."""
    _check_alignment(rel, feats)
    top = rel.m - 1 if max_removed is None else max_removed
    if top < 0 or top > rel.m - 1:
        raise ValidationError(f"max_removed must lie in 0..{rel.m - 1}")
    product: dict[tuple[int, str], bool] = {}
    levels: dict[int, frozenset[str]] = {}
    strat: dict[str, int | None] = {name: None for name in feats.features}
    for r in range(top + 1):
        hits = np.ones(feats.p, dtype=bool)
        for combo in combinations(range(rel.m), rel.m - r):
            mask = mask_of(combo)
            flags = relation_product(rel, feats, mask, strict=strict)
            for i, name in enumerate(feats.features):
                product[(mask, name)] = bool(flags[i])
            hits &= flags
        members = frozenset(feats.features[i] for i in np.flatnonzero(hits))
        levels[r] = members
        for name in members:
            if strat[name] is None:
                strat[name] = r
    return FeatureAttribution(
        features=feats.features, product=product, levels=levels, stratification=strat
    )


def feature_strata(
    rel: Relation,
    feats: FeatureRelation,
    max_removed: int | None = None,
    strict: bool = False,
) -> tuple[dict[int, frozenset[str]], dict[str, int | None]]:
    """Level sets and min-r stratification only (see attribute_features)."""
    attribution = attribute_features(rel, feats, max_removed=max_removed, strict=strict)
    return attribution.levels, attribution.stratification


def variation_of_information(
    parts_a: Sequence[Iterable[Hashable]], parts_b: Sequence[Iterable[Hashable]]
) -> float:
    """Entropy-based distance between two partitions of the same ground set, in bits."""
    blocks_a = [frozenset(block) for block in parts_a if len(frozenset(block))]
    blocks_b = [frozenset(block) for block in parts_b if len(frozenset(block))]
    ground_a: set = set()
    for block in blocks_a:
        if ground_a & block:
            raise ValidationError("first partition has overlapping blocks")
        ground_a |= block
    ground_b: set = set()
    for block in blocks_b:
        if ground_b & block:
            raise ValidationError("second partition has overlapping blocks")
        ground_b |= block
    if ground_a != ground_b:
        raise ValidationError("partitions must cover the same ground set")
    if not ground_a:
        raise ValidationError("ground set must be nonempty")
    n = len(ground_a)
    vi = 0.0
    for a in blocks_a:
        pa = len(a) / n
        for b in blocks_b:
            joint = len(a & b) / n
            if joint:
                pb = len(b) / n
                vi -= joint * (math.log2(joint / pa) + math.log2(joint / pb))
    return abs(vi)


def _strat_partition(strat: dict[str, int | None]) -> list[set[str]]:
    blocks: dict[int | None, set[str]] = {}
    for name, level in strat.items():
        blocks.setdefault(level, set()).add(name)
    return [blocks[key] for key in sorted(blocks, key=lambda v: (v is None, v))]


def _zero_columns(feats: FeatureRelation, names: set[str]) -> FeatureRelation:
    matrix = feats.has_feature.copy()
    for i, name in enumerate(feats.features):
        if name in names:
            matrix[:, i] = False
    return FeatureRelation(inputs=feats.inputs, features=feats.features, has_feature=matrix)


@dataclass(frozen=True)
class PruneStep:
    feature: str
    vi: float


def greedy_feature_pruning(
    rel: Relation,
    feats: FeatureRelation,
    rounds: int,
    max_removed: int | None = None,
    strict: bool = False,
) -> tuple[PruneStep, ...]:
    """Repeatedly blank out the feature whose removal least disturbs the stratification.

    Removal zeroes the feature's column (the ground set of features is fixed),
    so each round compares the stratification partitions before and after by
    variation of information and drops the minimizer, ties to the lowest
    feature index.
    """
    _check_alignment(rel, feats)
    if rounds < 0 or rounds > feats.p:
        raise ValidationError(f"rounds must lie in 0..{feats.p}")
    removed: set[str] = set()
    steps: list[PruneStep] = []
    current = feats
    for _ in range(rounds):
        _, strat_before = feature_strata(rel, current, max_removed=max_removed, strict=strict)
        before = _strat_partition(strat_before)
        best: tuple[float, int] | None = None
        for i, name in enumerate(feats.features):
            if name in removed:
                continue
            candidate = _zero_columns(feats, removed | {name})
            _, strat_after = feature_strata(
                rel, candidate, max_removed=max_removed, strict=strict
            )
            vi = variation_of_information(before, _strat_partition(strat_after))
            if best is None or (vi, i) < best:
                best = (vi, i)
        assert best is not None
        vi, index = best
        name = feats.features[index]
        removed.add(name)
        current = _zero_columns(feats, removed)
        steps.append(PruneStep(feature=name, vi=vi))
    return tuple(steps)


def attribution_json(
    rel: Relation,
    feats: FeatureRelation,
    max_removed: int | None = None,
    strict: bool = False,
    prune_rounds: int = 0,
) -> str:
    levels, strat = feature_strata(rel, feats, max_removed=max_removed, strict=strict)
    pruning = greedy_feature_pruning(
        rel, feats, prune_rounds, max_removed=max_removed, strict=strict
    )
    payload = {
        "levels": {str(r): sorted(members) for r, members in levels.items()},
        "stratification": {name: strat[name] for name in feats.features},
        "pruning": [{"removed": s.feature, "vi": s.vi} for s in pruning],
    }
    return canonical_dumps(payload)
