import json

import pytest

from tdt.diagram import (
    WeightedDiagram,
    build_diagram,
    deficient_regions,
    diagram_report,
    is_consistent,
    pair_inconsistent_inputs,
    project_diagram,
)
from tdt.errors import CapacityError, ValidationError
from tdt.relation import mask_from_names, restrict_programs

from conftest import GRADED_COUNTS, relation_from_masks, relation_from_rows

A, B, C, D = 1, 2, 4, 8


def test_build_diagram_trio(trio_relation):
    diag = build_diagram(trio_relation)
    assert diag.weights == (1, 2, 3, 1, 2, 3, 1, 1)
    assert diag.total == 14


def test_build_diagram_toy(toy_relation):
    diag = build_diagram(toy_relation)
    expected = {
        A: 1, B: 2, C: 2, D: 1,
        A | B: 3, A | C: 1, A | D: 2, B | C: 1, C | D: 3,
        A | C | D: 4,
    }
    for mask in range(16):
        assert diag.weights[mask] == expected.get(mask, 0)


def test_build_diagram_all_ones():
    rel = relation_from_rows(("11111111", "11111111", "11111111"))
    diag = build_diagram(rel)
    assert diag.weights[7] == 8
    assert sum(diag.weights) == 8


def test_build_diagram_capacity():
    rel = relation_from_masks([0], m=25)
    with pytest.raises(CapacityError):
        build_diagram(rel)


def test_deficient_regions_trio(trio_relation):
    diag = build_diagram(trio_relation)
    assert deficient_regions(diag) == {A | B, B | C, A | B | C}


def test_deficient_regions_monotone_weights():
    diag = WeightedDiagram(m=3, weights=(0, 1, 1, 2, 1, 2, 2, 3))
    assert deficient_regions(diag) == set()


def test_deficient_regions_graded(graded_relation):
    diag = build_diagram(graded_relation)
    assert deficient_regions(diag) == set()
    assert is_consistent(diag)


def test_is_consistent_trio_variants(trio_relation):
    assert not is_consistent(build_diagram(trio_relation))
    only_a = restrict_programs(trio_relation, mask_from_names(trio_relation, ["A"]))
    diag = build_diagram(only_a)
    assert diag.weights == (7, 7)
    assert is_consistent(diag)
    only_b = restrict_programs(trio_relation, mask_from_names(trio_relation, ["B"]))
    assert build_diagram(only_b).weights == (8, 6)
    assert not is_consistent(build_diagram(only_b))


def test_equal_weights_count_as_consistent():
    diag = WeightedDiagram(m=1, weights=(7, 7))
    assert is_consistent(diag)


def test_pair_inconsistent_inputs_toy(toy_relation):
    got = pair_inconsistent_inputs(toy_relation, C, A | C)
    assert got == {3, 4, 12, 13, 14, 15}  # files 4,5,13,14,15,16 one-based
    # w({A}) = 1 <= w({A,B}) = 3: no blame assigned
    assert pair_inconsistent_inputs(toy_relation, A, A | B) == set()
    assert pair_inconsistent_inputs(toy_relation, A | C, A | C) == set()


def test_pair_inconsistent_inputs_requires_nesting(toy_relation):
    with pytest.raises(ValidationError):
        pair_inconsistent_inputs(toy_relation, A | B, A | C)


def test_project_diagram_matches_restriction(toy_relation):
    keep = A | C | D
    projected = project_diagram(build_diagram(toy_relation), keep)
    direct = build_diagram(restrict_programs(toy_relation, keep))
    assert projected == direct


def test_diagram_report_trio(trio_relation):
    report = json.loads(diagram_report(trio_relation))
    assert report["consistent"] is False
    assert sorted(report["deficient"]) == ["A,B", "A,B,C", "B,C"]
    assert report["weights"][""] == 1
    assert report["weights"]["A,C"] == 3
    assert sum(report["weights"].values()) == 14


def test_weights_partition_corpus(toy_relation, graded_relation):
    assert sum(build_diagram(toy_relation).weights) == toy_relation.n
    assert sum(build_diagram(graded_relation).weights) == 1000
    assert dict(enumerate(build_diagram(graded_relation).weights)) == {
        mask: GRADED_COUNTS.get(mask, 0) for mask in range(8)
    }
