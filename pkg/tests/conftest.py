import numpy as np
import pytest

from tdt.relation import FeatureRelation, Relation

# Four parsers x twenty files: the running example with a consistent core of
# {A,B,AD,CD,singletons} and six inconsistent files.
TOY_ROWS = (
    "10000011111100001111",
    "01100011100010000000",
    "00011000010011111111",
    "00000100001101111111",
)

# Three parsers x fourteen files: region weights (1,2,3,1,2,3,1,1); the screen
# drops B and one of A/C goes in the iterative step.
TRIO_ROWS = (
    "00111000101110",
    "00001011010101",
    "11010000110110",
)

# Region counts for the graded 3x1000 example: already consistent, used for
# threshold selection and stalk display vectors.
GRADED_COUNTS = {
    0b000: 1,
    0b001: 2,   # A
    0b010: 3,   # B
    0b100: 4,   # C
    0b011: 20,  # AB
    0b101: 30,  # AC
    0b110: 40,  # BC
    0b111: 900,
}


def program_names(m):
    if m <= 8:
        return tuple("ABCDEFGH"[:m])
    return tuple(f"p{j:02d}" for j in range(m))


def relation_from_rows(rows, programs=None, input_prefix="f"):
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if programs is None:
        programs = program_names(m)
    matrix = np.array([[c == "1" for c in row] for row in rows], dtype=bool)
    inputs = tuple(f"{input_prefix}{k + 1:02d}" for k in range(n))
    return Relation(programs=programs, inputs=inputs, accepts=matrix.reshape(m, n))


def relation_from_masks(masks, m, programs=None, input_prefix="g"):
    if programs is None:
        programs = program_names(m)
    width = len(str(len(masks)))
    inputs = tuple(f"{input_prefix}{k + 1:0{width}d}" for k in range(len(masks)))
    matrix = np.array(
        [[mask >> j & 1 == 1 for mask in masks] for j in range(m)], dtype=bool
    )
    return Relation(programs=programs, inputs=inputs, accepts=matrix.reshape(m, len(masks)))


@pytest.fixture
def toy_relation():
    return relation_from_rows(TOY_ROWS)


@pytest.fixture
def trio_relation():
    return relation_from_rows(TRIO_ROWS, input_prefix="c")


@pytest.fixture
def graded_relation():
    masks = [mask for mask, count in sorted(GRADED_COUNTS.items()) for _ in range(count)]
    return relation_from_masks(masks, m=3)


@pytest.fixture
def toy_features(toy_relation):
    # "x" marks exactly the toy's inconsistent files, "y" only file 10,
    # "z" nothing at all.
    inconsistent = {9, 12, 16, 17, 18, 19}
    matrix = np.zeros((toy_relation.n, 3), dtype=bool)
    for k in inconsistent:
        matrix[k, 0] = True
    matrix[9, 1] = True
    return FeatureRelation(
        inputs=toy_relation.inputs,
        features=("x", "y", "z"),
        has_feature=matrix,
    )
