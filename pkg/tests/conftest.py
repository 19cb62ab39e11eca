import numpy as np
import pytest


def complete_adjacency(n: int) -> np.ndarray:
    return np.ones((n, n)) - np.eye(n)


# 6-vertex example matrix used by the boosting scans; Per = 9. Row 6 is the
# degree-1 "boost" row.
A6 = np.array(
    [
        [0, 1, 1, 1, 1, 0],
        [1, 0, 1, 1, 1, 1],
        [1, 1, 0, 1, 1, 0],
        [1, 1, 1, 0, 1, 0],
        [1, 1, 1, 1, 0, 0],
        [0, 1, 0, 0, 0, 0],
    ],
    dtype=float,
)

# 10-vertex example matrix for the row-scaling boost scan; row 10 is the
# boost row (vertex of degree 2).
A10 = np.array(
    [[int(c) for c in row] for row in [
        "0111111110",
        "1011111111",
        "1101111111",
        "1110111110",
        "1111011110",
        "1111101110",
        "1111110110",
        "1111111010",
        "1111111100",
        "0110000000",
    ]],
    dtype=float,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_complex(rng, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
