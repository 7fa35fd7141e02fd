"""Expected values used for table diffs and acceptance checks."""

from __future__ import annotations

# dimension of the theta-map image, by lattice, for l = 2, 4, 6, ...
DIMENSION_ROWS: dict[str, tuple[int, ...]] = {
    "D4": (0, 0, 1, 1, 0, 2, 1, 1, 2, 2, 1, 3),
    "D6": (0, 1, 1, 2, 2, 3, 3),
    "D8": (0, 1, 1, 2, 2, 3),
    "E6": (0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3, 4),
    "E8": (0, 0, 0, 1, 0, 1, 1, 1, 1, 2, 1, 2),
}

# |L_{2m}| for m = 1..9
CARDINALITY_ROWS: dict[str, tuple[int, ...]] = {
    "D4": (24, 24, 96, 24, 144, 96, 192, 24, 312),
    "D6": (60, 252, 544, 1020, 1560, 2080, 3264, 4092, 4380),
    "D8": (112, 1136, 3136, 9328, 14112, 31808, 38528, 74864, 84784),
    "E6": (72, 270, 720, 936, 2160, 2214, 3600, 4590, 6552),
    "E8": (240, 2160, 6720, 17520, 30240, 60480, 82560, 140400, 181680),
}

# even degrees l <= L lying in the strength of every nonempty shell
STRENGTH_ROWS: dict[str, tuple[int, frozenset]] = {
    "D4": (22, frozenset({2, 4, 10})),
    "D6": (14, frozenset({2})),
    "D8": (12, frozenset({2})),
    "E6": (10, frozenset({2, 4})),
    "E8": (32, frozenset({2, 4, 6, 10})),
}


def expected_dimension(lattice: str, degree: int) -> int | None:
    """Tabulated image dimension, or the level-1 cusp-form count for E8 beyond the table."""
    if degree % 2:
        return 0
    row = DIMENSION_ROWS.get(lattice)
    k = degree // 2 - 1
    if row is not None and 0 <= k < len(row):
        return row[k]
    if lattice == "E8" and degree >= 2:
        return cusp_dim_level1(4 + degree)
    return None


def cusp_dim_level1(k: int) -> int:
    """dim S_k(SL2(Z)) for even k >= 0."""
    if k % 2 or k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12
