"""Pure-Python nearest-record search.

Reference semantics for the compiled kernel: identical operation order,
identical float arithmetic, so both backends return bit-identical results.

Inputs are row-major float matrices where missing cells are NaN. ``modes[k]``
selects the per-column rule: 0 = exact match (0/1), 1 = absolute difference
normalized by ``ranges[k]``. The aggregate per pair is the arithmetic mean of
the per-column terms, accumulated in column order.
"""

from __future__ import annotations

MODE_EXACT = 0
MODE_NORM_ABS = 1


def nearest_records(
    a_rows: list[list[float]],
    b_rows: list[list[float]],
    modes: list[int],
    ranges: list[float],
) -> tuple[list[int], list[bool]]:
    """For each row of ``b_rows`` find the strict nearest row of ``a_rows``.

    Returns (best_index, tied) per b-row; ``tied`` is True when at least two
    a-rows attain the minimum mean distance exactly.
    """
    m = len(modes)
    best_idx = []
    best_tie = []
    for b in b_rows:
        best_d = float("inf")
        idx = -1
        tied = False
        for i, a in enumerate(a_rows):
            acc = 0.0
            for k in range(m):
                x = b[k]
                y = a[k]
                if x != x or y != y:  # either side missing
                    acc += 1.0
                elif modes[k] == MODE_EXACT:
                    acc += 0.0 if x == y else 1.0
                else:
                    r = ranges[k]
                    acc += abs(x - y) / r if r > 0.0 else 0.0
            d = acc / m
            if d < best_d:
                best_d = d
                idx = i
                tied = False
            elif d == best_d:
                tied = True
        best_idx.append(idx)
        best_tie.append(tied)
    return best_idx, best_tie
