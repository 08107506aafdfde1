"""Smith normal form over the integers, with and without unimodular transforms.

Everything here works on plain lists of Python ints, so entries never overflow.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def _identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _copy(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in A]


def _min_abs_pivot(A: Matrix, t: int) -> tuple[int, int] | None:
    best = None
    best_val = 0
    for i in range(t, len(A)):
        row = A[i]
        for j in range(t, len(row)):
            v = abs(row[j])
            if v and (best is None or v < best_val):
                best, best_val = (i, j), v
                if v == 1:
                    return best
    return best


def smith_with_transforms(A: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Return ``(d, U, V)`` with ``U @ A @ V`` diagonal with nonzero entries ``d``.

    ``U`` and ``V`` are unimodular, the entries of ``d`` are positive and each
    divides the next.  Pivots are chosen by minimal absolute value.
    """
    A = _copy(A)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            a, b = A[dst], A[src]
            for c in range(cols):
                if b[c]:
                    a[c] += q * b[c]
            u, w = U[dst], U[src]
            for c in range(rows):
                if w[c]:
                    u[c] += q * w[c]

    def add_col(dst, src, q):
        if q:
            for row in A:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        piv = _min_abs_pivot(A, t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # a smaller remainder appeared in row/col t; move it to the pivot
                best = None
                for i in range(t, rows):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(A[best[0]][best[1]])):
                        best = (i, t)
                for j in range(t, cols):
                    if A[t][j] and (best is None or abs(A[t][j]) < abs(A[best[0]][best[1]])):
                        best = (t, j)
                if best[0] != t:
                    swap_rows(best[0], t)
                if best[1] != t:
                    swap_cols(best[1], t)
                continue
            # pivot must divide the remaining block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return diag, U, V


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix."""
    if not A or not len(A[0]):
        return ()
    d, _, _ = smith_with_transforms(A)
    return tuple(d)


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for row in A:
        acc = [0] * cols
        for k in range(inner):
            a = row[k]
            if a:
                b = B[k]
                for c in range(cols):
                    if b[c]:
                        acc[c] += a * b[c]
        out.append(acc)
    return out


def vecmat(x: Sequence[int], B: Sequence[Sequence[int]]) -> list[int]:
    cols = len(B[0]) if B else 0
    acc = [0] * cols
    for k, a in enumerate(x):
        if a:
            for c, b in enumerate(B[k]):
                if b:
                    acc[c] += a * b
    return acc


def solve_left(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Integer row vector ``x`` with ``x @ A == b``, or None when none exists."""
    rows = len(A)
    if rows == 0:
        return [] if not any(b) else None
    d, U, V = smith_with_transforms(A)
    # x A = b  <=>  (x U^-1) D = b V
    bv = vecmat(b, V)
    y = [0] * rows
    for i, v in enumerate(bv):
        if i < len(d):
            if v % d[i]:
                return None
            y[i] = v // d[i]
        elif v:
            return None
    return vecmat(y, U)
