"""Named matroids used throughout the package and its tests.

Elements are 0-based; the comments give the customary 1-based labels.
"""

from __future__ import annotations

import re
from itertools import combinations

from .matroid import Matroid, MatroidError, direct_sum, from_hyperplanes, from_rank_function, uniform


def graphic(n_vertices: int, edges: list[tuple[int, int]], name: str | None = None) -> Matroid:
    """Cycle matroid of a graph; rank of an edge set is (#vertices touched) - (#components)."""

    def rank(S):
        parent = list(range(n_vertices))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        r = 0
        for i in S:
            a, b = find(edges[i][0]), find(edges[i][1])
            if a != b:
                parent[a] = b
                r += 1
        return r

    return from_rank_function(len(edges), rank, name)


_F7_LINES = [(0, 1, 6), (0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 3, 4), (2, 3, 6), (4, 5, 6)]


def fano() -> Matroid:
    # lines 127 135 146 236 245 347 567
    return from_hyperplanes(7, 3, _F7_LINES, "F7")


def non_fano() -> Matroid:
    # relax the line 567 into a basis
    return from_hyperplanes(7, 3, _F7_LINES[:-1], "F7-")


def c5() -> Matroid:
    bases = [frozenset(c) for c in combinations(range(5), 3) if c != (0, 1, 2)]
    return Matroid(5, 3, frozenset(bases), "C5")


def mk4() -> Matroid:
    # vertices a b c d; edges 1=ab 2=ac 3=ad 4=cd 5=bd 6=bc
    return graphic(4, [(0, 1), (0, 2), (0, 3), (2, 3), (1, 3), (1, 2)], "MK4")


def mk4_minus() -> Matroid:
    # K4 with the edge bc removed
    return graphic(4, [(0, 1), (0, 2), (0, 3), (2, 3), (1, 3)], "MK4-")


def mk23() -> Matroid:
    # sides u v and a b c; edges 1=ua 2=ub 3=uc 4=va 5=vb 6=vc
    return graphic(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], "MK23")


def parallel_extension(M: Matroid, e: int, name: str | None = None) -> Matroid:
    """Add a new element n parallel to ``e``."""
    n = M.n
    extra = [B - {e} | {n} for B in M.bases if e in B]
    return Matroid(n + 1, M.r, M.bases | frozenset(extra), name)


def _named() -> dict[str, callable]:
    return {
        "F7": fano,
        "F7*": lambda: fano().dual(),
        "F7-": non_fano,
        "F7-*": lambda: non_fano().dual(),
        "C5": c5,
        "C5*": lambda: c5().dual(),
        "MK4": mk4,
        "MK4-": mk4_minus,
        "MK4-*": lambda: mk4_minus().dual(),
        "MK23": mk23,
        "MK23*": lambda: mk23().dual(),
        "U~2,3": lambda: parallel_extension(uniform(2, 3), 2, "U~2,3"),
        "U~3,4": lambda: parallel_extension(uniform(3, 4), 3, "U~3,4"),
    }


_UNIFORM = re.compile(r"^U(\d+),(\d+)$")
_cache: dict[str, Matroid] = {}


def get(name: str) -> Matroid:
    """Look up a catalog matroid; ``A+B`` builds a direct sum."""
    key = name.strip()
    if key in _cache:
        return _cache[key]
    if "+" in key and not key.endswith("+"):
        M = direct_sum(*(get(part) for part in key.split("+")))
        M = Matroid(M.n, M.r, M.bases, key)
    else:
        m = _UNIFORM.match(key)
        if m:
            r, n = int(m.group(1)), int(m.group(2))
            if not 0 <= r <= n or n > 12:
                raise MatroidError(f"uniform matroid {key} out of range")
            M = uniform(r, n)
        elif key in _named():
            M = _named()[key]()
            M = Matroid(M.n, M.r, M.bases, key)
        else:
            raise KeyError(key)
    _cache[key] = M
    return M


def names() -> list[str]:
    return sorted(_named())


# the default catalog for cross-validation sweeps
CATALOG = [
    "U1,2", "U1,3", "U2,3", "U2,4", "U2,5", "U3,4", "U3,5", "U2,6", "U4,6",
    "F7", "F7*", "F7-", "F7-*", "C5", "C5*", "MK4", "MK4-", "MK4-*", "MK23", "MK23*",
    "U~2,3", "U~3,4", "U2,3+U2,3", "U2,4+U1,2",
]


def catalog() -> list[Matroid]:
    return [get(n) for n in CATALOG]
