"""Modular cuts, single-element extensions, Tutte graphs and elementary paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .catalog import mk23, mk4
from .matroid import (
    Matroid,
    MatroidError,
    flat_order,
    from_rank_function,
    isomorphisms,
    to_mask,
    uniform,
)


class CutError(MatroidError):
    pass


class PathError(MatroidError):
    pass


def _fs(F: Iterable[int]) -> frozenset[int]:
    return frozenset(F)


# modular cuts

def modular_cut_violation(M: Matroid, flats: Iterable[Iterable[int]]) -> str | None:
    """A human-readable witness of why ``flats`` is not a modular cut, or None."""
    G = {_fs(F) for F in flats}
    for F in sorted(G, key=flat_order):
        if not M.is_flat(F):
            return f"not a flat: {sorted(F)}"
    for F in G:
        for F2 in M.flats:
            if F <= F2 and F2 not in G:
                return f"upward closure: {sorted(F)} in cut but {sorted(F2)} is not"
    for F1, F2 in combinations(sorted(G, key=flat_order), 2):
        if M.is_modular_pair(F1, F2) and (F1 & F2) not in G:
            return f"modular meet: {sorted(F1)} and {sorted(F2)} but not {sorted(F1 & F2)}"
    return None


@dataclass(frozen=True)
class ModularCut:
    matroid: Matroid
    flats: frozenset[frozenset[int]]

    def __contains__(self, F) -> bool:
        return _fs(F) in self.flats

    def __len__(self):
        return len(self.flats)

    @cached_property
    def hyperplanes(self) -> frozenset[frozenset[int]]:
        return frozenset(H for H in self.matroid.hyperplanes if H in self.flats)

    def sorted_flats(self) -> list[frozenset[int]]:
        return sorted(self.flats, key=lambda F: (len(F), flat_order(F)))


def validate_modular_cut(M: Matroid, flats: Iterable[Iterable[int]]) -> ModularCut:
    flats = frozenset(_fs(F) for F in flats)
    why = modular_cut_violation(M, flats)
    if why:
        raise CutError(f"invalid modular cut: {why}")
    return ModularCut(M, flats)


def trivial_cut(M: Matroid) -> ModularCut:
    return ModularCut(M, frozenset({M.ground}))


def principal_cut(M: Matroid, F0: Iterable[int]) -> ModularCut:
    F0 = _fs(F0)
    if not M.is_flat(F0):
        raise CutError(f"principal cut: {sorted(F0)} is not a flat")
    return ModularCut(M, frozenset(F for F in M.flats if F0 <= F))


def linear_subclass_violation(M: Matroid, hyperplanes: Iterable[Iterable[int]]) -> str | None:
    hs = {_fs(H) for H in hyperplanes}
    allh = set(M.hyperplanes)
    for H in hs:
        if H not in allh:
            return f"not a hyperplane: {sorted(H)}"
    for H1, H2 in combinations(sorted(hs, key=flat_order), 2):
        L = H1 & H2
        if M.corank(L) == 2:
            for H in M.hyperplanes_over(L):
                if H not in hs:
                    return f"{sorted(H1)} and {sorted(H2)} in class but not {sorted(H)}"
    return None


def complete_linear_subclass(M: Matroid, hyperplanes: Iterable[Iterable[int]]) -> ModularCut:
    """The modular cut whose hyperplanes are the given linear subclass.

    A flat belongs to the cut exactly when every hyperplane above it does.
    """
    hs = frozenset(_fs(H) for H in hyperplanes)
    why = linear_subclass_violation(M, hs)
    if why:
        raise CutError(f"not a linear subclass: {why}")
    flats = frozenset(F for F in M.flats if all(H in hs for H in M.hyperplanes_over(F)))
    return ModularCut(M, flats)


def saturate_cut(M: Matroid, flats: Iterable[Iterable[int]]) -> frozenset[frozenset[int]]:
    """Smallest family containing ``flats`` that is upward closed and closed under modular meets."""
    G = {_fs(F) for F in flats} | {M.ground}
    changed = True
    while changed:
        changed = False
        for F in list(G):
            for F2 in M.flats:
                if F <= F2 and F2 not in G:
                    G.add(F2)
                    changed = True
        for F1, F2 in combinations(list(G), 2):
            if M.is_modular_pair(F1, F2) and (F1 & F2) not in G:
                G.add(F1 & F2)
                changed = True
    return frozenset(G)


def all_modular_cuts(M: Matroid) -> list[ModularCut]:
    """Every nonempty modular cut, via linear subclasses found by backtracking."""
    hyps = list(M.hyperplanes)
    lines = [L for L in M.flats_of_corank(2)] if M.r >= 2 else []
    over = {L: frozenset(i for i, H in enumerate(hyps) if L <= H) for L in lines}
    out = []

    def ok(chosen: set[int], decided: int) -> bool:
        # each line: if two chosen hyperplanes above it, all above it must be allowed
        for L, idx in over.items():
            inside = idx & chosen
            if len(inside) >= 2:
                for i in idx:
                    if i < decided and i not in chosen:
                        return False
        return True

    def rec(i: int, chosen: set[int]):
        if i == len(hyps):
            out.append(complete_linear_subclass(M, [hyps[j] for j in chosen]))
            return
        for take in (False, True):
            if take:
                chosen.add(i)
            if ok(chosen, i + 1):
                rec(i + 1, chosen)
            if take:
                chosen.discard(i)

    rec(0, set())
    return out


# extensions

def extend_by_cut(M: Matroid, cut: ModularCut | Iterable[Iterable[int]]) -> Matroid:
    """Single-element extension by a new element ``a = M.n`` placed according to the cut."""
    if not isinstance(cut, ModularCut):
        cut = validate_modular_cut(M, cut)
    if not cut.flats:
        raise CutError("empty modular cut: the extension would add a coloop")
    a = M.n
    new = set(M.bases)
    if M.r == 0:
        return Matroid(M.n + 1, 0, frozenset(new))
    for S in combinations(range(M.n), M.r - 1):
        if M.rank(S) == M.r - 1 and M.closure(S) not in cut.flats:
            new.add(frozenset(S) | {a})
    return Matroid(M.n + 1, M.r, frozenset(new))


def cut_of_extension(Mhat: Matroid, a: int) -> ModularCut:
    """The modular cut of ``Mhat \\ a`` (relabeled contiguously) that reproduces ``Mhat``."""
    if not 0 <= a < Mhat.n:
        raise CutError(f"element {a} out of range")
    if a in Mhat.coloops:
        raise CutError(f"element {a} is a coloop")
    M, back = Mhat.minor((), {a})
    flats = frozenset(F for F in M.flats if a in Mhat.closure({back[e] for e in F}))
    return ModularCut(M, flats)


# constellations

@dataclass(frozen=True)
class Constellation:
    matroid: Matroid
    cut: ModularCut
    marks: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __post_init__(self):
        M = self.matroid
        for L in self.marks:
            if not M.is_flat(L) or M.corank(L) != 2:
                raise CutError(f"mark {sorted(L)} is not a corank-2 flat")
            if L in self.cut.flats:
                raise CutError(f"mark {sorted(L)} lies in the cut")
            if M.is_indecomposable_flat(L):
                raise CutError(f"mark {sorted(L)} is indecomposable")

    def indecomposable(self, F: frozenset[int]) -> bool:
        return F in self.marks or self.matroid.is_indecomposable_flat(F)


def constellation(M: Matroid, cut=None, marks: Iterable[Iterable[int]] = ()) -> Constellation:
    if cut is None:
        cut = trivial_cut(M)
    elif not isinstance(cut, ModularCut):
        cut = validate_modular_cut(M, cut)
    return Constellation(M, cut, frozenset(_fs(L) for L in marks))


@dataclass(frozen=True)
class TutteGraph:
    vertices: tuple[frozenset[int], ...]
    edges: dict  # (i, j) with i < j -> corank-2 flat
    graph: nx.Graph = field(compare=False, repr=False)

    @property
    def connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.graph)

    def components(self) -> list[list[frozenset[int]]]:
        comps = [sorted(c) for c in nx.connected_components(self.graph)]
        return sorted(([self.vertices[i] for i in c] for c in comps), key=lambda c: flat_order(c[0]))


def tutte_graph(tau: Constellation, on: Iterable[int] | None = None) -> TutteGraph:
    """Hyperplanes off the cut, joined when they meet in an indecomposable corank-2 flat."""
    M = tau.matroid
    F = _fs(on) if on is not None else frozenset()
    verts = tuple(H for H in M.hyperplanes if H not in tau.cut.flats and F <= H)
    g = nx.Graph()
    g.add_nodes_from(range(len(verts)))
    edges = {}
    for i, j in combinations(range(len(verts)), 2):
        L = verts[i] & verts[j]
        if M.corank(L) == 2 and tau.indecomposable(L):
            edges[(i, j)] = L
            g.add_edge(i, j)
    return TutteGraph(verts, edges, g)


def is_tutte_path(tau: Constellation, path: Sequence[Iterable[int]]) -> bool:
    M = tau.matroid
    path = [_fs(H) for H in path]
    if not path:
        return False
    hyps = set(M.hyperplanes)
    if any(H not in hyps for H in path):
        return False
    for H1, H2 in zip(path, path[1:]):
        L = H1 & H2
        if H1 == H2 or M.corank(L) != 2 or not tau.indecomposable(L):
            return False
    return True


def find_tutte_path(tau: Constellation, F, X, Y) -> tuple[frozenset[int], ...]:
    M = tau.matroid
    F, X, Y = _fs(F), _fs(X), _fs(Y)
    if not M.is_flat(F):
        raise PathError("F is not a flat")
    if F == M.ground:
        raise PathError("F is the whole ground set")
    if not M.is_indecomposable_flat(F):
        raise PathError("F is decomposable")
    for name, H in (("start", X), ("end", Y)):
        if H not in M.hyperplanes:
            raise PathError(f"{name} is not a hyperplane")
        if not F <= H:
            raise PathError(f"{name} does not contain F")
        if H in tau.cut.flats:
            raise PathError("endpoint in cut")
    G = tutte_graph(tau, on=F)
    idx = {H: i for i, H in enumerate(G.vertices)}
    try:
        nodes = nx.shortest_path(G.graph, idx[X], idx[Y])
    except nx.NetworkXNoPath:
        raise AssertionError(f"no Tutte path on {sorted(F)} from {sorted(X)} to {sorted(Y)}")
    return tuple(G.vertices[i] for i in nodes)


# elementary path templates

@dataclass(frozen=True)
class Template:
    type: int
    kind: str
    N: Matroid
    cut: frozenset[frozenset[int]]
    path: tuple[frozenset[int], ...]
    extended: str
    decomposable: tuple[frozenset[int], ...] = ()


def _sets(*words: str) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(int(c) - 1 for c in w) for w in words)


def templates() -> list[Template]:
    u23, u34, k4, k23 = uniform(2, 3), uniform(3, 4), mk4(), mk23()
    E3, E4, E6 = u23.ground, u34.ground, k4.ground
    return [
        Template(1, "1", u23, frozenset({E3}), _sets("1", "2"), "U2,4"),
        Template(2, "1", u23, frozenset({E3, *_sets("3")}), _sets("1", "2"), "U~2,3"),
        Template(3, "2a", u23, frozenset({E3}), _sets("1", "2", "3"), "U2,4"),
        Template(4, "2b", u34, frozenset({E4}), _sets("12", "13", "23"), "U3,5"),
        Template(5, "2b", u34, frozenset({E4, *_sets("14")}), _sets("12", "13", "23"), "C5"),
        Template(6, "2b", u34, frozenset({E4, *_sets("4", "14", "24", "34")}), _sets("12", "13", "23"), "U~3,4"),
        Template(7, "3", u34, frozenset({E4, *_sets("23", "14")}), _sets("12", "24", "34", "13"), "MK4-"),
        Template(8, "2b", k4, frozenset({E6, *_sets("14", "25", "36")}), _sets("126", "135", "234"), "F7"),
        Template(9, "4", k23, frozenset({E6, *_sets("123", "156", "246", "345")}),
                 _sets("1245", "126", "1346", "456"), "F7*", _sets("14", "25", "36")),
    ]


def _same_cycle(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    k = len(a)
    for seq in (list(b), list(reversed(b))):
        for s in range(k):
            if all(a[i] == seq[(i + s) % k] for i in range(k)):
                return True
    return False


@dataclass(frozen=True)
class Classification:
    kind: str
    type: int
    extended_type: str
    bottom: frozenset[int]
    alternatives: tuple[int, ...] = ()


def _template_matches(tau: Constellation, T: Template, cyc: list[frozenset[int]]) -> frozenset[int] | None:
    M = tau.matroid
    common = frozenset.intersection(*cyc)
    for B in M.flats_of_corank(T.N.r):
        if not B <= common:
            continue
        covers = M.covers(B)
        for atoms in combinations(covers, T.N.n):
            if M.closure(frozenset().union(*atoms)) != M.ground:
                continue
            base = M.rank(B)

            def arank(S, atoms=atoms):
                return M.rank(B.union(*(atoms[i] for i in S))) - base if S else 0

            A = from_rank_function(T.N.n, arank)
            for iso in isomorphisms(T.N, A):
                def img(F, atoms=atoms, iso=iso):
                    return M.closure(B.union(*(atoms[iso[i]] for i in F)))

                mapped = [img(H) for H in T.path]
                if not _same_cycle(mapped, cyc):
                    continue
                sub_flats = {img(F) for F in T.N.flats}
                if {F for F in sub_flats if F in tau.cut.flats} != {img(F) for F in T.cut}:
                    continue
                if any(tau.indecomposable(img(L)) for L in T.decomposable):
                    continue
                return B
    return None


def classify_elementary(tau: Constellation, path: Sequence[Iterable[int]]) -> Classification | None:
    """Match a closed Tutte path off the cut against the nine elementary templates."""
    path = [_fs(H) for H in path]
    if len(path) < 3 or path[0] != path[-1]:
        raise PathError("path is not closed")
    if not is_tutte_path(tau, path):
        raise PathError("not a Tutte path")
    if any(H in tau.cut.flats for H in path):
        raise PathError("path meets the cut")
    cyc = path[:-1]
    hits = []
    for T in templates():
        if len(T.path) != len(cyc) or T.N.r > tau.matroid.r:
            continue
        B = _template_matches(tau, T, cyc)
        if B is not None:
            hits.append((T, B))
    if not hits:
        return None
    T, B = hits[0]
    return Classification(T.kind, T.type, T.extended, B, tuple(t.type for t, _ in hits[1:]))
