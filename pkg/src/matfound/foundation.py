"""Foundations of matroids from the hyperplane incidence graph.

Rows of the initial matrix are hyperplanes (in the lattice order of
:func:`matroid.flat_order`), columns are elements.  An entry is zero when the
element lies on the hyperplane, one on the chosen spanning forest, and a free
variable otherwise.  Hyperplanes are referred to by their row index.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Sequence

import networkx as nx

from . import catalog
from .matroid import Matroid, MatroidError, has_minor
from .pasture import (
    Pasture,
    PastureError,
    Presentation,
    Recognition,
    Vec,
    _spans,
    canonicalize,
    hom_count,
    iter_presentation_homs,
    named,
    presentation,
    recognize,
)


class FoundationError(ValueError):
    pass


# -- incidence graph and initial matrix ------------------------------------------


@dataclass(frozen=True)
class IncidenceGraph:
    hyperplanes: tuple[frozenset[int], ...]
    n: int
    edges: tuple[tuple[int, int], ...]  # (hyperplane row, element) with the element off the hyperplane
    forest: frozenset[tuple[int, int]]
    components: int


def incidence_graph(M: Matroid, strategy: str = "bfs", seed: int = 0) -> IncidenceGraph:
    """Hyperplane incidence graph with a deterministic spanning forest.

    ``strategy`` is ``"bfs"`` (the default), ``"dfs"`` or ``"random"``.
    Searches start from the least element of each component and visit
    neighbours in sorted order.
    """
    hyps = M.hyperplanes
    edges = tuple((i, e) for i, H in enumerate(hyps) for e in range(M.n) if e not in H)
    G = nx.Graph()
    G.add_nodes_from(("e", e) for e in range(M.n))
    G.add_nodes_from(("h", i) for i in range(len(hyps)))
    for e in range(M.n):
        for i, H in enumerate(hyps):
            if e not in H:
                G.add_edge(("e", e), ("h", i))
    comps = list(nx.connected_components(G))
    forest = set()
    if strategy == "random":
        rng = random.Random(seed)
        for u, v in G.edges:
            G[u][v]["w"] = rng.random()
        tree_edges = nx.minimum_spanning_edges(G, weight="w", data=False)
    else:
        walk = {"bfs": nx.bfs_edges, "dfs": nx.dfs_edges}.get(strategy)
        if walk is None:
            raise FoundationError(f"unknown forest strategy {strategy!r}")
        tree_edges = []
        for comp in sorted(comps, key=lambda c: min(c)):
            tree_edges += list(walk(G, min(comp)))
    for u, v in tree_edges:
        (kind_u, a), (_, b) = u, v
        forest.add((a, b) if kind_u == "h" else (b, a))
    return IncidenceGraph(tuple(hyps), M.n, edges, frozenset(forest), len(comps))


def _letters(k: int) -> list[str]:
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"x{i + 1}" for i in range(k)]


def _flat_label(F) -> str:
    return "{" + ",".join(str(e) for e in sorted(F)) + "}"


@dataclass(frozen=True)
class InitialMatrix:
    """Cells: ``None`` for zero, ``-1`` for a forest one, ``k >= 0`` for variable ``k``."""

    graph: IncidenceGraph
    cells: tuple[tuple[int | None, ...], ...]
    variables: tuple[tuple[int, int], ...]
    names: tuple[str, ...]

    @property
    def hyperplanes(self):
        return self.graph.hyperplanes

    def raw(self, h: int, e: int) -> Vec | None:
        """Exponent vector of an entry over the variables and the sign."""
        c = self.cells[h][e]
        if c is None:
            return None
        v = [0] * (len(self.variables) + 1)
        if c >= 0:
            v[c] = 1
        return tuple(v)

    def text(self) -> str:
        n = len(self.cells[0]) if self.cells else 0
        width = max([len(str(n - 1))] + [len(n) for n in self.names])
        labels = [_flat_label(H) for H in self.hyperplanes]
        pad = max([1] + [len(x) for x in labels])
        lines = [" " * pad + "   " + " ".join(str(e).rjust(width) for e in range(n))]
        for label, row in zip(labels, self.cells):
            body = " ".join(("0" if c is None else "1" if c < 0 else self.names[c]).rjust(width) for c in row)
            lines.append(f"{label:>{pad}} | {body}")
        return "\n".join(lines)


def initial_matrix(M: Matroid, strategy: str = "bfs", seed: int = 0, forest: Iterable | None = None) -> InitialMatrix:
    """Initial matrix for the chosen spanning forest; ``forest`` overrides the strategy."""
    G = incidence_graph(M, strategy, seed)
    if forest is not None:
        forest = frozenset(tuple(x) for x in forest)
        if not forest <= set(G.edges):
            raise FoundationError("forest uses a non-edge of the incidence graph")
        Gx = nx.Graph()
        Gx.add_nodes_from(("e", e) for e in range(M.n))
        Gx.add_nodes_from(("h", i) for i in range(len(G.hyperplanes)))
        Gx.add_edges_from((("h", h), ("e", e)) for h, e in forest)
        if not nx.is_forest(Gx) or nx.number_connected_components(Gx) != G.components:
            raise FoundationError("edge set is not a spanning forest of the incidence graph")
        G = IncidenceGraph(G.hyperplanes, G.n, G.edges, forest, G.components)
    cells, variables = [], []
    for h, H in enumerate(G.hyperplanes):
        row = []
        for e in range(M.n):
            if e in H:
                row.append(None)
            elif (h, e) in G.forest:
                row.append(-1)
            else:
                row.append(len(variables))
                variables.append((h, e))
        cells.append(tuple(row))
    return InitialMatrix(G, tuple(cells), tuple(variables), tuple(_letters(len(variables))))


# -- modular triples and quadruples -----------------------------------------------


def pencils(M: Matroid) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Each corank-2 flat with the rows of the hyperplanes containing it."""
    if M.r < 2:
        return []
    index = {H: i for i, H in enumerate(M.hyperplanes)}
    return [(L, tuple(index[H] for H in M.hyperplanes_over(L))) for L in M.flats_of_corank(2)]


@dataclass(frozen=True)
class Relation:
    kind: str  # "T1" or "T2"
    rows: tuple[int, ...]
    elements: tuple[int, ...]
    terms: tuple  # T1: one exponent vector (= 1); T2: three exponent vectors


def _cr(A: InitialMatrix, h1: int, h2: int, a: int, b: int) -> Vec:
    """Exponent vector of phi_1(a) phi_2(b) / (phi_1(b) phi_2(a))."""
    v1a, v2b, v1b, v2a = A.raw(h1, a), A.raw(h2, b), A.raw(h1, b), A.raw(h2, a)
    return tuple(w + x - y - z for w, x, y, z in zip(v1a, v2b, v1b, v2a))


def _triple_ratio(A: InitialMatrix, hs, es) -> Vec:
    (h1, h2, h3), (e1, e2, e3) = hs, es
    num = [A.raw(h1, e2), A.raw(h2, e3), A.raw(h3, e1)]
    den = [A.raw(h1, e3), A.raw(h2, e1), A.raw(h3, e2)]
    return tuple(sum(v[k] for v in num) - sum(v[k] for v in den) for k in range(len(num[0])))


def generate_relations(M: Matroid, A: InitialMatrix, paranoid: bool = False) -> list[Relation]:
    """T1 relations on modular triples and T2 relations on modular quadruples.

    By default one ordering per unordered triple or quadruple, with every
    choice of elements ``e_i`` in ``H_i - L``.  ``paranoid`` adds every
    ordering.
    """
    hyps = A.hyperplanes
    k = len(A.variables)
    sign = (0,) * k + (1,)
    out: list[Relation] = []
    for L, rows in pencils(M):
        for trip in combinations(rows, 3):
            orders = permutations(trip) if paranoid else [trip]
            for hs in orders:
                for es in product(*(sorted(hyps[h] - L) for h in hs)):
                    ratio = _triple_ratio(A, hs, es)
                    out.append(Relation("T1", hs, es, (tuple(x - y for x, y in zip(ratio, sign)),)))
        for quad in combinations(rows, 4):
            orders = permutations(quad) if paranoid else [quad]
            for hs in orders:
                for es in product(*(sorted(hyps[h] - L) for h in hs)):
                    h1, h2, h3, _ = hs
                    e1, e2, e3, e4 = es
                    t = (_cr(A, h1, h2, e3, e4), _cr(A, h1, h3, e2, e4), sign)
                    out.append(Relation("T2", hs, es, t))
    return out


def relations_presentation(A: InitialMatrix, rels: Sequence[Relation]) -> Presentation:
    mul = [r.terms[0] for r in rels if r.kind == "T1"]
    add = [r.terms for r in rels if r.kind == "T2"]
    return presentation(A.names, mul, add)


# -- theta sets -------------------------------------------------------------------


def theta(M: Matroid, nondegenerate: bool = False) -> list[tuple[int, int, int, int]]:
    """Tuples of rows ``(H1, H2, H3, H4)`` in Theta_M (or only the non-degenerate ones)."""
    out = []
    for _, rows in pencils(M):
        for h1, h2 in product(rows, repeat=2):
            rest = [h for h in rows if h not in (h1, h2)]
            for h3, h4 in product(rest, repeat=2):
                if nondegenerate and (h1 == h2 or h3 == h4):
                    continue
                out.append((h1, h2, h3, h4))
    return out


def theta_flat(M: Matroid, idx: Sequence[int]) -> frozenset[int] | None:
    """The flat ``L`` when ``idx`` is in Theta_M, else None."""
    hyps = M.hyperplanes
    try:
        H = [hyps[i] for i in idx]
    except (IndexError, TypeError):
        return None
    if len(H) != 4:
        return None
    L = H[0] & H[1] & H[2] & H[3]
    if L not in M.flat_set or M.corank(L) != 2:
        return None
    if any(H[i] & H[j] != L for i in (0, 1) for j in (2, 3)):
        return None
    return L


def is_nondegenerate(M: Matroid, idx: Sequence[int]) -> bool:
    return theta_flat(M, idx) is not None and idx[0] != idx[1] and idx[2] != idx[3]


def in_xi(M: Matroid, h1: int, h2: int, a: int, b: int) -> bool:
    hyps = M.hyperplanes
    H1, H2 = hyps[h1], hyps[h2]
    if a in H1 | H2 or b in H1 | H2:
        return False
    return h1 == h2 or M.corank(H1 & H2) == 2


SIGMA = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))


def sigma_orbit(idx: Sequence[int]) -> tuple[int, int, int, int]:
    return min(tuple(idx[p] for p in perm) for perm in SIGMA)


# -- the foundation -----------------------------------------------------------------


@dataclass(frozen=True)
class Flags:
    regular: bool
    binary: bool
    ternary: bool
    wlum: bool
    orientable: bool
    dyadic: bool | None
    dressian: tuple[int, int] | None  # (m, p); lineality is not computed
    factors: tuple[str, ...] | None

    def as_dict(self) -> dict:
        return {
            "regular": self.regular,
            "binary": self.binary,
            "ternary": self.ternary,
            "wlum": self.wlum,
            "orientable": self.orientable,
            "dyadic": self.dyadic,
            "dressian": None if self.dressian is None else {"m": self.dressian[0], "p": self.dressian[1], "n": "not computed"},
            "factors": None if self.factors is None else list(self.factors),
        }


@dataclass
class FoundationReport:
    matroid: Matroid
    matrix: InitialMatrix
    relations: list[Relation]
    presentation: Presentation
    pasture: Pasture = field(repr=False)

    @cached_property
    def recognition(self) -> Recognition:
        return recognize(self.pasture)

    def entry(self, h: int, e: int):
        raw = self.matrix.raw(h, e)
        return None if raw is None else self.pasture.element(raw)

    def cross_ratio(self, h1: int, h2: int, a: int, b: int) -> Vec:
        """Element form ``[H1 H2 | a b]`` for a tuple in Xi_M."""
        if not in_xi(self.matroid, h1, h2, a, b):
            raise FoundationError(f"({h1}, {h2}, {a}, {b}) is not in Xi_M")
        return self.pasture.element(_cr(self.matrix, h1, h2, a, b))

    @cached_property
    def cross_ratios(self) -> dict[tuple[int, int, int, int], Vec]:
        return {idx: universal_cross_ratio(self, idx) for idx in theta(self.matroid)}

    @cached_property
    def flags(self) -> Flags:
        return classify(self.matroid)

    def hyperplane_label(self, h: int) -> str:
        return _flat_label(self.matrix.hyperplanes[h])

    def text(self) -> str:
        P = self.pasture
        lines = ["presentation", f"  initial matrix ({len(self.matrix.variables)} variables):"]
        lines += ["    " + ln for ln in self.matrix.text().splitlines()]
        lines += ["  canonical form:"] + ["    " + ln for ln in P.text().splitlines()]
        lines.append("cross-ratios")
        seen = set()
        for idx in theta(self.matroid, nondegenerate=True):
            key = sigma_orbit(idx)
            if key in seen:
                continue
            seen.add(key)
            label = "[{} {} | {} {}]".format(*(self.hyperplane_label(h) for h in key))
            lines.append(f"  {label} = {P.word(universal_cross_ratio(self, key))}")
        lines.append("recognized")
        lines.append(f"  {self.recognition.name}")
        lines.append("flags")
        for k, v in self.flags.as_dict().items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


@lru_cache(maxsize=256)
def _foundation(M: Matroid, strategy: str, seed: int, paranoid: bool) -> FoundationReport:
    A = initial_matrix(M, strategy, seed)
    rels = generate_relations(M, A, paranoid)
    pres = relations_presentation(A, rels)
    P = canonicalize(pres, f"F({M.name})" if M.name else None)
    return FoundationReport(M, A, rels, pres, P)


def foundation(M: Matroid, strategy: str = "bfs", seed: int = 0, paranoid: bool = False) -> FoundationReport:
    return _foundation(M, strategy, seed, paranoid)


def foundation_from_matrix(M: Matroid, A: InitialMatrix, paranoid: bool = False) -> FoundationReport:
    rels = generate_relations(M, A, paranoid)
    pres = relations_presentation(A, rels)
    return FoundationReport(M, A, rels, pres, canonicalize(pres))


def universal_cross_ratio(report: FoundationReport, idx: Sequence[int]) -> Vec:
    """``<H1 H2 | H3 H4>`` with ``a``, ``b`` the least elements of ``H3 - L`` and ``H4 - L``."""
    M = report.matroid
    idx = tuple(idx)
    L = theta_flat(M, idx)
    if L is None:
        raise FoundationError(f"{idx} is not in Theta_M")
    hyps = report.matrix.hyperplanes
    a, b = min(hyps[idx[2]] - L), min(hyps[idx[3]] - L)
    return report.cross_ratio(idx[0], idx[1], a, b)


def hyperplane_index(M: Matroid, H: Iterable[int]) -> int:
    H = frozenset(H)
    try:
        return M.hyperplanes.index(H)
    except ValueError:
        raise FoundationError(f"{sorted(H)} is not a hyperplane") from None


# -- the presentation by cross-ratios -------------------------------------------------


def _has_fano_minor(M: Matroid) -> bool:
    if M.n < 7:
        return False
    return has_minor(M, catalog.get("F7")) is not None or has_minor(M, catalog.get("F7*")) is not None


def r4_instances(M: Matroid) -> list[tuple[tuple[int, int, int, int], ...]]:
    """Triples of Theta_M tuples for the pentagon relation over corank-3 flats."""
    if M.r < 3:
        return []
    index = {H: i for i, H in enumerate(M.hyperplanes)}
    out = []
    for L in M.flats_of_corank(3):
        atoms = M.covers(L)
        for p in permutations(atoms, 5):
            def h(i, j):
                return index.get(M.join(p[i - 1], p[j - 1]))

            tuples = (
                (h(1, 3), h(2, 3), h(3, 4), h(3, 5)),
                (h(1, 4), h(2, 4), h(4, 5), h(3, 4)),
                (h(1, 5), h(2, 5), h(3, 5), h(4, 5)),
            )
            if any(None in t for t in tuples):
                continue
            if any(theta_flat(M, t) is None for t in tuples):
                continue
            common = frozenset.intersection(*(M.hyperplanes[x] for t in tuples for x in t))
            if common != L:
                continue
            out.append(tuples)
    return out


def r3_instances(M: Matroid) -> list[tuple[tuple[int, int, int, int], ...]]:
    out = []
    for _, rows in pencils(M):
        for h1, h2 in permutations(rows, 2):
            rest = [h for h in rows if h not in (h1, h2)]
            for h3, h4, h5 in permutations(rest, 3):
                out.append(((h1, h2, h3, h4), (h1, h2, h4, h5), (h1, h2, h5, h3)))
    return out


@dataclass(frozen=True)
class FundamentalPresentation:
    generators: tuple[tuple[int, int, int, int], ...]
    presentation: Presentation
    pasture: Pasture


def fundamental_presentation(M: Matroid) -> FundamentalPresentation:
    """Generators: Theta_M modulo the symmetries; relations R-, R0, R1, R2, R3, R4, R+."""
    gens = sorted({sigma_orbit(t) for t in theta(M)})
    pos = {g: i for i, g in enumerate(gens)}
    k = len(gens)

    def vec(*terms, sign=0):
        v = [0] * (k + 1)
        for coeff, t in terms:
            v[pos[sigma_orbit(t)]] += coeff
        v[k] += sign
        return tuple(v)

    mul, add = [], []
    if _has_fano_minor(M):
        mul.append(vec(sign=1))
    for t in theta(M):
        if t[0] == t[1] or t[2] == t[3]:
            mul.append(vec((1, t)))  # R0
    for t in theta(M, nondegenerate=True):
        h1, h2, h3, h4 = t
        mul.append(vec((1, (h1, h2, h4, h3)), (1, t)))  # R1
        mul.append(vec((1, t), (1, (h1, h3, h4, h2)), (1, (h1, h4, h2, h3)), sign=1))  # R2
        add.append((vec((1, t)), vec((1, (h1, h3, h2, h4))), vec(sign=1)))  # R+
    for trip in r3_instances(M) + r4_instances(M):
        mul.append(vec(*((1, t) for t in trip)))
    names = [f"c{i + 1}" for i in range(k)]
    pres = presentation(names, mul, add)
    return FundamentalPresentation(tuple(gens), pres, canonicalize(pres))


def check_R_relations(M: Matroid) -> dict[str, tuple[int, int]]:
    """Evaluate every relation instance inside the computed foundation.

    Returns ``{relation: (instances, failures)}``.
    """
    rep = foundation(M)
    P = rep.pasture

    def cr(t):
        return universal_cross_ratio(rep, t)

    out: dict[str, list[int]] = {k: [0, 0] for k in ("R-", "Rsigma", "R0", "R1", "R2", "R3", "R4", "R+", "row-exchange", "choice")}

    def record(key, ok):
        out[key][0] += 1
        out[key][1] += 0 if ok else 1

    if _has_fano_minor(M):
        record("R-", P.minus_one_is_one)
    for t in theta(M):
        if t[0] == t[1] or t[2] == t[3]:
            record("R0", cr(t) == P.one)
    hyps = rep.matrix.hyperplanes
    for t in theta(M, nondegenerate=True):
        h1, h2, h3, h4 = t
        x = cr(t)
        record("Rsigma", all(cr(tuple(t[p] for p in perm)) == x for perm in SIGMA))
        record("R1", cr((h1, h2, h4, h3)) == P.inv(x))
        prod_ = P.mul(P.mul(x, cr((h1, h3, h4, h2))), cr((h1, h4, h2, h3)))
        record("R2", prod_ == P.minus_one)
        record("R+", P.contains(x, cr((h1, h3, h2, h4)), P.minus_one))
    for t in theta(M):
        L = theta_flat(M, t)
        h1, h2, h3, h4 = t
        for e1, e2, e3, e4 in product(*(sorted(hyps[h] - L) for h in t)):
            record("row-exchange", rep.cross_ratio(h1, h2, e3, e4) == rep.cross_ratio(h3, h4, e1, e2))
            record("choice", rep.cross_ratio(h1, h2, e3, e4) == cr(t))
    for trip in r3_instances(M):
        record("R3", P.mul(P.mul(cr(trip[0]), cr(trip[1])), cr(trip[2])) == P.one)
    for trip in r4_instances(M):
        record("R4", P.mul(P.mul(cr(trip[0]), cr(trip[1])), cr(trip[2])) == P.one)
    return {k: (v[0], v[1]) for k, v in out.items()}


def cross_ratios_generate(report: FoundationReport) -> bool:
    """Whether -1 and the universal cross-ratios generate the unit group."""
    P = report.pasture
    return _spans([P.eps] + list(report.cross_ratios.values()), P.mods)


# -- representations ---------------------------------------------------------------


Family = Mapping[tuple[int, int], Vec | None]


def as_family(M: Matroid, phi) -> dict[tuple[int, int], Vec | None]:
    """Accept a mapping ``(row, element) -> value`` or a list of rows."""
    if isinstance(phi, Mapping):
        return dict(phi)
    return {(h, e): (None if x is None else tuple(x)) for h, row in enumerate(phi) for e, x in enumerate(row)}


def dependence_checks(M: Matroid) -> list[tuple[tuple[int, int, int], tuple[int, int], int]]:
    """One check per (modular triple, element): ``(rows, anchors, e)``.

    For rows ``(h1, h2, h3)`` with anchors ``e1`` in ``H1 - L`` and ``e3`` in
    ``H3 - L``, linear dependence scaled so that the middle coefficient is 1
    forces ``a = -phi2(e3)/phi1(e3)`` and ``c = -phi2(e1)/phi3(e1)``; the check
    at ``e`` is ``a phi1(e) + phi2(e) + c phi3(e)`` in N.
    """
    hyps = M.hyperplanes
    out = []
    for L, rows in pencils(M):
        for h1, h2, h3 in combinations(rows, 3):
            e1, e3 = min(hyps[h1] - L), min(hyps[h3] - L)
            for e in range(M.n):
                out.append(((h1, h2, h3), (e1, e3), e))
    return out


def _check_dependence(P: Pasture, phi, chk) -> bool:
    (h1, h2, h3), (e1, e3), e = chk
    a = P.neg(P.div(phi[(h2, e3)], phi[(h1, e3)]))
    c = P.neg(P.div(phi[(h2, e1)], phi[(h3, e1)]))
    return P.contains(P.mul(a, phi[(h1, e)]), phi[(h2, e)], P.mul(c, phi[(h3, e)]))


def is_representation(M: Matroid, P: Pasture, phi) -> bool:
    """Hyperplane-function support plus linear dependence of every modular triple."""
    phi = as_family(M, phi)
    hyps = M.hyperplanes
    for h, H in enumerate(hyps):
        for e in range(M.n):
            if (h, e) not in phi:
                raise FoundationError(f"support mismatch: no value at ({h}, {e})")
            if (phi[(h, e)] is None) != (e in H):
                raise FoundationError(f"support mismatch at hyperplane {h}, element {e}")
            if phi[(h, e)] is not None:
                P.check(phi[(h, e)])
    return all(_check_dependence(P, phi, chk) for chk in dependence_checks(M))


def rescale(M: Matroid, P: Pasture, phi, rows: Sequence[Vec], cols: Sequence[Vec]) -> dict:
    phi = as_family(M, phi)
    return {(h, e): (None if v is None else P.mul(P.mul(v, rows[h]), cols[e])) for (h, e), v in phi.items()}


def restrict_representation(M: Matroid, phi, delete: Iterable[int]) -> tuple[Matroid, dict]:
    """Induced family on ``M \\ A``: each hyperplane of the deletion spans a
    hyperplane of ``M``, whose function is restricted to the kept elements."""
    phi = as_family(M, phi)
    N, back = M.delete(delete)
    if N.r != M.r:
        raise FoundationError("deleted set is not coindependent")
    hyps = M.hyperplanes
    index = {H: h for h, H in enumerate(hyps)}
    out = {}
    for k, H in enumerate(N.hyperplanes):
        h = index[M.closure(back[e] for e in H)]
        for e in range(N.n):
            out[(k, e)] = phi[(h, back[e])]
    return N, out


def brute_force_representations(M: Matroid, Q: Pasture, A: InitialMatrix | None = None):
    """Fill the free entries of the initial matrix with units of Q in every way
    that passes the linear-dependence checks; yields each family."""
    if not Q.is_finite():
        raise PastureError("infinite target: unit group is infinite")
    A = A or initial_matrix(M)
    units = list(Q.units())
    nvars = len(A.variables)
    phi: dict[tuple[int, int], Vec | None] = {}
    for h, row in enumerate(A.cells):
        for e, c in enumerate(row):
            if c is None:
                phi[(h, e)] = None
            elif c < 0:
                phi[(h, e)] = Q.one
    pos = {cell: i for i, cell in enumerate(A.variables)}
    schedule: list[list] = [[] for _ in range(nvars + 1)]
    for chk in dependence_checks(M):
        (h1, h2, h3), (e1, e3), e = chk
        cells = [(h2, e3), (h1, e3), (h2, e1), (h3, e1), (h1, e), (h2, e), (h3, e)]
        schedule[max((pos[c] + 1 for c in cells if c in pos), default=0)].append(chk)

    def ok(level):
        return all(_check_dependence(Q, phi, chk) for chk in schedule[level])

    def rec(i):
        if i == nvars:
            yield dict(phi)
            return
        cell = A.variables[i]
        for u in units:
            phi[cell] = u
            if ok(i + 1):
                yield from rec(i + 1)
        del phi[cell]

    if ok(0):
        yield from rec(0)


@dataclass(frozen=True)
class RepresentationCount:
    hom: int
    brute_force: int

    @property
    def agree(self) -> bool:
        return self.hom == self.brute_force


def count_representations(M: Matroid, Q: Pasture) -> RepresentationCount:
    """|Hom(F_M, Q)| next to a brute-force count of representation matrices."""
    rep = foundation(M)
    hom = sum(1 for _ in iter_presentation_homs(rep.presentation, Q))
    brute = sum(1 for _ in brute_force_representations(M, Q, rep.matrix))
    return RepresentationCount(hom, brute)


# -- classification ---------------------------------------------------------------


class ClassificationError(RuntimeError):
    pass


def minor_predicates(M: Matroid) -> dict[str, bool]:
    """Excluded-minor side of each classification, from minor search alone."""

    def has(name):
        N = catalog.get(name)
        return N.n <= M.n and N.r <= M.r and has_minor(M, N) is not None

    u24, u25, u35 = has("U2,4"), has("U2,5"), has("U3,5")
    f7, f7d = has("F7"), has("F7*")
    return {
        "binary": not u24,
        "regular": not (u24 or f7 or f7d),
        "ternary": not (u25 or u35 or f7 or f7d),
        "wlum": not (u25 or u35),
    }


def classify(M: Matroid) -> Flags:
    rep = foundation(M)
    P = rep.pasture
    rec = rep.recognition
    minors = minor_predicates(M)
    factors = None if rec.kind == "unrecognized" else rec.factors
    regular = rec.kind != "unrecognized" and factors == ()
    binary = factors in ((), ("F2",))
    ternary = hom_count(P, named("F3")) > 0
    orientable = hom_count(P, named("S")) > 0
    wlum = minors["wlum"]
    for key, value in (("regular", regular), ("binary", binary), ("ternary", ternary)):
        if value != minors[key]:
            raise ClassificationError(f"{key}: foundation says {value}, minor search says {minors[key]}")
    if wlum and factors is None:
        raise ClassificationError("wlum matroid with an unrecognized foundation")
    dyadic = dressian = None
    if wlum:
        dyadic = set(factors) <= {"D", "U"}
        dressian = (factors.count("D"), factors.count("U"))
    return Flags(regular, binary, ternary, wlum, orientable, dyadic, dressian, factors)
