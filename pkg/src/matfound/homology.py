"""Order complexes of subconstellation posets and their integral homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Hashable, Iterable, Sequence

from .constellation import Constellation, all_modular_cuts, constellation
from .matroid import (
    Matroid,
    MatroidError,
    UpperSublattice,
    atom_matroid,
    direct_sum,
    flat_order,
    minor_spec_of,
    uniform,
    upper_sublattices,
)
from .smith import smith_normal_form

__all__ = [
    "SimplicialComplex",
    "HomologyGroup",
    "smith_normal_form",
    "homology_of_complex",
    "homology",
    "sigma_complex",
    "search_l3",
]


# integer linear algebra

def invariant_factors(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix given as row dicts.

    Unit pivots are eliminated first (each contributes a factor 1); the
    remainder goes through the dense Smith form.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    ones = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(alive):
            r = rows[i]
            piv = next((c for c, v in r.items() if v in (1, -1)), None)
            if piv is None:
                continue
            p = r[piv]
            for j in list(cols.get(piv, ())):
                if j == i:
                    continue
                rj = rows[j]
                q = rj[piv] * p
                for c, v in r.items():
                    nv = rj.get(c, 0) - q * v
                    if nv:
                        if c not in rj:
                            cols.setdefault(c, set()).add(j)
                        rj[c] = nv
                    elif c in rj:
                        del rj[c]
                        cols[c].discard(j)
                if not rj:
                    alive.discard(j)
            for c in r:
                cols[c].discard(i)
            alive.discard(i)
            rows[i] = {}
            ones += 1
            progress = True
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    if not rest:
        return [1] * ones
    used = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for a, r in enumerate(rest):
        for c, v in r.items():
            dense[a][pos[c]] = v
    return [1] * ones + list(smith_normal_form(dense))


# simplicial complexes

@dataclass(frozen=True)
class SimplicialComplex:
    """Faces are sorted tuples of vertex indices; ``labels`` name the vertices."""

    labels: tuple[Hashable, ...]
    faces: frozenset[tuple[int, ...]]

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def faces_of_dim(self, k: int) -> list[tuple[int, ...]]:
        return sorted(f for f in self.faces if len(f) == k + 1)

    def f_vector(self) -> list[int]:
        return [len(self.faces_of_dim(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def relabel(self, perm: Sequence[int]) -> "SimplicialComplex":
        """Vertex i becomes perm[i]."""
        labels = [None] * len(self.labels)
        for i, lab in enumerate(self.labels):
            labels[perm[i]] = lab
        faces = frozenset(tuple(sorted(perm[v] for v in f)) for f in self.faces)
        return SimplicialComplex(tuple(labels), faces)

    def dump(self) -> str:
        lines = []
        for f in sorted(self.faces, key=lambda f: (len(f), f)):
            lines.append(" ".join(str(self.labels[v]) for v in f))
        return "\n".join(lines)


def complex_from_faces(faces: Iterable[Iterable[Hashable]]) -> SimplicialComplex:
    """Downward closure of the given faces; vertices are sorted by their labels."""
    faces = [tuple(f) for f in faces]
    labels = sorted({v for f in faces for v in f}, key=repr)
    idx = {v: i for i, v in enumerate(labels)}
    out = set()
    for f in faces:
        s = tuple(sorted(idx[v] for v in f))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return SimplicialComplex(tuple(labels), frozenset(out))


def order_complex(labels: Sequence[Hashable], less) -> SimplicialComplex:
    """Chains of a finite poset; ``less(i, j)`` is the strict order on indices."""
    n = len(labels)
    up = [[j for j in range(n) if less(i, j)] for i in range(n)]
    faces = set()

    def grow(chain):
        faces.add(tuple(sorted(chain)))
        for j in up[chain[-1]]:
            grow(chain + [j])

    for i in range(n):
        grow([i])
    return SimplicialComplex(tuple(labels), frozenset(faces))


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _boundary_rows(K: SimplicialComplex, k: int) -> list[dict[int, int]]:
    """Rows of the boundary map from k-faces to (k-1)-faces, one row per k-face."""
    lower = {f: i for i, f in enumerate(K.faces_of_dim(k - 1))}
    rows = []
    for f in K.faces_of_dim(k):
        r = {}
        for i in range(len(f)):
            r[lower[f[:i] + f[i + 1:]]] = (-1) ** i
        rows.append(r)
    return rows


def _factors(K: SimplicialComplex, k: int, cache: dict) -> list[int]:
    if k not in cache:
        cache[k] = invariant_factors(_boundary_rows(K, k)) if k >= 1 else []
    return cache[k]


def homology(K: SimplicialComplex, top: int | None = None) -> list[HomologyGroup]:
    """H_0 .. H_top (default: up to dim K)."""
    top = K.dim if top is None else top
    cache: dict = {}
    out = []
    for k in range(0, top + 1):
        n_k = len(K.faces_of_dim(k))
        dk = _factors(K, k, cache)
        dk1 = _factors(K, k + 1, cache)
        out.append(HomologyGroup(k, n_k - len(dk) - len(dk1), tuple(d for d in dk1 if d > 1)))
    return out


def homology_of_complex(K: SimplicialComplex, k: int) -> HomologyGroup:
    if not 0 <= k <= K.dim:
        raise MatroidError(f"degree {k} out of range 0..{K.dim}")
    return homology(K, k)[k]


def homology_in_degree(K: SimplicialComplex, k: int) -> HomologyGroup:
    """Like homology_of_complex, but zero above the dimension."""
    if k > K.dim:
        return HomologyGroup(k, 0)
    return homology(K, k)[k]


# marked constellations

@dataclass(frozen=True)
class Marked:
    """A marked constellation on a simple matroid: flats are atom sets."""

    matroid: Matroid
    cut: frozenset[frozenset[int]]
    marks: frozenset[frozenset[int]] = frozenset()

    def key(self) -> tuple:
        return canonical_key(self)


def _perm_key(M: Matroid, cut, marks, p) -> tuple:
    b = tuple(sorted(tuple(sorted(p[e] for e in B)) for B in M.bases))
    c = tuple(sorted(tuple(sorted(p[e] for e in F)) for F in cut))
    m = tuple(sorted(tuple(sorted(p[e] for e in F)) for F in marks))
    return (b, c, m)


@lru_cache(maxsize=None)
def _canonical(M: Matroid, cut: frozenset, marks: frozenset) -> tuple:
    head = (M.n, M.r, len(M.bases), len(cut), len(marks))
    best = min(_perm_key(M, cut, marks, p) for p in permutations(range(M.n)))
    return head + best


def canonical_key(m: Marked) -> tuple:
    return _canonical(m.matroid, m.cut, m.marks)


def _E(n):
    return frozenset(range(n))


def _s(*words):
    return frozenset(frozenset(int(c) - 1 for c in w) for w in words)


def class_templates() -> dict[str, Marked]:
    from .catalog import mk23

    u11, u22, u23, u33, u34, u24, u44 = (uniform(1, 1), uniform(2, 2), uniform(2, 3), uniform(3, 3),
                                          uniform(3, 4), uniform(2, 4), uniform(4, 4))
    u23u11 = direct_sum(u23, u11)
    k23 = mk23()
    return {
        "0": Marked(u11, frozenset({_E(1)})),
        "1": Marked(u22, frozenset({_E(2)}), frozenset({frozenset()})),
        "2a": Marked(u23, frozenset({_E(3)})),
        "2b": Marked(u33, frozenset({_E(3)}), _s("1", "2", "3")),
        "2c": Marked(u34, frozenset({_E(4)}) | _s("12", "34")),
        # 14, 25, 36 stay decomposable and unmarked
        "2d": Marked(k23, frozenset({_E(6)}) | _s("123", "156", "246", "345")),
        "3a": Marked(u24, frozenset({_E(4)})),
        "3b": Marked(u23u11, frozenset({_E(4)}), _s("1", "2", "3")),
        "3c": Marked(u34, frozenset({_E(4)})),
        "3d": Marked(u44, frozenset({_E(4)}), frozenset(frozenset(c) for c in combinations(range(4), 2))),
    }


@lru_cache(maxsize=None)
def _template_keys() -> dict[tuple, str]:
    return {canonical_key(m): name for name, m in class_templates().items()}


LEVELS = {0: ("0",), 1: ("0", "1"), 2: ("0", "1", "2a", "2b", "2c", "2d")}


@dataclass(frozen=True)
class Sub:
    """A subconstellation together with its marked class."""

    sub: UpperSublattice
    marked: Marked

    @property
    def flats(self):
        return self.sub.flats


def marked_subconstellation(tau: Constellation, sub: UpperSublattice) -> Marked:
    M = tau.matroid
    A = atom_matroid(M, sub)

    def aset(F):
        return frozenset(i for i, a in enumerate(sub.atoms) if a <= F)

    cut = frozenset(aset(F) for F in sub.flats if F in tau.cut.flats)
    marks = set()
    if A.r >= 2:
        for S in A.flats_of_corank(2):
            L = M.closure(sub.bottom.union(*(sub.atoms[i] for i in S))) if S else sub.bottom
            if L in tau.cut.flats or A.is_indecomposable_flat(S):
                continue
            if tau.indecomposable(L):
                marks.add(S)
    return Marked(A, cut, frozenset(marks))


def subconstellations(tau: Constellation, max_rank: int | None = None, max_atoms: int | None = None,
                      shapes: set[tuple[int, int]] | None = None, proper: bool = False) -> list[Sub]:
    """All subconstellations with at least one atom, optionally filtered by (rank, #atoms)."""
    M = tau.matroid
    out = []
    for sub in upper_sublattices(M, max_rank=max_rank, max_atoms=max_atoms):
        if not sub.atoms:
            continue
        if proper and sub.bottom == M.closure(()) and len(sub.flats) == len(M.flats):
            continue
        if shapes is not None and (M.r - M.rank(sub.bottom), len(sub.atoms)) not in shapes:
            continue
        out.append(Sub(sub, marked_subconstellation(tau, sub)))
    return out


def sub_label(M: Matroid, sub: UpperSublattice) -> str:
    spec = minor_spec_of(M, sub)
    sep = "" if M.n <= 10 else ","

    def word(S):
        return sep.join(str(e) for e in sorted(S))

    out = "Λ"
    if spec.delete:
        out += "\\" + word(spec.delete)
    if spec.contract:
        out += "/" + word(spec.contract)
    return out


def _complex_of(M: Matroid, subs: list[Sub]) -> SimplicialComplex:
    subs = sorted(subs, key=lambda s: (len(s.flats), sorted(flat_order(F) for F in s.flats)))
    labels = [sub_label(M, s.sub) for s in subs]
    fl = [s.flats for s in subs]
    return order_complex(labels, lambda i, j: fl[i] < fl[j])


def sigma_complex(tau: Constellation, level: int, exclude: Iterable[str] = ()) -> SimplicialComplex:
    """Order complex of the subconstellations of the classes admitted at ``level``."""
    if level not in LEVELS:
        raise MatroidError(f"level must be 0, 1 or 2, got {level}")
    admitted = [c for c in LEVELS[level] if c not in set(exclude)]
    temps = class_templates()
    shapes = {(temps[c].matroid.r, temps[c].matroid.n) for c in admitted}
    keys = {canonical_key(temps[c]) for c in admitted}
    subs = [s for s in subconstellations(tau, max_rank=max(r for r, _ in shapes),
                                         max_atoms=max(n for _, n in shapes), shapes=shapes)
            if canonical_key(s.marked) in keys]
    return _complex_of(tau.matroid, subs)


def classify_subconstellation(tau: Constellation, sub: UpperSublattice) -> str | None:
    return _template_keys().get(canonical_key(marked_subconstellation(tau, sub)))


# the recursive search for classes needed in a second homotopy theorem

@dataclass(frozen=True)
class SubconstellationClass:
    identifier: str
    template: Marked
    h2: HomologyGroup | None = None
    homology: tuple[HomologyGroup, ...] = ()
    via: str = "base"  # "base", "H2", or "re-entry" for classes left out of the base list


def simple_matroids(k: int) -> list[Matroid]:
    """All simple matroids on k elements up to isomorphism (exhaustive; k <= 5)."""
    out = {}
    for r in range(0, k + 1):
        cand = [frozenset(c) for c in combinations(range(k), r)]
        for mask in range(1, 1 << len(cand)):
            fam = frozenset(cand[i] for i in range(len(cand)) if mask >> i & 1)
            if not _exchange_ok(fam):
                continue
            M = Matroid(k, r, fam)
            if not _is_simple(M):
                continue
            key = min(tuple(sorted(tuple(sorted(p[e] for e in B)) for B in fam)) for p in permutations(range(k)))
            out.setdefault(key, M)
    return [out[key] for key in sorted(out)]


def _exchange_ok(fam) -> bool:
    for B1 in fam:
        for B2 in fam:
            for e in B1 - B2:
                if not any((B1 - {e}) | {f} in fam for f in B2 - B1):
                    return False
    return True


def _is_simple(M: Matroid) -> bool:
    if M.loops:
        return False
    if M.r < 2:
        return M.n == M.r
    return all(M.rank((a, b)) == 2 for a, b in combinations(range(M.n), 2))


def marked_constellations(k: int) -> list[Marked]:
    """Marked constellations on lattices with k atoms, one per isomorphism class."""
    seen = {}
    for N in simple_matroids(k):
        decomposable = []
        if N.r >= 2:
            decomposable = [L for L in N.flats_of_corank(2) if not N.is_indecomposable_flat(L)]
        for cut in all_modular_cuts(N):
            free = [L for L in decomposable if L not in cut.flats]
            for m in range(1 << len(free)):
                marks = frozenset(free[i] for i in range(len(free)) if m >> i & 1)
                mc = Marked(N, cut.flats, marks)
                seen.setdefault(canonical_key(mc), mc)
    return [seen[key] for key in sorted(seen, key=lambda t: (t[0], len(seen[t].matroid.flats), t))]


BASE_CLASSES = ("0", "1", "2a", "2b")
OMITTED_CLASSES = ("2c", "2d")


def search_l3(max_atoms: int) -> list[SubconstellationClass]:
    """Grow the list of classes with nonvanishing H2 of the complex below them.

    Classes 2c and 2d start outside the list; when one of them shows up with
    nonvanishing H1 or H2 it is appended as a re-entry.
    """
    if max_atoms > 5:
        raise MatroidError("search_l3 supports at most 5 atoms")
    temps = class_templates()
    names = {canonical_key(temps[c]): c for c in temps}
    omitted = {canonical_key(temps[c]) for c in OMITTED_CLASSES}
    found = [SubconstellationClass(c, temps[c]) for c in BASE_CLASSES]
    known = {canonical_key(temps[c]) for c in BASE_CLASSES}
    extra = 0
    for k in range(1, max_atoms + 1):
        for tau_m in marked_constellations(k):
            key = canonical_key(tau_m)
            if key in known:
                continue
            K = sigma_less(tau_m, known)
            hs = tuple(homology_in_degree(K, d) for d in range(3))
            if not hs[2].is_zero():
                via = "H2"
            elif key in omitted and not (hs[1].is_zero() and hs[2].is_zero()):
                via = "re-entry"
            else:
                continue
            known.add(key)
            name = names.get(key)
            if name is None:
                extra += 1
                name = f"L{extra}"
            found.append(SubconstellationClass(name, tau_m, hs[2], hs, via))
    return found


def sigma_less(m: Marked, known_keys: set[tuple]) -> SimplicialComplex:
    """Order complex of proper marked subconstellations of ``m`` whose class is in ``known_keys``."""
    tau = constellation(m.matroid, _cut_obj(m), m.marks)
    subs = [s for s in subconstellations(tau, proper=True) if canonical_key(s.marked) in known_keys]
    return _complex_of(tau.matroid, subs)


def _cut_obj(m: Marked):
    from .constellation import ModularCut

    return ModularCut(m.matroid, m.cut)
