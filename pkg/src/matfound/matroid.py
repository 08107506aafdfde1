"""Matroids given by explicit basis lists.

Subsets of the ground set are handled internally as int bitmasks; the public
API takes iterables of element indices and returns frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

Flat = frozenset


class MatroidError(ValueError):
    """Invalid matroid data or an operation applied outside its domain."""


def to_mask(S: Iterable[int] | int) -> int:
    if isinstance(S, int):
        return S
    m = 0
    for e in S:
        m |= 1 << e
    return m


def to_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def popcount(x: int) -> int:
    return bin(x).count("1")


def set_key(S: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(S))


def flat_order(F: Iterable[int]) -> tuple[int, ...]:
    return set_key(F)


@dataclass(frozen=True)
class MinorSpec:
    contract: frozenset[int]
    delete: frozenset[int]


@dataclass(frozen=True, eq=False)
class Matroid:
    n: int
    r: int
    bases: frozenset[frozenset[int]]
    name: str | None = field(default=None, compare=False)

    def __eq__(self, other):
        return isinstance(other, Matroid) and self.n == other.n and self.bases == other.bases

    def __hash__(self):
        return hash((self.n, self.bases))

    def __repr__(self):
        label = self.name or "Matroid"
        return f"<{label} n={self.n} r={self.r} bases={len(self.bases)}>"

    # rank machinery

    @cached_property
    def ground(self) -> frozenset[int]:
        return frozenset(range(self.n))

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def basis_masks(self) -> tuple[int, ...]:
        return tuple(sorted(to_mask(B) for B in self.bases))

    @cached_property
    def rank_table(self) -> list[int]:
        size = 1 << self.n
        indep = bytearray(size)
        for B in self.basis_masks:
            indep[B] = 1
        for S in range(size - 1, -1, -1):
            if indep[S]:
                x = S
                while x:
                    low = x & -x
                    indep[S ^ low] = 1
                    x ^= low
        rank = [0] * size
        for S in range(1, size):
            if indep[S]:
                rank[S] = popcount(S)
            else:
                best = 0
                x = S
                while x:
                    low = x & -x
                    v = rank[S ^ low]
                    if v > best:
                        best = v
                    x ^= low
                rank[S] = best
        return rank

    def rank(self, S: Iterable[int] | int) -> int:
        m = to_mask(S)
        if m & ~self.full:
            raise MatroidError(f"element out of range in {sorted(to_set(m))}")
        return self.rank_table[m]

    def rank_by_bases(self, S: Iterable[int] | int) -> int:
        """rank(S) = max |S ∩ B| over bases, computed directly."""
        m = to_mask(S)
        return max(popcount(m & B) for B in self.basis_masks)

    def closure_mask(self, m: int) -> int:
        rt = self.rank_table
        r = rt[m]
        out = m
        for e in range(self.n):
            bit = 1 << e
            if not m & bit and rt[m | bit] == r:
                out |= bit
        return out

    def closure(self, S: Iterable[int] | int) -> frozenset[int]:
        m = to_mask(S)
        if m & ~self.full:
            raise MatroidError(f"element out of range in {sorted(to_set(m))}")
        return to_set(self.closure_mask(m))

    def is_flat(self, S: Iterable[int] | int) -> bool:
        m = to_mask(S)
        return not m & ~self.full and self.closure_mask(m) == m

    def is_independent(self, S: Iterable[int] | int) -> bool:
        m = to_mask(S)
        return self.rank_table[m] == popcount(m)

    def basis_of(self, S: Iterable[int] | int) -> frozenset[int]:
        m = to_mask(S)
        out = 0
        for e in range(self.n):
            bit = 1 << e
            if m & bit and self.rank_table[out | bit] > self.rank_table[out]:
                out |= bit
        return to_set(out)

    # lattice of flats

    @cached_property
    def flat_masks_by_rank(self) -> tuple[tuple[int, ...], ...]:
        level = {self.closure_mask(0)}
        levels = []
        while level:
            levels.append(tuple(sorted(level, key=lambda m: flat_order(to_set(m)))))
            nxt = set()
            for F in level:
                for e in range(self.n):
                    if not F >> e & 1:
                        nxt.add(self.closure_mask(F | 1 << e))
            level = nxt
        return tuple(levels)

    @cached_property
    def flats(self) -> tuple[frozenset[int], ...]:
        return tuple(to_set(m) for lvl in self.flat_masks_by_rank for m in lvl)

    @cached_property
    def flat_set(self) -> frozenset[frozenset[int]]:
        return frozenset(self.flats)

    def flats_of_rank(self, k: int) -> list[frozenset[int]]:
        if not 0 <= k <= self.r:
            raise MatroidError(f"rank {k} out of range 0..{self.r}")
        return [to_set(m) for m in self.flat_masks_by_rank[k]]

    def flats_of_corank(self, d: int) -> list[frozenset[int]]:
        if not 0 <= d <= self.r:
            raise MatroidError(f"corank {d} out of range 0..{self.r}")
        return self.flats_of_rank(self.r - d)

    @cached_property
    def hyperplanes(self) -> tuple[frozenset[int], ...]:
        if self.r == 0:
            return ()
        return tuple(self.flats_of_corank(1))

    def corank(self, F: Iterable[int]) -> int:
        return self.r - self.rank(F)

    def join(self, F1: Iterable[int], F2: Iterable[int]) -> frozenset[int]:
        return self.closure(frozenset(F1) | frozenset(F2))

    @staticmethod
    def meet(F1: Iterable[int], F2: Iterable[int]) -> frozenset[int]:
        return frozenset(F1) & frozenset(F2)

    def hyperplanes_over(self, F: Iterable[int]) -> list[frozenset[int]]:
        F = frozenset(F)
        return [H for H in self.hyperplanes if F <= H]

    def covers(self, F: Iterable[int]) -> list[frozenset[int]]:
        """Flats covering ``F`` in the lattice of flats."""
        m = to_mask(F)
        seen = set()
        for e in range(self.n):
            if not m >> e & 1:
                seen.add(self.closure_mask(m | 1 << e))
        return sorted((to_set(x) for x in seen), key=flat_order)

    def is_modular_pair(self, F1: Iterable[int], F2: Iterable[int]) -> bool:
        F1, F2 = frozenset(F1), frozenset(F2)
        return self.rank(F1) + self.rank(F2) == self.rank(F1 & F2) + self.rank(F1 | F2)

    # structure

    @cached_property
    def loops(self) -> frozenset[int]:
        return self.closure(())

    @cached_property
    def coloops(self) -> frozenset[int]:
        return frozenset(e for e in range(self.n) if self.rank(self.full & ~(1 << e)) < self.r)

    @cached_property
    def circuits(self) -> tuple[frozenset[int], ...]:
        rt = self.rank_table
        out = []
        for S in range(1, 1 << self.n):
            k = popcount(S)
            if rt[S] == k - 1 and all(rt[S ^ (1 << e)] == k - 1 for e in range(self.n) if S >> e & 1):
                out.append(to_set(S))
        return tuple(sorted(out, key=flat_order))

    def is_simple(self) -> bool:
        if self.loops:
            return False
        if self.r < 2:
            return self.n == self.r
        return all(self.rank((a, b)) == 2 for a, b in combinations(range(self.n), 2))

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        """Connected components, found by merging the elements of each cocircuit."""
        return _components_from_cocircuits(self, range(self.n), self.hyperplanes)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def is_connected_matroid(self) -> tuple[bool, tuple[frozenset[int], ...]]:
        return self.is_connected(), self.components

    def is_indecomposable_flat(self, F: Iterable[int]) -> bool:
        """Whether the contraction by ``F`` is connected.

        Cocircuits of M/F are the complements of hyperplanes containing F, so
        connectivity reduces to a union-find over those complements.
        """
        F = frozenset(F)
        if not self.is_flat(F):
            raise MatroidError(f"{sorted(F)} is not a flat")
        rest = [e for e in range(self.n) if e not in F]
        if not rest:
            return True
        return len(_components_from_cocircuits(self, rest, self.hyperplanes_over(F))) == 1

    # constructions

    def relabel(self, perm: dict[int, int] | list[int], name: str | None = None) -> "Matroid":
        p = perm if isinstance(perm, dict) else dict(enumerate(perm))
        return Matroid(self.n, self.r, frozenset(frozenset(p[e] for e in B) for B in self.bases), name)

    def dual(self) -> "Matroid":
        E = self.ground
        name = None
        if self.name:
            name = self.name[:-1] if self.name.endswith("*") else self.name + "*"
        return Matroid(self.n, self.n - self.r, frozenset(E - B for B in self.bases), name)

    def minor(self, contract: Iterable[int] = (), delete: Iterable[int] = ()) -> tuple["Matroid", dict[int, int]]:
        """Embedded minor M/I\\J relabeled onto 0..k-1; returns it with the map new -> old."""
        I, J = frozenset(contract), frozenset(delete)
        if (I | J) - self.ground:
            raise MatroidError("minor: element out of range")
        if I & J:
            raise MatroidError("minor: contract and delete sets overlap")
        if not self.is_independent(I):
            raise MatroidError(f"minor: contract set {sorted(I)} is dependent")
        if self.rank(self.ground - J) < self.r:
            raise MatroidError(f"minor: delete set {sorted(J)} is not coindependent")
        keep = sorted(self.ground - I - J)
        new = {old: i for i, old in enumerate(keep)}
        bases = frozenset(
            frozenset(new[e] for e in B - I) for B in self.bases if I <= B and not B & J
        )
        return Matroid(len(keep), self.r - len(I), bases), {i: old for old, i in new.items()}

    def delete(self, J: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        """Deletion of an arbitrary set (rank may drop)."""
        J = frozenset(J)
        keep = sorted(self.ground - J)
        return self.restrict(keep)

    def restrict(self, X: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        X = sorted(set(X))
        return self._from_rank(X, 0)

    def contract(self, I: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        """Contraction of an arbitrary set."""
        I = frozenset(I)
        keep = sorted(self.ground - I)
        return self._from_rank(keep, to_mask(I))

    def _from_rank(self, X: list[int], extra: int) -> tuple["Matroid", dict[int, int]]:
        rt = self.rank_table
        base = rt[extra]
        k = len(X)
        r = rt[to_mask(X) | extra] - base
        bases = []
        for c in combinations(range(k), r):
            m = extra
            for i in c:
                m |= 1 << X[i]
            if rt[m] - base == r:
                bases.append(frozenset(c))
        return Matroid(k, r, frozenset(bases)), dict(enumerate(X))


def _components_from_cocircuits(M: Matroid, elements: Iterable[int], hyperplanes) -> tuple[frozenset[int], ...]:
    elements = list(elements)
    parent = {e: e for e in elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for H in hyperplanes:
        comp = [e for e in elements if e not in H]
        for e in comp[1:]:
            a, b = find(comp[0]), find(e)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for e in elements:
        groups.setdefault(find(e), []).append(e)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=lambda s: min(s)))


def components_by_circuits(M: Matroid) -> tuple[frozenset[int], ...]:
    """Component partition from the circuit relation; an independent oracle."""
    parent = list(range(M.n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for C in M.circuits:
        c = sorted(C)
        for e in c[1:]:
            a, b = find(c[0]), find(e)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for e in range(M.n):
        groups.setdefault(find(e), []).append(e)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=lambda s: min(s)))


def from_bases(n: int, bases: Iterable[Iterable[int]], name: str | None = None) -> Matroid:
    """Validate a basis family and build the matroid."""
    fam = [frozenset(B) for B in bases]
    if not fam:
        raise MatroidError("empty basis family")
    for B in fam:
        if any(not 0 <= e < n for e in B):
            raise MatroidError(f"basis {sorted(B)} has an element outside 0..{n - 1}")
    sizes = {len(B) for B in fam}
    if len(sizes) > 1:
        a = min(fam, key=len)
        b = max(fam, key=len)
        raise MatroidError(f"unequal basis sizes: {sorted(a)} and {sorted(b)}")
    famset = frozenset(fam)
    for B1 in famset:
        for B2 in famset:
            if B1 == B2:
                continue
            for e in B1 - B2:
                if not any((B1 - {e}) | {f} in famset for f in B2 - B1):
                    raise MatroidError(
                        f"exchange axiom fails: bases {sorted(B1)} and {sorted(B2)} at element {e}"
                    )
    return Matroid(n, sizes.pop(), famset, name)


def from_rank_function(n: int, rank, name: str | None = None) -> Matroid:
    full = range(n)
    r = rank(frozenset(full))
    bases = frozenset(frozenset(c) for c in combinations(full, r) if rank(frozenset(c)) == r)
    return Matroid(n, r, bases, name)


def from_hyperplanes(n: int, r: int, hyperplanes: Iterable[Iterable[int]], name: str | None = None) -> Matroid:
    """Matroid with the given hyperplanes; a set is spanning iff it lies in no hyperplane."""
    hs = [frozenset(H) for H in hyperplanes]
    bases = frozenset(
        frozenset(c) for c in combinations(range(n), r) if not any(set(c) <= H for H in hs)
    )
    return Matroid(n, r, bases, name)


def uniform(r: int, n: int) -> Matroid:
    return Matroid(n, r, frozenset(frozenset(c) for c in combinations(range(n), r)), f"U{r},{n}")


def direct_sum(*ms: Matroid) -> Matroid:
    offset = 0
    bases = [frozenset()]
    n = r = 0
    for M in ms:
        bases = [B | frozenset(e + offset for e in C) for B in bases for C in M.bases]
        offset += M.n
        n += M.n
        r += M.r
    name = "+".join(M.name or "?" for M in ms)
    return Matroid(n, r, frozenset(bases), name)


# isomorphism

def _element_invariants(M: Matroid) -> list[tuple]:
    hyp = M.hyperplanes
    inv = []
    for e in range(M.n):
        deg = sum(1 for B in M.basis_masks if B >> e & 1)
        hs = tuple(sorted(len(H) for H in hyp if e in H))
        inv.append((deg, hs))
    return inv


def _rank_iso(rt_a: list[int], rt_b: list[int], k: int, inv_a, inv_b, first_only: bool = True) -> Iterator[list[int]]:
    """Bijections f of range(k) with rt_b[f(S)] == rt_a[S] for all S."""
    order = sorted(range(k), key=lambda e: (sum(1 for x in inv_a if x == inv_a[e]), e))
    image = [0] * k
    used = [False] * k
    # masks of already-placed elements, in both matroids, per prefix
    def rec(pos: int, placed_a: list[int], placed_b: list[int]) -> Iterator[list[int]]:
        if pos == k:
            yield image.copy()
            return
        e = order[pos]
        for f in range(k):
            if used[f] or inv_b[f] != inv_a[e]:
                continue
            ea, fb = 1 << e, 1 << f
            ok = True
            for ma, mb in zip(placed_a, placed_b):
                if rt_a[ma | ea] != rt_b[mb | fb]:
                    ok = False
                    break
            if not ok:
                continue
            used[f] = True
            image[e] = f
            new_a = placed_a + [ma | ea for ma in placed_a]
            new_b = placed_b + [mb | fb for mb in placed_b]
            yield from rec(pos + 1, new_a, new_b)
            used[f] = False

    yield from rec(0, [0], [0])


def isomorphisms(M: Matroid, N: Matroid) -> Iterator[dict[int, int]]:
    """All isomorphisms M -> N as element maps."""
    if M.n != N.n or M.r != N.r or len(M.bases) != len(N.bases):
        return
    inv_a, inv_b = _element_invariants(M), _element_invariants(N)
    if sorted(inv_a) != sorted(inv_b):
        return
    for img in _rank_iso(M.rank_table, N.rank_table, M.n, inv_a, inv_b):
        yield dict(enumerate(img))


def find_isomorphism(M: Matroid, N: Matroid) -> dict[int, int] | None:
    return next(isomorphisms(M, N), None)


def is_isomorphic(M: Matroid, N: Matroid) -> bool:
    return find_isomorphism(M, N) is not None


# minors

def has_minor(M: Matroid, N: Matroid) -> MinorSpec | None:
    """A witness (I, J) with M/I\\J isomorphic to N, or None.

    Contractions are taken along flats F of the right rank (contracting a
    basis I of F); when N is loopless the kept set avoids F entirely.
    """
    if N.n > M.n or N.r > M.r or N.n - N.r > M.n - M.r:
        return None
    loopless = not N.loops
    inv_n = _element_invariants(N)
    sig_n = sorted(inv_n)
    rt = M.rank_table
    for F in M.flats_of_rank(M.r - N.r):
        I = M.basis_of(F)
        Imask = to_mask(I)
        pool = sorted(M.ground - (F if loopless else I))
        base = rt[Imask]
        for X in combinations(pool, N.n):
            Xm = to_mask(X) | Imask
            if rt[Xm] != M.r:
                continue
            sub_rt = [0] * (1 << N.n)
            for S in range(1, 1 << N.n):
                m = Imask
                for i in range(N.n):
                    if S >> i & 1:
                        m |= 1 << X[i]
                sub_rt[S] = rt[m] - base
            if sum(1 for S in range(1 << N.n) if popcount(S) == N.r and sub_rt[S] == N.r) != len(N.bases):
                continue
            sub = Matroid(N.n, N.r, frozenset(
                frozenset(c) for c in combinations(range(N.n), N.r) if sub_rt[to_mask(c)] == N.r
            ))
            inv_s = _element_invariants(sub)
            if sorted(inv_s) != sig_n:
                continue
            if next(_rank_iso(sub_rt, N.rank_table, N.n, inv_s, inv_n), None) is not None:
                return MinorSpec(frozenset(I), frozenset(M.ground - I - frozenset(X)))
    return None


# upper sublattices

@dataclass(frozen=True)
class UpperSublattice:
    """The sublattice {<S> : I ⊆ S ⊆ E - J}, stored by bottom flat and atoms."""

    bottom: frozenset[int]
    atoms: tuple[frozenset[int], ...]
    flats: frozenset[frozenset[int]]

    def atoms_below(self, F: frozenset[int]) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.atoms) if a <= F)


def sublattice_from_atoms(M: Matroid, bottom: frozenset[int], atoms: Iterable[frozenset[int]]) -> UpperSublattice:
    atoms = tuple(sorted(atoms, key=flat_order))
    flats = {bottom}
    for a in atoms:
        flats |= {M.join(F, a) for F in flats}
    return UpperSublattice(bottom, atoms, frozenset(flats))


def upper_sublattices(
    M: Matroid, max_rank: int | None = None, bottom_filter=None, max_atoms: int | None = None
) -> Iterator[UpperSublattice]:
    """Every upper sublattice Λ\\J/I, each exactly once.

    Such a sublattice is determined by its bottom B = <I> and its atom set,
    which can be any family of covers of B whose join is E.
    """
    E = M.ground
    for B in M.flats:
        crk = M.r - M.rank(B)
        if max_rank is not None and crk > max_rank:
            continue
        if bottom_filter is not None and not bottom_filter(B):
            continue
        cov = M.covers(B)
        if not cov:
            yield UpperSublattice(B, (), frozenset({B}))
            continue
        top = len(cov) if max_atoms is None else min(len(cov), max_atoms)
        for k in range(crk, top + 1):
            for A in combinations(cov, k):
                if M.closure(frozenset().union(*A)) != E:
                    continue
                yield sublattice_from_atoms(M, B, A)


def atom_matroid(M: Matroid, sub: UpperSublattice) -> Matroid:
    """The simple matroid on the atoms of ``sub`` whose lattice of flats is ``sub``."""
    k = len(sub.atoms)
    base = M.rank(sub.bottom)

    def rank(S):
        if not S:
            return 0
        return M.rank(sub.bottom.union(*(sub.atoms[i] for i in S))) - base

    return from_rank_function(k, rank)


def minor_spec_of(M: Matroid, sub: UpperSublattice) -> MinorSpec:
    I = M.basis_of(sub.bottom)
    keep = set(sub.bottom)
    for a in sub.atoms:
        keep |= a
    # an element e outside the bottom survives iff <B e> is one of the atoms
    J = frozenset(e for e in M.ground - sub.bottom if M.closure(sub.bottom | {e}) not in sub.atoms)
    return MinorSpec(I, J)


@dataclass(frozen=True)
class Embedding:
    sublattice: UpperSublattice
    spec: MinorSpec
    flat_map: dict  # flats of N -> flats of M

    def __hash__(self):
        return hash(self.sublattice)


def upper_sublattices_of_type(M: Matroid, N: Matroid) -> list[Embedding]:
    """Upper sublattices of M isomorphic to the lattice of the simple matroid N."""
    if not N.is_simple():
        raise MatroidError("upper_sublattices_of_type needs a simple matroid N")
    out = []
    for sub in upper_sublattices(M, max_rank=N.r):
        if len(sub.atoms) != N.n or M.r - M.rank(sub.bottom) != N.r:
            continue
        A = atom_matroid(M, sub)
        iso = find_isomorphism(N, A)
        if iso is None:
            continue
        fmap = {}
        for F in N.flats:
            fmap[F] = M.closure(sub.bottom.union(*(sub.atoms[iso[i]] for i in F))) if F else sub.bottom
        out.append(Embedding(sub, minor_spec_of(M, sub), fmap))
    return out


def simplification_lattice_iso(M: Matroid, N: Matroid) -> bool:
    """Whether M and N have isomorphic lattices of flats."""
    sub_m = sublattice_from_atoms(M, M.closure(()), M.covers(M.closure(())))
    sub_n = sublattice_from_atoms(N, N.closure(()), N.covers(N.closure(())))
    return is_isomorphic(atom_matroid(M, sub_m), atom_matroid(N, sub_n))
