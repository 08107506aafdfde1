"""Finitely presented pastures.

The unit group of a pasture is written additively: an element is a tuple of
integer coordinates, reduced modulo the torsion moduli of a Smith-normal-form
basis.  ``None`` stands for the zero element.  The null set is stored as the
orbits of its 3-term members under scaling and permutation; the trivial
members ``0`` and ``a - a`` are implicit.

A raw :class:`Presentation` lists generators, multiplicative relations as
exponent vectors whose last entry is the exponent of the sign ``-1``, and
additive relations as triples of such vectors.  :func:`canonicalize` turns it
into a :class:`Pasture`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from typing import Iterable, Iterator, Sequence

from .smith import smith_normal_form, smith_with_transforms, solve_left, vecmat

Vec = tuple[int, ...]
Elem = Vec | None


class PastureError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Generators plus relations; vectors have one entry per generator and a final sign entry."""

    gens: tuple[str, ...]
    mul: tuple[Vec, ...] = ()
    add: tuple[tuple[Elem, Elem, Elem], ...] = ()

    def width(self) -> int:
        return len(self.gens) + 1


def _check_vec(v, width: int, what: str) -> Vec:
    v = tuple(int(x) for x in v)
    if len(v) != width:
        raise PastureError(f"malformed relation: {what} has {len(v)} entries, expected {width}")
    return v


def presentation(gens: Sequence[str], mul: Iterable = (), add: Iterable = ()) -> Presentation:
    """Validate a raw presentation; 2-term additive relations become multiplicative ones."""
    gens = tuple(gens)
    if len(set(gens)) != len(gens):
        raise PastureError("malformed relation: repeated generator name")
    width = len(gens) + 1
    rows = [_check_vec(v, width, "multiplicative relation") for v in mul]
    triples = []
    for rel in add:
        terms = [None if t is None else _check_vec(t, width, "additive term") for t in rel]
        if len(terms) > 3:
            raise PastureError("malformed relation: additive relation with more than 3 terms")
        terms += [None] * (3 - len(terms))
        nonzero = [t for t in terms if t is not None]
        if len(nonzero) == 1:
            raise PastureError("illegal additive relation: a single nonzero term a + 0 + 0")
        if len(nonzero) == 2:
            # a + b in N means b = -a
            a, b = nonzero
            rows.append(tuple(y - x for x, y in zip(a, b))[:-1] + (b[-1] - a[-1] - 1,))
        elif len(nonzero) == 3:
            triples.append(tuple(terms))
    return Presentation(gens, tuple(rows), tuple(triples))


# -- canonical form -----------------------------------------------------------


def _eliminate(rows: list[list[int]], width: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Unit-pivot elimination.

    Returns the remaining rows, the substitution matrix (one row per raw
    column expressing it in the surviving columns) and the surviving columns.
    """
    expr = [[int(i == j) for j in range(width)] for i in range(width)]
    rows = [list(r) for r in rows if any(r)]
    alive = set(range(width))
    while True:
        pivot = None
        for i, r in enumerate(rows):
            cols = [j for j in alive if r[j] in (1, -1)]
            if cols:
                pivot = (i, max(cols))
                break
        if pivot is None:
            break
        i, c = pivot
        r = rows.pop(i)
        s = r[c]
        word = [-s * x for x in r]
        word[c] = 0
        for vec in rows:
            k = vec[c]
            if k:
                for j in range(width):
                    vec[j] += k * word[j]
        for vec in expr:
            k = vec[c]
            if k:
                for j in range(width):
                    vec[j] += k * word[j]
        alive.discard(c)
        rows = [r for r in rows if any(r)]
    keep = sorted(alive)
    return [[r[j] for j in keep] for r in rows], [[e[j] for j in keep] for e in expr], keep


def _diagonal_chain(rows: list[list[int]], dim: int) -> list[int] | None:
    """Moduli when the lattice of ``rows`` is already diagonal with a divisibility chain."""
    d = list(smith_normal_form(rows)) if rows else []
    if any(x == 1 for x in d):
        return None
    mods = d + [0] * (dim - len(d))
    for r in rows:
        for x, m in zip(r, mods):
            if (m and x % m) or (not m and x):
                return None
    return mods


def _reduce(v: Sequence[int], mods: Sequence[int]) -> Vec:
    return tuple(x % m if m else x for x, m in zip(v, mods))


@dataclass(frozen=True)
class _Coordinates:
    """Map from raw exponent vectors to canonical coordinates."""

    expr: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    keep: tuple[int, ...]
    mods: tuple[int, ...]

    def __call__(self, v: Sequence[int]) -> Vec:
        r = vecmat(v, self.expr)
        y = vecmat(r, self.V) if self.V else r
        return _reduce([y[j] for j in self.keep], self.mods)


def _orbit_key(a: Vec, b: Vec, c: Vec, mods: Sequence[int]) -> tuple[Vec, Vec]:
    """Representative of the scaling-and-permutation orbit of a 3-term sum of units."""
    best = None
    for p, q, r in permutations((a, b, c)):
        key = (_reduce([x - y for x, y in zip(q, p)], mods), _reduce([x - y for x, y in zip(r, p)], mods))
        if best is None or key < best:
            best = key
    return best


class Pasture:
    """A canonicalized pasture.

    ``mods[j]`` is the order of the j-th basis element of the unit group (0 for
    infinite order); ``eps`` is the coordinate vector of ``-1``; ``orbits``
    holds one key ``(u, v)`` per orbit, standing for the sum ``1 + u + v``.
    """

    def __init__(self, mods, eps, orbits, names=None, name=None, coords=None, source=None):
        self.mods = tuple(mods)
        self.eps = tuple(eps)
        self.orbits = frozenset(orbits)
        self.names = tuple(names) if names else tuple(f"u{i + 1}" for i in range(len(self.mods)))
        self.name = name
        self._coords = coords
        self.source = source

    # identity is the canonical data only
    def _key(self):
        return (self.mods, self.eps, tuple(sorted(self.orbits)))

    def __eq__(self, other):
        return isinstance(other, Pasture) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = self.name or "pasture"
        return f"<{label}: units {self.unit_group_str()}, {len(self.orbits)} null orbits>"

    # -- unit group --

    @property
    def rank(self) -> int:
        return len(self.mods)

    @property
    def free_rank(self) -> int:
        return sum(1 for m in self.mods if m == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(m for m in self.mods if m)

    def unit_group_str(self) -> str:
        parts = [f"Z/{m}" for m in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "1"

    @property
    def minus_one_is_one(self) -> bool:
        return not any(self.eps)

    def is_finite(self) -> bool:
        return all(self.mods)

    @property
    def one(self) -> Vec:
        return (0,) * self.rank

    @property
    def minus_one(self) -> Vec:
        return self.eps

    def units(self) -> Iterator[Vec]:
        if not self.is_finite():
            raise PastureError("infinite target: unit group is infinite")
        return product(*(range(m) for m in self.mods))

    def num_units(self) -> int:
        n = 1
        for m in self.mods:
            if not m:
                raise PastureError("infinite target: unit group is infinite")
            n *= m
        return n

    def mul(self, a: Elem, b: Elem) -> Elem:
        if a is None or b is None:
            return None
        return _reduce([x + y for x, y in zip(a, b)], self.mods)

    def div(self, a: Elem, b: Vec) -> Elem:
        if a is None:
            return None
        return _reduce([x - y for x, y in zip(a, b)], self.mods)

    def inv(self, a: Vec) -> Vec:
        return _reduce([-x for x in a], self.mods)

    def pow(self, a: Vec, k: int) -> Vec:
        return _reduce([k * x for x in a], self.mods)

    def neg(self, a: Elem) -> Elem:
        return self.mul(a, self.eps)

    def element(self, raw: Sequence[int]) -> Vec:
        """Canonical element of a raw exponent vector (generators of the source, then sign)."""
        if self._coords is None:
            raise PastureError("pasture has no source presentation")
        return self._coords(raw)

    def check(self, a: Elem) -> Elem:
        if a is None:
            return None
        a = tuple(a)
        if len(a) != self.rank:
            raise PastureError(f"foreign element: {a} has {len(a)} coordinates, expected {self.rank}")
        return _reduce(a, self.mods)

    def word(self, a: Elem) -> str:
        """Human-readable form, e.g. ``-u1^2*u3``."""
        if a is None:
            return "0"

        def mono(v):
            parts = []
            for name, x in zip(self.names, v):
                if x == 1:
                    parts.append(name)
                elif x:
                    parts.append(f"{name}^{x}")
            return "*".join(parts) or "1"

        if any(self.eps):
            b = self.neg(a)
            if sum(1 for x in b if x) < sum(1 for x in a if x):
                return "-" + mono(b)
        return mono(a)

    # -- null set --

    def contains(self, a: Elem, b: Elem, c: Elem) -> bool:
        """Whether ``a + b + c`` lies in the null set."""
        a, b, c = self.check(a), self.check(b), self.check(c)
        nonzero = [t for t in (a, b, c) if t is not None]
        if not nonzero:
            return True
        if len(nonzero) == 1:
            return False
        if len(nonzero) == 2:
            return nonzero[1] == self.neg(nonzero[0])
        return _orbit_key(a, b, c, self.mods) in self.orbits

    def orbit_triples(self) -> list[tuple[Vec, Vec, Vec]]:
        return [(self.one, u, v) for u, v in sorted(self.orbits)]

    def fundamental_pairs(self) -> list[tuple[Vec, Vec]]:
        """All pairs of units ``(z, t)`` with ``z + t - 1`` in the null set."""
        pairs = set()
        for triple in self.orbit_triples():
            for i in range(3):
                f = self.neg(self.inv(triple[i]))
                z, t = (self.mul(triple[j], f) for j in range(3) if j != i)
                pairs.add((z, t))
                pairs.add((t, z))
        return sorted(pairs)

    def fundamental_elements(self) -> list[Vec]:
        return sorted({z for z, _ in self.fundamental_pairs()})

    def check_axioms(self) -> bool:
        """Unique additive inverses and no ``a + 0 + 0``; exhaustive on finite pastures."""
        sample = list(self.units()) if self.is_finite() else [self.one, self.eps]
        for a in sample:
            if self.contains(a, None, None):
                return False
            if self.is_finite():
                inverses = [b for b in self.units() if self.contains(a, b, None)]
                if inverses != [self.neg(a)]:
                    return False
        return True

    # -- presentations --

    def raw(self) -> Presentation:
        """A presentation whose canonical form is this pasture again."""
        k = self.rank
        rows = [tuple(m * int(i == j) for j in range(k)) + (0,) for i, m in enumerate(self.mods) if m]
        rows.append(self.eps + (-1,))
        add = [tuple(t + (0,) for t in triple) for triple in self.orbit_triples()]
        return Presentation(self.names, tuple(rows), tuple(add))

    def quotient(self, mul_pairs: Iterable[tuple[Vec, Vec]] = (), add_triples: Iterable = (), name=None) -> "Pasture":
        """Impose ``a = b`` for each pair and ``a + b + c`` in N for each triple."""
        base = self.raw()
        extra_mul = [tuple(x - y for x, y in zip(a, b)) + (0,) for a, b in mul_pairs]
        extra_add = [tuple(None if t is None else tuple(t) + (0,) for t in tr) for tr in add_triples]
        return canonicalize(presentation(base.gens, base.mul + tuple(extra_mul), base.add + tuple(extra_add)), name)

    def text(self) -> str:
        """Round-trips through :func:`parse_pasture` up to isomorphism."""
        lines = [f"# units: {self.unit_group_str()}"]
        lines.append("gens: " + " ".join(self.names))
        for name, m in zip(self.names, self.mods):
            if m:
                lines.append(f"mul: {name}^{m} = 1")
        eps = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(self.names, self.eps) if x)
        lines.append(f"mul: -1 = {eps or 1}")
        for _, u, v in self.orbit_triples():
            terms = ["1"]
            for t in (u, v):
                w = self.word(t)
                terms.append(f"- {w[1:]}" if w.startswith("-") else f"+ {w}")
            lines.append("add: " + " ".join(terms))
        return "\n".join(lines)


def canonicalize(pres: Presentation, name: str | None = None) -> Pasture:
    """Canonical form: unit-pivot elimination, then Smith normal form on what is left.

    When the remaining lattice is already diagonal with a divisibility chain
    the coordinates are kept as they are, so canonicalizing a canonical form
    is the identity.
    """
    width = pres.width()
    rows = [list(r) for r in pres.mul]
    rows.append([0] * (width - 1) + [2])
    rows, expr, keep = _eliminate(rows, width)
    dim = len(keep)
    names = [pres.gens[j] if j < len(pres.gens) else "s" for j in keep]
    mods = _diagonal_chain(rows, dim)
    if mods is not None:
        V: tuple = ()
        kept = tuple(range(dim))
    else:
        d, _, Vm = smith_with_transforms(rows)
        full = list(d) + [0] * (dim - len(d))
        kept = tuple(j for j in range(dim) if full[j] != 1)
        mods = [full[j] for j in kept]
        V = tuple(tuple(r) for r in Vm)
        names = None
    coords = _Coordinates(tuple(tuple(e) for e in expr), V, kept, tuple(mods))
    eps = coords([0] * (width - 1) + [1])
    orbits = set()
    for triple in pres.add:
        a, b, c = (coords(t) for t in triple)
        orbits.add(_orbit_key(a, b, c, mods))
    if names is not None and len(set(names)) != len(names):
        names = None
    return Pasture(mods, eps, orbits, names, name, coords, pres)


# -- finite fields ------------------------------------------------------------

_IRREDUCIBLE = {4: (2, (1, 1, 1)), 8: (2, (1, 1, 0, 1)), 9: (3, (1, 0, 1))}


class _GF:
    """GF(q) for small q, elements encoded as base-p digit strings of polynomial coefficients."""

    def __init__(self, q: int):
        if q in (2, 3, 5, 7):
            self.p, self.poly = q, (0, 1)
        elif q in _IRREDUCIBLE:
            self.p, self.poly = _IRREDUCIBLE[q]
        else:
            raise PastureError(f"unsupported field size {q}")
        self.q = q
        self.deg = len(self.poly) - 1

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.deg):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, ds: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(ds))

    def add(self, a: int, b: int) -> int:
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        p, deg = self.p, self.deg
        if deg == 1:
            return a * b % p
        prod_ = [0] * (2 * deg - 1)
        for i, x in enumerate(self._digits(a)):
            for j, y in enumerate(self._digits(b)):
                prod_[i + j] = (prod_[i + j] + x * y) % p
        for k in range(len(prod_) - 1, deg - 1, -1):
            c = prod_[k]
            if c:
                for i, m in enumerate(self.poly):
                    prod_[k - deg + i] = (prod_[k - deg + i] - c * m) % p
        return self._encode(prod_[:deg])

    def primitive(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x, order = self.mul(x, g), order + 1
            if order == self.q - 1:
                return g
        raise PastureError("no primitive element")  # pragma: no cover


def finite_field(q: int) -> Pasture:
    """GF(q) as a pasture: units cyclic of order q-1, null set = all 3-term zero sums."""
    F = _GF(q)
    g = F.primitive()
    log, x = {}, 1
    for k in range(q - 1):
        log[x] = k
        x = F.mul(x, g)
    minus_one = next(a for a in log if F.add(a, 1) == 0)
    add = []
    units = sorted(log)
    for a in units:
        for b in units:
            c = next((c for c in units if F.add(F.add(a, b), c) == 0), None)
            if c is not None:
                add.append(((log[a], 0), (log[b], 0), (log[c], 0)))
    mul = [(q - 1, 0), (log[minus_one], -1)]
    label = {2: "F2", 3: "F3"}.get(q, f"F{q}")
    return canonicalize(presentation(("g",), mul, add), label)


# -- text format ----------------------------------------------------------------

_MONO = re.compile(r"^\s*([+-]?)\s*(.*?)\s*$")


def _parse_monomial(text: str, gens: Sequence[str]) -> Vec:
    m = _MONO.match(text)
    sign, body = m.group(1), m.group(2)
    vec = [0] * (len(gens) + 1)
    if sign == "-":
        vec[-1] = 1
    if not body:
        raise PastureError(f"malformed relation: empty term in {text!r}")
    for factor in body.split("*"):
        factor = factor.strip()
        if factor == "1":
            continue
        if factor == "-1":
            vec[-1] += 1
            continue
        base, _, exp = factor.partition("^")
        base = base.strip()
        if base not in gens:
            raise PastureError(f"malformed relation: unknown generator {base!r}")
        try:
            k = int(exp) if exp else 1
        except ValueError:
            raise PastureError(f"malformed relation: bad exponent in {factor!r}") from None
        vec[gens.index(base)] += k
    return tuple(vec)


def _split_terms(text: str) -> list[str]:
    terms, cur = [], ""
    for ch in text.strip():
        if ch in "+-" and cur.strip() and not cur.rstrip().endswith(("^", "*")):
            terms.append(cur)
            cur = ""
        cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_pasture(text: str, name: str | None = None) -> Pasture:
    """Parse ``gens:``, ``mul: lhs = rhs`` and ``add: a + b + c`` lines."""
    gens: list[str] = []
    mul, add = [], []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        if key == "gens":
            gens = rest.split()
        elif key == "name":
            name = rest.strip()
        elif key == "mul":
            lhs, eq, rhs = rest.partition("=")
            rhs = rhs if eq else "1"
            a, b = _parse_monomial(lhs, gens), _parse_monomial(rhs, gens)
            mul.append(tuple(x - y for x, y in zip(a, b)))
        elif key == "add":
            terms = []
            for t in _split_terms(rest):
                if t.replace("+", "").replace("-", "").strip() == "0":
                    terms.append(None)
                else:
                    terms.append(_parse_monomial(t, gens))
            add.append(terms)
        else:
            raise PastureError(f"malformed relation: unknown line {raw_line!r}")
    return canonicalize(presentation(gens, mul, add), name)


# -- named pastures -------------------------------------------------------------


def _named_presentations() -> dict[str, str]:
    return {
        "F1pm": "",
        "F2": "add: 1 + 1",
        "F3": "add: 1 + 1 + 1",
        "K": "mul: -1 = 1\nadd: 1 + 1 + 1",
        "S": "add: 1 + 1 - 1",
        "U": "gens: x y\nadd: x + y - 1",
        "D": "gens: z\nadd: z - 1 - 1",
        "H": "gens: z\nadd: z^3 + 1\nadd: z^2 - z + 1",
        "V": "gens: x1 x2 x3 x4 x5\n"
        + "\n".join(f"add: x{i} + x{(i - 2) % 5 + 1}*x{i % 5 + 1} - 1" for i in range(1, 6)),
    }


ALIASES = {
    "F1±": "F1pm", "F1+-": "F1pm", "F1": "F1pm", "𝔽₁±": "F1pm",
    "𝔽₂": "F2", "𝔽₃": "F3", "𝕂": "K", "𝕊": "S", "𝕌": "U", "𝔻": "D", "ℍ": "H", "𝕍": "V",
}
DISPLAY = {"F1pm": "F1±"}


@lru_cache(maxsize=None)
def named(label: str) -> Pasture:
    """Look up a named pasture: F1pm, F2, F3, K, S, U, D, H, V, or Fq / GF(q) for q <= 9."""
    key = ALIASES.get(label.strip(), label.strip())
    m = re.match(r"^(?:GF\((\d+)\)|F(\d+))$", key)
    if m and key not in ("F2", "F3"):
        q = int(m.group(1) or m.group(2))
        return finite_field(q)
    table = _named_presentations()
    if key not in table:
        raise KeyError(label)
    return parse_pasture(table[key], key)


def named_labels() -> list[str]:
    return ["F1pm", "F2", "F3", "F4", "F5", "F7", "F8", "F9", "K", "S", "U", "D", "H", "V"]


def make_pasture(spec) -> Pasture:
    """A named label, pasture text, or a :class:`Presentation`."""
    if isinstance(spec, Pasture):
        return spec
    if isinstance(spec, Presentation):
        return canonicalize(spec)
    if isinstance(spec, str):
        try:
            return named(spec)
        except KeyError:
            if ":" in spec:
                return parse_pasture(spec)
            raise
    raise PastureError(f"cannot build a pasture from {type(spec).__name__}")


# -- tensor products --------------------------------------------------------------


def tensor(*ps: Pasture, name: str | None = None) -> Pasture:
    """Tensor product: generators side by side with the signs identified."""
    if not ps:
        return named("F1pm")
    total = sum(p.rank for p in ps)
    gens, rows, add = [], [], []
    offset = 0
    for idx, p in enumerate(ps):
        gens += [f"{n}_{idx + 1}" if len(ps) > 1 else n for n in p.names]

        def lift(v, off=offset, p=p):
            return (0,) * off + tuple(v) + (0,) * (total - off - p.rank)

        for i, m in enumerate(p.mods):
            if m:
                e = [0] * p.rank
                e[i] = m
                rows.append(lift(e) + (0,))
        rows.append(lift(p.eps) + (-1,))
        for triple in p.orbit_triples():
            add.append(tuple(lift(t) + (0,) for t in triple))
        offset += p.rank
    return canonicalize(Presentation(tuple(gens), tuple(rows), tuple(add)), name)


# -- morphisms --------------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    """Images of the canonical basis of the source unit group."""

    source: Pasture = field(compare=False, repr=False)
    target: Pasture = field(compare=False, repr=False)
    images: tuple[Vec, ...]

    def __call__(self, a: Elem) -> Elem:
        if a is None:
            return None
        acc = list(self.target.one)
        for x, img in zip(a, self.images):
            if x:
                for j, y in enumerate(img):
                    acc[j] += x * y
        return _reduce(acc, self.target.mods)


def _combine(coeffs: Sequence[int], images: Sequence[Vec], mods: Sequence[int]) -> Vec:
    acc = [0] * len(mods)
    for c, img in zip(coeffs, images):
        if c:
            for j, y in enumerate(img):
                acc[j] += c * y
    return _reduce(acc, mods)


def hom_enumerate(P: Pasture, Q: Pasture) -> list[Morphism]:
    """All pasture morphisms ``P -> Q`` for a target with finite unit group."""
    if not Q.is_finite():
        raise PastureError("infinite target: unit group is infinite")
    units = list(Q.units())
    choices = []
    for m in P.mods:
        choices.append([u for u in units if not m or Q.pow(u, m) == Q.one])
    # checks keyed by the last basis index they involve
    checks: list[list] = [[] for _ in range(P.rank + 1)]

    def last(*vs):
        idx = [j for v in vs for j, x in enumerate(v) if x]
        return max(idx) + 1 if idx else 0

    checks[last(P.eps)].append(("eps", P.eps))
    for _, u, v in P.orbit_triples():
        checks[last(u, v)].append(("add", u, v))
    out: list[Morphism] = []
    images: list[Vec] = []

    def ok(level: int) -> bool:
        for chk in checks[level]:
            if chk[0] == "eps":
                if _combine(chk[1], images, Q.mods) != Q.eps:
                    return False
            else:
                u = _combine(chk[1], images, Q.mods)
                v = _combine(chk[2], images, Q.mods)
                if not Q.contains(Q.one, u, v):
                    return False
        return True

    def rec(j: int):
        if j == P.rank:
            out.append(Morphism(P, Q, tuple(images)))
            return
        for u in choices[j]:
            images.append(u)
            if ok(j + 1):
                rec(j + 1)
            images.pop()

    if ok(0):
        rec(0)
    return out


def iter_presentation_homs(pres: Presentation, Q: Pasture) -> Iterator[tuple[Vec, ...]]:
    """Images of the raw generators under every morphism from the presented pasture to ``Q``.

    Generators are assigned in order; a multiplicative relation whose last
    generator has coefficient +-1 fixes that generator's value instead of
    branching over all units.
    """
    if not Q.is_finite():
        raise PastureError("infinite target: unit group is infinite")
    m = len(pres.gens)
    units = list(Q.units())

    def support(v):
        return tuple((j, x) for j, x in enumerate(v[:m]) if x)

    def last(*vs):
        return max((j for v in vs for j, _ in support(v)), default=-1)

    checks: list[list] = [[] for _ in range(m + 1)]
    forced: list = [None] * m
    for row in pres.mul:
        j = last(row)
        sup = support(row)
        if j >= 0 and row[j] in (1, -1) and forced[j] is None:
            forced[j] = (row[j], tuple((i, x) for i, x in sup if i != j), row[m])
        else:
            checks[j + 1].append(("mul", sup, row[m]))
    for triple in pres.add:
        checks[last(*triple) + 1].append(("add", tuple((support(t), t[m]) for t in triple)))
    vals: list[Vec] = []

    def value(sup, sign):
        acc = [sign * x for x in Q.eps]
        for j, x in sup:
            for k, y in enumerate(vals[j]):
                acc[k] += x * y
        return _reduce(acc, Q.mods)

    def ok(level):
        for chk in checks[level]:
            if chk[0] == "mul":
                if any(value(chk[1], chk[2])):
                    return False
            else:
                a, b, c = (value(sup, sign) for sup, sign in chk[1])
                if not Q.contains(a, b, c):
                    return False
        return True

    def rec(j):
        if j == m:
            yield tuple(vals)
            return
        if forced[j] is not None:
            s, sup, sign = forced[j]
            # s*x_j + rest = 0, s = +-1
            rest = value(sup, sign)
            cands = [Q.pow(rest, -s)]
        else:
            cands = units
        for u in cands:
            vals.append(u)
            if ok(j + 1):
                yield from rec(j + 1)
            vals.pop()

    if ok(0):
        yield from rec(0)


@lru_cache(maxsize=4096)
def hom_count(P: Pasture, Q: Pasture) -> int:
    """|Hom(P, Q)|, counted on the source presentation when one is attached."""
    if P.source is not None:
        return sum(1 for _ in iter_presentation_homs(P.source, Q))
    return len(hom_enumerate(P, Q))


def _spans(vectors: Sequence[Vec], mods: Sequence[int]) -> bool:
    """Whether the vectors generate the group with the given moduli."""
    k = len(mods)
    if k == 0:
        return True
    rows = [list(v) for v in vectors]
    rows += [[m * int(i == j) for j in range(k)] for i, m in enumerate(mods) if m]
    if not rows:
        return False
    d = smith_normal_form(rows)
    return len(d) == k and all(x == 1 for x in d)


def _express(x: Vec, gens: Sequence[Vec], mods: Sequence[int]) -> list[int] | None:
    k = len(mods)
    rows = [list(g) for g in gens]
    rows += [[m * int(i == j) for j in range(k)] for i, m in enumerate(mods) if m]
    if k == 0:
        return [0] * len(gens)
    sol = solve_left(rows, list(x))
    return None if sol is None else sol[: len(gens)]


def _generating_fundamentals(P: Pasture) -> list[Vec] | None:
    """Greedy generating set of fundamental elements (together with -1), partners kept adjacent."""
    chosen: list[Vec] = []
    current = smith_normal_form([list(P.eps)] + [[m * int(i == j) for j in range(P.rank)] for i, m in enumerate(P.mods) if m]) if P.rank else ()
    for z, t in P.fundamental_pairs():
        for w in (z, t):
            if _spans([P.eps] + chosen, P.mods):
                return chosen
            rows = [list(P.eps)] + [list(c) for c in chosen] + [list(w)]
            rows += [[m * int(i == j) for j in range(P.rank)] for i, m in enumerate(P.mods) if m]
            new = smith_normal_form(rows)
            if new != current:
                chosen.append(w)
                current = new
    return chosen if _spans([P.eps] + chosen, P.mods) else None


def isomorphisms(P: Pasture, Q: Pasture) -> Iterator[Morphism]:
    """All isomorphisms ``P -> Q``, found by mapping fundamental elements to fundamental elements.

    Requires the unit group of ``P`` to be generated by ``-1`` and fundamental
    elements; otherwise finite pastures fall back to enumerating morphisms.
    """
    if P.mods != Q.mods or P.minus_one_is_one != Q.minus_one_is_one or len(P.orbits) != len(Q.orbits):
        return
    fp, fq = P.fundamental_elements(), Q.fundamental_elements()
    if len(fp) != len(fq):
        return
    gens = _generating_fundamentals(P)
    if gens is None:
        if P.is_finite() and Q.is_finite():
            for h in hom_enumerate(P, Q):
                if _is_iso(h):
                    yield h
            return
        raise PastureError("unit group not generated by fundamental elements and -1")
    S = [P.eps] + gens
    fq_set = set(fq)
    basis = [tuple(int(i == j) for j in range(P.rank)) for i in range(P.rank)]
    targets = []  # (expression, kind, payload)
    for f in fp:
        targets.append((_express(f, S, P.mods), "fund"))
    for _, u, v in P.orbit_triples():
        targets.append((_express(u, S, P.mods), _express(v, S, P.mods)))
    by_level: list[list] = [[] for _ in range(len(S) + 1)]
    for t in targets:
        exprs = [t[0]] if t[1] == "fund" else [t[0], t[1]]
        lvl = max((i + 1 for e in exprs for i, c in enumerate(e) if c), default=0)
        by_level[lvl].append(t)
    basis_expr = [_express(b, S, P.mods) for b in basis]
    images: list[Vec] = [Q.eps]

    def ok(level):
        for t in by_level[level]:
            if t[1] == "fund":
                if _combine(t[0], images, Q.mods) not in fq_set:
                    return False
            else:
                u, v = _combine(t[0], images, Q.mods), _combine(t[1], images, Q.mods)
                if not Q.contains(Q.one, u, v):
                    return False
        return True

    def finish():
        imgs = tuple(_combine(e, images, Q.mods) for e in basis_expr)
        h = Morphism(P, Q, imgs)
        for m, img in zip(P.mods, imgs):
            if m and Q.pow(img, m) != Q.one:
                return None
        for s, img in zip(S, images):
            if h(s) != img:
                return None
        return h if _is_iso(h) else None

    def rec(i):
        if i == len(S):
            h = finish()
            if h is not None:
                yield h
            return
        for w in fq:
            if w in images:
                continue
            images.append(w)
            if ok(i + 1):
                yield from rec(i + 1)
            images.pop()

    if ok(0) and ok(1):
        yield from rec(1)


def _is_iso(h: Morphism) -> bool:
    P, Q = h.source, h.target
    if P.mods != Q.mods or not _spans(h.images, Q.mods):
        return False
    if h(P.eps) != Q.eps:
        return False
    image_orbits = set()
    for one, u, v in P.orbit_triples():
        a, b, c = h(one), h(u), h(v)
        if not Q.contains(a, b, c):
            return False
        image_orbits.add(_orbit_key(a, b, c, Q.mods))
    return len(image_orbits) == len(Q.orbits)


def find_isomorphism(P: Pasture, Q: Pasture) -> Morphism | None:
    return next(isomorphisms(P, Q), None)


def automorphisms(P: Pasture) -> list[Morphism]:
    return list(isomorphisms(P, P))


# -- recognition ------------------------------------------------------------------

PANEL = ("F2", "F3", "F4", "F5", "F7", "F8", "K", "S")
NAMED_TARGETS = ("F1pm", "F2", "F3", "H", "D", "U", "V")
FACTORS = ("F2", "F3", "H", "D", "U")
MAX_FACTORS = 6


def fingerprint(P: Pasture) -> tuple:
    return (
        P.mods,
        P.minus_one_is_one,
        len(P.fundamental_elements()),
        len(P.orbits),
        tuple(hom_count(P, named(q)) for q in PANEL),
    )


def _cheap(P: Pasture) -> tuple:
    return (P.mods, P.minus_one_is_one, len(P.orbits), len(P.fundamental_elements()))


@dataclass(frozen=True)
class Recognition:
    kind: str  # "named", "tensor" or "unrecognized"
    factors: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        if self.kind == "unrecognized":
            return "unrecognized"
        if not self.factors:
            return "F1±"
        return " ⊗ ".join(DISPLAY.get(f, f) for f in self.factors)

    def __str__(self):
        return self.name


@lru_cache(maxsize=None)
def _tensor_candidate(factors: tuple[str, ...]) -> Pasture:
    return tensor(*(named(f) for f in factors), name=" ⊗ ".join(factors))


def _free_rank_of(f: str) -> int:
    return named(f).free_rank


@lru_cache(maxsize=256)
def recognize(P: Pasture) -> Recognition:
    """Identify a named pasture or a tensor product of F2, F3, H, D, U (up to six factors).

    A name is returned only after an explicit isomorphism has been found.
    """
    cheap = _cheap(P)
    fp = None
    for label in NAMED_TARGETS:
        Q = named(label)
        if _cheap(Q) != cheap:
            continue
        fp = fp or fingerprint(P)
        if fingerprint(Q) == fp and find_isomorphism(Q, P) is not None:
            return Recognition("named", () if label == "F1pm" else (label,))
    for s in range(2, MAX_FACTORS + 1):
        for factors in combinations_with_replacement(FACTORS, s):
            if sum(_free_rank_of(f) for f in factors) != P.free_rank:
                continue
            Q = _tensor_candidate(factors)
            if _cheap(Q) != cheap:
                continue
            fp = fp or fingerprint(P)
            if fingerprint(Q) == fp and find_isomorphism(Q, P) is not None:
                return Recognition("tensor", factors)
    return Recognition("unrecognized")
