from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from matfound import catalog
from matfound.catalog import CATALOG
from matfound.foundation import (
    FoundationError,
    brute_force_representations,
    check_R_relations,
    classify,
    count_representations,
    cross_ratios_generate,
    foundation,
    foundation_from_matrix,
    fundamental_presentation,
    incidence_graph,
    initial_matrix,
    is_representation,
    rescale,
    restrict_representation,
    theta,
    universal_cross_ratio,
)
from matfound.pasture import find_isomorphism, fingerprint, hom_count, named, parse_pasture

# -- an independent count: projective point configurations over a prime field --


def _rank_mod_p(vectors, p):
    rows = [list(v) for v in vectors]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col] * inv
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def _points(r, p):
    # normalized representatives: first nonzero coordinate equals 1
    out = []
    for v in product(range(p), repeat=r):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            out.append(v)
    return out


def _pgl_order(r, p):
    g = 1
    for i in range(r):
        g *= p**r - p**i
    return g // (p - 1)


def projective_classes(M, p):
    """Ordered configurations realizing M, divided by |PGL_r(F_p)|."""
    pts = _points(M.r, p)
    cfg = []
    checks = [[S for k in range(1, M.r + 1) for S in combinations(range(i), k - 1)] for i in range(M.n)]

    def rec(i):
        if i == M.n:
            return 1
        total = 0
        for v in pts:
            cfg.append(v)
            if all(_rank_mod_p([cfg[j] for j in S] + [v], p) == M.rank(set(S) | {i}) for S in checks[i]):
                total += rec(i + 1)
            cfg.pop()
        return total

    count = rec(0)
    assert count % _pgl_order(M.r, p) == 0
    return count // _pgl_order(M.r, p)


ORACLE_CASES = [
    ("U2,4", 2), ("U2,4", 3), ("U2,4", 5), ("U2,4", 7),
    ("U2,5", 5), ("U2,5", 7), ("U2,6", 7),
    ("F7", 2), ("F7-", 3), ("F7-", 2),
    ("U3,5", 3), ("C5", 3), ("MK4", 2), ("MK4-", 2), ("U3,4", 3),
]


@pytest.mark.parametrize("name, p", ORACLE_CASES)
def test_counts_match_projective_configurations(name, p):
    M = catalog.get(name)
    c = count_representations(M, named(f"F{p}"))
    assert c.hom == c.brute_force == projective_classes(M, p)


# -- worked examples --


KNOWN_U24 = """
gens: a b c d e
add: d*c*e^-1*b^-1 + e^-1*a^-1 - 1
mul: b*d^-1*a^-1 = -1
mul: c*e^-1 = -1
mul: d*e^-1 = -1
mul: b*c^-1*a^-1 = -1
"""

# the forest drawn for U2,4 in our row and column numbering
KNOWN_U24_FOREST = [(3, 0), (3, 1), (3, 2), (2, 0), (2, 3), (1, 0), (0, 1)]


def test_u24_presentation_from_drawn_forest():
    # five variables and the stated relations
    M = catalog.get("U2,4")
    A = initial_matrix(M, forest=KNOWN_U24_FOREST)
    assert len(A.variables) == 5
    ours = foundation_from_matrix(M, A).pasture
    known = parse_pasture(KNOWN_U24)
    assert find_isomorphism(known, ours) is not None
    assert find_isomorphism(known, named("U")) is not None


@pytest.mark.parametrize(
    "name, label",
    [
        ("U2,4", "U"), ("C5", "U"), ("C5*", "U"), ("U2,5", "V"), ("U3,5", "V"),  # known values
        ("F7", "F2"), ("F7*", "F2"), ("U2,3", "F1±"), ("MK4", "F1±"),  # known values
        ("F7-", "D"), ("F7-*", "D"), ("U2,4+U1,2", "U"), ("U2,3+U2,3", "F1±"),  # [DERIVED]
    ],
)
def test_recognized_foundations(name, label):
    assert foundation(catalog.get(name)).recognition.name == label


def test_c5_cross_ratios_are_the_u24_coordinates():
    # C5 is dual to C5*, whose lattice is that of U2,4 (hyperplanes {0}, {1}, {2}, {3,4})
    M = catalog.get("C5")
    rep = foundation(M)
    x = [universal_cross_ratio(rep, t) for t in theta(M, nondegenerate=True)]
    P = rep.pasture
    assert any(P.contains(a, b, P.minus_one) for a in x for b in x)


def test_initial_matrix_counts():
    for name in ("U2,4", "F7", "MK23", "U2,3+U2,3"):
        M = catalog.get(name)
        A = initial_matrix(M)
        G = A.graph
        assert len(G.forest) == len(G.hyperplanes) + M.n - G.components
        assert len(A.variables) == len(G.edges) - len(G.forest)


def test_bad_forest_is_rejected():
    M = catalog.get("U2,4")
    with pytest.raises(FoundationError):
        initial_matrix(M, forest=[(0, 0)])
    with pytest.raises(FoundationError):
        initial_matrix(M, forest=KNOWN_U24_FOREST[:-1])


# -- invariance properties --


SMALL = [n for n in CATALOG if catalog.get(n).n <= 7 and n not in ("U2,6",)]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_random_forest_gives_isomorphic_foundation(name, seed):
    M = catalog.get(name)
    P = foundation(M).pasture
    Q = foundation(M, "random", seed).pasture
    assert fingerprint(P) == fingerprint(Q)
    assert find_isomorphism(P, Q) is not None


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_relabeling_preserves_foundation(name, rnd):
    M = catalog.get(name)
    perm = list(range(M.n))
    rnd.shuffle(perm)
    P, Q = foundation(M).pasture, foundation(M.relabel(perm)).pasture
    assert fingerprint(P) == fingerprint(Q)
    assert find_isomorphism(P, Q) is not None


@pytest.mark.parametrize("name", ["U2,4", "F7", "F7-", "C5", "MK4-"])
def test_paranoid_mode_changes_nothing(name):
    M = catalog.get(name)
    P, Q = foundation(M).pasture, foundation(M, paranoid=True).pasture
    assert find_isomorphism(P, Q) is not None


def test_dfs_and_bfs_forests_differ_but_agree():
    M = catalog.get("F7")
    assert incidence_graph(M, "bfs").forest != incidence_graph(M, "dfs").forest
    assert find_isomorphism(foundation(M).pasture, foundation(M, "dfs").pasture) is not None


def test_unknown_strategy():
    with pytest.raises(FoundationError):
        incidence_graph(catalog.get("U2,4"), "sideways")


# -- representations --


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([("U2,4", "F5"), ("F7-", "F3"), ("U3,5", "F7"), ("C5", "F4")]), st.data())
def test_rescaling_preserves_representations(case, data):
    M, F = catalog.get(case[0]), named(case[1])
    reps = list(brute_force_representations(M, F))
    phi = data.draw(st.sampled_from(reps))
    units = list(F.units())
    rows = data.draw(st.lists(st.sampled_from(units), min_size=len(M.hyperplanes), max_size=len(M.hyperplanes)))
    cols = data.draw(st.lists(st.sampled_from(units), min_size=M.n, max_size=M.n))
    assert is_representation(M, F, rescale(M, F, phi, rows, cols))


def test_all_ones_family_is_binary_representation():
    # the F2 hyperplane functions 1 off H, 0 on H
    F2 = named("F2")
    for name, ok in (("F7", True), ("MK4", True), ("U2,4", False)):
        M = catalog.get(name)
        phi = [[None if e in H else F2.one for e in range(M.n)] for H in M.hyperplanes]
        assert is_representation(M, F2, phi) is ok


def test_support_mismatch():
    M, F = catalog.get("U2,4"), named("F5")
    phi = [[F.one] * 4 for _ in M.hyperplanes]
    with pytest.raises(FoundationError, match="support mismatch"):
        is_representation(M, F, phi)


@pytest.mark.parametrize("name, q", [("U3,5", "F7"), ("F7-", "F3"), ("C5", "F5"), ("MK4", "F3")])
def test_restriction_to_deletions(name, q):
    M, F = catalog.get(name), named(q)
    for phi in list(brute_force_representations(M, F))[:6]:
        for e in range(M.n):
            if e in M.coloops:
                continue
            N, psi = restrict_representation(M, phi, [e])
            assert is_representation(N, F, psi)


def test_ternary_sum_rule():
    # F8 counts factor as F4 times F5 on ternary matroids
    for name in ("U2,4", "C5", "F7-", "MK4", "U~3,4"):
        P = foundation(catalog.get(name)).pasture
        assert hom_count(P, named("F8")) == hom_count(P, named("F4")) * hom_count(P, named("F5"))


# -- relations and presentations --


@pytest.mark.parametrize("name", ["U2,4", "U2,5", "F7", "F7*", "F7-", "C5", "MK4-", "U~3,4"])
def test_relations_hold(name):
    res = check_R_relations(catalog.get(name))
    assert all(f == 0 for _, f in res.values()), res


@pytest.mark.parametrize("name", ["U2,4", "U2,5", "U3,5", "F7", "F7-", "C5", "MK4", "U2,4+U1,2"])
def test_fundamental_presentation_agrees(name):
    M = catalog.get(name)
    P, Q = fundamental_presentation(M).pasture, foundation(M).pasture
    assert fingerprint(P) == fingerprint(Q)
    assert find_isomorphism(P, Q) is not None


@pytest.mark.parametrize("name", SMALL)
def test_cross_ratios_generate(name):
    assert cross_ratios_generate(foundation(catalog.get(name)))


def test_cross_ratio_outside_xi():
    rep = foundation(catalog.get("U2,4"))
    with pytest.raises(FoundationError):
        rep.cross_ratio(0, 1, 0, 2)


# -- classification --


@pytest.mark.parametrize(
    "name, regular, binary, ternary, orientable, factors",
    [
        ("MK4", True, True, True, True, ()),
        ("F7", False, True, False, False, ("F2",)),
        ("U2,4", False, False, True, True, ("U",)),
        ("F7-", False, False, True, True, ("D",)),
        ("U2,5", False, False, False, True, ("V",)),
    ],
)
def test_classify(name, regular, binary, ternary, orientable, factors):
    f = classify(catalog.get(name))
    assert (f.regular, f.binary, f.ternary, f.orientable, f.factors) == (regular, binary, ternary, orientable, factors)


def test_dressian_shape_of_u24():
    f = classify(catalog.get("U2,4"))
    assert f.dressian == (0, 1)
    assert f.as_dict()["dressian"]["n"] == "not computed"


def test_report_sections():
    text = foundation(catalog.get("U2,4")).text()
    heads = [ln for ln in text.splitlines() if ln and not ln.startswith(" ")]
    assert heads == ["presentation", "cross-ratios", "recognized", "flags"]
