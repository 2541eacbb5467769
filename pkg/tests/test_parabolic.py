import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affind.parabolic import (
    PARTITION, TYPE_IA, TYPE_IB, TYPE_II, Flag, InsufficientWindow, ParabolicError,
    ParabolicSubset, RecognitionError, admissible_alpha0_nodes, axiom_violations,
    component_coroots, format_functional, kind, levi_components, levi_table, levi_table_rows,
    m_p, match_cartan, parse_functional, pseudo_parabolic, recognize_type, subset_from_S,
)
from affind.root_core import (
    AffineTypeLabel, FiniteTypeLabel, affine_gcm, catalog_labels, enumerate_roots,
)

A = lambda s, n, t=1: AffineTypeLabel(s, n, t)


def _flag(label, text):
    return ParabolicSubset(Flag.parse(affine_gcm(label), text))


# -- flags --------------------------------------------------------------------------

def test_parse_functional():
    assert parse_functional("m2-m0", 3) == (-1, 0, 1)
    assert parse_functional(" 3/2*m1 - m0 + m1", 3) == (-1, Fraction(5, 2), 0)


@pytest.mark.parametrize("text, pos", [("m2-x0", 2), ("m1 m2", 3), ("q", 0)])
def test_parse_functional_reports_position(text, pos):
    with pytest.raises(ParabolicError, match=f"position {pos}"):
        parse_functional(text, 3)


def test_parse_functional_out_of_range():
    with pytest.raises(ParabolicError, match="out of range"):
        parse_functional("m5", 3)


def test_format_functional_round_trip():
    for vec in [(-1, 0, 1), (Fraction(1, 2), -3, 0), (0, 0, 1)]:
        assert parse_functional(format_functional(vec), 3) == tuple(Fraction(x) for x in vec)


def test_flag_rejects_dependent_and_oversized():
    g = affine_gcm("A2~1")
    with pytest.raises(ParabolicError, match="dependent"):
        Flag(g, ((1, 0, 0), (2, 0, 0)))
    with pytest.raises(ParabolicError):
        Flag(g, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)))
    with pytest.raises(ParabolicError):
        Flag(g, ((1, 0),))


def test_flag_serialization_round_trip():
    P = subset_from_S(affine_gcm("C3~1"), 0, (1, 2))
    d = P.flag.to_dict()
    assert all(isinstance(x, str) and "/" in x for h in d["functionals"] for x in h)
    assert Flag.from_dict(d) == P.flag


# -- subset_from_S ------------------------------------------------------------------

def test_a2_s1_levi_window():
    g = affine_gcm("A2~1")
    P = subset_from_S(g, 0, (1,))
    rs = enumerate_roots(g, 7)
    levi = {r.coeffs for r in rs if P.in_levi(r.coeffs)}
    # oracle: +-alpha_1 + k delta and k delta, written out directly
    expected = set()
    for k in range(-3, 4):
        for a in ((0, 1, 0), (0, -1, 0), (0, 0, 0)):
            beta = tuple(x + k for x in a)
            if any(beta) and abs(sum(beta)) <= 7:
                expected.add(beta)
    assert levi == expected
    assert kind(P).kind == TYPE_II


def test_empty_S_gives_heisenberg_levi():
    g = affine_gcm("A2~1")
    P = subset_from_S(g, 0, ())
    rs = enumerate_roots(g, 9)
    assert {r.coeffs for r in rs if P.in_levi(r.coeffs)} == {r.coeffs for r in rs.imaginary}
    assert levi_components(P, rs).components == ()
    with pytest.raises(ParabolicError, match="no real roots"):
        pseudo_parabolic(P)


def test_a3_s12_single_affine_component():
    g = affine_gcm("A3~1")
    P = subset_from_S(g, 0, (1, 2))
    data = levi_components(P, enumerate_roots(g, 4))
    assert [c.label for c in data.components] == [A("A", 2)]
    assert kind(P).kind == TYPE_II


def test_subset_from_S_errors():
    g = affine_gcm("A2~1")
    with pytest.raises(ParabolicError, match="proper"):
        subset_from_S(g, 0, (1, 2))
    with pytest.raises(ParabolicError, match="admissible"):
        subset_from_S(affine_gcm("G2~1"), 1, ())
    with pytest.raises(ParabolicError):
        subset_from_S(g, 0, (0,))


def test_admissible_affine_nodes():
    assert admissible_alpha0_nodes(affine_gcm("A2~1")) == [0, 1, 2]
    assert admissible_alpha0_nodes(affine_gcm("G2~1")) == [0]
    # the mark-1 node of A_2n^(2) sits at the end of the chain
    assert admissible_alpha0_nodes(affine_gcm("A4~2")) == [2]


def _all_subsets(nodes):
    for r in range(len(nodes)):
        yield from itertools.combinations(nodes, r)


@pytest.mark.parametrize("label", [l for l in catalog_labels(6) if 2 <= l.finite_rank <= 6], ids=str)
def test_subset_from_S_always_type_ii(label):
    g = affine_gcm(label)
    for a0 in admissible_alpha0_nodes(g):
        dot = [i for i in range(g.size) if i != a0]
        for S in _all_subsets(dot):
            assert kind(subset_from_S(g, a0, S)).kind == TYPE_II


# -- classification -----------------------------------------------------------------

def test_kind_examples():
    assert kind(_flag("A2~1", "m2-m0")).kind == TYPE_II
    k = kind(_flag("A2~1", "m0"))
    assert k.kind == TYPE_IA
    # m0 vanishes on the finite roots, which form the finite Levi
    P = _flag("A2~1", "m0")
    assert set(P.levi_roots_intrinsic) == {(0, 1, 0), (0, 0, 1), (0, 1, 1), (0, -1, 0), (0, 0, -1), (0, -1, -1)}
    assert kind(_flag("A2~1", "m1 + 1/2*m0")).kind == TYPE_IA
    assert kind(_flag("A2~1", "m1 + 1/2*m0; m2")).kind == PARTITION
    assert kind(_flag("A2~1", "m2-m0; m1")) == type(k)(TYPE_IB, 1)


def test_partition_kind():
    P = _flag("A2~1", "m0; m1; m2")
    assert kind(P).kind == PARTITION
    assert axiom_violations(P, enumerate_roots(P.gcm, 6)) == []


def test_finite_levi_components():
    P = _flag("A3~1", "m0; m3")
    data = levi_components(P, enumerate_roots(P.gcm, 4))
    assert [c.label for c in data.components] == [FiniteTypeLabel("A", 2)]
    assert data.heisenberg_complement_rank(1) is None


# -- Levi components ---------------------------------------------------------------

def test_a2_component_and_complement_rank():
    g = affine_gcm("A2~1")
    data = levi_components(subset_from_S(g, 0, (1,)), enumerate_roots(g, 3))
    (comp,) = data.components
    assert comp.label == A("A", 1)
    assert comp.cartan == ((2, -2), (-2, 2))
    assert [data.heisenberg_complement_rank(k) for k in (1, 2, -1, 5)] == [1, 1, 1, 1]


@pytest.mark.parametrize("S", [(1,), (2,)])
def test_g2_long_and_short(S):
    g = affine_gcm("G2~1")
    data = levi_components(subset_from_S(g, 0, S), enumerate_roots(g, 6))
    assert [c.label for c in data.components] == [A("A", 1)]


@pytest.mark.parametrize("S, label", [((1, 2, 3), A("B", 3)), ((2, 3, 4), A("C", 3))])
def test_f4_size_three(S, label):
    g = affine_gcm("F4~1")
    data = levi_components(subset_from_S(g, 0, S), enumerate_roots(g, 12))
    assert [c.label for c in data.components] == [label]


def test_insufficient_window():
    g = affine_gcm("A2~1")
    with pytest.raises(InsufficientWindow) as err:
        levi_components(subset_from_S(g, 0, (1,)), enumerate_roots(g, 2))
    assert err.value.required == 3


def test_twisted_component_multiple():
    # short roots of D_4^(2) come with every delta shift, long ones with even shifts
    g = affine_gcm("D4~2")
    data = levi_components(subset_from_S(g, 0, (1, 2)), enumerate_roots(g, 12))
    (comp,) = data.components
    assert comp.label == A("A", 2)
    assert comp.null_multiple == 2
    assert comp.imaginary_multiplicity(1) == 0 and comp.imaginary_multiplicity(2) == 2


# -- recognition ---------------------------------------------------------------------

def test_recognize_examples():
    rs2 = enumerate_roots(affine_gcm("A2~1"), 3)
    assert recognize_type([(0, 1, 0), (1, 0, 1)], rs2) == A("A", 1)
    rs3 = enumerate_roots(affine_gcm("A3~1"), 4)
    assert recognize_type([(0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 0, 1)], rs3) == A("A", 2)
    assert recognize_type([(0, 1, 0)], rs2) == FiniteTypeLabel("A", 1)


def test_recognize_failure_carries_matrix():
    with pytest.raises(RecognitionError) as err:
        match_cartan(((2, -1), (-5, 2)))
    assert err.value.matrix == ((2, -1), (-5, 2))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["E6~1", "F4~1", "D5~2", "A7~2", "E6~2", "B4~1"]), st.randoms())
def test_recognition_permutation_invariant(label, rnd):
    g = affine_gcm(label)
    rs = enumerate_roots(g, g.label.twist * sum(g.marks))
    rows = levi_table_rows(g.label)
    row = rnd.choice(rows)
    data = levi_components(subset_from_S(g, row.alpha0, row.S), rs)
    for comp in data.components:
        basis = list(comp.basis)
        rnd.shuffle(basis)
        assert recognize_type(basis, rs) == comp.label


# -- pseudo parabolic and m_P -------------------------------------------------------

def test_pseudo_a2():
    g = affine_gcm("A2~1")
    P = subset_from_S(g, 0, (1,))
    pp = pseudo_parabolic(P)
    assert pp.heis_basis == ((1, 2),)
    assert [len(pp.heis_plus(k)) for k in (1, 2, 3)] == [1, 1, 1]
    assert pp.heis_plus(-1) == []
    # orthogonal to alpha_1^vee for the coroot Gram matrix (the Cartan matrix of A_2)
    h = pp.heis_basis[0]
    gram = ((2, -1), (-1, 2))
    assert sum(h[i] * gram[i][0] for i in range(2)) == 0
    delta = g.marks
    a2_plus5 = tuple(x + 5 * d for x, d in zip((0, 0, 1), delta))
    a2_minus_plus5 = tuple(x + 5 * d for x, d in zip((0, 0, -1), delta))
    assert pp.nilrad_roots(a2_plus5)
    assert not P.contains(a2_minus_plus5)
    assert not P.contains(tuple(-x for x in a2_plus5))
    assert pp.levi_real_roots((0, 1, 0)) and not pp.levi_real_roots(delta)


def test_pseudo_a3_two_components():
    g = affine_gcm("A3~1")
    pp = pseudo_parabolic(subset_from_S(g, 0, (1, 3)))
    assert len(pp.levi.components) == 2
    assert pp.heis_rank(1) == 1 and len(pp.heis_basis) == 1
    assert len(component_coroots(g, pp.levi)) == 2


@pytest.mark.parametrize("label, S", [("A2~1", (1,)), ("A3~1", (1, 2)), ("A3~1", (1, 3)), ("C3~1", (2, 3)),
                                      ("B3~1", (1, 2))])
def test_pseudo_contained_in_parabolic(label, S):
    g = affine_gcm(label)
    pp = pseudo_parabolic(subset_from_S(g, 0, S))
    strict = False
    for r in enumerate_roots(g, 2 * sum(g.marks)):
        d_ps, d_p = pp.root_space_dim(r.coeffs), pp.parabolic_space_dim(r.coeffs)
        assert d_ps <= d_p
        strict |= d_ps < d_p
    assert strict == any(pp.heis_rank(k) > 0 for k in (1, 2))


def test_m_p_example():
    P = _flag("A2~1", "m2-m0; m1")
    m, N, Nm = m_p(P)
    rs = enumerate_roots(P.gcm, 8)
    levi = {r.coeffs for r in rs if m(r.coeffs)}
    assert levi == {r.coeffs for r in rs if r.coeffs[2] == r.coeffs[0]}
    assert m(P.gcm.marks)
    ext = m_p(P).extension()
    assert kind(ext).kind == TYPE_II


def test_m_p_rejects_other_kinds():
    with pytest.raises(ParabolicError, match="Ib"):
        m_p(_flag("A2~1", "m2-m0"))


def _random_flag(gcm, rnd, k):
    rows = []
    while len(rows) < k:
        rows.append(tuple(Fraction(rnd.randint(-3, 3), rnd.randint(1, 2)) for _ in range(gcm.size)))
        try:
            Flag(gcm, tuple(rows))
        except ParabolicError:
            rows.pop()
    return Flag(gcm, tuple(rows))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2~1", "A3~1", "C2~1", "A4~2"]), st.integers(0, 10 ** 6), st.integers(1, 3))
def test_parabolic_axioms_random_flags(label, seed, k):
    g = affine_gcm(label)
    flag = _random_flag(g, random.Random(seed), min(k, g.size))
    P = ParabolicSubset(flag)
    assert axiom_violations(P, enumerate_roots(g, 6)) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_m_p_partitions_windows(seed):
    g = affine_gcm("A2~1")
    rnd = random.Random(seed)
    # type Ib flags: first functional kills delta, second does not
    while True:
        a, b = rnd.randint(-2, 2), rnd.randint(-2, 2)
        h1 = (-(a + b), a, b)
        h2 = tuple(rnd.randint(-2, 2) for _ in range(3))
        try:
            P = ParabolicSubset(Flag(g, (h1, h2)))
        except ParabolicError:
            continue
        if any(h1) and kind(P).kind == TYPE_IB:
            break
    m, N, Nm = m_p(P)
    for r in enumerate_roots(g, 6):
        b = r.coeffs
        assert [m(b), N(b), Nm(b)].count(True) == 1
        assert P.contains(b) == (m(b) or N(b)) or not P.contains(b)
        if P.contains(b):
            assert m(b) or N(b)
    assert m(g.marks)
    assert kind(m_p(P).extension()).kind == TYPE_II


# -- table --------------------------------------------------------------------------

def test_table_examples():
    assert levi_table("G2~1") == [A("A", 1)]
    assert levi_table("C3~1") == [A("A", 1), A("A", 2), A("C", 2)]


def test_table_rows_machine_readable():
    rows = levi_table_rows("A3~1")
    d = rows[0].to_dict()
    assert set(d) == {"type", "alpha0", "S", "levi"}
    assert all(isinstance(x, str) for x in d["levi"])


def test_table_needs_rank_two():
    with pytest.raises(ParabolicError):
        levi_table("A1~1")
