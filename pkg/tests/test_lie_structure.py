from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from affind.lie_structure import (
    C, D, CapabilityError, LoopAlgebra, chevalley_constants, straighten, straighten_sum,
    uea_multiply, verify_antisymmetry, verify_jacobi,
)

FINITE = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4"]


def _neg(a):
    return tuple(-x for x in a)


@pytest.mark.parametrize("label", FINITE)
def test_constants_follow_root_strings(label):
    t = chevalley_constants(label)
    rs = set(t.roots)
    for (a, b), v in t.constants.items():
        p = 0
        while tuple(y - (p + 1) * x for x, y in zip(a, b)) in rs:
            p += 1
        assert abs(v) == p + 1
        assert t.constants[(_neg(a), _neg(b))] == -v
        assert t.constants[(b, a)] == -v


def test_a2_constants():
    t = chevalley_constants("A2")
    assert t.constants[((1, 0), (0, 1))] == 1
    assert t.constants[((1, 1), (-1, 0))] == -1
    assert set(abs(v) for v in t.constants.values()) == {1}


def test_b2_has_constant_two():
    assert {abs(v) for v in chevalley_constants("B2").constants.values()} == {1, 2}


@pytest.mark.parametrize("label", FINITE)
def test_coroots_and_form(label):
    t = chevalley_constants(label)
    n = t.rank
    for i in range(n):
        simple = tuple(int(i == j) for j in range(n))
        assert t.coroots[simple] == tuple(int(i == j) for j in range(n))
    for a in t.roots:
        # [x_a, x_-a] = h_a, which pairs with a to give 2
        assert sum(t.coroots[a][i] * t.root_value(a, i) for i in range(n)) == 2
        assert t.coroots[_neg(a)] == _neg(t.coroots[a])
    long_forms = {t.root_form[a] for a in t.roots}
    assert min(long_forms) == 1


def test_unsupported_types_raise_capability_error():
    for label in ("E6", "F4", "G2"):
        with pytest.raises(CapabilityError):
            chevalley_constants(label)
    assert issubclass(CapabilityError, NotImplementedError)


def test_to_text_lists_every_constant():
    t = chevalley_constants("A2")
    text = t.to_text()
    assert text.startswith("# structure A2")
    assert sum(1 for line in text.splitlines() if line.startswith("N ")) == len(t.constants)
    assert "N 1,0 0,1 1" in text


# -- loop algebra -----------------------------------------------------------------

@pytest.fixture(scope="module")
def a2():
    return LoopAlgebra(chevalley_constants("A2"))


def test_derivation_and_central(a2):
    x = ("e", (1, 0), 3)
    assert a2.bracket(D, x) == {x: 3}
    assert a2.bracket(x, D) == {x: -3}
    for y in a2.basis(2):
        assert a2.bracket(C, y) == {} and a2.bracket(y, C) == {}


def test_central_term(a2):
    x, y = ("e", (1, 0), 1), ("e", (-1, 0), -1)
    assert a2.bracket(x, y) == {("h", 0, 0): 1, C: 1}
    assert a2.bracket(("h", 0, 2), ("h", 1, -2)) == {C: -2}
    assert a2.bracket(("h", 0, 1), ("e", (0, 1), 2)) == {("e", (0, 1), 3): -1}


@pytest.mark.parametrize("label", ["A2", "A3", "C2"])
def test_jacobi_and_antisymmetry(label):
    alg = LoopAlgebra(chevalley_constants(label))
    assert verify_jacobi(alg, 2) == []
    assert verify_antisymmetry(alg, 2) == []


def test_adapted_cartan_basis():
    alg = LoopAlgebra(chevalley_constants("A2"), [[1, 0], [1, 2]])
    assert alg.cartan_form == ((2, 0), (0, 6))
    assert alg.root_values[(1, 0)] == (2, 0)
    assert verify_jacobi(alg, 1) == []
    with pytest.raises(ValueError):
        LoopAlgebra(chevalley_constants("A2"), [[1, 0], [2, 0]])


# -- straightening ------------------------------------------------------------------

def _letters(alg, bound):
    return [x for x in alg.basis(bound) if x not in (C, D)]


def test_straighten_example(a2):
    y, x = ("e", (-1, 0), 0), ("e", (1, 0), 0)
    # x y = y x + [x, y] and x sorts above y
    assert straighten((x, y), a2.bracket, a2.pbw_key) == {(y, x): 1, (("h", 0, 0),): 1}
    assert straighten((y, x), a2.bracket, a2.pbw_key) == {(y, x): 1}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 10 ** 6), min_size=2, max_size=4))
def test_straighten_properties(a2, picks):
    letters = _letters(a2, 1)
    word = tuple(letters[p % len(letters)] for p in picks)
    out = straighten(word, a2.bracket, a2.pbw_key)
    for mono in out:
        keys = [a2.pbw_key(z) for z in mono]
        assert keys == sorted(keys)
        wt = [sum(a2.weight(z)[0][i] for z in mono) for i in range(2)]
        assert wt == [sum(a2.weight(z)[0][i] for z in word) for i in range(2)]
        assert sum(a2.weight(z)[1] for z in mono) == sum(a2.weight(z)[1] for z in word)
    # idempotent
    assert straighten_sum(out, a2.bracket, a2.pbw_key) == out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_commutator_in_enveloping_algebra(a2, i, j):
    letters = _letters(a2, 1)
    a, b = letters[i % len(letters)], letters[j % len(letters)]
    key, br = a2.pbw_key, a2.bracket
    ab = uea_multiply({(a,): Fraction(1)}, {(b,): Fraction(1)}, br, key)
    ba = uea_multiply({(b,): Fraction(1)}, {(a,): Fraction(1)}, br, key)
    diff = dict(ab)
    for m, v in ba.items():
        diff[m] = diff.get(m, 0) - v
    diff = {m: v for m, v in diff.items() if v}
    expected = {(z,): v for z, v in br(a, b).items()}
    assert diff == expected
