import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cobhamlab.substitutions import (InvalidSubstitution, Morphism, Substitution, apply,
                                     block_substitution, check_projection, fixed_point,
                                     incidence_matrix, projects_onto, rebase_under_morphism, validate)
from conftest import FIB, S

SIGMA = {"a": "ab", "b": "c", "c": "cb"}


def brute_projection(s, t):
    """All letter-to-letter maps φ with φσ = τφ and φ(start) = start, by enumeration."""
    out = []
    for phi in itertools.product(range(t.size), repeat=s.size):
        if phi[s.start] != t.start:
            continue
        if all(tuple(phi[x] for x in s.rules[c]) == t.rules[phi[c]] for c in range(s.size)):
            if set(phi) == set(range(t.size)):
                out.append(phi)
    return out


def test_apply_examples(fib):
    assert apply(fib.morphism, fib.word("010")) == fib.word("01001")
    assert apply(fib.morphism, ()) == ()
    s = S(SIGMA, "a")
    assert s.show_word(s(s.word("abc"))) == "abccb"
    with pytest.raises(ValueError):
        apply(fib.morphism, (5,))


def test_validate_examples(fib):
    assert validate(fib).ok
    r = validate(S({"1": "12", "2": "2"}, "1"))
    assert r.describe(("1", "2")) == ["letter is not growing (letter 2)"]
    r = validate(S({"1": "21", "2": "1"}, "1"))
    assert any("start letter" in d for d in r.describe())
    r = validate(S({"0": "00", "1": "10"}, "0"))
    assert any("not reachable" in d for d in r.describe(("0", "1")))
    with pytest.raises(InvalidSubstitution):
        fixed_point(S({"0": "10", "1": "0"}, "0"))


def test_fixed_point_examples(fib):
    assert fib.show_word(fixed_point(fib).prefix(8)) == "01001010"
    assert fixed_point(S({"1": "11"}, "1")).prefix(6) == (0,) * 6
    om = S({"1": "112", "2": "12"}, "1")
    assert om.show_word(fixed_point(om).prefix(8)) == "11211212"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=4), min_size=3, max_size=3))
def test_fixed_point_is_fixed(images):
    images[0] = [0] + images[0]
    s = Substitution(tuple(map(tuple, images)))
    if not validate(s):
        return
    w = fixed_point(s).prefix(200)
    assert s(w)[:200] == w


def test_incidence_matrix_examples(fib):
    assert incidence_matrix(S({"0": "010", "1": "01"}, "0").morphism).rows == ((2, 1), (1, 1))
    assert incidence_matrix(fib.morphism).rows == ((1, 1), (1, 0))
    ident = Morphism(((0,), (1,)), 2)
    assert incidence_matrix(ident).rows == ((1, 0), (0, 1))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=3, max_size=3))
def test_incidence_of_composition_is_product(f, g):
    m1, m2 = Morphism(tuple(map(tuple, f)), 3), Morphism(tuple(map(tuple, g)), 3)
    assert incidence_matrix(m1.compose(m2)) == incidence_matrix(m1) @ incidence_matrix(m2)


def test_rebase_example(fib):
    phi = Morphism(((0, 1), (2,)), 3, fib.names, ("a", "b", "c"))
    tau, chi = rebase_under_morphism(fib, phi)
    assert tau.size == 3
    idx = {n: i for i, n in enumerate(tau.names)}
    assert tau.rules[idx["(0,0)"]] == (idx["(0,0)"], idx["(0,1)"])
    assert tau.rules[idx["(0,1)"]] == (idx["(1,0)"],)
    assert tau.rules[idx["(1,0)"]] == (idx["(0,0)"], idx["(0,1)"])
    lhs = apply(chi, fixed_point(tau).prefix(12))
    rhs = apply(phi, fixed_point(fib).prefix(12))[:12]
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=4), min_size=2, max_size=2))
def test_rebase_commutes_on_prefixes(phi_images):
    fib = S(FIB, "0")
    phi = Morphism(tuple(map(tuple, phi_images)), 3)
    tau, chi = rebase_under_morphism(fib, phi)
    assert validate(tau)
    n = 60
    assert apply(chi, fixed_point(tau).prefix(n)) == apply(phi, fixed_point(fib).prefix(n))[:n]


def test_rebase_rejects_erasing(fib):
    with pytest.raises(ValueError):
        rebase_under_morphism(fib, Morphism(((0,), ()), 2))


def test_block_examples(fib):
    s2, rho = block_substitution(fib, 2)
    idx = {n: i for i, n in enumerate(s2.names)}
    assert set(idx) == {"(01)", "(10)", "(00)"}
    assert s2.rules[idx["(01)"]] == (idx["(01)"], idx["(10)"])
    assert s2.rules[idx["(10)"]] == (idx["(00)"],)
    # ρσ_n = σρ on letters
    for b in range(s2.size):
        assert apply(rho, s2.rules[b]) == fib(rho.rules[b])[:len(s2.rules[b])]
    s1, _ = block_substitution(fib, 1)
    assert s1.rules == fib.rules


def test_projection_examples(fib):
    s = S(SIGMA, "a")
    w = projects_onto(s, fib)
    assert w.show(s, fib) == "a->0, b->1, c->0"
    assert check_projection(s, fib, w)
    assert projects_onto(fib, fib).mapping == (0, 1)
    ren = S({"1": "12", "2": "1"}, "1")
    assert projects_onto(ren, S({"1": "11"}, "1")) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3), min_size=3, max_size=3))
def test_projection_matches_enumeration(images):
    images[0] = [0] + images[0]
    s = Substitution(tuple(map(tuple, images)))
    if not validate(s):
        return
    t = S(FIB, "0")
    found = projects_onto(s, t)
    brute = brute_projection(s, t)
    assert (found is None) == (not brute)
    if found:
        assert found.mapping in brute


def test_json_round_trip():
    s = S(SIGMA, "a")
    assert Substitution.from_json(s.to_json()) == s
    multi = Substitution.from_strings({"x1": ["x1", "x2"], "x2": ["x1"]}, "x1")
    assert Substitution.from_json(multi.to_json()) == multi
