import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from cobhamlab import polys
from cobhamlab.numeration import (InadmissibleParryData, NumerationSystem, ParryData, beta_expansion,
                                  beta_number, bertrand_system_from_parry, detect_linear_recurrence,
                                  digits_value, greedy_representation, greedy_words, is_greedy_word,
                                  omega_substitution, parry_automaton)
from cobhamlab.spectra import is_primitive, substitution_eigenvalue
from cobhamlab.substitutions import incidence_matrix, validate

ZECK = NumerationSystem.from_recurrence((1, 1), (1, 2))
BASE2 = NumerationSystem.base(2)
PARRY_CASES = [ParryData((1, 1)), ParryData((2,), (1,)), ParryData((2,)), ParryData((3,)),
               ParryData((1, 0, 1)), ParryData((2, 1, 1)), ParryData((1, 1, 0, 1))]


def word(text):
    return tuple(int(c) for c in text)


def text(w):
    return "".join(map(str, w))


def test_greedy_examples():
    assert text(greedy_representation(11, ZECK)) == "10100"
    assert text(greedy_representation(6, BASE2)) == "110"
    assert text(greedy_representation(0, ZECK)) == "0"
    with pytest.raises(ValueError):
        greedy_representation(-1, ZECK)


def test_value_examples():
    assert digits_value(word("10100"), ZECK) == 11
    assert digits_value(word("00010100"), ZECK) == 11
    assert digits_value((), ZECK) == 0


def test_greedy_word_examples():
    assert is_greedy_word(word("10100"), ZECK)
    r = is_greedy_word(word("011"), ZECK)
    assert not r and "value 3" in r.reason
    assert is_greedy_word(word("0000"), ZECK)
    r = is_greedy_word(word("102"), ZECK)
    assert not r and "outside" in r.reason


def test_zeckendorf_theorem_oracle():
    # Zeckendorf: every n >= 1 has a unique representation without 11 and with leading digit 1
    for n in range(1, 3000):
        w = greedy_representation(n, ZECK)
        assert w[0] == 1 and "11" not in text(w)
        assert digits_value(w, ZECK) == n


@pytest.mark.parametrize("U", [ZECK, BASE2, bertrand_system_from_parry(ParryData((2,), (1,)))])
def test_greedy_is_the_unique_admissible_word(U):
    """Enumerate all digit words up to length 7; admissible ones give each value exactly once."""
    seen = {}
    for n in range(1, 8):
        for w in itertools.product(range(U.digits), repeat=n):
            if w[0] == 0 or not is_greedy_word(w, U):
                continue
            v = digits_value(w, U)
            assert v not in seen
            seen[v] = w
    for v, w in seen.items():
        assert greedy_representation(v, U) == w
    assert set(seen) == set(range(1, U.value(7)))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**5 - 1), st.sampled_from(PARRY_CASES[:4]))
def test_round_trip(n, p):
    U = bertrand_system_from_parry(p)
    w = greedy_representation(n, U)
    assert digits_value(w, U) == n
    assert is_greedy_word(w, U)


def test_recurrence_examples():
    r = detect_linear_recurrence(ZECK)
    assert r.coefficients == (1, 1) and polys.to_str(r.polynomial) == "x^2 - x - 1"
    r = detect_linear_recurrence(BASE2)
    assert r.coefficients == (2,) and polys.to_str(r.polynomial) == "x - 2"
    r = detect_linear_recurrence(bertrand_system_from_parry(ParryData((2,), (1,))))
    assert r.coefficients == (3, -1) and polys.to_str(r.polynomial) == "x^2 - 3x + 1"
    with pytest.raises(ValueError):
        detect_linear_recurrence(ZECK, max_order=10, sample=20)


def test_no_recurrence_found():
    squares = NumerationSystem((n * n for n in itertools.count(1)), digits=4)
    assert detect_linear_recurrence(squares, max_order=2, sample=20) is None


def test_beta_expansion_examples():
    phi = beta_number(ParryData((1, 1)))
    assert beta_expansion(1, phi, 6) == [1, 1, 0, 0, 0, 0]
    phi2 = beta_number(ParryData((2,), (1,)))
    assert beta_expansion(1, phi2, 6) == [2, 1, 1, 1, 1, 1]
    assert beta_expansion(0, phi2, 4) == [0, 0, 0, 0]
    # α - 2 lies in [0, 1) for α = (3 + √5)/2
    assert beta_expansion((-2, 1), phi2, 4) == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        beta_expansion(2, phi2, 3)


def test_parry_polynomials():
    assert ParryData((1, 1)).polynomial() == (-1, -1, 1)
    assert ParryData((2,), (1,)).polynomial() == (1, -3, 1)
    assert ParryData((3,)).polynomial() == (-3, 1)


def test_parry_automaton_examples():
    z = parry_automaton(ParryData((1, 1)))
    assert z.k == 2 and len(z.accepting) == 2
    assert [z.count_words(n) for n in (1, 2, 3)] == [2, 3, 5]
    assert not z.accepts(word("0110")) and z.accepts(word("10101"))
    b = parry_automaton(ParryData((2,)))
    assert b.k == 2 and b.size == 1
    p = parry_automaton(ParryData((2,), (1,)))
    assert p.k == 3 and p.count_words(2) == 8 and not p.accepts(word("22"))


def test_bertrand_values():
    assert bertrand_system_from_parry(ParryData((1, 1))).values(6) == [1, 2, 3, 5, 8, 13]
    assert bertrand_system_from_parry(ParryData((2,))).values(4) == [1, 2, 4, 8]
    assert bertrand_system_from_parry(ParryData((2,), (1,))).values(4) == [1, 3, 8, 21]


def test_omega_examples():
    assert omega_substitution(ParryData((1, 1))).show() == "1->12, 2->1"
    assert omega_substitution(ParryData((2,), (1,))).show() == "1->112, 2->12"
    assert omega_substitution(ParryData((3,))).show() == "1->111"


@pytest.mark.parametrize("p", PARRY_CASES)
def test_parry_properties(p):
    b = beta_number(p)
    U = bertrand_system_from_parry(p)
    d = parry_automaton(p)
    # L(U) = L(α): exhaustive over all digit words
    for n in range(8):
        for w in itertools.product(range(d.k), repeat=n):
            assert bool(is_greedy_word(w, U)) == d.accepts(w)
    # zero-suffix property
    for n in range(7):
        for w in greedy_words(U, n):
            assert is_greedy_word(w + (0,), U)
    # ω_α has dominant eigenvalue α
    om = omega_substitution(p)
    assert validate(om) and is_primitive(incidence_matrix(om.morphism))
    assert substitution_eigenvalue(om).equals(b.alpha)
    # the detected recurrence has α as a root
    rec = detect_linear_recurrence(U, max_order=6, sample=40)
    assert rec is not None and b.alpha.contains_root_of(rec.polynomial)
    # the automaton is leading-zero invariant
    for n in range(5):
        for w in itertools.product(range(d.k), repeat=n):
            assert d.accepts(w) == d.accepts((0,) + w)


@pytest.mark.parametrize("pre,per", [((1,), (1,)), ((2,), (1, 1)), ((1, 1), (1, 1)), ((1, 2), ()), ((1, 0, 2), ())])
def test_inadmissible_data_rejected(pre, per):
    with pytest.raises(InadmissibleParryData):
        beta_number(ParryData(pre, per))


@pytest.mark.parametrize("pre,per", [((0, 1), ()), ((1, 0), ()), ((2,), (0, 0)), ((), (1,))])
def test_malformed_data_rejected(pre, per):
    with pytest.raises(InadmissibleParryData):
        ParryData(pre, per)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.lists(st.integers(0, 3), max_size=3))
def test_random_parry_data(pre, per):
    assume(pre[0] >= 1 and (per and any(per) or not per and pre[-1] > 0))
    p = ParryData(tuple(pre), tuple(per))
    try:
        b = beta_number(p)
    except InadmissibleParryData:
        return
    assert beta_expansion(1, b, len(pre) + len(per)) == list(p.digits)
    U = bertrand_system_from_parry(p)
    d = parry_automaton(p)
    for n in range(6):
        assert sorted(greedy_words(U, n)) == sorted(d.words(n))
    assert substitution_eigenvalue(omega_substitution(p)).equals(b.alpha)
