import random

import pytest
from hypothesis import given, settings, strategies as st

from cobhamlab.returns import (DecompositionError, NotUniformlyRecurrent, check_derived_identity,
                               derived_sequence, derived_substitution, detect_primitive_substitutive,
                               linrec_survey, return_words)
from cobhamlab.spectra import is_primitive, multiplicatively_dependent, substitution_eigenvalue
from cobhamlab.substitutions import fixed_point, incidence_matrix, validate
from cobhamlab.words import LazySequence, occurrences
from conftest import FIB, TM, S

PRIMITIVE = [FIB, TM, {"0": "001", "1": "01"}, {"0": "0012", "1": "2", "2": "01"},
             {"0": "01", "1": "02", "2": "0"}]


def brute_returns(w, u):
    """Return words on u read off consecutive occurrences in w, in first-occurrence order."""
    occ = occurrences(u, w)
    out = []
    for i, j in zip(occ, occ[1:]):
        r = tuple(w[i:j])
        if r not in out:
            out.append(r)
    return out


def test_fibonacci_tables(fib, fib_word):
    t = return_words(fib_word, fib.word("0"))
    assert [fib.show_word(w) for w in t.words] == ["01", "0"]
    t = return_words(fib_word, fib.word("01"))
    assert [fib.show_word(w) for w in t.words] == ["010", "01"]
    t = return_words(LazySequence.ultimately_periodic((), (0, 1)), (0,))
    assert t.words == ((0, 1),)


@pytest.mark.parametrize("rules", PRIMITIVE)
@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_tables_match_brute_force(rules, n):
    x = fixed_point(S(rules, "0"))
    u = x.prefix(n)
    t = return_words(x, u)
    w = x.prefix(200_000)
    assert list(t.words) == brute_returns(w, u)
    for r in t.words:
        ru = r + u
        assert ru[:len(u)] == u
        assert len(occurrences(u, ru)) == 2


def test_derived_sequence_examples(fib, fib_word):
    d = derived_sequence(fib_word, fib.word("0"))
    assert "".join(str(k + 1) for k in d.sequence.prefix(10)) == "1211212112"
    per = derived_sequence(LazySequence.ultimately_periodic((), (0, 1)), (0,))
    assert per.sequence.prefix(20) == (0,) * 20


@pytest.mark.parametrize("rules", PRIMITIVE)
@pytest.mark.parametrize("n", [1, 2, 4])
def test_derived_sequence_reconstructs(rules, n):
    x = fixed_point(S(rules, "0"))
    d = derived_sequence(x, x.prefix(n))
    rebuilt = d.table.theta(d.sequence.prefix(1000))
    assert len(rebuilt) >= 1000
    assert rebuilt == x.prefix(len(rebuilt))


def test_derived_sequence_needs_a_prefix(fib_word):
    with pytest.raises(ValueError):
        derived_sequence(fib_word, (1,))


def test_derived_substitution_examples(fib):
    tv, table = derived_substitution(fib, fib.word("0"))
    assert tv.show() == "1->12, 2->1"
    assert check_derived_identity(fib, tv, table)
    tv, table = derived_substitution(fib, fib.word("01"))
    assert tv.show() == "1->12, 2->1"
    assert [fib.show_word(w) for w in table.words] == ["010", "01"]


@pytest.mark.parametrize("rules", PRIMITIVE)
@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_derived_substitution_properties(rules, n):
    s = S(rules, "0")
    tv, table = derived_substitution(s, fixed_point(s).prefix(n))
    assert check_derived_identity(s, tv, table)
    assert validate(tv)
    assert is_primitive(incidence_matrix(tv.morphism))
    a, b = substitution_eigenvalue(s), substitution_eigenvalue(tv)
    assert a.equals(b)
    assert multiplicatively_dependent(a, b) == (1, 1)
    # its fixed point is the derived sequence
    d = derived_sequence(fixed_point(s), fixed_point(s).prefix(n))
    assert fixed_point(tv).prefix(300) == d.sequence.prefix(300)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=30))
def test_theta_decode_encode(letters):
    s = S({"0": "0012", "1": "2", "2": "01"}, "0")
    x = fixed_point(s)
    t = return_words(x, x.prefix(2))
    letters = [k % t.card for k in letters]
    assert t.decompose(t.theta(letters)) == tuple(letters)


def test_decompose_rejects_unknown_words(fib, fib_word):
    t = return_words(fib_word, fib.word("0"))
    with pytest.raises(DecompositionError):
        t.decompose((0, 1, 1))
    with pytest.raises(DecompositionError):
        t.decompose((1, 0))


def test_detect_fibonacci(fib, fib_word):
    r = detect_primitive_substitutive(fib_word, max_prefixes=5)
    assert r is not None and r.prefixes_examined <= 5
    sigma = r.substitution
    assert sorted(len(img) for img in sigma.rules) == [1, 2]
    assert substitution_eigenvalue(sigma).equals(substitution_eigenvalue(fib))


def test_detect_thue_morse(tm_word):
    r = detect_primitive_substitutive(tm_word)
    assert r is not None
    t0, t1 = r.tables
    for k, img in enumerate(r.substitution.rules):
        assert t0.theta(img) == t1.words[k]


def test_detect_random_is_inconclusive():
    rng = random.Random(2024)
    x = LazySequence((rng.randrange(2) for _ in iter(int, 1)), 2)
    assert detect_primitive_substitutive(x, max_prefixes=4) is None


def test_non_recurrent_input_is_reported():
    # 0 1 00 1 000 1 ...: return words on 1 keep growing
    def gen():
        k = 1
        while True:
            yield from [0] * k
            yield 1
            k += 1
    with pytest.raises(NotUniformlyRecurrent):
        return_words(LazySequence(gen(), 2), (1,), cap=1 << 14)


def test_linrec_fibonacci(fib):
    r = linrec_survey(fib, 8)
    assert r.holds()
    assert all(card <= 3 for *_, card in r.samples)
    assert 1 < float(r.K) < 4


def test_linrec_thue_morse(tm):
    r = linrec_survey(tm, 8)
    assert r.holds()
    assert all(card <= 4 for *_, card in r.samples)
