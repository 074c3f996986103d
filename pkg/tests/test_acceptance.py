"""The ten acceptance criteria, each at its stated tolerance and time budget."""
import random
import time
from fractions import Fraction

from cobhamlab.algebraic import AlgebraicInterval
from cobhamlab.numeration import (ParryData, bertrand_system_from_parry,
                                  detect_linear_recurrence, digits_value, greedy_representation,
                                  greedy_words, is_greedy_word, omega_substitution, parry_automaton)
from cobhamlab.recognizers import APUnion, CobhamParams, cobham_experiment
from cobhamlab.returns import (check_derived_identity, derived_substitution,
                               detect_primitive_substitutive, linrec_survey, return_words)
from cobhamlab.spectra import (block_form_violations, condition_C_power, dependence_report,
                               frequency_vector, is_primitive, primitive_decomposition,
                               substitution_eigenvalue)
from cobhamlab.substitutions import fixed_point, incidence_matrix, projects_onto, validate
from cobhamlab.words import letter_frequency_estimate, max_power_index

from conftest import FIB, S, TM

SIGMA = {"a": "ab", "b": "c", "c": "cb"}


def test_criterion_1_omega_construction(report):
    t0 = time.perf_counter()
    a = omega_substitution(ParryData((1, 1)))
    b = omega_substitution(ParryData((2,), (1,)))
    shapes = (a.show(), b.show())
    ok_shape = shapes == ("1->12, 2->1", "1->112, 2->12")
    ok_props = all(validate(s) and is_primitive(incidence_matrix(s.morphism)) for s in (a, b))
    dt = time.perf_counter() - t0
    ok = report(1, ok_shape and ok_props and dt < 1, f"{shapes[0]} | {shapes[1]} | {dt:.3f}s")
    assert ok


def test_criterion_2_eigenvalue_exactness(report):
    t0 = time.perf_counter()
    eps = Fraction(1, 10**12)
    sigma = substitution_eigenvalue(S({"0": "010", "1": "01"}, "0"), eps)
    tau = substitution_eigenvalue(S({"0": "001", "1": "10"}, "0"), eps)
    phi2 = AlgebraicInterval.from_poly_string("x^2-3x+1", eps)
    equal = sigma.equals(tau) and sigma.equals(phi2) and tau.equals(phi2)
    narrow = sigma.width <= eps and tau.width <= eps
    dt = time.perf_counter() - t0
    ok = report(2, equal and narrow and dt < 1, f"both equal phi^2 ≈ {float(sigma):.12f} | {dt:.3f}s")
    assert ok


def test_criterion_3_multiplicative_dependence(report):
    phi = AlgebraicInterval.from_poly_string("x^2-x-1")
    phi2 = AlgebraicInterval.from_poly_string("x^2-3x+1")
    two, three, eight = (AlgebraicInterval.from_int(k) for k in (2, 3, 8))
    r1 = dependence_report(phi, phi2, 12)
    r2 = dependence_report(two, eight, 12)
    r3 = dependence_report(two, three, 12)
    ok = r1.exponents == (2, 1) and r2.exponents == (3, 1) and r3.exponents is None and r3.certified
    ok = report(3, ok, f"{r1.exponents} {r2.exponents} 2,3: {r3.status}")
    assert ok


def test_criterion_4_projection(report):
    sigma = S(SIGMA, "a")
    tau = S(FIB, "0")
    w = projects_onto(sigma, tau)
    shown = w.show(sigma, tau) if w else None
    ok = (shown == "a->0, b->1, c->0"
          and not is_primitive(incidence_matrix(sigma.morphism))
          and is_primitive(incidence_matrix(tau.morphism)))
    ok = report(4, ok, f"witness {shown}; sigma non-primitive, tau primitive")
    assert ok


def test_criterion_5_primitive_decomposition(report):
    sigma = S(SIGMA, "a")
    m = incidence_matrix(sigma.morphism)
    d = primitive_decomposition(m)
    parts = [{sigma.names[a] for a in c} for c in d.partition]
    principal = [parts[i] for i, f in enumerate(d.principal) if f]
    k, _ = condition_C_power(sigma)
    ok = (parts == [{"a"}, {"b", "c"}] and principal == [{"b", "c"}]
          and block_form_violations(m, d) == [] and k == 2)
    ok = report(5, ok, f"partition {[sorted(p) for p in parts]}, principal {[sorted(p) for p in principal]}, k={k}")
    assert ok


def test_criterion_6_return_words(report):
    fib = S(FIB, "0")
    x = fixed_point(fib)
    table = return_words(x, (0,))
    returns = ["".join(map(str, w)) for w in table.words]
    tv, t2 = derived_substitution(fib, (0,))
    identity = check_derived_identity(fib, tv, t2)
    det = detect_primitive_substitutive(x, max_prefixes=5)
    lin = linrec_survey(fib)
    ok = (returns == ["01", "0"] and tv.show() == "1->12, 2->1" and identity
          and det is not None and det.prefixes_examined <= 5 and lin.holds())
    detail = (f"R_0={returns} tau_0=({tv.show()}) identity={identity} "
              f"detected after {det.prefixes_examined if det else '-'} prefixes, K={float(lin.K):.3f}")
    ok = report(6, ok, detail)
    assert ok


def _criterion_7_system(p, prefix, coefficients):
    U = bertrand_system_from_parry(p)
    failures = []
    for n in range(10**5):
        w = greedy_representation(n, U)
        if digits_value(w, U) != n or not is_greedy_word(w, U):
            failures.append(f"round trip at {n}")
            break
    if U.values(len(prefix)) != prefix:
        failures.append("U prefix")
    rec = detect_linear_recurrence(U)
    if rec is None or rec.coefficients != coefficients:
        failures.append(f"recurrence {rec}")
    d = parry_automaton(p)
    for n in range(13):
        lu = set(greedy_words(U, n))
        if lu != set(d.words(n)) or len(lu) != d.count_words(n):
            failures.append(f"L(U) != L(alpha) at length {n}")
            break
    for n in range(11):
        for w in greedy_words(U, n):
            if not is_greedy_word(w + (0,), U):
                failures.append(f"zero suffix fails on {w}")
                break
        for w in greedy_words(U, n + 1):
            if w[-1] == 0 and not is_greedy_word(w[:-1], U):
                failures.append(f"zero suffix converse fails on {w}")
                break
    return failures


def test_criterion_7_numeration_round_trip(report):
    t0 = time.perf_counter()
    failures = (_criterion_7_system(ParryData((1, 1)), [1, 2, 3, 5, 8, 13], (1, 1))
                + _criterion_7_system(ParryData((2,), (1,)), [1, 3, 8, 21, 55], (3, -1)))
    dt = time.perf_counter() - t0
    ok = report(7, not failures and dt < 30, f"{'; '.join(failures) or 'all checks hold'} | {dt:.1f}s")
    assert ok


def test_criterion_8_frequencies(report):
    fib = S(FIB, "0")
    tol = Fraction(1, 10**6)
    iv = frequency_vector(fib, tol)
    emp = letter_frequency_estimate(fixed_point(fib), 10**4)
    narrow = all(hi - lo <= tol for lo, hi in iv)
    # distance from the empirical value to the interval
    dist = [max(lo - e, e - hi, 0) for (lo, hi), e in zip(iv, emp)]
    ok = narrow and all(d <= Fraction(1, 100) for d in dist)
    shown = ", ".join(f"[{float(lo):.7f}, {float(hi):.7f}] vs {float(e):.5f}" for (lo, hi), e in zip(iv, emp))
    ok = report(8, ok, shown)
    assert ok


def test_criterion_9_power_index(report):
    t0 = time.perf_counter()
    f = max_power_index(fixed_point(S(FIB, "0")), 20, 10**5)
    t = max_power_index(fixed_point(S(TM, "0")), 20, 10**5)
    dt = time.perf_counter() - t0
    ok = report(9, f == 3 and t == 2, f"Fibonacci {f}, Thue-Morse {t} | {dt:.2f}s")
    assert ok


def _random_ap_union(rng):
    progs = []
    for _ in range(rng.randint(1, 3)):
        m = rng.randint(1, 12)
        progs.append((m, rng.randrange(m)))
    include = {rng.randrange(60) for _ in range(rng.randint(0, 2))}
    exclude = {rng.randrange(60) for _ in range(rng.randint(0, 2))} - include
    return APUnion(tuple(progs), include, exclude)


def test_criterion_10_cobham_regression(report):
    rng = random.Random(20261016)
    base2, zeck = ParryData((2,)), ParryData((1, 1))
    t0 = time.perf_counter()
    bad = []
    for _ in range(50):
        E = _random_ap_union(rng)
        r = cobham_experiment(E, base2, zeck, CobhamParams())
        if r.dependence.exponents is not None:
            bad.append("bases reported dependent")
        if r.verdict != "consistent":
            bad.append(f"{E.to_json()}: {r.verdict}")
        elif r.periodicity is None or E.lcm % r.periodicity.period:
            bad.append(f"{E.to_json()}: period {r.periodicity}")
    dt = time.perf_counter() - t0
    ok = report(10, not bad and dt < 300, f"{50 - len(bad)}/50 consistent with period | lcm | {dt:.1f}s"
                + (f" | {bad[:3]}" if bad else ""))
    assert ok
