"""Digit automata for integer sets, characteristic sequences and the Cobham experiment harness."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence, Union

from .algebraic import AlgebraicInterval
from .automata import (AutomatonError, DigitDFA, StateBlowup, dfa_boolean, empty, from_partial,
                       reverse_determinize, universal)
from .numeration import (NumerationSystem, ParryData, beta_number, bertrand_system_from_parry,
                         greedy_representation)
from .spectra import DependenceReport, dependence_report
from .words import LazySequence, PeriodicityReport, detect_ultimate_periodicity, max_power_index

__all__ = [
    "DigitDFA", "AutomatonError", "StateBlowup", "dfa_boolean", "reverse_determinize",
    "run_membership", "ap_recognizer", "msd_ap_recognizer", "finite_set_recognizer",
    "APUnion", "FiniteSet", "DFASet", "PowersSet", "characteristic_sequence",
    "syndeticity_gaps", "SyndeticityReport", "cobham_experiment", "CobhamReport", "CobhamParams",
]

SELF_TEST_LIMIT = 5000


def run_membership(d: DigitDFA, n: int, U: NumerationSystem) -> bool:
    if d.k != U.digits:
        raise AutomatonError(f"automaton reads {d.k} digits but the system uses {U.digits}")
    w = greedy_representation(n, U)
    return d.accepts(w[::-1] if d.order == "lsd" else w)


def _weight_cycle(U: NumerationSystem, modulus: int) -> tuple[list[int], int]:
    """Weights U_i mod m up to the start of their repetition, and the restart index.

    The residue vector (U_i..U_{i+k-1}) mod m determines everything after it
    through the recurrence, so the first repeated vector closes the cycle.
    """
    rec = U.recurrence
    if rec is None:
        raise AutomatonError("no linear recurrence detected for this system; phase table unavailable")
    k = rec.order
    seen: dict[tuple[int, ...], int] = {}
    i = 0
    while True:
        vec = tuple(U.value(i + j) % modulus for j in range(k))
        if vec in seen:
            start = seen[vec]
            return [U.value(t) % modulus for t in range(i)], start
        seen[vec] = i
        i += 1
        if i > 10 ** 6:
            raise AutomatonError("residue cycle too long")


def ap_recognizer(modulus: int, residue: int, U: NumerationSystem, self_test: bool = True) -> DigitDFA:
    """LSD automaton for {n : n ≡ residue mod modulus} on states (phase, partial sum)."""
    if modulus < 1 or not 0 <= residue < modulus:
        raise ValueError("need modulus >= 1 and 0 <= residue < modulus")
    if modulus == 1:
        return universal(U.digits, "lsd")
    weights, restart = _weight_cycle(U, modulus)
    L = len(weights)

    def sid(t, s):
        return t * modulus + s

    rows = []
    for t in range(L):
        nt = t + 1 if t + 1 < L else restart
        for s in range(modulus):
            rows.append([sid(nt, (s + c * weights[t]) % modulus) for c in range(U.digits)])
    acc = [sid(t, residue) for t in range(L)]
    d = DigitDFA(U.digits, rows, 0, acc, "lsd").minimize()
    if self_test:
        bad = next((n for n in range(SELF_TEST_LIMIT + 1)
                    if run_membership(d, n, U) != (n % modulus == residue)), None)
        if bad is not None:
            raise AssertionError(f"AP recognizer disagrees with arithmetic at n = {bad}")
    return d


def msd_ap_recognizer(modulus: int, residue: int, U: NumerationSystem) -> DigitDFA:
    """MSD automaton for the padded representations 0^n ρ(x) with x in the progression.

    Intersects with L(U) when the system carries a language automaton.
    """
    d = reverse_determinize(ap_recognizer(modulus, residue, U))
    lang = U.language
    return dfa_boolean("intersection", d, lang) if lang is not None else d


def finite_set_recognizer(values: Sequence[int], U: NumerationSystem) -> DigitDFA:
    """Trie of MSD representations with a 0-loop on the start state.

    The empty word is accepted exactly when 0 is in the set.
    """
    k = U.digits
    edges = [(0, 0, 0)]
    n_states = 1
    accepting = set()
    children: dict[tuple[int, int], int] = {}
    for x in sorted(set(values)):
        if x < 0:
            raise ValueError("values must be natural numbers")
        if x == 0:
            accepting.add(0)
            continue
        q = 0
        for c in greedy_representation(x, U):
            if (q, c) not in children:
                children[(q, c)] = n_states
                edges.append((q, c, n_states))
                n_states += 1
            q = children[(q, c)]
        accepting.add(q)
    return from_partial(k, edges, n_states, 0, accepting).minimize()


# -- integer sets ----------------------------------------------------------------------

@dataclass(frozen=True)
class APUnion:
    """Union of progressions (modulus, residue), plus ``include`` and minus ``exclude``."""

    progressions: tuple[tuple[int, int], ...]
    include: frozenset = frozenset()
    exclude: frozenset = frozenset()
    kind = "ap"

    def __post_init__(self):
        object.__setattr__(self, "progressions", tuple((int(m), int(r)) for m, r in self.progressions))
        object.__setattr__(self, "include", frozenset(self.include))
        object.__setattr__(self, "exclude", frozenset(self.exclude))
        for m, r in self.progressions:
            if m < 1 or not 0 <= r < m:
                raise ValueError(f"bad progression ({m}, {r})")

    def __contains__(self, n: int) -> bool:
        if n in self.exclude:
            return False
        return n in self.include or any(n % m == r for m, r in self.progressions)

    @property
    def lcm(self) -> int:
        return reduce(math.lcm, (m for m, _ in self.progressions), 1)

    def to_json(self) -> dict:
        return {"kind": "ap", "progressions": [list(p) for p in self.progressions],
                "include": sorted(self.include), "exclude": sorted(self.exclude)}


@dataclass(frozen=True)
class FiniteSet:
    values: frozenset
    kind = "finite"

    def __post_init__(self):
        object.__setattr__(self, "values", frozenset(self.values))

    def __contains__(self, n: int) -> bool:
        return n in self.values

    def to_json(self) -> dict:
        return {"kind": "finite", "values": sorted(self.values)}


@dataclass(frozen=True)
class DFASet:
    dfa: DigitDFA
    system: NumerationSystem = field(compare=False)
    kind = "dfa"

    def __contains__(self, n: int) -> bool:
        return run_membership(self.dfa, n, self.system)

    def to_json(self) -> dict:
        return {"kind": "dfa", "dfa": self.dfa.to_json(), "system": self.system.to_json()}


@dataclass(frozen=True)
class PowersSet:
    base: int
    kind = "powers"

    def __contains__(self, n: int) -> bool:
        if n < 1:
            return False
        while n % self.base == 0:
            n //= self.base
        return n == 1

    def to_json(self) -> dict:
        return {"kind": "powers", "base": self.base}


IntegerSetSpec = Union[APUnion, FiniteSet, DFASet, PowersSet]


def characteristic_sequence(E: IntegerSetSpec, U: Optional[NumerationSystem] = None) -> LazySequence:
    if isinstance(E, DFASet) and U is not None and U is not E.system:
        E = DFASet(E.dfa, U)
    return LazySequence.from_function(lambda n: int(n in E), 2, name=f"characteristic sequence of {E.kind} set")


@dataclass(frozen=True)
class SyndeticityReport:
    max_gap: Optional[int]
    unbounded_suspicion: bool
    indeterminate: bool = False
    window: int = 0

    def to_json(self) -> dict:
        return {"max_gap": self.max_gap, "unbounded_suspicion": self.unbounded_suspicion,
                "indeterminate": self.indeterminate, "window": self.window}


def _max_gap(x: Sequence[int]) -> Optional[int]:
    members = [i for i, b in enumerate(x) if b]
    if len(members) < 2:
        return None
    return max([members[0]] + [b - a for a, b in zip(members, members[1:])])


def syndeticity_gaps(E: Union[IntegerSetSpec, LazySequence], window: int) -> SyndeticityReport:
    """Largest gap between members below ``window``; suspicious if it grows from window/2 to window."""
    if window < 2:
        raise ValueError("window must be at least 2")
    x = E.prefix(window) if isinstance(E, LazySequence) else characteristic_sequence(E).prefix(window)
    full = _max_gap(x)
    if full is None:
        return SyndeticityReport(None, False, True, window)
    half = _max_gap(x[:window // 2])
    return SyndeticityReport(full, half is None or full > half, False, window)


# -- Cobham experiment ---------------------------------------------------------------

@dataclass(frozen=True)
class CobhamParams:
    window: int = 10_000
    max_exp: int = 12
    power_max_len: int = 20
    check_limit: int = 2000
    dfa_u: Optional[DigitDFA] = None
    dfa_v: Optional[DigitDFA] = None


@dataclass
class Evidence:
    status: str  # "established", "supplied", "not established"
    states: Optional[int] = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status in ("established", "supplied")

    def to_json(self) -> dict:
        return {"status": self.status, "states": self.states, "detail": self.detail}


@dataclass
class CobhamReport:
    set_spec: dict
    alpha: AlgebraicInterval
    beta: AlgebraicInterval
    dependence: DependenceReport
    recognizability: dict
    periodicity: Optional[PeriodicityReport]
    power_index: int
    syndeticity: SyndeticityReport
    verdict: str
    reason: str
    bundle: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "set": self.set_spec,
            "alpha": {"polynomial": _poly_str(self.alpha), "approx": float(self.alpha)},
            "beta": {"polynomial": _poly_str(self.beta), "approx": float(self.beta)},
            "dependence": self.dependence.to_json(),
            "recognizability": {k: v.to_json() for k, v in self.recognizability.items()},
            "periodicity": self.periodicity.to_json() if self.periodicity else None,
            "power_index": self.power_index,
            "syndeticity": self.syndeticity.to_json(),
            "verdict": self.verdict,
            "reason": self.reason,
        }
        if self.bundle is not None:
            out["reproduction"] = self.bundle
        return out

    def text(self) -> str:
        per = (f"preperiod {self.periodicity.preperiod}, period {self.periodicity.period} (within window)"
               if self.periodicity else "none detected")
        rec = ", ".join(f"{k}: {v.status}" for k, v in self.recognizability.items())
        lines = [
            f"alpha ≈ {float(self.alpha):.12g}   beta ≈ {float(self.beta):.12g}",
            f"dependence: {self.dependence.status}"
            + (f" {self.dependence.exponents}" if self.dependence.exponents else ""),
            f"recognizability: {rec}",
            f"periodicity: {per}",
            f"power index: {self.power_index}",
            f"max gap: {self.syndeticity.max_gap}" + ("  (growing)" if self.syndeticity.unbounded_suspicion else ""),
            f"verdict: {self.verdict} ({self.reason})",
        ]
        return "\n".join(lines)


def _poly_str(a: AlgebraicInterval) -> str:
    from .polys import to_str
    return to_str(a.poly)


def set_recognizer(E: IntegerSetSpec, U: NumerationSystem) -> Optional[DigitDFA]:
    """MSD recognizer for E in U when one can be built from the set description alone."""
    if isinstance(E, FiniteSet):
        return finite_set_recognizer(sorted(E.values), U)
    if isinstance(E, APUnion):
        d = empty(U.digits)
        for m, r in E.progressions:
            d = dfa_boolean("union", d, msd_ap_recognizer(m, r, U))
        if E.include:
            d = dfa_boolean("union", d, finite_set_recognizer(sorted(E.include), U))
        if E.exclude:
            d = dfa_boolean("difference", d, finite_set_recognizer(sorted(E.exclude), U))
        return d
    if isinstance(E, DFASet) and E.system.values(24) == U.values(24):
        return E.dfa
    return None


def _evidence(E: IntegerSetSpec, U: NumerationSystem, supplied: Optional[DigitDFA],
              check_limit: int) -> Evidence:
    if supplied is not None:
        try:
            bad = next((n for n in range(check_limit) if run_membership(supplied, n, U) != (n in E)), None)
        except AutomatonError as e:
            return Evidence("not established", supplied.size, f"supplied automaton unusable: {e}")
        if bad is not None:
            return Evidence("not established", supplied.size, f"supplied automaton disagrees at n = {bad}")
        return Evidence("supplied", supplied.size, f"agrees with membership for n < {check_limit}")
    try:
        d = set_recognizer(E, U)
    except (AutomatonError, StateBlowup) as e:
        return Evidence("not established", None, str(e))
    if d is None:
        return Evidence("not established", None, "no recognizer available for this set in this system")
    bad = next((n for n in range(check_limit) if run_membership(d, n, U) != (n in E)), None)
    if bad is not None:
        raise AssertionError(f"constructed recognizer disagrees with membership at n = {bad}")
    return Evidence("established", d.size, f"checked for n < {check_limit}")


def cobham_experiment(E: IntegerSetSpec, pU: ParryData, pV: ParryData,
                      params: CobhamParams = CobhamParams()) -> CobhamReport:
    """Test the theorem's prediction on E for the Bertrand systems of pU and pV."""
    bu, bv = beta_number(pU), beta_number(pV)
    U, V = bertrand_system_from_parry(pU), bertrand_system_from_parry(pV)
    dep = dependence_report(bu.alpha, bv.alpha, params.max_exp)
    rec = {"U": _evidence(E, U, params.dfa_u, params.check_limit),
           "V": _evidence(E, V, params.dfa_v, params.check_limit)}
    x = characteristic_sequence(E)
    per = detect_ultimate_periodicity(x, params.window)
    power = max_power_index(x, params.power_max_len, params.window)
    synd = syndeticity_gaps(x, params.window)
    bundle = None
    if dep.exponents:
        verdict, reason = "consistent", "bases are multiplicatively dependent; hypothesis void"
    elif not (rec["U"].holds and rec["V"].holds):
        verdict, reason = "inconclusive", "recognizability not established in both systems"
    elif per is not None:
        verdict, reason = "consistent", "recognizable in both systems and ultimately periodic"
    else:
        verdict, reason = "inconsistent", "recognizable in both systems but no period found; review"
        bundle = {"set": E.to_json(), "u": pU.to_json(), "v": pV.to_json(),
                  "params": {"window": params.window, "max_exp": params.max_exp,
                             "power_max_len": params.power_max_len, "check_limit": params.check_limit},
                  "prefix": "".join(map(str, x.prefix(min(params.window, 400))))}
    return CobhamReport(E.to_json(), bu.alpha, bv.alpha, dep, rec, per, power, synd, verdict, reason, bundle)
