"""Externality payments for the prefix-search mechanisms, a two-point
truthfulness probe, and the standard counterexample profiles showing that the
unpaid greedy algorithms can be gamed.

Profiles here are explicit tables (agent -> prefix -> value) so that
misreports can be arbitrary, not just structure-shaped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence

from .core import (
    Value,
    ValuationOracle,
    ordered_subsequences,
    prefix_of,
)
from .osa import ArborescenceInstance, greedy_osa, osa_oracle
from .osm import MatchingInstance, greedy_osm, osm_oracle
from .seqopt import det, det_plus, max_welfare_ordering, rand


@dataclass(frozen=True)
class MechanismOutcome:
    sequence: tuple
    payments: tuple  # per-agent charges, non-negative for the schemes here


class ValuationProfile:
    """Explicit valuation tables, one entry per (agent, prefix) pair."""

    def __init__(self, tables: Sequence[Mapping]):
        self.n = len(tables)
        self.tables = tuple(dict(t) for t in tables)
        for i, table in enumerate(self.tables):
            others = [j for j in range(self.n) if j != i]
            expected = set(ordered_subsequences(others))
            if set(table) != expected:
                raise ValueError(f"table for agent {i} must cover every prefix")
            for v in table.values():
                if not isinstance(v, Fraction) or v < 0:
                    raise ValueError("table values must be non-negative rationals")

    @classmethod
    def from_oracle(cls, oracle: ValuationOracle) -> "ValuationProfile":
        tables = []
        for i in range(oracle.n):
            others = [j for j in range(oracle.n) if j != i]
            tables.append({s: oracle.value(i, s) for s in ordered_subsequences(others)})
        return cls(tables)

    def value(self, agent: int, prefix: tuple) -> Value:
        return self.tables[agent][tuple(prefix)]

    def oracle(self, monotone_claimed: bool = False) -> ValuationOracle:
        tables = self.tables
        return ValuationOracle(self.n, lambda i, s: tables[i][s], monotone_claimed)

    def with_table(self, agent: int, table: Mapping) -> "ValuationProfile":
        replaced = list(self.tables)
        replaced[agent] = dict(table)
        return ValuationProfile(replaced)

    def zeroed(self, agent: int) -> "ValuationProfile":
        zero = Fraction(0)
        return self.with_table(agent, {s: zero for s in self.tables[agent]})


def _fill_ascending(prefix: tuple, n: int) -> tuple:
    chosen = set(prefix)
    return prefix + tuple(i for i in range(n) if i not in chosen)


def _subset_sequence(profile: ValuationProfile, subset) -> tuple:
    """The sequence the prefix search would output for this drawn subset."""
    order, _ = max_welfare_ordering(profile.value, subset)
    return _fill_ascending(order, profile.n)


def _vcg_rand_outcome(profile: ValuationProfile, subset,
                      sequence: Optional[tuple] = None) -> MechanismOutcome:
    """Payments for one drawn subset: what the others lose, under the same
    draw, because agent i reported a non-zero valuation."""
    subset = frozenset(subset)
    if sequence is None:
        sequence = _subset_sequence(profile, subset)
    payments = [Fraction(0)] * profile.n
    for i in subset:
        seq_zero = _subset_sequence(profile.zeroed(i), subset)
        term_zero = sum((profile.value(k, prefix_of(seq_zero, k))
                         for k in subset if k != i), Fraction(0))
        term_real = sum((profile.value(k, prefix_of(sequence, k))
                         for k in subset if k != i), Fraction(0))
        payments[i] = term_zero - term_real
    return MechanismOutcome(sequence, tuple(payments))


def vcg_rand(profile: ValuationProfile, c: int, seed: int) -> MechanismOutcome:
    """One seeded run of the random-subset search plus its payments.

    Agents outside the drawn subset pay nothing; the draw itself ignores the
    reports, so both terms of each payment share the same drawn subset.
    """
    sequence = rand(profile.oracle(), c, seed)
    return _vcg_rand_outcome(profile, frozenset(sequence[:c]), sequence)


def vcg_det_plus(profile: ValuationProfile, c: int) -> MechanismOutcome:
    """Full-welfare prefix search plus externality payments over all agents."""
    sequence = det_plus(profile.oracle(), c)
    payments = []
    for i in range(profile.n):
        seq_zero = det_plus(profile.zeroed(i).oracle(), c)
        term_zero = sum((profile.value(k, prefix_of(seq_zero, k))
                         for k in range(profile.n) if k != i), Fraction(0))
        term_real = sum((profile.value(k, prefix_of(sequence, k))
                         for k in range(profile.n) if k != i), Fraction(0))
        payments.append(term_zero - term_real)
    return MechanismOutcome(sequence, tuple(payments))


def cycle_mon_violation(run: Callable[[ValuationOracle], tuple],
                        profile: ValuationProfile, agent: int,
                        alt_table: Mapping) -> bool:
    """Two-point necessary condition for truthful implementability.

    Runs the algorithm on the profile and on the profile with `agent`'s table
    swapped for `alt_table`; True means the pair certifies that no payment
    scheme can make the algorithm truthful.
    """
    alt_profile = profile.with_table(agent, alt_table)
    pre_true = prefix_of(run(profile.oracle()), agent)
    pre_alt = prefix_of(run(alt_profile.oracle()), agent)
    true_tab = profile.tables[agent]
    alt_tab = alt_profile.tables[agent]
    lhs = true_tab[pre_true] + alt_tab[pre_alt]
    rhs = true_tab[pre_alt] + alt_tab[pre_true]
    return lhs < rhs


# --- mechanism wrappers with exact outcome distributions ----------------------

@dataclass(frozen=True)
class VcgRandMechanism:
    """Random-subset search with payments, as an exact distribution over all
    C(n,c) equally likely draws."""

    c: int

    def distribution(self, profile: ValuationProfile):
        subsets = list(combinations(range(profile.n), self.c))
        p = Fraction(1, len(subsets))
        return [(p, _vcg_rand_outcome(profile, frozenset(s))) for s in subsets]


@dataclass(frozen=True)
class VcgDetPlusMechanism:
    c: int

    def distribution(self, profile: ValuationProfile):
        return [(Fraction(1), vcg_det_plus(profile, self.c))]


@dataclass(frozen=True)
class BitMechanism:
    """Fair coin between the ascending and descending sequences; no queries,
    no payments, nothing for a misreport to influence."""

    def distribution(self, profile: ValuationProfile):
        n = profile.n
        zero = (Fraction(0),) * n
        half = Fraction(1, 2)
        return [(half, MechanismOutcome(tuple(range(n)), zero)),
                (half, MechanismOutcome(tuple(reversed(range(n))), zero))]


class UnpaidAlgorithm:
    """A payment-free wrapper around any sequence algorithm."""

    def __init__(self, run: Callable[[ValuationOracle], tuple],
                 monotone_claimed: bool = False):
        self.run = run
        self.monotone_claimed = monotone_claimed

    def distribution(self, profile: ValuationProfile):
        seq = self.run(profile.oracle(self.monotone_claimed))
        return [(Fraction(1), MechanismOutcome(seq, (Fraction(0),) * profile.n))]


@dataclass(frozen=True)
class SpotcheckEntry:
    agent: int
    misreport_index: int
    truthful_utility: Value
    misreport_utility: Value

    @property
    def violated(self) -> bool:
        return self.misreport_utility > self.truthful_utility


@dataclass(frozen=True)
class SpotcheckReport:
    entries: tuple

    @property
    def violations(self) -> tuple:
        return tuple(e for e in self.entries if e.violated)

    @property
    def ok(self) -> bool:
        return not self.violations


def _expected_utility(mechanism, reported: ValuationProfile, agent: int,
                      true_table: Mapping) -> Value:
    total = Fraction(0)
    for p, outcome in mechanism.distribution(reported):
        pre = prefix_of(outcome.sequence, agent)
        total += p * (true_table[pre] - outcome.payments[agent])
    return total


def truthfulness_spotcheck(mechanism, profile: ValuationProfile,
                           misreports: Mapping[int, Sequence[Mapping]]) -> SpotcheckReport:
    """Compare each agent's truthful expected utility against every listed
    misreport (utilities always measured with the true table).

    Expectations are exact: randomized mechanisms enumerate their draws.
    """
    entries = []
    for agent in sorted(misreports):
        truth = _expected_utility(mechanism, profile, agent, profile.tables[agent])
        for k, table in enumerate(misreports[agent]):
            mis = _expected_utility(mechanism, profile.with_table(agent, table),
                                    agent, profile.tables[agent])
            entries.append(SpotcheckEntry(agent, k, truth, mis))
    return SpotcheckReport(tuple(entries))


# --- the three counterexample pairs -------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    name: str
    profile: ValuationProfile
    agent: int
    alt_table: dict
    run: Callable[[ValuationOracle], tuple]


def counterexample_matching_instance(eps) -> MatchingInstance:
    eps = Fraction(eps)
    return MatchingInstance.from_weights([[1 + eps, 1], [1, 1 - eps]])


def _counterexample_matching_alt(eps) -> MatchingInstance:
    eps = Fraction(eps)
    return MatchingInstance.from_weights([[1 - eps, 0], [1, 1 - eps]])


def counterexample_digraph_instance(eps) -> ArborescenceInstance:
    eps = Fraction(eps)
    w = [[Fraction(0)] * 4 for _ in range(4)]
    w[0][1], w[0][3] = 1 - eps, eps
    w[1][0] = Fraction(1)
    w[2][3] = 1 - eps
    w[3][2] = Fraction(1)
    return ArborescenceInstance.from_weights(w)


def _counterexample_digraph_alt(eps) -> ArborescenceInstance:
    eps = Fraction(eps)
    w = [[Fraction(0)] * 4 for _ in range(4)]
    w[0][1], w[0][3] = 1 + eps, Fraction(1)
    w[1][0] = Fraction(1)
    w[2][3] = 1 - eps
    w[3][2] = Fraction(1)
    return ArborescenceInstance.from_weights(w)


def _agent_table(oracle: ValuationOracle, agent: int) -> dict:
    others = [j for j in range(oracle.n) if j != agent]
    return {s: oracle.value(agent, s) for s in ordered_subsequences(others)}


def det_family_profile(n: int, c: int) -> ValuationProfile:
    """Monotone family: agents 0..c-1 value early slots at 10 (8 after the
    first c positions fill); everyone else is a constant 9."""
    tables = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        if i < c:
            tab = {s: Fraction(10) if len(s) < c else Fraction(8)
                   for s in ordered_subsequences(others)}
        else:
            tab = {s: Fraction(9) for s in ordered_subsequences(others)}
        tables.append(tab)
    return ValuationProfile(tables)


def det_family_misreport(n: int, c: int, agent: int = 0) -> dict:
    """The deflating misreport for an agent in the favored group."""
    others = [j for j in range(n) if j != agent]
    return {s: Fraction(8) if len(s) < c else Fraction(0)
            for s in ordered_subsequences(others)}


def counterexample_profiles(eps=Fraction(1, 10), det_n: int = 5,
                            det_c: int = 2) -> tuple:
    """The three (profile, misreport) pairs on which the unpaid algorithms
    fail the two-point truthfulness condition."""
    eps = Fraction(eps)
    osm_profile = ValuationProfile.from_oracle(
        osm_oracle(counterexample_matching_instance(eps)))
    osm_alt = _agent_table(osm_oracle(_counterexample_matching_alt(eps)), 0)

    osa_profile = ValuationProfile.from_oracle(
        osa_oracle(counterexample_digraph_instance(eps)))
    osa_alt = _agent_table(osa_oracle(_counterexample_digraph_alt(eps)), 0)

    det_profile = det_family_profile(det_n, det_c)
    det_alt = det_family_misreport(det_n, det_c)

    return (
        Counterexample("greedy-matching", osm_profile, 0, osm_alt, greedy_osm),
        Counterexample("greedy-arborescence", osa_profile, 0, osa_alt, greedy_osa),
        Counterexample("prefix-search", det_profile, 0, det_alt,
                       lambda oracle: det(oracle, det_c)),
    )
