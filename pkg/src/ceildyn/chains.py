"""Denominator chains of approximate squaring orbits and their statistics.

Along an orbit of x -> x*ceil(x) the reduced denominators form a chain
d_0, d_1, ... in which each entry divides its predecessor.  A strict drop
d_{j-1}/d_j > 1 is a break point; a chain is complete once it reaches 1
(the orbit became integral).  This module computes chains, the mixed-radix
digit expansion adapted to a chain, the two digit transition laws, counts
of arithmetic progressions realizing a chain, the density exponents
alpha_d and beta_d, limiting stopping-time distributions, and censuses of
starts by stopping time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ceildyn.rational import InternalCheckError, big_omega, euler_phi
from ceildyn.squaring import stopping_time_exact
from ceildyn.window import stopping_time_windowed


@dataclass(frozen=True)
class Chain:
    """Reduced denominators (d_0, ..., d_m) of an orbit started over d_start."""

    d_start: int
    denominators: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.d_start < 1 or not self.denominators:
            raise ValueError("chain needs d_start >= 1 and at least one denominator")
        prev = self.d_start
        for d in self.denominators:
            if d < 1 or prev % d != 0:
                raise ValueError("denominators must divide their predecessors")
            prev = d
        if len(self.break_points) > big_omega(self.d_start):
            raise InternalCheckError(
                "more break points than prime factors of the starting denominator"
            )

    @property
    def break_points(self) -> tuple[tuple[int, int], ...]:
        """(j, d_{j-1}/d_j) at every strict drop, with d_{-1} = d_start."""
        out = []
        prev = self.d_start
        for j, d in enumerate(self.denominators):
            if d < prev:
                out.append((j, prev // d))
            prev = d
        return tuple(out)

    @property
    def complete(self) -> bool:
        return self.denominators[-1] == 1


def chain_of(l: int, d: int, m: int) -> Chain:
    """Chain of the first m+1 reduced denominators of the orbit of l/d."""
    if d < 1 or m < 0:
        raise ValueError("need d >= 1 and m >= 0")
    cur = Fraction(l, d)
    dens = [cur.denominator]
    for _ in range(m):
        cur = cur * math.ceil(cur)
        dens.append(cur.denominator)
    return Chain(d, tuple(dens))


def mixed_radix_expand(q, chain: Chain, k: int) -> tuple[int, ...]:
    """Digits (a_-1, a_0, a_1, ...) of q at chain position k.

    a_-1 is the numerator mod d_k; the integer part is expanded with radix
    d_{k+j} for digit a_j (the final chain entry repeating past the end).
    When the radices reach 1 the remaining quotient is emitted as a single
    absorbing final digit, so the expansion always reconstructs exactly.
    """
    if not 0 <= k < len(chain.denominators):
        raise ValueError("position k outside the chain")
    q = Fraction(q)
    if q < 0:
        raise ValueError("expansion is defined for nonnegative values")
    dk = chain.denominators[k]
    if q.denominator != dk:
        raise ValueError(
            f"value has denominator {q.denominator} but the chain says {dk} at k={k}"
        )
    last = len(chain.denominators) - 1
    digits = [q.numerator % dk]
    n = q.numerator // dk
    j = 0
    while True:
        radix = chain.denominators[min(k + j, last)]
        if radix == 1:
            digits.append(n)
            break
        digits.append(n % radix)
        n //= radix
        j += 1
        if n == 0:
            break
    return tuple(digits)


def mixed_radix_value(digits, chain: Chain, k: int) -> Fraction:
    """Exact value of a digit tuple produced by mixed_radix_expand."""
    last = len(chain.denominators) - 1
    dk = chain.denominators[k]
    total = Fraction(digits[0], dk)
    place = 1
    for j, a in enumerate(digits[1:]):
        total += a * place
        place *= chain.denominators[min(k + j, last)]
    return total


@dataclass(frozen=True)
class DigitLawReport:
    ok: bool
    checked_steps: int
    first_violation: tuple[int, str, str] | None = None


def verify_digit_laws(l: int, d: int, m: int) -> DigitLawReport:
    """Check both digit transition laws along the exact orbit of l/d.

    Law 1: the denominator drop d_k/d_{k+1} equals gcd(a_0(k)+1, d_k).
    Law 2: the next fractional digit a_-1(k+1) is coprime to d_{k+1}.
    """
    cur = Fraction(l, d)
    values = [cur]
    for _ in range(m):
        cur = cur * math.ceil(cur)
        values.append(cur)
    chain = Chain(d, tuple(v.denominator for v in values))
    for k in range(m):
        dk = chain.denominators[k]
        dk1 = chain.denominators[k + 1]
        a0 = mixed_radix_expand(values[k], chain, k)[1]
        drop = dk // dk1
        law1 = math.gcd(a0 + 1, dk)
        if law1 != drop:
            return DigitLawReport(
                False, k, (k, "drop", f"gcd(a0+1, d_k) = {law1} but d_k/d_k+1 = {drop}")
            )
        a_frac = values[k + 1].numerator % dk1
        if math.gcd(a_frac, dk1) != 1:
            return DigitLawReport(
                False, k, (k, "coprime", f"a_-1 = {a_frac} shares a factor with {dk1}")
            )
    return DigitLawReport(True, m, None)


@dataclass(frozen=True)
class APCount:
    """Predicted number of arithmetic progressions of starts realizing a
    chain, the modulus those progressions live in, and (when the modulus is
    small enough to enumerate) the brute-force count."""

    chain: Chain
    predicted: int
    modulus: int
    enumerated: int | None


def _chain_denominators_windowed(c: int, d: int, m: int) -> tuple[int, ...]:
    """Reduced denominators of the orbit of c/d from digit windows alone.

    Entry j is d/gcd(u_j, d) where u_j tracks the orbit numerator over the
    fixed denominator d modulo a shrinking power of d; each step consumes
    one digit, and m+2 digits keep every needed gcd valid.
    """
    mod = d ** (m + 2)
    u = c % mod
    dens = [d // math.gcd(u % d, d)]
    for _ in range(m):
        pad = (d - u % d) % d
        ceil_part = (u + pad) // d
        mod //= d
        u = (u * ceil_part) % mod
        dens.append(d // math.gcd(u % d, d))
    return tuple(dens)


def ap_count_for_chain(chain: Chain, enumerate_cap: int = 10_000_000) -> APCount:
    predicted = 1
    for dj in chain.denominators:
        predicted *= euler_phi(dj)
    modulus = chain.d_start
    for dj in chain.denominators[:-1]:
        modulus *= dj
    enumerated: int | None = None
    m = len(chain.denominators) - 1
    if modulus <= enumerate_cap:
        enumerated = sum(
            1
            for c in range(modulus)
            if _chain_denominators_windowed(c, chain.d_start, m) == chain.denominators
        )
    return APCount(chain, predicted, modulus, enumerated)


@dataclass(frozen=True)
class AlphaExponent:
    d: int
    value: float
    prime: int
    multiplicity: int

    @property
    def description(self) -> str:
        p, j = self.prime, self.multiplicity
        return f"log(1 + 1/{p - 1})/({j}*log {p})"


def alpha_d(d: int) -> AlphaExponent:
    """Density exponent: minimum of log(1 + 1/(p-1))/(j log p) over the
    prime powers p^j exactly dividing d."""
    if d < 2:
        raise ValueError("d must be >= 2")
    best: AlphaExponent | None = None
    n = d
    p = 2
    while p * p <= n:
        if n % p == 0:
            j = 0
            while n % p == 0:
                n //= p
                j += 1
            value = math.log(1 + 1 / (p - 1)) / (j * math.log(p))
            if best is None or value < best.value:
                best = AlphaExponent(d, value, p, j)
        p += 1
    if n > 1:
        value = math.log(1 + 1 / (n - 1)) / math.log(n)
        if best is None or value < best.value:
            best = AlphaExponent(d, value, n, 1)
    assert best is not None
    return best


def alpha_d_divisor_form(d: int) -> float:
    """The same exponent as a minimum of log(d'/phi(d'))/log d' over the
    divisors d' > 1 of d; agrees with alpha_d, kept as a cross-check."""
    if d < 2:
        raise ValueError("d must be >= 2")
    best = None
    for dp in range(2, d + 1):
        if d % dp == 0:
            value = math.log(dp / euler_phi(dp)) / math.log(dp)
            best = value if best is None else min(best, value)
    assert best is not None
    return best


def beta_d(d: int) -> float:
    """Exceptional-count exponent log(d-1)/log d; zero at d = 2."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return math.log(d - 1) / math.log(d)


# ---------------------------------------------------------------------------
# Limiting stopping-time distribution
# ---------------------------------------------------------------------------


def _complete_chains(d: int, j: int):
    """All denominator chains (d_0, ..., d_j) over d that first reach 1 at
    index j: divisibility cascade, d_0 | d, every entry before the last > 1."""
    if j == 0:
        yield (1,)
        return

    def divisors_gt1(n: int) -> list[int]:
        return [t for t in range(2, n + 1) if n % t == 0]

    def extend(prefix: tuple[int, ...]):
        if len(prefix) == j:
            yield prefix + (1,)
            return
        for t in divisors_gt1(prefix[-1]):
            yield from extend(prefix + (t,))

    for d0 in divisors_gt1(d):
        yield from extend((d0,))


def chain_stop_mass(d: int, j: int) -> Fraction:
    """Exact limiting mass of stopping time j, summed over complete chains:
    each chain contributes its progression count over its modulus."""
    total = Fraction(0)
    for dens in _complete_chains(d, j):
        count = 1
        for t in dens:
            count *= euler_phi(t)
        modulus = d
        for t in dens[:-1]:
            modulus *= t
        total += Fraction(count, modulus)
    if d ** (j + 1) % total.denominator != 0:
        raise InternalCheckError("stop mass denominator does not divide d^(j+1)")
    return total


def prime_stop_mass(p: int, j: int) -> Fraction:
    """Closed form (1/p)(1 - 1/p)^j valid for prime denominators."""
    return Fraction(1, p) * Fraction(p - 1, p) ** j


def theta_residues(d: int, j: int) -> frozenset[int]:
    """Representatives 1..d^(j+1) whose start l/d stops in exactly j steps.

    Stopping time through step j depends only on l mod d^(j+1), so this
    enumerates the full residue description of the event; it is the
    independent oracle for chain_stop_mass.
    """
    modulus = d ** (j + 1)
    hit = set()
    for l in range(1, modulus + 1):
        if l % d != 0 and l < d:
            continue  # a start in (0, 1) is fixed and never stops
        report = stopping_time_exact(Fraction(l, d), max_steps=j + 1)
        if report.theta == j:
            hit.add(l % modulus)
    return frozenset(hit)


def enumerate_stop_mass(d: int, j: int) -> Fraction:
    return Fraction(len(theta_residues(d, j)), d ** (j + 1))


@dataclass(frozen=True)
class StopDistribution:
    d: int
    depth: int
    probabilities: dict[int, Fraction]
    unresolved_mass: Fraction
    x_scan: int
    empirical_counts: dict[int, int]


def stop_distribution(d: int, x_scan: int, depth: int, window: int = 48) -> StopDistribution:
    """Exact limiting masses for stopping times 0..depth plus an empirical
    histogram over starts l/d, l <= x_scan, from the digit-window engine."""
    if d < 2 or depth < 0 or x_scan < 0:
        raise ValueError("need d >= 2, depth >= 0, x_scan >= 0")
    probabilities = {j: chain_stop_mass(d, j) for j in range(depth + 1)}
    unresolved = 1 - sum(probabilities.values(), Fraction(0))
    if unresolved < 0:
        raise InternalCheckError("stop masses exceed total probability 1")
    counts = {j: 0 for j in range(depth + 1)}
    for l in range(1, x_scan + 1):
        if l % d == 0:
            theta = 0
        elif l < d:
            continue  # fixed subunit start, never stops
        else:
            theta = stopping_time_windowed(l, d, window, auto_grow=True).theta
        if theta is not None and theta <= depth:
            counts[theta] += 1
    return StopDistribution(d, depth, probabilities, unresolved, x_scan, counts)


# ---------------------------------------------------------------------------
# Census of starts by stopping time
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusReport:
    d: int
    x: int
    window: int
    thetas: dict[int, int | None]
    histogram: dict[int, int]
    unresolved: tuple[int, ...]
    records: tuple[tuple[int, int], ...]


def squaring_census(d: int, x: int, window: int = 25, lo: int = 1) -> CensusReport:
    """Stopping times of l/d for l in [lo, x] at a fixed digit window.

    Starts below d (value in (0,1), provably fixed) and starts the window
    cannot resolve are reported unresolved; records list each l achieving a
    new largest resolved stopping time.
    """
    if d < 2 or lo < 1 or x < lo:
        raise ValueError("need d >= 2 and 1 <= lo <= x")
    thetas: dict[int, int | None] = {}
    histogram: dict[int, int] = {}
    unresolved: list[int] = []
    records: list[tuple[int, int]] = []
    best = -1
    for l in range(lo, x + 1):
        if l % d == 0:
            theta: int | None = 0
        elif l < d:
            theta = None
        else:
            theta = stopping_time_windowed(l, d, window).theta
        thetas[l] = theta
        if theta is None:
            unresolved.append(l)
            continue
        histogram[theta] = histogram.get(theta, 0) + 1
        if theta > best:
            records.append((l, theta))
            best = theta
    return CensusReport(d, x, window, thetas, histogram, tuple(unresolved), tuple(records))


def bad_at_size(l: int, d: int, x: int) -> bool:
    """Is the orbit of l/d still fractional when the chain-modulus products
    first pass x?  True iff some m has prod(d_0..d_{m-1}) <= x <
    prod(d_0..d_m) with d_m > 1."""
    if d < 1 or x < 1:
        raise ValueError("need d >= 1 and x >= 1")
    cur = Fraction(l, d)
    prod_before = 1
    while True:
        dm = cur.denominator
        prod_incl = prod_before * dm
        if dm > 1 and prod_before <= x < prod_incl:
            return True
        if dm == 1 or prod_before > x:
            return False
        cur = cur * math.ceil(cur)
        prod_before = prod_incl
