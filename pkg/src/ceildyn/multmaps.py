"""Approximate multiplication by a fixed rational and its integer conjugates.

For r = l/d in lowest terms the map x -> r*ceil(x) keeps denominators
dividing d, so conjugating by n -> n/d turns it into an integer map.  The
integer maps treated here form the periodically linear family

    n  |->  (l*n + offset[n mod d]) / d

with each offset chosen so the division is exact.  Integrality questions
about the rational dynamics become divisibility questions (is some iterate
divisible by d?) about the integer dynamics, which is what makes the
residue-class sieve below possible.

Conventions: the multiplicative stopping time counts from k = 1 (an
integer ratio gives theta = 1, not 0), unlike the squaring stopping time
which counts from 0.  "Exceptional" always means the j >= 1 iterates; the
starting value itself may be divisible by d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ceildyn.rational import InternalCheckError, digits10
from ceildyn.squaring import StoppingReport


@dataclass(frozen=True)
class PeriodicallyLinearMap:
    """n |-> (l*n + offsets[n mod d]) / d, exact on every residue class.

    Exactness forces offsets[b] = -l*b (mod d); construction rejects any
    offset table violating that congruence.
    """

    l: int
    d: int
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError("modulus d must be >= 2")
        if self.l == 0:
            raise ValueError("slope numerator l must be nonzero")
        if math.gcd(self.l, self.d) != 1:
            raise ValueError("slope l/d must be in lowest terms")
        if len(self.offsets) != self.d:
            raise ValueError(f"need exactly {self.d} offsets, got {len(self.offsets)}")
        for b, off in enumerate(self.offsets):
            if (self.l * b + off) % self.d != 0:
                raise ValueError(
                    f"offset {off} for residue {b} is not congruent to "
                    f"{-self.l * b % self.d} (mod {self.d})"
                )

    @property
    def slope(self) -> Fraction:
        return Fraction(self.l, self.d)

    def apply(self, n: int) -> int:
        num = self.l * n + self.offsets[n % self.d]
        if num % self.d != 0:
            raise InternalCheckError("periodically linear step is not integral")
        return num // self.d

    def orbit(self, n: int, steps: int) -> list[int]:
        """Iterates 1..steps from n (the start itself is not included)."""
        out: list[int] = []
        for _ in range(steps):
            n = self.apply(n)
            out.append(n)
        return out


def make_map(l: int, d: int, offsets) -> PeriodicallyLinearMap:
    return PeriodicallyLinearMap(l, d, tuple(offsets))


def conjugate_g(r) -> PeriodicallyLinearMap:
    """The integer conjugate n |-> l*ceil(n/d) of x -> r*ceil(x), r = l/d."""
    r = Fraction(r)
    l, d = r.numerator, r.denominator
    if d == 1:
        raise ValueError("an integral ratio has no conjugate map")
    offsets = tuple(0 if b == 0 else l * (d - b) for b in range(d))
    return PeriodicallyLinearMap(l, d, offsets)


def ceiling_map(r) -> PeriodicallyLinearMap:
    """The direct ceiling multiplication n |-> ceil(l*n/d)."""
    r = Fraction(r)
    l, d = r.numerator, r.denominator
    if d == 1:
        raise ValueError("an integral ratio has no ceiling map")
    offsets = tuple((-l * b) % d for b in range(d))
    return PeriodicallyLinearMap(l, d, offsets)


def stopping_time_mult(r, n: int, max_steps: int = 512) -> StoppingReport:
    """Least k >= 1 with the k-th iterate of x -> r*ceil(x) from n integral.

    Computed on the conjugate map: k-th iterate of n is integral exactly
    when the conjugate orbit of d*n is divisible by d at step k, and the
    integer reached is that orbit value over d.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    r = Fraction(r)
    if r.denominator == 1:
        reached = r.numerator * n
        return StoppingReport(theta=1, reached=reached, digits=digits10(abs(reached)))
    g = conjugate_g(r)
    d = r.denominator
    x = d * n
    for k in range(1, max_steps + 1):
        x = g.apply(x)
        if x % d == 0:
            reached = x // d
            return StoppingReport(theta=k, reached=reached, digits=digits10(abs(reached)))
    return StoppingReport(theta=None, unresolved_at=max_steps)


# ---------------------------------------------------------------------------
# Residue-class sieve for exceptional sets
#
# h(b + d*m) = h(b) + l*m, hence h^(j)(b + d^j * m) = h^(j)(b) + l^j * m:
# the j-th iterate of a class mod d^(j+1) is well defined mod d.  Refining a
# surviving class mod d^(j+1) into its d children mod d^(j+2) moves the new
# iterate through all residues (l is a unit), so exactly one child dies.
# ---------------------------------------------------------------------------


def _refine(
    m: PeriodicallyLinearMap,
    classes: list[tuple[int, int]],
    level: int,
    bound: int | None = None,
) -> list[tuple[int, int]]:
    """One sieve level: (residue mod d^(level+1), carried iterate value) pairs
    become the surviving (residue mod d^(level+2), value) pairs.

    With a bound, children whose class has no member in [-bound, bound] are
    dropped after the divisibility kill (they cannot matter to a census).
    """
    d = m.d
    step_mod = d ** (level + 1)
    child_mod = step_mod * d
    lpow = m.l ** (level + 1)
    out: list[tuple[int, int]] = []
    for residue, value in classes:
        value_next = m.apply(value)
        kept = []
        killed = 0
        for t in range(d):
            child_value = value_next + lpow * t
            if child_value % d == 0:
                killed += 1
            else:
                kept.append((residue + step_mod * t, child_value))
        if killed != 1:
            raise InternalCheckError(
                f"refinement killed {killed} children of class {residue} "
                f"(mod {step_mod}); exactly one is required"
            )
        if bound is None:
            out.extend(kept)
        else:
            out.extend(
                (c, v) for c, v in kept if c <= bound or c >= child_mod - bound
            )
    return out


def _sieve_classes(
    m: PeriodicallyLinearMap, depth_k: int, bound: int | None = None
) -> list[tuple[int, int]]:
    classes = [(b, b) for b in range(m.d)]
    for level in range(depth_k):
        classes = _refine(m, classes, level, bound)
    return classes


def exceptional_sieve(m: PeriodicallyLinearMap, depth_k: int) -> frozenset[int]:
    """Residues mod d^(k+1) whose members keep iterates 1..k off 0 (mod d).

    Returns exactly d*(d-1)**k classes; the one-child-killed-per-parent
    mechanism guarantees the count, and a miscount raises.
    """
    if depth_k < 1:
        raise ValueError("depth_k must be >= 1")
    classes = _sieve_classes(m, depth_k)
    expected = m.d * (m.d - 1) ** depth_k
    if len(classes) != expected:
        raise InternalCheckError(
            f"sieve produced {len(classes)} classes, expected {expected}"
        )
    return frozenset(residue for residue, _ in classes)


def min_depth_for_census(d: int, x: int) -> int:
    """Smallest k with d**k >= x (the natural sieve depth for a census at x)."""
    k, power = 0, 1
    while power < x:
        power *= d
        k += 1
    return k


@dataclass(frozen=True)
class ExceptionalCensus:
    map: PeriodicallyLinearMap
    bound_x: int
    depth_k: int
    survivors: tuple[int, ...]
    count: int
    theorem_bound: float


def exceptional_census(
    m: PeriodicallyLinearMap, x: int, depth_k: int | None = None
) -> ExceptionalCensus:
    """All integers |n| <= x surviving the sieve to depth_k.

    depth_k defaults to (and must be at least) the smallest k with d^k >= x;
    at that depth a surviving class mod d^(k+1) meets [-x, x] in at most a
    couple of points, so the census count is comparable to the true
    exceptional count and the 4*d*x**beta_d bound applies.  Shallower
    censuses would over-approximate wildly and are rejected.
    """
    if x < 1:
        raise ValueError("census bound x must be >= 1")
    d = m.d
    floor_depth = min_depth_for_census(d, x)
    if depth_k is None:
        depth_k = floor_depth + 3
    if depth_k < floor_depth:
        raise ValueError(
            f"depth_k={depth_k} is below the minimum {floor_depth} for x={x}"
        )
    classes = _sieve_classes(m, depth_k, bound=x)
    modulus = d ** (depth_k + 1)
    members: list[int] = []
    for residue, _ in classes:
        first = residue - ((residue + x) // modulus) * modulus
        n = first
        while n <= x:
            members.append(n)
            n += modulus
    members.sort()
    beta = math.log(d - 1) / math.log(d)
    return ExceptionalCensus(
        map=m,
        bound_x=x,
        depth_k=depth_k,
        survivors=tuple(members),
        count=len(members),
        theorem_bound=4.0 * d * x**beta,
    )


@dataclass(frozen=True)
class ExceptionalCandidate:
    value: int
    verified_depth: int
    certified: bool


def exceptional_denominator2(
    m: PeriodicallyLinearMap,
    depth_K: int = 64,
    stabilization: int = 8,
    max_cert_steps: int = 512,
) -> list[ExceptionalCandidate]:
    """Chase the two nested surviving classes of a d=2 map to depth_K.

    At every depth exactly two classes survive, one even and one odd.  If a
    chain's signed representatives (the member of smallest absolute value)
    sit on the same integer for the last `stabilization` depths, that
    integer is a candidate exceptional point: its iterates 1..depth_K are
    certainly all odd.  A candidate whose orbit is then observed to be
    eventually periodic with only odd iterates is certified; a candidate
    whose orbit escapes the certification budget is reported uncertified;
    a candidate refuted by an even iterate beyond depth_K is dropped.
    """
    if m.d != 2:
        raise ValueError("the nested-class chase applies to d = 2 maps only")
    classes = [(0, 0), (1, 1)]
    last_rep: dict[int, int | None] = {0: None, 1: None}
    streak = {0: 0, 1: 0}
    for level in range(depth_K):
        classes = _refine(m, classes, level)
        if len(classes) != 2 or {c % 2 for c, _ in classes} != {0, 1}:
            raise InternalCheckError("d=2 sieve must keep one even and one odd class")
        modulus = 2 ** (level + 2)
        for residue, _ in classes:
            rep = residue if residue <= modulus // 2 else residue - modulus
            parity = residue % 2
            if rep == last_rep[parity]:
                streak[parity] += 1
            else:
                last_rep[parity] = rep
                streak[parity] = 1
    candidates: list[ExceptionalCandidate] = []
    for parity in (0, 1):
        if streak[parity] < stabilization or last_rep[parity] is None:
            continue
        value = last_rep[parity]
        seen: set[int] = set()
        x = value
        certified = False
        refuted = False
        for _ in range(max_cert_steps):
            x = m.apply(x)
            if x % 2 == 0:
                refuted = True
                break
            if x in seen:
                certified = True
                break
            seen.add(x)
        if not refuted:
            candidates.append(ExceptionalCandidate(value, depth_K, certified))
    candidates.sort(key=lambda c: c.value)
    return candidates


# ---------------------------------------------------------------------------
# Digit characterizations for the contracting maps n |-> ceil(n/d)
# ---------------------------------------------------------------------------


def sigma_prime(d: int, k: int) -> frozenset[int]:
    """The corrected digit set: base-d expansions with leading digit in
    [1, d-1] and every higher digit in [0, d-2]; size (d-1)**k.

    Each member's orbit under n -> ceil(n/d) walks down to the fixed point
    1 without any iterate divisible by d (verified here by iteration), so
    the whole set lies in the exceptional set of that map.
    """
    if d < 3:
        raise ValueError("digit construction needs d >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    members: set[int] = set()
    stack: list[tuple[int, int]] = [(a0, d) for a0 in range(1, d)]
    while stack:
        n, place = stack.pop()
        if place >= d**k:
            members.add(n)
            continue
        for a in range(d - 1):
            stack.append((n + a * place, place * d))
    for n in members:
        x = n
        while x != 1:
            x = -(-x // d)
            if x % d == 0:
                raise InternalCheckError(
                    f"digit-set member {n} reached the divisible iterate {x}"
                )
    if len(members) != (d - 1) ** k:
        raise InternalCheckError("digit set has the wrong cardinality")
    return frozenset(members)


def sigma_literal(d: int, k: int) -> frozenset[int]:
    """The uncorrected digit condition: 1 <= n <= d^k with every base-d
    digit above the units place different from d-1.  Contains members
    (n = d*d for k >= 2) that are not exceptional; kept for comparison."""
    if d < 3:
        raise ValueError("digit construction needs d >= 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    out: set[int] = set()
    for n in range(1, d**k + 1):
        rest = n // d
        ok = True
        while rest:
            if rest % d == d - 1:
                ok = False
                break
            rest //= d
        if ok:
            out.add(n)
    return frozenset(out)


def certified_exceptional(m: PeriodicallyLinearMap, n: int, max_steps: int = 4096) -> bool:
    """True when n's orbit is observed eventually periodic with no iterate
    divisible by d.  False on a divisible iterate or an exhausted budget."""
    seen: set[int] = set()
    x = n
    for _ in range(max_steps):
        x = m.apply(x)
        if x % m.d == 0:
            return False
        if x in seen:
            return True
        seen.add(x)
    return False


def lower_bound_check(d: int, x: int) -> bool:
    """Does the certified exceptional count of n -> ceil(n/d) at |n| <= x
    meet the (1/d) * x**beta_d lower bound?"""
    if d < 3:
        raise ValueError("lower bound check needs d >= 3")
    if x < d:
        raise ValueError("x must be at least d")
    g = conjugate_g(Fraction(1, d))
    census = exceptional_census(g, x, min_depth_for_census(d, x) + 3)
    count = sum(1 for n in census.survivors if certified_exceptional(g, n))
    beta = math.log(d - 1) / math.log(d)
    return count >= x**beta / d


def mahler_witness(n: int, j_max: int = 256) -> int | None:
    """Least j >= 1 with the j-th ceil(3x/2)-iterate of n congruent to
    3 mod 4, or None if none occurs within j_max steps.

    Such a j witnesses that n cannot start an all-[0,1/2) binary orbit of
    the three-halves multiplication, the integer form of the Z-number
    question.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g = ceiling_map(Fraction(3, 2))
    x = n
    for j in range(1, j_max + 1):
        x = g.apply(x)
        if x % 4 == 3:
            return j
    return None


def floor_shift_check(d: int, m: int, horizon: int) -> bool:
    """For r = (d+1)/d, the floor orbit of m+d tracks the ceiling orbit of
    m at constant offset d+1 until the common stopping step.

    Returns True when the offset identity holds at every step up to the
    first integral ceiling iterate (or the horizon) and both orbits become
    integral together.
    """
    if d < 1 or m < 1 or horizon < 1:
        raise ValueError("need d >= 1, m >= 1, horizon >= 1")
    r = Fraction(d + 1, d)
    y = Fraction(m)
    Y = Fraction(m + d)
    for _ in range(horizon):
        y = r * math.ceil(y)
        Y = r * math.floor(Y)
        if Y - y != d + 1:
            return False
        if y.denominator == 1:
            return Y.denominator == 1
    return True
