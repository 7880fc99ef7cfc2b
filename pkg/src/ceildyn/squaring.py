"""Exact iteration of x*ceil(x): trajectories, stopping times, half-integer closed form.

Conventions: for these maps the stopping time counts from k = 0, so an
integer start already has stopping time 0.  (The r*ceil(x) family in
multmaps counts from k = 1 instead; the two conventions are deliberate and
documented where each is used.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ceildyn.maps import ABSORBING_KINDS, MapSpec
from ceildyn.rational import InternalCheckError, digits10, padic_valuation


def step(q) -> Fraction:
    """x -> x*ceil(x)."""
    q = Fraction(q)
    return q * math.ceil(q)


def step_floor(q) -> Fraction:
    """x -> x*floor(x)."""
    q = Fraction(q)
    return q * math.floor(q)


@dataclass
class Trajectory:
    start: Fraction
    steps: list[Fraction]
    truncated: bool

    def denominators(self) -> list[int]:
        return [self.start.denominator] + [v.denominator for v in self.steps]

    def values(self) -> list[Fraction]:
        return [self.start] + list(self.steps)


@dataclass
class StoppingReport:
    """Either theta is set (with the integer reached, when materialized) or
    unresolved_at records the step/window budget that ran out."""

    theta: int | None
    reached: int | None = None
    digits: int | None = None
    unresolved_at: int | None = None

    @property
    def resolved(self) -> bool:
        return self.theta is not None


def trajectory(q, map_spec: MapSpec | None = None, max_steps: int = 32) -> Trajectory:
    """Iterate until an iterate is an integer or max_steps elapse.

    For the squaring family an integral start stops immediately (empty step
    list); for the r*ceil(x) family integers are not absorbing, so the walk
    stops at the first integral iterate k >= 1.
    """
    q = Fraction(q)
    spec = map_spec or MapSpec.squaring()
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    absorbing = spec.kind in ABSORBING_KINDS
    if absorbing and q.denominator == 1:
        return Trajectory(q, [], False)
    steps: list[Fraction] = []
    cur = q
    truncated = True
    for _ in range(max_steps):
        nxt = spec.step(cur)
        if absorbing and cur.denominator % nxt.denominator != 0:
            raise InternalCheckError("denominator chain is not divisibility-monotone")
        steps.append(nxt)
        cur = nxt
        if cur.denominator == 1:
            truncated = False
            break
    return Trajectory(q, steps, truncated)


def stopping_time_exact(q, max_steps: int = 256) -> StoppingReport:
    """Smallest k >= 0 with the k-th iterate of x*ceil(x) an integer.

    Requires q > 1 or q integral; other starts either never resolve (the
    map fixes (0,1]) or are better walked with trajectory().
    """
    q = Fraction(q)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if q.denominator == 1:
        n = q.numerator
        return StoppingReport(theta=0, reached=n, digits=digits10(n))
    if q < 1:
        raise ValueError("stopping_time_exact needs q > 1 or integral q; use trajectory()")
    cur = q
    for k in range(1, max_steps + 1):
        cur = cur * math.ceil(cur)
        if cur.denominator == 1:
            n = cur.numerator
            return StoppingReport(theta=k, reached=n, digits=digits10(n))
    return StoppingReport(theta=None, unresolved_at=max_steps)


def theta_denominator2(l: int) -> tuple[int, int]:
    """Closed form for starts (2l+1)/2, l >= 1.

    The number of steps to the first integer is v2(l) + 1, and the integer
    reached is half the (v2(l)+1)-fold composition of y(y+1)/2 applied to
    2l + 1.  Returns (steps, reached).
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    v = padic_valuation(l, 2)
    y = 2 * l + 1
    for _ in range(v + 1):
        y = y * (y + 1) // 2
    if y % 2 != 0:
        raise InternalCheckError("closed-form terminal value is not an even integer")
    return v + 1, y // 2
