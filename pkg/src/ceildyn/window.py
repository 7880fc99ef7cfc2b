"""Base-d digit-window engine for deep iteration of x*ceil(x).

A start l/d keeps denominator dividing d forever, so every iterate is u/d
for an integer u.  Integrality of the iterate is u = 0 (mod d), and the
ceiling needed for one more step is recoverable from u mod d.  The engine
therefore tracks only u modulo d^W.  Each step multiplies by a quantity
known one digit less precisely, so a window of W valid digits supports
W - 1 steps; the valid_digits counter enforces that bookkeeping rather
than trusting any a-priori bound on the stopping time.

track_magnitude reports log10 of a deep iterate with a rigorous error
bound: it iterates the numerator exactly until a digit cap, after which
log10 x_{k+1} = log10 x_k + log10 ceil(x_k) collapses to doubling because
log10(ceil(x)/x) <= log10(1 + 1/x) is below any representable tolerance by
the time the cap is reached.  The truncated ceiling corrections and the
log extraction error are both folded into the reported bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from ceildyn.rational import digits10
from ceildyn.squaring import StoppingReport


class PrecisionExhausted(Exception):
    """A digit window has too few valid digits to do what was asked."""


@dataclass(frozen=True)
class DigitWindow:
    base: int
    scaled_residue: int
    valid_digits: int
    steps_taken: int = 0

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if self.valid_digits < 1:
            raise ValueError("a window must retain at least one valid digit")
        if not 0 <= self.scaled_residue < self.base ** self.valid_digits:
            raise ValueError("scaled residue outside the window modulus")

    @property
    def modulus(self) -> int:
        return self.base ** self.valid_digits

    @property
    def fraction_digit(self) -> int:
        """Digit a_{-1} of the represented value u/d: zero exactly when integral."""
        return self.scaled_residue % self.base

    @property
    def integral(self) -> bool:
        return self.fraction_digit == 0


def window_from_rational(l: int, d: int, M: int) -> DigitWindow:
    """Window for the start l/d holding M+1 valid base-d digits of the numerator."""
    if M < 1:
        raise ValueError("window size M must be >= 1")
    if l < 1:
        raise ValueError("numerator must be >= 1")
    return DigitWindow(d, l % d ** (M + 1), M + 1)


def step_window(w: DigitWindow) -> DigitWindow:
    """One application of x -> x*ceil(x) to the windowed value u/d.

    ceil(u/d) = (u + ((d - u mod d) mod d)) / d is exact from the residue;
    the product u*ceil is then valid one digit shorter.
    """
    if w.valid_digits < 2:
        raise PrecisionExhausted(
            f"window of {w.valid_digits} digit(s) cannot absorb another step"
        )
    d = w.base
    u = w.scaled_residue
    pad = (d - u % d) % d
    c = (u + pad) // d
    mod = d ** (w.valid_digits - 1)
    return DigitWindow(d, u * c % mod, w.valid_digits - 1, w.steps_taken + 1)


def stopping_time_windowed(
    l: int,
    d: int,
    M: int,
    auto_grow: bool = False,
    max_window: int = 1 << 20,
) -> StoppingReport:
    """Stopping time of l/d without materializing the iterates.

    Needs a noninteger start greater than 1.  The reached integer is never
    materialized, so a resolved report carries theta only.  With auto_grow
    the window doubles and the run restarts until resolution (or the
    max_window safety cap, since termination is conjectural in general).
    """
    if d < 2 or l <= d or l % d == 0:
        raise ValueError("windowed engine needs a noninteger start l/d > 1")
    window = M
    while True:
        w = window_from_rational(l, d, window)
        while w.valid_digits >= 2:
            w = step_window(w)
            if w.integral:
                return StoppingReport(theta=w.steps_taken)
        if not auto_grow or window >= max_window:
            return StoppingReport(theta=None, unresolved_at=window)
        window = min(2 * window, max_window)


_LOG10_2 = Decimal("0.30102999566398119521373889472449302676818988146211")
_LOG10_INT_ERR = Decimal("1e-12")  # conservative absolute bound for log10_of_int


def log10_of_int(n: int) -> Decimal:
    """log10 of a positive integer of any size, accurate to ~1e-14 absolute."""
    if n <= 0:
        raise ValueError("log10_of_int needs n >= 1")
    bits = n.bit_length()
    if bits <= 64:
        return Decimal(repr(math.log10(n)))
    top = n >> (bits - 64)
    with localcontext() as ctx:
        ctx.prec = 60
        return +(Decimal(repr(math.log10(top))) + (bits - 64) * _LOG10_2)


@dataclass(frozen=True)
class MagnitudeTracker:
    """log10 of an iterate together with an absolute error bound on that log.

    exact_digits is the decimal digit count of the iterate's integer part
    and is only available while the run stayed fully exact.
    """

    log10_value: Decimal
    error_bound: Decimal
    steps: int
    exact_digits: int | None = None


def track_magnitude(l: int, d: int, steps: int, digit_cap: int = 100_000) -> MagnitudeTracker:
    if d < 1 or l <= d:
        raise ValueError("magnitude tracking needs a start l/d > 1")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if digit_cap < 64:
        raise ValueError("digit_cap must be >= 64")
    bit_cap = int(digit_cap * 3.3219280948873626) + 64
    u = l
    done = 0
    while done < steps and u.bit_length() <= bit_cap:
        u = u * (-(-u // d))
        done += 1
    with localcontext() as ctx:
        ctx.prec = 60
        log_now = +(log10_of_int(u) - log10_of_int(d))
        if done == steps:
            return MagnitudeTracker(log_now, 2 * _LOG10_INT_ERR, steps, digits10(u // d))
        rest = steps - done
        amp = Decimal(2) ** rest
        value = +(log_now * amp)
        # u > 2^bit_cap guarantees x >= 10^(digit_cap - digits(d)); every
        # dropped ceiling correction is below 10^-(digit_cap - 12) and gets
        # amplified by at most 2^rest.
        ceil_slack = amp * Decimal(10) ** -(digit_cap - 12)
        err = +(amp * (2 * _LOG10_INT_ERR) + ceil_slack)
        return MagnitudeTracker(value, err, steps, None)
