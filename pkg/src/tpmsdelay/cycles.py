"""Integer arithmetic behind schedule feasibility.

Slot indices are 1-based. A sensor with arrival phase ``n`` transmits at
``n, n + C_L, n + 2*C_L, ...``; with a single wake slot per gateway cycle
(W = 1) the frame sent after ``k`` extra duty-cycles is heard iff
``n + k*C_L - W`` is a multiple of ``W + S``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateConfigError, InvalidPhaseError, NotFiniteError

INT64_MAX = 2**63 - 1


def check_int64(value: int, what: str = "value") -> int:
    """Raise OverflowError if ``value`` does not fit a signed 64-bit slot counter."""
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError(f"{what}={value} overflows 64-bit slot arithmetic")
    return value


def _require_positive(**kwargs: int) -> None:
    for name, v in kwargs.items():
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"{name} must be an int, got {type(v).__name__}")
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


@dataclass(frozen=True)
class BezoutTriple:
    g: int
    alpha: int
    beta: int


@dataclass(frozen=True)
class MinCycleSolution:
    c_min: int
    n_sleep_min: int


def gcd(a: int, b: int) -> int:
    _require_positive(a=a, b=b)
    while b:
        a, b = b, a % b
    return a


def bezout(a: int, b: int) -> BezoutTriple:
    """Extended Euclid: returns (g, alpha, beta) with alpha*a + beta*b == g."""
    _require_positive(a=a, b=b)
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return BezoutTriple(r0, s0, t0)


def mod_inverse(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` (m >= 1); raises NotFiniteError if none exists."""
    if m == 1:
        return 0
    trip = bezout(a % m or m, m)
    if trip.g != 1:
        raise NotFiniteError(f"{a} has no inverse modulo {m}")
    return trip.alpha % m


def solve_min_cycles(n: int, c_l: int, w: int, s: int) -> MinCycleSolution:
    """Least (c_min, n_sleep_min) >= 0 with n + c_min*c_l == w + n_sleep_min*(w+s).

    Only W = 1 is supported; general wake lengths go through the oracle.
    """
    _require_positive(c_l=c_l, w=w)
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if w != 1:
        raise DegenerateConfigError("closed-form cycle solver requires W = 1")
    if not 1 <= n <= c_l:
        raise InvalidPhaseError(f"arrival phase {n} outside 1..{c_l}")
    period = w + s
    g = gcd(c_l, period)
    rhs = (w - n) % period
    if rhs % g:
        raise NotFiniteError(
            f"phase {n} is never received: gcd({c_l}, {period}) = {g}")
    # k * (c_l/g) == rhs/g  (mod period/g)
    m = period // g
    k = (rhs // g) * mod_inverse((c_l // g) % m, m) % m if m > 1 else 0
    reception = check_int64(n + k * c_l, "reception slot")
    n_sleep, rem = divmod(reception - w, period)
    assert rem == 0
    return MinCycleSolution(k, n_sleep)
