"""Single-polynomial dynamical irreducibility via the adjusted critical orbit.

A quadratic f = aX^2+bX+c with critical point gamma is dynamically
irreducible exactly when every element of its adjusted orbit is a
nonsquare: the first test is on -a*f(gamma), later tests on a*f^(n)(gamma)
(a and 1/a differ by the square a^2, so either factor decides alike; for
monic f this is literally {-f(gamma)} followed by the raw orbit).

The walk terminates by exact cycle detection on the orbit values, so the
verdict is unconditional; a finite cap can be supplied for experiments at
the cost of rho statistics.  di_test_oracle is the slow cross-check: it
expands iterates densely and asks the factorization oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import poly
from .errors import ResourceBudgetError
from .quad import QuadPoly


def default_filter_depth(q: int) -> int:
    """Census stage-1 depth: ceil(log2(q)/2) + 2 adjusted-orbit tests."""
    return math.ceil(math.log2(q) / 2) + 2


def orbit_reference_cap(q: int) -> int:
    """Instrumentation reference for orbit sizes of stable quadratics."""
    return math.ceil(q**0.75)


@dataclass
class AlgorithmParams:
    """Tuning knobs; None means exact cycle detection and the default depth."""

    orbit_cap: int | None = None
    filter_depth: int | None = None

    def depth_for(self, q: int) -> int:
        k = self.filter_depth if self.filter_depth is not None else default_filter_depth(q)
        if k < 1:
            raise ValueError("filter depth must be >= 1")
        return k


@dataclass
class OrbitReport:
    """Outcome of the character test on one quadratic.

    On failure the witness is the tested product (including the sign and the
    leading-coefficient factor), so it is always a square; for monic inputs it
    equals -f(gamma) at step 1 and f^(n)(gamma) at steps n >= 2.  preperiod
    and period are exact rho statistics when the verdict is DI; on failure
    preperiod counts the values walked and period is 0 (the cycle was never
    closed).
    """

    verdict: str  # "DI" or "fails"
    fail_step: int | None
    witness: int | None
    preperiod: int
    period: int
    steps_tested: int

    @property
    def is_di(self) -> bool:
        return self.verdict == "DI"

    @property
    def orbit_size(self) -> int:
        """Distinct values f^(n)(gamma), n >= 2 (exact only for DI verdicts)."""
        total = self.preperiod + self.period
        return total if self.preperiod == 0 else total - 1

    def to_json(self, ctx=None) -> dict:
        fmt = ctx.format_element if ctx is not None else str
        out = {"verdict": self.verdict}
        if self.verdict == "fails":
            out["fail_step"] = self.fail_step
            out["witness"] = fmt(self.witness)
        out["preperiod"] = self.preperiod
        out["period"] = self.period
        out["steps_tested"] = self.steps_tested
        return out


def di_test_char(f: QuadPoly, params: AlgorithmParams | None = None) -> OrbitReport:
    """Adjusted-orbit character test with exact cycle-detection termination."""
    ctx = f.ctx
    cap = params.orbit_cap if params is not None else None
    ns = ctx.nonsquare_fn()
    a = f.a
    feval = f.eval_fn()
    if ctx.k == 1:
        p = ctx.p
        amul = lambda x: a * x % p  # noqa: E731
        first_test = (p - a) * f.eval(f.gamma) % p
    else:
        fmul = ctx.mul_fn()
        amul = lambda x: fmul(a, x)  # noqa: E731
        first_test = ctx.mul(ctx.neg(a), f.eval(f.gamma))

    x1 = feval(f.gamma)
    if not ns(first_test):
        return OrbitReport("fails", 1, int(first_test), 1, 0, 1)
    seen = {x1: 1}
    x = x1
    n = 1
    while True:
        n += 1
        x = feval(x)
        first = seen.get(x)
        if first is not None and first >= 2:
            # cycle closed on a value already tested under the deep rule
            return OrbitReport("DI", None, None, first - 1, n - first, n - 1)
        w = amul(x)
        if not ns(w):
            return OrbitReport("fails", n, int(w), n, 0, n)
        if first is not None:  # x returned to x1, whose step-1 test differed
            return OrbitReport("DI", None, None, 0, n - 1, n)
        seen[x] = n
        if cap is not None and len(seen) >= cap:
            return OrbitReport("DI", None, None, len(seen), 0, n)


def orbit_stats(f: QuadPoly) -> tuple[int, int]:
    """Exact (preperiod, period) of the walk x1 = f(gamma), x_{n+1} = f(x_n)."""
    seen = {}
    x = f.eval(f.gamma)
    n = 1
    while x not in seen:
        seen[x] = n
        x = f.eval(x)
        n += 1
    m = seen[x]
    return m - 1, n - m


def definitive_depth(f: QuadPoly) -> int:
    """Oracle depth past which the dense verdict cannot change.

    preperiod + period tests cover every orbit value under the deep rule,
    except when the very first value is already cyclic (preperiod 0): its
    step-1 test carried the sign, so the walk must revisit it once more.
    Witness: X^2+X+2 over F_3 has orbit stats (0, 1) yet its second iterate
    is the first reducible one.
    """
    pre, per = orbit_stats(f)
    return pre + per if pre >= 1 else per + 1


def first_reducible_iterate(f: QuadPoly, depth: int, max_degree: int | None = None) -> int | None:
    """Smallest n <= depth with f^(n) reducible (dense oracle), or None."""
    if max_degree is None:
        max_degree = max(poly.DEFAULT_MAX_ITERATE_DEGREE, 2**depth)
    fd = f.dense()
    g = fd
    for n in range(1, depth + 1):
        if g.degree > max_degree:
            raise ResourceBudgetError(f"iterate degree exceeds {max_degree}")
        if not poly.is_irreducible(g):
            return n
        if n < depth:
            g = poly.compose(fd, g)
    return None


def di_test_oracle(f: QuadPoly, depth: int) -> bool:
    """True iff every iterate up to the given depth is irreducible.

    Definitive (and then necessarily equal to the character verdict) once
    depth reaches definitive_depth(f).
    """
    return first_reducible_iterate(f, depth) is None
