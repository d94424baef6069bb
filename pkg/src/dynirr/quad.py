"""Quadratic polynomials over F_q: critical points, scaling, pointwise composition.

Compositions of quadratics are never expanded here; words are evaluated
value-by-value from the innermost index outward, so a length-n word costs
n quadratic evaluations instead of a degree-2^n polynomial.  The dense
expansion lives only in the oracle module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegeneratePolynomialError
from .ff import FieldCtx
from .poly import DensePoly

# A composition word is a tuple of 0-based indices into a polynomial list,
# outermost index first.
Word = tuple[int, ...]


@dataclass(frozen=True)
class QuadPoly:
    """a*X^2 + b*X + c with a != 0; the critical point -b/(2a) is cached."""

    ctx: FieldCtx
    a: int
    b: int
    c: int
    gamma: int

    def eval(self, x: int) -> int:
        ctx = self.ctx
        if ctx.k == 1:
            return (x * (self.a * x + self.b) + self.c) % ctx.p
        return ctx.add(ctx.mul(ctx.add(ctx.mul(self.a, x), self.b), x), self.c)

    def eval_fn(self):
        """Bound evaluation closure for inner loops (skips operand checks)."""
        ctx = self.ctx
        a, b, c = self.a, self.b, self.c
        if ctx.k == 1:
            p = ctx.p
            return lambda x: (x * (a * x + b) + c) % p
        fadd, fmul = ctx.add_fn(), ctx.mul_fn()
        return lambda x: fadd(fmul(fadd(fmul(a, x), b), x), c)

    @property
    def is_monic(self) -> bool:
        return self.a == 1

    def dense(self) -> DensePoly:
        return DensePoly(self.ctx, [self.c, self.b, self.a])

    def key(self) -> tuple[int, int, int]:
        """Canonical coordinate order used for sorting and deduplication."""
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return format_quad(self)


def quad_new(ctx: FieldCtx, a: int, b: int, c: int) -> QuadPoly:
    a, b, c = ctx.check(a), ctx.check(b), ctx.check(c)
    if a == 0:
        raise DegeneratePolynomialError("leading coefficient must be nonzero")
    gamma = ctx.neg(ctx.mul(b, ctx.inv(ctx.mul(2, a))))
    return QuadPoly(ctx, a, b, c, gamma)


def is_irreducible_quad(f: QuadPoly) -> bool:
    """Character form of quadratic irreducibility: -a*f(gamma) a nonsquare."""
    ctx = f.ctx
    return ctx.is_nonsquare(ctx.neg(ctx.mul(f.a, f.eval(f.gamma))))


def scale(f: QuadPoly, u: int) -> QuadPoly:
    """The scaling f(uX)/u, coefficients (a*u, b, c/u); u must be nonzero.

    The q-1 scalings of f are pairwise distinct (their leading coefficients
    differ) and contain exactly one monic member, at u = 1/a.
    """
    ctx = f.ctx
    ctx.check(u)
    if u == 0:
        raise ZeroDivisionError("scaling by zero")
    return quad_new(ctx, ctx.mul(f.a, u), f.b, ctx.mul(f.c, ctx.inv(u)))


def _check_word(polys, word: Word) -> None:
    if not word:
        raise ValueError("empty composition word")
    if any(not 0 <= idx < len(polys) for idx in word):
        raise ValueError(f"word {word} has indices outside the polynomial list")


def compose_eval(polys: list[QuadPoly], word: Word, x: int) -> int:
    """Evaluate f_{word[0]} o ... o f_{word[-1]} at x, innermost first."""
    _check_word(polys, word)
    v = x
    for idx in reversed(word):
        v = polys[idx].eval(v)
    return v


def composition_leading_coeff(polys: list[QuadPoly], word: Word) -> int:
    """Leading coefficient a_{i1} * a_{i2}^2 * ... * a_{in}^(2^(n-1))."""
    _check_word(polys, word)
    ctx = polys[word[0]].ctx
    lc = polys[word[-1]].a
    for idx in reversed(word[:-1]):
        lc = ctx.mul(polys[idx].a, ctx.mul(lc, lc))
    return lc


def format_quad(f: QuadPoly) -> str:
    fmt = f.ctx.format_element
    return f"{fmt(f.a)},{fmt(f.b)},{fmt(f.c)}"


def parse_quad(ctx: FieldCtx, s: str) -> QuadPoly:
    parts = s.strip().split(",")
    if len(parts) != 3:
        raise ValueError(f"expected 'a,b,c', got {s!r}")
    a, b, c = (ctx.parse_element(t) for t in parts)
    return quad_new(ctx, a, b, c)
