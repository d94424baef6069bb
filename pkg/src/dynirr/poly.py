"""Dense polynomial arithmetic over F_q and exact irreducibility testing.

This module is the independent oracle for everything else in the package:
it expands compositions densely and decides irreducibility by Rabin's
criterion (f of degree d is irreducible iff X^(q^d) = X mod f and
gcd(X^(q^(d/t)) - X, f) = 1 for every prime t dividing d).  Nothing here
knows about critical orbits or character tests.

Coefficients are stored ascending with no trailing zeros; the zero
polynomial is the empty tuple.  Prime fields get a numpy fast path for
multiplication and for reduction modulo a fixed modulus, which keeps
Rabin tests on degree-few-hundred iterates in the tens of milliseconds.
"""

from __future__ import annotations

import numpy as np

from .errors import ContextMismatchError, ResourceBudgetError
from .ff import FieldCtx

# Iterates above this dense degree are refused unless the caller raises the cap.
DEFAULT_MAX_ITERATE_DEGREE = 1 << 12

_NUMPY_MIN_LEN = 16


class DensePoly:
    """Immutable dense polynomial over a fixed field."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        cs = [ctx.check(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coeff(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def evaluate(self, x: int) -> int:
        ctx = self.ctx
        ctx.check(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc

    def monic(self) -> "DensePoly":
        if self.is_zero or self.leading_coeff == 1:
            return self
        ctx = self.ctx
        ilc = ctx.inv(self.leading_coeff)
        return DensePoly(ctx, [ctx.mul(c, ilc) for c in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, DensePoly)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __add__(self, other):
        ctx = _common_ctx(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = ctx.add(a[i], c)
        return DensePoly(ctx, a)

    def __sub__(self, other):
        ctx = _common_ctx(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = ctx.sub(a[i], c)
        return DensePoly(ctx, a)

    def __mul__(self, other):
        ctx = _common_ctx(self, other)
        return DensePoly(ctx, _mul_coeffs(ctx, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        ctx = _common_ctx(self, other)
        q, r = _divmod_coeffs(ctx, list(self.coeffs), list(other.coeffs))
        return DensePoly(ctx, q), DensePoly(ctx, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __str__(self):
        if self.is_zero:
            return "0"
        ctx = self.ctx
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = ctx.format_element(c)
            if ctx.k > 1 and "+" in cs:
                cs = f"({cs})"
            terms.append(cs if i == 0 else (f"{cs}*X" if i == 1 else f"{cs}*X^{i}"))
        return " + ".join(terms)

    def __repr__(self):
        return f"DensePoly(F_{self.ctx.q}, {list(self.coeffs)})"


def x_poly(ctx: FieldCtx) -> DensePoly:
    return DensePoly(ctx, [0, 1])


def mul(f: DensePoly, g: DensePoly) -> DensePoly:
    return f * g


def mod(f: DensePoly, g: DensePoly) -> DensePoly:
    return f % g


def gcd(f: DensePoly, g: DensePoly) -> DensePoly:
    """Monic greatest common divisor."""
    ctx = _common_ctx(f, g)
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def powmod(base: DensePoly, e: int, modulus: DensePoly) -> DensePoly:
    """base^e reduced modulo a nonzero modulus; e is an arbitrary nonneg int."""
    ctx = _common_ctx(base, modulus)
    if modulus.is_zero:
        raise ZeroDivisionError("zero modulus")
    if e < 0:
        raise ValueError("negative exponent")
    if modulus.degree == 0:
        return DensePoly(ctx, [])
    red = _Reducer(ctx, modulus.monic().coeffs)
    return DensePoly(ctx, red.pow(base.coeffs, e))


def compose(f: DensePoly, g: DensePoly) -> DensePoly:
    """f(g(X)) by Horner's rule over f's coefficients."""
    ctx = _common_ctx(f, g)
    if f.is_zero:
        return f
    acc = DensePoly(ctx, [f.coeffs[-1]])
    for c in reversed(f.coeffs[:-1]):
        acc = acc * g + DensePoly(ctx, [c])
    return acc


def iterate(f: DensePoly, n: int, max_degree: int = DEFAULT_MAX_ITERATE_DEGREE) -> DensePoly:
    """n-th self-composition; the 0-th is X.  Degree grows like deg(f)^n."""
    if n < 0:
        raise ValueError("iterate count must be >= 0")
    ctx = f.ctx
    if f.degree >= 2 and n > 0 and f.degree**n > max_degree:
        raise ResourceBudgetError(
            f"iterate degree {f.degree}^{n} exceeds the cap {max_degree}"
        )
    acc = x_poly(ctx)
    for _ in range(n):
        acc = compose(f, acc)
    return acc


def is_irreducible(f: DensePoly) -> bool:
    """Rabin's irreducibility test; rejects constants with ValueError."""
    d = f.degree
    if d < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    if d == 1:
        return True
    ctx = f.ctx
    q = ctx.q
    m = f.monic()
    red = _Reducer(ctx, m.coeffs)
    x = (0, 1)
    for t in _prime_factors(d):
        h = DensePoly(ctx, red.pow(x, q ** (d // t)))
        g = gcd(h - x_poly(ctx), m)
        if g.degree != 0:
            return False
    return red.pow(x, q**d) == list(x)


def _common_ctx(f: DensePoly, g: DensePoly) -> FieldCtx:
    if f.ctx != g.ctx:
        raise ContextMismatchError("operands belong to different fields")
    return f.ctx


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _mul_coeffs(ctx: FieldCtx, a, b) -> list[int]:
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if ctx.k == 1:
        p = ctx.p
        if min(la, lb) >= _NUMPY_MIN_LEN and (p - 1) ** 2 * min(la, lb) < (1 << 62):
            out = np.convolve(np.asarray(a, np.int64), np.asarray(b, np.int64)) % p
            return out.tolist()
        out = [0] * (la + lb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return [c % p for c in out]
    fadd, fmul = ctx.add_fn(), ctx.mul_fn()
    out = [0] * (la + lb - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = fadd(out[i + j], fmul(ai, bj))
    return out


def _divmod_coeffs(ctx: FieldCtx, a: list[int], b: list[int]):
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    while a and a[-1] == 0:
        a.pop()
    if len(a) < len(b):
        return [], a
    fsub, fmul = ctx.sub_fn(), ctx.mul_fn()
    ilc = ctx.inv(b[-1])
    quot = [0] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(a) - len(b), -1, -1):
        c = fmul(r[i + len(b) - 1], ilc)
        if c:
            quot[i] = c
            for j, bj in enumerate(b):
                if bj:
                    r[i + j] = fsub(r[i + j], fmul(c, bj))
    while r and r[-1] == 0:
        r.pop()
    return quot, r


class _Reducer:
    """Repeated multiplication modulo a fixed monic polynomial.

    The reduction rows X^(d+i) mod m are precomputed once: prime fields fold
    product tails with an int64 mat-vec, extension fields with a plain
    accumulation over the row lists, so no per-multiply division happens in
    either case.
    """

    def __init__(self, ctx: FieldCtx, mod_coeffs):
        self.ctx = ctx
        self.mod = list(mod_coeffs)
        self.d = len(mod_coeffs) - 1
        p = ctx.p
        self.numpy = (
            ctx.k == 1 and self.d >= 2 and (p - 1) ** 2 * (2 * self.d) < (1 << 62)
        )
        if self.numpy:
            d = self.d
            rows = np.empty((max(d - 1, 1), d), dtype=np.int64)
            rows[0] = [(p - c) % p for c in mod_coeffs[:d]]
            for i in range(1, d - 1):
                prev = rows[i - 1]
                nxt = np.concatenate(([0], prev[: d - 1]))
                if prev[d - 1]:
                    nxt = (nxt + prev[d - 1] * rows[0]) % p
                rows[i] = nxt
            self.rows = rows
        elif self.d >= 2:
            d = self.d
            neg, fadd, fmul = ctx.neg_fn(), ctx.add_fn(), ctx.mul_fn()
            first = [neg(c) for c in self.mod[:d]]
            rows = [first]
            for _ in range(d - 2):
                prev = rows[-1]
                nxt = [0] + prev[: d - 1]
                top = prev[d - 1]
                if top:
                    nxt = [fadd(nxt[j], fmul(top, first[j])) for j in range(d)]
                rows.append(nxt)
            self.grows = rows

    def _reduce_np(self, v: np.ndarray) -> np.ndarray:
        d, p = self.d, self.ctx.p
        if v.size <= d:
            return np.concatenate((v, np.zeros(d - v.size, dtype=np.int64)))
        lo, hi = v[:d], v[d:]
        return (lo + hi @ self.rows[: hi.size]) % p

    def _mulmod_np(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._reduce_np(np.convolve(a, b) % self.ctx.p)

    def _shift_np(self, a: np.ndarray) -> np.ndarray:
        # multiply by X: one shift plus one row of reduction
        d, p = self.d, self.ctx.p
        out = np.concatenate(([0], a[: d - 1]))
        if a[d - 1]:
            out = (out + a[d - 1] * self.rows[0]) % p
        return out

    def pow(self, base_coeffs, e: int) -> list[int]:
        if self.numpy:
            return self._pow_np(base_coeffs, e)
        return self._pow_generic(base_coeffs, e)

    def _pow_np(self, base_coeffs, e: int) -> list[int]:
        d = self.d
        _, bc = _divmod_coeffs(self.ctx, list(base_coeffs), list(self.mod))
        base = np.zeros(d, dtype=np.int64)
        base[: len(bc)] = bc
        if e == 0:
            one = np.zeros(d, dtype=np.int64)
            one[0] = 1
            return _strip(one.tolist())
        base_is_x = d >= 2 and bc == [0, 1]
        acc = None
        for bit in bin(e)[2:]:
            if acc is not None:
                acc = self._mulmod_np(acc, acc)
            if bit == "1":
                if acc is None:
                    acc = base.copy()
                elif base_is_x:
                    acc = self._shift_np(acc)
                else:
                    acc = self._mulmod_np(acc, base)
        return _strip(acc.tolist())

    def _mulmod_generic(self, a: list[int], b: list[int]) -> list[int]:
        prod = _mul_coeffs(self.ctx, a, b)
        d = self.d
        if len(prod) <= d or d < 2:
            if d < 2:
                _, prod = _divmod_coeffs(self.ctx, prod, list(self.mod))
            return prod
        fadd, fmul = self.ctx.add_fn(), self.ctx.mul_fn()
        lo = prod[:d]
        for i, co in enumerate(prod[d:]):
            if co:
                row = self.grows[i]
                for j in range(d):
                    if row[j]:
                        lo[j] = fadd(lo[j], fmul(co, row[j]))
        return _strip(lo)

    def _pow_generic(self, base_coeffs, e: int) -> list[int]:
        ctx = self.ctx
        _, acc_base = _divmod_coeffs(ctx, list(base_coeffs), list(self.mod))
        acc = [1]
        while e:
            if e & 1:
                acc = self._mulmod_generic(acc, acc_base)
            e >>= 1
            if e:
                acc_base = self._mulmod_generic(acc_base, acc_base)
        return acc


def _strip(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs
