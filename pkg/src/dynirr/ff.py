"""Arithmetic in odd finite fields F_q, q = p^k, including the quadratic character.

Elements are canonical integers in [0, q): the base-p encoding
c0 + c1*p + ... + c_{k-1}*p^{k-1} of the coordinate vector over F_p.
For prime fields an element is simply its residue.  The encoding is
unique per element, so equality and hashing are plain integer
operations and elements index directly into per-field lookup tables.

Extension fields reduce modulo a deterministic modulus: the first monic
irreducible degree-k polynomial over F_p in base-p coefficient order.
Two contexts built from the same (p, k) are therefore interchangeable.
"""

from __future__ import annotations

import numpy as np

from .errors import ContextMismatchError, InvalidFieldError, ResourceBudgetError

# Largest q for which an extension field precomputes full add/mul tables.
_TABLE_Q_LIMIT = 1 << 10
# Largest q for which the quadratic-character and square-root tables are built.
_CHAR_TABLE_LIMIT = 1 << 20
# Hard representation limit: every element must fit a machine word.
_MAX_Q = 1 << 32

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for sp in _MR_WITNESSES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldCtx:
    """Immutable context for F_q, q = p^k odd.

    All operations are pure.  The lookup tables are built lazily but
    idempotently (every build yields identical contents), so a context may
    be shared freely between threads and copied to worker processes.
    """

    def __init__(self, p: int, k: int = 1):
        if k < 1:
            raise InvalidFieldError(f"extension degree must be >= 1, got {k}")
        if p == 2:
            raise InvalidFieldError("even characteristic is not supported")
        if not is_prime(p):
            raise InvalidFieldError(f"{p} is not prime")
        q = p**k
        if q > _MAX_Q:
            raise InvalidFieldError(f"q = {p}^{k} exceeds the 2^32 representation limit")
        self.p = p
        self.k = k
        self.q = q
        # Monic degree-k modulus as ascending coefficients over F_p, or None.
        self.modulus: tuple[int, ...] | None = None
        if k > 1:
            self.modulus = _first_irreducible_monic(p, k)
            # rows[i] = coefficients of t^(k+i) reduced mod the modulus
            self._red_rows = _reduction_rows(self.modulus, p)
        self._powers = [p**i for i in range(k)]
        self._mul_t = None  # list-of-rows tables for small extension fields
        self._add_t = None
        self._neg_t = None
        self._inv_t = None
        self._nonsquare_t = None
        self._nonsquare_list = None
        self._sqrt_t = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((FieldCtx, self.p, self.k))

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.q} = F_{self.p}[t]/({self.modulus_str()}))"

    def modulus_str(self) -> str:
        if self.modulus is None:
            return ""
        return _poly_in_t(self.modulus)

    # -- element plumbing ---------------------------------------------------

    def check(self, x: int) -> int:
        """Validate that x is a canonical element of this field."""
        if not isinstance(x, (int, np.integer)) or not 0 <= x < self.q:
            raise ContextMismatchError(f"{x!r} is not a canonical element of F_{self.q}")
        return int(x)

    def coords(self, x: int) -> tuple[int, ...]:
        """Coordinate vector (c0, ..., c_{k-1}) of an element over F_p."""
        self.check(x)
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return tuple(out)

    def from_coords(self, cs) -> int:
        if len(cs) > self.k:
            raise ContextMismatchError(f"too many coordinates for F_{self.q}")
        x = 0
        for i, c in enumerate(cs):
            if not 0 <= c < self.p:
                raise ContextMismatchError(f"coordinate {c} out of range mod {self.p}")
            x += c * self._powers[i]
        return x

    def elements(self) -> range:
        """All q elements in canonical order (0 first, 1 second)."""
        return range(self.q)

    # -- core arithmetic ----------------------------------------------------

    def add(self, x: int, y: int) -> int:
        self.check(x)
        self.check(y)
        if self.k == 1:
            return (x + y) % self.p
        if self._add_t is not None or self._ensure_tables():
            return self._add_t[x][y]
        return self._encode([(a + b) % self.p for a, b in zip(self._digits(x), self._digits(y))])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def neg(self, x: int) -> int:
        self.check(x)
        if self.k == 1:
            return (self.p - x) % self.p
        if self._neg_t is not None or self._ensure_tables():
            return self._neg_t[x]
        return self._encode([(self.p - c) % self.p for c in self._digits(x)])

    def mul(self, x: int, y: int) -> int:
        self.check(x)
        self.check(y)
        if self.k == 1:
            return x * y % self.p
        if self._mul_t is not None or self._ensure_tables():
            return self._mul_t[x][y]
        return self._encode(self._mulmod_digits(self._digits(x), self._digits(y)))

    def inv(self, x: int) -> int:
        self.check(x)
        if x == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.q}")
        if self.k == 1:
            return pow(x, self.p - 2, self.p)
        if self._inv_t is not None or self._ensure_tables():
            return self._inv_t[x]
        return self.pow(x, self.q - 2)

    # Unchecked closures for inner loops.  Safety is retained for the table
    # paths (bad operands raise IndexError); callers are internal hot paths
    # that already validated their inputs.

    def add_fn(self):
        if self.k == 1:
            p = self.p
            return lambda x, y: (x + y) % p
        if self._add_t is not None or self._ensure_tables():
            t = self._add_t
            return lambda x, y: t[x][y]
        return self.add

    def sub_fn(self):
        if self.k == 1:
            p = self.p
            return lambda x, y: (x - y) % p
        if self._add_t is not None or self._ensure_tables():
            t, n = self._add_t, self._neg_t
            return lambda x, y: t[x][n[y]]
        return self.sub

    def mul_fn(self):
        if self.k == 1:
            p = self.p
            return lambda x, y: x * y % p
        if self._mul_t is not None or self._ensure_tables():
            t = self._mul_t
            return lambda x, y: t[x][y]
        return self.mul

    def neg_fn(self):
        if self.k == 1:
            p = self.p
            return lambda x: (p - x) % p
        if self._neg_t is not None or self._ensure_tables():
            t = self._neg_t
            return lambda x: t[x]
        return self.neg

    def pow(self, x: int, e: int) -> int:
        """Square-and-multiply; e >= 0, with x^0 = 1."""
        self.check(x)
        if e < 0:
            raise ValueError("negative exponent; use inv() first")
        if self.k == 1:
            return pow(x, e, self.p)
        acc = 1
        base = x
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return acc

    # -- quadratic character ------------------------------------------------

    def is_nonsquare(self, x: int) -> bool:
        """True iff x^((q-1)/2) = -1, i.e. x lies outside S_q (note 0 is a square)."""
        self.check(x)
        if self.q <= _CHAR_TABLE_LIMIT:
            return bool(self.nonsquare_table()[x])
        return self.pow(x, (self.q - 1) // 2) == self.neg(1)

    def nonsquare_fn(self):
        """Fast membership test for N_q: a table lookup at desk scale, a
        (q-1)/2 power beyond the table limit."""
        if self.q <= _CHAR_TABLE_LIMIT:
            if self._nonsquare_list is None:
                self._nonsquare_list = self.nonsquare_table().tolist()
            table = self._nonsquare_list
            return lambda x: table[x]
        if self.k == 1:
            p, e = self.p, (self.p - 1) // 2
            return lambda x: pow(x, e, p) == p - 1
        e, m1 = (self.q - 1) // 2, self.neg(1)
        return lambda x: self.pow(x, e) == m1

    def nonsquare_table(self) -> np.ndarray:
        """Boolean table over all q elements; built once by marking squares."""
        if self._nonsquare_t is None:
            if self.q > _CHAR_TABLE_LIMIT:
                raise ResourceBudgetError(f"character table disabled for q = {self.q}")
            ns = np.ones(self.q, dtype=bool)
            if self.k == 1:
                xs = np.arange(self.q, dtype=np.int64)
                ns[(xs * xs) % self.p] = False
            else:
                for x in range(self.q):
                    ns[self.mul(x, x)] = False
            self._nonsquare_t = ns
        return self._nonsquare_t

    def sqrt(self, x: int) -> int | None:
        """A square root of x, or None; the smaller root is returned."""
        self.check(x)
        t = self._sqrt_table()
        r = int(t[x])
        return None if r < 0 else r

    def _sqrt_table(self) -> np.ndarray:
        if self._sqrt_t is None:
            if self.q > _CHAR_TABLE_LIMIT:
                raise ResourceBudgetError(f"sqrt table disabled for q = {self.q}")
            t = np.full(self.q, -1, dtype=np.int64)
            # descending scan leaves the smallest root in place
            for x in range(self.q - 1, -1, -1):
                t[self.mul(x, x)] = x
            self._sqrt_t = t
        return self._sqrt_t

    # -- extension-field internals -------------------------------------------

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def _encode(self, digits) -> int:
        x = 0
        for i, c in enumerate(digits):
            x += c * self._powers[i]
        return x

    def _mulmod_digits(self, xs, ys) -> list[int]:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(xs):
            if a:
                for j, b in enumerate(ys):
                    prod[i + j] += a * b
        out = prod[:k]
        for i in range(k, 2 * k - 1):
            co = prod[i] % p
            if co:
                row = self._red_rows[i - k]
                for j in range(k):
                    out[j] += co * row[j]
        return [c % p for c in out]

    def _ensure_tables(self) -> bool:
        """Build full add/mul/neg/inv tables for small extension fields."""
        if self.q > _TABLE_Q_LIMIT or self.k == 1:
            return False
        q = self.q
        digits = [self._digits(x) for x in range(q)]
        add_t = [[0] * q for _ in range(q)]
        mul_t = [[0] * q for _ in range(q)]
        for x in range(q):
            dx = digits[x]
            for y in range(x, q):
                s = self._encode([(a + b) % self.p for a, b in zip(dx, digits[y])])
                m = self._encode(self._mulmod_digits(dx, digits[y]))
                add_t[x][y] = add_t[y][x] = s
                mul_t[x][y] = mul_t[y][x] = m
        self._add_t = add_t
        self._mul_t = mul_t
        self._neg_t = [
            self._encode([(self.p - c) % self.p for c in digits[x]]) for x in range(q)
        ]
        inv_t = [0] * q
        for x in range(1, q):
            if inv_t[x]:
                continue
            y = self.pow(x, q - 2)
            inv_t[x] = y
            inv_t[y] = x
        self._inv_t = inv_t
        return True

    # -- serialization --------------------------------------------------------

    def format_element(self, x: int) -> str:
        """Canonical text form: "c0" for prime fields, "c0+c1*t+..." otherwise."""
        self.check(x)
        if self.k == 1:
            return str(x)
        cs = self.coords(x)
        terms = [str(cs[0])]
        for i in range(1, self.k):
            terms.append(f"{cs[i]}*t" if i == 1 else f"{cs[i]}*t^{i}")
        return "+".join(terms)

    def parse_element(self, s: str) -> int:
        """Parse the canonical form; sparse forms like "t^2+1" are accepted too."""
        s = s.replace(" ", "")
        if not s:
            raise ValueError("empty element string")
        cs = [0] * self.k
        for term in s.split("+"):
            if "t" not in term:
                c, i = int(term), 0
            else:
                head, _, tail = term.partition("t")
                c = int(head[:-1]) if head.endswith("*") else (int(head) if head else 1)
                i = int(tail[1:]) if tail.startswith("^") else (1 if not tail else int(tail))
            if not 0 <= i < self.k:
                raise ValueError(f"term degree {i} out of range for F_{self.q}")
            cs[i] = (cs[i] + c) % self.p
        return self.from_coords(cs)


def parse_field(spec: str) -> FieldCtx:
    """Build a context from a CLI field spec "p" or "p^k"."""
    spec = spec.strip()
    try:
        if "^" in spec:
            ps, ks = spec.split("^", 1)
            return FieldCtx(int(ps), int(ks))
        return FieldCtx(int(spec))
    except ValueError as exc:
        if isinstance(exc, InvalidFieldError):
            raise
        raise InvalidFieldError(f"cannot parse field spec {spec!r}") from exc


def _first_irreducible_monic(p: int, k: int) -> tuple[int, ...]:
    # Deterministic: lowest base-p encoding of the non-leading coefficients wins.
    from . import poly as _poly

    base = FieldCtx(p)
    for enc in range(p**k):
        coeffs = []
        e = enc
        for _ in range(k):
            e, r = divmod(e, p)
            coeffs.append(r)
        coeffs.append(1)
        if _poly.is_irreducible(_poly.DensePoly(base, coeffs)):
            return tuple(coeffs)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _reduction_rows(modulus: tuple[int, ...], p: int) -> list[list[int]]:
    k = len(modulus) - 1
    row = [(p - c) % p for c in modulus[:k]]  # t^k mod modulus
    rows = [row]
    for _ in range(k - 2):
        prev = rows[-1]
        top = prev[k - 1]
        nxt = [0] + prev[: k - 1]
        if top:
            nxt = [(nxt[j] + top * rows[0][j]) % p for j in range(k)]
        rows.append(nxt)
    return rows


def _poly_in_t(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("t" if c == 1 else f"{c}*t")
        else:
            terms.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
    return "+".join(terms) if terms else "0"
