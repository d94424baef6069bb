"""Dynamical irreducibility of sets of quadratics, by composition-value closure.

A set {f_1, ..., f_r} of irreducible quadratics is dynamically irreducible
iff every composition word, evaluated at the critical point of its innermost
polynomial, yields a nonsquare after the right normalization: words of
length 1 carry the factor -a_j (with the sign; this is exactly quadratic
irreducibility of the member), longer words reduce to the factor a_{i1} of
the outermost index modulo squares.  Because the test of a word depends only
on its outermost index and its evaluation, the infinitely many words
collapse to a finite closure over at most q composition values, walked here
with parent pointers so any failure replays to a concrete witness word.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

from . import poly
from .errors import ProportionalPairError, ResourceBudgetError
from .orbit import orbit_reference_cap
from .quad import QuadPoly, Word, is_irreducible_quad

logger = logging.getLogger(__name__)


def default_gamma_depth(q: int) -> int:
    """Composition depth for the pairwise nonsquare filter: O(sqrt(log log q))."""
    return math.ceil(math.sqrt(2.0 * math.log(math.log(q)) / math.log(2.0))) + 2


@dataclass
class SetVerdict:
    """Outcome of the r-set test.

    On "fails", replaying the word (outermost index first) from the critical
    point of polys[gamma_index] reproduces value, and the signed character
    test on it (factor -a for length-1 words, a otherwise) yields a square.
    """

    verdict: str  # "DI" | "fails" | "precondition-failed"
    word: Word | None = None
    gamma_index: int | None = None
    value: int | None = None
    failed_index: int | None = None
    values_visited: int = 0
    tests_performed: int = 0

    @property
    def is_di(self) -> bool:
        return self.verdict == "DI"

    def to_json(self, ctx=None) -> dict:
        fmt = ctx.format_element if ctx is not None else str
        out = {"verdict": self.verdict}
        if self.verdict == "fails":
            out["word"] = list(self.word)
            out["gamma_index"] = self.gamma_index
            out["value"] = fmt(self.value)
        elif self.verdict == "precondition-failed":
            out["failed_index"] = self.failed_index
        out["values_visited"] = self.values_visited
        out["tests_performed"] = self.tests_performed
        return out


@dataclass
class GammaReport:
    """All gamma passing the unsigned depth-<=K composition filter for a pair."""

    gamma_set: list[int]
    depth: int
    sizes_per_depth: list[int]
    telemetry: dict = field(default_factory=dict)

    def to_json(self, ctx=None) -> dict:
        fmt = ctx.format_element if ctx is not None else str
        return {
            "gamma_set": [fmt(g) for g in self.gamma_set],
            "depth": self.depth,
            "sizes_per_depth": self.sizes_per_depth,
            "telemetry": self.telemetry,
        }


def di_set_test(polys: list[QuadPoly]) -> SetVerdict:
    """Exact dynamical-irreducibility test for a set of distinct quadratics.

    The closure pools composition values across all seeds (the deep test
    depends only on the outermost index and the value, not on which critical
    point the word started from), which changes nothing about the verdict
    but avoids repeated work.
    """
    if not polys:
        raise ValueError("at least one polynomial is required")
    ctx = polys[0].ctx
    keys = {f.key() for f in polys}
    if len(keys) != len(polys):
        raise ValueError("duplicate polynomials in set")
    for f in polys:
        if f.ctx != ctx:
            raise ValueError("polynomials from different fields")
    tests = 0
    for i, f in enumerate(polys):
        tests += 1
        if not is_irreducible_quad(f):
            return SetVerdict("precondition-failed", failed_index=i, tests_performed=tests)

    ns = ctx.nonsquare_fn()
    r = len(polys)
    avals = [f.a for f in polys]
    evals = [f.eval_fn() for f in polys]
    mul = ctx.mul_fn()

    # value -> (outermost index applied, parent value or None, seed gamma index)
    derivation: dict[int, tuple[int, int | None, int]] = {}
    queue: deque[int] = deque()

    def witness_word(j: int, source: int | None) -> Word:
        word = [j]
        cur = source
        while cur is not None:
            jj, parent, _ = derivation[cur]
            word.append(jj)
            cur = parent
        return tuple(word)

    # Length-1 words: f_j at its own critical point.  Their signed test
    # -a_j * f_j(gamma_j) is the irreducibility precondition above, so they
    # only seed the closure here.
    for j in range(r):
        w = evals[j](polys[j].gamma)
        if w not in derivation:
            derivation[w] = (j, None, j)
            queue.append(w)

    # depth >= 2: fixpoint over composition values, one test per (index, value)
    tested_pairs: set[tuple[int, int]] = set()
    while queue:
        v = queue.popleft()
        gi = derivation[v][2]
        for j in range(r):
            w = evals[j](v)
            if (j, w) in tested_pairs:
                continue
            tests += 1
            if not ns(mul(avals[j], w)):
                return SetVerdict(
                    "fails",
                    word=witness_word(j, v),
                    gamma_index=gi,
                    value=w,
                    values_visited=len(derivation),
                    tests_performed=tests,
                )
            tested_pairs.add((j, w))
            if w not in derivation:
                derivation[w] = (j, v, gi)
                queue.append(w)

    visited = len(derivation)
    cap = orbit_reference_cap(ctx.q)
    if visited > cap:
        logger.warning(
            "closure visited %d values, above the q^(3/4) reference %d at q=%d",
            visited,
            cap,
            ctx.q,
        )
    return SetVerdict("DI", values_visited=visited, tests_performed=tests)


def signed_witness_check(polys: list[QuadPoly], verdict: SetVerdict) -> bool:
    """Replay a failure witness: value reproduced and signed test square."""
    from .quad import compose_eval

    if verdict.verdict != "fails":
        raise ValueError("verdict carries no witness word")
    ctx = polys[0].ctx
    g = polys[verdict.gamma_index].gamma
    value = compose_eval(polys, verdict.word, g)
    if value != verdict.value:
        return False
    a = polys[verdict.word[0]].a
    factor = ctx.neg(a) if len(verdict.word) == 1 else a
    return not ctx.is_nonsquare(ctx.mul(factor, value))


def proportional(f: QuadPoly, g: QuadPoly) -> int | None:
    """The scalar lam with f = lam*g (coefficientwise), or None."""
    ctx = f.ctx
    if g.ctx != ctx:
        raise ValueError("polynomials from different fields")
    lam = ctx.mul(f.a, ctx.inv(g.a))
    if f.b == ctx.mul(lam, g.b) and f.c == ctx.mul(lam, g.c):
        return lam
    return None


def gamma_set(f1: QuadPoly, f2: QuadPoly, depth: int | None = None) -> GammaReport:
    """All gamma whose depth-1..K composition values pass the unsigned filter.

    This is the literal pairwise filter (uniform leading-coefficient factor,
    no extra sign at depth 1), walked per gamma as a depth-K binary tree of
    values with early abort.  It is deliberately distinct from the signed
    depth-1 rule of di_set_test; the enumeration consumes it as defined here.
    """
    ctx = f1.ctx
    if proportional(f1, f2) is not None:
        raise ProportionalPairError("gamma filter requires a non-proportional pair")
    q = ctx.q
    k = depth if depth is not None else default_gamma_depth(q)
    if k < 1:
        raise ValueError("depth must be >= 1")
    ns = ctx.nonsquare_fn()
    mul = ctx.mul_fn()
    pair_eval = (f1.eval_fn(), f2.eval_fn())
    afac = (f1.a, f2.a)

    survived = [0] * q
    for x in range(q):
        level = (x,)
        d = 0
        while d < k:
            nxt = []
            ok = True
            for v in level:
                for j in (0, 1):
                    w = pair_eval[j](v)
                    if not ns(mul(afac[j], w)):
                        ok = False
                        break
                    nxt.append(w)
                if not ok:
                    break
            if not ok:
                break
            d += 1
            level = tuple(nxt)
        survived[x] = d

    gamma = [x for x in range(q) if survived[x] == k]
    sizes = [sum(1 for s in survived if s >= d) for d in range(1, k + 1)]
    bound = math.sqrt(q) * math.log(q) ** 2
    telemetry = {"gamma_size": len(gamma), "sqrt_q_log2_reference": bound}
    if len(gamma) > bound:
        logger.warning(
            "gamma set size %d above sqrt(q)*(log q)^2 = %.1f at q=%d",
            len(gamma),
            bound,
            q,
        )
    return GammaReport(gamma, k, sizes, telemetry)


def monic_word_uniqueness_check(g1: QuadPoly, g2: QuadPoly, max_len: int) -> bool:
    """Expand every word over two distinct monic quadratics up to max_len and
    verify all expansions are pairwise distinct.

    Words of different lengths differ by degree, so only same-length
    collisions are possible; those are checked densely per level.
    """
    if not (g1.is_monic and g2.is_monic):
        raise ValueError("both polynomials must be monic")
    if g1.key() == g2.key():
        raise ValueError("polynomials must be distinct")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if 2**max_len > poly.DEFAULT_MAX_ITERATE_DEGREE:
        raise ResourceBudgetError(f"2^{max_len} exceeds the dense degree cap")
    dense = (g1.dense(), g2.dense())
    level = {(0,): dense[0], (1,): dense[1]}
    for length in range(1, max_len + 1):
        seen: dict[tuple, Word] = {}
        for word, f in level.items():
            key = f.coeffs
            if key in seen:
                return False
            seen[key] = word
        if length == max_len:
            break
        level = {
            (j,) + word: poly.compose(dense[j], f)
            for word, f in level.items()
            for j in (0, 1)
        }
    return True
