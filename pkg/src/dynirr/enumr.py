"""Enumeration and exact counting of dynamically irreducible r-sets.

Three constructions cover the candidate space:

  part 1: scalar-multiple sets {f, lam_2 f, ..., lam_r f} seeded by each
          dynamically irreducible quadratic f;
  part 2: fixed-critical-point families a_i(X-b)^2 + b with a common b,
          admissible exactly when -1 is a square and every a_i*b is a
          nonsquare (empty stream otherwise);
  part 3: for every non-proportional pair (f1, f2) not of the common
          fixed-point form, remaining members are reconstructed from the
          pairwise nonsquare filter: normalized images of two composition
          values delta_1 != delta_2 and of one second-level value must all
          land in the filter set, which pins (b/a, c/a) by a 2x2 linear
          solve and a by a quadratic.

Every candidate set is confirmed by the exact set test before it is
emitted, and the three streams are deduplicated through the canonical
sorted (a, b, c) serialization.  brute_force_sets is the independent
ground truth at desk scale: it filters all r-subsets of irreducible
quadratics and cross-examines each verdict against dense factorization
of composition words.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product

from . import poly
from .census import census_monic
from .errors import DynirrError, ResourceBudgetError
from .ff import FieldCtx
from .multiset import di_set_test, gamma_set, proportional
from .orbit import AlgorithmParams
from .quad import QuadPoly, quad_new, scale

logger = logging.getLogger(__name__)

DEFAULT_OP_BUDGET = 10**9


class OracleDisagreementError(DynirrError):
    """The character machinery and the dense factorization oracle disagree."""


@dataclass
class REnumResult:
    q: int
    r: int
    count_total: int
    counts_per_part: tuple[int, int, int]
    overlaps: int
    set_list: list[tuple[QuadPoly, ...]] | None = None
    telemetry: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "count_total": self.count_total,
            "counts_per_part": list(self.counts_per_part),
            "overlaps": self.overlaps,
            "telemetry": self.telemetry,
        }


class _OpBudget:
    """Live cap on character-test work; raising preserves partial telemetry."""

    def __init__(self, limit: int | None):
        self.limit = limit if limit is not None else DEFAULT_OP_BUDGET
        self.used = 0
        self.partial: dict = {}

    def charge(self, n: int) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceBudgetError(
                f"operation budget {self.limit} exhausted", partial=dict(self.partial)
            )


def canonical_set(polys) -> tuple[QuadPoly, ...]:
    return tuple(sorted(polys, key=lambda f: f.key()))


def set_key(polys) -> tuple[tuple[int, int, int], ...]:
    return tuple(f.key() for f in canonical_set(polys))


def format_set(polys) -> str:
    from .quad import format_quad

    return ";".join(format_quad(f) for f in canonical_set(polys))


def all_di_polys(ctx: FieldCtx, jobs: int = 1) -> list[QuadPoly]:
    """All dynamically irreducible quadratics, canonically sorted."""
    res = census_monic(ctx, AlgorithmParams(), want_list=True, jobs=jobs)
    out = [scale(g, u) for g in res.monic_list for u in range(1, ctx.q)]
    return sorted(out, key=lambda f: f.key())


def scalar_multiple(ctx: FieldCtx, lam: int, f: QuadPoly) -> QuadPoly:
    return quad_new(ctx, ctx.mul(lam, f.a), ctx.mul(lam, f.b), ctx.mul(lam, f.c))


def enum_part1(ctx: FieldCtx, r: int, di_polys=None, budget: _OpBudget | None = None):
    """Sets of pairwise-proportional quadratics seeded by each DI polynomial."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if di_polys is None:
        di_polys = all_di_polys(ctx)
    budget = budget or _OpBudget(None)
    scalars = [u for u in range(2, ctx.q)]  # F_q^* minus the unit scalar
    seen = set()
    for f1 in di_polys:
        for lams in combinations(scalars, r - 1):
            members = [f1] + [scalar_multiple(ctx, lam, f1) for lam in lams]
            key = set_key(members)
            if key in seen:
                continue
            verdict = di_set_test(members)
            budget.charge(verdict.tests_performed)
            if verdict.is_di:
                seen.add(key)
                yield canonical_set(members)


def fixed_point_quad(ctx: FieldCtx, a: int, b: int) -> QuadPoly:
    """a*(X-b)^2 + b: the critical point b is a fixed point."""
    mb = ctx.mul(a, b)
    return quad_new(
        ctx,
        a,
        ctx.neg(ctx.add(mb, mb)),
        ctx.add(ctx.mul(mb, b), b),
    )


def enum_part2(ctx: FieldCtx, r: int, budget: _OpBudget | None = None):
    """Common fixed-critical-point families; empty unless -1 is a square."""
    if r < 2:
        raise ValueError("r must be >= 2")
    budget = budget or _OpBudget(None)
    if ctx.is_nonsquare(ctx.neg(1)):
        return
    ns = ctx.nonsquare_table()
    for b in range(1, ctx.q):
        admissible = [a for a in range(1, ctx.q) if ns[ctx.mul(a, b)]]
        for combo in combinations(admissible, r):
            members = [fixed_point_quad(ctx, a, b) for a in combo]
            verdict = di_set_test(members)  # audit; the criterion says DI
            budget.charge(verdict.tests_performed)
            if verdict.is_di:
                yield canonical_set(members)
            else:
                logger.error(
                    "fixed-point family unexpectedly rejected at q=%d b=%d: %s",
                    ctx.q,
                    b,
                    verdict.verdict,
                )


def _is_common_fixed_point_pair(f1: QuadPoly, f2: QuadPoly) -> bool:
    b = f1.gamma
    return f2.gamma == b and f1.eval(b) == b and f2.eval(b) == b


def _first_two_values(f1: QuadPoly, f2: QuadPoly) -> list[int]:
    """First two distinct composition values (depth >= 0) from gamma_1 then gamma_2."""
    from collections import deque

    seen: list[int] = []
    seenset: set[int] = set()
    queue = deque((f1.gamma, f2.gamma))
    while queue and len(seen) < 2:
        v = queue.popleft()
        if v in seenset:
            continue
        seenset.add(v)
        seen.append(v)
        queue.append(f1.eval(v))
        queue.append(f2.eval(v))
    return seen[:2]


def _linear_system(ctx: FieldCtx, d1: int, d2: int, a1: int, a2: int) -> tuple[int, int]:
    """Solve d_t^2 + B*d_t + C = a_t (t = 1, 2) for (B, C); needs d1 != d2."""
    det = ctx.sub(d1, d2)
    rhs = ctx.sub(ctx.sub(a1, a2), ctx.sub(ctx.mul(d1, d1), ctx.mul(d2, d2)))
    bb = ctx.mul(rhs, ctx.inv(det))
    cc = ctx.sub(a1, ctx.add(ctx.mul(d1, d1), ctx.mul(bb, d1)))
    return bb, cc


def _quad_roots(ctx: FieldCtx, a2: int, a1: int, a0: int) -> list[int]:
    """Roots of a2*x^2 + a1*x + a0 over F_q (a2 != 0), ascending."""
    four = ctx.from_coords([4 % ctx.p])
    disc = ctx.sub(ctx.mul(a1, a1), ctx.mul(four, ctx.mul(a2, a0)))
    root = ctx.sqrt(disc)
    if root is None:
        return []
    inv2a = ctx.inv(ctx.mul(2, a2))
    xs = {ctx.mul(ctx.sub(root, a1), inv2a), ctx.mul(ctx.sub(ctx.neg(root), a1), inv2a)}
    return sorted(xs)


def _lead_solutions(ctx: FieldCtx, alpha1: int, alpha3: int, bb: int, cc: int) -> list[int]:
    """Nonzero a with (a*alpha1)^2 + B*(a*alpha1) + C = alpha3.

    At alpha1 = 0 the equation degenerates to the a-free constraint
    C = alpha3; any polynomial meeting it vanishes at delta_1 and is
    reducible, so no usable leading coefficient exists.
    """
    if alpha1 == 0:
        return []
    return [
        a
        for a in _quad_roots(
            ctx, ctx.mul(alpha1, alpha1), ctx.mul(bb, alpha1), ctx.sub(cc, alpha3)
        )
        if a != 0
    ]


def _pool_candidates(
    ctx: FieldCtx, f1: QuadPoly, f2: QuadPoly, gamma_depth: int | None, budget: _OpBudget
) -> list[QuadPoly]:
    """Candidate extra members for a seed pair, from the nonsquare filter set."""
    deltas = _first_two_values(f1, f2)
    if len(deltas) < 2:
        deltas = _first_two_values(f2, f1)
    if len(deltas) < 2:
        logger.info("degenerate composition-value set for pair; skipped")
        return []
    d1, d2 = deltas
    report = gamma_set(f1, f2, gamma_depth)
    gset = [g for g in report.gamma_set if g != 0]
    budget.charge(ctx.q * (2 ** (report.depth + 1)))
    from .quad import is_irreducible_quad

    out: dict[tuple[int, int, int], QuadPoly] = {}
    excluded = {f1.key(), f2.key()}
    for alpha1, alpha2, alpha3 in product(gset, gset, gset):
        bb, cc = _linear_system(ctx, d1, d2, alpha1, alpha2)
        for a in _lead_solutions(ctx, alpha1, alpha3, bb, cc):
            cand = quad_new(ctx, a, ctx.mul(a, bb), ctx.mul(a, cc))
            key = cand.key()
            if key in out or key in excluded:
                continue
            if is_irreducible_quad(cand):
                out[key] = cand
    return [out[k] for k in sorted(out)]


def enum_part3(
    ctx: FieldCtx,
    r: int,
    di_polys=None,
    gamma_depth: int | None = None,
    budget: _OpBudget | None = None,
):
    """Sets built around a non-proportional, non-fixed-point-form seed pair."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if di_polys is None:
        di_polys = all_di_polys(ctx)
    budget = budget or _OpBudget(None)
    seen = set()
    for i, j in combinations(range(len(di_polys)), 2):
        f1, f2 = di_polys[i], di_polys[j]
        if proportional(f1, f2) is not None:
            continue
        if _is_common_fixed_point_pair(f1, f2):
            continue
        if r == 2:
            verdict = di_set_test([f1, f2])
            budget.charge(verdict.tests_performed)
            if verdict.is_di:
                key = set_key([f1, f2])
                if key not in seen:
                    seen.add(key)
                    yield canonical_set([f1, f2])
            continue
        pool = _pool_candidates(ctx, f1, f2, gamma_depth, budget)
        for extra in combinations(pool, r - 2):
            members = [f1, f2, *extra]
            key = set_key(members)
            if key in seen:
                continue
            verdict = di_set_test(members)
            budget.charge(verdict.tests_performed)
            if verdict.is_di:
                seen.add(key)
                yield canonical_set(members)


def enum_all(
    ctx: FieldCtx,
    r: int,
    *,
    emit=None,
    budget: int | None = None,
    oracle_check: bool = False,
    gamma_depth: int | None = None,
    jobs: int = 1,
) -> REnumResult:
    """Deduplicated union of the three constructions, audited on emission."""
    if r < 2:
        raise ValueError("r must be >= 2")
    op_budget = _OpBudget(budget)
    di_polys = all_di_polys(ctx, jobs=jobs)
    op_budget.partial["di_count"] = len(di_polys)

    union: dict[tuple, tuple[QuadPoly, ...]] = {}
    membership: dict[tuple, set[int]] = {}
    counts = [0, 0, 0]
    streams = (
        enum_part1(ctx, r, di_polys, op_budget),
        enum_part2(ctx, r, op_budget),
        enum_part3(ctx, r, di_polys, gamma_depth, op_budget),
    )
    for part, stream in enumerate(streams):
        for members in stream:
            key = set_key(members)
            counts[part] += 1
            union.setdefault(key, members)
            membership.setdefault(key, set()).add(part)
        op_budget.partial[f"part{part + 1}"] = counts[part]

    ordered = [union[k] for k in sorted(union)]
    for members in ordered:
        verdict = di_set_test(list(members))  # emission audit
        op_budget.charge(verdict.tests_performed)
        if not verdict.is_di:
            raise OracleDisagreementError(
                f"emitted set fails the exact test: {format_set(members)}"
            )
        if oracle_check:
            _dense_audit(list(members), max_word_len=4)
        if emit is not None:
            emit(members)

    overlaps = sum(1 for parts in membership.values() if len(parts) > 1)
    dup_excess = sum(len(parts) - 1 for parts in membership.values())
    telemetry = {
        "ops_used": op_budget.used,
        "di_count": len(di_polys),
        "dup_excess": dup_excess,
        "count_reference": ctx.q ** (1.5 * r + 2),
    }
    return REnumResult(
        q=ctx.q,
        r=r,
        count_total=len(union),
        counts_per_part=tuple(counts),
        overlaps=overlaps,
        set_list=ordered,
        telemetry=telemetry,
    )


def dense_word_expansion(polys: list[QuadPoly], word) -> poly.DensePoly:
    """Dense expansion of f_{word[0]} o ... o f_{word[-1]} (oracle side)."""
    g = polys[word[-1]].dense()
    for idx in reversed(word[:-1]):
        g = poly.compose(polys[idx].dense(), g)
    return g


def _dense_audit(members: list[QuadPoly], max_word_len: int) -> None:
    r = len(members)
    for n in range(1, max_word_len + 1):
        for word in product(range(r), repeat=n):
            if not poly.is_irreducible(dense_word_expansion(members, word)):
                raise OracleDisagreementError(
                    f"word {word} of emitted set {format_set(members)} is reducible"
                )


def brute_force_sets(ctx: FieldCtx, r: int, max_word_len: int) -> list[tuple[QuadPoly, ...]]:
    """Ground-truth r-set enumeration over all irreducible quadratics.

    Every subset runs the exact set test; each verdict is then cross-examined
    against the dense factorization oracle: kept sets must expand every word
    up to max_word_len irreducibly, rejected sets must replay their failure
    witness to a reducible expansion when the word fits the length budget.
    Disagreements are hard errors.
    """
    from .quad import is_irreducible_quad

    q = ctx.q
    universe = [
        quad_new(ctx, a, b, c)
        for a in range(1, q)
        for b in range(q)
        for c in range(q)
        if is_irreducible_quad(quad_new(ctx, a, b, c))
    ]
    universe.sort(key=lambda f: f.key())
    n_combos = 1
    for i in range(r):
        n_combos = n_combos * (len(universe) - i) // (i + 1)
    if n_combos > 2 * 10**6:
        raise ResourceBudgetError(
            f"{n_combos} candidate {r}-subsets is beyond brute-force scale"
        )
    kept = []
    for combo in combinations(universe, r):
        members = list(combo)
        verdict = di_set_test(members)
        if verdict.is_di:
            _dense_audit(members, max_word_len)
            kept.append(canonical_set(members))
        elif verdict.verdict == "fails" and len(verdict.word) <= max_word_len:
            if poly.is_irreducible(dense_word_expansion(members, verdict.word)):
                raise OracleDisagreementError(
                    f"failure word {verdict.word} of {format_set(members)} "
                    "expands to an irreducible polynomial"
                )
        # precondition-failed members are reducible quadratics by construction
        # of the universe, so they cannot occur here
    return kept
