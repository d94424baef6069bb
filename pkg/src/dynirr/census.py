"""Exact census of dynamically irreducible quadratics over F_q.

Two stages over the q^2 monic candidates: a depth-K character filter on the
first K adjusted-orbit elements (performance only; the counts do not depend
on K), then the exact cycle-detection walk on the survivors.  The count of
all quadratics follows from the monic one by the scaling correspondence,
DI_q = (q-1) * DI_q*, and the full set is streamed as scalings of the monic
list rather than stored.

Stage 1 shards the b-coordinate: the grid is embarrassingly parallel and the
merge is a sum plus an order-preserving concatenation, so results are
identical for any worker count.  Prime fields run stage 1 as vectorized
numpy passes over coefficient blocks.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ff import FieldCtx
from .orbit import AlgorithmParams, di_test_char, orbit_reference_cap
from .quad import QuadPoly, quad_new, scale

logger = logging.getLogger(__name__)

_BLOCK_CELLS = 1 << 22  # stage-1 numpy block size in grid cells


@dataclass
class CensusResult:
    q: int
    di_star: int
    di: int
    stage1_survivors: int
    k_depth: int
    monic_list: list[QuadPoly] | None = None
    wall_times: dict = field(default_factory=dict)
    telemetry: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "di_star": self.di_star,
            "di": self.di,
            "stage1_survivors": self.stage1_survivors,
            "k_depth": self.k_depth,
            "telemetry": self.telemetry,
        }
        return out


def census_monic(
    ctx: FieldCtx,
    params: AlgorithmParams | None = None,
    *,
    want_list: bool = False,
    jobs: int = 1,
) -> CensusResult:
    """Exact DI_q* (and DI_q by the scaling identity) over all monic quadratics."""
    params = params or AlgorithmParams()
    k_depth = params.depth_for(ctx.q)
    q = ctx.q
    t0 = time.perf_counter()
    shards = _shards(q, jobs)
    if jobs > 1 and len(shards) > 1:
        args = [(ctx.p, ctx.k, k_depth, lo, hi) for lo, hi in shards]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_census_shard, args))
    else:
        parts = [_census_shard((ctx.p, ctx.k, k_depth, lo, hi)) for lo, hi in shards]
    survivors = sum(p[0] for p in parts)
    di_pairs = [bc for p in parts for bc in p[1]]
    max_orbit = max((p[2] for p in parts), default=0)
    max_walk = max((p[3] for p in parts), default=0)
    t1 = sum(p[4] for p in parts)
    t2 = sum(p[5] for p in parts)
    total = time.perf_counter() - t0

    di_star = len(di_pairs)
    result = CensusResult(
        q=q,
        di_star=di_star,
        di=(q - 1) * di_star,
        stage1_survivors=survivors,
        k_depth=k_depth,
        monic_list=[quad_new(ctx, 1, b, c) for b, c in di_pairs] if want_list else None,
        wall_times={"stage1": t1, "stage2": t2, "total": total},
        telemetry={
            "survivor_ratio": survivors / (q**1.5 * math.log(q)),
            "max_orbit": max_orbit,
            "max_stage2_walk": max_walk,
            "orbit_reference": orbit_reference_cap(q),
        },
    )
    if max_orbit > orbit_reference_cap(q):
        logger.warning(
            "max DI orbit %d above q^(3/4) reference %d at q=%d",
            max_orbit,
            orbit_reference_cap(q),
            q,
        )
    return result


def census_full(
    ctx: FieldCtx,
    params: AlgorithmParams | None = None,
    *,
    emit=None,
    jobs: int = 1,
) -> CensusResult:
    """Stream every dynamically irreducible quadratic to the sink.

    Order is deterministic: monic representatives sorted by (b, c), each
    expanded through the q-1 scalings in ascending scalar order.
    """
    result = census_monic(ctx, params, want_list=True, jobs=jobs)
    if emit is not None:
        for g in result.monic_list:
            for u in range(1, ctx.q):
                emit(scale(g, u))
    return result


def full_di_list(ctx: FieldCtx, params: AlgorithmParams | None = None, jobs: int = 1) -> list[QuadPoly]:
    """Materialized census_full stream (desk-scale helper)."""
    out: list[QuadPoly] = []
    census_full(ctx, params, emit=out.append, jobs=jobs)
    return out


def survivor_curve(
    ctx: FieldCtx, params: AlgorithmParams | None = None, jobs: int = 1
) -> tuple[int, int]:
    """Stage 1 only: (q, survivor count) for scaling studies."""
    params = params or AlgorithmParams()
    k_depth = params.depth_for(ctx.q)
    shards = _shards(ctx.q, jobs)
    if jobs > 1 and len(shards) > 1:
        args = [(ctx.p, ctx.k, k_depth, lo, hi, True) for lo, hi in shards]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            counts = list(ex.map(_survivor_shard, args))
    else:
        counts = [_survivor_shard((ctx.p, ctx.k, k_depth, lo, hi, True)) for lo, hi in shards]
    return ctx.q, sum(counts)


def _shards(q: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, min(jobs, q))
    step = (q + jobs - 1) // jobs
    return [(lo, min(lo + step, q)) for lo in range(0, q, step)]


def _census_shard(args) -> tuple[int, list[tuple[int, int]], int, int, float, float]:
    p, k, k_depth, b_lo, b_hi = args
    ctx = FieldCtx(p, k)
    t0 = time.perf_counter()
    survivors = _stage1(ctx, k_depth, b_lo, b_hi)
    t1 = time.perf_counter()
    di_pairs = []
    max_orbit = 0
    max_walk = 0  # longest exact walk over any survivor, DI or not
    for b, c in survivors:
        rep = di_test_char(quad_new(ctx, 1, b, c))
        if rep.steps_tested > max_walk:
            max_walk = rep.steps_tested
        if rep.is_di:
            di_pairs.append((b, c))
            if rep.orbit_size > max_orbit:
                max_orbit = rep.orbit_size
    t2 = time.perf_counter()
    return len(survivors), di_pairs, max_orbit, max_walk, t1 - t0, t2 - t1


def _survivor_shard(args) -> int:
    p, k, k_depth, b_lo, b_hi, _ = args
    ctx = FieldCtx(p, k)
    return len(_stage1(ctx, k_depth, b_lo, b_hi))


def _stage1(ctx: FieldCtx, k_depth: int, b_lo: int, b_hi: int) -> list[tuple[int, int]]:
    """Survivors (b, c) of the first k_depth adjusted-orbit character tests."""
    if ctx.k == 1:
        return _stage1_prime(ctx, k_depth, b_lo, b_hi)
    return _stage1_generic(ctx, k_depth, b_lo, b_hi)


def _stage1_prime(ctx: FieldCtx, k_depth: int, b_lo: int, b_hi: int) -> list[tuple[int, int]]:
    p = ctx.p
    ns = ctx.nonsquare_table()
    inv2 = pow(2, p - 2, p)
    out: list[tuple[int, int]] = []
    block = max(1, _BLOCK_CELLS // p)
    cs = np.arange(p, dtype=np.int64)
    for lo in range(b_lo, b_hi, block):
        hi = min(lo + block, b_hi)
        bs = np.arange(lo, hi, dtype=np.int64)
        b_grid = np.repeat(bs, p)
        c_grid = np.tile(cs, bs.size)
        gam = (b_grid * (p - inv2)) % p
        x = (gam * (gam + b_grid) + c_grid) % p
        alive = ns[(p - x) % p]  # first adjusted element is -f(gamma)
        for _ in range(k_depth - 1):
            if not alive.any():
                break
            x = (x * (x + b_grid) + c_grid) % p
            alive &= ns[x]
        for i in np.nonzero(alive)[0]:
            out.append((int(b_grid[i]), int(c_grid[i])))
    return out


def _stage1_generic(ctx: FieldCtx, k_depth: int, b_lo: int, b_hi: int) -> list[tuple[int, int]]:
    ns = ctx.nonsquare_table()
    inv2 = ctx.inv(2)
    add, mul, neg = ctx.add_fn(), ctx.mul_fn(), ctx.neg_fn()
    out: list[tuple[int, int]] = []
    for b in range(b_lo, b_hi):
        gam = neg(mul(b, inv2))
        base = mul(add(gam, b), gam)  # gamma^2 + b*gamma
        for c in range(ctx.q):
            x = add(base, c)
            if not ns[neg(x)]:
                continue
            ok = True
            for _ in range(k_depth - 1):
                x = add(mul(add(x, b), x), c)
                if not ns[x]:
                    ok = False
                    break
            if ok:
                out.append((b, c))
    return out
