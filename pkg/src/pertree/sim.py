"""Event-driven simulation of the contact process and branching random walk.

The per-replica tree engines sample the exact continuous-time chain:
every infected vertex (or particle) carries total rate 1 + lambda * degree,
the next event time is exponential in the total rate, and transmissions
pick a uniform incident edge.  Transmissions onto occupied vertices are
no-ops, which keeps the chain exact without boundary-rate bookkeeping.

Two vectorized batch engines (star chain, explicit small graphs) serve the
oracle cross-checks, where 1e5 replicas must finish in seconds.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .degrees import PeriodicDegreeSequence
from .errors import BracketFailure, CapacityExceeded
from .rng import stream
from .tree import TreeArena

DEFAULT_MAX_EVENTS = 1_000_000
DEFAULT_MAX_VERTICES = 500_000
DEFAULT_BRW_POP_CAP = 1_000_000


# ---------------------------------------------------------------------------
# Configuration and outcome records


@dataclass(frozen=True)
class SimConfig:
    degrees: PeriodicDegreeSequence
    lam: float
    horizon: float
    root_residue: int = 0
    max_events: int = DEFAULT_MAX_EVENTS
    max_vertices: int = DEFAULT_MAX_VERTICES
    seed: int = 0
    replicas: int = 1
    mode: str = "contact"          # "contact" | "brw"
    brw_population_cap: int = DEFAULT_BRW_POP_CAP

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.replicas < 1 or self.max_events < 1 or self.max_vertices < 1:
            raise ValueError("replicas and caps must be >= 1")
        if self.mode not in ("contact", "brw"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class SimOutcome:
    extinct: bool
    extinction_time: float | None
    root_visit_times: list[float]
    peak_infected: int
    events: int
    truncated: bool
    truncation_reason: str | None = None

    def survived(self, criterion: str, horizon: float) -> bool:
        """Finite-horizon survival proxy; truncated runs count as survived."""
        if self.truncated:
            return True
        if criterion == "global":
            return not self.extinct
        if criterion == "local":
            return any(t > horizon / 2.0 for t in self.root_visit_times)
        raise ValueError(f"unknown criterion {criterion!r}")


@dataclass(frozen=True)
class StarState:
    n: int
    j: int
    center: int

    def __post_init__(self):
        if not 0 <= self.j <= self.n or self.center not in (0, 1):
            raise ValueError("invalid star state")


@dataclass
class StarRunResult:
    hit: str                 # which stop condition fired
    time: float
    path_peak: int           # max infected-leaf count seen
    time_avg_leaves: float   # time average of the infected-leaf count


@dataclass
class SurvivalEstimate:
    lam: float
    probability: float
    ci_low: float
    ci_high: float
    replicas: int


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Score-based 95% binomial interval (robust near 0 and 1)."""
    if n == 0:
        return 0.0, 1.0
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# Contact process on the lazily grown tree


class _RateTable:
    """Growable parallel arrays (vertex id, children count, rate) plus an
    id -> slot index.  Rate-proportional sampling runs through a numpy
    cumulative sum, so an event costs C-speed O(n) even when thousands of
    vertices are active."""

    def __init__(self, cap: int = 64):
        self.ids = np.empty(cap, dtype=np.int64)
        self.degs = np.empty(cap, dtype=np.int64)
        self.counts = np.empty(cap, dtype=np.int64)   # particles per site (BRW)
        self.rates = np.empty(cap)
        self.pos: dict[int, int] = {}
        self.m = 0

    def _grow(self) -> None:
        cap = 2 * len(self.ids)
        for name in ("ids", "degs", "counts", "rates"):
            buf = getattr(self, name)
            new = np.empty(cap, dtype=buf.dtype)
            new[:self.m] = buf[:self.m]
            setattr(self, name, new)

    def add(self, vid: int, deg: int, rate: float, count: int = 1) -> None:
        if self.m == len(self.ids):
            self._grow()
        self.ids[self.m] = vid
        self.degs[self.m] = deg
        self.counts[self.m] = count
        self.rates[self.m] = rate
        self.pos[vid] = self.m
        self.m += 1

    def remove(self, i: int) -> None:
        last = self.m - 1
        del self.pos[int(self.ids[i])]
        if i != last:
            self.ids[i] = self.ids[last]
            self.degs[i] = self.degs[last]
            self.counts[i] = self.counts[last]
            self.rates[i] = self.rates[last]
            self.pos[int(self.ids[i])] = i
        self.m = last

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.rates[:self.m])

    def sample(self, cum: np.ndarray, u: float) -> int:
        return min(int(np.searchsorted(cum, u, side="right")), self.m - 1)


def run_contact(config: SimConfig, replica: int = 0, substream: int = 0,
                audit: bool = False) -> SimOutcome:
    """One exact contact-process trajectory started from the infected root."""
    rng = stream(config.seed, replica, substream)
    arena = TreeArena(config.degrees, config.root_residue, config.max_vertices)
    lam = config.lam
    root = arena.root

    table = _RateTable()
    table.add(root, arena.graph_degree(root), 1.0 + lam * arena.graph_degree(root))

    t = 0.0
    visits = [0.0]
    peak = 1
    events = 0
    trunc: str | None = None

    while table.m:
        if events >= config.max_events:
            trunc = "event_cap"
            break
        cum = table.cumulative()
        total = cum[-1]
        dt = rng.standard_exponential() / total
        if t + dt >= config.horizon:
            t = config.horizon
            break
        t += dt
        events += 1
        # Pick the acting vertex proportionally to its rate.
        i = table.sample(cum, rng.random() * total)
        v = int(table.ids[i])
        deg = int(table.degs[i])
        if rng.random() * table.rates[i] < 1.0:
            table.remove(i)
        else:
            slot = int(rng.integers(deg))
            try:
                w = arena.neighbor(v, slot)
            except CapacityExceeded:
                trunc = "vertex_cap"
                break
            if w not in table.pos:
                wdeg = arena.graph_degree(w)
                table.add(w, wdeg, 1.0 + lam * wdeg)
                if w == root:
                    visits.append(t)
                if table.m > peak:
                    peak = table.m
        if audit:
            assert table.m == len(table.pos)
            assert all(table.pos[int(x)] == idx
                       for idx, x in enumerate(table.ids[:table.m]))
            expected = 1.0 + lam * table.degs[:table.m]
            assert np.allclose(table.rates[:table.m], expected)

    extinct = table.m == 0 and trunc is None
    return SimOutcome(extinct, t if extinct else None, visits, peak, events,
                      trunc is not None, trunc)


# ---------------------------------------------------------------------------
# Branching random walk (no per-site exclusion)


def run_brw(config: SimConfig, replica: int = 0, substream: int = 0) -> SimOutcome:
    """One branching-random-walk trajectory started from one particle at the root."""
    rng = stream(config.seed, replica, substream)
    arena = TreeArena(config.degrees, config.root_residue, config.max_vertices)
    lam = config.lam
    root = arena.root

    table = _RateTable()
    root_deg = arena.graph_degree(root)
    table.add(root, root_deg, 1.0 + lam * root_deg)
    population = 1

    t = 0.0
    visits = [0.0]
    peak = 1
    events = 0
    trunc: str | None = None

    def add_particle(w: int) -> None:
        nonlocal population
        if w in table.pos:
            i = table.pos[w]
            table.counts[i] += 1
            table.rates[i] += 1.0 + lam * table.degs[i]
        else:
            wdeg = arena.graph_degree(w)
            table.add(w, wdeg, 1.0 + lam * wdeg)
        population += 1

    while population:
        if events >= config.max_events:
            trunc = "event_cap"
            break
        cum = table.cumulative()
        total = cum[-1]
        dt = rng.standard_exponential() / total
        if t + dt >= config.horizon:
            t = config.horizon
            break
        t += dt
        events += 1
        i = table.sample(cum, rng.random() * total)
        v = int(table.ids[i])
        deg = int(table.degs[i])
        per = 1.0 + lam * deg
        if rng.random() * per < 1.0:
            # One particle at v dies.
            table.counts[i] -= 1
            table.rates[i] -= per
            population -= 1
            if table.counts[i] == 0:
                table.remove(i)
        else:
            slot = int(rng.integers(deg))
            try:
                w = arena.neighbor(v, slot)
            except CapacityExceeded:
                trunc = "vertex_cap"
                break
            add_particle(w)
            if w == root:
                visits.append(t)
            if population > peak:
                peak = population
            if population >= config.brw_population_cap:
                trunc = "population_cap"
                break

    extinct = population == 0 and trunc is None
    return SimOutcome(extinct, t if extinct else None, visits, peak, events,
                      trunc is not None, trunc)


# ---------------------------------------------------------------------------
# Star-graph chain


def run_star(n: int, lam: float, init: StarState, stop: str = "absorb",
             level: int | None = None, horizon: float | None = None,
             seed: int = 0, replica: int = 0) -> StarRunResult:
    """Simulate the aggregated (infected leaves, center) chain to a stop condition.

    Transitions: j -> j+1 at rate lam*(n-j) while the center is infected,
    j -> j-1 at rate j, center 1 -> 0 at rate 1, center 0 -> 1 at rate lam*j.
    ``stop``: "absorb" (state (0,0)), "reach" (j >= level), "horizon".
    """
    if stop == "reach" and level is None:
        raise ValueError("stop='reach' needs a level")
    if stop == "horizon" and horizon is None:
        raise ValueError("stop='horizon' needs a horizon")
    rng = stream(seed, replica)
    j, m = init.j, init.center
    t = 0.0
    peak = j
    area = 0.0
    while True:
        if j == 0 and m == 0:
            return StarRunResult("absorb", t, peak, area / t if t else 0.0)
        if stop == "reach" and j >= level:
            return StarRunResult("reach", t, peak, area / t if t else 0.0)
        r_up = lam * (n - j) * m
        r_down = float(j)
        r_coff = float(m)
        r_con = lam * j * (1 - m)
        total = r_up + r_down + r_coff + r_con
        dt = rng.standard_exponential() / total
        if stop == "horizon" and t + dt >= horizon:
            area += j * (horizon - t)
            return StarRunResult("horizon", horizon, peak, area / horizon)
        area += j * dt
        t += dt
        u = rng.random() * total
        if u < r_up:
            j += 1
            peak = max(peak, j)
        elif u < r_up + r_down:
            j -= 1
        elif u < r_up + r_down + r_coff:
            m = 0
        else:
            m = 1


def star_batch(n: int, lam: float, init: StarState, replicas: int,
               seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized star chains run to absorption.

    Returns (absorption_times, peak_leaf_counts).  One counter-based
    generator drives the whole batch; the result is deterministic in
    (n, lam, init, replicas, seed).
    """
    rng = stream(seed)
    j = np.full(replicas, init.j, dtype=np.int64)
    m = np.full(replicas, init.center, dtype=np.int64)
    t = np.zeros(replicas)
    peak = j.copy()
    active = np.flatnonzero((j > 0) | (m > 0))
    while active.size:
        ja, ma = j[active], m[active]
        r_up = lam * (n - ja) * ma
        r_down = ja.astype(float)
        r_coff = ma.astype(float)
        r_con = lam * ja * (1 - ma)
        total = r_up + r_down + r_coff + r_con
        t[active] += rng.standard_exponential(active.size) / total
        u = rng.random(active.size) * total
        up = u < r_up
        down = ~up & (u < r_up + r_down)
        coff = ~up & ~down & (u < r_up + r_down + r_coff)
        con = ~(up | down | coff)
        j[active] += up.astype(np.int64) - down.astype(np.int64)
        m[active] += con.astype(np.int64) - coff.astype(np.int64)
        peak[active] = np.maximum(peak[active], j[active])
        alive = (j[active] > 0) | (m[active] > 0)
        active = active[alive]
    return t, peak


# ---------------------------------------------------------------------------
# Contact process on an explicit small graph (vectorized batch)


def contact_graph_batch(neighbors: dict[int, list[int]], lam: float, root: int,
                        replicas: int, seed: int = 0,
                        horizon: float = math.inf,
                        max_steps: int = 10_000_000):
    """Vectorized contact process on a small explicit graph, run to extinction.

    Returns (extinction_times, root_reinfection_counts).  Used to cross-check
    the event engine against the exact subset-chain oracle at scale.
    """
    verts = sorted(neighbors)
    vmap = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    adj = np.zeros((nv, nv))
    for v, nbrs in neighbors.items():
        for w in nbrs:
            adj[vmap[v], vmap[w]] = 1.0
    r = vmap[root]

    rng = stream(seed)
    state = np.zeros((replicas, nv), dtype=bool)
    state[:, r] = True
    t = np.zeros(replicas)
    visits = np.zeros(replicas, dtype=np.int64)
    active = np.arange(replicas)
    for _ in range(max_steps):
        if not active.size:
            break
        s = state[active]
        press = s.astype(float) @ adj
        infect = lam * press * ~s
        recover = s.astype(float)
        rates = np.concatenate([recover, infect], axis=1)
        total = rates.sum(axis=1)
        t[active] += rng.standard_exponential(active.size) / total
        u = rng.random(active.size) * total
        col = (np.cumsum(rates, axis=1) < u[:, None]).sum(axis=1)
        is_rec = col < nv
        vert = col % nv
        state[active[is_rec], vert[is_rec]] = False
        state[active[~is_rec], vert[~is_rec]] = True
        visits[active] += (~is_rec) & (vert == r)
        rows = state[active]
        keep = rows.any(axis=1) & (t[active] < horizon)
        active = active[keep]
    else:
        raise RuntimeError("graph batch exceeded the step budget")
    return t, visits


# ---------------------------------------------------------------------------
# Replica orchestration, survival curves, threshold bisection


def _replica_chunk(config: SimConfig, lo: int, hi: int, substream: int):
    runner = run_contact if config.mode == "contact" else run_brw
    return [runner(config, replica=i, substream=substream) for i in range(lo, hi)]


def worker_count() -> int:
    """Replica-parallel worker cap: CP_THREADS env var, default 1."""
    try:
        return max(1, int(os.environ.get("CP_THREADS", "1")))
    except ValueError:
        return 1


def run_replicas(config: SimConfig, substream: int = 0) -> list[SimOutcome]:
    """All replicas of a config, ordered by replica index.

    Replicas are independent work items; with CP_THREADS > 1 they run in
    a process pool.  Results are identical either way because each replica
    owns its stream and aggregation is by index.
    """
    workers = worker_count()
    n = config.replicas
    if workers == 1 or n < 2 * workers:
        return _replica_chunk(config, 0, n, substream)
    from concurrent.futures import ProcessPoolExecutor
    chunk = (n + workers - 1) // workers
    spans = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_replica_chunk, [config] * len(spans),
                         [s[0] for s in spans], [s[1] for s in spans],
                         [substream] * len(spans))
        return [outcome for part in parts for outcome in part]


def survival_curve(seq: PeriodicDegreeSequence, lam: float, horizon: float,
                   replicas: int, seed: int, criterion: str = "global",
                   mode: str = "contact", root_residue: int = 0,
                   max_events: int = DEFAULT_MAX_EVENTS,
                   max_vertices: int = DEFAULT_MAX_VERTICES,
                   brw_population_cap: int = DEFAULT_BRW_POP_CAP,
                   substream: int = 0) -> SurvivalEstimate:
    """Survival probability over independent replicas with a Wilson interval.

    Replica i draws from the stream keyed (seed, i, substream); truncated
    replicas count as survived (optimistic labeling, by design).
    """
    config = SimConfig(seq, lam, horizon, root_residue, max_events,
                       max_vertices, seed, replicas, mode, brw_population_cap)
    outcomes = run_replicas(config, substream)
    survived = sum(1 for o in outcomes if o.survived(criterion, horizon))
    p = survived / replicas
    low, high = wilson_interval(survived, replicas)
    return SurvivalEstimate(lam, p, low, high, replicas)


@dataclass(frozen=True)
class Lambda2Protocol:
    lam_lo: float
    lam_hi: float
    horizon: float
    replicas: int
    seed: int
    target_probability: float = 0.05
    tolerance: float = 0.01
    criterion: str = "local"
    mode: str = "contact"
    max_events: int = DEFAULT_MAX_EVENTS
    max_vertices: int = DEFAULT_MAX_VERTICES
    brw_population_cap: int = DEFAULT_BRW_POP_CAP


def estimate_lambda2(seq: PeriodicDegreeSequence,
                     protocol: Lambda2Protocol,
                     root_residue: int = 0) -> tuple[float, float]:
    """Bisect the rate at which finite-horizon local survival crosses the target.

    Returns a bracketing interval of width <= the protocol tolerance; the
    whole procedure is deterministic in the protocol seed (each bisection
    step uses its own substream).
    """
    if protocol.lam_hi < protocol.lam_lo:
        raise BracketFailure("upper bracket below lower bracket")

    def prob(lam: float, substream: int) -> float:
        est = survival_curve(seq, lam, protocol.horizon, protocol.replicas,
                             protocol.seed, protocol.criterion, protocol.mode,
                             root_residue, protocol.max_events,
                             protocol.max_vertices,
                             protocol.brw_population_cap, substream)
        return est.probability

    target = protocol.target_probability
    if prob(protocol.lam_lo, 0) > target:
        raise BracketFailure("survival already above target at the lower bracket")
    if prob(protocol.lam_hi, 1) < target:
        raise BracketFailure("survival below target at the upper bracket")
    lo, hi = protocol.lam_lo, protocol.lam_hi
    substream = 2
    while hi - lo > protocol.tolerance:
        mid = 0.5 * (lo + hi)
        if prob(mid, substream) >= target:
            hi = mid
        else:
            lo = mid
        substream += 1
    return lo, hi
