"""One-pass reservoir estimation of W = sum of max incident weights.

A single reservoir samples an edge with probability proportional to its
weight, picks a uniform endpoint, and scores X = 1 if no heavier-or-equal
incident edge arrives later (with the partial credit 1 - w'/w_e when later
incident edges stay at or below the sampled weight). E[X] = W / 2m exactly,
so 2m * X estimates W unbiasedly; averaging B reservoirs per group and
taking the median over K groups gives the (epsilon, delta) guarantee.

The bank vectorizes all K*B reservoirs and consumes the stream in bounded
chunks: the state of a reservoir after a chunk depends only on where its
last replacement fell and on suffix incident maxima, so one categorical draw
per reservoir per chunk reproduces the per-edge process exactly in
distribution. Storage stays at a constant number of words per reservoir no
matter how long the stream is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .graph import EdgeStream, WeightedEdge
from .rng import substream

EXPECTATION_ORACLE_CAP = 16
DEFAULT_CHUNK = 1024

EdgeSource = Union[EdgeStream, Iterable[WeightedEdge]]


def _edges_of(stream: EdgeSource) -> Iterable[WeightedEdge]:
    if isinstance(stream, EdgeStream):
        return stream.edges
    return stream


def amplification_plan(epsilon: float, delta: float) -> tuple[int, int]:
    """(groups K, reservoirs-per-group B) for the requested guarantee.

    B = ceil(36/eps^2) drives each group's variance to (eps*m/3)^2 or less,
    so Chebyshev bounds the per-group failure by 1/3; the odd group count
    K = 2*ceil(12*ln(1/delta)) + 1 lets a Chernoff bound push the median's
    failure probability below delta.
    """
    if not (0 < epsilon < 1) or not (0 < delta < 1):
        raise ValueError("epsilon and delta must lie in (0, 1)")
    b = math.ceil(36.0 / (epsilon * epsilon))
    k = 2 * math.ceil(12.0 * math.log(1.0 / delta)) + 1
    return k, b


# ---------------------------------------------------------------------------
# Reference single-reservoir implementation
# ---------------------------------------------------------------------------


@dataclass
class ReservoirState:
    """Per-edge reference reservoir; the bank below must match it in law."""

    weight_seen: Fraction = field(default_factory=lambda: Fraction(0))
    candidate: Optional[WeightedEdge] = None
    endpoint: Optional[int] = None
    best_after: Fraction = field(default_factory=lambda: Fraction(0))
    superseded: bool = False

    def process_edge(self, e: WeightedEdge, rng: np.random.Generator) -> None:
        if e.w <= 0:
            raise ValueError("stream edges must have positive weight")
        self.weight_seen += e.w
        if rng.random() < float(e.w / self.weight_seen):
            self.candidate = e
            self.endpoint = e.u if rng.random() < 0.5 else e.v
            self.best_after = Fraction(0)
            self.superseded = False
        elif self.candidate is not None and self.endpoint in (e.u, e.v):
            if e.w > self.best_after:
                self.best_after = e.w
            if e.w > self.candidate.w:
                self.superseded = True

    def word_count(self) -> int:
        # weight accumulator, candidate (u, v, w), endpoint, best_after,
        # superseded flag: constant regardless of stream length.
        return 7


def finalize_sample(r: ReservoirState) -> Fraction:
    """X in [0, 1] for a finished stream; an empty stream scores 0."""
    if r.candidate is None:
        return Fraction(0)
    if r.superseded:
        return Fraction(0)
    if r.best_after == 0:
        return Fraction(1)
    return 1 - r.best_after / r.candidate.w


def expectation_oracle(stream: EdgeSource) -> Fraction:
    """Exact E[X] by enumerating every (edge, endpoint) sample outcome.

    Given the sampled edge and endpoint, X is a deterministic function of
    the later stream, so the full expectation is a weighted sum over the
    2 * |stream| outcomes, in rational arithmetic. Equals W / 2m.
    """
    edges = list(_edges_of(stream))
    if len(edges) > EXPECTATION_ORACLE_CAP:
        raise ValueError(f"expectation oracle capped at {EXPECTATION_ORACLE_CAP} edges")
    if not edges:
        return Fraction(0)
    m = sum((e.w for e in edges), Fraction(0))
    total = Fraction(0)
    for i, e in enumerate(edges):
        for v in (e.u, e.v):
            later = [f.w for f in edges[i + 1 :] if v in (f.u, f.v)]
            if not later:
                x = Fraction(1)
            else:
                w_after = max(later)
                x = Fraction(0) if w_after > e.w else 1 - w_after / e.w
            total += e.w * x
    return total / (2 * m)


# ---------------------------------------------------------------------------
# Vectorized estimator bank
# ---------------------------------------------------------------------------


class EstimatorBank:
    """K groups of B reservoirs plus the exact total-weight counter."""

    def __init__(
        self,
        epsilon: float,
        delta: float,
        seed: int = 0,
        chunk_size: int = DEFAULT_CHUNK,
    ):
        self.epsilon = float(epsilon)
        self.delta = float(delta)
        self.groups, self.per_group = amplification_plan(epsilon, delta)
        self.seed = int(seed)
        self.chunk_size = int(chunk_size)
        size = self.groups * self.per_group
        self._rng = substream(seed, 0xE57)
        self._cand_eu = np.zeros(size, dtype=np.int64)
        self._cand_ev = np.zeros(size, dtype=np.int64)
        self._cand_v = np.zeros(size, dtype=np.int64)
        self._cand_w = np.zeros(size)
        self._best_after = np.zeros(size)
        self._superseded = np.zeros(size, dtype=bool)
        self._weight_seen = 0.0
        self.m_exact = Fraction(0)
        self.edges_seen = 0
        self.unit_weights = True
        self._buf_u: list[int] = []
        self._buf_v: list[int] = []
        self._buf_w: list[float] = []

    @property
    def size(self) -> int:
        return self.groups * self.per_group

    def process_edge(self, e: WeightedEdge) -> None:
        if e.w <= 0:
            raise ValueError("stream edges must have positive weight")
        self.m_exact += e.w
        self.edges_seen += 1
        if e.w != 1:
            self.unit_weights = False
        self._buf_u.append(e.u)
        self._buf_v.append(e.v)
        self._buf_w.append(float(e.w))
        if len(self._buf_w) >= self.chunk_size:
            self.flush()

    def process_stream(self, stream: EdgeSource) -> None:
        for e in _edges_of(stream):
            self.process_edge(e)

    def flush(self) -> None:
        """Apply all buffered edges to the reservoirs."""
        c = len(self._buf_w)
        if c == 0:
            return
        eu = np.array(self._buf_u, dtype=np.int64)
        ev = np.array(self._buf_v, dtype=np.int64)
        ew = np.array(self._buf_w)
        self._buf_u, self._buf_v, self._buf_w = [], [], []

        had_prior = self._weight_seen > 0
        cum = self._weight_seen + np.cumsum(ew)
        p = ew / cum
        self._weight_seen = float(cum[-1])
        # P(last replacement in chunk = i) = p_i * prod_{j>i} (1 - p_j);
        # the leftover mass is "no replacement".
        one_minus = 1.0 - p
        suffix = np.ones(c)
        if c > 1:
            suffix[:-1] = np.cumprod(one_minus[::-1])[::-1][1:]
        cumulative = np.cumsum(p * suffix)
        cat = np.searchsorted(cumulative, self._rng.random(self.size), side="right")
        if not had_prior:
            # The very first edge replaces with probability exactly 1, so
            # "no replacement" has zero mass; keep rounding from leaking it.
            cat = np.minimum(cat, c - 1)

        sv, sw_suffix, key, gstart = _chunk_incidence(eu, ev, ew, c)

        replaced = cat < c
        if np.any(replaced):
            ridx = cat[replaced]
            pick_v = self._rng.integers(0, 2, size=int(np.count_nonzero(replaced)))
            vert = np.where(pick_v == 0, eu[ridx], ev[ridx])
            w_new = ew[ridx]
            ba = _suffix_incident_max(sv, sw_suffix, key, vert, ridx, c)
            self._cand_eu[replaced] = eu[ridx]
            self._cand_ev[replaced] = ev[ridx]
            self._cand_v[replaced] = vert
            self._cand_w[replaced] = w_new
            self._best_after[replaced] = ba
            self._superseded[replaced] = ba > w_new

        kept = ~replaced
        if np.any(kept) and had_prior:
            mv = _whole_chunk_incident_max(sv, sw_suffix, gstart, self._cand_v[kept])
            self._best_after[kept] = np.maximum(self._best_after[kept], mv)
            self._superseded[kept] |= mv > self._cand_w[kept]

    def sample_values(self) -> np.ndarray:
        """Finalized X per reservoir (flushes pending edges)."""
        self.flush()
        if self._weight_seen <= 0:
            return np.zeros(self.size)
        with np.errstate(divide="ignore", invalid="ignore"):
            partial = 1.0 - self._best_after / np.where(self._cand_w > 0, self._cand_w, 1.0)
        x = np.where(self._best_after == 0, 1.0, partial)
        return np.where(self._superseded, 0.0, x)

    def w_estimate(self) -> float:
        """Median over groups of 2m times the group mean, clamped to [0, 2m]."""
        x = self.sample_values()
        m = float(self.m_exact)
        if m == 0:
            return 0.0
        group_means = x.reshape(self.groups, self.per_group).mean(axis=1)
        return float(np.clip(np.median(2.0 * m * group_means), 0.0, 2.0 * m))

    def candidate_edges(self) -> np.ndarray:
        """(size, 2) sorted endpoint pairs of current candidates (flushes)."""
        self.flush()
        lo = np.minimum(self._cand_eu, self._cand_ev)
        hi = np.maximum(self._cand_eu, self._cand_ev)
        return np.stack([lo, hi], axis=1)

    def words_used(self) -> int:
        """Persistent storage in machine words; constant in stream length."""
        self.flush()
        return 6 * self.size + 8


def _chunk_incidence(eu, ev, ew, c):
    """Incidence rows sorted by (vertex, position) with suffix maxima."""
    verts = np.concatenate([eu, ev])
    pos = np.concatenate([np.arange(c), np.arange(c)])
    wts = np.concatenate([ew, ew])
    order = np.lexsort((pos, verts))
    sv, sp, sw = verts[order], pos[order], wts[order]
    n = len(sv)
    suffix_max = np.empty(n)
    for j in range(n - 1, -1, -1):
        if j == n - 1 or sv[j + 1] != sv[j]:
            suffix_max[j] = sw[j]
        else:
            suffix_max[j] = max(sw[j], suffix_max[j + 1])
    key = sv * np.int64(c + 1) + sp
    gstart = np.nonzero(np.concatenate([[True], sv[1:] != sv[:-1]]))[0]
    return sv, suffix_max, key, gstart


def _suffix_incident_max(sv, suffix_max, key, vert, after_pos, c):
    """Max weight strictly after position after_pos among edges at vert."""
    q = vert * np.int64(c + 1) + after_pos
    j = np.searchsorted(key, q, side="right")
    hit = j < len(sv)
    jj = np.where(hit, j, 0)
    hit &= sv[jj] == vert
    return np.where(hit, suffix_max[jj], 0.0)


def _whole_chunk_incident_max(sv, suffix_max, gstart, verts):
    """Max weight anywhere in the chunk among edges incident to each vert."""
    uverts = sv[gstart]
    gmax = suffix_max[gstart]
    gi = np.searchsorted(uverts, verts)
    hit = gi < len(uverts)
    gii = np.where(hit, gi, 0)
    hit &= uverts[gii] == verts
    return np.where(hit, gmax[gii], 0.0)


# ---------------------------------------------------------------------------
# End-to-end estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WEstimate:
    w_hat: float
    m: Fraction
    groups: int
    per_group: int
    words_used: int


def estimate_w(stream: EdgeSource, epsilon: float, delta: float, seed: int = 0) -> WEstimate:
    """One-pass estimate of W within epsilon*m additively, w.p. >= 1 - delta."""
    bank = EstimatorBank(epsilon, delta, seed)
    bank.process_stream(stream)
    return WEstimate(bank.w_estimate(), bank.m_exact, bank.groups, bank.per_group, bank.words_used())


@dataclass(frozen=True)
class QmcEstimate:
    value: float
    m: float
    w_hat: float
    epsilon: float
    delta: float
    mode: str  # "unweighted" | "weighted"
    guaranteed_ratio: float  # 2 + eps or 5/2 + eps
    words_used: int
    m_exact: Fraction


def qmc_value_from_w_hat(m: float, w_hat: float, epsilon: float) -> float:
    """Point estimate m/2 + (W_hat + eps'm)/4 with eps' = eps/4, clamped.

    The upward shift makes the estimate one-sided: whenever W_hat is within
    eps'm of W the value is at least the true optimum, while staying under
    (2 + eps) (unit weights) or (5/2 + eps) (weighted) times the optimum.
    """
    if m == 0:
        return 0.0
    eps_w = epsilon / 4.0
    value = m / 2.0 + (w_hat + eps_w * m) / 4.0
    return float(np.clip(value, m / 2.0, m + epsilon * m / 4.0))


def estimate_qmc(stream: EdgeSource, epsilon: float, delta: float, seed: int = 0) -> QmcEstimate:
    """Single-pass Quantum Max-Cut approximation from m and the W estimate."""
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must lie in (0, 1)")
    bank = EstimatorBank(epsilon / 4.0, delta, seed)
    bank.process_stream(stream)
    m = float(bank.m_exact)
    w_hat = bank.w_estimate()
    mode = "unweighted" if bank.unit_weights else "weighted"
    ratio = 2.0 + epsilon if mode == "unweighted" else 2.5 + epsilon
    value = qmc_value_from_w_hat(m, w_hat, epsilon)
    return QmcEstimate(
        value=value,
        m=m,
        w_hat=w_hat,
        epsilon=epsilon,
        delta=delta,
        mode=mode,
        guaranteed_ratio=ratio,
        words_used=bank.words_used(),
        m_exact=bank.m_exact,
    )
