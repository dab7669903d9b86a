"""Hidden-partition hard instances and their reduction to edge streams.

An instance hands each of T players an alpha_n-edge matching with one bit
per edge; in the YES case the bits are the edge parities of a hidden vertex
partition, in the NO case they are fair coins. The reduction feeds every
bit-1 edge not seen in an earlier player's matching to a streaming
algorithm, and the protocol harness thresholds the reported value.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import numpy as np

from .estimator import EstimatorBank, qmc_value_from_w_hat
from .graph import EdgeStream, WeightedEdge, WeightedGraph, is_bipartite
from .oracles import max_cut_bruteforce, qmc_exact
from .relaxation import solve_vector_program
from .rng import substream

YES = "yes"
NO = "no"


@dataclass(frozen=True)
class DihpInstance:
    n: int
    alpha_n: int
    t_players: int
    matchings: tuple[tuple[tuple[int, int], ...], ...]
    labels: tuple[tuple[int, ...], ...]
    truth: str
    hidden_partition: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        for matching in self.matchings:
            used = set()
            for u, v in matching:
                if u == v or u in used or v in used:
                    raise ValueError("matching edges must be pairwise non-incident")
                used.update((u, v))
        if self.truth == YES:
            x = self.hidden_partition
            for matching, bits in zip(self.matchings, self.labels):
                for (u, v), b in zip(matching, bits):
                    if b != (x[u] ^ x[v]):
                        raise ValueError("labels inconsistent with hidden partition")


def sample_partial_matching(rng: np.random.Generator, n: int, k: int) -> tuple[tuple[int, int], ...]:
    """k pairwise non-incident edges, drawn edge by edge uniformly over the
    pairs not incident to the edges already drawn."""
    if 2 * k > n:
        raise ValueError(f"no {k}-edge matching on {n} vertices")
    available = list(range(n))
    edges = []
    for _ in range(k):
        i, j = rng.choice(len(available), size=2, replace=False)
        u, v = available[int(i)], available[int(j)]
        edges.append((u, v) if u < v else (v, u))
        for w in sorted((int(i), int(j)), reverse=True):
            del available[w]
    return tuple(edges)


def sample_instance(
    n: int, alpha_n: int, t_players: int, truth: str, seed: int = 0
) -> DihpInstance:
    if truth not in (YES, NO):
        raise ValueError(f"truth must be {YES!r} or {NO!r}")
    if t_players < 1:
        raise ValueError("need at least one player")
    if alpha_n < 1 or 2 * alpha_n > n:
        raise ValueError(f"infeasible parameters: alpha_n={alpha_n}, n={n}")
    rng = substream(seed, 0xD1)
    matchings = tuple(sample_partial_matching(rng, n, alpha_n) for _ in range(t_players))
    if truth == YES:
        x = tuple(int(b) for b in rng.integers(0, 2, size=n))
        labels = tuple(
            tuple(x[u] ^ x[v] for u, v in matching) for matching in matchings
        )
        return DihpInstance(n, alpha_n, t_players, matchings, labels, YES, x)
    labels = tuple(
        tuple(int(b) for b in rng.integers(0, 2, size=alpha_n)) for _ in matchings
    )
    return DihpInstance(n, alpha_n, t_players, matchings, labels, NO, None)


def serialize_instance(inst: DihpInstance) -> str:
    lines = [f"dihp {inst.n} {inst.alpha_n} {inst.t_players} {inst.truth}"]
    for matching, bits in zip(inst.matchings, inst.labels):
        lines.append(" ".join(f"{u}:{v}" for u, v in matching))
        lines.append("".join(str(b) for b in bits))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> DihpInstance:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header = lines[0].split()
    if len(header) != 5 or header[0] != "dihp":
        raise ValueError("expected header 'dihp n alpha_n T truth'")
    n, alpha_n, t_players = int(header[1]), int(header[2]), int(header[3])
    truth = header[4]
    matchings, labels = [], []
    for t in range(t_players):
        pairs = tuple(
            tuple(int(x) for x in token.split(":")) for token in lines[1 + 2 * t].split()
        )
        matchings.append(tuple((u, v) for u, v in pairs))
        labels.append(tuple(int(ch) for ch in lines[2 + 2 * t]))
    # The hidden partition is not part of the wire format; YES instances
    # parsed back are re-checked lazily by consumers that need it.
    return DihpInstance(
        n, alpha_n, t_players, tuple(matchings), tuple(labels),
        truth if truth in (YES, NO) else NO,
        _recover_partition(n, matchings, labels) if truth == YES else None,
    )


def _recover_partition(n, matchings, labels) -> tuple[int, ...]:
    """2-color the bit-0/bit-1 constraint graph of a YES instance."""
    color = [-1] * n
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for matching, bits in zip(matchings, labels):
        for (u, v), b in zip(matching, bits):
            adj[u].append((v, b))
            adj[v].append((u, b))
    for root in range(n):
        if color[root] >= 0:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, b in adj[u]:
                want = color[u] ^ b
                if color[v] < 0:
                    color[v] = want
                    stack.append(v)
                elif color[v] != want:
                    raise ValueError("labels are not consistent with any partition")
    return tuple(color)


def reduce_to_stream(inst: DihpInstance) -> EdgeStream:
    """Bit-1 edges in (player, within-matching) order, deduplicated against
    every earlier player's matching; unit weights."""
    seen: set[tuple[int, int]] = set()
    edges: list[WeightedEdge] = []
    for matching, bits in zip(inst.matchings, inst.labels):
        for (u, v), b in zip(matching, bits):
            if b == 1 and (u, v) not in seen:
                edges.append(WeightedEdge(u, v))
        seen.update(matching)
    return EdgeStream(inst.n, tuple(edges))


# ---------------------------------------------------------------------------
# Streaming-algorithm-as-protocol harness
# ---------------------------------------------------------------------------


class StreamAlgorithm(Protocol):
    def update(self, e: WeightedEdge) -> None: ...
    def result(self) -> float: ...
    def word_count(self) -> int: ...


class QmcEstimateAlgorithm:
    """The one-pass estimator as a protocol participant."""

    def __init__(self, epsilon: float, delta: float, seed: int = 0):
        self.epsilon = epsilon
        self._bank = EstimatorBank(epsilon / 4.0, delta, seed)

    def update(self, e: WeightedEdge) -> None:
        self._bank.process_edge(e)

    def result(self) -> float:
        return qmc_value_from_w_hat(
            float(self._bank.m_exact), self._bank.w_estimate(), self.epsilon
        )

    def word_count(self) -> int:
        return self._bank.words_used()


class ExactOracleAlgorithm:
    """Buffers the whole stream and runs an exact oracle at the end.

    Not a low-space algorithm; used to separate the harness mechanics from
    estimation error in experiments.
    """

    def __init__(self, n: int, mode: str):
        self.n = n
        self.mode = mode
        self._edges: list[WeightedEdge] = []

    def update(self, e: WeightedEdge) -> None:
        self._edges.append(e)

    def result(self) -> float:
        g = WeightedGraph(self.n, self._edges)
        if self.mode == "mc":
            return float(max_cut_bruteforce(g).value)
        return qmc_exact(g).value

    def word_count(self) -> int:
        return 3 * len(self._edges)


class ConstantAlgorithm:
    def __init__(self, value: float):
        self.value = value

    def update(self, e: WeightedEdge) -> None:
        pass

    def result(self) -> float:
        return self.value

    def word_count(self) -> int:
        return 1


@dataclass(frozen=True)
class ProtocolTranscript:
    decision: str
    m: int
    reported_value: float
    threshold: float
    # Words of carried state at each player handoff: algorithm state plus
    # one word for the shared edge counter (2 log n bits).
    handoff_words: tuple[int, ...]


def run_protocol(
    inst: DihpInstance,
    algorithm: StreamAlgorithm,
    mode: str,
    epsilon: float,
) -> ProtocolTranscript:
    """Feed the reduced stream player by player and threshold the output.

    Decision is YES iff the reported value reaches m/(2-eps) in MC mode or
    m/(4-eps) in QMC mode; an empty stream decides YES by the degenerate
    threshold 0 >= 0.
    """
    if mode not in ("mc", "qmc"):
        raise ValueError("mode must be 'mc' or 'qmc'")
    stream = reduce_to_stream(inst)
    per_player: dict[tuple[int, int], int] = {}
    for t, matching in enumerate(inst.matchings):
        for pair in matching:
            per_player.setdefault(pair, t)
    handoffs = []
    m = 0
    e_iter = iter(stream.edges)
    pending = next(e_iter, None)
    for t in range(inst.t_players):
        while pending is not None and per_player[pending.pair] == t:
            algorithm.update(pending)
            m += 1
            pending = next(e_iter, None)
        handoffs.append(algorithm.word_count() + 1)
    reported = algorithm.result()
    denom = (2.0 - epsilon) if mode == "mc" else (4.0 - epsilon)
    threshold = m / denom
    decision = YES if reported >= threshold else NO
    return ProtocolTranscript(decision, m, reported, threshold, tuple(handoffs))


# ---------------------------------------------------------------------------
# Separation experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseStats:
    trials: int
    bipartite_rate: float
    maxcut_ratio_mean: Optional[float] = None
    maxcut_ratio_min: Optional[float] = None
    maxcut_ratio_max: Optional[float] = None
    maxcut_ratio_stderr: Optional[float] = None
    sdp_over_m_mean: Optional[float] = None
    qmc_ratio_mean: Optional[float] = None


@dataclass(frozen=True)
class SeparationReport:
    n: int
    alpha_n: int
    t_players: int
    trials: int
    seed: int
    yes_stats: CaseStats
    no_stats: CaseStats
    m_values: dict[str, list[int]]


def separation_experiment(
    n: int,
    alpha_n: int,
    t_players: int,
    trials: int,
    seed: int = 0,
    compute_maxcut: bool = True,
    compute_sdp: bool = False,
    compute_qmc: bool = False,
) -> SeparationReport:
    """Per-trial statistics of the reduced graphs in both truth cases.

    Every YES trial must reduce to a bipartite graph with max-cut m; the
    experiment raises if one does not.
    """
    m_values: dict[str, list[int]] = {YES: [], NO: []}
    stats: dict[str, CaseStats] = {}
    for case in (YES, NO):
        ratios: list[float] = []
        sdp_vals: list[float] = []
        qmc_ratios: list[float] = []
        bipartite_hits = 0
        for trial in range(trials):
            trial_seed = int(substream(seed, 0x5EA, 0 if case == YES else 1, trial).integers(2**62))
            inst = sample_instance(n, alpha_n, t_players, case, trial_seed)
            stream = reduce_to_stream(inst)
            g = WeightedGraph.from_stream(stream)
            m = len(stream)
            m_values[case].append(m)
            wit = is_bipartite(g)
            bipartite_hits += int(wit.bipartite)
            if case == YES and not wit.bipartite:
                raise AssertionError("YES instance reduced to a non-bipartite graph")
            if m == 0:
                continue
            if compute_maxcut:
                mc = float(max_cut_bruteforce(g).value)
                ratios.append(mc / m)
                if case == YES and mc != m:
                    raise AssertionError("YES instance with max-cut below m")
            if compute_sdp:
                r = solve_vector_program(g, rank=min(g.n, 16), restarts=4, seed=trial_seed)
                sdp_vals.append(r.best_value / m)
            if compute_qmc:
                qmc_ratios.append(qmc_exact(g, seed=trial_seed).value / m)
        stats[case] = CaseStats(
            trials=trials,
            bipartite_rate=bipartite_hits / max(trials, 1),
            maxcut_ratio_mean=_mean(ratios),
            maxcut_ratio_min=min(ratios) if ratios else None,
            maxcut_ratio_max=max(ratios) if ratios else None,
            maxcut_ratio_stderr=_stderr(ratios),
            sdp_over_m_mean=_mean(sdp_vals),
            qmc_ratio_mean=_mean(qmc_ratios),
        )
    return SeparationReport(
        n, alpha_n, t_players, trials, seed, stats[YES], stats[NO], m_values
    )


def _mean(xs: Sequence[float]) -> Optional[float]:
    return float(statistics.fmean(xs)) if xs else None


def _stderr(xs: Sequence[float]) -> Optional[float]:
    if len(xs) < 2:
        return None
    return float(statistics.stdev(xs) / len(xs) ** 0.5)
