"""Boolean Fourier transforms of scalar-, matrix-, and channel-valued tables.

The transform is hat f(S) = 2^{-n} sum_x f(x) (-1)^{x.S} applied entrywise,
so it extends verbatim from scalars to matrices to superoperator matrices.
This module also hosts the toy sequential protocols whose message tables the
distinguishability bound is checked on, and the numerical verification suite
for the convolution, support, and hypercontractivity facts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import DensityMatrix, Superoperator, schatten_norm, trace_norm

SCALAR_CAP = 12
MATRIX_CAP = 8
SUPEROP_CAP = 6


@dataclass(frozen=True)
class BooleanTable:
    """All 2^n values of a function on the Boolean cube, index bit i = x_i."""

    n: int
    kind: str  # "scalar" | "matrix" | "superoperator"
    values: np.ndarray

    def __post_init__(self):
        caps = {"scalar": SCALAR_CAP, "matrix": MATRIX_CAP, "superoperator": SUPEROP_CAP}
        if self.kind not in caps:
            raise ValueError(f"unknown table kind {self.kind!r}")
        if self.n > caps[self.kind]:
            raise ValueError(f"{self.kind} tables capped at n={caps[self.kind]}")
        if self.values.shape[0] != 1 << self.n:
            raise ValueError("table must have 2^n entries")
        if self.kind == "scalar" and self.values.ndim != 1:
            raise ValueError("scalar table entries must be scalars")
        if self.kind == "matrix" and self.values.ndim != 3:
            raise ValueError("matrix table entries must be matrices")
        if self.kind == "superoperator" and (
            self.values.ndim != 3 or self.values.shape[1] != self.values.shape[2]
        ):
            raise ValueError("superoperator entries must be square matrices")


@dataclass(frozen=True)
class FourierTable:
    n: int
    kind: str
    coeffs: np.ndarray  # same shape as the source table


def _wht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along axis 0."""
    size = values.shape[0]
    n = size.bit_length() - 1
    w = values.astype(complex).reshape((2,) * n + values.shape[1:])
    for axis in range(n):
        a = np.take(w, 0, axis=axis)
        b = np.take(w, 1, axis=axis)
        w = np.stack([a + b, a - b], axis=axis)
    return w.reshape(values.shape)


def transform(table: BooleanTable) -> FourierTable:
    """hat f(S) = 2^{-n} sum_x f(x) (-1)^{x.S}, entrywise."""
    return FourierTable(table.n, table.kind, _wht(table.values) / (1 << table.n))


def inverse_transform(ft: FourierTable) -> BooleanTable:
    """f(x) = sum_S hat f(S) (-1)^{x.S}: the transform scaled back by 2^n."""
    return BooleanTable(ft.n, ft.kind, _wht(ft.coeffs))


def tabulate(n: int, kind: str, fn: Callable[[int], np.ndarray]) -> BooleanTable:
    values = np.array([fn(x) for x in range(1 << n)])
    return BooleanTable(n, kind, values)


def convolve(f: FourierTable, g: FourierTable) -> np.ndarray:
    """(hat f * hat g)(S) = sum_T hat f(T) hat g(T xor S), order preserving."""
    size = 1 << f.n
    xor = np.arange(size)[:, None] ^ np.arange(size)[None, :]  # [T, S]
    if f.kind == "scalar" and g.kind == "scalar":
        return np.einsum("t,ts->s", f.coeffs, g.coeffs[xor])
    if f.kind == "scalar":
        return np.einsum("t,tsbc->sbc", f.coeffs, g.coeffs[xor])
    if g.kind == "scalar":
        return np.einsum("tab,ts->sab", f.coeffs, g.coeffs[xor])
    return np.einsum("tab,tsbc->sac", f.coeffs, g.coeffs[xor])


def operator_convolve(a_hat: FourierTable, f_hat: FourierTable) -> np.ndarray:
    """sum_T hat A_T applied to hat f(S xor T), for superoperator tables."""
    size = 1 << a_hat.n
    d = f_hat.coeffs.shape[1]
    out = np.zeros((size, d, d), dtype=complex)
    vecs = f_hat.coeffs.reshape(size, d * d)
    for t in range(size):
        moved = vecs[np.arange(size) ^ t] @ a_hat.coeffs[t].T
        out += moved.reshape(size, d, d)
    return out


def popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=np.int64)
    while idx.any():
        out += idx & 1
        idx >>= 1
    return out


# ---------------------------------------------------------------------------
# Linear-constraint indicators and factoring support
# ---------------------------------------------------------------------------


def constraint_indicator_table(m_rows: Sequence[int], y: int, n: int) -> BooleanTable:
    """Indicator of Mx = y over Z_2, rows of M given as n-bit masks."""
    if len(m_rows) > SCALAR_CAP or n > SCALAR_CAP:
        raise ValueError(f"constraint systems capped at {SCALAR_CAP}")
    xs = np.arange(1 << n)
    vals = np.ones(1 << n, dtype=complex)
    for i, row in enumerate(m_rows):
        bit = (y >> i) & 1
        parity = _parity_of(xs & row)
        vals *= parity == bit
    return BooleanTable(n, "scalar", vals)


def constraint_indicator_coeffs(m_rows: Sequence[int], y: int, n: int) -> FourierTable:
    """Fourier coefficients of the indicator, by direct transform."""
    return transform(constraint_indicator_table(m_rows, y, n))


def predicted_constraint_coeffs(m_rows: Sequence[int], y: int, n: int) -> np.ndarray:
    """Closed form: (|solutions|/2^n) (-1)^{s.y} at M^T s, zero elsewhere."""
    count = int(np.sum(constraint_indicator_table(m_rows, y, n).values.real))
    out = np.zeros(1 << n, dtype=complex)
    for s in range(1 << len(m_rows)):
        mask = row_combination(m_rows, s)
        sign = -1 if _parity_int(s & y) else 1
        out[mask] = count / (1 << n) * sign
    return out


def row_combination(m_rows: Sequence[int], s: int) -> int:
    """M^T s as an n-bit mask: xor of the rows selected by s."""
    mask = 0
    for i, row in enumerate(m_rows):
        if (s >> i) & 1:
            mask ^= row
    return mask


def row_space_masks(m_rows: Sequence[int]) -> set[int]:
    return {row_combination(m_rows, s) for s in range(1 << len(m_rows))}


def _parity_of(vals: np.ndarray) -> np.ndarray:
    out = np.zeros_like(vals)
    v = vals.copy()
    while v.any():
        out ^= v & 1
        v >>= 1
    return out


def _parity_int(v: int) -> int:
    return bin(v).count("1") & 1


# ---------------------------------------------------------------------------
# Channel families
# ---------------------------------------------------------------------------


def channel_family_table(n: int, channels: Callable[[int], Superoperator]) -> BooleanTable:
    values = np.array([channels(x).matrix for x in range(1 << n)])
    return BooleanTable(n, "superoperator", values)


def channel_fourier(family: BooleanTable) -> FourierTable:
    """Entrywise transform of a superoperator family; coefficients are
    ordinary linear maps, not channels."""
    if family.kind != "superoperator":
        raise ValueError("channel_fourier expects a superoperator table")
    return transform(family)


def support_defect(ft: FourierTable, allowed_masks: set[int]) -> float:
    """Largest coefficient magnitude outside the allowed index set."""
    worst = 0.0
    for s in range(1 << ft.n):
        if s not in allowed_masks:
            worst = max(worst, float(np.max(np.abs(ft.coeffs[s]))))
    return worst


# ---------------------------------------------------------------------------
# Toy sequential protocols
# ---------------------------------------------------------------------------

PROTOCOL_N_CAP = 6
PROTOCOL_BETA_CAP = 2
PROTOCOL_T_CAP = 3


@dataclass(frozen=True)
class ToyProtocol:
    """T players with matchings and per-label channels on beta qubits.

    channels[t][y] is the map player t+1 applies when its label vector is y;
    the first player receives the fixed all-zero basis state.
    """

    n: int
    beta: int
    alpha_n: int
    matchings: tuple[tuple[tuple[int, int], ...], ...]
    channels: tuple[tuple[Superoperator, ...], ...]

    def __post_init__(self):
        if self.n > PROTOCOL_N_CAP or self.beta > PROTOCOL_BETA_CAP:
            raise ValueError("protocol size caps: n <= 6, beta <= 2")
        if len(self.matchings) > PROTOCOL_T_CAP:
            raise ValueError("protocol capped at T <= 3 players")
        for t, (matching, row) in enumerate(zip(self.matchings, self.channels)):
            if len(matching) != self.alpha_n or len(row) != 1 << self.alpha_n:
                raise ValueError(f"player {t}: need alpha_n edges and 2^alpha_n channels")
            for ch in row:
                if not ch.is_channel:
                    raise ValueError(f"player {t}: non-channel map in family")

    @property
    def t_players(self) -> int:
        return len(self.matchings)

    @property
    def dim(self) -> int:
        return 1 << self.beta

    def initial_state(self) -> np.ndarray:
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho

    def label(self, t: int, x: int) -> int:
        y = 0
        for i, (u, v) in enumerate(self.matchings[t]):
            y |= (((x >> u) ^ (x >> v)) & 1) << i
        return y

    def matching_mask(self, t: int, s: int) -> int:
        mask = 0
        for i, (u, v) in enumerate(self.matchings[t]):
            if (s >> i) & 1:
                mask ^= (1 << u) | (1 << v)
        return mask


def protocol_states(p: ToyProtocol) -> list[BooleanTable]:
    """Message tables f_0..f_T; f_t(x) drives player t's channel at M_t x."""
    tables = []
    current = np.array([p.initial_state() for _ in range(1 << p.n)])
    tables.append(BooleanTable(p.n, "matrix", current.copy()))
    for t in range(p.t_players):
        nxt = np.empty_like(current)
        for x in range(1 << p.n):
            nxt[x] = p.channels[t][p.label(t, x)].apply_matrix(current[x])
            DensityMatrix(nxt[x])  # every message must remain a valid state
        current = nxt
        tables.append(BooleanTable(p.n, "matrix", current.copy()))
    return tables


def phi_state(p: ToyProtocol, t: int) -> np.ndarray:
    """Average final message when the first t labels are real and the rest
    are uniform coins."""
    big_t = p.t_players
    suffix_players = big_t - t
    suffix_size = 1 << (p.alpha_n * suffix_players)
    acc = np.zeros((p.dim, p.dim), dtype=complex)
    for x in range(1 << p.n):
        rho = p.initial_state()
        for s in range(t):
            rho = p.channels[s][p.label(s, x)].apply_matrix(rho)
        for ybits in range(suffix_size):
            r = rho
            for s in range(t, big_t):
                y = (ybits >> ((s - t) * p.alpha_n)) & ((1 << p.alpha_n) - 1)
                r = p.channels[s][y].apply_matrix(r)
            acc += r
    return acc / ((1 << p.n) * suffix_size)


@dataclass(frozen=True)
class PhiBoundResult:
    lhs: float  # || phi_T - phi_0 ||_1
    rhs: float  # sum over players and nonempty label subsets of matched coefficient norms
    per_player: tuple[float, ...]


def phibound_experiment(p: ToyProtocol) -> PhiBoundResult:
    """Distinguishability of real vs uniform labels against the coefficient sum."""
    lhs = trace_norm(phi_state(p, p.t_players) - phi_state(p, 0))
    tables = protocol_states(p)
    per_player = []
    for t in range(1, p.t_players):
        f_hat = transform(tables[t])
        contribution = 0.0
        for s in range(1, 1 << p.alpha_n):
            contribution += trace_norm(f_hat.coeffs[p.matching_mask(t, s)])
        per_player.append(contribution)
    rhs = float(sum(per_player))
    if lhs > rhs + 1e-9:
        raise AssertionError(f"distinguishability bound violated: {lhs} > {rhs}")
    return PhiBoundResult(float(lhs), rhs, tuple(per_player))


def parity_forwarding_protocol() -> ToyProtocol:
    """Two players on one matched edge: write the label, then flip by label.

    The final state is |y1 xor y2>, which distinguishes perfectly, and the
    single matched coefficient has trace norm 1, so the bound is tight.
    """
    write = []
    for y in (0, 1):
        kraus = [np.zeros((2, 2), dtype=complex), np.zeros((2, 2), dtype=complex)]
        kraus[0][y, 0] = 1.0
        kraus[1][y, 1] = 1.0
        write.append(Superoperator.from_kraus(kraus))
    flip = [
        Superoperator.identity(2),
        Superoperator.from_unitary(np.array([[0, 1], [1, 0]], dtype=complex)),
    ]
    return ToyProtocol(
        n=2,
        beta=1,
        alpha_n=1,
        matchings=(((0, 1),), ((0, 1),)),
        channels=(tuple(write), tuple(flip)),
    )


# ---------------------------------------------------------------------------
# Hypercontractivity sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypercontractivityRecord:
    delta: float
    lhs: float  # sum_S delta^{|S|} ||hat f(S)||_1^2
    bound: float  # 2^{2 delta beta}
    level_norm_sums: tuple[float, ...]  # sum of ||.||_1 per |S|
    level_square_sums: tuple[float, ...]  # sum of ||.||_1^2 per |S|


def hypercontractivity_sums(f: BooleanTable, delta: float) -> HypercontractivityRecord:
    """Weighted coefficient mass of a trace-norm-bounded matrix table."""
    if not (0 <= delta <= 1):
        raise ValueError("delta must lie in [0, 1]")
    if f.kind != "matrix":
        raise ValueError("expected a matrix-valued table")
    norms_in = [trace_norm(v) for v in f.values]
    if max(norms_in) > 1 + 1e-9:
        raise ValueError("table entries must have trace norm at most 1")
    beta = int(round(math.log2(f.values.shape[1])))
    ft = transform(f)
    weights = popcounts(f.n)
    coeff_norms = np.array([trace_norm(c) for c in ft.coeffs])
    lhs = float(np.sum(np.power(float(delta), weights.astype(float)) * coeff_norms**2))
    bound = 2.0 ** (2 * delta * beta)
    levels = int(weights.max()) + 1 if len(weights) else 1
    level_norm = tuple(float(np.sum(coeff_norms[weights == k])) for k in range(levels))
    level_sq = tuple(float(np.sum(coeff_norms[weights == k] ** 2)) for k in range(levels))
    if lhs > bound + 1e-9:
        raise AssertionError(f"hypercontractive bound violated: {lhs} > {bound}")
    return HypercontractivityRecord(delta, lhs, bound, level_norm, level_sq)


def schatten_weighted_sum(f: BooleanTable, p: float) -> tuple[float, float]:
    """lhs = sum_S (p-1)^{|S|} ||hat f(S)||_p^2 and the p-average base.

    The hypercontractive bound is base**(2/p) for arbitrary tables; when
    every entry has trace norm at most 1 the base is at most 1, so the
    weaker base**(1/p) form holds as well.
    """
    ft = transform(f)
    weights = popcounts(f.n).astype(float)
    coeff = np.array([schatten_norm(c, p) for c in ft.coeffs])
    lhs = float(np.sum((p - 1.0) ** weights * coeff**2))
    base = float(np.mean([schatten_norm(v, p) ** p for v in f.values]))
    return lhs, base
