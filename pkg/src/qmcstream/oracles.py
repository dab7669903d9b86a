"""Desk-scale ground truth for Max-Cut and Quantum Max-Cut.

Brute-force Max-Cut and matrix-free Lanczos diagonalization both work per
connected component (both quantities are additive over components), so the
practical size limit is on the largest component rather than the whole graph.
Closed-form bounds and the constructive assignments are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .graph import (
    InfeasibleSizeError,
    WeightedEdge,
    WeightedGraph,
    dfs_decomposition,
    heaviest_edge_decomposition,
    max_incident_sum,
    total_weight,
)
from .linalg import pauli_decompose, pauli_reconstruct, DensityMatrix
from .rng import substream

MAXCUT_COMPONENT_CAP = 24
QMC_COMPONENT_CAP = 14
LANCZOS_KRYLOV_CAP = 200


@dataclass(frozen=True)
class CutAssignment:
    sides: tuple[int, ...]
    value: Fraction


def cut_value(g: WeightedGraph, sides: Sequence[int]) -> Fraction:
    return sum((e.w for e in g.edges if sides[e.u] != sides[e.v]), Fraction(0))


def _weights_as_ints(edges) -> tuple[list[int], int]:
    """Scale rational weights to integers by the lcm of denominators."""
    lcm = 1
    for e in edges:
        lcm = lcm * e.w.denominator // gcd(lcm, e.w.denominator)
    return [int(e.w * lcm) for e in edges], lcm


def max_cut_bruteforce(g: WeightedGraph) -> CutAssignment:
    """Optimal cut by enumeration, component by component.

    Components up to 24 vertices are enumerated directly, with ties broken
    to the lexicographically smallest side-bitstring (each component's
    lowest vertex on side 0). Larger components are first reduced by
    stripping degree-one vertices, whose edges are always cuttable; the
    remaining 2-core must fit the 24-vertex cap. Values are exact either
    way; for stripped components the reported assignment is deterministic
    but not necessarily the lexicographic minimum.
    """
    sides = [0] * g.n
    value = Fraction(0)
    for comp in g.components():
        sub = g.induced_subgraph(comp)
        if len(comp) <= MAXCUT_COMPONENT_CAP:
            local_sides, local_value = _max_cut_component(sub)
        else:
            local_sides, local_value = _max_cut_stripped(sub)
        for i, u in enumerate(comp):
            sides[u] = local_sides[i]
        value += local_value
    return CutAssignment(tuple(sides), value)


def _max_cut_stripped(sub: WeightedGraph) -> tuple[list[int], Fraction]:
    degree = [len(adj) for adj in sub.adjacency]
    alive_pairs = {e.pair: e.w for e in sub.edges}
    neighbors = {u: {v: w for v, w in sub.adjacency[u]} for u in range(sub.n)}
    stripped: list[tuple[int, int, Fraction]] = []  # (leaf, neighbor, weight)
    queue = [u for u in range(sub.n) if degree[u] == 1]
    while queue:
        u = queue.pop()
        if degree[u] != 1:
            continue
        (v, w), = ((v, w) for v, w in neighbors[u].items() if (min(u, v), max(u, v)) in alive_pairs)
        stripped.append((u, v, w))
        del alive_pairs[(min(u, v), max(u, v))]
        degree[u] -= 1
        degree[v] -= 1
        if degree[v] == 1:
            queue.append(v)
    core_vertices = sorted(u for u in range(sub.n) if degree[u] > 0)
    if len(core_vertices) > MAXCUT_COMPONENT_CAP:
        raise InfeasibleSizeError(
            f"2-core with {len(core_vertices)} vertices exceeds brute-force cap "
            f"{MAXCUT_COMPONENT_CAP}"
        )
    sides = [-1] * sub.n
    value = Fraction(0)
    if core_vertices:
        index = {u: i for i, u in enumerate(core_vertices)}
        core_edges = [
            WeightedEdge(index[p[0]], index[p[1]], w) for p, w in sorted(alive_pairs.items())
        ]
        core = WeightedGraph(len(core_vertices), core_edges)
        core_sides, core_value = _max_cut_component(core)
        for i, u in enumerate(core_vertices):
            sides[u] = core_sides[i]
        value += core_value
    # Re-attach stripped leaves opposite their neighbor; every such edge cuts.
    for u, v, w in reversed(stripped):
        if sides[v] == -1:
            sides[v] = 0
        sides[u] = 1 - sides[v]
        value += w
    for u in range(sub.n):
        if sides[u] == -1:
            sides[u] = 0
    return sides, value


def _max_cut_component(sub: WeightedGraph) -> tuple[list[int], Fraction]:
    size = sub.n
    int_w, lcm = _weights_as_ints(sub.edges)
    # Vertex i occupies bit (size-1-i): increasing mask order is then
    # lexicographic order of side-bitstrings, and fixing vertex 0 to side 0
    # keeps exactly one representative per cut.
    masks = np.arange(1 << (size - 1), dtype=np.uint32)
    values = np.zeros(len(masks), dtype=np.int64)
    for e, w in zip(sub.edges, int_w):
        pu, pv = size - 1 - e.u, size - 1 - e.v
        values += w * (((masks >> pu) ^ (masks >> pv)) & 1)
    best = int(np.argmax(values))  # argmax takes the first, i.e. lex-min
    local = [(best >> (size - 1 - i)) & 1 for i in range(size)]
    return local, Fraction(int(values[best]), lcm)


# ---------------------------------------------------------------------------
# The Quantum Max-Cut operator, matrix-free
# ---------------------------------------------------------------------------


class QmcOperator:
    """Matrix-free action of sum_e w_e (I - XX - YY - ZZ)/4 on edge qubits.

    Qubits are the non-isolated vertices of the graph in ascending order;
    qubit i is bit i of a basis index. For each edge and each basis state
    whose endpoint bits differ, the image gains w/2 times (amplitude minus
    the amplitude of the state with those bits swapped).
    """

    def __init__(self, g: WeightedGraph):
        self.vertices = g.non_isolated()
        self.qubits = len(self.vertices)
        if self.qubits > QMC_COMPONENT_CAP:
            raise InfeasibleSizeError(
                f"{self.qubits} qubits exceed the exact-diagonalization cap "
                f"{QMC_COMPONENT_CAP}"
            )
        self.dim = 1 << self.qubits
        qubit_of = {u: i for i, u in enumerate(self.vertices)}
        idx = np.arange(self.dim)
        self._terms = []
        for e in g.edges:
            pu, pv = qubit_of[e.u], qubit_of[e.v]
            differ = np.nonzero(((idx >> pu) ^ (idx >> pv)) & 1)[0]
            swapped = differ ^ ((1 << pu) | (1 << pv))
            self._terms.append((float(e.w), differ, swapped))
        self.total_weight = float(sum(w for w, _, _ in self._terms))

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        for w, differ, swapped in self._terms:
            out[differ] += (w / 2) * (psi[differ] - psi[swapped])
        return out

    def rayleigh(self, psi: np.ndarray) -> float:
        return float(np.real(np.vdot(psi, self.apply(psi))) / np.real(np.vdot(psi, psi)))

    def dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0
            out[:, i] = self.apply(e)
        return out


def qmc_apply(g: WeightedGraph, psi: np.ndarray) -> np.ndarray:
    """Unnormalized image Q psi over the non-isolated qubits of g."""
    op = QmcOperator(g)
    psi = np.asarray(psi)
    if psi.shape != (op.dim,):
        raise ValueError(f"state has dimension {psi.shape}, expected ({op.dim},)")
    return op.apply(psi)


class QmcConvergenceError(RuntimeError):
    def __init__(self, best_value: float, best_residual: float):
        super().__init__(
            f"Lanczos failed to converge: best value {best_value:.12g} "
            f"with residual {best_residual:.3e}"
        )
        self.best_value = best_value
        self.best_residual = best_residual


def _lanczos_top(op: QmcOperator, v0: np.ndarray, max_steps: int):
    """Largest Ritz pair from a fully reorthogonalized Lanczos run."""
    dim = op.dim
    steps = min(max_steps, dim)
    basis = np.zeros((steps, dim))
    alphas: list[float] = []
    betas: list[float] = []
    v = v0 / np.linalg.norm(v0)
    basis[0] = v
    k = 0
    for k in range(steps):
        w = op.apply(basis[k])
        alphas.append(float(np.dot(basis[k], w)))
        w -= alphas[k] * basis[k]
        if k > 0:
            w -= betas[k - 1] * basis[k - 1]
        # Full reorthogonalization, twice for numerical safety.
        for _ in range(2):
            w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
        b = float(np.linalg.norm(w))
        if k + 1 == steps or b < 1e-14:
            break
        betas.append(b)
        basis[k + 1] = w / b
    size = k + 1
    tri = np.diag(alphas[:size])
    for i in range(size - 1):
        tri[i, i + 1] = tri[i + 1, i] = betas[i]
    vals, vecs = np.linalg.eigh(tri)
    ritz = basis[:size].T @ vecs[:, -1]
    ritz /= np.linalg.norm(ritz)
    return float(vals[-1]), ritz


@dataclass(frozen=True)
class QmcResult:
    value: float
    witness: Optional[np.ndarray]
    residual: float


def qmc_exact(
    g: WeightedGraph,
    tol: float = 1e-9,
    seed: int = 0,
    restarts: int = 3,
    krylov: int = LANCZOS_KRYLOV_CAP,
) -> QmcResult:
    """Maximum eigenvalue of the QMC operator, with witness when it fits.

    Diagonalizes each connected component by restarted Lanczos with full
    reorthogonalization and sums the values. The witness is the product
    state over components, assembled only when the combined qubit count is
    at most 14.
    """
    comps = g.components()
    total = 0.0
    worst_residual = 0.0
    comp_states: list[tuple[list[int], np.ndarray]] = []
    for ci, comp in enumerate(comps):
        sub = g.induced_subgraph(comp)
        op = QmcOperator(sub)
        target = tol * max(op.total_weight, 1.0)
        converged: list[tuple[float, np.ndarray, float]] = []
        best_failed = (-np.inf, np.inf)
        for attempt in range(max(restarts, 3)):
            vec = substream(seed, 0x71C, ci, attempt).normal(size=op.dim)
            for _cycle in range(4):
                lam, vec = _lanczos_top(op, vec, krylov)
                res = float(np.linalg.norm(op.apply(vec) - lam * vec))
                if res <= target:
                    converged.append((lam, vec, res))
                    break
                if lam > best_failed[0]:
                    best_failed = (lam, res)
        if not converged:
            raise QmcConvergenceError(best_failed[0], best_failed[1])
        lam, vec, res = max(converged, key=lambda t: t[0])
        total += lam
        worst_residual = max(worst_residual, res)
        comp_states.append((comp, vec))

    all_qubits = sorted(u for comp, _ in comp_states for u in comp)
    witness = None
    if all_qubits and len(all_qubits) <= QMC_COMPONENT_CAP:
        witness = _assemble_product_state(all_qubits, comp_states)
    elif not all_qubits:
        witness = np.ones(1)
    return QmcResult(total, witness, worst_residual)


def _assemble_product_state(all_qubits, comp_states) -> np.ndarray:
    pos = {u: i for i, u in enumerate(all_qubits)}
    dim = 1 << len(all_qubits)
    idx = np.arange(dim)
    out = np.ones(dim)
    for comp, vec in comp_states:
        local = np.zeros(dim, dtype=np.int64)
        for i, u in enumerate(comp):
            local |= ((idx >> pos[u]) & 1) << i
        out = out * vec[local]
    return out


# ---------------------------------------------------------------------------
# Closed-form bounds and constructive assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QmcBounds:
    upper: Fraction  # m/2 + W/4
    lower_weighted: Fraction  # m/5 + W/10
    lower_unweighted: Optional[Fraction]  # m/4 + W/8, unit weights only


def qmc_bounds(g: WeightedGraph) -> QmcBounds:
    m = total_weight(g)
    w = max_incident_sum(g)
    return QmcBounds(
        upper=m / 2 + w / 4,
        lower_weighted=m / 5 + w / 10,
        lower_unweighted=(m / 4 + w / 8) if g.is_unit_weighted() else None,
    )


def star_optimal_state(d: int) -> tuple[np.ndarray, float]:
    """Optimal QMC state of the unit star with d leaves, and its energy.

    The state lives in the single-excitation subspace; its coefficients are
    the top eigenvector (d, -1, ..., -1) of the star Laplacian, and the
    energy achieved is (d+1)/2. Qubit 0 is the center.
    """
    if d < 1:
        raise ValueError("star degree must be at least 1")
    coeffs = np.full(d + 1, -1.0)
    coeffs[0] = d
    coeffs /= np.linalg.norm(coeffs)
    psi = np.zeros(1 << (d + 1))
    for i in range(d + 1):
        psi[1 << i] = coeffs[i]
    star = WeightedGraph(d + 1, [WeightedEdge(0, i + 1) for i in range(d)])
    energy = QmcOperator(star).rayleigh(psi)
    return psi, energy


def strip_odd_local(rho: DensityMatrix) -> DensityMatrix:
    """Zero out all odd-local Pauli coefficients of a state.

    Equivalent to averaging the state with its odd-local negation; the result
    is again a valid state and keeps every even-local coefficient, so it
    preserves two-qubit interaction energies while erasing single-qubit bias.
    """
    dec = pauli_decompose(rho.matrix)
    coeffs = dec.coeffs.copy()
    coeffs[dec.locality() % 2 == 1] = 0
    return DensityMatrix(pauli_reconstruct(type(dec)(dec.n, coeffs)))


@dataclass(frozen=True)
class ConstructiveEnergies:
    """Guaranteed QMC energies of the three explicit assignments.

    matching_value: singlets on the heaviest-edge matching, a quarter of the
    weight on every other edge. forest_cut_value: half of a perfect classical
    cut of the matching-plus-forest. dfs_level_value: optimal stars on the
    heavier half of the DFS levels plus a quarter elsewhere (unit weights
    only).
    """

    matching_value: Fraction
    forest_cut_value: Fraction
    dfs_level_value: Optional[Fraction]


def constructive_energies(g: WeightedGraph) -> ConstructiveEnergies:
    m = total_weight(g)
    hed = heaviest_edge_decomposition(g)
    matching_value = hed.matching_weight + (m - hed.matching_weight) / 4
    forest_cut_value = (hed.matching_weight + hed.forest_weight) / 2
    dfs_value = _dfs_level_value(g, m) if g.is_unit_weighted() and g.edges else None
    if not g.edges:
        matching_value = forest_cut_value = Fraction(0)
        dfs_value = Fraction(0) if g.is_unit_weighted() else None
    return ConstructiveEnergies(matching_value, forest_cut_value, dfs_value)


def _dfs_level_value(g: WeightedGraph, m: Fraction) -> Fraction:
    dec = dfs_decomposition(g)
    star_sum = Fraction(0)
    chosen_edges = 0
    n_comps = max(dec.component) + 1 if any(c >= 0 for c in dec.component) else 0
    for ci in range(n_comps):
        even_count = odd_count = 0
        for k, level in enumerate(dec.levels):
            count = sum(1 for p, _ in level if dec.component[p] == ci)
            if k % 2 == 0:
                even_count += count
            else:
                odd_count += count
        pick_even = even_count >= odd_count
        for k, level_stars in enumerate(dec.stars):
            if (k % 2 == 0) != pick_even:
                continue
            for center, leaves in level_stars:
                if dec.component[center] != ci:
                    continue
                d = len(leaves)
                star_sum += Fraction(d + 1, 2)
                chosen_edges += d
    return star_sum + (m - chosen_edges) / 4


def guaranteed_lower_bound(g: WeightedGraph) -> Fraction:
    """Best certified lower bound: constructions, clamped at the m/4 floor."""
    m = total_weight(g)
    ce = constructive_energies(g)
    candidates = [ce.matching_value, ce.forest_cut_value, m / 4]
    if ce.dfs_level_value is not None:
        candidates.append(ce.dfs_level_value)
    return max(candidates)
