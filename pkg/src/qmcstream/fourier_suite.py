"""Randomized numerical verification of the Fourier toolbox.

Each check replays one identity or inequality on freshly sampled instances
and records the worst deviation; the suite passes when no deviation exceeds
its tolerance. The report is JSON-friendly and fully determined by the seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fourier as fr
from .dihp import sample_partial_matching
from .linalg import (
    Superoperator,
    random_channel,
    random_density,
    random_matrix,
    random_unitary,
    trace_norm,
)
from .rng import substream


@dataclass
class CheckRecord:
    count: int = 0
    violations: int = 0
    max_deviation: float = 0.0
    tolerance: float = 0.0

    def add(self, deviation: float, tolerance: float) -> None:
        self.count += 1
        self.tolerance = tolerance
        self.max_deviation = max(self.max_deviation, float(deviation))
        if deviation > tolerance:
            self.violations += 1

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "violations": self.violations,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
        }


def _random_bit_rows(rng, k: int, n: int) -> list[int]:
    return [int(rng.integers(0, 1 << n)) for _ in range(k)]


def constant_channel(dim: int, target: int) -> Superoperator:
    kraus = []
    for i in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[target, i] = 1.0
        kraus.append(k)
    return Superoperator.from_kraus(kraus)


def random_toy_protocol(rng: np.random.Generator) -> fr.ToyProtocol:
    n = int(rng.integers(2, 5))
    alpha_n = int(rng.integers(1, n // 2 + 1))
    t_players = int(rng.integers(2, 4))
    beta = int(rng.integers(1, 3))
    dim = 1 << beta
    matchings = tuple(sample_partial_matching(rng, n, alpha_n) for _ in range(t_players))
    channels = []
    for _t in range(t_players):
        row = []
        for y in range(1 << alpha_n):
            kind = rng.integers(0, 5)
            if kind == 0:
                row.append(Superoperator.identity(dim))
            elif kind == 1:
                row.append(Superoperator.from_unitary(random_unitary(rng, dim)))
            elif kind == 2:
                row.append(constant_channel(dim, y % dim))
            elif kind == 3:
                row.append(Superoperator.depolarizing(dim))
            else:
                row.append(random_channel(rng, dim, 2))
        channels.append(tuple(row))
    return fr.ToyProtocol(n, beta, alpha_n, matchings, tuple(channels))


def _check_matrix_convolution(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(1, 4))
        a, b, c = (int(rng.integers(1, 4)) for _ in range(3))
        scalar_f = rng.random() < 0.25
        scalar_g = rng.random() < 0.25
        size = 1 << n
        if scalar_f:
            f = fr.BooleanTable(n, "scalar", random_matrix(rng, size, 1)[:, 0])
        else:
            f = fr.BooleanTable(n, "matrix", np.array([random_matrix(rng, a, b) for _ in range(size)]))
        g_rows = b if not scalar_f else int(rng.integers(1, 4))
        if scalar_g:
            g = fr.BooleanTable(n, "scalar", random_matrix(rng, size, 1)[:, 0])
        else:
            g = fr.BooleanTable(n, "matrix", np.array([random_matrix(rng, g_rows, c) for _ in range(size)]))
        if scalar_f and not scalar_g:
            prod = np.array([f.values[x] * g.values[x] for x in range(size)])
            kind = "matrix"
        elif scalar_g and not scalar_f:
            prod = np.array([f.values[x] * g.values[x] for x in range(size)])
            kind = "matrix"
        elif scalar_f and scalar_g:
            prod = np.array([f.values[x] * g.values[x] for x in range(size)])
            kind = "scalar"
        else:
            prod = np.array([f.values[x] @ g.values[x] for x in range(size)])
            kind = "matrix"
        direct = fr.transform(fr.BooleanTable(n, kind, prod)).coeffs
        viaconv = fr.convolve(fr.transform(f), fr.transform(g))
        rec.add(float(np.max(np.abs(direct - viaconv))), 1e-9)


def _check_operator_convolution(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(1, 4))
        beta = int(rng.integers(1, 3))
        dim = 1 << beta
        size = 1 << n
        fam = fr.BooleanTable(
            n, "superoperator", np.array([random_channel(rng, dim, 2).matrix for _ in range(size)])
        )
        tab = fr.BooleanTable(n, "matrix", np.array([random_matrix(rng, dim, dim) for _ in range(size)]))
        applied = fr.BooleanTable(
            n,
            "matrix",
            np.array([(fam.values[x] @ tab.values[x].reshape(-1)).reshape(dim, dim) for x in range(size)]),
        )
        direct = fr.transform(applied).coeffs
        viaconv = fr.operator_convolve(fr.transform(fam), fr.transform(tab))
        rec.add(float(np.max(np.abs(direct - viaconv))), 1e-9)


def _check_parseval(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(1, 9))
        vals = rng.normal(size=1 << n)
        ft = fr.transform(fr.BooleanTable(n, "scalar", vals.astype(complex)))
        lhs = float(np.mean(vals**2))
        rhs = float(np.sum(np.abs(ft.coeffs) ** 2))
        rec.add(abs(lhs - rhs), 1e-10)


def _check_linear_constraints(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 5))
        rows = _random_bit_rows(rng, k, n)
        y = int(rng.integers(0, 1 << k))
        direct = fr.constraint_indicator_coeffs(rows, y, n).coeffs
        predicted = fr.predicted_constraint_coeffs(rows, y, n)
        rec.add(float(np.max(np.abs(direct - predicted))), 1e-10)


def _check_factoring_support(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n))
        rows = _random_bit_rows(rng, k, n)
        dim = int(rng.integers(1, 4))
        images = [random_matrix(rng, dim, dim) for _ in range(1 << k)]
        values = []
        for x in range(1 << n):
            mx = 0
            for i, row in enumerate(rows):
                mx |= fr._parity_int(x & row) << i
            values.append(images[mx])
        ft = fr.transform(fr.BooleanTable(n, "matrix", np.array(values)))
        rec.add(fr.support_defect(ft, fr.row_space_masks(rows)), 1e-10)


def _check_schatten_hc(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(1, 5))
        dim = int(rng.integers(1, 5))
        raw = [random_matrix(rng, dim, dim) for _ in range(1 << n)]
        # Unit-trace-norm entries: both the base^{1/p} and base^{2/p} forms
        # apply (base <= 1).
        bounded = np.array([v / max(1.0, trace_norm(v)) for v in raw])
        tab = fr.BooleanTable(n, "matrix", bounded)
        for p in (1.25, 1.5, 2.0):
            lhs, base = fr.schatten_weighted_sum(tab, p)
            rec.add(max(lhs - base ** (1.0 / p), 0.0), 1e-9)
        # Scale-free form on the unnormalized table.
        raw_tab = fr.BooleanTable(n, "matrix", np.array(raw))
        for p in (1.25, 1.5, 2.0):
            lhs, base = fr.schatten_weighted_sum(raw_tab, p)
            rec.add(max(lhs - base ** (2.0 / p), 0.0), 1e-9)


def _check_trace_hc(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        beta = int(rng.integers(1, 3))
        tab = fr.BooleanTable(
            4, "matrix", np.array([random_density(rng, 1 << beta).matrix for _ in range(16)])
        )
        for delta in (0.0, 0.5, 1.0):
            r = fr.hypercontractivity_sums(tab, delta)
            rec.add(max(r.lhs - r.bound, 0.0), 1e-9)


def _check_channel_support(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, 3))
        rows = _random_bit_rows(rng, k, n)
        dim = 2
        images = [random_channel(rng, dim, 2).matrix for _ in range(1 << k)]
        values = []
        for x in range(1 << n):
            mx = 0
            for i, row in enumerate(rows):
                mx |= fr._parity_int(x & row) << i
            values.append(images[mx])
        ft = fr.transform(fr.BooleanTable(n, "superoperator", np.array(values)))
        rec.add(fr.support_defect(ft, fr.row_space_masks(rows)), 1e-10)


def _check_mass_transfer(rng, rec: CheckRecord, count: int) -> None:
    for _ in range(count):
        p = random_toy_protocol(rng)
        tables = fr.protocol_states(p)
        for t in range(p.t_players):
            fam = fr.BooleanTable(
                p.n,
                "superoperator",
                np.array([p.channels[t][p.label(t, x)].matrix for x in range(1 << p.n)]),
            )
            a_hat = fr.transform(fam)
            f_prev_hat = fr.transform(tables[t])
            f_next_hat = fr.transform(tables[t + 1])
            dim = p.dim
            for s_idx in range(1 << p.n):
                acc = np.zeros((dim, dim), dtype=complex)
                for s in range(1 << p.alpha_n):
                    mask = p.matching_mask(t, s)
                    acc += (
                        a_hat.coeffs[mask] @ f_prev_hat.coeffs[mask ^ s_idx].reshape(-1)
                    ).reshape(dim, dim)
                rec.add(float(np.max(np.abs(acc - f_next_hat.coeffs[s_idx]))), 1e-9)


def _check_phi_bound(rng, rec: CheckRecord, count: int) -> None:
    result = fr.phibound_experiment(fr.parity_forwarding_protocol())
    rec.add(max(result.lhs - result.rhs, 0.0), 1e-9)
    for _ in range(count - 1):
        result = fr.phibound_experiment(random_toy_protocol(rng))
        rec.add(max(result.lhs - result.rhs, 0.0), 1e-9)


_CHECKS: list[tuple[str, Callable, int, int]] = [
    # (name, runner, full count, quick count)
    ("matrix_convolution", _check_matrix_convolution, 200, 20),
    ("operator_convolution", _check_operator_convolution, 100, 10),
    ("parseval", _check_parseval, 200, 20),
    ("linear_constraints", _check_linear_constraints, 100, 10),
    ("factoring_support", _check_factoring_support, 100, 10),
    ("schatten_hypercontractivity", _check_schatten_hc, 200, 20),
    ("trace_hypercontractivity", _check_trace_hc, 1000, 30),
    ("channel_support", _check_channel_support, 100, 10),
    ("mass_transfer", _check_mass_transfer, 50, 5),
    ("phi_bound", _check_phi_bound, 50, 5),
]


def verify_fourier_lemmas(seed: int = 0, quick: bool = False) -> dict:
    """Run every check; returns a JSON-ready report keyed by check name."""
    checks = {}
    all_passed = True
    for idx, (name, runner, full, fast) in enumerate(_CHECKS):
        rec = CheckRecord()
        runner(substream(seed, 0xF0, idx), rec, fast if quick else full)
        checks[name] = rec.as_dict()
        all_passed = all_passed and rec.violations == 0
    return {
        "schema": 1,
        "seed": int(seed),
        "quick": bool(quick),
        "checks": checks,
        "all_passed": all_passed,
    }
