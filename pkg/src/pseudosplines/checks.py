"""Runnable verification suites with explicit margins.

Each check compares an observed deviation against a limit and records both,
so callers (tests, the `verify` CLI command) can print margins rather than
bare booleans.  Limits scale with `tolerance_scale`, which exists so a
deliberately impossible scale can exercise the failure path honestly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import frames
from .analysis import lowpass_condition
from .cascade import refinement_residual, run_cascade
from .symbol import (
    PseudoSplineOrder,
    TorusGrid,
    eval_H0,
    eval_p,
    eval_q,
    eval_q_prime,
    lipschitz_check,
    partition_extrema,
    theta_bound,
)

__all__ = [
    "CheckResult",
    "default_bank_resolution",
    "run_symbol_checks",
    "run_cascade_checks",
    "run_frames_checks",
    "run_all",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    observed: float
    limit: float

    @property
    def passed(self) -> bool:
        return self.observed <= self.limit

    @property
    def margin(self) -> float:
        return self.limit - self.observed

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "observed": self.observed,
            "limit": self.limit,
            "passed": self.passed,
            "margin": self.margin,
        }


def default_bank_resolution(order: PseudoSplineOrder) -> int:
    """8192, doubled to 16384 for fractional shifts (slower coefficient decay).

    A fractional u makes the sampled symbols vanish only to finite order at
    the periodization seam, so the coefficient tail needs a larger max_k to
    reach the default truncation eps.
    """
    if order.shift != int(order.shift):
        return 16384
    return 8192


def run_symbol_checks(
    order: PseudoSplineOrder, resolution: int = 4096, tolerance_scale: float = 1.0
) -> list[CheckResult]:
    s = tolerance_scale
    grid = TorusGrid(resolution)
    results: list[CheckResult] = []

    ext = partition_extrema(order, grid)
    theta = theta_bound(order)
    results.append(CheckResult("partition_min_matches_theta", abs(ext.min - theta), 1e-10 * s))
    results.append(CheckResult("partition_max_is_one", abs(ext.max - 1.0), 1e-12 * s))
    results.append(CheckResult("symbol_at_zero", abs(eval_H0(order, 0.0) - 1.0), 1e-13 * s))

    xs = np.linspace(0.0, 1.0, 21)
    pd = np.asarray(eval_p(order, xs, form="definition"))
    pt = np.asarray(eval_p(order, xs, form="taylor"))
    scale = np.maximum(np.abs(pt), 1.0)
    results.append(CheckResult("p_form_equivalence", float(np.max(np.abs(pd - pt) / scale)), 1e-12 * s))

    h = 1e-6
    xs_fd = np.linspace(0.1, 0.9, 9)
    exact = np.asarray(eval_q_prime(order, xs_fd))
    fd = (np.asarray(eval_q(order, xs_fd + h)) - np.asarray(eval_q(order, xs_fd - h))) / (2 * h)
    rel = np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-12)
    results.append(CheckResult("q_prime_finite_difference", float(np.max(rel)), 1e-6 * s))

    if order.shift != 0.0:
        g = grid.gamma
        shifted = np.asarray(eval_H0(order, g))
        base = np.asarray(eval_H0(order.unshifted, g)) * np.exp(-2j * np.pi * order.shift * g)
        results.append(CheckResult("shift_phase_identity", float(np.max(np.abs(shifted - base))), 1e-13 * s))

    results.append(CheckResult("lipschitz_constant_bounded", lipschitz_check(order, grid), 1e6 * s))
    return results


def run_cascade_checks(
    order: PseudoSplineOrder,
    levels: int = 24,
    window: float = 64.0,
    step: float = 1.0 / 64.0,
    tolerance_scale: float = 1.0,
) -> list[CheckResult]:
    s = tolerance_scale
    profile, diag = run_cascade(order, levels=levels, window=window, step=step)
    results = [
        CheckResult(
            "l2_nonincreasing",
            max([b - a for a, b in zip(diag.l2_norms[:-1], diag.l2_norms[1:])], default=0.0),
            1e-10 * s,
        ),
        CheckResult("l2_bounded_by_one", max(diag.l2_norms) - 1.0, 1e-10 * s),
        CheckResult("modulus_bounded_by_one", diag.max_modulus - 1.0, 1e-12 * s),
        CheckResult("value_at_zero_is_one", abs(profile.value_at_zero() - 1.0), 1e-13 * s),
        CheckResult("refinement_residual", refinement_residual(profile), 1e-6 * s),
        CheckResult("final_sup_change", diag.sup_changes[-1], 1e-8 * s),
    ]
    return results


def run_frames_checks(
    order: PseudoSplineOrder,
    resolution: int | None = None,
    truncation_eps: float = 1e-10,
    signals: int = 50,
    signal_length: int = 1024,
    seed: int = 7,
    tolerance_scale: float = 1.0,
) -> list[CheckResult]:
    s = tolerance_scale
    if resolution is None:
        resolution = default_bank_resolution(order)
    bank = frames.build_bank(order, TorusGrid(resolution), truncation_eps=truncation_eps)
    results = [
        CheckResult("uep_diagonal", bank.uep_diagonal_error, 1e-10 * s),
        CheckResult("uep_offdiagonal", bank.uep_offdiagonal_error, 1e-10 * s),
    ]

    g = bank.grid.gamma
    sigma = np.asarray(frames.eval_sigma(order, g))
    eta = np.asarray(frames.eval_eta(order, g))
    results.append(
        CheckResult("sigma_squared_equals_eta", float(np.max(np.abs(np.abs(sigma) ** 2 - eta))), 1e-12 * s)
    )

    zero_index = resolution // 2
    moment = max(abs(complex(bank.symbol(n).values[zero_index])) for n in (1, 2, 3))
    results.append(CheckResult("vanishing_moments", moment, 1e-12 * s))

    limit = max(1e-8, 10.0 * truncation_eps)
    rng = np.random.default_rng(seed)
    worst_energy = 0.0
    worst_roundtrip = 0.0
    for _ in range(signals):
        data = rng.standard_normal(signal_length) + 1j * rng.standard_normal(signal_length)
        signal = frames.PeriodicSignal(data)
        subbands = frames.analyze(bank, signal)
        energy = sum(float(np.sum(np.abs(sub) ** 2)) for sub in subbands)
        worst_energy = max(worst_energy, abs(energy - signal.energy()) / signal.energy())
        back = frames.synthesize(bank, subbands)
        err = float(np.linalg.norm(back.samples - signal.samples) / np.linalg.norm(signal.samples))
        worst_roundtrip = max(worst_roundtrip, err)
    results.append(CheckResult("discrete_parseval", worst_energy, limit * s))
    results.append(CheckResult("perfect_reconstruction", worst_roundtrip, limit * s))

    ok, total = lowpass_condition(order)
    results.append(CheckResult("lowpass_arctan_in_range", 0.0 if ok else abs(total), 0.5 * math.pi * s))
    return results


def run_all(
    order: PseudoSplineOrder,
    symbol_resolution: int = 4096,
    frames_resolution: int | None = None,
    levels: int = 24,
    window: float = 64.0,
    step: float = 1.0 / 64.0,
    truncation_eps: float = 1e-10,
    signals: int = 50,
    signal_length: int = 1024,
    seed: int = 7,
    tolerance_scale: float = 1.0,
) -> dict[str, list[CheckResult]]:
    return {
        "symbol": run_symbol_checks(order, symbol_resolution, tolerance_scale),
        "cascade": run_cascade_checks(order, levels, window, step, tolerance_scale),
        "frames": run_frames_checks(
            order, frames_resolution, truncation_eps, signals, signal_length, seed, tolerance_scale
        ),
    }
