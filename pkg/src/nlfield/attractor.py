"""Pullback attractor approximation and semicontinuity experiments.

The attractor at observation time t is approximated by endpoint sets of
pullback runs: seeded initial conditions drawn from the absorbing ball
are evolved from progressively earlier start times tau to t, and the
endpoint set is accepted once it stops moving between consecutive rungs
of the tau ladder.  Sets are compared in the one-sided Hausdorff sense
with the weighted norm underneath.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import _accel
from .dynamics import ProcessConfig, evolve
from .errors import EmptySetError, TimeOrderError
from .weighted_space import WeightedField, quad_weights, weighted_norm

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-3
BALL_SLACK = 0.1


@dataclass(frozen=True, eq=False)
class AttractorSample:
    """Endpoint set of a stabilized pullback run."""

    t: float
    members: tuple[WeightedField, ...]
    p: float
    taus: tuple[float, ...]
    seed: int
    digest: str
    converged: bool
    rung_gaps: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SemicontinuityCurve:
    """Attractor displacement against field perturbation size."""

    t: float
    epsilons: tuple[float, ...]
    distances: tuple[float, ...]
    envelopes: tuple[float, ...]
    converged: tuple[bool, ...]
    digest: str


def _n_workers() -> int:
    raw = os.environ.get("NLFIELD_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def absorbing_entry_time(t: float, radius_r: float, eps: float) -> float:
    """Latest start time from which a ball of the given radius has
    contracted into B(0; a + eps) by observation time t."""
    if not (radius_r > 0.0):
        raise ValueError(f"radius must be positive, got {radius_r}")
    if not (eps > 0.0):
        raise ValueError(f"eps must be positive, got {eps}")
    return t + math.log(eps / radius_r)


def sample_absorbing_ball(cfg: ProcessConfig, n_members: int, seed: int,
                          radius: float = None) -> list[WeightedField]:
    """Seeded initial conditions filling the absorbing ball.

    Half the members are constant fields on a symmetric value ladder
    (these ride the spatially homogeneous skeleton of the dynamics); the
    rest are sign-definite random Fourier fields, a bias level plus
    smooth low-mode fluctuations capped below the bias.  Keeping each
    random member on one side of zero probes genuinely nonconstant
    directions without nucleating interface pairs, whose coarsening
    times grow exponentially with their separation and would defeat any
    ladder of reachable depth.  Every member is rescaled into the ball
    when its weighted norm exceeds the radius.
    """
    if n_members < 1:
        raise ValueError("need at least one member")
    if radius is None:
        radius = cfg.nonlinearity.sup_abs + BALL_SLACK
    x = cfg.grid.nodes
    rng = np.random.default_rng(seed)

    n_const = (n_members + 1) // 2
    fields: list[WeightedField] = []
    levels = np.linspace(-radius, radius, n_const) if n_const > 1 else np.array([0.0])
    for c in levels:
        fields.append(WeightedField(cfg.grid, cfg.weight, np.full(x.shape, float(c))))

    n_modes = 6
    for j in range(n_members - n_const):
        sgn = 1.0 if j % 2 == 0 else -1.0
        bias = rng.uniform(0.35, 0.95)
        fluct = np.zeros_like(x)
        for _ in range(n_modes):
            k = rng.uniform(0.05, 1.5)
            amp = rng.normal(scale=bias / 10.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            fluct += amp * np.cos(k * x + phase)
        peak = float(np.max(np.abs(fluct)))
        if peak > 0.8 * bias:
            fluct *= 0.8 * bias / peak
        u = sgn * (bias + fluct)
        norm = weighted_norm(WeightedField(cfg.grid, cfg.weight, u), cfg.p)
        if norm > radius:
            u = u * (radius / norm)
        fields.append(WeightedField(cfg.grid, cfg.weight, u))
    return fields


def _stack(members) -> np.ndarray:
    if isinstance(members, AttractorSample):
        members = members.members
    members = list(members)
    if not members:
        raise EmptySetError("a set in the Hausdorff semidistance is empty")
    return np.stack([m.values for m in members]), members[0]


def hausdorff_semidist(a, b, p: float = 2.0) -> float:
    """One-sided set distance: sup over a of the nearest member of b.

    Accepts AttractorSamples or plain sequences of WeightedFields on a
    common grid and weight.
    """
    stack_a, first_a = _stack(a)
    stack_b, first_b = _stack(b)
    first_a.same_space(first_b)
    w = quad_weights(first_a.weight, first_a.grid)
    dist = _accel.pairwise_lp(stack_a, stack_b, w, float(p))
    return float(np.max(np.min(dist, axis=1)))


def _evolve_endpoints(fields, tau, t, cfg) -> list[np.ndarray]:
    def one(u0):
        return evolve(u0, tau, t, cfg).values

    workers = _n_workers()
    if workers == 1:
        return [one(u0) for u0 in fields]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, fields))


def _dedup(endpoints: list[np.ndarray], w: np.ndarray, p: float,
           tol: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for u in endpoints:
        fresh = True
        for v in kept:
            if (_accel.wpow_sum(np.abs(u - v), w, p)) ** (1.0 / p) <= tol:
                fresh = False
                break
        if fresh:
            kept.append(u)
    return kept


def approximate_pullback_attractor(t: float, cfg: ProcessConfig,
                                   n_samples: int,
                                   tau_ladder: Sequence[float],
                                   seed: int = 0,
                                   dedup_tol: float = DEDUP_TOL) -> AttractorSample:
    """Pullback endpoint set at time t, stabilized over a tau ladder.

    The same seeded initial family is restarted from each rung; rungs
    must be strictly decreasing and earlier than t.  When consecutive
    endpoint sets agree within the cluster tolerance the deeper one is
    returned as converged; an exhausted ladder returns the deepest rung
    flagged not converged.
    """
    taus = [float(x) for x in tau_ladder]
    if not taus:
        raise ValueError("tau ladder is empty")
    if any(tau >= t for tau in taus):
        raise TimeOrderError("every ladder rung must precede the observation time")
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau ladder must be strictly decreasing")

    fields = sample_absorbing_ball(cfg, n_samples, seed)
    w = quad_weights(cfg.weight, cfg.grid)
    p = cfg.p

    prev: list[np.ndarray] = None
    gaps: list[float] = []
    converged = False
    used: list[float] = []
    for tau in taus:
        endpoints = _dedup(_evolve_endpoints(fields, tau, t, cfg), w, p, dedup_tol)
        used.append(tau)
        if prev is not None:
            cur_f = [WeightedField(cfg.grid, cfg.weight, u) for u in endpoints]
            prev_f = [WeightedField(cfg.grid, cfg.weight, u) for u in prev]
            gap = max(hausdorff_semidist(cur_f, prev_f, p),
                      hausdorff_semidist(prev_f, cur_f, p))
            gaps.append(gap)
            if gap < dedup_tol:
                prev = endpoints
                converged = True
                break
        prev = endpoints

    if not converged:
        log.warning("tau ladder exhausted without stabilization (last gap %s)",
                    gaps[-1] if gaps else "n/a")
    members = tuple(WeightedField(cfg.grid, cfg.weight, u) for u in prev)
    return AttractorSample(t=t, members=members, p=p, taus=tuple(used),
                           seed=seed, digest=cfg.digest(), converged=converged,
                           rung_gaps=tuple(gaps))


def upper_semicontinuity_sweep(t: float, cfg0: ProcessConfig,
                               eps_list: Sequence[float],
                               n_samples: int,
                               tau_ladder: Sequence[float],
                               seed: int = 0,
                               dedup_tol: float = DEDUP_TOL) -> SemicontinuityCurve:
    """Attractor displacement under the shrinking-field family.

    Each eps scales the external field to (1 - eps) of its amplitude,
    so the sup gap to the unperturbed field is eps times the field's
    sup.  All runs share seeds, making the eps = 0 leg exactly zero.
    The reported envelope is the trajectory-level exponential bound at
    the deepest ladder horizon, an upper reference only.
    """
    from .bounds import continuity_envelope

    base = approximate_pullback_attractor(t, cfg0, n_samples, tau_ladder,
                                          seed=seed, dedup_tol=dedup_tol)
    horizon = t - min(base.taus)
    dists: list[float] = []
    envs: list[float] = []
    flags: list[bool] = []
    for eps in eps_list:
        if eps == 0.0:
            sample = base
        else:
            cfg_eps = replace(cfg0, field=cfg0.field.scaled(1.0 - eps))
            sample = approximate_pullback_attractor(t, cfg_eps, n_samples,
                                                    tau_ladder, seed=seed,
                                                    dedup_tol=dedup_tol)
        dists.append(hausdorff_semidist(sample, base, cfg0.p))
        envs.append(continuity_envelope(cfg0, eps * cfg0.field.sup, horizon)
                    + dedup_tol)
        flags.append(sample.converged and base.converged)
    return SemicontinuityCurve(t=t, epsilons=tuple(float(e) for e in eps_list),
                               distances=tuple(dists), envelopes=tuple(envs),
                               converged=tuple(flags), digest=cfg0.digest())
