"""Wasserstein distances (exact LP oracle plus entropic solver), truncation
coupling bounds, relative entropy between Gibbs truncations, transportation
inequality checks and the Gaussian tail-sum bound.

All D_{L^2} style numbers produced here are explicit-coupling upper bounds
(coordinate projection or regression estimate of E(x | F_n)); the true
infimum over couplings of metric measure spaces is never computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.special import logsumexp

from . import hamiltonians as ham
from .sampling import ChainConfig, GaussianReference, PhaseDomain, run_pcn_chain
from .spectral import FourierField, Lattice


# ---------------------------------------------------------------------------
# measures, costs, plans
# ---------------------------------------------------------------------------

@dataclass
class EmpiricalMeasure:
    """Weighted point cloud in coordinate space (zero-pad lower truncations
    into a common lattice before building the cloud)."""

    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        m = self.points.shape[0]
        if self.weights is None:
            self.weights = np.full(m, 1.0 / m)
        else:
            self.weights = np.asarray(self.weights, dtype=float)
            if np.any(self.weights < -1e-15):
                raise ValueError("weights must be nonnegative")
            tot = self.weights.sum()
            if abs(tot - 1.0) > 1e-12:
                self.weights = self.weights / tot

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class CostSpec:
    """cost(x, y) = (sum_i w_i (x_i - y_i)^2)^{order/2}; ground weights w
    default to 1 (coefficient l^2) or an H^{-s} weight vector."""

    order: float = 2.0
    ground_weights: np.ndarray | None = None

    def matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        dx = xs[:, None, :] - ys[None, :, :]
        if self.ground_weights is not None:
            d2 = np.einsum("ijk,k->ij", dx ** 2, self.ground_weights)
        else:
            d2 = np.sum(dx ** 2, axis=-1)
        d2 = np.maximum(d2, 0.0)
        return d2 ** (self.order / 2.0)


@dataclass
class TransportPlan:
    plan: np.ndarray
    marginal_residual: float
    objective: float                # sum_ij plan_ij cost_ij


def _plan_residual(plan, a, b) -> float:
    return max(float(np.max(np.abs(plan.sum(axis=1) - a))),
               float(np.max(np.abs(plan.sum(axis=0) - b))))


def wasserstein_exact(mu: EmpiricalMeasure, nu: EmpiricalMeasure,
                      cost: CostSpec = CostSpec()):
    """Exact optimal transport on oracle-size instances (support <= 256).
    Uniform equal-size clouds use the assignment solver; the general case
    solves the LP with HiGHS.  Returns (W_s value, TransportPlan)."""
    m, n = len(mu), len(nu)
    if max(m, n) > 256:
        raise ValueError("exact oracle is limited to 256 support points; use sinkhorn")
    c = cost.matrix(mu.points, nu.points)
    uniform = (m == n and np.allclose(mu.weights, 1.0 / m)
               and np.allclose(nu.weights, 1.0 / n))
    if uniform:
        rows, cols = linear_sum_assignment(c)
        plan = np.zeros_like(c)
        plan[rows, cols] = 1.0 / m
    else:
        a_eq = []
        b_eq = []
        for i in range(m):
            row = np.zeros((m, n))
            row[i, :] = 1.0
            a_eq.append(row.ravel())
            b_eq.append(mu.weights[i])
        for j in range(n - 1):          # drop one redundant constraint
            col = np.zeros((m, n))
            col[:, j] = 1.0
            a_eq.append(col.ravel())
            b_eq.append(nu.weights[j])
        res = linprog(c.ravel(), A_eq=np.array(a_eq), b_eq=np.array(b_eq),
                      bounds=(0, None), method="highs")
        if not res.success:
            raise RuntimeError(f"LP failed: {res.message}")
        plan = res.x.reshape(m, n)
    obj = float(np.sum(plan * c))
    value = obj ** (1.0 / cost.order)
    return value, TransportPlan(plan, _plan_residual(plan, mu.weights, nu.weights), obj)


def sinkhorn(mu: EmpiricalMeasure, nu: EmpiricalMeasure, cost: CostSpec,
             eps: float, max_iter: int = 2000, tol: float = 1e-9,
             eps_scaling: bool = True):
    """Log-domain Sinkhorn with a geometric eps-scaling schedule and warm
    starts; the returned objective is the plan cost sum plan * cost, which
    decreases toward the exact optimum as eps drops."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    c = cost.matrix(mu.points, nu.points)
    a, b = mu.weights, nu.weights
    la, lb = np.log(a + 1e-300), np.log(b + 1e-300)
    scale = float(np.max(c)) if np.max(c) > 0 else 1.0
    if eps_scaling:
        eps_list = []
        e = max(scale / 8.0, eps)
        while e > eps * 1.0001:
            eps_list.append(e)
            e /= 2.0
        eps_list.append(eps)
    else:
        eps_list = [eps]
    f = np.zeros(len(a))
    g = np.zeros(len(b))
    for e in eps_list:
        for it in range(max_iter):
            f = -e * logsumexp((g[None, :] - c) / e + lb[None, :], axis=1)
            g = -e * logsumexp((f[:, None] - c) / e + la[:, None], axis=0)
            if it % 10 == 9:
                plan = np.exp((f[:, None] + g[None, :] - c) / e
                              + la[:, None] + lb[None, :])
                if _plan_residual(plan, a, b) < tol:
                    break
    plan = np.exp((f[:, None] + g[None, :] - c) / eps_list[-1]
                  + la[:, None] + lb[None, :])
    plan = _round_to_marginals(plan, a, b)
    resid = _plan_residual(plan, a, b)
    converged = resid < max(tol, 1e-8)
    obj = float(np.sum(plan * c))
    value = obj ** (1.0 / cost.order)
    return value, TransportPlan(plan, resid, obj), converged


def _round_to_marginals(plan: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Round an approximate plan onto the transport polytope (scale rows and
    columns down, then spread the leftover mass rank-one); the objective
    moves by at most the l1 marginal slack times the largest cost."""
    r = plan.sum(axis=1)
    plan = plan * np.minimum(1.0, a / np.maximum(r, 1e-300))[:, None]
    col = plan.sum(axis=0)
    plan = plan * np.minimum(1.0, b / np.maximum(col, 1e-300))[None, :]
    da = a - plan.sum(axis=1)
    db = b - plan.sum(axis=0)
    slack = da.sum()
    if slack > 1e-300:
        plan = plan + np.outer(da, db) / slack
    return plan


def sinkhorn_divergence(mu: EmpiricalMeasure, nu: EmpiricalMeasure, cost: CostSpec,
                        eps: float, **kw) -> float:
    """Debiased entropic cost: S = C(mu, nu) - C(mu, mu)/2 - C(nu, nu)/2
    on plan costs, clipped at 0; returned in W_s units (power 1/order)."""
    _, p_xy, _ = sinkhorn(mu, nu, cost, eps, **kw)
    _, p_xx, _ = sinkhorn(mu, mu, cost, eps, **kw)
    _, p_yy, _ = sinkhorn(nu, nu, cost, eps, **kw)
    s = max(p_xy.objective - 0.5 * p_xx.objective - 0.5 * p_yy.objective, 0.0)
    return s ** (1.0 / cost.order)


# ---------------------------------------------------------------------------
# truncation coupling bound (conditional-expectation coupling)
# ---------------------------------------------------------------------------

def head_coordinate_mask(lattice: Lattice, n: int, reality: bool,
                         zero_mode: bool) -> np.ndarray:
    """Boolean mask over the field_coords layout selecting modes |k_j| <= n."""
    if reality:
        j = np.arange(1, lattice.n + 1)
        keep = j <= n
        parts = [keep, keep]
        if zero_mode:
            parts.append(np.array([True]))
        return np.concatenate(parts)
    if lattice.dim == 1:
        flags = np.abs(lattice.axis_modes()) <= n
    else:
        k1, k2 = lattice.mode_arrays()
        flags = (np.abs(k1) <= n) & (np.abs(k2) <= n)
    flags = flags.reshape(-1)
    if not zero_mode:
        z = np.ravel_multi_index(lattice.zero_index(), lattice.shape)
        keep = np.ones(flags.size, dtype=bool)
        keep[z] = False
        flags = flags[keep]
    return np.concatenate([flags, flags])


def truncation_coupling_bound(coords: np.ndarray, lattice: Lattice, n: int,
                              reality: bool = False, zero_mode: bool = True,
                              estimator: str = "projection", knn: int = 8) -> dict:
    """Empirical E ||x - E(x|F_n)||^2 in coefficient l^2; an upper bound for
    the squared L^2 transportation distance between the n-truncation and the
    full ensemble.  estimator "projection" (exact for product references)
    conditions by zeroing; "knn" regresses tail coordinates on the head."""
    if n >= lattice.n:
        return {"n": n, "value": 0.0, "stderr": 0.0, "estimator": estimator,
                "degenerate": True}
    mask = head_coordinate_mask(lattice, n, reality, zero_mode)
    tail = coords[:, ~mask]
    if estimator == "projection":
        per = np.sum(tail ** 2, axis=1)
    elif estimator == "knn":
        head = coords[:, mask]
        d2 = np.sum((head[:, None, :] - head[None, :, :]) ** 2, axis=-1)
        np.fill_diagonal(d2, np.inf)
        idx = np.argpartition(d2, knn, axis=1)[:, :knn]
        cond = tail[idx].mean(axis=1)
        per = np.sum((tail - cond) ** 2, axis=1)
    else:
        raise ValueError("estimator must be 'projection' or 'knn'")
    b = per.shape[0]
    return {"n": n, "value": float(np.mean(per)),
            "stderr": float(np.std(per, ddof=1) / math.sqrt(b)),
            "estimator": estimator, "degenerate": False}


# ---------------------------------------------------------------------------
# relative entropy between GP truncations
# ---------------------------------------------------------------------------

def relative_entropy_truncation(potential: FourierField, lam: float,
                                domain: PhaseDomain, lattice: Lattice, n: int,
                                chain: ChainConfig, n_z_samples: int,
                                z_seed: int) -> dict:
    """Ent(nu_n | nu) = E_{nu_n}[U(P_n u) - U(u)] + log Z - log Z_n, sampling
    nu_n by pCN and estimating both partition functions by importance
    sampling from the common Gaussian reference (shared draws, so the log
    ratio is jackknifed on paired weights)."""
    reference = GaussianReference(lattice, rho=0.0, field_type="complex")
    model_n = ham.GrossPitaevskiiProjected(potential, lam, n_project=n)
    ens, stats = run_pcn_chain(model_n, domain, reference, chain)
    from .spectral import projection_multiplier, ProjectionSpec
    mask = projection_multiplier(ProjectionSpec.dirichlet(n), lattice)
    u_n_vals = ham.gp_wick_interaction_batch(ens.coefs * mask, lattice, potential, lam)
    u_f_vals = ham.gp_wick_interaction_batch(ens.coefs, lattice, potential, lam)
    du = u_n_vals - u_f_vals
    mean_du = float(np.mean(du))
    se_du = _block_se(du)
    rng = np.random.default_rng(z_seed)
    draws = reference.sample_batch(rng, n_z_samples)
    inside = domain.contains_batch(draws, lattice)
    lw_full = ham.gp_wick_interaction_batch(draws, lattice, potential, lam)
    lw_n = ham.gp_wick_interaction_batch(draws * mask, lattice, potential, lam)
    w_full = np.where(inside, np.exp(np.minimum(lw_full, 700.0)), 0.0)
    w_n = np.where(inside, np.exp(np.minimum(lw_n, 700.0)), 0.0)
    log_ratio, se_ratio = _paired_log_ratio(w_full, w_n)
    ent = mean_du + log_ratio
    stderr = math.hypot(se_du, se_ratio)
    reliable = np.mean(inside) > 0 and _ess(w_full) >= 30 and _ess(w_n) >= 30
    return {"n": n, "entropy": ent, "stderr": stderr, "mean_delta_u": mean_du,
            "log_z_ratio": log_ratio, "acceptance": stats.acceptance_rate,
            "reliable": bool(reliable)}


def _block_se(values: np.ndarray, n_blocks: int = 30) -> float:
    m = len(values)
    nb = min(n_blocks, m)
    edges = np.linspace(0, m, nb + 1, dtype=int)
    means = [values[a:b].mean() for a, b in zip(edges[:-1], edges[1:]) if b > a]
    return float(np.std(means, ddof=1) / math.sqrt(len(means)))


def _paired_log_ratio(w_full: np.ndarray, w_n: np.ndarray, n_blocks: int = 30):
    stat = lambda pair: math.log(np.mean(pair[:, 0])) - math.log(np.mean(pair[:, 1]))
    pair = np.column_stack([w_full, w_n])
    m = len(pair)
    nb = min(n_blocks, m)
    edges = np.linspace(0, m, nb + 1, dtype=int)
    full = stat(pair)
    loo = []
    for i in range(nb):
        keep = np.ones(m, dtype=bool)
        keep[edges[i]:edges[i + 1]] = False
        loo.append(stat(pair[keep]))
    loo = np.asarray(loo)
    se = math.sqrt(max(0.0, (nb - 1) / nb * float(np.sum((loo - loo.mean()) ** 2))))
    return full, se


def _ess(w: np.ndarray) -> float:
    s = w.sum()
    return s * s / np.sum(w ** 2) if s > 0 else 0.0


# ---------------------------------------------------------------------------
# transportation inequality check
# ---------------------------------------------------------------------------

def transport_inequality_check(coords: np.ndarray, tilt_xi: np.ndarray, t: float,
                               alpha: float, cost: CostSpec = CostSpec(),
                               eps_rel: float = 0.02, support: int = 160,
                               seed: int = 0, n_resample: int = 2) -> dict:
    """W_2(omega, nu)^2 <= (2/alpha) Ent(omega | nu) for the exponential
    tilt omega = Z_t^{-1} e^{t <x, xi>} nu, with Ent computed from the exact
    density ratio and W_2 from the debiased entropic divergence on
    subsampled supports."""
    g = coords @ tilt_xi
    lw = t * g
    lw -= lw.max()
    w = np.exp(lw)
    w /= w.sum()
    log_mgf = float(logsumexp(t * g) - math.log(len(g)))
    ent = float(np.sum(w * (t * g))) - log_mgf
    rng = np.random.default_rng(seed)
    w2_sq = []
    for _ in range(n_resample):
        idx = rng.choice(len(g), size=min(support, len(g)), replace=False)
        mu = EmpiricalMeasure(coords[idx])
        nu = EmpiricalMeasure(coords[idx], w[idx])
        cmat_scale = float(np.mean(cost.matrix(mu.points[:16], mu.points[:16])))
        eps = max(eps_rel * max(cmat_scale, 1e-12), 1e-9)
        val = sinkhorn_divergence(mu, nu, cost, eps)
        w2_sq.append(val ** cost.order)
    w2_sq = np.asarray(w2_sq)
    est = float(np.mean(w2_sq))
    se = float(np.std(w2_sq, ddof=1) / math.sqrt(len(w2_sq))) if len(w2_sq) > 1 else 0.0
    rhs = 2.0 * ent / alpha
    return {"w2_squared": est, "w2_stderr": se, "entropy": ent, "alpha": alpha,
            "rhs": rhs, "pass": bool(est <= rhs + 3.0 * se + 1e-12)}


# ---------------------------------------------------------------------------
# Gaussian tail-sum bound
# ---------------------------------------------------------------------------

def gaussian_tail_bound(n: int, s: float, r_cut: int = 400) -> dict:
    """Closed form 4 pi / (s (n-1)^{2s}) against an upper estimate of the
    lattice sum sum_{|m| >= n} 2/|m|^{2+2s} (direct summation to r_cut plus
    an integral remainder)."""
    if n < 2 or s <= 0:
        raise ValueError("need n >= 2 and s > 0")
    bound = 4.0 * math.pi / (s * (n - 1) ** (2 * s))
    m = np.arange(-r_cut, r_cut + 1, dtype=float)
    m1, m2 = np.meshgrid(m, m, indexing="ij")
    r = np.sqrt(m1 ** 2 + m2 ** 2)
    mask = (r >= n) & (r <= r_cut)
    partial = float(np.sum(2.0 / r[mask] ** (2 + 2 * s)))
    remainder = 2.0 * math.pi * (r_cut - 1) ** (-2 * s) / s
    total_upper = partial + remainder
    return {"n": n, "s": s, "bound": bound, "lattice_sum_upper": total_upper,
            "holds": bool(total_upper <= bound)}
