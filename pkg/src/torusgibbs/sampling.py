"""Gaussian reference measures, phase-domain restrictions, pCN sampling of
the Gibbs densities, partition-function and normalizability probes.

Every Gibbs measure here is (interaction density) x (Gaussian reference)
restricted to a phase domain, so the sampler uses the reference-preserving
proposal u' = sqrt(1 - beta^2) u + beta xi with Metropolis correction
min(1, exp(phi(u') - phi(u))) and hard rejection outside the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import hamiltonians as ham
from .spectral import (FourierField, Lattice, coords_from_coef, sobolev_weights,
                       synthesize_batch)


# ---------------------------------------------------------------------------
# Gaussian references
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianReference:
    """Free-field reference: complex fields have independent coefficients
    c_k = (gamma + i gamma') / sqrt(rho + |k|^2), so E|c_k|^2 = 2/(rho+|k|^2);
    rho = 0 is the massless mean-zero loop.  Real 1D fields (field_type
    "real") draw cos/sin coefficients a_j, b_j ~ N(0, 1/(rho + j^2)) for
    j >= 1; spectrum "white" replaces the variance by 1 (the ion-density
    factor of the Zakharov product measure)."""

    lattice: Lattice
    rho: float = 0.0
    field_type: str = "complex"      # "complex" | "real"
    spectrum: str = "massive"        # "massive" | "white"

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")
        if self.field_type not in ("complex", "real"):
            raise ValueError("field_type must be 'complex' or 'real'")
        if self.spectrum not in ("massive", "white"):
            raise ValueError("spectrum must be 'massive' or 'white'")
        if self.field_type == "real" and self.lattice.dim != 1:
            raise ValueError("real references are 1D")

    @property
    def zero_mode(self) -> bool:
        return self.field_type == "complex" and self.rho > 0

    @property
    def reality(self) -> bool:
        return self.field_type == "real"

    def coef_variance(self) -> np.ndarray:
        """E |c_k|^2 per lattice mode."""
        if self.field_type == "complex":
            denom = self.rho + self.lattice.ksq()
            denom[denom == 0] = np.inf      # massless zero mode carries no mass
            v = 2.0 / denom
            if not self.zero_mode:
                v[self.lattice.zero_index()] = 0.0
            return v
        j = np.abs(self.lattice.axis_modes()).astype(float)
        v = np.zeros(self.lattice.shape)
        nz = j > 0
        sig2 = np.ones_like(j) if self.spectrum == "white" else 1.0 / (self.rho + j ** 2)
        v[nz] = 0.5 * sig2[nz]          # |c_j|^2 = (a_j^2 + b_j^2)/4 per side
        return v

    def _std(self) -> np.ndarray:
        cached = getattr(self, "_std_cache", None)
        if cached is None:
            lat = self.lattice
            cached = 1.0 / np.sqrt(self.rho + lat.ksq()) if self.rho > 0 else \
                _massless_std(lat)
            object.__setattr__(self, "_std_cache", cached)
        return cached

    def sample_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lat = self.lattice
        if self.field_type == "complex":
            g = rng.standard_normal((2, count) + lat.shape)
            coefs = (g[0] + 1j * g[1]) * self._std()
            if not self.zero_mode:
                coefs[(slice(None),) + lat.zero_index()] = 0.0
            return coefs
        n = lat.n
        j = np.arange(1, n + 1, dtype=float)
        sig = np.ones_like(j) if self.spectrum == "white" else 1.0 / np.sqrt(self.rho + j ** 2)
        a = rng.standard_normal((count, n)) * sig
        b = rng.standard_normal((count, n)) * sig
        coefs = np.zeros((count, 2 * n + 1), dtype=np.complex128)
        coefs[:, n + 1:] = 0.5 * (a - 1j * b)
        coefs[:, :n] = np.conj(coefs[:, n + 1:][:, ::-1])
        return coefs

    def sample(self, rng: np.random.Generator) -> FourierField:
        coef = self.sample_batch(rng, 1)[0]
        return FourierField(self.lattice, coef, self.reality, self.zero_mode)


def _massless_std(lat: Lattice) -> np.ndarray:
    ksq = lat.ksq().copy()
    ksq[lat.zero_index()] = 1.0      # placeholder; zero mode is nulled after
    return 1.0 / np.sqrt(ksq)


# ---------------------------------------------------------------------------
# phase domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseDomain:
    """Restriction set; membership is exact in the coefficients.

    mass_ball(N):              sum |c_k|^2 <= N
    mass_and_sobolev(N,kap,s): additionally sum |k|^{2s} |c_k|^2 <= kap
    decay(K1,K2,s,eps):        ||u||_{H^-s} <= K1 and
                               |c_j| <= K2 |j|^{-3/4-eps} for all j != 0
    product(parts):            componentwise (Zakharov states)
    """

    kind: str
    mass: float | None = None
    kappa: float | None = None
    s: float | None = None
    k1: float | None = None
    k2: float | None = None
    eps: float | None = None
    parts: tuple = ()

    @classmethod
    def unrestricted(cls):
        return cls("unrestricted")

    @classmethod
    def mass_ball(cls, mass: float):
        return cls("mass_ball", mass=mass)

    @classmethod
    def mass_and_sobolev(cls, mass: float, kappa: float, s: float):
        if not 0.25 < s < 0.5:
            raise ValueError("mass_and_sobolev needs 1/4 < s < 1/2")
        return cls("mass_and_sobolev", mass=mass, kappa=kappa, s=s)

    @classmethod
    def decay(cls, k1: float, k2: float, s: float, eps: float):
        if not 0 < s < 0.25:
            raise ValueError("decay domain needs 0 < s < 1/4")
        if not 0 < eps < 0.125:
            raise ValueError("decay domain needs 0 < eps < 1/8")
        return cls("decay", k1=k1, k2=k2, s=s, eps=eps)

    @classmethod
    def product(cls, *parts):
        return cls("product", parts=tuple(parts))

    def _arrays(self, lattice: Lattice):
        cache = getattr(self, "_cache", None)
        if cache is None:
            cache = {}
            object.__setattr__(self, "_cache", cache)
        if lattice not in cache:
            if self.kind == "mass_and_sobolev":
                cache[lattice] = sobolev_weights(lattice, self.s, homogeneous=True)
            elif self.kind == "decay":
                wneg = sobolev_weights(lattice, -self.s, homogeneous=True)
                absk = lattice.abs_k()
                capsq = np.full(lattice.shape, np.inf)
                nz = absk > 0
                capsq[nz] = (self.k2 * absk[nz] ** (-0.75 - self.eps)) ** 2
                cache[lattice] = (wneg, capsq)
        return cache.get(lattice)

    def contains_batch(self, coefs: np.ndarray, lattice: Lattice) -> np.ndarray:
        if self.kind == "unrestricted":
            return np.ones(coefs.shape[0], dtype=bool)
        absq = np.abs(coefs) ** 2
        axes = tuple(range(1, coefs.ndim))
        if self.kind == "mass_ball":
            return absq.sum(axis=axes) <= self.mass
        if self.kind == "mass_and_sobolev":
            w = self._arrays(lattice)
            return ((absq.sum(axis=axes) <= self.mass)
                    & ((absq * w).sum(axis=axes) <= self.kappa))
        if self.kind == "decay":
            wneg, capsq = self._arrays(lattice)
            hs_ok = (absq * wneg).sum(axis=axes) <= self.k1 ** 2
            zero_ok = absq[(slice(None),) + lattice.zero_index()] <= 1e-28
            ptw_ok = np.all(absq <= capsq, axis=axes)
            return hs_ok & ptw_ok & zero_ok
        raise ValueError(f"contains_batch unsupported for kind {self.kind!r}")

    def contains(self, state) -> bool:
        if self.kind == "product":
            if len(self.parts) != 3:
                raise ValueError("product domain expects three parts (u, n, v)")
            du, dn, dv = self.parts
            return (du.contains(state.u) and dn.contains(state.n)
                    and dv.contains(state.v))
        fld = state
        return bool(self.contains_batch(fld.coef[None, ...], fld.lattice)[0])


# ---------------------------------------------------------------------------
# ensembles
# ---------------------------------------------------------------------------

@dataclass
class SampleEnsemble:
    """Stack of coefficient arrays drawn from one measure, with provenance."""

    lattice: Lattice
    coefs: np.ndarray
    reality: bool = False
    zero_mode: bool = True
    seed: int | None = None
    thinning: int = 1
    weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.coefs.shape[0]

    def field(self, i: int) -> FourierField:
        return FourierField(self.lattice, self.coefs[i], self.reality, self.zero_mode)

    def fields(self):
        for i in range(len(self)):
            yield self.field(i)

    def coords(self) -> np.ndarray:
        return coords_from_coef(self.coefs, self.lattice, self.reality, self.zero_mode)


@dataclass
class ZakharovEnsemble:
    lattice: Lattice
    u: np.ndarray
    n: np.ndarray
    v: np.ndarray
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.u.shape[0]

    def state(self, i: int) -> ham.ZakharovState:
        lat = self.lattice
        return ham.ZakharovState(
            FourierField(lat, self.u[i], False, zero_mode=False),
            FourierField(lat, self.n[i], True, zero_mode=True),
            FourierField(lat, self.v[i], True, zero_mode=False))


# ---------------------------------------------------------------------------
# pCN chain
# ---------------------------------------------------------------------------

@dataclass
class ChainConfig:
    steps: int
    burn_in: int = 0
    thin: int = 1
    seed: int = 0
    beta: float | None = None        # None: pilot-tuned to 25-40% acceptance
    pilot_steps: int = 600
    chain_id: int = 0


@dataclass
class ChainStats:
    acceptance_rate: float
    beta: float
    warnings: list


def _chain_rng(seed: int, chain_id: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chain_id, tag)))


def _phi(model, coef, lattice, reality, zero_mode) -> float:
    if model is None:
        return 0.0
    return ham.interaction_log_density(
        model, FourierField(lattice, coef, reality, zero_mode))


def run_pcn_chain(model, domain: PhaseDomain, reference: GaussianReference,
                  config: ChainConfig):
    """Reference-preserving Metropolis chain for exp(phi) d(reference)
    restricted to the domain; starts at the zero field.  Returns the thinned
    post-burn-in ensemble and acceptance statistics."""
    if isinstance(model, ham.Zakharov):
        raise TypeError("use sample_zakharov_ensemble for the product measure")
    lat = reference.lattice
    reality, zero_mode = reference.reality, reference.zero_mode
    zero = np.zeros(lat.shape, dtype=np.complex128)
    if not domain.contains_batch(zero[None], lat)[0]:
        raise ValueError("zero field is outside the domain; no valid start point")
    warnings = []
    beta = config.beta
    if beta is None:
        beta = _pilot_beta(model, domain, reference, config)
    rng = _chain_rng(config.seed, config.chain_id, 0)
    state = zero.copy()
    phi = _phi(model, state, lat, reality, zero_mode)
    kept = []
    accepted = 0
    total = config.burn_in + config.steps
    sq = math.sqrt(max(0.0, 1.0 - beta * beta))
    for step in range(total):
        xi = reference.sample_batch(rng, 1)[0]
        prop = sq * state + beta * xi
        logu = math.log(rng.uniform())
        if domain.contains_batch(prop[None], lat)[0]:
            phi_prop = _phi(model, prop, lat, reality, zero_mode)
            if phi_prop - phi >= logu:
                state = prop
                phi = phi_prop
                accepted += 1
        if step >= config.burn_in and (step - config.burn_in) % config.thin == 0:
            kept.append(state.copy())
    rate = accepted / total
    if rate < 0.01:
        warnings.append(f"acceptance rate {rate:.3f} < 1%; try beta ~ {beta / 4:.3g}")
    ens = SampleEnsemble(lat, np.array(kept), reality, zero_mode,
                         seed=config.seed, thinning=config.thin,
                         meta={"beta": beta, "acceptance": rate})
    return ens, ChainStats(rate, beta, warnings)


def _pilot_beta(model, domain, reference, config: ChainConfig,
                target=(0.25, 0.40)) -> float:
    """Short pilot: multiplicative beta adjustment toward the target
    acceptance window; deterministic given the seed."""
    lat = reference.lattice
    reality, zero_mode = reference.reality, reference.zero_mode
    rng = _chain_rng(config.seed, config.chain_id, 1)
    beta = 0.5
    block = 60
    state = np.zeros(lat.shape, dtype=np.complex128)
    phi = _phi(model, state, lat, reality, zero_mode)
    for _ in range(max(1, config.pilot_steps // block)):
        acc = 0
        sq = math.sqrt(max(0.0, 1.0 - beta * beta))
        for _ in range(block):
            xi = reference.sample_batch(rng, 1)[0]
            prop = sq * state + beta * xi
            logu = math.log(rng.uniform())
            if domain.contains_batch(prop[None], lat)[0]:
                phi_prop = _phi(model, prop, lat, reality, zero_mode)
                if phi_prop - phi >= logu:
                    state, phi = prop, phi_prop
                    acc += 1
        rate = acc / block
        if rate < target[0]:
            beta = max(beta / 1.5, 1e-3)
        elif rate > target[1]:
            beta = min(beta * 1.4, 1.0)
    return beta


def sample_zakharov_ensemble(model: ham.Zakharov, lattice: Lattice, count: int,
                             config: ChainConfig):
    """Product Gibbs measure: u from the quartic Gibbs factor exp((1/4)
    int |u|^4) restricted to the mass ball B (pCN), ntilde white noise, W a
    real loop; mapped back to (u, n, v) via n = sqrt(2) ntilde - P_n|u|^2
    and vhat = -sqrt(2) k^2 What."""
    uref = GaussianReference(lattice, rho=0.0, field_type="complex")
    udomain = PhaseDomain.mass_ball(model.mass_bound)
    umodel = ham.NLS(p=4, lam=1.0, dim=1)
    uens, stats = run_pcn_chain(umodel, udomain, uref, config)
    m = len(uens)
    if m > count:
        uens.coefs = uens.coefs[:count]
        m = count
    rng = _chain_rng(config.seed, config.chain_id, 2)
    white = GaussianReference(lattice, field_type="real", spectrum="white")
    loop = GaussianReference(lattice, field_type="real", spectrum="massive")
    ntilde = white.sample_batch(rng, m)
    w = loop.sample_batch(rng, m)
    intens = np.stack([ham.intensity_coefficients(uens.field(i)) for i in range(m)])
    ncoef = np.sqrt(2.0) * ntilde - intens
    k = lattice.axis_modes().astype(float)
    vcoef = -np.sqrt(2.0) * (k ** 2) * w
    ens = ZakharovEnsemble(lattice, uens.coefs, ncoef, vcoef, seed=config.seed,
                           meta={"u_acceptance": stats.acceptance_rate})
    return ens, stats


def rejection_sample_domain(reference: GaussianReference, domain: PhaseDomain,
                            count: int, seed: int, max_batches: int = 400):
    """Direct rejection sampling of the reference restricted to the domain."""
    rng = np.random.default_rng(seed)
    out = []
    got = 0
    for _ in range(max_batches):
        batch = reference.sample_batch(rng, max(64, count))
        ok = domain.contains_batch(batch, reference.lattice)
        if ok.any():
            out.append(batch[ok])
            got += int(ok.sum())
        if got >= count:
            break
    if got < count:
        raise RuntimeError(f"rejection sampler got {got}/{count} points; "
                           "domain acceptance too small")
    coefs = np.concatenate(out, axis=0)[:count]
    return SampleEnsemble(reference.lattice, coefs, reference.reality,
                          reference.zero_mode, seed=seed)


# ---------------------------------------------------------------------------
# partition function and normalizability
# ---------------------------------------------------------------------------

@dataclass
class PartitionEstimate:
    z: float
    stderr: float
    ess: float
    log_max_weight: float
    reliable: bool


def _ess(w: np.ndarray) -> float:
    s = float(np.sum(w))
    return s * s / float(np.sum(w ** 2)) if s > 0 else 0.0


def _importance_weights(model, domain, coefs, lattice, reality, zero_mode):
    inside = domain.contains_batch(coefs, lattice)
    logw = np.full(coefs.shape[0], -np.inf)
    for i in np.nonzero(inside)[0]:
        logw[i] = _phi(model, coefs[i], lattice, reality, zero_mode)
    return logw


def partition_estimate(model, domain: PhaseDomain, reference: GaussianReference,
                       n_samples: int, seed: int) -> PartitionEstimate:
    """Importance estimate Z = E_mu[I_domain exp(phi)] from reference draws;
    for lam = 0 this is the reference mass of the domain."""
    rng = np.random.default_rng(seed)
    coefs = reference.sample_batch(rng, n_samples)
    logw = _importance_weights(model, domain, coefs, reference.lattice,
                               reference.reality, reference.zero_mode)
    w = np.where(np.isfinite(logw), np.exp(logw), 0.0)
    z = float(np.mean(w))
    se = float(np.std(w, ddof=1) / math.sqrt(n_samples))
    sw = float(np.sum(w))
    ess = sw ** 2 / float(np.sum(w ** 2)) if sw > 0 else 0.0
    lm = float(np.max(logw)) if np.isfinite(logw).any() else -np.inf
    return PartitionEstimate(z, se, ess, lm, ess >= 30)


def normalizability_probe(p: int, lam: float, mass_bound: float, n_list,
                          n_samples: int, seed: int, coefs_full=None,
                          lattice_full: Lattice | None = None,
                          rise_threshold: float = 5.0) -> dict:
    """Z estimates and maximal importance weights across truncation levels,
    on common random fields (one full-resolution draw, projected, so the
    truncations are coupled sample by sample).

    The trend statistics are taken over the fixed population of samples
    inside the ball at the largest n (mass grows with n, so that is the
    binding constraint): the per-n log-max weight over that population and
    the population mean log weight.  Classification ("operational", not the
    limit dichotomy): divergent when the mean log weight rises by more than
    rise_threshold nats and the max is strictly increasing; stable when the
    rise stays below threshold and the Z estimates converge (successive
    |dZ| nonincreasing, last pair within 3 combined stderr); else marginal.
    """
    n_list = sorted(int(n) for n in n_list)
    if lattice_full is None:
        lattice_full = Lattice(1, max(n_list), max(2, math.ceil(p / 2)))
    if coefs_full is None:
        ref = GaussianReference(lattice_full, rho=0.0, field_type="complex")
        coefs_full = ref.sample_batch(np.random.default_rng(seed), n_samples)
    if p % 2:
        raise ValueError("normalizability probe supports even p")
    modes = np.abs(lattice_full.axis_modes())
    top = coefs_full.copy()
    top[:, modes > max(n_list)] = 0.0
    population = np.sum(np.abs(top) ** 2, axis=1) <= mass_bound
    pop_count = int(population.sum())
    rows = []
    pop_max, pop_mean = [], []
    for n in n_list:
        proj = coefs_full.copy()
        proj[:, modes > n] = 0.0
        mass = np.sum(np.abs(proj) ** 2, axis=1)
        grids = synthesize_batch(proj, lattice_full)
        integ = np.mean(np.abs(grids) ** p, axis=-1)
        logw = np.where(mass <= mass_bound, (lam / p) * integ, -np.inf)
        with np.errstate(over="ignore", invalid="ignore"):
            w = np.where(np.isfinite(logw), np.exp(np.minimum(logw, 340.0)), 0.0)
            z = float(np.mean(w))
            se = float(np.std(w, ddof=1) / math.sqrt(len(w)))
        row = {"n": n, "z": z, "stderr": se, "ess": _ess(w),
               "log_max_weight": float(np.max(logw)) if np.isfinite(logw).any()
               else -math.inf}
        rows.append(row)
        if pop_count:
            sub = (lam / p) * integ[population]
            pop_max.append(float(np.max(sub)))
            pop_mean.append(float(np.mean(sub)))
    sparse = pop_count < 25
    if pop_count:
        mean_rise = pop_mean[-1] - pop_mean[0]
        max_rise = pop_max[-1] - pop_max[0]
        strictly_up = all(b > a for a, b in zip(pop_max, pop_max[1:]))
    else:
        mean_rise = max_rise = 0.0
        strictly_up = False
    dz = [abs(a["z"] - b["z"]) for a, b in zip(rows, rows[1:])]
    cauchy = all(b <= a + 1e-15 for a, b in zip(dz, dz[1:])) and \
        dz[-1] <= 3.0 * math.hypot(rows[-2]["stderr"], rows[-1]["stderr"])
    z_reliable = min(r["ess"] for r in rows) >= 30
    if not sparse and mean_rise > rise_threshold and (strictly_up or max_rise > rise_threshold):
        label = "divergent"
    elif sparse or (mean_rise <= rise_threshold and (cauchy or not z_reliable)):
        label = "stable"
    else:
        label = "marginal"
    return {"p": p, "lam": lam, "mass_bound": mass_bound, "rows": rows,
            "classification": label, "population": pop_count, "sparse": sparse,
            "population_log_max": pop_max, "population_mean_logw": pop_mean,
            "mean_log_weight_rise": mean_rise, "log_max_rise": max_rise,
            "strictly_increasing": strictly_up, "z_cauchy": bool(cauchy)}


def estimate_critical_mass(lam: float, n_list, n_samples: int, seed: int,
                           mass_lo: float = 2.0, mass_hi: float = 16.0,
                           rounds: int = 9, p: int = 6,
                           rise_threshold: float = 5.0) -> dict:
    """Operational N_0 estimator: bisection (in log N) for the largest mass
    bound the probe classifies stable, on common random fields per seed."""
    n_list = sorted(int(n) for n in n_list)
    lattice_full = Lattice(1, max(n_list), max(2, math.ceil(p / 2)))
    ref = GaussianReference(lattice_full, rho=0.0, field_type="complex")
    coefs = ref.sample_batch(np.random.default_rng(seed), n_samples)

    def stable(mass):
        rep = normalizability_probe(p, lam, mass, n_list, n_samples, seed,
                                    coefs_full=coefs, lattice_full=lattice_full,
                                    rise_threshold=rise_threshold)
        return rep["classification"] == "stable", rep

    ok_lo, _ = stable(mass_lo)
    ok_hi, _ = stable(mass_hi)
    if not ok_lo or ok_hi:
        return {"estimate": None, "bracket": (mass_lo, mass_hi),
                "note": "bisection bracket invalid: endpoints "
                        f"({'stable' if ok_lo else 'unstable'}, "
                        f"{'stable' if ok_hi else 'unstable'})"}
    lo, hi = mass_lo, mass_hi
    for _ in range(rounds):
        mid = math.sqrt(lo * hi)
        ok, _ = stable(mid)
        if ok:
            lo = mid
        else:
            hi = mid
    return {"estimate": math.sqrt(lo * hi), "bracket": (lo, hi),
            "note": "operational estimator (largest stable mass), not a sharp threshold"}


# ---------------------------------------------------------------------------
# tail and decay-domain mass
# ---------------------------------------------------------------------------

def tail_mass_estimate(ensemble: SampleEnsemble, s: float, kappa_list=None,
                       n_kappas: int = 8) -> dict:
    """Empirical nu(Omega_N \\ Omega_{N,kappa}) across kappa plus a linear
    fit of log(tail) against kappa^2; the fitted slope must come out
    negative (the stated tail shape)."""
    if not 0.25 < s < 0.5:
        raise ValueError("needs 1/4 < s < 1/2")
    w = sobolev_weights(ensemble.lattice, s, homogeneous=True)
    axes = tuple(range(1, ensemble.coefs.ndim))
    hs = np.sum(np.abs(ensemble.coefs) ** 2 * w, axis=axes)
    if kappa_list is None:
        kappa_list = np.quantile(hs, np.linspace(0.30, 0.985, n_kappas))
    kappa_list = np.asarray(sorted(kappa_list), dtype=float)
    m = len(hs)
    tails = np.array([np.mean(hs > k) for k in kappa_list])
    stderr = np.sqrt(np.maximum(tails * (1 - tails), 1e-12) / m)
    usable = (tails > 0) & (tails < 1)
    degenerate = usable.sum() < 3
    slope = r2 = float("nan")
    if not degenerate:
        x = kappa_list[usable] ** 2
        y = np.log(tails[usable])
        slope, intercept = np.polyfit(x, y, 1)
        yhat = slope * x + intercept
        ss_res = float(np.sum((y - yhat) ** 2))
        ss_tot = float(np.sum((y - np.mean(y)) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")
    return {"s": s, "kappa": kappa_list.tolist(), "tail": tails.tolist(),
            "stderr": stderr.tolist(), "slope_vs_kappa_sq": float(slope),
            "r_squared": float(r2), "degenerate": bool(degenerate)}


def decay_mass_lower_bound(k1: float, k2: float, s: float) -> float:
    """exp(-2(6+pi) e^{-K2^2/2} / (K2 sqrt(2 pi))) - exp(-K1^2/4 + pi/(2s) + 5),
    evaluated verbatim; can be vacuous (negative) for small K1."""
    first = math.exp(-2.0 * (6.0 + math.pi) * math.exp(-k2 ** 2 / 2.0)
                     / (k2 * math.sqrt(2.0 * math.pi)))
    second = math.exp(-k1 ** 2 / 4.0 + math.pi / (2.0 * s) + 5.0)
    return first - second


def decay_domain_mass(k1: float, k2: float, s: float, eps: float,
                      lattice: Lattice, n_samples: int, seed: int) -> dict:
    """Empirical reference mass of the decay domain against the closed-form
    lower bound; the bound is reported even when vacuous (negative)."""
    if k2 * math.exp(k2 ** 2 / 2.0) <= 4.0:
        raise ValueError("requires K2 exp(K2^2/2) > 4")
    ref = GaussianReference(lattice, rho=0.0, field_type="complex")
    dom = PhaseDomain.decay(k1, k2, s, eps)
    rng = np.random.default_rng(seed)
    hits = 0
    total = 0
    chunk = 4096
    while total < n_samples:
        m = min(chunk, n_samples - total)
        batch = ref.sample_batch(rng, m)
        hits += int(dom.contains_batch(batch, lattice).sum())
        total += m
    p_hat = hits / total
    se = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / total)
    bound = decay_mass_lower_bound(k1, k2, s)
    return {"k1": k1, "k2": k2, "s": s, "eps": eps, "empirical": p_hat,
            "stderr": se, "bound": bound, "bound_positive": bound > 0,
            "holds": (bound <= 0) or (p_hat >= bound - 3 * se)}
