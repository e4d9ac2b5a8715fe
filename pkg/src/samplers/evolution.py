"""
Dynamic shrinkage process kernels on the log evolution variances v.

Innovations are indexed eta_1 = v_1 - mu and eta_t = v_t - mu - phi (v_{t-1} - mu) for t >= 2,
each with its own Polya-Gamma scale xi_t. Given xi, eta_t ~ N(kappa / xi_t, 1 / xi_t) with
kappa = (a - b) / 2, which vanishes for the horseshoe shapes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from src.app.utils.logger import get_logger
from src.dist.mixture import OmoriMixture, sample_mixture_indicators
from src.dist.polya_gamma import sample_polya_gamma
from src.dist.slice import slice_sample_phi
from src.linalg.banded import BandedSPD, ar_operator, build_Qxi, sample_gaussian_canonical
from src.volatility.difference import diff_matrix
from src.volatility.state import DSPState

logger = get_logger("samplers.evolution")

_PHI_DENOM_FLOOR = 1e-8


@dataclass(frozen=True)
class DSPOptions:
    a: float = 0.5
    b: float = 0.5
    estimate_phi: bool = True
    phi_prior: Optional[Tuple[float, float]] = (10.0, 2.0)
    mu_update: str = "exact"
    phi_likelihood: str = "exact"
    slice_width: float = 0.25
    slice_max_steps: int = 1000
    pg_truncation: int = 200
    trace: bool = False

    @property
    def shift(self) -> float:
        return 0.5 * (self.a - self.b)

    @property
    def pg_shape(self) -> int:
        return int(round(self.a + self.b))


def omega_star(path: np.ndarray, k: int, offset_c: float) -> np.ndarray:
    """log((D_full x)^2 + c): the first k entries are the levels themselves."""
    ops = diff_matrix(path.size, k)
    return np.log(np.square(ops.apply(path)) + offset_c)


def innovations(v: np.ndarray, mu: float, phi: float) -> np.ndarray:
    centered = v - mu
    eta = centered.copy()
    eta[1:] -= phi * centered[:-1]
    return eta


# ---------------------
# s and v
# ---------------------
def update_s(v: np.ndarray, omega: np.ndarray, mixture: OmoriMixture, rng: np.random.Generator) -> np.ndarray:
    return sample_mixture_indicators(omega - v, mixture.m, mixture.w2, mixture.p, rng)


def v_posterior(
    s: np.ndarray,
    omega: np.ndarray,
    xi: np.ndarray,
    mu: float,
    phi: float,
    mixture: OmoriMixture,
    shift: float = 0.0,
) -> Tuple[BandedSPD, np.ndarray]:
    """
    Canonical (precision, linear term) of v.

    Precision Q_xi,phi + diag(1 / w2_s); linear term (omega* - m_s) / w2_s + Q_xi,phi 1 mu plus
    A' 1 shift for asymmetric shapes.
    """
    means, variances = mixture.component(s)
    Qxi = build_Qxi(xi, phi)
    linear = (omega - means) / variances + Qxi.matvec(np.full(xi.size, mu))
    if shift:
        linear = linear + ar_operator(xi.size, phi).T @ np.full(xi.size, shift)
    return Qxi.add_diagonal(1.0 / variances), linear


def update_v(
    s: np.ndarray,
    omega: np.ndarray,
    xi: np.ndarray,
    mu: float,
    phi: float,
    mixture: OmoriMixture,
    rng: np.random.Generator,
    shift: float = 0.0,
) -> np.ndarray:
    Q, linear = v_posterior(s, omega, xi, mu, phi, mixture, shift)
    return sample_gaussian_canonical(Q, linear, rng)


# ---------------------
# xi, mu, xi_mu
# ---------------------
def update_xi(v: np.ndarray, mu: float, phi: float, rng: np.random.Generator, pg_shape: int = 1, truncation: int = 200) -> np.ndarray:
    return sample_polya_gamma(pg_shape, innovations(v, mu, phi), rng, truncation=truncation)


def mu_posterior_displayed(v: np.ndarray, xi: np.ndarray, phi: float, xi_mu: float) -> Tuple[float, float]:
    """
    (mean, precision) of mu from the sqrt(xi)-weighted pseudo-observation of mu.

    v_hat = sum_{t>=2} sqrt(xi_t) (v_t - phi v_{t-1}) / ((1 - phi) sum sqrt(xi_t)) is treated as
    N(mu, (T - 1) / ((1 - phi) sum sqrt(xi_t))^2).
    """
    root = np.sqrt(xi[1:])
    scale = (1.0 - phi) * root.sum()
    v_hat = np.dot(root, v[1:] - phi * v[:-1]) / scale
    var = (v.size - 1) / scale ** 2
    prec = 1.0 / var + xi_mu
    return float(v_hat / var / prec), float(prec)


def mu_posterior_exact(v: np.ndarray, xi: np.ndarray, phi: float, xi_mu: float, shift: float = 0.0) -> Tuple[float, float]:
    """(mean, precision) of mu from the Gaussian innovations given xi, with mu | xi_mu ~ N(0, 1 / xi_mu)."""
    c = np.full(v.size, 1.0 - phi)
    c[0] = 1.0
    av = v.copy()
    av[1:] -= phi * v[:-1]
    prec = float(np.dot(xi, c * c) + xi_mu)
    linear = float(np.dot(c, xi * av - shift))
    return linear / prec, prec


def update_mu(
    v: np.ndarray,
    xi: np.ndarray,
    phi: float,
    xi_mu: float,
    rng: np.random.Generator,
    rule: str = "exact",
    shift: float = 0.0,
) -> float:
    if rule == "displayed":
        mean, prec = mu_posterior_displayed(v, xi, phi, xi_mu)
    elif rule == "exact":
        mean, prec = mu_posterior_exact(v, xi, phi, xi_mu, shift)
    else:
        raise ValueError(f"Unknown mu update rule: {rule}")
    return float(mean + rng.standard_normal() / np.sqrt(prec))


def update_xi_mu(mu: float, rng: np.random.Generator) -> float:
    return float(sample_polya_gamma(1, mu, rng))


# ---------------------
# phi
# ---------------------
def phi_loglik_displayed(v: np.ndarray, xi: np.ndarray, mu: float, trace: bool = False) -> Callable[[float], float]:
    """
    Gaussian pseudo-likelihood of phi through the averaged ratio (v_t - mu) / (v_{t-1} - mu).

    Terms whose denominator is within 1e-8 of zero are dropped.
    """
    prev = v[:-1] - mu
    curr = v[1:] - mu
    keep = np.abs(prev) >= _PHI_DENOM_FLOOR
    dropped = int(prev.size - keep.sum())
    if dropped and trace:
        logger.debug("phi likelihood dropped=%d terms with |v_{t-1} - mu| < %.0e", dropped, _PHI_DENOM_FLOOR)
    if not np.any(keep):
        return lambda phi: 0.0

    n = int(keep.sum())
    ratio = 0.5 * (curr[keep] / prev[keep] + 1.0)
    v_hat = float(ratio.mean())
    var = float(np.sum(1.0 / (4.0 * xi[1:][keep] * prev[keep] ** 2)) / n ** 2)

    def loglik(phi: float) -> float:
        return -0.5 * (v_hat - 0.5 * (phi + 1.0)) ** 2 / var

    return loglik


def phi_loglik_exact(v: np.ndarray, xi: np.ndarray, mu: float, shift: float = 0.0) -> Callable[[float], float]:
    """Conditional Gaussian log-likelihood of the innovations eta_2..eta_T as a function of phi."""
    prev = v[:-1] - mu
    curr = v[1:] - mu
    w = xi[1:]
    target = curr - shift / w

    def loglik(phi: float) -> float:
        resid = target - phi * prev
        return float(-0.5 * np.dot(w, resid * resid))

    return loglik


def update_phi(v: np.ndarray, xi: np.ndarray, mu: float, phi: float, opts: DSPOptions, rng: np.random.Generator) -> float:
    if opts.phi_likelihood == "displayed":
        loglik = phi_loglik_displayed(v, xi, mu, trace=opts.trace)
    elif opts.phi_likelihood == "exact":
        loglik = phi_loglik_exact(v, xi, mu, opts.shift)
    else:
        raise ValueError(f"Unknown phi likelihood: {opts.phi_likelihood}")
    return slice_sample_phi(phi, loglik, rng, prior=opts.phi_prior, width=opts.slice_width, max_steps=opts.slice_max_steps)


# ---------------------
# sub-sweep
# ---------------------
DSPStep = Callable[[DSPState, np.ndarray, OmoriMixture, np.random.Generator], None]


def dsp_steps(opts: DSPOptions) -> List[Tuple[str, DSPStep]]:
    """Named in-place updates s -> v -> xi -> mu -> xi_mu -> phi (phi only when estimated)."""

    def step_s(d: DSPState, omega, mixture, rng):
        d.s = update_s(d.v, omega, mixture, rng)

    def step_v(d: DSPState, omega, mixture, rng):
        d.v = update_v(d.s, omega, d.xi, d.mu, d.phi, mixture, rng, opts.shift)

    def step_xi(d: DSPState, omega, mixture, rng):
        d.xi = update_xi(d.v, d.mu, d.phi, rng, opts.pg_shape, opts.pg_truncation)

    def step_mu(d: DSPState, omega, mixture, rng):
        d.mu = update_mu(d.v, d.xi, d.phi, d.xi_mu, rng, opts.mu_update, opts.shift)

    def step_xi_mu(d: DSPState, omega, mixture, rng):
        d.xi_mu = update_xi_mu(d.mu, rng)

    def step_phi(d: DSPState, omega, mixture, rng):
        d.phi = update_phi(d.v, d.xi, d.mu, d.phi, opts, rng)

    steps = [("s", step_s), ("v", step_v), ("xi", step_xi), ("mu", step_mu), ("xi_mu", step_xi_mu)]
    if opts.estimate_phi:
        steps.append(("phi", step_phi))
    return steps


def dsp_sweep(dsp: DSPState, omega: np.ndarray, opts: DSPOptions, mixture: OmoriMixture, rng: np.random.Generator) -> DSPState:
    for _, step in dsp_steps(opts):
        step(dsp, omega, mixture, rng)
    return dsp
