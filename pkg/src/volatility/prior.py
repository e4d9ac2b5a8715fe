"""
Forward simulation from the sampler's own joint model.

Draws (mu, phi, eta) from the evolution prior and the Polya-Gamma scales given them, h from the
differenced Gaussian prior, (j, y*) from the mixture likelihood, and s from its conditional given
omega* and v. A state drawn here followed by one Gibbs sweep has the same distribution, which the
getting-it-right test uses.
"""
from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.stats import beta as beta_dist

from src.app.schemas.model import ModelSpec, Variant
from src.dist.conjugate import sample_inverse_gamma
from src.dist.mixture import OmoriMixture, sample_mixture_indicators
from src.dist.polya_gamma import sample_polya_gamma
from src.dist.zdist import ZDistParams, sample_z
from src.samplers.evolution import omega_star
from src.samplers.observation import NUGGET_PRIOR
from src.volatility.difference import diff_matrix
from src.volatility.state import ChainState, DSPState


def simulate_prior_dsp(T: int, spec: ModelSpec, rng: np.random.Generator) -> DSPState:
    """
    mu ~ Z(1/2, 1/2) and eta_t ~ Z(a, b) from their marginals, then the Polya-Gamma scales from
    their conditionals xi_mu ~ PG(1, mu) and xi_t ~ PG(a + b, eta_t).
    """
    mu = float(sample_z(ZDistParams(), 1, rng)[0])
    xi_mu = float(sample_polya_gamma(1, mu, rng))

    phi = 0.0
    if spec.estimate_phi:
        phi = float(2.0 * beta_dist.rvs(*spec.phi_prior_shapes, random_state=rng) - 1.0)

    eta = sample_z(ZDistParams(a=spec.a, b=spec.b), T, rng)
    xi = np.asarray(sample_polya_gamma(int(round(spec.a + spec.b)), eta, rng, truncation=spec.pg_truncation))

    v = np.empty(T)
    v[0] = mu + eta[0]
    for t in range(1, T):
        v[t] = mu + phi * (v[t - 1] - mu) + eta[t]
    return DSPState(v=v, s=np.ones(T, dtype=np.int64), xi=xi, mu=mu, xi_mu=xi_mu, phi=phi)


def simulate_prior_state(T: int, spec: ModelSpec, mixture: OmoriMixture, rng: np.random.Generator) -> Tuple[ChainState, np.ndarray]:
    """
    One joint draw of the latent state and the transformed data for the DSP variants without trend.

    Returns:
        (state, y_star)
    """
    if spec.variant not in (Variant.ASV_HS, Variant.ASV_DHS, Variant.ASV_HS_N, Variant.ASV_DHS_N):
        raise ValueError(f"prior simulation covers the ASV variants only, got {spec.variant.value}")

    evolution = simulate_prior_dsp(T, spec, rng)
    ops = diff_matrix(T, spec.k)
    smooth = ops.reconstruct(np.exp(0.5 * evolution.v) * rng.standard_normal(T))

    state = ChainState(h=smooth, j=np.ones(T, dtype=np.int64), evolution=evolution)
    if spec.variant.has_nugget:
        state.sigma2_c = float(sample_inverse_gamma(NUGGET_PRIOR[0], NUGGET_PRIOR[1], rng))
        state.h_star = smooth
        state.h = smooth + np.sqrt(state.sigma2_c) * rng.standard_normal(T)

    labels, noise = mixture.rvs(T, rng)
    state.j = labels
    y_star = state.h + noise

    omega = omega_star(state.smooth_h, spec.k, spec.offset_c)
    evolution.s = sample_mixture_indicators(omega - evolution.v, mixture.m, mixture.w2, mixture.p, rng)
    return state, y_star
