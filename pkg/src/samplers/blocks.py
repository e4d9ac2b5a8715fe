"""
Per-variant composition of the Gibbs kernels into one ordered sweep.

Sweep order, fixed for every variant:
    BTF_ASV only:      beta -> s_beta -> v_beta -> xi_beta -> mu_beta -> xi_mu_beta -> phi_beta
    all variants:      j -> h
    nugget variants:   nugget
    RWSV / RWSV_BL:    sigma2_h / lasso (then v is set from the variances)
    DSP variants:      s -> v -> xi -> mu -> xi_mu [-> phi when estimated]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.linalg import LinAlgError

from src.app.schemas.model import ModelSpec, Variant
from src.dist.mixture import OmoriMixture
from src.dist.slice import SliceStuckError
from src.samplers import baseline, observation, trend
from src.samplers.evolution import DSPOptions, dsp_steps, omega_star
from src.volatility.errors import DivergenceError
from src.volatility.state import ChainState

Step = Callable[[ChainState, "SweepContext", np.random.Generator], None]

_KERNEL_ERRORS = (LinAlgError, FloatingPointError, SliceStuckError, ValueError)


@dataclass
class SweepContext:
    """Data and fixed options a sweep reads; `y_star` and the omega caches change within a sweep."""
    y: np.ndarray
    y_star: np.ndarray
    mixture: OmoriMixture
    k: int
    k_beta: int
    offset_c: float
    omega: Optional[np.ndarray] = field(default=None)
    omega_beta: Optional[np.ndarray] = field(default=None)


def dsp_options(spec: ModelSpec, trace: bool = False) -> DSPOptions:
    return DSPOptions(
        a=spec.a,
        b=spec.b,
        estimate_phi=spec.estimate_phi,
        phi_prior=spec.phi_prior_shapes,
        mu_update=spec.mu_update,
        phi_likelihood=spec.phi_likelihood,
        slice_width=spec.slice_width,
        slice_max_steps=spec.slice_max_steps,
        pg_truncation=spec.pg_truncation,
        trace=trace,
    )


def build_context(spec: ModelSpec, y: np.ndarray, y_star: np.ndarray, mixture: OmoriMixture) -> SweepContext:
    return SweepContext(
        y=np.asarray(y, dtype=float),
        y_star=np.asarray(y_star, dtype=float),
        mixture=mixture,
        k=spec.h_order,
        k_beta=spec.k_beta,
        offset_c=spec.offset_c,
    )


# ---------------------
# Steps
# ---------------------
def _step_j(state: ChainState, ctx: SweepContext, rng) -> None:
    state.j = observation.update_j(state.h, ctx.y_star, ctx.mixture, rng)


def _step_h(state: ChainState, ctx: SweepContext, rng) -> None:
    state.h = observation.update_h(state.v, state.j, ctx.y_star, ctx.mixture, ctx.k, rng)


def _step_h_nugget(state: ChainState, ctx: SweepContext, rng) -> None:
    state.h_star, state.h = observation.update_h_nugget(state.v, state.j, ctx.y_star, state.sigma2_c, ctx.mixture, ctx.k, rng)


def _step_nugget(state: ChainState, ctx: SweepContext, rng) -> None:
    state.h_star, state.sigma2_c = observation.update_nugget(state.h, state.h_star, state.v, ctx.k, rng)


def _step_sigma2h(state: ChainState, ctx: SweepContext, rng) -> None:
    state.sigma2_h = baseline.update_rwsv_variance(state.h, rng)
    state.evolution.v = baseline.rw_log_variances(state.sigma2_h, state.T)


def _step_lasso(state: ChainState, ctx: SweepContext, rng) -> None:
    state.sigma2_t_bl, state.lambda2_bl = baseline.update_lasso(state.h, state.lambda2_bl, rng, ctx.offset_c)
    state.evolution.v = baseline.rw_log_variances(state.sigma2_t_bl, state.T)


def _step_beta(state: ChainState, ctx: SweepContext, rng) -> None:
    state.beta = trend.update_btf_mean(ctx.y, state.h, state.beta_evolution.v, ctx.k_beta, rng)
    ctx.y_star = observation.log_square(ctx.y - state.beta, ctx.offset_c)


def _volatility_dsp_steps(opts: DSPOptions) -> List[Tuple[str, Step]]:
    steps = []
    for name, inner in dsp_steps(opts):
        def step(state: ChainState, ctx: SweepContext, rng, inner=inner, name=name) -> None:
            if name == "s":
                ctx.omega = omega_star(state.smooth_h, ctx.k, ctx.offset_c)
            inner(state.evolution, ctx.omega, ctx.mixture, rng)
        steps.append((name, step))
    return steps


def _mean_dsp_steps(opts: DSPOptions) -> List[Tuple[str, Step]]:
    steps = []
    for name, inner in dsp_steps(opts):
        def step(state: ChainState, ctx: SweepContext, rng, inner=inner, name=name) -> None:
            if name == "s":
                ctx.omega_beta = omega_star(state.beta, ctx.k_beta, ctx.offset_c)
            inner(state.beta_evolution, ctx.omega_beta, ctx.mixture, rng)
        steps.append((f"{name}_beta", step))
    return steps


@dataclass
class GibbsBlocks:
    variant: Variant
    steps: List[Tuple[str, Step]]

    @property
    def order(self) -> List[str]:
        return [name for name, _ in self.steps]

    def run_sweep(self, state: ChainState, ctx: SweepContext, rng: np.random.Generator, iteration: int = 0, run_id: Optional[str] = None) -> ChainState:
        """
        One full sweep in place.

        Kernel failures and invalid blocks are raised as DivergenceError naming the step.
        """
        for name, step in self.steps:
            try:
                step(state, ctx, rng)
            except _KERNEL_ERRORS as e:
                raise DivergenceError(iteration=iteration, block=name, detail=f"{type(e).__name__}: {e}", run_id=run_id) from e

            bad = state.problems()
            if bad:
                raise DivergenceError(iteration=iteration, block=name, detail=f"invalid {', '.join(bad)}", run_id=run_id)
        return state


def build_blocks(spec: ModelSpec, trace: bool = False) -> GibbsBlocks:
    variant = spec.variant
    opts = dsp_options(spec, trace)
    steps: List[Tuple[str, Step]] = []

    if variant == Variant.BTF_ASV:
        # the mean block mirrors the volatility block hyperpriors
        steps.append(("beta", _step_beta))
        steps.extend(_mean_dsp_steps(opts))

    steps.append(("j", _step_j))
    steps.append(("h", _step_h_nugget if variant.has_nugget else _step_h))

    if variant.has_nugget:
        steps.append(("nugget", _step_nugget))
    if variant == Variant.RWSV:
        steps.append(("sigma2_h", _step_sigma2h))
    elif variant == Variant.RWSV_BL:
        steps.append(("lasso", _step_lasso))
    else:
        steps.extend(_volatility_dsp_steps(opts))

    return GibbsBlocks(variant=variant, steps=steps)
