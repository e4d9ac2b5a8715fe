from __future__ import annotations

import time
import uuid
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.app.core.config import get_settings
from src.app.schemas.model import ModelSpec, Variant
from src.app.utils.logger import chain_logger
from src.dist.mixture import OmoriMixture, load_mixture
from src.samplers.baseline import rw_log_variances
from src.samplers.blocks import build_blocks, build_context
from src.samplers.evolution import omega_star
from src.samplers.observation import log_square
from src.volatility.draws import DrawRecorder, PosteriorDraws
from src.volatility.errors import DivergenceError
from src.volatility.series import TimeSeries
from src.volatility.state import ChainState, DSPState

INIT_WINDOW = 11

SeriesLike = Union[TimeSeries, np.ndarray, list]


def _make_run_id() -> str:
    return f"run_{uuid.uuid4().hex[:12]}"


def _values(y: SeriesLike) -> np.ndarray:
    if isinstance(y, TimeSeries):
        return y.values
    return TimeSeries(np.asarray(y, dtype=float)).values


def rolling_center(x: np.ndarray, window: int = INIT_WINDOW) -> np.ndarray:
    return pd.Series(x).rolling(window, center=True, min_periods=1).mean().to_numpy()


def initialize_state(y: np.ndarray, spec: ModelSpec) -> Tuple[ChainState, np.ndarray]:
    """
    Starting state and transformed data.

    h0 is the centered rolling mean of y*; v0 = 0; mu0 the mean of omega*(h0); phi0 = 0.5 (0 when
    phi is fixed); xi = xi_mu = 1; sigma2_c = 0.1 with h*0 = h0. The trend model starts beta at the
    rolling mean of y and builds y* from the residuals.

    Returns:
        (state, y_star)
    """
    T = y.size
    variant = spec.variant
    phi0 = 0.5 if spec.estimate_phi else 0.0

    beta, beta_evolution = None, None
    if variant == Variant.BTF_ASV:
        beta = rolling_center(y)
        beta_evolution = DSPState.initial(T, mu=float(omega_star(beta, spec.k_beta, spec.offset_c).mean()), phi=phi0)

    y_star = log_square(y - beta if beta is not None else y, spec.offset_c)
    h0 = rolling_center(y_star)

    if variant.uses_dsp:
        evolution = DSPState.initial(T, mu=float(omega_star(h0, spec.h_order, spec.offset_c).mean()), phi=phi0)
    else:
        evolution = DSPState.initial(T, mu=0.0, phi=0.0)
        evolution.v = rw_log_variances(1.0, T)

    state = ChainState(
        h=h0,
        j=np.ones(T, dtype=np.int64),
        evolution=evolution,
        beta=beta,
        beta_evolution=beta_evolution,
    )
    if variant.has_nugget:
        state.h_star = h0.copy()
        state.sigma2_c = 0.1
    if variant == Variant.RWSV:
        state.sigma2_h = 1.0
    if variant == Variant.RWSV_BL:
        state.sigma2_t_bl = np.ones(T - 1)
        state.lambda2_bl = 1.0
    return state, y_star


def run_chain(
    y: SeriesLike,
    spec: ModelSpec,
    chain_id: int = 0,
    progress: Optional[bool] = None,
    run_id: Optional[str] = None,
    mixture: Optional[OmoriMixture] = None,
) -> PosteriorDraws:
    """
    Run n_burn + n_draw sweeps and keep every `thin`-th post-burn-in state.

    The generator is seeded from (seed, chain_id), so identical inputs give bit-identical draws.

    Raises:
        DivergenceError: a block produced an invalid state; carries the iteration and block name.
    """
    settings = get_settings()
    values = _values(y)
    run_id = run_id or _make_run_id()
    progress = settings.PROGRESS if progress is None else progress

    rng = np.random.default_rng([spec.seed, chain_id])
    mixture = mixture or load_mixture()
    state, y_star = initialize_state(values, spec)
    ctx = build_context(spec, values, y_star, mixture)
    blocks = build_blocks(spec, trace=settings.CHAIN_TRACE_LOGS)
    recorder = DrawRecorder(spec.variant, values.size, spec.n_keep)

    total = spec.n_burn + spec.n_draw
    log = chain_logger("volatility.runner", run_id, chain_id)
    log.info("variant=%s T=%d sweeps=%d thin=%d start", spec.variant.value, values.size, total, spec.thin)
    t0 = time.time()

    try:
        for it in tqdm(range(total), desc=f"{spec.variant.value}[{chain_id}]", disable=not progress, leave=False):
            blocks.run_sweep(state, ctx, rng, iteration=it, run_id=run_id)
            if settings.CHAIN_TRACE_LOGS:
                log.debug("sweep=%d mu=%.4f phi=%.4f", it, state.mu, state.phi)

            kept = it - spec.n_burn + 1
            if kept > 0 and kept % spec.thin == 0 and recorder.row < spec.n_keep:
                recorder.record(state)
    except DivergenceError as e:
        log.error("diverged iteration=%d block=%s detail=%s", e.iteration, e.block, e.detail)
        raise

    wall = time.time() - t0
    log.info("kept=%d done in %.2f seconds", recorder.row, wall)
    return recorder.finish(seed=spec.seed, chain_id=chain_id, run_id=run_id, wall_time_s=wall, order=blocks.order)


def _chain_job(args) -> PosteriorDraws:
    values, spec, chain_id, run_id = args
    return run_chain(values, spec, chain_id=chain_id, progress=False, run_id=run_id)


def run_chains(y: SeriesLike, spec: ModelSpec, n_chains: int = 1, jobs: Optional[int] = None) -> List[PosteriorDraws]:
    """Independent chains 0..n_chains-1, in a process pool when jobs > 1; results in chain order."""
    values = _values(y)
    jobs = jobs or get_settings().JOBS
    run_id = _make_run_id()
    tasks = [(values, spec, c, f"{run_id}.{c}") for c in range(n_chains)]

    if jobs <= 1 or n_chains == 1:
        return [_chain_job(task) for task in tasks]

    with ProcessPoolExecutor(max_workers=min(jobs, n_chains)) as pool:
        return list(pool.map(_chain_job, tasks))
