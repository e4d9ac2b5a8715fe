import time
import uuid

from fastapi import APIRouter, HTTPException, Request
from fastapi.responses import JSONResponse

from src.app.core.config import get_settings
from src.app.schemas.api import FitRequest, FitResponse, PathSummary, ScalarSummary
from src.app.utils.logger import get_logger
from src.volatility.errors import DivergenceError, SeriesFormatError
from src.volatility.report import posterior_frames
from src.volatility.runner import run_chain
from src.volatility.series import TimeSeries

logger = get_logger("routes.fit")

router = APIRouter(
    prefix="/v1/volatility",
    tags=["volatility"],
)


def _path(frame, prefix: str) -> PathSummary:
    return PathSummary(
        t=frame["t"].tolist(),
        mean=frame[f"{prefix}_mean"].tolist(),
        q05=frame[f"{prefix}_q05"].tolist(),
        q95=frame[f"{prefix}_q95"].tolist(),
    )


@router.post("/fit", response_model=FitResponse)
def fit_volatility(request: FitRequest, http_request: Request) -> FitResponse:
    """
    Fit one chain to the posted series and return posterior bands, shrinkage flags and scalars.
    """
    spec = request.spec
    limit = get_settings().API_MAX_ITERATIONS
    if spec.n_burn + spec.n_draw > limit:
        return JSONResponse(
            status_code=422,
            content={
                "error": "iteration_limit",
                "message": f"n_burn + n_draw must not exceed {limit}",
                "max_iterations": limit,
            },
        )

    run_id = f"run_{uuid.uuid4().hex[:12]}"
    start_time = time.time()
    try:
        series = TimeSeries.from_values(request.y, request.labels).centered(request.center)
        draws = run_chain(series, spec, progress=False, run_id=run_id, mixture=http_request.app.state.mixture)
        frames = posterior_frames(draws, series.labels, request.kappa_threshold, initial=spec.h_order)

    except SeriesFormatError as e:
        logger.warning("run_id=%s malformed series reason=%s", run_id, e.reason)
        return JSONResponse(
            status_code=422,
            content={"run_id": run_id, "error": "malformed_series", "message": str(e), "reason": e.reason},
        )

    except DivergenceError as e:
        logger.error("run_id=%s divergence iteration=%d block=%s", run_id, e.iteration, e.block)
        return JSONResponse(
            status_code=500,
            content={
                "run_id": run_id,
                "error": "divergence",
                "message": str(e),
                "iteration": e.iteration,
                "block": e.block,
            },
        )

    except Exception as e:
        logger.exception("Unexpected error while fitting run_id=%s", run_id)
        raise HTTPException(status_code=500, detail="Internal server error") from e

    wall = time.time() - start_time
    logger.info("run_id=%s variant=%s T=%d completed in %.2f seconds", run_id, spec.variant.value, series.T, wall)

    v_frame = frames["v_summary.csv"]
    scalars = frames["scalars.csv"]
    return FitResponse(
        run_id=run_id,
        variant=spec.variant.value,
        n_keep=draws.n_keep,
        h=_path(frames["h_summary.csv"], "h"),
        sigma=_path(frames["sigma_summary.csv"], "sigma"),
        kappa_mean=v_frame["kappa_mean"].tolist(),
        flags=[int(t) - 1 for t in v_frame.loc[v_frame["flag"] == 1, "t"]],
        scalars={row.param: ScalarSummary(mean=row.mean, sd=row.sd) for row in scalars.itertuples(index=False)},
        beta=_path(frames["beta_summary.csv"], "beta") if "beta_summary.csv" in frames else None,
        wall_time_s=wall,
    )
