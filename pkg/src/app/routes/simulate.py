from fastapi import APIRouter

from src.app.schemas.api import SimulatedPath, SimulateRequest, SimulateResponse
from src.app.utils.logger import get_logger
from src.simulate.dgp import generate_paths

logger = get_logger("routes.simulate")

router = APIRouter(
    prefix="/v1",
    tags=["simulate"],
)


@router.post("/simulate", response_model=SimulateResponse)
def simulate(request: SimulateRequest) -> SimulateResponse:
    paths = generate_paths(request.dgp, request.T, request.paths, request.seed)
    logger.info("dgp=%d T=%d paths=%d seed=%d", request.dgp, request.T, request.paths, request.seed)
    return SimulateResponse(
        dgp=request.dgp,
        T=request.T,
        seed=request.seed,
        paths=[
            SimulatedPath(
                path=i,
                y=p.y.tolist(),
                sigma_true=p.sigma_true.tolist(),
                regime=p.regime.tolist() if p.regime is not None else None,
            )
            for i, p in enumerate(paths)
        ],
    )
