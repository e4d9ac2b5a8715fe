from fastapi import APIRouter, Query
from fastapi.responses import JSONResponse

from src.app.schemas.api import CheckRecord, TheoryResponse
from src.app.utils.logger import get_logger
from src.dsptheory.checks import run_checks

logger = get_logger("routes.theory")

router = APIRouter(
    prefix="/v1",
    tags=["theory"],
)


@router.get("/theory", response_model=TheoryResponse)
def theory(check: str = Query(default="density", pattern="^(all|density|bounds|stationary)$")) -> TheoryResponse:
    try:
        results = run_checks(check)
    except ValueError as e:
        logger.warning("bad theory check=%s", check)
        return JSONResponse(status_code=422, content={"error": "unknown_check", "message": str(e)})

    return TheoryResponse(
        check=check,
        passed=all(r.passed for r in results),
        results=[CheckRecord(**r.to_dict()) for r in results],
    )
