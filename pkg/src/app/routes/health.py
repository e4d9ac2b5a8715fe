from fastapi import APIRouter, Request

from src.app.core.config import get_settings

router = APIRouter()


@router.get("/health", tags=["Health"])
def health_check(request: Request) -> dict:
    settings = get_settings()
    return {
        "status": "ok",
        "service": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "mixture_components": request.app.state.mixture.n_components,
    }
