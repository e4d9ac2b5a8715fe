import time
import uuid
from contextlib import asynccontextmanager

import uvicorn
from fastapi import FastAPI, Request

from src.app.core.config import get_settings
from src.app.routes.fit import router as fit_router
from src.app.routes.health import router as health_router
from src.app.routes.simulate import router as simulate_router
from src.app.routes.theory import router as theory_router
from src.app.utils.logger import get_logger
from src.dist.mixture import load_mixture

settings = get_settings()
logger = get_logger(__name__, log_level=settings.LOG_LEVEL, log_file=settings.LOG_FILE)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # a bad mixture table fails startup rather than the first fit
    app.state.mixture = load_mixture(settings.OMORI_PATH or None)
    logger.info(
        "Service starting up version=%s env=%s mixture_mean=%.5f",
        settings.APP_VERSION, settings.APP_ENV, app.state.mixture.mean,
    )
    try:
        yield
    finally:
        logger.info("Service shutting down")


def create_app() -> FastAPI:
    app = FastAPI(
        title=settings.APP_NAME,
        version=settings.APP_VERSION,
        lifespan=lifespan,
    )

    # ---------------------
    # Include routers
    # ---------------------
    app.include_router(fit_router)
    app.include_router(simulate_router)
    app.include_router(theory_router)
    app.include_router(health_router)

    # ---- Middleware: request id and timing ----
    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        request_id = request.headers.get("X-Request-ID") or uuid.uuid4().hex[:12]
        start = time.time()
        response = None
        try:
            response = await call_next(request)
            response.headers["X-Request-ID"] = request_id
            return response
        finally:
            duration_ms = int((time.time() - start) * 1000)
            logger.info(
                "request_id=%s %s %s -> %s (%dms)",
                request_id,
                request.method,
                request.url.path,
                getattr(response, "status_code", "NA"),
                duration_ms,
            )

    return app


app = create_app()

if __name__ == "__main__":
    uvicorn.run(
        "src.app.main:app",
        host="0.0.0.0",
        port=8000,
        reload=settings.APP_ENV.lower() != "prod",
    )
