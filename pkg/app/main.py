from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.api.endpoints import algebras, presets
from app.core.config import settings
from app.core.errors import AlgebraError
from app.core.log import configure_logging

configure_logging()

app = FastAPI(
    title=settings.PROJECT_NAME,
    version=settings.VERSION,
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
    docs_url="/docs",
    redoc_url="/redoc",
)


@app.exception_handler(AlgebraError)
async def algebra_exception_handler(request: Request, exc: AlgebraError):
    return JSONResponse(status_code=exc.http_status, content={"detail": exc.to_dict()})


# Global error handler
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    return JSONResponse(
        status_code=500,
        content={"detail": str(exc)},
    )


app.include_router(
    presets.router,
    prefix=f"{settings.API_V1_STR}/presets",
    tags=["presets"],
)
app.include_router(
    algebras.router,
    prefix=f"{settings.API_V1_STR}/algebras",
    tags=["algebras"],
)


@app.get("/")
def read_root():
    """Root endpoint."""
    return {
        "message": f"Welcome to the {settings.PROJECT_NAME} API",
        "docs": "/docs",
        "redoc": "/redoc",
    }
