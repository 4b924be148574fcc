"""FastAPI application wrapping the numerics; the CLI is a thin client."""

from __future__ import annotations

from fastapi import FastAPI, Request

from .. import __version__
from ..errors import FluxspecError
from .routes import error_response, router


def create_app() -> FastAPI:
    app = FastAPI(title="fluxspec", version=__version__)
    app.include_router(router)

    @app.exception_handler(FluxspecError)
    async def handle_domain_error(request: Request, exc: FluxspecError):
        return error_response(exc)

    return app


app = create_app()
