"""HTTP service layer; `uvicorn leaderage.service:app` serves it."""
from .app import app, create_app

__all__ = ["app", "create_app"]
