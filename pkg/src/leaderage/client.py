"""HTTP client used by the CLI.

Without a server URL the requests run against the FastAPI app in-process
(over httpx's ASGI transport), so the CLI works standalone while still
exercising the exact HTTP contract a remote deployment would.
"""
from __future__ import annotations

import asyncio
from typing import Any, Mapping

import httpx

__all__ = ["ServiceClient"]


class ServiceClient:
    def __init__(self, server: str | None = None, timeout: float = 3600.0):
        self.server = server
        self.timeout = timeout

    def request(
        self,
        method: str,
        path: str,
        *,
        json: Any = None,
        params: Mapping[str, Any] | None = None,
    ) -> tuple[int, Any]:
        """Issue one request; returns (status_code, decoded JSON body)."""
        return asyncio.run(self._request(method, path, json, params))

    async def _request(self, method, path, json, params) -> tuple[int, Any]:
        if self.server is None:
            from .service.app import app

            transport = httpx.ASGITransport(app=app)
            client = httpx.AsyncClient(
                transport=transport, base_url="http://leaderage.local", timeout=self.timeout
            )
        else:
            client = httpx.AsyncClient(base_url=self.server, timeout=self.timeout)
        async with client:
            response = await client.request(method, path, json=json, params=params)
            return response.status_code, response.json()
