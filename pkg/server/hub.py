from __future__ import annotations

import asyncio
import json
from typing import Any, Dict, Set

from fastapi import WebSocket

from .config import Settings, logger


class ProgressHub:
    """
    Connection hub for analysis progress streams.

    Frames go to every connected websocket; a socket that fails on send is
    dropped.
    """
    def __init__(self, settings: Settings):
        self.settings = settings
        self.connections: Set[WebSocket] = set()
        self.lock = asyncio.Lock()

    async def connect(self, ws: WebSocket):
        await ws.accept()
        async with self.lock:
            self.connections.add(ws)

    async def disconnect(self, ws: WebSocket):
        async with self.lock:
            self.connections.discard(ws)

    async def send(self, ws: WebSocket, payload: Dict[str, Any]) -> bool:
        try:
            await ws.send_text(json.dumps(payload, ensure_ascii=False))
            return True
        except Exception:
            if self.settings.ws_debug:
                logger.exception("send failed")
            await self.disconnect(ws)
            return False

    async def broadcast(self, payload: Dict[str, Any]):
        async with self.lock:
            targets = list(self.connections)

        dead: list = []
        for ws in targets:
            try:
                await ws.send_text(json.dumps(payload, ensure_ascii=False))
            except Exception:
                if self.settings.ws_debug:
                    logger.exception("broadcast failed")
                dead.append(ws)

        if dead:
            async with self.lock:
                for ws in dead:
                    self.connections.discard(ws)
