from __future__ import annotations

import asyncio
import json
from pathlib import Path
from typing import Any, Dict

from fastapi import Body, FastAPI, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
import uvicorn

from analysis.typemap import TypeMap
from lang import parse_program
from lang.errors import AnalysisError

from server.config import Settings, logger
from server.hub import ProgressHub
from server.runner import analyze_source, config_from_request, load_expected, run_batch


settings = Settings()
app = FastAPI(title="dfrt")
app.add_middleware(
    CORSMiddleware,
    allow_origins=list(settings.cors_origins),
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)
hub = ProgressHub(settings)


def _run(data: Dict[str, Any], progress=None) -> Dict[str, Any]:
    source = data.get("source")
    if not isinstance(source, str) or not source.strip():
        raise AnalysisError("request needs a non-empty 'source'")
    program = parse_program(source)
    cfg = config_from_request(data, settings, program)
    return analyze_source(
        source,
        cfg,
        oracle=bool(data.get("oracle", False)),
        fuel=int(data.get("fuel") or settings.default_fuel),
        dump_types=bool(data.get("dump_types", True)),
        progress=progress,
    )


@app.get("/health")
async def health():
    return PlainTextResponse("ok")


@app.post("/analyze")
async def analyze_endpoint(data: Dict[str, Any] = Body(...)):
    loop = asyncio.get_running_loop()
    try:
        report = await loop.run_in_executor(None, _run, data)
    except (AnalysisError, ValueError) as exc:
        return JSONResponse({"error": str(exc)}, status_code=400)
    except Exception:
        logger.exception("analysis request failed")
        return JSONResponse({"error": "internal error"}, status_code=500)
    return JSONResponse(report)


def _corpus() -> Path:
    root = Path(settings.corpus_dir)
    return root if root.is_absolute() else Path(__file__).resolve().parent / root


def _run_batch(data: Dict[str, Any]) -> Dict[str, Any]:
    cfg = config_from_request(data, settings)
    corpus = _corpus()
    files = sorted(corpus.glob("*.ml"))
    if not files:
        raise AnalysisError(f"no programs under {corpus}")
    summary = run_batch(files, cfg, load_expected(corpus / "expected.json"), settings.batch_workers)
    return summary.to_json()


@app.post("/batch")
async def batch_endpoint(data: Dict[str, Any] = Body(default={})):
    """Run the configured corpus; the summary also goes out to every open stream."""
    loop = asyncio.get_running_loop()
    try:
        summary = await loop.run_in_executor(None, _run_batch, data)
    except (AnalysisError, ValueError) as exc:
        return JSONResponse({"error": str(exc)}, status_code=400)
    except Exception:
        logger.exception("batch request failed")
        return JSONResponse({"error": "internal error"}, status_code=500)
    await hub.broadcast({"event": "batch", **summary})
    return JSONResponse(summary)


@app.websocket("/stream")
async def stream(ws: WebSocket):
    await hub.connect(ws)
    loop = asyncio.get_running_loop()
    try:
        while True:
            try:
                msg = await ws.receive_text()
            except WebSocketDisconnect:
                break
            try:
                data = json.loads(msg)
            except Exception:
                data = None
            if not isinstance(data, dict):
                await hub.send(ws, {"event": "error", "message": "expected a JSON object"})
                continue

            def on_progress(n: int, m: TypeMap):
                if n % settings.progress_every == 0:
                    frame = {"event": "iteration", "n": n, "nodes": m.reached(), "top": m.top}
                    asyncio.run_coroutine_threadsafe(hub.send(ws, frame), loop)

            try:
                report = await loop.run_in_executor(None, _run, data, on_progress)
            except (AnalysisError, ValueError) as exc:
                await hub.send(ws, {"event": "error", "message": str(exc)})
                continue
            except Exception:
                logger.exception("stream analysis failed")
                await hub.send(ws, {"event": "error", "message": "internal error"})
                continue
            await hub.send(ws, {"event": "report", **report})
    finally:
        await hub.disconnect(ws)


if __name__ == "__main__":
    uvicorn.run("app:app", host=settings.host, port=settings.port, reload=False)
