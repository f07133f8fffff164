"""Local HTTP service backing the correspondence-picker UI.

Sessions are in-memory; each one holds the mesh and image the server was
started with, the user's correspondence set, and the latest run result.
Endpoints speak JSON except for the OBJ text and raw image bytes. Heavy run
requests execute on the worker-thread pool, and a per-session flag turns
concurrent mutations into 409s while a run is in flight.
"""

import mimetypes
import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .errors import CorrespondenceFormatError, TexDeformError
from .formats import (
    correspondences_from_dict,
    correspondences_to_dict,
    image_info,
    report_dict,
)
from .mesh import load_obj, obj_text
from .optimize import SolverConfig, run

RUN_PARAM_KEYS = {"alpha", "beta", "eps", "tol", "max_iters"}


@dataclass
class Session:
    id: str
    corr: Optional[object] = None
    result: Optional[object] = None
    report: Optional[dict] = None
    result_obj: Optional[str] = None
    run_in_flight: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def create_app(mesh_path, image_path, frontend_dir=None):
    mesh = load_obj(mesh_path)
    image = image_info(image_path)
    input_obj = obj_text(mesh)
    sessions = {}

    app = FastAPI(title="texdeform service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.sessions = sessions

    @app.exception_handler(RequestValidationError)
    def _validation_as_400(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def _session(sid) -> Session:
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}")
        return session

    @app.post("/session")
    def create_session():
        sid = uuid.uuid4().hex
        sessions[sid] = Session(id=sid)
        return {"id": sid}

    @app.get("/session/{sid}/mesh")
    def get_mesh(sid: str):
        _session(sid)
        return PlainTextResponse(input_obj, media_type="text/plain")

    @app.get("/session/{sid}/image")
    def get_image(sid: str):
        _session(sid)
        media = mimetypes.guess_type(image.path)[0] or "application/octet-stream"
        return FileResponse(image.path, media_type=media)

    @app.get("/session/{sid}/correspondences")
    def get_correspondences(sid: str):
        session = _session(sid)
        if session.corr is None:
            raise HTTPException(status_code=404, detail="no correspondences set")
        return correspondences_to_dict(session.corr)

    @app.put("/session/{sid}/correspondences")
    def put_correspondences(sid: str, doc: dict = Body(...)):
        session = _session(sid)
        if session.run_in_flight:
            raise HTTPException(status_code=409, detail="run in flight")
        try:
            corr = correspondences_from_dict(doc).bind(mesh)
        except CorrespondenceFormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        if (corr.image_width, corr.image_height) != (image.width, image.height):
            raise HTTPException(
                status_code=400,
                detail=f"image: size {corr.image_width}x{corr.image_height} does not "
                f"match served image {image.width}x{image.height}",
            )
        session.corr = corr
        return {"pairs": len(corr)}

    @app.post("/session/{sid}/run")
    def post_run(sid: str, params: dict = Body(default={})):
        session = _session(sid)
        unknown = set(params) - RUN_PARAM_KEYS
        if unknown:
            raise HTTPException(status_code=400, detail=f"unknown run parameter(s): {sorted(unknown)}")
        if session.corr is None or len(session.corr) < 4:
            raise HTTPException(status_code=400, detail="need at least 4 correspondence pairs")
        if not session.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="run in flight")
        try:
            if session.run_in_flight:
                raise HTTPException(status_code=409, detail="run in flight")
            session.run_in_flight = True
        finally:
            session.lock.release()
        try:
            try:
                cfg = SolverConfig(
                    alpha=float(params.get("alpha", 0.5)),
                    beta=float(params.get("beta", 2.0)),
                    eps=float(params.get("eps", 1e-3)),
                    tol=float(params.get("tol", 1e-3)),
                    max_iterations=int(params.get("max_iters", 20)),
                )
                result = run(mesh, image, session.corr, cfg)
            except (TexDeformError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            session.result = result
            session.report = report_dict(result, cfg, image)
            session.result_obj = obj_text(
                result.mesh,
                uvs=result.uvs,
                texture_name=os.path.basename(image.path),
                mtl_name="mesh.mtl",
            )
            return session.report
        finally:
            session.run_in_flight = False

    @app.get("/session/{sid}/result/mesh")
    def get_result_mesh(sid: str):
        session = _session(sid)
        if session.result_obj is None:
            raise HTTPException(status_code=404, detail="no result yet")
        return PlainTextResponse(session.result_obj, media_type="text/plain")

    @app.get("/session/{sid}/result/report")
    def get_result_report(sid: str):
        session = _session(sid)
        if session.report is None:
            raise HTTPException(status_code=404, detail="no result yet")
        return session.report

    if frontend_dir is None:
        candidate = os.path.join(os.getcwd(), "frontend", "public")
        frontend_dir = candidate if os.path.isdir(candidate) else None
    if frontend_dir:
        app.mount("/ui", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
