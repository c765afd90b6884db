"""HTTP layer: a thin mapping of endpoints onto pipeline operations.

No business logic lives here; every endpoint calls exactly one engine
operation and serializes its result, so session state reached over HTTP is
identical to driving the engine directly.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (
    AuthFailed,
    BudgetExceeded,
    CraftError,
    DecimationFailed,
    DuplicateKind,
    IllegalPhase,
    InvariantViolation,
)
from ..interaction import PointKind
from ..mesh_budget import active_kernel_name
from ..pipeline import UNSET, session_view
from ..pipeline.views import point_from_view, transform_from_view

API_VERSION = "1.0.0"


class CreateSessionBody(BaseModel):
    platform_token: str
    task_label: str = ""


class ImageBody(BaseModel):
    text: str


class PointBody(BaseModel):
    position: list
    rotation: list


class TransformBody(BaseModel):
    translation: list = [0.0, 0.0, 0.0]
    rotation: list = [0.0, 0.0, 0.0, 1.0]
    scale: list = [1.0, 1.0, 1.0]


class AdjustBody(BaseModel):
    transform: TransformBody | None = None
    sit: PointBody | None = None
    grip: PointBody | None = None


class UploadBody(BaseModel):
    name: str


def _status_for(exc: CraftError) -> int:
    if isinstance(exc, IllegalPhase):
        return 409
    if isinstance(exc, (InvariantViolation, DuplicateKind)):
        return 422
    if isinstance(exc, (BudgetExceeded, DecimationFailed)):
        return 507
    if isinstance(exc, AuthFailed):
        return 401
    return 502  # provider/platform failures


def create_app(engine) -> FastAPI:
    app = FastAPI(
        title="craftpipe service",
        version=API_VERSION,
        description="Prompt-to-3D object pipeline for metaverse platforms",
    )

    @app.exception_handler(CraftError)
    async def craft_error_handler(request: Request, exc: CraftError):
        content = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, BudgetExceeded) and exc.report is not None:
            content["report"] = exc.report.to_json_obj()
        return JSONResponse(status_code=_status_for(exc), content=content)

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400, content={"error": "ValueError", "detail": str(exc)}
        )

    @app.exception_handler(KeyError)
    async def key_error_handler(request: Request, exc: KeyError):
        return JSONResponse(
            status_code=404, content={"error": "NotFound", "detail": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "ValidationError", "detail": exc.errors()},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "decimation_kernel": active_kernel_name()}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if not body.platform_token:
            return JSONResponse(
                status_code=401,
                content={"error": "AuthFailed", "detail": "missing platform token"},
            )
        session = engine.create_session(body.platform_token, body.task_label)
        return session_view(session)

    @app.post("/sessions/{session_id}/image")
    def run_image(session_id: str, body: ImageBody):
        return session_view(engine.run_image_phase(session_id, body.text))

    @app.post("/sessions/{session_id}/model")
    def run_model(session_id: str):
        return session_view(engine.run_model_phase(session_id))

    @app.patch("/sessions/{session_id}/adjust")
    def adjust(session_id: str, body: AdjustBody):
        provided = body.model_fields_set
        kwargs = {}
        if "transform" in provided:
            if body.transform is None:
                raise ValueError("transform cannot be null")
            kwargs["root_transform"] = transform_from_view(
                body.transform.model_dump()
            )
        if "sit" in provided:
            kwargs["sit"] = (
                None
                if body.sit is None
                else point_from_view(body.sit.model_dump(), PointKind.SIT)
            )
        if "grip" in provided:
            kwargs["grip"] = (
                None
                if body.grip is None
                else point_from_view(body.grip.model_dump(), PointKind.GRIP)
            )
        session = engine.apply_adjustment(
            session_id,
            root_transform=kwargs.get("root_transform", UNSET),
            sit=kwargs.get("sit", UNSET),
            grip=kwargs.get("grip", UNSET),
        )
        return session_view(session)

    @app.post("/sessions/{session_id}/behavior")
    def run_behavior(session_id: str):
        return session_view(engine.run_behavior_phase(session_id))

    @app.post("/sessions/{session_id}/upload")
    def run_upload(session_id: str, body: UploadBody):
        return session_view(engine.run_upload_phase(session_id, body.name))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_view(engine.get_session(session_id))

    @app.get("/sessions/{session_id}/assets/{digest}")
    def get_asset(session_id: str, digest: str):
        data, media_type = engine.get_asset(session_id, digest)
        return Response(content=data, media_type=media_type)

    @app.get("/sessions/{session_id}/preview.glb")
    def preview(session_id: str):
        return Response(
            content=engine.preview_glb(session_id), media_type="model/gltf-binary"
        )

    return app
