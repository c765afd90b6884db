"""Session state machine: the four pipeline phases plus adjustment.

Phase graph (any other requested transition raises IllegalPhase):

    Created -> ImageReady -> ModelReady -> Adjusted
    ImageReady/ModelReady/Adjusted loop on themselves (regeneration);
    ModelReady/Adjusted -> BehaviorAttached (optional);
    ModelReady/Adjusted/BehaviorAttached -> Uploaded.

Provider failures never destroy a session: the failure is logged as an
event, the phase is preserved, and the error is re-raised for the caller
to surface, so the user can retry the stage.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from ..asset_core.assemble import AssemblyBundle, AssetMetadata, assemble
from ..asset_core.bounds import compute_world_aabb, longest_span
from ..asset_core.glb import parse_glb, write_glb
from ..asset_core.types import Transform
from ..behavior import (
    MotionDescriptor,
    compile_to_platform_script,
    simulate,
    validate_descriptor,
)
from ..errors import (
    AuthFailed,
    CraftError,
    DegenerateGeometry,
    IllegalPhase,
    InvariantError,
    SchemaError,
)
from ..interaction import PointKind, default_grip_point, default_sit_point
from ..mesh_budget import decimate, measure
from ..scale import apply_estimated_scale, parse_size_reply
from .storage import digest_of_text
from . import views

UNSET = object()


class Phase(str, Enum):
    CREATED = "created"
    IMAGE_READY = "image_ready"
    MODEL_READY = "model_ready"
    ADJUSTED = "adjusted"
    BEHAVIOR_ATTACHED = "behavior_attached"
    UPLOADED = "uploaded"
    FAILED = "failed"  # reserved for unrecoverable sessions; stage failures
    # preserve the phase instead


STAGE_IMAGE = "image"
STAGE_MODEL = "model"
STAGE_BEHAVIOR = "behavior"
STAGE_UPLOAD = "upload"


@dataclass
class Session:
    id: str
    token_digest: str
    platform_token: str = field(repr=False, default="")
    task_label: str = ""
    phase: Phase = Phase.CREATED
    prompt_history: list = field(default_factory=list)  # (user_text, enhanced)
    image_digests: list = field(default_factory=list)
    model_digests: list = field(default_factory=list)
    bundle: AssemblyBundle | None = None
    trajectory_digest: str = ""
    timings_ms: dict = field(default_factory=dict)
    counters: dict = field(
        default_factory=lambda: {
            "image_attempts": 0,
            "model_attempts": 0,
            "behavior_attempts": 0,
            "upload_attempts": 0,
        }
    )
    failures: dict = field(default_factory=dict)  # stage -> count
    created_ts: float = 0.0
    uploaded_ts: float = 0.0
    item_id: str = ""
    item_url: str = ""

    def latest_image_digest(self) -> str:
        return self.image_digests[-1]

    def latest_enhanced_prompt(self) -> str:
        return self.prompt_history[-1][1]


class PipelineEngine:
    """Owns all sessions; one session is processed serially under its lock,
    distinct sessions run concurrently."""

    def __init__(
        self,
        providers,
        gateway,
        blob_store,
        event_log,
        profile,
        preview_steps: int = 600,
        preview_dt_s: float = 0.05,
        clock=time.time,
    ):
        self.providers = providers
        self.gateway = gateway
        self.blobs = blob_store
        self.events = event_log
        self.profile = profile
        self.preview_steps = preview_steps
        self.preview_dt_s = preview_dt_s
        self.clock = clock
        self.sessions: dict = {}
        self._locks: dict = {}
        self._registry_lock = threading.Lock()

    # --- plumbing ---------------------------------------------------------------

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(f"no session {session_id}")
        return session

    def _require_phase(self, session: Session, allowed) -> None:
        if session.phase not in allowed:
            raise IllegalPhase(session.phase.value, {p.value for p in allowed})

    def _fail_stage(self, session, stage, exc, started) -> None:
        duration = (self.clock() - started) * 1000.0
        session.failures[stage] = session.failures.get(stage, 0) + 1
        self.events.append(
            session.id,
            "stage_failed",
            stage=stage,
            error=type(exc).__name__,
            detail=str(exc)[:500],
            duration_ms=duration,
        )

    def _add_timing(self, session, stage, started, now=None) -> float:
        duration = ((self.clock() if now is None else now) - started) * 1000.0
        session.timings_ms[stage] = session.timings_ms.get(stage, 0.0) + duration
        return duration

    # --- operations -------------------------------------------------------------

    def create_session(self, platform_token: str, task_label: str = "") -> Session:
        if not platform_token:
            raise ValueError("platform token must be non-empty")
        session = Session(
            id=uuid.uuid4().hex,
            token_digest=digest_of_text(platform_token),
            platform_token=platform_token,
            task_label=task_label,
            created_ts=self.clock(),
        )
        with self._registry_lock:
            self.sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self.events.append(
            session.id,
            "session_created",
            at=session.created_ts,
            token_digest=session.token_digest,
            task_label=task_label,
        )
        return session

    def run_image_phase(self, session_id: str, user_text: str) -> Session:
        if not user_text or not user_text.strip():
            raise ValueError("prompt text must be non-empty")
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            self._require_phase(session, {Phase.CREATED, Phase.IMAGE_READY})
            started = self.clock()
            try:
                enhanced = self.providers.enhance_prompt(user_text, session_id)
                image = self.providers.generate_image(enhanced, session_id)
            except CraftError as exc:
                self._fail_stage(session, STAGE_IMAGE, exc, started)
                raise
            digest = self.blobs.put(image, "image/png")
            session.prompt_history.append((user_text, enhanced))
            session.image_digests.append(digest)
            session.counters["image_attempts"] += 1
            session.phase = Phase.IMAGE_READY
            duration = self._add_timing(session, STAGE_IMAGE, started)
            self.events.append(
                session_id,
                "image_generated",
                user_text=user_text,
                enhanced=enhanced,
                image_digest=digest,
                duration_ms=duration,
            )
            return session

    def run_model_phase(self, session_id: str) -> Session:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            self._require_phase(
                session, {Phase.IMAGE_READY, Phase.MODEL_READY, Phase.ADJUSTED}
            )
            started = self.clock()
            image_digest = session.latest_image_digest()
            image = self.blobs.get(image_digest)
            try:
                glb_bytes = self.providers.image_to_3d(image, session_id)
                doc = parse_glb(glb_bytes)
                size_reply = self.providers.estimate_size(image, session_id)
                estimate = parse_size_reply(size_reply)
                scaled, factor = apply_estimated_scale(doc, estimate)
                triangles, vertices = measure(scaled)
                decimated = False
                if triangles > self.profile.max_triangles:
                    scaled = decimate(scaled, self.profile.max_triangles)
                    triangles, vertices = measure(scaled)
                    decimated = True
            except (CraftError, DegenerateGeometry) as exc:
                self._fail_stage(session, STAGE_MODEL, exc, started)
                raise

            raw_digest = self.blobs.put(glb_bytes, "model/gltf-binary")
            model_bytes = write_glb(scaled)
            model_digest = self.blobs.put(model_bytes, "model/gltf-binary")
            aabb = compute_world_aabb(scaled)
            session.bundle = AssemblyBundle(
                model=scaled,
                root_transform=Transform.identity(),
                interaction_points=(default_sit_point(aabb), default_grip_point(aabb)),
                behavior=None,
                metadata=AssetMetadata(
                    creator="craftpipe", source_image_digest=image_digest
                ),
            )
            session.model_digests.append(model_digest)
            session.counters["model_attempts"] += 1
            session.trajectory_digest = ""
            session.phase = Phase.MODEL_READY
            duration = self._add_timing(session, STAGE_MODEL, started)
            self.events.append(
                session_id,
                "model_generated",
                image_digest=image_digest,
                raw_model_digest=raw_digest,
                model_digest=model_digest,
                size_reply=size_reply,
                estimate_m=estimate.length_m,
                parse_confidence=estimate.parse_confidence.value,
                scale_factor=factor.value,
                span_m=longest_span(aabb),
                decimated=decimated,
                triangles=triangles,
                vertices=vertices,
                duration_ms=duration,
            )
            return session

    def apply_adjustment(
        self, session_id: str, root_transform=UNSET, sit=UNSET, grip=UNSET
    ) -> Session:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            self._require_phase(
                session,
                {Phase.MODEL_READY, Phase.ADJUSTED, Phase.BEHAVIOR_ATTACHED},
            )
            bundle = session.bundle
            new_transform = (
                bundle.root_transform if root_transform is UNSET else root_transform
            )
            points = {p.kind: p for p in bundle.interaction_points}
            changes = {}
            if root_transform is not UNSET:
                changes["transform"] = views.transform_view(new_transform)
            if sit is not UNSET:
                if sit is None:
                    points.pop(PointKind.SIT, None)
                else:
                    points[PointKind.SIT] = sit
                changes["sit"] = views.point_view(sit)
            if grip is not UNSET:
                if grip is None:
                    points.pop(PointKind.GRIP, None)
                else:
                    points[PointKind.GRIP] = grip
                changes["grip"] = views.point_view(grip)
            session.bundle = AssemblyBundle(
                model=bundle.model,
                root_transform=new_transform,
                interaction_points=tuple(
                    points[k] for k in (PointKind.SIT, PointKind.GRIP) if k in points
                ),
                behavior=bundle.behavior,
                metadata=bundle.metadata,
            )
            if session.phase != Phase.BEHAVIOR_ATTACHED:
                session.phase = Phase.ADJUSTED
            self.events.append(session_id, "adjusted", **changes)
            return session

    def run_behavior_phase(self, session_id: str) -> Session:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            self._require_phase(session, {Phase.MODEL_READY, Phase.ADJUSTED})
            started = self.clock()
            image = self.blobs.get(session.latest_image_digest())
            description = session.latest_enhanced_prompt()
            try:
                raw = self.providers.generate_behavior(image, description, session_id)
            except CraftError as exc:
                self._fail_stage(session, STAGE_BEHAVIOR, exc, started)
                raise
            try:
                descriptor = validate_descriptor(raw)
            except (SchemaError, InvariantError) as exc:
                # behavior is optional: surface the error, keep the phase
                self._fail_stage(session, STAGE_BEHAVIOR, exc, started)
                raise

            trajectory_digest = ""
            samples = 0
            if isinstance(descriptor, MotionDescriptor):
                trajectory = simulate(descriptor, self.preview_dt_s, self.preview_steps)
                samples = len(trajectory.samples)
                trajectory_digest = self.blobs.put(
                    views.trajectory_json(trajectory), "application/json"
                )
            bundle = session.bundle
            session.bundle = AssemblyBundle(
                model=bundle.model,
                root_transform=bundle.root_transform,
                interaction_points=bundle.interaction_points,
                behavior=descriptor,
                metadata=bundle.metadata,
            )
            session.trajectory_digest = trajectory_digest
            session.counters["behavior_attempts"] += 1
            session.phase = Phase.BEHAVIOR_ATTACHED
            duration = self._add_timing(session, STAGE_BEHAVIOR, started)
            self.events.append(
                session_id,
                "behavior_attached",
                descriptor=descriptor.to_json_obj(),
                raw_reply=raw,
                trajectory_digest=trajectory_digest,
                samples=samples,
                duration_ms=duration,
            )
            return session

    def run_upload_phase(self, session_id: str, item_name: str) -> Session:
        if not item_name or not item_name.strip():
            raise ValueError("item name must be non-empty")
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            self._require_phase(
                session,
                {Phase.MODEL_READY, Phase.ADJUSTED, Phase.BEHAVIOR_ATTACHED},
            )
            started = self.clock()
            bundle = session.bundle
            named = AssemblyBundle(
                model=bundle.model,
                root_transform=bundle.root_transform,
                interaction_points=bundle.interaction_points,
                behavior=bundle.behavior,
                metadata=AssetMetadata(
                    name=item_name,
                    creator=bundle.metadata.creator,
                    source_image_digest=bundle.metadata.source_image_digest,
                ),
            )
            try:
                if not session.platform_token:
                    raise AuthFailed(
                        "platform token unavailable (session restored from log); "
                        "create a new session"
                    )
                glb = assemble(named, self.profile)
                script_text = None
                if named.behavior is not None:
                    script_text = compile_to_platform_script(
                        named.behavior, self.gateway.adapter.script_templates
                    )
                receipt = self.gateway.upload(
                    glb, item_name, session.platform_token, script_text=script_text
                )
            except CraftError as exc:
                self._fail_stage(session, STAGE_UPLOAD, exc, started)
                raise
            assembled_digest = self.blobs.put(glb, "model/gltf-binary")
            session.bundle = named
            session.counters["upload_attempts"] += 1
            session.phase = Phase.UPLOADED
            session.uploaded_ts = self.clock()
            session.item_id = receipt.item_id
            session.item_url = receipt.item_url
            duration = self._add_timing(
                session, STAGE_UPLOAD, started, now=session.uploaded_ts
            )
            self.events.append(
                session_id,
                "uploaded",
                at=session.uploaded_ts,
                name=item_name,
                item_id=receipt.item_id,
                item_url=receipt.item_url,
                uploaded_bytes=receipt.uploaded_bytes,
                assembled_digest=assembled_digest,
                duration_ms=duration,
            )
            return session

    # --- read-side --------------------------------------------------------------

    def preview_glb(self, session_id: str) -> bytes:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            if session.bundle is None:
                raise IllegalPhase(
                    session.phase.value,
                    {
                        Phase.MODEL_READY.value,
                        Phase.ADJUSTED.value,
                        Phase.BEHAVIOR_ATTACHED.value,
                        Phase.UPLOADED.value,
                    },
                )
            return assemble(session.bundle)

    def get_asset(self, session_id: str, digest: str) -> tuple:
        session = self.get_session(session_id)
        known = (
            set(session.image_digests)
            | set(session.model_digests)
            | {session.trajectory_digest}
        )
        if digest not in known:
            raise KeyError(f"digest {digest} does not belong to session {session_id}")
        return self.blobs.get(digest), self.blobs.media_type(digest)

    def export_telemetry(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        return views.telemetry_view(session)
