import json

import pytest
from fastapi.testclient import TestClient

from craftpipe import asset_core as ac
from craftpipe.interaction import PointKind
from craftpipe.mesh_budget import PlatformProfile
from craftpipe.pipeline import session_view
from craftpipe.service_api.app import create_app
from craftpipe.service_api.config import ApiConfig, ServiceStack


@pytest.fixture
def stack(tmp_path):
    config = ApiConfig(
        blob_store_path=str(tmp_path / "blobs"),
        log_path=str(tmp_path / "logs"),
        platform_tokens=("test-token",),
    )
    service = ServiceStack(config)
    yield service
    service.close()


@pytest.fixture
def client(stack):
    return TestClient(create_app(stack.engine), raise_server_exceptions=False)


def create_session(client, token="test-token"):
    response = client.post("/sessions", json={"platform_token": token})
    assert response.status_code == 201
    return response.json()


def run_full_flow(client, prompt="a chair", behavior=False, name="Item"):
    session = create_session(client)
    sid = session["id"]
    assert client.post(f"/sessions/{sid}/image", json={"text": prompt}).status_code == 200
    assert client.post(f"/sessions/{sid}/model").status_code == 200
    if behavior:
        assert client.post(f"/sessions/{sid}/behavior").status_code == 200
    response = client.post(f"/sessions/{sid}/upload", json={"name": name})
    assert response.status_code == 200
    return response.json()


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_full_happy_path_chair(client):
    view = run_full_flow(client, "a chair", name="Chair")
    assert view["phase"] == "uploaded"
    assert view["item_url"]
    assert view["telemetry"]["counters"]["image_attempts"] == 1


def test_token_never_echoed(client):
    view = create_session(client)
    assert "test-token" not in json.dumps(view)


def test_missing_token_401(client):
    response = client.post("/sessions", json={"platform_token": ""})
    assert response.status_code == 401


def test_validation_error_400(client):
    response = client.post("/sessions", json={})
    assert response.status_code == 400
    session = create_session(client)
    response = client.post(f"/sessions/{session['id']}/image", json={"text": "  "})
    assert response.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/nope").status_code == 404


def test_illegal_phase_409(client):
    session = create_session(client)
    response = client.patch(
        f"/sessions/{session['id']}/adjust",
        json={"transform": {"scale": [2, 2, 2]}},
    )
    assert response.status_code == 409


def test_invariant_violation_422(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    client.post(f"/sessions/{sid}/model")
    response = client.patch(
        f"/sessions/{sid}/adjust", json={"transform": {"scale": [0, 1, 1]}}
    )
    assert response.status_code == 422


def test_behavior_schema_error_502_phase_preserved(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    client.post(f"/sessions/{sid}/model")
    response = client.post(f"/sessions/{sid}/behavior")
    assert response.status_code == 502
    assert client.get(f"/sessions/{sid}").json()["phase"] == "model_ready"


def test_budget_507(tmp_path):
    config = ApiConfig(
        blob_store_path=str(tmp_path / "blobs"),
        log_path=str(tmp_path / "logs"),
        profile=PlatformProfile(max_file_bytes=copy_bytes_limit()),
    )
    service = ServiceStack(config)
    try:
        client = TestClient(create_app(service.engine), raise_server_exceptions=False)
        session = create_session(client)
        sid = session["id"]
        client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
        client.post(f"/sessions/{sid}/model")
        response = client.post(f"/sessions/{sid}/upload", json={"name": "Chair"})
        assert response.status_code == 507
        report = response.json()["report"]
        assert report["triangles"] > 0
        assert "file_bytes" in report["violations"]
    finally:
        service.close()


def copy_bytes_limit():
    return 128  # far below any assembled GLB


def test_adjust_and_preview_scale(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    client.post(f"/sessions/{sid}/model")
    before = ac.parse_glb(client.get(f"/sessions/{sid}/preview.glb").content)
    span_before = ac.longest_span(ac.compute_world_aabb(before))

    response = client.patch(
        f"/sessions/{sid}/adjust", json={"transform": {"scale": [2.0, 2.0, 2.0]}}
    )
    assert response.status_code == 200
    assert response.json()["phase"] == "adjusted"

    after = ac.parse_glb(client.get(f"/sessions/{sid}/preview.glb").content)
    span_after = ac.longest_span(ac.compute_world_aabb(after))
    assert span_after == pytest.approx(2.0 * span_before, rel=1e-5)


def test_preview_contains_extensions(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    client.post(f"/sessions/{sid}/model")
    response = client.get(f"/sessions/{sid}/preview.glb")
    assert response.status_code == 200
    assert response.headers["content-type"] == "model/gltf-binary"
    doc = ac.parse_glb(response.content)
    points, _, _ = ac.read_bundle_extensions(doc)
    assert {p.kind for p in points} == {PointKind.SIT, PointKind.GRIP}


def test_asset_endpoint_serves_session_blobs(client):
    session = create_session(client)
    sid = session["id"]
    view = client.post(f"/sessions/{sid}/image", json={"text": "a chair"}).json()
    digest = view["image_digests"][0]
    response = client.get(f"/sessions/{sid}/assets/{digest}")
    assert response.status_code == 200
    assert response.content[:8] == b"\x89PNG\r\n\x1a\n"
    # assets are scoped to their session
    other = create_session(client)
    response = client.get(f"/sessions/{other['id']}/assets/{digest}")
    assert response.status_code == 404


def test_sit_adjustment_full_precision_echo(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    view = client.post(f"/sessions/{sid}/model").json()
    sit = view["bundle"]["sit"]
    sit["position"][1] += 0.1
    response = client.patch(f"/sessions/{sid}/adjust", json={"sit": sit})
    echoed = response.json()["bundle"]["sit"]
    assert echoed == sit  # full float precision round-trip


def test_clearing_a_point_with_null(client):
    session = create_session(client)
    sid = session["id"]
    client.post(f"/sessions/{sid}/image", json={"text": "a chair"})
    client.post(f"/sessions/{sid}/model")
    response = client.patch(f"/sessions/{sid}/adjust", json={"grip": None})
    assert response.json()["bundle"]["grip"] is None
    assert response.json()["bundle"]["sit"] is not None


def test_http_layer_is_thin_mapping(stack, client):
    """Driving the engine directly and over HTTP yields identical session state."""
    http_view = run_full_flow(client, "a chair", name="Chair")

    engine = stack.engine
    direct = engine.create_session("test-token")
    engine.run_image_phase(direct.id, "a chair")
    engine.run_model_phase(direct.id)
    engine.run_upload_phase(direct.id, "Chair")
    direct_view = session_view(engine.get_session(direct.id))

    def normalize(view):
        view = json.loads(json.dumps(view))
        for volatile in ("id", "token_digest", "item_id", "item_url"):
            view.pop(volatile, None)
        view["telemetry"] = {
            k: v
            for k, v in view["telemetry"].items()
            if k in ("phase", "counters", "failures")
        }
        view["image_digests"] = len(view["image_digests"])
        view["model_digests"] = len(view["model_digests"])
        return view

    assert normalize(http_view) == normalize(
        json.loads(json.dumps(session_view(engine.get_session(http_view["id"]))))
    )
    assert normalize(run_full_flow(client, "a chair", name="Chair")) == normalize(
        direct_view
    )


def test_restart_replay_restores_sessions(tmp_path):
    config = ApiConfig(
        blob_store_path=str(tmp_path / "blobs"), log_path=str(tmp_path / "logs")
    )
    service = ServiceStack(config)
    try:
        client = TestClient(create_app(service.engine))
        view = run_full_flow(client, "an airplane", behavior=True, name="Plane")
        sid = view["id"]
        before = client.get(f"/sessions/{sid}").json()
    finally:
        service.close()

    # new process: same storage, fresh engine
    service2 = ServiceStack(config)
    try:
        client2 = TestClient(create_app(service2.engine))
        after = client2.get(f"/sessions/{sid}").json()
        assert after == before
    finally:
        service2.close()


def test_openapi_document_committed(client):
    committed = json.loads(
        (__import__("pathlib").Path(__file__).parent.parent / "docs/openapi.json")
        .read_text("utf-8")
    )
    live = client.get("/openapi.json").json()
    assert live == committed
