"""The HTTP/JSON API surface."""
import pytest
from fastapi.testclient import TestClient

from logiclab.corpus import corpus_exercises
from logiclab.service import create_app
from logiclab.sessions import SessionStore


@pytest.fixture
def client(tmp_path):
    store = SessionStore(tmp_path)
    store.add_exercises(corpus_exercises(), "corpus")
    return TestClient(create_app(store))


def _create(client, exercise_id="imp-identity"):
    response = client.post(
        "/sessions", json={"exercise_id": exercise_id, "student_id": "alice"}
    )
    assert response.status_code == 201
    return response.json()


class TestExercises:
    def test_listing_is_student_facing(self, client):
        body = client.get("/exercises").json()
        assert len(body["exercises"]) == len(corpus_exercises())
        for ex in body["exercises"]:
            assert "hidden_status" not in ex and "certificate" not in ex

    def test_generate_endpoint(self, client):
        response = client.post(
            "/exercises/generate", json={"seed": 77, "mode": "refute"}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["mode"] == "refute" and body["certificate"]
        # the new exercise is immediately servable
        created = _create(client, body["id"])
        assert created["status"] == "open"

    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}


class TestSessions:
    def test_create_and_fetch(self, client):
        session = _create(client)
        body = client.get(f"/sessions/{session['id']}").json()
        assert body["status"] == "open"
        assert body["state"]["open_goals"][0]["conclusion"] == "p -> p"
        assert body["state"]["open_goals"][0]["palette"]

    def test_missing_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404

    def test_missing_exercise_404(self, client):
        response = client.post(
            "/sessions", json={"exercise_id": "nope", "student_id": "alice"}
        )
        assert response.status_code == 404

    def test_command_flow(self, client):
        session = _create(client)
        sid = session["id"]
        body = client.post(
            f"/sessions/{sid}/commands", json={"command": "backward impl_intro"}
        ).json()
        assert body["outcome"]["accepted"]
        body = client.post(
            f"/sessions/{sid}/commands", json={"command": "flub"}
        ).json()
        assert not body["outcome"]["accepted"]
        for cmd in ("assumption", "qed"):
            body = client.post(f"/sessions/{sid}/commands", json={"command": cmd}).json()
        assert body["state"]["status"] == "proved"
        # further commands conflict with the closed session
        response = client.post(f"/sessions/{sid}/commands", json={"command": "undo"})
        assert response.status_code == 409

    def test_undo_endpoint(self, client):
        session = _create(client)
        sid = session["id"]
        client.post(f"/sessions/{sid}/commands", json={"command": "backward impl_intro"})
        body = client.post(f"/sessions/{sid}/undo").json()
        assert body["outcome"]["accepted"]
        response = client.post(f"/sessions/{sid}/undo")
        assert response.status_code == 400

    def test_refutation_trace_payload(self, client):
        session = _create(client, "converse-fallacy")
        sid = session["id"]
        body = client.post(
            f"/sessions/{sid}/commands", json={"command": "refute with p=0, q=1"}
        ).json()
        assert body["outcome"]["accepted"]
        traces = body["outcome"]["report"]["refutation"]["traces"]
        assert traces[-1]["role"] == "conclusion"
        assert traces[-1]["trace"]["value"] is False


class TestReplayAndExport:
    def test_replay_payload(self, client):
        session = _create(client)
        sid = session["id"]
        for cmd in ("backward impl_intro", "nope", "assumption", "qed"):
            client.post(f"/sessions/{sid}/commands", json={"command": cmd})
        body = client.get(f"/sessions/{sid}/replay").json()
        assert len(body["frames"]) == 3
        assert [len(f["open_goals"]) for f in body["frames"]] == [1, 1, 0]
        rejected = [e for e in body["events"] if not e["outcome"]["accepted"]]
        assert len(rejected) == 1 and rejected[0]["frame_after"] == 1

    def test_script_export_plaintext(self, client):
        session = _create(client)
        sid = session["id"]
        for cmd in ("backward impl_intro", "assumption", "qed"):
            client.post(f"/sessions/{sid}/commands", json={"command": cmd})
        response = client.get(f"/sessions/{sid}/export?form=script")
        assert response.headers["content-type"].startswith("text/plain")
        assert response.text.splitlines() == ["backward impl_intro", "assumption", "qed"]

    def test_tree_export_conflict_when_open(self, client):
        session = _create(client)
        response = client.get(f"/sessions/{session['id']}/export?form=tree")
        assert response.status_code == 409
