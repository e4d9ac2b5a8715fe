import numpy as np
import pytest
from fastapi.testclient import TestClient

from src.app.core.config import get_settings
from src.app.main import create_app
from src.app.schemas.api import default_fit_spec
from src.samplers import observation
from src.simulate.dgp import generate_paths


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture()
def y():
    return generate_paths(2, 60, 1, seed=1)[0].y.tolist()


def _fit_body(y, **spec):
    body = {"variant": "ASV_DHS", "n_burn": 10, "n_draw": 6, "seed": 2}
    body.update(spec)
    return {"y": y, "spec": body}


def test_health(client):
    res = client.get("/health")
    assert res.status_code == 200
    body = res.json()
    assert body["status"] == "ok"
    assert body["mixture_components"] == 10
    assert res.headers["X-Request-ID"]

    echoed = client.get("/health", headers={"X-Request-ID": "abc123"})
    assert echoed.headers["X-Request-ID"] == "abc123"


def test_fit_returns_bands_and_scalars(client, y):
    res = client.post("/v1/volatility/fit", json=_fit_body(y))
    assert res.status_code == 200
    data = res.json()
    assert data["variant"] == "ASV_DHS"
    assert data["n_keep"] == 6
    assert len(data["h"]["mean"]) == 60
    assert data["h"]["t"][0] == 1
    assert len(data["kappa_mean"]) == 60
    assert set(data["scalars"]) == {"mu", "phi", "xi_mu"}
    assert all(0 <= i < 60 for i in data["flags"])
    assert data["beta"] is None
    assert data["run_id"].startswith("run_")


def test_fit_is_reproducible(client, y):
    first = client.post("/v1/volatility/fit", json=_fit_body(y)).json()
    second = client.post("/v1/volatility/fit", json=_fit_body(y)).json()
    assert first["h"] == second["h"]


def test_fit_trend_model_returns_beta(client, y):
    res = client.post("/v1/volatility/fit", json=_fit_body(y, variant="btf_asv"))
    assert res.status_code == 200
    assert len(res.json()["beta"]["mean"]) == 60


def test_fit_rejects_iteration_budget(client, y):
    res = client.post("/v1/volatility/fit", json=_fit_body(y, n_burn=50_000))
    assert res.status_code == 422
    assert res.json()["error"] == "iteration_limit"


def test_bare_fit_request_uses_budget_within_limit(client, y, monkeypatch):
    monkeypatch.setenv("API_MAX_ITERATIONS", "40")
    get_settings.cache_clear()
    try:
        res = client.post("/v1/volatility/fit", json={"y": y})
    finally:
        get_settings.cache_clear()
    assert res.status_code == 200, res.json()
    # N_BURN=20000, N_DRAW=5000 scaled to 40 sweeps
    assert res.json()["n_keep"] == 8


def test_default_fit_spec_fits_the_iteration_limit():
    get_settings.cache_clear()
    spec = default_fit_spec()
    assert spec.n_burn + spec.n_draw <= get_settings().API_MAX_ITERATIONS
    assert spec.n_draw == 4000


def test_fit_malformed_series(client):
    res = client.post("/v1/volatility/fit", json={**_fit_body([0.1] * 8), "labels": ["a", "b"]})
    assert res.status_code == 422
    assert res.json()["error"] == "malformed_series"


def test_fit_rejects_unknown_variant_and_short_series(client, y):
    assert client.post("/v1/volatility/fit", json=_fit_body(y, variant="GARCH")).status_code == 422
    assert client.post("/v1/volatility/fit", json={"y": [1.0, 2.0]}).status_code == 422


def test_fit_divergence_maps_to_500(client, y, monkeypatch):
    monkeypatch.setattr(observation, "update_h", lambda *args, **kwargs: np.full(60, np.nan))
    res = client.post("/v1/volatility/fit", json=_fit_body(y))
    assert res.status_code == 500
    body = res.json()
    assert body["error"] == "divergence"
    assert body["block"] == "h"
    assert body["iteration"] == 0


def test_simulate(client):
    res = client.post("/v1/simulate", json={"dgp": 8, "T": 60, "paths": 2, "seed": 4})
    assert res.status_code == 200
    data = res.json()
    assert len(data["paths"]) == 2
    assert len(data["paths"][0]["y"]) == 60
    assert data["paths"][0]["regime"][0] == 1

    again = client.post("/v1/simulate", json={"dgp": 8, "T": 60, "paths": 2, "seed": 4}).json()
    assert again == data


def test_simulate_validates_dgp(client):
    assert client.post("/v1/simulate", json={"dgp": 9}).status_code == 422


def test_theory_bounds(client):
    res = client.get("/v1/theory", params={"check": "bounds"})
    assert res.status_code == 200
    data = res.json()
    assert data["passed"] is True
    assert any(r["name"].startswith("marginal inside bounds") for r in data["results"])


def test_theory_unknown_group(client):
    assert client.get("/v1/theory", params={"check": "nope"}).status_code == 422
