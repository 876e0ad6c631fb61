"""Fixtures partagées : échantillons déterministes, environnement figé, fichiers de référence."""

import os
from pathlib import Path

import numpy as np
import pytest

from fbst.density.kde import PosteriorSample

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_DRAWS = GOLDEN_DIR / "draws.csv"
FIXED_TIMESTAMP = "2024-01-01T00:00:00+00:00"


@pytest.fixture(autouse=True)
def _fixed_env(monkeypatch):
    monkeypatch.setenv("FBST_TIMESTAMP", FIXED_TIMESTAMP)
    for var in ("FBST_GRID_SIZE", "FBST_LOG_FILE", "FBST_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def normal_sample() -> PosteriorSample:
    """100 000 tirages N(1, 1)."""
    rng = np.random.default_rng(1)
    return PosteriorSample(rng.normal(1.0, 1.0, 100_000), "theta")


@pytest.fixture
def small_sample() -> PosteriorSample:
    """2 000 tirages N(0.3, 0.5) : chemin KDE direct."""
    rng = np.random.default_rng(7)
    return PosteriorSample(rng.normal(0.3, 0.5, 2_000), "delta")


@pytest.fixture
def golden():
    """
    Compare un contenu octet par octet à tests/golden/<name>.
    FBST_UPDATE_GOLDEN=1 réécrit le fichier au lieu de comparer.
    """
    def check(name: str, actual: bytes) -> None:
        path = GOLDEN_DIR / name
        if os.getenv("FBST_UPDATE_GOLDEN") == "1":
            path.write_bytes(actual)
            return
        if not path.exists():
            pytest.fail(f"fichier de référence manquant : {path.name} (FBST_UPDATE_GOLDEN=1 pour le créer)")
        assert actual == path.read_bytes(), f"sortie différente de {path.name}"
    return check
