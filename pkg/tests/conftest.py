"""Shared fixtures for the workbench test suite."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from orthostab import Gauge, MapSpec, OrthoRelation, build_map

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"


@pytest.fixture
def beta1_gauge() -> Gauge:
    return Gauge(kind="beta-sum", beta=1.0)


@pytest.fixture
def beta05_gauge() -> Gauge:
    return Gauge(kind="beta-sum", beta=0.5)


@pytest.fixture
def euclid_r2() -> OrthoRelation:
    return OrthoRelation(kind="euclidean", dimension=2)


@pytest.fixture
def exact_linear_noisy(beta1_gauge):
    """Exact-rational linear map on R^2 with odd hash noise of amplitude 1/1000."""
    spec = MapSpec(
        base="linear",
        matrix=((Fraction(2), Fraction(1)), (Fraction(0), Fraction(1))),
        noise_amplitude=Fraction(1, 1000),
        noise_parity="odd",
        seed=71,
        backend="exact-rational",
    )
    return build_map(spec, beta1_gauge)


@pytest.fixture
def exact_quadratic_noisy(beta1_gauge):
    """Exact-rational quadratic form on R^2 with even hash noise."""
    spec = MapSpec(
        base="quadratic-form",
        matrix=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(2))),
        noise_amplitude=Fraction(1, 1000),
        noise_parity="even",
        seed=72,
        backend="exact-rational",
    )
    return build_map(spec, beta1_gauge)


@pytest.fixture
def float_linear_noisy(beta1_gauge):
    spec = MapSpec(
        base="linear",
        matrix=((2.0, 1.0), (0.5, 1.0)),
        noise_amplitude=1e-3,
        noise_parity="odd",
        seed=73,
        backend="float64",
    )
    return build_map(spec, beta1_gauge)


def exact_points(count: int, seed: int, dim: int = 2) -> list[tuple]:
    """Seeded dyadic-rational points, denominators dividing 256."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        num = rng.integers(-2048, 2049, size=dim)
        out.append(tuple(Fraction(int(n), 256) for n in num))
    return out


def float_points(count: int, seed: int, dim: int = 2) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [rng.normal(size=dim) for _ in range(count)]


def write_config(tmp_path: Path, doc: dict, name: str = "config.json") -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return str(path)


def small_additive_doc(**stability_overrides) -> dict:
    """A fast additive float experiment document for CLI and runner tests."""
    st = {
        "equation": "jensen-additive",
        "beta": 1.0,
        "sample_count": 40,
        "pair_count": 40,
        "n_max": 10,
        "seed": 505,
        "conclusion_pairs": 20,
        "uniqueness_points": 10,
    }
    st.update(stability_overrides)
    return {
        "space": {"dimension": 2},
        "gauge": {"kind": "beta-sum", "beta": 1.0},
        "relation": {"kind": "euclidean", "dimension": 2},
        "map": {
            "base": "linear",
            "matrix": [[2.0, 1.0], [0.5, 1.0]],
            "noise_amplitude": 1e-3,
            "noise_parity": "odd",
            "seed": 909,
        },
        "stability": st,
    }


def small_quadratic_doc(**stability_overrides) -> dict:
    st = {
        "equation": "jensen-quadratic",
        "beta": 1.0,
        "sample_count": 40,
        "pair_count": 40,
        "n_max": 10,
        "seed": 606,
        "conclusion_pairs": 20,
        "uniqueness_points": 10,
    }
    st.update(stability_overrides)
    return {
        "space": {"dimension": 2},
        "gauge": {"kind": "beta-sum", "beta": 1.0},
        "relation": {"kind": "euclidean", "dimension": 2},
        "map": {
            "base": "quadratic-form",
            "matrix": [[1.0, 0.25], [0.25, 2.0]],
            "noise_amplitude": 1e-3,
            "noise_parity": "even",
            "seed": 910,
        },
        "stability": st,
    }
