"""Shared fixtures: the bundled two-tile example and small generated specs."""

from __future__ import annotations

import json
from importlib import resources

import pytest

from isoexplore import generate_spec, load_mapping_doc, parse_spec


def bundled_text(kind: str, name: str) -> str:
    return (
        resources.files("isoexplore").joinpath(f"data/{kind}/{name}").read_text()
    )


@pytest.fixture(scope="session")
def two_tile_spec():
    return parse_spec(bundled_text("specs", "join_two_tile.json"))


@pytest.fixture(scope="session")
def two_tile_shared(two_tile_spec):
    doc = json.loads(bundled_text("mappings", "join_two_tile_shared.json"))
    return load_mapping_doc(two_tile_spec, doc)


@pytest.fixture(scope="session")
def small_mesh_spec():
    """Simulatable 2x2 problem at the networking profile size."""
    return generate_spec("networking", mesh=(2, 2), seed=3)
