"""Frozen example geometries, stored as JSON manifests next to this file.

Each manifest describes either a polysquare surface or a polycube solid:
cell list, walls, gluing overrides, optional per-cell diagram labels and a
free-form note.  Loaders return built objects; the raw dict and a stable
hash are available for report provenance.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources

from ..manifold import Manifold, PolysquareSurface, build_manifold, build_surface

_ROOT = resources.files(__package__)


def names() -> list[str]:
    found = [p.name[:-5] for p in _ROOT.iterdir() if p.name.endswith(".json")]
    return sorted(found)


def manifest(name: str) -> dict:
    path = _ROOT / f"{name}.json"
    try:
        raw = path.read_text()
    except FileNotFoundError:
        raise KeyError(f"no gallery entry named {name!r}; "
                       f"available: {', '.join(names())}") from None
    return json.loads(raw)


def manifest_hash(name: str) -> str:
    doc = json.dumps(manifest(name), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(doc.encode()).hexdigest()


def surface_names() -> list[str]:
    return [n for n in names() if manifest(n)["kind"] == "surface"]


def load_surface(name: str) -> PolysquareSurface:
    doc = manifest(name)
    if doc["kind"] != "surface":
        raise ValueError(f"{name} is a {doc['kind']}, not a surface")
    return build_surface(doc["squares"], walls=doc["walls"],
                         gluing_overrides=doc["gluing_overrides"],
                         name=doc["name"],
                         diagram_labels=doc["diagram_labels"],
                         notes=doc["notes"])


def load_manifold(name: str) -> Manifold:
    """Build the 3-manifold: surfaces are crossed with a circle."""
    doc = manifest(name)
    if doc["kind"] == "surface":
        return load_surface(name).product_with_circle()
    return build_manifold(doc["cubes"], walls=doc["walls"],
                          gluing_overrides=doc["gluing_overrides"],
                          name=doc["name"],
                          diagram_labels=doc["diagram_labels"],
                          notes=doc["notes"])


def all_manifolds() -> list[Manifold]:
    return [load_manifold(n) for n in names()]
