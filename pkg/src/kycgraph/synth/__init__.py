"""Seeded synthetic KYC graph generator with planted fraud rings."""

from .config import GenConfig
from .generator import generate, derive_shared_identifier_edges, plant_ring
from .manifest import GroundTruthManifest

__all__ = ["GenConfig", "generate", "derive_shared_identifier_edges",
           "plant_ring", "GroundTruthManifest"]
