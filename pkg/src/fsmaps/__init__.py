"""Ordinary and fully simple maps: spectral curves, topological recursion, extraction and a census."""
from .config import RunConfig
from .curve import Potential, build_curves, solve_disc_data
from .extract import extract_fsmap_counts, extract_map_counts
from .tr import TREngine

__all__ = ["Potential", "RunConfig", "TREngine", "build_curves", "extract_fsmap_counts", "extract_map_counts",
           "solve_disc_data"]
