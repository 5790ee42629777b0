"""Solver and benchmark toolkit for 3D nuclear waste container packing.

Packs heterogeneous radioactive boxes into a disposal pool to maximize
volumetric utilization while minimizing the aggregate pool-top dose rate:
block building over the box inventory, overlapping maximal free spaces,
and a restarting beam search under a deterministic time budget.
"""

from .blocks import Block, BlockGenConfig, combine, enumerate_boxes, \
    generate_blocks, generate_simple_blocks
from .instances import FamilySpec, SolutionRecord, audit_solution, \
    family_spec, generate_family, generate_instance, read_instance, \
    read_solution, write_instance, write_solution
from .kernels import BACKEND
from .model import BoxType, Instance, Layout, Placement, Pool, \
    dose_rate_single, layout_metrics, placement_dose, validate_layout
from .scoring import DimInventory, ScoreParams, max_dim_combination, \
    score_block, select_blocks, v_loss
from .search import BlockSet, Engine, SearchConfig, SearchResult, \
    beam_search, incumbent_compare, prepare_blocks
from .spaces import Space, fits, residual_spaces, select_space, \
    subtract_block, update_spaces

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Block", "BlockGenConfig", "BlockSet", "BoxType",
    "DimInventory", "Engine", "FamilySpec", "Instance", "Layout",
    "Placement", "Pool", "ScoreParams", "SearchConfig", "SearchResult",
    "SolutionRecord", "Space", "audit_solution", "beam_search", "combine",
    "dose_rate_single", "enumerate_boxes", "family_spec", "fits",
    "generate_blocks", "generate_family", "generate_instance",
    "generate_simple_blocks", "incumbent_compare", "layout_metrics",
    "max_dim_combination", "placement_dose", "prepare_blocks",
    "read_instance", "read_solution", "residual_spaces", "score_block",
    "select_blocks", "select_space", "subtract_block", "update_spaces",
    "v_loss", "validate_layout", "write_instance", "write_solution",
]
