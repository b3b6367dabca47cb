"""Hierarchical square-tiling complex with pasting and a nil rewriting system."""

from .core import (
    Complex,
    PastingSite,
    build,
    seed_complex,
)
from .coding import (
    Chain,
    Information,
    InapplicableArgument,
    VertexCode,
    alphabet_sets,
    build_chain,
    chain_of,
    classify_edge,
    classify_vertex,
    code_census,
    code_digest,
    code_table_json,
    edge_letter,
    env_object_of,
    environment_of,
    harvest_node_tables,
    information_of,
    level_class_of,
    node_fn,
    observed_tile_environments,
    pasting_code_of,
    raw_level_of,
    tile_environment,
    vertex_code,
    vertex_codes,
)

__all__ = [
    "Complex",
    "PastingSite",
    "build",
    "seed_complex",
    "Chain",
    "Information",
    "InapplicableArgument",
    "VertexCode",
    "alphabet_sets",
    "build_chain",
    "chain_of",
    "classify_edge",
    "classify_vertex",
    "code_census",
    "code_digest",
    "code_table_json",
    "edge_letter",
    "env_object_of",
    "environment_of",
    "harvest_node_tables",
    "information_of",
    "level_class_of",
    "node_fn",
    "observed_tile_environments",
    "pasting_code_of",
    "raw_level_of",
    "tile_environment",
    "vertex_code",
    "vertex_codes",
]

__version__ = "0.1.0"
