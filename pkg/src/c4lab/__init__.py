"""Toolkit for induced-C4 and chordality removal: exact kernels, M2-free
pair structure, homogeneous partitions, the conditional-regularity
decomposition, anti-matching edits, farness oracles and cycle blow-ups."""

from .graph import EditSet, Graph, apply_edits, density, edge_count_within
from .io import format_graph, parse_graph, read_graph, write_graph
from .kernels import count_induced_c4, count_induced_cl, find_induced_cycle_geq4, is_chordal, max_clique
from .decomposition import conditional_regularity
from .indset import indset_edit
from .farness import farness_certificate
from .lowerbound import blowup_cycle
from .pipeline import c4_pipeline
from .chordal import chordal_pipeline

__version__ = "0.1.0"

__all__ = [
    "EditSet",
    "Graph",
    "apply_edits",
    "blowup_cycle",
    "c4_pipeline",
    "chordal_pipeline",
    "conditional_regularity",
    "count_induced_c4",
    "count_induced_cl",
    "density",
    "edge_count_within",
    "farness_certificate",
    "find_induced_cycle_geq4",
    "format_graph",
    "indset_edit",
    "is_chordal",
    "max_clique",
    "parse_graph",
    "read_graph",
    "write_graph",
]
