"""Sandpile torsors on ribbon graphs: rotor routing, Bernardi, and genus recovery."""

from .graph import Multigraph, RibbonGraph, genus, trace_faces, v_components
from .recovery import TorsorTableSet, recover_genus, recover_rotation
from .sandpile import Divisor, canonical_form, enumerate_group, is_principal
from .torsor import BERNARDI, ROTOR, act, bernardi_act, rotor_route, torsor_table, verify_action
from .trees import enumerate_spanning_trees

__all__ = [
    "Multigraph",
    "RibbonGraph",
    "Divisor",
    "TorsorTableSet",
    "ROTOR",
    "BERNARDI",
    "genus",
    "trace_faces",
    "v_components",
    "canonical_form",
    "is_principal",
    "enumerate_group",
    "enumerate_spanning_trees",
    "rotor_route",
    "bernardi_act",
    "act",
    "torsor_table",
    "verify_action",
    "recover_genus",
    "recover_rotation",
]
