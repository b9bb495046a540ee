"""One-line text form of a distribution structure, used for golden comparisons."""

from __future__ import annotations

from collections.abc import Iterable

from confkey.routing.structures import Star, SteinerTree


def dump_structure(structure: Star | SteinerTree) -> str:
    """``star center=<id> arms=<path>;...`` or ``tree edges=<u-v,...> fusion=<ids>``."""
    if isinstance(structure, Star):
        arms = ";".join(arm.label() for arm in structure.arms)
        return f"star center={structure.center} arms={arms}"
    edges = ",".join(f"{u}-{v}" for u, v in sorted(structure.edges))
    fusion = ",".join(str(n) for n in sorted(structure.fusion_nodes))
    return f"tree edges={edges} fusion={fusion}"


def dump_structures(structures: Iterable[Star | SteinerTree]) -> str:
    return "".join(dump_structure(s) + "\n" for s in structures)
