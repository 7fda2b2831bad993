"""Graph and group files: graph6, edge lists and 1-based group JSON."""

from __future__ import annotations

import json
from pathlib import Path
from typing import List, Optional, Union

import networkx as nx
from pydantic import BaseModel, Field, ValidationError, field_validator

from bidihedral_verify.utils.errors import DomainError
from bidihedral_verify.utils.graphs import SimpleGraph
from bidihedral_verify.utils.logger import log_debug
from bidihedral_verify.utils.paths import get_package_data_dir
from bidihedral_verify.utils.perm_group import PermutationGroup
from bidihedral_verify.utils.permutation import parse_cycles

GRAPH_FORMATS = ("graph6", "edgelist")


def to_graph6(graph: SimpleGraph) -> str:
    return nx.to_graph6_bytes(graph.to_networkx(), header=False).decode("ascii").strip()


def from_graph6(text: str) -> SimpleGraph:
    data = text.strip()
    if not data:
        raise DomainError("empty graph6 string")
    try:
        return SimpleGraph.from_networkx(nx.from_graph6_bytes(data.encode("ascii")))
    except (ValueError, nx.NetworkXError) as e:
        raise DomainError(f"invalid graph6 data: {e}") from e


def to_edgelist(graph: SimpleGraph) -> str:
    lines = [f"# n={graph.n}"]
    lines.extend(f"{u} {v}" for u, v in graph.sorted_edges())
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> SimpleGraph:
    """Parse ``# n=<count>`` followed by one ``u v`` pair per line (0-based)."""
    n: Optional[int] = None
    edges = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                n = int(body[2:])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"line {number}: expected two vertex numbers")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return SimpleGraph.from_edges(n, edges)


def format_graph(graph: SimpleGraph, fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return to_graph6(graph) + "\n"
    if fmt == "edgelist":
        return to_edgelist(graph)
    raise DomainError(f"unknown graph format {fmt!r}; use one of {GRAPH_FORMATS}")


def export_graph(graph: SimpleGraph, fmt: str, path: Union[str, Path]) -> None:
    target = Path(path)
    target.write_text(format_graph(graph, fmt), encoding="ascii")
    log_debug(f"wrote {graph.n}-vertex graph to {target} as {fmt}")


def load_graph(path: Union[str, Path]) -> SimpleGraph:
    """Read a graph file; edge lists start with '#', anything else is graph6."""
    text = Path(path).read_text(encoding="ascii")
    if text.lstrip().startswith("#") or Path(path).suffix in (".txt", ".edges", ".edgelist"):
        return from_edgelist(text)
    first = next((line for line in text.splitlines() if line.strip()), "")
    return from_graph6(first)


class GroupFile(BaseModel):
    """Permutation group file: generators as 1-based cycle strings."""

    degree: int = Field(gt=0)
    generators: List[str] = Field(min_length=1)
    name: Optional[str] = None
    order: Optional[int] = Field(default=None, gt=0)
    provenance: Optional[str] = None

    @field_validator("generators")
    @classmethod
    def _strip(cls, value: List[str]) -> List[str]:
        return [g.strip() for g in value]

    def to_group(self) -> PermutationGroup:
        gens = [parse_cycles(text, self.degree, one_based=True) for text in self.generators]
        return PermutationGroup(gens, known_order=self.order, name=self.name)


def parse_group_file(text: str) -> GroupFile:
    try:
        return GroupFile.model_validate_json(text)
    except ValidationError as e:
        raise DomainError(f"invalid group file: {e}") from e


def load_group(path: Union[str, Path]) -> PermutationGroup:
    return parse_group_file(Path(path).read_text(encoding="utf-8")).to_group()


def load_packaged_group(name: str) -> PermutationGroup:
    """Group shipped in the package data directory as ``<name>.json``."""
    path = get_package_data_dir() / f"{name}.json"
    if not path.exists():
        raise DomainError(f"no packaged group named {name!r}")
    return load_group(path)


def group_to_file(group: PermutationGroup, name: Optional[str] = None, provenance: Optional[str] = None) -> GroupFile:
    return GroupFile(
        degree=group.degree,
        generators=[g.to_cycle_string(one_based=True) for g in group.generators],
        name=name or group.name,
        order=group.order(),
        provenance=provenance,
    )


def dump_group(group: PermutationGroup, path: Union[str, Path], **kwargs) -> None:
    Path(path).write_text(
        json.dumps(group_to_file(group, **kwargs).model_dump(exclude_none=True), indent=2) + "\n",
        encoding="utf-8",
    )
