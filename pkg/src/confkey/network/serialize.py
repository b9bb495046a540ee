"""Line-oriented text format for networks.

::

    nodes <n>
    grid <width> <height>
    link <u> <v> <p> <gamma>
    q <node> <value>
    terminal <node>

Values are written with 17 significant digits so a round trip is lossless.
The `grid` line is present only for grid topologies. A link may appear once.
"""

from __future__ import annotations

import logging
from pathlib import Path

import networkx as nx

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Network

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def dump_network(network: Network) -> str:
    lines = [f"nodes {network.n_nodes}"]
    if network.shape is not None:
        width, height = network.shape
        lines.append(f"grid {width} {height}")
    for u, v in network.sorted_links:
        lines.append(f"link {u} {v} {_fmt(network.p(u, v))} {_fmt(network.gamma(u, v))}")
    for node in range(network.n_nodes):
        lines.append(f"q {node} {_fmt(network.q(node))}")
    for t in network.terminals:
        lines.append(f"terminal {t}")
    return "\n".join(lines) + "\n"


def load_network(text: str) -> Network:
    g = nx.Graph()
    terminals: list[int] = []
    n_nodes: int | None = None
    shape: tuple[int, int] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        tag, args = fields[0], fields[1:]
        try:
            if tag == "nodes" and len(args) == 1 and n_nodes is None:
                n_nodes = int(args[0])
                g.add_nodes_from(range(n_nodes))
            elif n_nodes is None:
                raise InvalidArgumentError(f"line {lineno}: expected `nodes <n>` header first")
            elif tag == "grid" and len(args) == 2 and shape is None:
                width, height = int(args[0]), int(args[1])
                if width * height != n_nodes:
                    raise InvalidArgumentError(
                        f"line {lineno}: a {width}x{height} grid needs {width * height} nodes"
                    )
                shape = (width, height)
            elif tag == "link" and len(args) == 4:
                u, v = int(args[0]), int(args[1])
                if g.has_edge(u, v):
                    raise InvalidArgumentError(f"line {lineno}: link {u}-{v} appears twice")
                g.add_edge(u, v, p=float(args[2]), gamma=float(args[3]))
            elif tag == "q" and len(args) == 2:
                g.nodes[int(args[0])]["q"] = float(args[1])
            elif tag == "terminal" and len(args) == 1:
                terminals.append(int(args[0]))
            else:
                raise InvalidArgumentError(f"line {lineno}: cannot parse {line!r}")
        except (KeyError, ValueError) as exc:
            if isinstance(exc, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"line {lineno}: cannot parse {line!r}") from exc

    if n_nodes is None:
        raise InvalidArgumentError("empty network description")
    if g.number_of_nodes() != n_nodes:
        raise InvalidArgumentError(
            f"header declares {n_nodes} nodes but links reference {g.number_of_nodes()}"
        )
    return Network(graph=g, terminals=tuple(terminals), shape=shape)


def write_network(network: Network, path: Path) -> None:
    path.write_text(dump_network(network), encoding="utf-8")
    logger.info("Wrote network with %d nodes to %s", network.n_nodes, path)


def read_network(path: Path) -> Network:
    return load_network(path.read_text(encoding="utf-8"))
