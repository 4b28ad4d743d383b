"""DOT export of a decomposition: one color per part, roots double-circled."""

from __future__ import annotations

from .decompose import Decomposition
from .graph import GraphWithRoots
from .io import id_text

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a",
)


def _quote(x) -> str:
    s = str(id_text(x))
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(g: GraphWithRoots, dec: Decomposition, name: str = "decomposition") -> str:
    """An undirected DOT graph; the palette cycles every 12 nonempty parts."""
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle];"]
    for v in g.vertices:
        rs = g.roots_at(v)
        if rs:
            label = f"{id_text(v)}\n[{', '.join(str(id_text(r)) for r in rs)}]"
            lines.append(f"  {_quote(v)} [shape=doublecircle, label={_quote(label)}];")
        else:
            lines.append(f"  {_quote(v)};")
    color = 0
    for rid, T in dec.parts:
        if not T:
            continue
        c = PALETTE[color % len(PALETTE)]
        color += 1
        for e in T:
            u, v = g.edges[e]
            lines.append(f"  {_quote(u)} -- {_quote(v)} [color={_quote(c)}, "
                         f"label={_quote(f'{id_text(e)}:{id_text(rid)}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
