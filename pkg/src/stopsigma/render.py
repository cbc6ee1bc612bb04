"""Draw a filtration as a stochastic tree, optionally labelled by the stopping process.

Nodes are the blocks of ``A_t`` for each time ``t`` on the axis; an edge
joins a block to each block it splits into at the next time.  With a
stopping time, each node carries the value of the stopping process there
(1 while running, 0 once stopped).  The node where a path first hits 0 is
boxed, and nodes after it are drawn dashed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAStoppingTime
from .events import Event
from .filtration import INF, Filtration, StoppingTime, format_time, is_stopping_time

__all__ = ["TreeNode", "tree_nodes", "render_ascii", "render_dot"]

RUNNING, STOPPED, AFTER, PLAIN = "running", "stopped", "after", "plain"

_ASCII_CELL = {RUNNING: "({})", STOPPED: "[{}]", AFTER: ":{}:", PLAIN: "(*)"}


@dataclass(frozen=True)
class TreeNode:
    level: int
    index: int
    block: Event
    parent: int | None
    value: int | None
    status: str

    @property
    def ident(self) -> str:
        return f"t{self.level}_{self.index}"


def tree_nodes(f: Filtration, tau: StoppingTime | None = None) -> list[list[TreeNode]]:
    """Nodes per time level, in canonical block order.

    Raises :class:`NotAStoppingTime` if ``tau`` is given but the stopping
    process would not be constant on some block.
    """
    if tau is not None:
        check = is_stopping_time(tau, f)
        if not check:
            raise NotAStoppingTime(check)
    levels: list[list[TreeNode]] = []
    prev = None
    for k, (t, part) in enumerate(f.items()):
        stopped = tau._le_mask(t) if tau is not None else 0
        row = []
        for j, b in enumerate(part.masks):
            parent = None
            if prev is not None:
                low = (b & -b).bit_length() - 1
                parent = prev.block_index(low)
            if tau is None:
                value, status = None, PLAIN
            else:
                value = 0 if b & stopped else 1
                if value == 1:
                    status = RUNNING
                elif parent is None or levels[-1][parent].value == 1:
                    status = STOPPED
                else:
                    status = AFTER
            row.append(TreeNode(k, j, Event(f.space, b), parent, value, status))
        levels.append(row)
        prev = part
    return levels


def render_ascii(f: Filtration, tau: StoppingTime | None = None) -> str:
    """One row per outcome, one column per time, tau and outcome label at the right.

    A node is printed on the row of its first outcome; `` | `` marks rows
    that belong to a node printed above.  ``--`` is a solid edge, ``..`` an
    edge into a post-stop node.
    """
    levels = tree_nodes(f, tau)
    n = len(f.space)
    width = max(3, *(len(format_time(t)) for t in f.axis))
    gap = 2

    def cell(text: str) -> str:
        return text.center(width)

    header = (" " * gap).join(cell(format_time(t)) for t in f.axis)
    tail = f"{'tau':>5}  omega" if tau is not None else "  omega"
    lines = [header + "  " + tail]

    for i in range(n):
        parts = []
        for k, row in enumerate(levels):
            node = row[f.levels[k].block_index(i)]
            first = (node.block.mask & -node.block.mask).bit_length() - 1 == i
            if first:
                shown = _ASCII_CELL[node.status].format(node.value) if node.value is not None else _ASCII_CELL[PLAIN]
                conn = ".." if node.status == AFTER else "--"
            else:
                shown = " | "
                conn = " " * gap
            if k:
                parts.append(conn)
            parts.append(cell(shown))
        line = "".join(parts)
        if tau is not None:
            v = tau.values[i]
            line += f"  {'inf' if v == INF else format_time(v):>5}"
        line += f"  {f.space.label(i)}"
        lines.append(line.rstrip())
    if tau is not None:
        lines.append("")
        lines.append("(1) running   [0] stopped here   :0: after stopping")
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(f: Filtration, tau: StoppingTime | None = None, name: str = "filtration") -> str:
    """Plain Graphviz ``digraph`` text of the tree."""
    levels = tree_nodes(f, tau)
    out = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for k, row in enumerate(levels):
        t = format_time(f.axis[k])
        for node in row:
            members = " ".join(node.block.labels)
            if node.value is None:
                label = members
                attrs = [f"label={_quote(label)}", "shape=ellipse"]
            else:
                attrs = [f"label={_quote(str(node.value))}"]
                if node.status == STOPPED:
                    attrs.append("shape=box")
                elif node.status == AFTER:
                    attrs.append("style=dashed")
            attrs.append(f"tooltip={_quote(f't={t}: {{{members}}}')}")
            out.append(f"  {node.ident} [{', '.join(attrs)}];")
    for k, row in enumerate(levels[1:], start=1):
        for node in row:
            parent = levels[k - 1][node.parent]
            style = " [style=dashed]" if node.status == AFTER else ""
            out.append(f"  {parent.ident} -> {node.ident}{style};")
    out.append("}")
    return "\n".join(out) + "\n"
