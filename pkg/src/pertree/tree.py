"""Lazily materialized bi-infinite periodic tree.

The tree is realized as a downward-growing ancestor spine plus
upward-growing subtrees.  Vertices live in a flat arena; ids are stable
and growth is monotone.  A hard vertex cap turns runaway growth into an
explicit :class:`~pertree.errors.CapacityExceeded` instead of unbounded
memory use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .degrees import PeriodicDegreeSequence, degree_at
from .errors import CapacityExceeded


@dataclass
class VertexRef:
    """Snapshot view of one arena vertex."""

    id: int
    height: int
    parent: int | None
    children: list[int] | None


class TreeArena:
    """Growable store of vertices for one periodic tree.

    The anchor (``root``) sits at height 0; its height residue within the
    period is a constructor parameter so experiments can root the tree at
    any degree class.  An arena is owned by a single simulation replica
    and never shared mutably.
    """

    def __init__(self, degree_seq: PeriodicDegreeSequence, root_residue: int = 0,
                 max_vertices: int = 1_000_000):
        self.degree_seq = degree_seq
        self.root_residue = root_residue % degree_seq.period
        self.max_vertices = max_vertices
        self.heights: list[int] = []
        self.parents: list[int | None] = []
        self.children: list[list[int] | None] = []
        self.root = self._new_vertex(0, None)
        self.spine_bottom = self.root

    def __len__(self) -> int:
        return len(self.heights)

    def vertex(self, vid: int) -> VertexRef:
        return VertexRef(vid, self.heights[vid], self.parents[vid], self.children[vid])

    def children_count(self, vid: int) -> int:
        """Children slots of a vertex (g of its height residue)."""
        return degree_at(self.degree_seq, self.root_residue + self.heights[vid])

    def graph_degree(self, vid: int) -> int:
        return self.children_count(vid) + 1

    def _new_vertex(self, height: int, parent: int | None) -> int:
        if len(self.heights) >= self.max_vertices:
            raise CapacityExceeded(f"vertex cap {self.max_vertices} reached")
        self.heights.append(height)
        self.parents.append(parent)
        self.children.append(None)
        return len(self.heights) - 1

    def materialize_children(self, vid: int) -> list[int]:
        """Ensure the children of ``vid`` exist; idempotent."""
        kids = self.children[vid]
        if kids is not None:
            return kids
        h = self.heights[vid]
        n_kids = self.children_count(vid)
        if len(self.heights) + n_kids > self.max_vertices:
            raise CapacityExceeded(f"vertex cap {self.max_vertices} reached")
        kids = [self._new_vertex(h + 1, vid) for _ in range(n_kids)]
        self.children[vid] = kids
        return kids

    def materialize_parent(self, vid: int) -> int:
        """Return the parent of ``vid``, extending the spine if needed."""
        parent = self.parents[vid]
        if parent is not None:
            return parent
        if vid != self.spine_bottom:
            raise ValueError(f"vertex {vid} has no parent and is not the spine bottom")
        h = self.heights[vid]
        n_kids = degree_at(self.degree_seq, self.root_residue + h - 1)
        if len(self.heights) + n_kids > self.max_vertices:
            raise CapacityExceeded(f"vertex cap {self.max_vertices} reached")
        parent = self._new_vertex(h - 1, None)
        # The spine child plus g-1 fresh siblings fill the child slots.
        siblings = [self._new_vertex(h, parent) for _ in range(n_kids - 1)]
        self.children[parent] = [vid] + siblings
        self.parents[vid] = parent
        self.spine_bottom = parent
        return parent

    def neighbor(self, vid: int, slot: int) -> int:
        """Incident edge endpoint by slot: 0 is the parent, 1..g the children."""
        if slot == 0:
            return self.materialize_parent(vid)
        return self.materialize_children(vid)[slot - 1]
