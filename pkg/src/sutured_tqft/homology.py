"""Relative first homology of a halfedge surface, by tree-cotree cycles.

H_1(S, A) for a vertex set A is computed integrally once and reduced
mod 2 on demand.  A spanning forest of the 1-skeleton -- with all of A
merged into one root -- yields a fundamental cycle z_e for every cotree
edge e; these form an integral basis of the lattice of relative
1-cycles, and the coordinates of any relative cycle in that basis are
just its restriction to the cotree edges.  Smith normal form of the
face-boundary matrix in cycle coordinates then presents the quotient.
Surface pairs never produce torsion; we assert that all invariant
factors are 1, which also makes the mod-2 reduction of the same
integral basis a basis of the F2 homology.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import InternalConsistencyError, ValidationError
from .exterior import RING_F2, RING_Z
from .linalg import (Matrix, det_q, f2_invert, f2_rank, identity,
                     invert_unimodular, mat_vec, smith_normal_form, transpose)
from .surface import (Surface, chain_add, chain_boundary, face_boundary_chain)

__all__ = ["RelativeH1", "HomologyBasis", "induced_matrix"]

Chain = dict[int, int]


def _mod2(chain: Chain) -> Chain:
    return {e: 1 for e, c in chain.items() if c % 2}


class RelativeH1:
    """Integral H_1(S, A) with deterministic generic basis."""

    def __init__(self, surface: Surface, rel: Iterable[int] = ()):
        self.surface = surface
        self.rel = frozenset(rel)
        stray = self.rel - surface.vertices
        if stray:
            raise ValidationError(f"relative vertices {sorted(stray)} not in surface")

        # -1 is the merged root for all of A (vertex ids are nonnegative)
        def mv(v: int) -> int:
            return -1 if v in self.rel else v

        parent: dict[int, int] = {}

        def find(x: int) -> int:
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree_edges: list[int] = []
        self.cotree: list[int] = []
        for e in surface.edges():
            a, b = find(mv(surface.tail(e))), find(mv(surface.head[e]))
            if a == b:
                self.cotree.append(e)
            else:
                parent[a] = b
                tree_edges.append(e)

        # BFS parent pointers in the merged forest; up[v] = (edge, parent,
        # sign of the edge when traversed from v toward the parent)
        adj: dict[int, list[tuple[int, int, int]]] = {}
        merged_vertices = sorted({mv(v) for v in surface.vertices})
        for v in merged_vertices:
            adj[v] = []
        for e in tree_edges:
            u, v = mv(surface.tail(e)), mv(surface.head[e])
            adj[u].append((e, v, 1))
            adj[v].append((e, u, -1))
        self._up: dict[int, tuple[int, int, int] | None] = {}
        for root in merged_vertices:
            if root in self._up:
                continue
            self._up[root] = None
            queue = [root]
            while queue:
                x = queue.pop()
                for e, y, sgn in adj[x]:
                    if y not in self._up:
                        self._up[y] = (e, x, -sgn)
                        queue.append(y)

        self.cycles = [self._fundamental_cycle(e, mv) for e in self.cotree]

        k = len(self.cotree)
        nfaces = len(surface.faces)
        mat = [[face_boundary_chain(surface, j).get(self.cotree[i], 0)
                for j in range(nfaces)] for i in range(k)]
        sf = smith_normal_form(mat)
        if any(d != 1 for d in sf.diag):
            raise InternalConsistencyError(
                f"torsion in relative H1 (invariant factors {sf.diag})")
        rows_mask = [sum((mat[i][j] & 1) << j for j in range(nfaces)) for i in range(k)]
        if f2_rank(rows_mask) != sf.rank:
            raise InternalConsistencyError("mod-2 rank of boundary map dropped")
        self.snf = sf
        self.rank = k - sf.rank

    def _path_to_root(self, x: int) -> Chain:
        chain: Chain = {}
        while self._up[x] is not None:
            e, p, sgn = self._up[x]
            chain[e] = chain.get(e, 0) + sgn
            x = p
        return {e: c for e, c in chain.items() if c}

    def _fundamental_cycle(self, e: int, mv: Callable[[int], int]) -> Chain:
        z = {e: 1}
        z = chain_add(z, self._path_to_root(mv(self.surface.head[e])))
        z = chain_add(z, self._path_to_root(mv(self.surface.tail(e))), -1)
        return z

    def coordinates(self, chain: Chain, ring: str = RING_Z) -> list[int]:
        """Coordinates in the fundamental-cycle basis (= cotree restriction)."""
        if ring == RING_F2:
            chain = _mod2(chain)
        boundary = chain_boundary(self.surface, chain)
        if ring == RING_F2:
            boundary = {v: c % 2 for v, c in boundary.items() if c % 2}
        bad = [v for v in boundary if v not in self.rel]
        if bad:
            raise ValidationError(f"chain is not a relative cycle (boundary at {sorted(bad)})")
        w = [chain.get(e, 0) for e in self.cotree]
        residual = dict(chain)
        for wi, z in zip(w, self.cycles):
            if wi:
                residual = chain_add(residual, z, -wi)
        if ring == RING_F2:
            residual = _mod2(residual)
        if residual:
            raise InternalConsistencyError("relative cycle escaped the tree-cotree span")
        return w

    def reduce(self, chain: Chain, ring: str = RING_Z) -> list[int]:
        """Class of a relative cycle in the generic quotient basis."""
        w = self.coordinates(chain, ring)
        uw = mat_vec(self.snf.u, w)
        out = uw[self.snf.rank:]
        if ring == RING_F2:
            out = [x % 2 for x in out]
        return out

    def representative(self, i: int) -> Chain:
        """Cycle representing the i-th generic basis class."""
        col = self.snf.rank + i
        out: Chain = {}
        for j in range(len(self.cotree)):
            c = self.snf.u_inv[j][col]
            if c:
                out = chain_add(out, self.cycles[j], c)
        return out


class HomologyBasis:
    """Ordered basis of H_1(S, A; ring), generic or prescribed by cycles."""

    def __init__(self, h1: RelativeH1, ring: str, cycles: Sequence[Chain] | None = None):
        if ring not in (RING_Z, RING_F2):
            raise ValidationError(f"unknown ring {ring!r}")
        self.h1 = h1
        self.ring = ring
        self.rank = h1.rank
        self._c_inv: Matrix | None = None
        self._c_inv_f2: list[int] | None = None
        if cycles is None:
            self.cycles = [h1.representative(i) for i in range(self.rank)]
        else:
            if len(cycles) != self.rank:
                raise ValidationError(
                    f"{len(cycles)} prescribed cycles for rank {self.rank}")
            cols = [h1.reduce(c, ring) for c in cycles]
            cmat = transpose(cols)
            if ring == RING_Z:
                if abs(det_q(cmat)) != 1:
                    raise ValidationError("prescribed cycles are not an integral basis")
                self._c_inv = invert_unimodular(cmat)
            else:
                rows = [sum((cmat[i][j] & 1) << j for j in range(self.rank))
                        for i in range(self.rank)]
                inv = f2_invert(rows, self.rank)
                if inv is None:
                    raise ValidationError("prescribed cycles are not an F2 basis")
                self._c_inv_f2 = inv
            self.cycles = [dict(c) for c in cycles]

    @property
    def surface(self) -> Surface:
        return self.h1.surface

    def express(self, chain: Chain) -> list[int]:
        """Coefficients of a relative cycle's class in this basis."""
        g = self.h1.reduce(chain, self.ring)
        if self._c_inv is not None:
            return mat_vec(self._c_inv, g)
        if self._c_inv_f2 is not None:
            gmask = sum((g[j] & 1) << j for j in range(self.rank))
            return [(row & gmask).bit_count() % 2 for row in self._c_inv_f2]
        return g

    def vertex_functional(self, v: int) -> list[int]:
        """Coefficient of vertex v in the boundary of each basis cycle.

        This is a well-defined functional on H_1(S, A) for v in A, since
        boundaries of faces have zero boundary.
        """
        out = [chain_boundary(self.surface, c).get(v, 0) for c in self.cycles]
        if self.ring == RING_F2:
            out = [x % 2 for x in out]
        return out


def induced_matrix(src: "HomologyBasis", dst: "HomologyBasis",
                   push: Callable[[Chain], Chain] | None = None) -> Matrix:
    """Matrix of a chain-level map on homology: columns are dst-coordinates
    of the pushed src basis cycles."""
    cols = [dst.express(push(c) if push else c) for c in src.cycles]
    return transpose(cols)
