"""Executable reduction chain with exact counters:

    Positive 1-in-3SAT
      -> Tripartite Edge-Disjoint Triangle Partition
      -> Numerical 3DM with Distinct Integers
      -> 3-Partition with Distinct Integers

Every step carries a certificate that translates solutions in both
directions, and every problem kind has a brute-force solution enumerator so
parsimony (count preservation + bijection) is checkable on desk-scale
instances.  All arithmetic is exact big-integer arithmetic; the q^6 terms in
step 3 overflow any fixed width.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .model import ValidationError


class TooLarge(Exception):
    pass


class GridTooSmall(Exception):
    pass


class UnbalancedEdgeTypes(Exception):
    pass


class ParsimonyMismatch(Exception):
    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


# -- problem kinds -------------------------------------------------------------


@dataclass(frozen=True)
class PositiveCnf:
    """3CNF with only positive literals under exactly-one-true semantics."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3 or len(set(clause)) != 3:
                raise ValidationError(f"clause {clause} must have 3 distinct variables")
            if any(not (0 <= v < self.num_vars) for v in clause):
                raise ValidationError(f"clause {clause} out of range")

    def solutions(self, limit_vars: int = 22) -> Iterator[frozenset[int]]:
        if self.num_vars > limit_vars:
            raise TooLarge(f"{self.num_vars} variables")
        for bits in itertools.product((False, True), repeat=self.num_vars):
            if all(sum(bits[v] for v in cl) == 1 for cl in self.clauses):
                yield frozenset(v for v in range(self.num_vars) if bits[v])


@dataclass(frozen=True)
class TripartiteGraph:
    parts: tuple[tuple, tuple, tuple]  # U, V, W vertex labels
    edges: frozenset[frozenset]

    def __post_init__(self):
        cls = self.part_of()
        for edge in self.edges:
            a, b = tuple(edge)
            if cls[a] == cls[b]:
                raise ValidationError(f"edge {edge} inside part {cls[a]}")

    def part_of(self) -> dict:
        out = {}
        for i, part in enumerate(self.parts):
            for v in part:
                out[v] = i
        return out

    def triangles_on(self, edge: frozenset, alive: frozenset) -> list[frozenset]:
        a, b = tuple(edge)
        out = []
        adjacency = set()
        for e in alive:
            if a in e:
                adjacency.add(next(iter(e - {a})))
        for c in adjacency:
            if frozenset((b, c)) in alive and frozenset((a, c)) in alive:
                out.append(frozenset((a, b, c)))
        return out

    def solutions(self, limit_edges: int = 400) -> Iterator[frozenset]:
        """Exact edge-disjoint triangle partitions by backtracking.

        Always branches on the uncovered edge with the fewest available
        triangles, which makes the near-forced gadget graphs fast.
        """
        if len(self.edges) > limit_edges:
            raise TooLarge(f"{len(self.edges)} edges")
        if len(self.edges) % 3:
            return

        def rec(alive: frozenset, chosen: tuple):
            if not alive:
                yield frozenset(chosen)
                return
            best_edge, best_tris = None, None
            for edge in alive:
                tris = self.triangles_on(edge, alive)
                if best_tris is None or len(tris) < len(best_tris):
                    best_edge, best_tris = edge, tris
                    if not tris:
                        break
                    if len(tris) == 1:
                        break
            if not best_tris:
                return
            for tri in best_tris:
                a, b, c = tuple(tri)
                used = frozenset((frozenset((a, b)), frozenset((b, c)), frozenset((a, c))))
                yield from rec(alive - used, chosen + (tri,))

        yield from rec(self.edges, ())


@dataclass(frozen=True)
class N3DMInstance:
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        n = len(self.a)
        if len(self.b) != n or len(self.c) != n:
            raise ValidationError("A, B, C must have equal sizes")
        allv = self.a + self.b + self.c
        if len(set(allv)) != 3 * n:
            raise ValidationError("all 3n integers must be distinct")
        if any(v <= 0 for v in allv):
            raise ValidationError("integers must be positive")
        if n and sum(allv) % n:
            raise ValidationError("target sum t is not integral")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def t(self) -> int:
        return sum(self.a + self.b + self.c) // self.n if self.n else 0

    def solutions(self, limit_n: int = 6) -> Iterator[frozenset[tuple[int, int, int]]]:
        if self.n > limit_n:
            raise TooLarge(f"n={self.n}")
        t = self.t
        b_list, c_list = list(self.b), list(self.c)

        def rec(i: int, used_b: int, used_c: int, acc: tuple):
            if i == self.n:
                yield frozenset(acc)
                return
            for j, bv in enumerate(b_list):
                if used_b >> j & 1:
                    continue
                for k, cv in enumerate(c_list):
                    if used_c >> k & 1:
                        continue
                    if self.a[i] + bv + cv == t:
                        yield from rec(
                            i + 1, used_b | 1 << j, used_c | 1 << k,
                            acc + ((self.a[i], bv, cv),),
                        )

        yield from rec(0, 0, 0, ())


@dataclass(frozen=True)
class ThreePartitionInstance:
    a: tuple[int, ...]
    relaxed: bool = False

    def __post_init__(self):
        n = len(self.a)
        if n % 3:
            raise ValidationError("n must be divisible by 3")
        if len(set(self.a)) != n:
            raise ValidationError("integers must be distinct")
        if any(v <= 0 for v in self.a):
            raise ValidationError("integers must be positive")
        if n and sum(self.a) * 3 % n:
            raise ValidationError("target sum t is not integral")
        if not self.relaxed and n:
            t = self.t
            for v in self.a:
                if not (t / 4 < v < t / 2):
                    raise ValidationError(
                        f"{v} violates t/4 < a_i < t/2 (t={t}); pass relaxed=True for micro tests"
                    )

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def t(self) -> int:
        return sum(self.a) * 3 // self.n if self.n else 0

    def solutions(self, limit_n: int = 12) -> Iterator[frozenset[frozenset[int]]]:
        """Partitions into unordered groups of three with equal sums."""
        if self.n > limit_n:
            raise TooLarge(f"n={self.n}")
        t = self.t

        def rec(remaining: tuple[int, ...], acc: tuple):
            if not remaining:
                yield frozenset(acc)
                return
            first, rest = remaining[0], remaining[1:]
            for x, y in itertools.combinations(rest, 2):
                if first + x + y == t:
                    left = list(rest)
                    left.remove(x)
                    left.remove(y)
                    yield from rec(tuple(left), acc + (frozenset((first, x, y)),))

        yield from rec(tuple(sorted(self.a)), ())


def count_solutions_of(problem) -> int:
    """Exact solution count by exhaustive enumeration (desk-scale guard)."""
    return sum(1 for _ in problem.solutions())


# -- step 2: Positive 1-in-3SAT -> triangle partition ---------------------------

# Torus grid size must be a multiple of 3 for the tripartite coloring and at
# least 6 so that the diagonal direction has no wrap-around 3-cycles (those
# would admit partitions beyond the intended two).
MIN_GRID = 6

_EDGE_DIRS = ((1, 0), (0, 1), (1, 1))


def _up_triangle(var, i, j, k):
    return ((var, i % k, j % k), (var, (i + 1) % k, j % k), (var, (i + 1) % k, (j + 1) % k))


def _down_triangle(var, i, j, k):
    return ((var, i % k, j % k), (var, i % k, (j + 1) % k), (var, (i + 1) % k, (j + 1) % k))


@dataclass
class FormulaCertificate:
    cnf: PositiveCnf
    grid: int
    merged: dict  # raw torus vertex -> unified label
    clause_cells: dict  # clause index -> (i, j)

    def vertex(self, var: int, i: int, j: int):
        raw = (var, i % self.grid, j % self.grid)
        return self.merged.get(raw, raw)

    def _skipped_cells(self, var: int, up: bool) -> set[tuple[int, int]]:
        # the removed positive triangle, and in the false state also its three
        # flanking negative triangles (each lost one edge to the removal)
        out = set()
        for cl_idx, clause in enumerate(self.cnf.clauses):
            if var not in clause:
                continue
            i, j = self.clause_cells[cl_idx]
            if up:
                out.add((i % self.grid, j % self.grid))
            else:
                out |= {
                    (i % self.grid, (j - 1) % self.grid),
                    (i % self.grid, j % self.grid),
                    ((i + 1) % self.grid, j % self.grid),
                }
        return out

    def _variable_triangles(self, var: int, up: bool) -> set[frozenset]:
        k = self.grid
        skipped = self._skipped_cells(var, up)
        out = set()
        for i in range(k):
            for j in range(k):
                if (i, j) in skipped:
                    continue
                tri = _up_triangle(var, i, j, k) if up else _down_triangle(var, i, j, k)
                out.add(frozenset(self.vertex(*v) for v in tri))
        return out

    def _probe_triangle(self, var: int) -> frozenset:
        # deterministic up-triangle whose presence flags the true state: the
        # first cell whose corners were not unified into a clause gadget
        k = self.grid
        for i in range(k):
            for j in range(k):
                tri = _up_triangle(var, i, j, k)
                if all(v not in self.merged for v in tri) and (i, j) not in self._skipped_cells(var, True):
                    return frozenset(tri)
        raise GridTooSmall("no clause-free cell left in variable gadget")

    def forward(self, assignment: frozenset[int]) -> frozenset:
        tris = set()
        for var in range(self.cnf.num_vars):
            tris |= self._variable_triangles(var, up=var in assignment)
        return frozenset(tris)

    def backward(self, partition: frozenset) -> frozenset[int]:
        true_vars = set()
        for var in range(self.cnf.num_vars):
            if self._probe_triangle(var) in partition:
                true_vars.add(var)
        return frozenset(true_vars)


def formula_to_triangles(
    cnf: PositiveCnf, grid_size: int | None = None
) -> tuple[TripartiteGraph, FormulaCertificate]:
    """One torus gadget per variable; per clause, one positive triangle is
    removed and its vertices (plus those of the three flanking negative
    triangles) are unified across the clause's three variable gadgets."""
    k = grid_size if grid_size is not None else max(MIN_GRID, 3 * ((4 * len(cnf.clauses) + 5) // 3))
    if k % 3 or k < MIN_GRID:
        raise GridTooSmall(f"grid {k} must be a multiple of 3 and >= {MIN_GRID}")
    # clause gadgets sit on the torus diagonal, 4 cells apart; vertex
    # neighborhoods span 3 cells, so gadgets stay disjoint
    if len(cnf.clauses) and 4 * len(cnf.clauses) > k - 2:
        raise GridTooSmall(f"grid {k} too small for {len(cnf.clauses)} clauses")

    clause_cells = {idx: (4 * idx, 4 * idx) for idx in range(len(cnf.clauses))}
    merged: dict = {}
    for idx, clause in enumerate(cnf.clauses):
        i, j = clause_cells[idx]
        spots = [
            (i, j), (i + 1, j), (i + 1, j + 1),        # removed triangle corners
            (i, j - 1), (i, j + 1), (i + 2, j + 1),    # flanking down-triangle tips
        ]
        for si, sj in spots:
            label = ("clause", idx, (si - i) % k, (sj - j) % k)
            for var in clause:
                merged[(var, si % k, sj % k)] = label

    cert = FormulaCertificate(cnf, k, merged, clause_cells)

    edges: set[frozenset] = set()
    removed_edges: set[frozenset] = set()
    for idx, clause in enumerate(cnf.clauses):
        i, j = clause_cells[idx]
        tri = [(i, j), (i + 1, j), (i + 1, j + 1)]
        for var in clause:
            labels = [cert.vertex(var, *cell) for cell in tri]
            for x, y in itertools.combinations(labels, 2):
                removed_edges.add(frozenset((x, y)))
    for var in range(cnf.num_vars):
        for i in range(k):
            for j in range(k):
                for dx, dy in _EDGE_DIRS:
                    e = frozenset(
                        (cert.vertex(var, i, j), cert.vertex(var, i + dx, j + dy))
                    )
                    if len(e) == 2 and e not in removed_edges:
                        edges.add(e)

    part_lists: tuple[list, list, list] = ([], [], [])
    seen = set()
    for var in range(cnf.num_vars):
        for i in range(k):
            for j in range(k):
                label = cert.vertex(var, i, j)
                if label not in seen:
                    seen.add(label)
                    part_lists[(i + j) % 3].append(label)
    graph = TripartiteGraph(tuple(tuple(p) for p in part_lists), frozenset(edges))
    return graph, cert


# -- step 3: triangle partition -> Numerical 3DM --------------------------------


@dataclass
class TriangleCertificate:
    graph: TripartiteGraph
    q: int
    edge_to_int: dict
    int_to_edge: dict = field(init=False)

    def __post_init__(self):
        self.int_to_edge = {v: e for e, v in self.edge_to_int.items()}

    def forward(self, partition: frozenset) -> frozenset[tuple[int, int, int]]:
        part = self.graph.part_of()
        out = []
        for tri in partition:
            verts = sorted(tri, key=lambda v: part[v])
            u, v, w = verts
            a = self.edge_to_int[frozenset((u, w))]
            b = self.edge_to_int[frozenset((v, w))]
            c = self.edge_to_int[frozenset((u, v))]
            out.append((a, b, c))
        return frozenset(out)

    def backward(self, matching: frozenset[tuple[int, int, int]]) -> frozenset:
        out = []
        for a, b, c in matching:
            verts = set()
            for value in (a, b, c):
                verts |= self.int_to_edge[value]
            out.append(frozenset(verts))
        return frozenset(out)


def triangles_to_n3dm(graph: TripartiteGraph) -> tuple[N3DMInstance, TriangleCertificate]:
    part = graph.part_of()
    U, V, W = graph.parts
    rank = {}
    for plist in graph.parts:
        for r, vert in enumerate(plist, start=1):
            rank[vert] = r
    by_type: dict[tuple[int, int], list] = {(0, 2): [], (1, 2): [], (0, 1): []}
    for edge in graph.edges:
        x, y = sorted(edge, key=lambda v: part[v])
        by_type[(part[x], part[y])].append(edge)
    n_uw, n_vw, n_uv = (len(by_type[k]) for k in ((0, 2), (1, 2), (0, 1)))
    if not (n_uw == n_vw == n_uv):
        raise UnbalancedEdgeTypes(f"edge type counts {n_uw}/{n_vw}/{n_uv} differ")
    q = 2 * max(len(U), len(V), len(W))
    q6 = q**6
    edge_to_int = {}
    a_vals, b_vals, c_vals = [], [], []
    for edge in by_type[(0, 2)]:
        u, w = sorted(edge, key=lambda v: part[v])
        value = 2 * q6 + rank[u] * q - rank[w]
        edge_to_int[edge] = value
        a_vals.append(value)
    for edge in by_type[(1, 2)]:
        v, w = sorted(edge, key=lambda vv: part[vv])
        value = 7 * q6 + rank[v] * q**2 + rank[w]
        edge_to_int[edge] = value
        b_vals.append(value)
    for edge in by_type[(0, 1)]:
        u, v = sorted(edge, key=lambda vv: part[vv])
        value = 10 * q6 - rank[v] * q**2 - rank[u] * q
        edge_to_int[edge] = value
        c_vals.append(value)
    inst = N3DMInstance(tuple(sorted(a_vals)), tuple(sorted(b_vals)), tuple(sorted(c_vals)))
    assert inst.t == 19 * q6
    return inst, TriangleCertificate(graph, q, edge_to_int)


# -- step 4: Numerical 3DM -> 3-Partition ---------------------------------------


@dataclass
class N3DMCertificate:
    forward_map: dict
    backward_map: dict = field(init=False)

    def __post_init__(self):
        self.backward_map = {v: k for k, v in self.forward_map.items()}

    def forward(self, matching: frozenset[tuple[int, int, int]]) -> frozenset[frozenset[int]]:
        return frozenset(
            frozenset(self.forward_map[x] for x in triple) for triple in matching
        )

    def backward(self, partition: frozenset[frozenset[int]]) -> frozenset:
        out = []
        for group in partition:
            raw = sorted(self.backward_map[x] for x in group)
            sources = sorted(group, key=lambda x: x % 8)  # residues 1, 2, 5
            a = self.backward_map[next(x for x in group if x % 8 == 1)]
            b = self.backward_map[next(x for x in group if x % 8 == 2)]
            c = self.backward_map[next(x for x in group if x % 8 == 5)]
            del raw, sources
            out.append((a, b, c))
        return frozenset(out)


def n3dm_to_3partition(inst: N3DMInstance) -> tuple[ThreePartitionInstance, N3DMCertificate]:
    """8a+1 / 8b+2 / 8c-3 with target 8t; modulo 8, a valid triple must take
    one element of each residue class."""
    forward = {}
    for v in inst.a:
        forward[v] = 8 * v + 1
    for v in inst.b:
        forward[v] = 8 * v + 2
    for v in inst.c:
        forward[v] = 8 * v - 3
    values = tuple(sorted(forward.values()))
    assert len(set(values)) == 3 * inst.n, "distinctness must be preserved"
    out = ThreePartitionInstance(values, relaxed=True)
    assert out.t == 8 * inst.t
    return out, N3DMCertificate(forward)


# -- parsimony checks -----------------------------------------------------------


@dataclass
class ParsimonyReport:
    step: str
    count_before: int
    count_after: int
    solutions_checked: int

    @property
    def ok(self) -> bool:
        return self.count_before == self.count_after


def _check_bijection(step, before_sols, after_sols, forward, backward):
    after_set = set(after_sols)
    mapped = set()
    for sol in before_sols:
        image = forward(sol)
        if image not in after_set:
            raise ParsimonyMismatch(f"{step}: image not a solution", sol)
        if image in mapped:
            raise ParsimonyMismatch(f"{step}: forward map not injective", sol)
        mapped.add(image)
        if backward(image) != sol:
            raise ParsimonyMismatch(f"{step}: backward(forward(s)) != s", sol)
    if len(mapped) != len(after_set):
        missing = after_set - mapped
        raise ParsimonyMismatch(f"{step}: forward map not surjective", next(iter(missing)))


def check_parsimony(step: str, problem) -> ParsimonyReport:
    """Verify counts match and the certificate is a bijection, pointwise."""
    if step == "formula_to_triangles":
        graph, cert = formula_to_triangles(problem)
        before = list(problem.solutions())
        after = list(graph.solutions(limit_edges=2000))
        _check_bijection(step, before, after, cert.forward, cert.backward)
    elif step == "triangles_to_n3dm":
        inst, cert = triangles_to_n3dm(problem)
        before = list(problem.solutions())
        after = list(inst.solutions())
        _check_bijection(step, before, after, cert.forward, cert.backward)
    elif step == "n3dm_to_3partition":
        inst, cert = n3dm_to_3partition(problem)
        before = list(problem.solutions())
        after = list(inst.solutions())
        _check_bijection(step, before, after, cert.forward, cert.backward)
    else:
        raise ValueError(f"unknown step {step!r}")
    return ParsimonyReport(step, len(before), len(after), len(before))
