"""Text formats for the combinatorial problem kinds.

CNF documents are a positive-literal DIMACS variant: a ``p pcnf V C`` header
followed by one clause per line (three 1-based variable indices, optional
trailing 0).  Graphs are part-tagged edge lists; the integer problems are
plain decimal lists.
"""

from __future__ import annotations

from .chain import N3DMInstance, PositiveCnf, ThreePartitionInstance, TripartiteGraph
from .model import ParseError, ValidationError


def parse_cnf(text: str) -> PositiveCnf:
    num_vars = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "pcnf":
                raise ParseError("expected 'p pcnf <vars> <clauses>'", lineno)
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ParseError("clause before header", lineno)
        items = [int(v) for v in line.split()]
        if items and items[-1] == 0:
            items = items[:-1]
        if len(items) != 3:
            raise ParseError("clauses have exactly three positive literals", lineno)
        if any(v <= 0 for v in items):
            raise ParseError("literals are positive 1-based indices", lineno)
        clauses.append(tuple(v - 1 for v in items))
    if num_vars is None:
        raise ParseError("missing 'p pcnf' header", 1)
    return PositiveCnf(num_vars, tuple(clauses))


def serialize_cnf(cnf: PositiveCnf) -> str:
    lines = [f"p pcnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(str(v + 1) for v in cl) + " 0" for cl in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> TripartiteGraph:
    parts: dict[str, list] = {"U": [], "V": [], "W": []}
    edges = set()
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] in ("U", "V", "W"):
            for name in fields[1:]:
                parts[fields[0]].append(name)
                declared.add(name)
        elif fields[0] == "e" and len(fields) == 3:
            a, b = fields[1], fields[2]
            if a not in declared or b not in declared:
                raise ParseError(f"edge uses undeclared vertex {a} or {b}", lineno)
            edges.add(frozenset((a, b)))
        else:
            raise ParseError("expected 'U|V|W names...' or 'e a b'", lineno)
    return TripartiteGraph(
        (tuple(parts["U"]), tuple(parts["V"]), tuple(parts["W"])), frozenset(edges)
    )


def serialize_graph(g: TripartiteGraph) -> str:
    lines = []
    for label, part in zip(("U", "V", "W"), g.parts):
        lines.append(f"{label} " + " ".join(str(v) for v in part))
    part_of = g.part_of()
    for edge in sorted(g.edges, key=lambda e: sorted(map(str, e))):
        a, b = sorted(edge, key=lambda v: part_of[v])
        lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"


def parse_n3dm(text: str) -> N3DMInstance:
    rows: dict[str, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip().upper()
        if key not in ("A", "B", "C"):
            raise ParseError("expected 'A: ...', 'B: ...' or 'C: ...'", lineno)
        rows[key] = tuple(int(v) for v in rest.replace(",", " ").split())
    if set(rows) != {"A", "B", "C"}:
        raise ParseError("need all of A, B and C", 1)
    return N3DMInstance(rows["A"], rows["B"], rows["C"])


def serialize_n3dm(inst: N3DMInstance) -> str:
    return (
        f"A: {' '.join(map(str, inst.a))}\n"
        f"B: {' '.join(map(str, inst.b))}\n"
        f"C: {' '.join(map(str, inst.c))}\n"
    )


def parse_3partition(text: str, relaxed: bool = False) -> ThreePartitionInstance:
    values = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            values.extend(int(v) for v in line.replace(",", " ").split())
    return ThreePartitionInstance(tuple(values), relaxed=relaxed)


def serialize_3partition(inst: ThreePartitionInstance) -> str:
    return " ".join(map(str, inst.a)) + "\n"
