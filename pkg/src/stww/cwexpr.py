"""Signed clique-width expressions and their contraction-sequence transform.

Expression text is prefix notation with five node kinds:

    leaf <label> <name>     introduce one vertex with the given label
    un <e1> <e2>            disjoint union
    rl <i> <j> <e>          relabel i -> j
    ep <i> <j> <e>          insert positive edges between labels i and j
    en <i> <j> <e>          insert negative edges between labels i and j

Parentheses may be used for grouping but carry no meaning; the fixed
arities make the prefix form unambiguous.  Vertex names that are all
digits are used as vertex ids directly, otherwise ids are assigned in
leaf order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .cnf import ParseError
from .sequence import ContractionSequence
from .trigraph import NEG, POS, SignedTrigraph

CwNode = Union["CwLeaf", "CwUnion", "CwRelabel", "CwEdge"]


@dataclass(frozen=True)
class CwLeaf:
    label: int
    name: str

    def __post_init__(self) -> None:
        if self.label < 1:
            raise ValueError(f"label {self.label} must be positive")
        if not self.name:
            raise ValueError("empty vertex name")


@dataclass(frozen=True)
class CwUnion:
    left: CwNode
    right: CwNode


@dataclass(frozen=True)
class CwRelabel:
    old: int
    new: int
    child: CwNode

    def __post_init__(self) -> None:
        if self.old < 1 or self.new < 1:
            raise ValueError("labels must be positive")
        if self.old == self.new:
            raise ValueError(f"relabel {self.old}->{self.new} is a no-op")


@dataclass(frozen=True)
class CwEdge:
    label_a: int
    label_b: int
    sign: str
    child: CwNode

    def __post_init__(self) -> None:
        if self.label_a < 1 or self.label_b < 1:
            raise ValueError("labels must be positive")
        if self.label_a == self.label_b:
            raise ValueError("edge insertion needs two distinct labels")
        if self.sign not in (POS, NEG):
            raise ValueError(f"bad edge sign {self.sign!r}")


@dataclass(frozen=True)
class CliqueWidthExpression:
    root: CwNode
    num_labels: int
    vertex_ids: dict[str, int]


def _walk(node: CwNode):
    yield node
    if isinstance(node, CwUnion):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, (CwRelabel, CwEdge)):
        yield from _walk(node.child)


def expression(root: CwNode) -> CliqueWidthExpression:
    """Wrap a node tree, assigning vertex ids and the label universe."""
    names: list[str] = []
    max_label = 0
    for node in _walk(root):
        if isinstance(node, CwLeaf):
            if node.name in names:
                raise ValueError(f"duplicate vertex name {node.name!r}")
            names.append(node.name)
            max_label = max(max_label, node.label)
        elif isinstance(node, CwRelabel):
            max_label = max(max_label, node.old, node.new)
        elif isinstance(node, CwEdge):
            max_label = max(max_label, node.label_a, node.label_b)
    if not names:
        raise ValueError("expression has no leaves")
    if all(name.isdigit() for name in names):
        ids = {name: int(name) for name in names}
        if any(v < 1 for v in ids.values()) or len(set(ids.values())) != len(ids):
            raise ValueError("numeric vertex names must be distinct positive ids")
    else:
        ids = {name: idx for idx, name in enumerate(names, start=1)}
    return CliqueWidthExpression(root, max_label, ids)


def parse_cw(text: str | bytes) -> CliqueWidthExpression:
    """Parse the prefix expression grammar described in the module docstring."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tokens: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace("(", " ").replace(")", " ")
        tokens.extend((tok, lineno) for tok in line.split())
    pos = 0

    def take(what: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(tokens):
            last = tokens[-1][1] if tokens else 1
            raise ParseError(f"unexpected end of expression, wanted {what}", last)
        pos += 1
        return tokens[pos - 1]

    def take_int(what: str) -> int:
        tok, line = take(what)
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected {what}, got {tok!r}", line) from None

    def parse_node() -> CwNode:
        tok, line = take("a node kind")
        try:
            if tok == "leaf":
                label = take_int("a label")
                name, _ = take("a vertex name")
                return CwLeaf(label, name)
            if tok == "un":
                return CwUnion(parse_node(), parse_node())
            if tok == "rl":
                old = take_int("a label")
                new = take_int("a label")
                return CwRelabel(old, new, parse_node())
            if tok in ("ep", "en"):
                a = take_int("a label")
                b = take_int("a label")
                return CwEdge(a, b, POS if tok == "ep" else NEG, parse_node())
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        raise ParseError(f"unknown node kind {tok!r}", line)

    root = parse_node()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after expression: {tokens[pos][0]!r}", tokens[pos][1])
    try:
        return expression(root)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None


def serialize_cw(expr: CliqueWidthExpression) -> str:
    def render(node: CwNode) -> str:
        if isinstance(node, CwLeaf):
            return f"leaf {node.label} {node.name}"
        if isinstance(node, CwUnion):
            return f"un ({render(node.left)}) ({render(node.right)})"
        if isinstance(node, CwRelabel):
            return f"rl {node.old} {node.new} ({render(node.child)})"
        op = "ep" if node.sign == POS else "en"
        return f"{op} {node.label_a} {node.label_b} ({render(node.child)})"

    return render(expr.root) + "\n"


def evaluate(expr: CliqueWidthExpression) -> SignedTrigraph:
    """Evaluation graph of the expression.

    Inserting an edge over a pair that already carries the opposite sign is
    an error; re-inserting the same sign is a no-op.
    """
    ids = expr.vertex_ids

    def walk(node: CwNode) -> tuple[dict[int, int], dict[tuple[int, int], str]]:
        if isinstance(node, CwLeaf):
            return {ids[node.name]: node.label}, {}
        if isinstance(node, CwUnion):
            labels_l, edges_l = walk(node.left)
            labels_r, edges_r = walk(node.right)
            labels_l.update(labels_r)
            edges_l.update(edges_r)
            return labels_l, edges_l
        if isinstance(node, CwRelabel):
            labels, edges = walk(node.child)
            for v, label in labels.items():
                if label == node.old:
                    labels[v] = node.new
            return labels, edges
        labels, edges = walk(node.child)
        group_a = [v for v, label in labels.items() if label == node.label_a]
        group_b = [v for v, label in labels.items() if label == node.label_b]
        for x in group_a:
            for y in group_b:
                pair = (x, y) if x < y else (y, x)
                existing = edges.get(pair)
                if existing is not None and existing != node.sign:
                    raise ValueError(
                        f"edge {pair} inserted with both signs by the expression"
                    )
                edges[pair] = node.sign
        return labels, edges

    labels, edges = walk(expr.root)
    return SignedTrigraph(
        sorted(labels), [(u, v, sign) for (u, v), sign in sorted(edges.items())]
    )


def cw_to_sequence(expr: CliqueWidthExpression) -> tuple[SignedTrigraph, ContractionSequence]:
    """Evaluation graph plus a full contraction sequence of width <= 2k.

    Processes the expression bottom-up keeping one representative vertex
    per label: a relabel i->j contracts the i-representative into the
    j-representative, a union contracts the right operand's representative
    into the left one's per common label in ascending label order, and edge
    insertions contract nothing.  Leftover root labels are merged into the
    smallest one at the end, so the sequence always ends at one vertex.
    """
    graph = evaluate(expr)
    ids = expr.vertex_ids
    steps: list[tuple[int, int]] = []

    def process(node: CwNode) -> dict[int, int]:
        if isinstance(node, CwLeaf):
            return {node.label: ids[node.name]}
        if isinstance(node, CwUnion):
            reps = process(node.left)
            for label, rep in sorted(process(node.right).items()):
                if label in reps:
                    steps.append((reps[label], rep))
                else:
                    reps[label] = rep
            return reps
        if isinstance(node, CwRelabel):
            reps = process(node.child)
            if node.old in reps:
                if node.new in reps:
                    steps.append((reps[node.new], reps.pop(node.old)))
                else:
                    reps[node.new] = reps.pop(node.old)
            return reps
        return process(node.child)

    reps = process(expr.root)
    order = sorted(reps)
    for label in order[1:]:
        steps.append((reps[order[0]], reps[label]))
    if len(steps) != graph.num_vertices - 1:
        raise AssertionError(
            f"transform produced {len(steps)} steps for {graph.num_vertices} vertices"
        )
    seq = ContractionSequence(tuple(steps), num_vertices=max(graph.vertices()))
    return graph, seq
