"""Enriched Motzkin trees with de Bruijn binders.

A term is a plane tree whose nodes have out-degree 0, 1 or 2.  Unary nodes
are abstractions, binary nodes applications.  A leaf carries a de Bruijn
index: ``binder == d >= 1`` points at the d-th enclosing unary node
(1 = nearest), ``binder == 0`` marks a free leaf.  Motzkin trees are terms
whose leaves are all free.

All walkers below are iterative; generated terms can be deep chains of
tens of thousands of nodes, far past the interpreter recursion limit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError

FREE = 0


@dataclass(frozen=True, slots=True)
class Leaf:
    binder: int = FREE

    def __post_init__(self):
        if self.binder < 0:
            raise ValueError("de Bruijn index must be >= 0 (0 marks a free leaf)")


@dataclass(frozen=True, slots=True)
class Unary:
    child: "Term"


@dataclass(frozen=True, slots=True)
class Binary:
    left: "Term"
    right: "Term"


Term = Union[Leaf, Unary, Binary]

# ---------------------------------------------------------------------------
# families


class Kind:
    LAMBDA_ALL = "lambda-all"
    LAMBDA_EXACT_UNARY = "lambda-exact-unary"
    LAMBDA_AT_MOST_UNARY = "lambda-at-most-unary"
    LAMBDA_UNARY_HEIGHT = "lambda-unary-height"
    LAMBDA_BINDING_LENGTH = "lambda-binding-length"
    MOTZKIN = "motzkin"
    MOTZKIN_EXACT_UNARY = "motzkin-exact-unary"
    MOTZKIN_HEIGHT_EXACT = "motzkin-height-exact"
    MOTZKIN_HEIGHT_AT_MOST = "motzkin-height-at-most"


_PARAMETERLESS = {Kind.LAMBDA_ALL, Kind.MOTZKIN}
_ALL_KINDS = {
    Kind.LAMBDA_ALL,
    Kind.LAMBDA_EXACT_UNARY,
    Kind.LAMBDA_AT_MOST_UNARY,
    Kind.LAMBDA_UNARY_HEIGHT,
    Kind.LAMBDA_BINDING_LENGTH,
    Kind.MOTZKIN,
    Kind.MOTZKIN_EXACT_UNARY,
    Kind.MOTZKIN_HEIGHT_EXACT,
    Kind.MOTZKIN_HEIGHT_AT_MOST,
}


@dataclass(frozen=True, slots=True)
class Family:
    """A restricted class of terms: a kind tag plus its integer parameter.

    Parameterless kinds (``lambda-all``, ``motzkin``) have ``param is None``.
    Motzkin kinds ignore binders entirely: membership requires every leaf
    to be free.
    """

    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in _ALL_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind in _PARAMETERLESS:
            if self.param is not None:
                raise ValueError(f"{self.kind} takes no parameter")
        else:
            if self.param is None or self.param < 0:
                raise ValueError(f"{self.kind} needs a parameter >= 0")

    # constructors ---------------------------------------------------------
    @classmethod
    def lambda_all(cls) -> "Family":
        return cls(Kind.LAMBDA_ALL)

    @classmethod
    def lambda_exact_unary(cls, q: int) -> "Family":
        return cls(Kind.LAMBDA_EXACT_UNARY, q)

    @classmethod
    def lambda_at_most_unary(cls, q: int) -> "Family":
        return cls(Kind.LAMBDA_AT_MOST_UNARY, q)

    @classmethod
    def lambda_unary_height(cls, k: int) -> "Family":
        return cls(Kind.LAMBDA_UNARY_HEIGHT, k)

    @classmethod
    def lambda_binding_length(cls, k: int) -> "Family":
        return cls(Kind.LAMBDA_BINDING_LENGTH, k)

    @classmethod
    def motzkin(cls) -> "Family":
        return cls(Kind.MOTZKIN)

    @classmethod
    def motzkin_exact_unary(cls, q: int) -> "Family":
        return cls(Kind.MOTZKIN_EXACT_UNARY, q)

    @classmethod
    def motzkin_height_exact(cls, k: int) -> "Family":
        return cls(Kind.MOTZKIN_HEIGHT_EXACT, k)

    @classmethod
    def motzkin_height_at_most(cls, k: int) -> "Family":
        return cls(Kind.MOTZKIN_HEIGHT_AT_MOST, k)

    # properties -----------------------------------------------------------
    @property
    def is_motzkin(self) -> bool:
        return self.kind.startswith("motzkin")

    @property
    def is_lambda(self) -> bool:
        return not self.is_motzkin

    def label(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}({self.param})"

    def parity_forbidden(self, n: int) -> bool:
        """True when counts at size n are zero for parity reasons.

        Exact-unary families: q unary and m binary nodes give size
        q + 2m + 1, so sizes with n = q (mod 2) are empty.
        """
        if self.kind in (Kind.LAMBDA_EXACT_UNARY, Kind.MOTZKIN_EXACT_UNARY):
            return (n - self.param) % 2 == 0
        return False

    @classmethod
    def from_label(cls, text: str) -> "Family":
        text = text.strip()
        if "(" in text:
            kind, rest = text.split("(", 1)
            if not rest.endswith(")"):
                raise ValueError(f"malformed family label {text!r}")
            return cls(kind.strip(), int(rest[:-1]))
        return cls(text)


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True, slots=True)
class TermStats:
    size: int
    unary_height: int
    max_binding_length: int
    unary_node_count: int
    profile_by_depth: tuple[int, ...]
    profile_by_unary_level: tuple[int, ...]


def _iter_nodes(t: Term) -> Iterator[tuple[Term, int, int]]:
    """Preorder (node, edge depth, number of unary ancestors)."""
    stack = [(t, 0, 0)]
    while stack:
        node, depth, ulevel = stack.pop()
        yield node, depth, ulevel
        if isinstance(node, Unary):
            stack.append((node.child, depth + 1, ulevel + 1))
        elif isinstance(node, Binary):
            stack.append((node.right, depth + 1, ulevel))
            stack.append((node.left, depth + 1, ulevel))


def stats(t: Term) -> TermStats:
    """All statistics in one traversal.

    A node sits at unary level = number of unary nodes strictly above it;
    a leaf's unary height equals that level, and the binding length of a
    leaf with index d is d (its binder plus the d-1 unary nodes crossed
    on the way down), capped at the number of unary ancestors for
    ill-formed indices.
    """
    size = 0
    unary_count = 0
    unary_height = 0
    max_binding = 0
    by_depth: list[int] = []
    by_ulevel: list[int] = []
    for node, depth, ulevel in _iter_nodes(t):
        size += 1
        while len(by_depth) <= depth:
            by_depth.append(0)
        while len(by_ulevel) <= ulevel:
            by_ulevel.append(0)
        by_depth[depth] += 1
        by_ulevel[ulevel] += 1
        if isinstance(node, Unary):
            unary_count += 1
        elif isinstance(node, Leaf):
            if ulevel > unary_height:
                unary_height = ulevel
            if node.binder:
                max_binding = max(max_binding, min(node.binder, ulevel))
    return TermStats(
        size=size,
        unary_height=unary_height,
        max_binding_length=max_binding,
        unary_node_count=unary_count,
        profile_by_depth=tuple(by_depth),
        profile_by_unary_level=tuple(by_ulevel),
    )


def validate(t: Term, fam: Family) -> bool:
    """Membership test: closedness plus the family's restriction.

    Lambda families require every leaf bound by a valid index; Motzkin
    families require every leaf free.
    """
    unary_count = 0
    for node, _depth, ulevel in _iter_nodes(t):
        if isinstance(node, Unary):
            unary_count += 1
            if fam.kind == Kind.LAMBDA_UNARY_HEIGHT and ulevel + 1 > fam.param:
                return False
            if fam.kind in (Kind.MOTZKIN_HEIGHT_EXACT, Kind.MOTZKIN_HEIGHT_AT_MOST) and ulevel + 1 > fam.param:
                return False
            continue
        if not isinstance(node, Leaf):
            continue
        if fam.is_motzkin:
            if node.binder != FREE:
                return False
        else:
            if node.binder == FREE or node.binder > ulevel:
                return False
        if fam.kind == Kind.LAMBDA_BINDING_LENGTH and node.binder > fam.param:
            return False
        if fam.kind == Kind.MOTZKIN_HEIGHT_EXACT and ulevel != fam.param:
            return False
    if fam.kind in (Kind.LAMBDA_EXACT_UNARY, Kind.MOTZKIN_EXACT_UNARY):
        return unary_count == fam.param
    if fam.kind == Kind.LAMBDA_AT_MOST_UNARY:
        return unary_count <= fam.param
    return True


# ---------------------------------------------------------------------------
# rendering and parsing


def _render_debruijn(t: Term) -> str:
    # Iterative preorder with explicit markers; lambdas are parenthesised
    # only in application position, applications always are.
    out: list[str] = []
    stack: list[object] = [(t, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        node, in_app = item
        if isinstance(node, Leaf):
            out.append(str(node.binder))
        elif isinstance(node, Unary):
            if in_app:
                out.append("(\\ ")
                stack.append(")")
            else:
                out.append("\\ ")
            stack.append((node.child, False))
        else:
            out.append("(")
            stack.append(")")
            stack.append((node.right, True))
            stack.append(" ")
            stack.append((node.left, True))
    return "".join(out)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()\\":
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


def _parse_debruijn(text: str) -> Term:
    """term := INT | "\\" term | "(" term ")" | "(" term term ")"

    Parenthesised single terms are accepted as grouping so that rendered
    output like ``((\\ (1 1)) (\\ 1))`` parses back.
    """
    tokens = _tokenize(text)
    pos = 0

    # Iterative recursive-descent: frames are ("lam",) or ("paren", [parts], at)
    frames: list[list] = []
    result: Term | None = None

    def reduce(value: Term) -> Term | None:
        # Fold a finished term into pending frames; returns a final term
        # when no frame is left hungry.
        while frames:
            frame = frames[-1]
            if frame[0] == "lam":
                frames.pop()
                value = Unary(value)
            else:  # paren frame collects 1 or 2 parts before ')'
                frame[1].append(value)
                return None
        return value

    while pos < len(tokens):
        kind, text_, at = tokens[pos]
        pos += 1
        if result is not None:
            raise ParseError("trailing input after complete term", at)
        if kind == "int":
            value = Leaf(int(text_))
            done = reduce(value)
            if done is not None:
                result = done
        elif kind == "\\":
            frames.append(["lam"])
        elif kind == "(":
            frames.append(["paren", [], at])
        elif kind == ")":
            if not frames or frames[-1][0] != "paren":
                raise ParseError("unmatched ')'", at)
            frame = frames.pop()
            parts = frame[1]
            if len(parts) == 1:
                value = parts[0]
            elif len(parts) == 2:
                value = Binary(parts[0], parts[1])
            else:
                raise ParseError(f"parenthesised group with {len(parts)} terms", frame[2])
            done = reduce(value)
            if done is not None:
                result = done
        else:  # pragma: no cover
            raise ParseError(f"unexpected token {kind}", at)
    if result is None:
        where = tokens[-1][2] + 1 if tokens else 0
        raise ParseError("incomplete term", where)
    return result


def _to_jsonable(t: Term) -> dict:
    # Iterative bottom-up assembly keyed by object identity.
    done: dict[int, dict] = {}
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf):
            done[id(node)] = {"kind": "leaf", "binder": node.binder}
        elif not expanded:
            stack.append((node, True))
            if isinstance(node, Unary):
                stack.append((node.child, False))
            else:
                stack.append((node.right, False))
                stack.append((node.left, False))
        elif isinstance(node, Unary):
            done[id(node)] = {"kind": "unary", "child": done[id(node.child)]}
        else:
            done[id(node)] = {
                "kind": "binary",
                "left": done[id(node.left)],
                "right": done[id(node.right)],
            }
    return done[id(t)]


def _from_jsonable(obj: object, path: str = "$") -> Term:
    # Iterative: worklist of (obj, path); assemble children-first.
    order: list[tuple[dict, str]] = []
    seen: list[tuple[object, str]] = [(obj, path)]
    while seen:
        o, p = seen.pop()
        if not isinstance(o, dict) or "kind" not in o:
            raise ParseError(f"expected object with 'kind' at {p}", 0)
        order.append((o, p))
        kind = o["kind"]
        if kind == "leaf":
            pass
        elif kind == "unary":
            if "child" not in o:
                raise ParseError(f"unary node without child at {p}", 0)
            seen.append((o["child"], p + ".child"))
        elif kind == "binary":
            if "left" not in o or "right" not in o:
                raise ParseError(f"binary node without left/right at {p}", 0)
            seen.append((o["left"], p + ".left"))
            seen.append((o["right"], p + ".right"))
        else:
            raise ParseError(f"unknown node kind {kind!r} at {p}", 0)
    built: dict[int, Term] = {}
    for o, p in reversed(order):
        kind = o["kind"]
        if kind == "leaf":
            binder = o.get("binder", FREE)
            if not isinstance(binder, int) or binder < 0:
                raise ParseError(f"bad binder {binder!r} at {p}", 0)
            built[id(o)] = Leaf(binder)
        elif kind == "unary":
            built[id(o)] = Unary(built[id(o["child"])])
        else:
            built[id(o)] = Binary(built[id(o["left"])], built[id(o["right"])])
    return built[id(obj)]


def _render_dot(t: Term) -> str:
    """DOT digraph: solid child edges, dashed binder-to-leaf edges."""
    lines = ["digraph term {"]
    edges: list[str] = []
    binders: list[str] = []
    # stack carries (node, enclosing unary ids, nearest first)
    counter = 0
    stack: list[tuple[Term, tuple[int, ...]]] = [(t, ())]
    while stack:
        node, unaries = stack.pop()
        nid = counter
        counter += 1
        if isinstance(node, Leaf):
            label = "x" if node.binder else "free"
            lines.append(f'  n{nid} [label="{label}"];')
            if node.binder and node.binder <= len(unaries):
                binders.append(f"  n{unaries[node.binder - 1]} -> n{nid} [style=dashed];")
        elif isinstance(node, Unary):
            lines.append(f'  n{nid} [label="lam"];')
        else:
            lines.append(f'  n{nid} [label="@"];')
        if isinstance(node, Unary):
            edges.append(f"  n{nid} -> n{nid + 1};")
            stack.append((node.child, (nid,) + unaries))
        elif isinstance(node, Binary):
            # Preorder ids: left subtree occupies nid+1 .. nid+size(left).
            left_size = _size(node.left)
            edges.append(f"  n{nid} -> n{nid + 1};")
            edges.append(f"  n{nid} -> n{nid + 1 + left_size};")
            stack.append((node.right, unaries))
            stack.append((node.left, unaries))
    lines.extend(edges)
    lines.extend(binders)
    lines.append("}")
    return "\n".join(lines)


def _size(t: Term) -> int:
    n = 0
    for _ in _iter_nodes(t):
        n += 1
    return n


def render(t: Term, format: str = "debruijn") -> str:
    if format == "debruijn":
        return _render_debruijn(t)
    if format == "json":
        return json.dumps(_to_jsonable(t))
    if format == "dot":
        return _render_dot(t)
    raise ValueError(f"unknown render format {format!r}")


def parse(text: str, format: str = "debruijn") -> Term:
    if format == "debruijn":
        return _parse_debruijn(text)
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
        return _from_jsonable(obj)
    raise ValueError(f"unknown parse format {format!r}")
