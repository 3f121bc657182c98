"""Penn Treebank bracketed trees: reading, leaves, and height."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, ValidationError

_BRACKET_TOKEN = re.compile(r"\(|\)|[^\s()]+")


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = ()
    surface: str | None = None

    def __post_init__(self):
        if self.surface is None and not self.children:
            raise ValidationError(f"internal node {self.label!r} has no children")
        if self.surface is not None and self.children:
            raise ValidationError("a leaf cannot have children")

    @classmethod
    def leaf(cls, surface: str) -> "ParseTree":
        return cls(label=surface, surface=surface)

    @property
    def is_leaf(self) -> bool:
        return self.surface is not None

    def leaves(self) -> list[str]:
        out, stack = [], [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node.surface)
            else:
                stack.extend(reversed(node.children))
        return out

    def relabel(self, fn) -> "ParseTree":
        if self.is_leaf:
            return self
        return ParseTree(fn(self.label), tuple(c.relabel(fn) for c in self.children))

    def __str__(self):
        if self.is_leaf:
            return self.surface
        return f"({self.label} {' '.join(str(c) for c in self.children)})"


def parse_height(tree: ParseTree) -> int:
    """Leaves have height 0; an internal node is one above its tallest child."""
    heights: dict[int, int] = {}
    stack = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if node.is_leaf:
            heights[id(node)] = 0
        elif expanded:
            heights[id(node)] = 1 + max(heights[id(c)] for c in node.children)
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
    return heights[id(tree)]


def read_tree(text: str, lineno: int | None = None) -> ParseTree:
    """Parse one bracketed tree such as ``(S (NP (DT the) (NN cat)) (VP (VBZ sleeps)))``.

    A bare token is a leaf. An unlabeled outer bracket, as in ``( (S ...))``,
    gets the label ``ROOT``.
    """
    tokens = _BRACKET_TOKEN.findall(text)
    if not tokens:
        raise ParseError("empty tree", lineno)
    if tokens[0] != "(":
        if len(tokens) != 1 or tokens[0] == ")":
            raise ParseError(f"unexpected tokens {tokens!r}", lineno)
        return ParseTree.leaf(tokens[0])

    # stack of (label, children) frames
    stack: list[tuple[str | None, list[ParseTree]]] = []
    root = None
    pos = 0
    while pos < len(tokens):
        tok = tokens[pos]
        if root is not None:
            raise ParseError(f"trailing text after tree: {tok!r}", lineno)
        if tok == "(":
            label = None
            if pos + 1 < len(tokens) and tokens[pos + 1] not in "()":
                label = tokens[pos + 1]
                pos += 1
            stack.append((label, []))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", lineno)
            label, children = stack.pop()
            if not children:
                raise ParseError(f"node {label!r} has no children", lineno)
            node = ParseTree(label or "ROOT", tuple(children))
            if stack:
                stack[-1][1].append(node)
            else:
                root = node
        else:
            if not stack:
                raise ParseError(f"leaf {tok!r} outside brackets", lineno)
            stack[-1][1].append(ParseTree.leaf(tok))
        pos += 1
    if stack or root is None:
        raise ParseError("unbalanced '('", lineno)
    return root


def read_tree_file(path) -> list[ParseTree | None]:
    """One tree per line; blank lines give ``None`` so line alignment is kept."""
    trees = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            trees.append(read_tree(line, lineno) if line else None)
    return trees
