"""Tolerant HTML tree with a small CSS-selector subset.

Crawled news pages are rarely valid, so parsing is built on the
error-recovering ``html.parser`` tokenizer: unclosed elements are closed
implicitly, stray end tags are dropped, and nothing ever raises on tag
soup.

The selector subset covers what site profiles need: tag names, ``.class``,
``#id``, ``[attr]`` / ``[attr=value]`` filters, descendant combinators and
comma unions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

# Opening <key> implicitly closes an open <value> ancestor.
_IMPLIED_CLOSE = {
    "p": {"p"},
    "li": {"li"},
    "tr": {"tr", "td", "th"},
    "td": {"td", "th"},
    "th": {"td", "th"},
    "option": {"option"},
}

_SKIP_TEXT_TAGS = frozenset({"script", "style"})


@dataclass
class Node:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Node | str"] = field(default_factory=list)

    def iter_nodes(self):
        """All descendant element nodes in document order, self excluded."""
        for child in self.children:
            if isinstance(child, Node):
                yield child
                yield from child.iter_nodes()

    def text(self, *, skip: frozenset[str] = _SKIP_TEXT_TAGS) -> str:
        parts: list[str] = []
        self._collect_text(parts, skip)
        return "".join(parts)

    def _collect_text(self, parts: list[str], skip: frozenset[str]) -> None:
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            elif child.tag not in skip:
                child._collect_text(parts, skip)

    def classes(self) -> set[str]:
        return set(self.attrs.get("class", "").split())

    def find_all(self, selector: str) -> list["Node"]:
        matchers = _parse_selector(selector)
        found = []
        for node in self.iter_nodes():
            if any(_match_path(node, chain, self) for chain in matchers):
                found.append(node)
        return found

    def find(self, selector: str) -> "Node | None":
        result = self.find_all(selector)
        return result[0] if result else None


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node("document")
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        implied = _IMPLIED_CLOSE.get(tag)
        if implied:
            for open_node in reversed(self.stack[1:]):
                if open_node.tag in implied:
                    self._close_to(open_node)
                    break
        node = Node(tag, {k: (v if v is not None else "") for k, v in attrs})
        node.parent = self.stack[-1]  # type: ignore[attr-defined]
        self.stack[-1].children.append(node)
        if tag not in VOID_ELEMENTS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = Node(tag, {k: (v if v is not None else "") for k, v in attrs})
        node.parent = self.stack[-1]  # type: ignore[attr-defined]
        self.stack[-1].children.append(node)

    def handle_endtag(self, tag):
        for open_node in reversed(self.stack[1:]):
            if open_node.tag == tag:
                self._close_to(open_node)
                return
        # stray end tag: ignore

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)

    def _close_to(self, node: Node) -> None:
        while self.stack[-1] is not node:
            self.stack.pop()
        self.stack.pop()


def parse_html(source: str | bytes) -> Node:
    """Parse HTML into a tree; never raises on malformed markup."""
    if isinstance(source, bytes):
        source = source.decode("utf-8", errors="replace")
    builder = _TreeBuilder()
    builder.feed(source)
    builder.close()
    return builder.root


# --- selector matching ------------------------------------------------------

_COMPOUND_RE = re.compile(
    r"(?P<tag>[a-zA-Z][\w-]*|\*)?"
    r"(?P<rest>(?:[.#][\w-]+|\[[^\]]+\])*)"
)
_PART_RE = re.compile(r"[.#][\w-]+|\[[^\]]+\]")


@dataclass(frozen=True)
class _Compound:
    tag: str | None
    classes: tuple[str, ...]
    node_id: str | None
    attr_tests: tuple[tuple[str, str | None], ...]

    def matches(self, node: Node) -> bool:
        if self.tag and self.tag != "*" and node.tag != self.tag:
            return False
        if self.node_id is not None and node.attrs.get("id") != self.node_id:
            return False
        if self.classes and not set(self.classes) <= node.classes():
            return False
        for name, expected in self.attr_tests:
            if name not in node.attrs:
                return False
            if expected is not None and node.attrs[name] != expected:
                return False
        return True


def _parse_compound(token: str) -> _Compound:
    match = _COMPOUND_RE.fullmatch(token)
    if not match or (not match.group("tag") and not match.group("rest")):
        raise ValueError(f"unsupported selector component: {token!r}")
    classes: list[str] = []
    node_id: str | None = None
    attr_tests: list[tuple[str, str | None]] = []
    for part in _PART_RE.findall(match.group("rest")):
        if part.startswith("."):
            classes.append(part[1:])
        elif part.startswith("#"):
            node_id = part[1:]
        else:
            body = part[1:-1]
            if "=" in body:
                name, _, value = body.partition("=")
                attr_tests.append((name.strip(), value.strip().strip("'\"")))
            else:
                attr_tests.append((body.strip(), None))
    return _Compound(match.group("tag"), tuple(classes), node_id, tuple(attr_tests))


def _parse_selector(selector: str) -> list[list[_Compound]]:
    chains = []
    for alternative in selector.split(","):
        tokens = alternative.split()
        if not tokens:
            raise ValueError(f"empty selector in {selector!r}")
        chains.append([_parse_compound(token) for token in tokens])
    return chains


def _match_path(node: Node, chain: list[_Compound], root: Node) -> bool:
    if not chain[-1].matches(node):
        return False
    remaining = chain[:-1]
    current = getattr(node, "parent", None)
    while remaining and current is not None and current is not root:
        if remaining[-1].matches(current):
            remaining = remaining[:-1]
        current = getattr(current, "parent", None)
    return not remaining
