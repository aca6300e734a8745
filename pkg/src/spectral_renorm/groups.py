"""Self-similar group actions on the levels of a rooted d-regular tree.

A generator is presented by a wreath recursion: a root permutation of the
alphabet plus one section (another generator or the identity) per letter.
The action is determined by ``g(i w) = sigma(i) . g_i(w)``.

Conventions, fixed once and documented here:

- vertices of level n are words w1...wn, indexed first-letter-major:
  ``index(w1...wn) = w1 * d^(n-1) + index(w2...wn)``;
- a word of generators acts left to right: in the word "xy", x acts first,
  so the permutation of "xy" is y o x and its matrix is M(y) M(x);
- an apostrophe in a word inverts the preceding generator ("b'a" is
  b^{-1} followed by a).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

IDENTITY = "1"

#: builtin wreath recursion tables: name -> (d, {gen: (root_perm, sections)})
_BUILTINS = {
    "grigorchuk": (
        2,
        {
            "a": ((1, 0), (IDENTITY, IDENTITY)),
            "b": ((0, 1), ("a", "c")),
            "c": ((0, 1), ("a", "d")),
            "d": ((0, 1), (IDENTITY, "b")),
        },
    ),
    "lamplighter": (
        2,
        {
            "a": ((1, 0), ("b", "a")),
            "b": ((0, 1), ("b", "a")),
        },
    ),
    "hanoi": (
        3,
        {
            "a": ((1, 0, 2), (IDENTITY, IDENTITY, "a")),
            "b": ((2, 1, 0), (IDENTITY, "b", IDENTITY)),
            "c": ((0, 2, 1), ("c", IDENTITY, IDENTITY)),
        },
    ),
}


class GroupError(ValueError):
    """Raised for malformed recursions or unknown generators."""


@dataclass(frozen=True)
class GroupSpec:
    """A validated wreath-recursion presentation."""

    d: int
    generators: dict  # name -> (root_perm tuple, sections tuple)
    builtin: str = "custom"

    def __post_init__(self):
        if self.d < 2:
            raise GroupError("alphabet size must be at least 2")
        for name, (perm, sections) in self.generators.items():
            if sorted(perm) != list(range(self.d)):
                raise GroupError(f"root permutation of '{name}' is not a bijection of 0..{self.d - 1}")
            if len(sections) != self.d:
                raise GroupError(f"'{name}' must declare {self.d} sections")
            for s in sections:
                if s != IDENTITY and s not in self.generators:
                    raise GroupError(f"section '{s}' of '{name}' does not resolve")

    @property
    def names(self) -> list:
        return list(self.generators)


def build_group(name_or_table, d: int | None = None) -> GroupSpec:
    """Return a builtin presentation or validate a custom recursion table.

    ``name_or_table`` is one of "grigorchuk", "lamplighter", "hanoi", or a
    mapping ``{gen: (root_perm, sections)}`` together with alphabet size ``d``.
    """
    if isinstance(name_or_table, str):
        try:
            d, table = _BUILTINS[name_or_table]
        except KeyError:
            raise GroupError(f"unknown builtin group '{name_or_table}'") from None
        return GroupSpec(d=d, generators={k: (tuple(p), tuple(s)) for k, (p, s) in table.items()},
                         builtin=name_or_table)
    if d is None:
        raise GroupError("custom recursion tables need an explicit alphabet size")
    table = {k: (tuple(p), tuple(s)) for k, (p, s) in dict(name_or_table).items()}
    return GroupSpec(d=d, generators=table, builtin="custom")


@dataclass(frozen=True)
class LevelAction:
    """Permutation of the d^n level-n vertices induced by a word."""

    n: int
    d: int
    perm: tuple

    def __len__(self):
        return len(self.perm)

    def inverse(self) -> "LevelAction":
        inv = [0] * len(self.perm)
        for v, w in enumerate(self.perm):
            inv[w] = v
        return LevelAction(self.n, self.d, tuple(inv))

    def is_identity(self) -> bool:
        return all(p == v for v, p in enumerate(self.perm))


def parse_word(word: str | Sequence) -> list:
    """Split a word into (generator, exponent) letters.

    Accepts "ab'c" style strings (apostrophe = inverse) or iterables of
    (name, +-1) pairs.
    """
    if not isinstance(word, str):
        return [(name, exp) for name, exp in word]
    letters = []
    i = 0
    while i < len(word):
        ch = word[i]
        if ch == IDENTITY:
            i += 1
            continue
        exp = 1
        if i + 1 < len(word) and word[i + 1] == "'":
            exp = -1
            i += 1
        letters.append((ch, exp))
        i += 1
    return letters


def _generator_perm(group: GroupSpec, name: str, n: int, cache: dict) -> tuple:
    """Level-n permutation of a single generator, memoized over (name, n)."""
    key = (name, n)
    if key in cache:
        return cache[key]
    if n == 0:
        perm = (0,)
    else:
        root, sections = group.generators[name]
        sub = []
        for s in sections:
            if s == IDENTITY:
                sub.append(None)
            else:
                sub.append(_generator_perm(group, s, n - 1, cache))
        block = group.d ** (n - 1)
        out = [0] * (group.d ** n)
        for i in range(group.d):
            base = i * block
            target = root[i] * block
            sec = sub[i]
            if sec is None:
                for w in range(block):
                    out[base + w] = target + w
            else:
                for w in range(block):
                    out[base + w] = target + sec[w]
        perm = tuple(out)
    cache[key] = perm
    return perm


def level_action(group: GroupSpec, word: str | Sequence, n: int) -> LevelAction:
    """Permutation of level-n vertices for a word of generators.

    The word acts left to right: the first letter is applied first.
    """
    if n < 0:
        raise GroupError("level must be non-negative")
    cache = _perm_cache.setdefault(id(group), ({}, group))[0]
    size = group.d ** n
    current = list(range(size))
    for name, exp in parse_word(word):
        if name not in group.generators:
            raise GroupError(f"unknown generator '{name}'")
        perm = _generator_perm(group, name, n, cache)
        if exp == -1:
            inv = [0] * size
            for v, w in enumerate(perm):
                inv[w] = v
            perm = inv
        current = [perm[v] for v in current]
    return LevelAction(n=n, d=group.d, perm=tuple(current))


# permutation caches keyed by GroupSpec identity (specs are frozen)
_perm_cache: dict = {}


def generator_matrix(group: GroupSpec, word: str | Sequence, n: int):
    """Sparse 0/1 permutation matrix of the word's level-n action.

    Returned as (size, rows) where rows[v] is the row index of the single 1
    in column v, i.e. M[rows[v], v] = 1 realizes vertex v -> rows[v].
    """
    action = level_action(group, word, n)
    return len(action.perm), list(action.perm)


def matrix_dense(group: GroupSpec, word: str | Sequence, n: int):
    """Dense numpy permutation matrix of a word (float64)."""
    import numpy as np

    size, rows = generator_matrix(group, word, n)
    m = np.zeros((size, size))
    m[rows, np.arange(size)] = 1.0
    return m


def schreier_graph(group: GroupSpec, generating_set: Sequence, n: int) -> list:
    """Edge multiset {(v, s.v, label)} on the d^n level-n vertices.

    Loops are retained; one edge per (generator, vertex) pair.
    """
    if n < 1:
        raise GroupError("schreier graphs start at level 1")
    edges = []
    for word in generating_set:
        action = level_action(group, word, n)
        label = word if isinstance(word, str) else "".join(
            name + ("'" if e < 0 else "") for name, e in word)
        for v, w in enumerate(action.perm):
            edges.append((v, w, label))
    return edges


def graph_to_csv_rows(edges: Sequence) -> Iterator[str]:
    yield "src,dst,label"
    for v, w, label in edges:
        yield f"{v},{w},{label}"


def graph_to_adjacency(edges: Sequence, n_vertices: int) -> dict:
    """Adjacency-list dict suitable for JSON export."""
    adj: dict = {str(v): [] for v in range(n_vertices)}
    for v, w, label in edges:
        adj[str(v)].append({"to": w, "label": label})
    return adj
