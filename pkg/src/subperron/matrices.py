"""Exact non-negative integer matrices and their block structure.

Everything here is exact: entries are arbitrary-precision Python ints, and
the block machinery (strongly connected components, periods, Frobenius-form
powers) is purely combinatorial.  Vectors are plain tuples of ints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ParseError

IntVector = tuple[int, ...]


class ExactMatrix:
    """Square non-negative matrix with arbitrary-precision integer entries.

    Instances are immutable; all arithmetic returns new matrices.  Entry
    ``(i, j)`` counts flow from coordinate ``j`` into coordinate ``i``
    (column-vector action), so the associated digraph has an edge ``j -> i``
    whenever ``entries[i][j] > 0``.
    """

    __slots__ = ("n", "entries")

    def __init__(self, rows: Iterable[Iterable[int]]):
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(entries)
        if n == 0:
            raise ValueError("matrix must be non-empty")
        for row in entries:
            if len(row) != n:
                raise ValueError("matrix must be square")
            for x in row:
                if x < 0:
                    raise ValueError("matrix entries must be non-negative")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"ExactMatrix({[list(r) for r in self.entries]})"

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        a, b = self.entries, other.entries
        n = self.n
        cols = tuple(zip(*b))
        return ExactMatrix(
            [[sum(ra[k] * cb[k] for k in range(n)) for cb in cols] for ra in a]
        )

    def pow(self, t: int) -> "ExactMatrix":
        """Exact ``self**t`` by binary powering (``t >= 0``)."""
        if t < 0:
            raise ValueError("exponent must be non-negative")
        result = ExactMatrix.identity(self.n)
        base = self
        while t:
            if t & 1:
                result = result @ base
            base = base @ base if t > 1 else base
            t >>= 1
        return result

    def apply(self, v: Sequence[int]) -> IntVector:
        """Exact matrix-vector product ``M @ v``."""
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(sum(row[j] * v[j] for j in range(self.n)) for row in self.entries)

    def submatrix(self, indices: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self.entries[i][j] for j in indices] for i in indices])

    def column_is_zero(self, j: int) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.n))

    def has_zero_column(self) -> bool:
        return any(self.column_is_zero(j) for j in range(self.n))

    def max_entry(self) -> int:
        return max(max(row) for row in self.entries)

    def is_entrywise_positive(self) -> bool:
        return all(x > 0 for row in self.entries for x in row)


def mat_pow_apply(m: ExactMatrix, v: Sequence[int], t: int) -> IntVector:
    """Exact iterate ``M**t @ v`` with arbitrary-precision integers.

    This is the oracle used by every convergence test: binary matrix
    powering keeps it bit-exact and independent of the step-by-step
    iteration used elsewhere.
    """
    if len(v) != m.n:
        raise ValueError("dimension mismatch")
    if t < 0:
        raise ValueError("exponent must be non-negative")
    return m.pow(t).apply(tuple(int(x) for x in v))


# ---------------------------------------------------------------------------
# parsing

def parse_matrix(text: str) -> ExactMatrix:
    """Parse a matrix from text.

    Accepted formats: one row per line with decimal non-negative integers
    separated by whitespace or commas (``#`` starts a comment), or a JSON
    2D array of non-negative integers.
    """
    stripped = text.lstrip()
    if stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON matrix: {exc}") from exc
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ParseError("JSON matrix must be a 2D array")
        rows = data
    else:
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append([int(tok) for tok in line.replace(",", " ").split()])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise ParseError("empty matrix")
    try:
        return ExactMatrix(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_matrix(path) -> ExactMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


# ---------------------------------------------------------------------------
# block structure

class BlockClass(Enum):
    """Classification of a diagonal block of the SCC decomposition."""

    PRIMITIVE = "primitive"
    POWER_BOUNDED = "power_bounded"
    ZERO_ONE = "zero_one"
    #: Irreducible with period >= 2 and spectral radius > 1.  Not a legal
    #: PB-Frobenius block; callers must raise the matrix to a power.
    IMPRIMITIVE = "imprimitive"

    @property
    def is_pb(self) -> bool:
        """Power bounded in the wide sense (1x1 blocks with entry 0 or 1
        count as PB, not as primitive)."""
        return self in (BlockClass.POWER_BOUNDED, BlockClass.ZERO_ONE)


@dataclass(frozen=True)
class BlockDecomposition:
    """Ordered block partition of a matrix, lower block triangular.

    ``perm[p]`` is the original index placed at permuted position ``p``;
    ``spans`` are ``(start, stop)`` ranges in permuted positions; ``order``
    holds pairs ``(i, j)`` meaning block ``i`` strictly precedes block ``j``
    in the flow order (mass started in block ``i`` eventually reaches block
    ``j``); ``dependency[i]`` is the set of all such ``j``.
    """

    n: int
    perm: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]
    classes: tuple[BlockClass, ...]
    order: frozenset[tuple[int, int]]
    dependency: tuple[frozenset[int], ...]

    @property
    def num_blocks(self) -> int:
        return len(self.spans)

    def members(self, i: int) -> tuple[int, ...]:
        """Original indices belonging to block ``i``."""
        start, stop = self.spans[i]
        return self.perm[start:stop]

    def block_of(self, original_index: int) -> int:
        for i in range(self.num_blocks):
            if original_index in self.members(i):
                return i
        raise IndexError(original_index)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(stop - start for start, stop in self.spans)

    def is_pb_frobenius(self) -> bool:
        """Every diagonal block primitive or power bounded (Def. of the
        PB-Frobenius form)."""
        return all(c is not BlockClass.IMPRIMITIVE for c in self.classes)

    def is_primitive_frobenius(self) -> bool:
        """Every diagonal block primitive, or 1x1 with entry 0 or 1."""
        return all(
            c in (BlockClass.PRIMITIVE, BlockClass.ZERO_ONE) for c in self.classes
        )

    def permuted(self, m: ExactMatrix) -> ExactMatrix:
        """The matrix with rows/columns reordered by ``perm`` (lower block
        triangular by construction)."""
        return ExactMatrix(
            [[m.entries[self.perm[p]][self.perm[q]] for q in range(self.n)]
             for p in range(self.n)]
        )


def _successors(m: ExactMatrix) -> list[list[int]]:
    """Flow digraph: edge j -> i whenever entry (i, j) > 0."""
    adj: list[list[int]] = [[] for _ in range(m.n)]
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            if x > 0:
                adj[j].append(i)
    return adj


def _tarjan_sccs(adj: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; returns SCCs as sorted index lists."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return sccs


def _scc_period(m: ExactMatrix, comp: list[int]) -> int:
    """Period of a strongly connected component: gcd over non-tree edges of
    BFS level differences (edges restricted to the component)."""
    members = set(comp)
    pos = {v: k for k, v in enumerate(comp)}
    adj: list[list[int]] = [[] for _ in comp]
    for j in comp:
        for i in range(m.n):
            if m.entries[i][j] > 0 and i in members:
                adj[pos[j]].append(pos[i])
    level = [-1] * len(comp)
    level[0] = 0
    queue = [0]
    g = 0
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if level[v] == -1:
                    level[v] = level[u] + 1
                    nxt.append(v)
                else:
                    g = math.gcd(g, level[u] + 1 - level[v])
        queue = nxt
    return g if g > 0 else 1


def _is_cyclic_permutation(sub: ExactMatrix) -> bool:
    """True iff the (irreducible) submatrix is a permutation matrix; for an
    irreducible non-negative integer matrix this characterizes spectral
    radius exactly 1."""
    n = sub.n
    for row in sub.entries:
        if sum(row) != 1 or any(x not in (0, 1) for x in row):
            return False
    return all(sum(sub.entries[i][j] for i in range(n)) == 1 for j in range(n))


def _classify_scc(m: ExactMatrix, comp: list[int]) -> BlockClass:
    if len(comp) == 1:
        entry = m.entries[comp[0]][comp[0]]
        if entry in (0, 1):
            return BlockClass.ZERO_ONE
        return BlockClass.PRIMITIVE
    sub = m.submatrix(comp)
    if _is_cyclic_permutation(sub):
        return BlockClass.POWER_BOUNDED
    if _scc_period(m, comp) == 1:
        return BlockClass.PRIMITIVE
    return BlockClass.IMPRIMITIVE


def _block_dag_edges(m: ExactMatrix, blocks: list[list[int]]) -> list[set[int]]:
    """One-step flow edges between blocks: edge a -> b when some entry
    (i in b, j in a) of m is positive, a != b."""
    block_of = {}
    for k, comp in enumerate(blocks):
        for v in comp:
            block_of[v] = k
    out: list[set[int]] = [set() for _ in blocks]
    for i in range(m.n):
        for j in range(m.n):
            if m.entries[i][j] > 0:
                a, b = block_of[j], block_of[i]
                if a != b:
                    out[a].add(b)
    return out


def _transitive_closure(out: list[set[int]]) -> list[set[int]]:
    k = len(out)
    reach: list[set[int]] = [set() for _ in range(k)]
    for start in range(k):
        seen = set()
        frontier = list(out[start])
        while frontier:
            v = frontier.pop()
            if v in seen:
                continue
            seen.add(v)
            frontier.extend(out[v])
        reach[start] = seen
    return reach


def _order_blocks(blocks: list[list[int]], out: list[set[int]]) -> list[int]:
    """Topological order of blocks: Kahn layering (sources of the flow DAG
    first), ties within a layer broken by smallest original index."""
    k = len(blocks)
    indeg = [0] * k
    for a in range(k):
        for b in out[a]:
            indeg[b] += 1
    order: list[int] = []
    layer = sorted((a for a in range(k) if indeg[a] == 0), key=lambda a: blocks[a][0])
    while layer:
        order.extend(layer)
        nxt = []
        for a in layer:
            for b in out[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    nxt.append(b)
        layer = sorted(nxt, key=lambda a: blocks[a][0])
    return order


def _build_decomposition(m: ExactMatrix, blocks: list[list[int]],
                         classes: list[BlockClass]) -> BlockDecomposition:
    out = _block_dag_edges(m, blocks)
    position_of = _order_blocks(blocks, out)
    if len(position_of) != len(blocks):
        raise ValueError("block graph is not acyclic")
    ordered = [blocks[k] for k in position_of]
    ordered_classes = [classes[k] for k in position_of]
    new_index = {old: new for new, old in enumerate(position_of)}
    out_new: list[set[int]] = [set() for _ in blocks]
    for a, targets in enumerate(out):
        out_new[new_index[a]] = {new_index[b] for b in targets}
    reach = _transitive_closure(out_new)
    perm: list[int] = []
    spans: list[tuple[int, int]] = []
    for comp in ordered:
        spans.append((len(perm), len(perm) + len(comp)))
        perm.extend(comp)
    order = frozenset(
        (a, b) for a in range(len(ordered)) for b in reach[a]
    )
    return BlockDecomposition(
        n=m.n,
        perm=tuple(perm),
        spans=tuple(spans),
        classes=tuple(ordered_classes),
        order=order,
        dependency=tuple(frozenset(reach[a]) for a in range(len(ordered))),
    )


def scc_blocks(m: ExactMatrix) -> BlockDecomposition:
    """Block decomposition into strongly connected components.

    The returned permutation makes the matrix lower block triangular, with
    blocks topologically ordered (flow sources first) and each block
    classified as primitive, power bounded, 1x1 zero/one, or imprimitive
    (the latter flags irreducible blocks of period >= 2 with growth, which
    must be removed by passing to a power).
    """
    adj = _successors(m)
    sccs = _tarjan_sccs(adj)
    classes = [_classify_scc(m, comp) for comp in sccs]
    return _build_decomposition(m, sccs, classes)


def is_primitive(m: ExactMatrix) -> bool:
    """True iff ``m`` is irreducible with period 1 and not the 1x1 zero
    matrix (equivalently some power up to the Wielandt bound is entrywise
    positive)."""
    if m.n == 1:
        return m.entries[0][0] > 0
    sccs = _tarjan_sccs(_successors(m))
    if len(sccs) != 1:
        return False
    return _scc_period(m, sccs[0]) == 1


def is_power_bounded(m: ExactMatrix) -> bool:
    """True iff the entries of all powers of ``m`` are uniformly bounded.

    Structural characterization: every SCC is a cyclic permutation (spectral
    radius 1) or a 1x1 zero block, and no flow path connects two distinct
    SCCs of spectral radius 1 (such a path forces linear growth).
    """
    dec = scc_blocks(m)
    rho_one = []
    for i, cls in enumerate(dec.classes):
        if cls in (BlockClass.PRIMITIVE, BlockClass.IMPRIMITIVE):
            return False
        members = dec.members(i)
        rho_one.append(
            cls is BlockClass.POWER_BOUNDED
            or (len(members) == 1 and m.entries[members[0]][members[0]] == 1)
        )
    return not any(
        rho_one[a] and rho_one[b] for (a, b) in dec.order
    )


def is_expanding(m: ExactMatrix) -> bool:
    """True iff no coordinate vector is mapped by a positive power of ``m``
    to itself or to zero; equivalently every coordinate reaches, in the
    condensation, an SCC with spectral radius > 1."""
    dec = scc_blocks(m)
    grows = [c in (BlockClass.PRIMITIVE, BlockClass.IMPRIMITIVE) for c in dec.classes]
    return all(
        grows[i] or any(grows[j] for j in dec.dependency[i])
        for i in range(dec.num_blocks)
    )


def _cyclic_classes(m: ExactMatrix, comp: tuple[int, ...], h: int) -> list[list[int]]:
    """Split an SCC of period ``h`` into its ``h`` cyclic classes."""
    members = set(comp)
    adj = {v: [] for v in comp}
    for j in comp:
        for i in range(m.n):
            if m.entries[i][j] > 0 and i in members:
                adj[j].append(i)
    level = {comp[0]: 0}
    queue = [comp[0]]
    while queue:
        nxt = []
        for u in queue:
            for v in adj[u]:
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        queue = nxt
    classes: list[list[int]] = [[] for _ in range(h)]
    for v in comp:
        classes[level[v] % h].append(v)
    for cls in classes:
        cls.sort()
    classes.sort(key=lambda c: c[0])
    return classes


def _frobenius_power(m: ExactMatrix, split_cyclic: bool) -> tuple[int, BlockDecomposition]:
    dec = scc_blocks(m)
    exponent = 1
    for i, cls in enumerate(dec.classes):
        members = dec.members(i)
        if cls is BlockClass.IMPRIMITIVE:
            exponent = math.lcm(exponent, _scc_period(m, list(members)))
        elif split_cyclic and cls is BlockClass.POWER_BOUNDED:
            exponent = math.lcm(exponent, len(members))
    mt = m.pow(exponent)
    blocks: list[list[int]] = []
    classes: list[BlockClass] = []
    for i, cls in enumerate(dec.classes):
        members = dec.members(i)
        if cls is BlockClass.IMPRIMITIVE:
            h = _scc_period(m, list(members))
            for part in _cyclic_classes(m, members, h):
                blocks.append(part)
                classes.append(BlockClass.PRIMITIVE)
        elif split_cyclic and cls is BlockClass.POWER_BOUNDED:
            # cyclic permutation block: the power fixes every vertex
            for v in sorted(members):
                blocks.append([v])
                classes.append(BlockClass.ZERO_ONE)
        else:
            blocks.append(sorted(members))
            classes.append(cls)
    return exponent, _build_decomposition(mt, blocks, classes)


def pb_frobenius_power(m: ExactMatrix) -> tuple[int, BlockDecomposition]:
    """Least exponent ``t`` (lcm of periods of the growing SCCs) such that
    ``m**t`` is in PB-Frobenius form, with the refined decomposition in
    which every imprimitive SCC splits into its cyclic classes."""
    return _frobenius_power(m, split_cyclic=False)


def primitive_frobenius_power(m: ExactMatrix) -> tuple[int, BlockDecomposition]:
    """Exponent (lcm of periods over all non-zero SCCs) such that ``m**t``
    is in primitive Frobenius form: every diagonal block primitive or a 1x1
    block with entry 0 or 1.  Outside PB blocks of the PB-Frobenius
    decomposition the partition is unchanged."""
    return _frobenius_power(m, split_cyclic=True)
