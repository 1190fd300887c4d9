"""Simple k-uniform hypergraphs, colourings and instance generators."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .rng import make_rng, substream_seed

DEFAULT_BUDGET_FACTOR = 1000


class FailedToGenerate(RuntimeError):
    """Raised when a generator exhausts its attempt budget."""


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n-1``.

    Edges are stored as sorted tuples; an edge's id is its position in
    ``edges``. ``incidence[v]`` lists the ids of the edges containing ``v``.
    """

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("n must be non-negative")
        if k < 2:
            raise ValueError("k must be at least 2")
        normalised = []
        seen = set()
        for idx, e in enumerate(edges):
            e = tuple(sorted(int(v) for v in e))
            if len(e) != k or len(set(e)) != k:
                raise ValueError(f"edge {idx} {e} is not a set of {k} distinct vertices")
            if e[0] < 0 or e[-1] >= n:
                raise ValueError(f"edge {idx} {e} has a vertex outside [0, {n})")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            normalised.append(e)
        inc: list[list[int]] = [[] for _ in range(n)]
        for idx, e in enumerate(normalised):
            for v in e:
                inc[v].append(idx)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "edges", tuple(normalised))
        object.__setattr__(self, "incidence", tuple(tuple(lst) for lst in inc))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(i) for i in self.incidence], dtype=np.int64)

    @property
    def max_degree(self) -> int:
        return max_degree(self)


@dataclass(frozen=True)
class Colouring:
    """An element of ``[q]^V``; colours are 1-based."""

    colours: tuple[int, ...]
    q: int

    def __init__(self, colours: Iterable[int], q: int):
        colours = tuple(int(c) for c in colours)
        if q < 1:
            raise ValueError("q must be positive")
        for v, c in enumerate(colours):
            if not 1 <= c <= q:
                raise ValueError(f"colour {c} of vertex {v} outside [1, {q}]")
        object.__setattr__(self, "colours", colours)
        object.__setattr__(self, "q", int(q))

    def __len__(self) -> int:
        return len(self.colours)

    def __getitem__(self, v: int) -> int:
        return self.colours[v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.colours, dtype=np.int64)


@dataclass(frozen=True)
class SimplicityReport:
    is_simple: bool
    violations: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class BlockedInstance:
    """A hypergraph together with a proper colouring admitting no Glauber move.

    ``blocks[i]`` holds the vertices of colour ``i + 1``; ``h1_edges[i]`` are
    the (k-1)-sets inside that block and ``f_maps[i]`` sends every vertex
    outside the block to one of them.
    """

    hypergraph: Hypergraph
    colouring: Colouring
    blocks: tuple[tuple[int, ...], ...]
    h1_edges: tuple[tuple[tuple[int, ...], ...], ...]
    f_maps: tuple[dict, ...]
    f2_edges: tuple[tuple[int, ...], ...] = ()
    rho: float = 0.0


def validate_simple(H: Hypergraph) -> SimplicityReport:
    """List every pair of distinct edges sharing two or more vertices."""
    owners: dict[tuple[int, int], list[int]] = {}
    for idx, e in enumerate(H.edges):
        for pair in itertools.combinations(e, 2):
            owners.setdefault(pair, []).append(idx)
    bad = set()
    for ids in owners.values():
        for a, b in itertools.combinations(ids, 2):
            bad.add((a, b))
    violations = tuple(sorted(bad))
    return SimplicityReport(is_simple=not violations, violations=violations)


def max_degree(H: Hypergraph) -> int:
    return max((len(i) for i in H.incidence), default=0)


def is_proper(H: Hypergraph, X: Colouring | Sequence[int]) -> bool:
    col = X.colours if isinstance(X, Colouring) else X
    return all(len({col[v] for v in e}) > 1 for e in H.edges)


def _pairs(e: Sequence[int]):
    return itertools.combinations(e, 2)


def generate_random_simple(
    n: int,
    k: int,
    target_m: int,
    max_deg: int,
    seed: int,
    budget_factor: int = DEFAULT_BUDGET_FACTOR,
) -> Hypergraph:
    """Random simple k-uniform hypergraph with ``target_m`` edges and degree <= ``max_deg``.

    Candidates are uniform k-subsets of the vertices that still have spare
    degree; a candidate is accepted iff no pair of its vertices already lies
    in an edge. When many consecutive candidates are rejected a random edge
    is dropped so that nearly regular targets can still be reached.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if target_m * math.comb(k, 2) > math.comb(n, 2) or target_m * k > n * max_deg:
        raise FailedToGenerate(
            f"no simple {k}-uniform hypergraph on {n} vertices has {target_m} edges "
            f"with max degree {max_deg}"
        )
    rng = make_rng(seed)
    budget = budget_factor * max(target_m, 1)
    stall_limit = 50 * max(n, 1)

    deg = [0] * n
    used_pairs: set[tuple[int, int]] = set()
    edges: list[tuple[int, ...]] = []
    open_vertices = [v for v in range(n) if max_deg > 0]
    attempts = stalls = 0
    while len(edges) < target_m:
        attempts += 1
        if attempts > budget:
            raise FailedToGenerate(
                f"gave up after {budget} attempts with {len(edges)}/{target_m} edges"
            )
        cand = tuple(sorted(rng.sample(open_vertices, k))) if len(open_vertices) >= k else None
        if cand is not None and not any(p in used_pairs for p in _pairs(cand)):
            edges.append(cand)
            used_pairs.update(_pairs(cand))
            for v in cand:
                deg[v] += 1
                if deg[v] == max_deg:
                    open_vertices.remove(v)
            stalls = 0
            continue
        stalls += 1
        if stalls > stall_limit and edges:
            j = rng.randrange(len(edges))
            dropped = edges[j]
            edges[j] = edges[-1]
            edges.pop()
            used_pairs.difference_update(_pairs(dropped))
            for v in dropped:
                if deg[v] == max_deg:
                    open_vertices.append(v)
                deg[v] -= 1
            stalls = 0
    return Hypergraph(n, k, edges)


def h1_inclusion_probability(m: int, q: int, k: int) -> float:
    """Starting edge density ``k^4 q / (m C(k-1,2) C(m-2,k-3))`` (capped at 1)."""
    denom = m * math.comb(k - 1, 2) * math.comb(m - 2, k - 3)
    if denom == 0:
        return 1.0
    return min(1.0, k**4 * q / denom)


def build_h1(
    m: int,
    q: int,
    k: int,
    seed: int,
    budget_factor: int = DEFAULT_BUDGET_FACTOR,
) -> Hypergraph:
    """Simple (k-1)-uniform hypergraph on ``m`` vertices with exactly ``q*m`` edges.

    Each (k-1)-set is kept with the probability of
    :func:`h1_inclusion_probability`; candidates are then visited in random
    order and dropped if they share a pair with an earlier survivor or would
    push a degree past ``2 k^4 q``. The first ``q*m`` survivors are returned.
    """
    r = k - 1
    if k < 3:
        raise ValueError("k must be at least 3 (H1 is (k-1)-uniform with k-1 >= 2)")
    target = q * m
    cap = 2 * k**4 * q
    if target * math.comb(r, 2) > math.comb(m, 2) or target * r > m * cap:
        raise FailedToGenerate(f"{target} simple {r}-sets do not fit on {m} vertices")
    p = h1_inclusion_probability(m, q, k)
    rng = make_rng(seed)
    attempts = max(1, budget_factor * target // max(math.comb(m, r), 1))
    for _ in range(attempts):
        cands = [e for e in itertools.combinations(range(m), r) if rng.random() < p]
        rng.shuffle(cands)
        used_pairs: set[tuple[int, int]] = set()
        deg = [0] * m
        kept = []
        for e in cands:
            if any(pr in used_pairs for pr in _pairs(e)) or any(deg[v] >= cap for v in e):
                continue
            kept.append(e)
            used_pairs.update(_pairs(e))
            for v in e:
                deg[v] += 1
            if len(kept) == target:
                return Hypergraph(m, r, kept)
    raise FailedToGenerate(f"could not reach {target} edges for H1 (m={m}, q={q}, k={k})")


def generate_blocked_instance(
    m: int,
    q: int,
    k: int,
    seed: int,
    augment: float | None = None,
    eps_k: float = 0.1,
    budget_factor: int = DEFAULT_BUDGET_FACTOR,
) -> BlockedInstance:
    """Hypergraph with a proper q-colouring from which no Glauber move is possible.

    Block ``i`` (vertices ``i*m .. i*m+m-1``) gets colour ``i+1`` and a
    relabelled copy of :func:`build_h1`. Every vertex ``x`` outside block
    ``i`` receives the edge ``{x} | f_i(x)`` with ``f_i(x)`` an unused
    (k-1)-set of block ``i``, so colour ``i+1`` is blocked at ``x``. The maps
    are built greedily against the set of already-covered vertex pairs; a
    dead end restarts with fresh randomness.

    With ``augment`` set, extra edges meeting each block at most once are
    added independently with probability ``augment * eps_k / (q*m)^(k-2)``,
    skipping any that would break simplicity.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    h1 = build_h1(m, q, k, substream_seed(seed, 0), budget_factor=budget_factor)
    blocks = tuple(tuple(range(i * m, (i + 1) * m)) for i in range(q))
    h1_edges = tuple(tuple(tuple(b[v] for v in e) for e in h1.edges) for b in blocks)
    colours = [i + 1 for i in range(q) for _ in range(m)]
    n = q * m

    rng = make_rng(seed, 1)
    for _ in range(budget_factor):
        result = _assign_blocking_edges(n, q, m, blocks, h1_edges, rng)
        if result is not None:
            break
    else:
        raise FailedToGenerate("could not find simple blocking maps f_i")
    f_maps, f1_edges, used_pairs = result

    f2_edges: list[tuple[int, ...]] = []
    rho = 0.0
    if augment is not None and k <= q:
        rho = min(1.0, augment * eps_k / (q * m) ** (k - 2))
        f2_edges = _sample_cross_edges(q, m, k, rho, used_pairs, make_rng(seed, 2))

    H = Hypergraph(n, k, f1_edges + f2_edges)
    inst = BlockedInstance(
        hypergraph=H,
        colouring=Colouring(colours, q),
        blocks=blocks,
        h1_edges=h1_edges,
        f_maps=tuple(f_maps),
        f2_edges=tuple(f2_edges),
        rho=rho,
    )
    _check_blocked(inst)
    return inst


def _assign_blocking_edges(n, q, m, blocks, h1_edges, rng: random.Random):
    used_pairs: set[tuple[int, int]] = set()
    f_maps: list[dict] = [dict() for _ in range(q)]
    free = [list(range(len(h1_edges[i]))) for i in range(q)]
    for fr in free:
        rng.shuffle(fr)
    jobs = [(x, i) for i in range(q) for x in range(n) if x // m != i]
    rng.shuffle(jobs)
    edges = []
    for x, i in jobs:
        chosen = None
        for pos, eid in enumerate(free[i]):
            e = tuple(sorted((x,) + h1_edges[i][eid]))
            if not any(pr in used_pairs for pr in _pairs(e)):
                chosen = pos, eid, e
                break
        if chosen is None:
            return None
        pos, eid, e = chosen
        free[i].pop(pos)
        f_maps[i][x] = h1_edges[i][eid]
        used_pairs.update(_pairs(e))
        edges.append(e)
    edges.sort()
    return f_maps, edges, used_pairs


def _sample_cross_edges(q, m, k, rho, used_pairs, rng: random.Random):
    block_sets = list(itertools.combinations(range(q), k))
    total = len(block_sets) * m**k
    count = int(np.random.default_rng(rng.getrandbits(64)).binomial(total, rho))
    out = []
    for idx in sorted(rng.sample(range(total), count)):
        bs, rest = divmod(idx, m**k)
        members = []
        for b in block_sets[bs]:
            rest, off = divmod(rest, m)
            members.append(b * m + off)
        e = tuple(sorted(members))
        if any(pr in used_pairs for pr in _pairs(e)):
            continue
        used_pairs.update(_pairs(e))
        out.append(e)
    return out


def _check_blocked(inst: BlockedInstance) -> None:
    H, X = inst.hypergraph, inst.colouring
    if not validate_simple(H).is_simple:
        raise FailedToGenerate("blocked instance is not simple")
    if not is_proper(H, X):
        raise FailedToGenerate("blocked colouring is not proper")
    for v in range(H.n):
        if available_set(H, X, v) != {X[v]}:
            raise FailedToGenerate(f"vertex {v} still has a Glauber move")


def blocked_set(H: Hypergraph, X: Colouring | Sequence[int], v: int) -> set[int]:
    """Colours c such that some edge through v is c on all its other vertices.

    Direct recomputation from the colouring; the chain state keeps a faster
    incremental version.
    """
    col = X.colours if isinstance(X, Colouring) else X
    out = set()
    for eid in H.incidence[v]:
        others = {col[u] for u in H.edges[eid] if u != v}
        if len(others) == 1:
            out.update(others)
    return out


def available_set(H: Hypergraph, X: Colouring, v: int) -> set[int]:
    return set(range(1, X.q + 1)) - blocked_set(H, X, v)

