"""Brute-force ground truth over the full state space ``[q]^V``.

States are indexed little-endian in base q: ``sum_v (X(v) - 1) * q**v``, so
changing the colour of ``v`` is a digit substitution on the index. Everything
here is dense and vectorised over all ``q**n`` states, which is why it is
gated by a state budget.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .hypergraph import Colouring, Hypergraph, blocked_set

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ComponentReport:
    n_proper: int
    sizes: list[int]
    largest_fraction: float
    isolated: int

    def to_dict(self) -> dict:
        return {
            "n_proper": self.n_proper,
            "sizes": self.sizes,
            "largest_fraction": self.largest_fraction,
            "isolated": self.isolated,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _check_budget(n: int, q: int, budget: int) -> int:
    # compare in Python ints: q**n overflows int64 long before it is refused
    size = q**n
    if size > budget:
        raise BudgetExceeded(f"{q}^{n} = {size} states exceeds budget {budget}")
    return size


def encode(colours, q: int) -> int:
    return sum((int(c) - 1) * q**v for v, c in enumerate(colours))


def decode(index: int, n: int, q: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, d = divmod(index, q)
        out.append(d + 1)
    return tuple(out)


class GlauberOperator:
    """The Glauber transition kernel on ``[q]^V`` in vectorised form.

    ``digits[v]`` holds the 0-based colour of ``v`` in every state and
    ``blocked[v, c]`` marks the states in which colour ``c + 1`` is blocked at
    ``v``. ``avail[v]`` is ``|A(v, X)|`` per state.
    """

    def __init__(self, H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET):
        self.H = H
        self.q = q
        self.n = H.n
        self.size = _check_budget(H.n, q, budget)
        idx = np.arange(self.size, dtype=np.int64)
        self.powers = np.array([q**v for v in range(H.n)], dtype=np.int64)
        self.digits = np.empty((H.n, self.size), dtype=np.int8)
        for v in range(H.n):
            self.digits[v] = (idx // self.powers[v]) % q
        self.blocked = np.zeros((H.n, q, self.size), dtype=bool)
        for e in H.edges:
            for v in e:
                others = [u for u in e if u != v]
                first = self.digits[others[0]]
                mono = np.ones(self.size, dtype=bool)
                for u in others[1:]:
                    mono &= self.digits[u] == first
                for c in range(q):
                    self.blocked[v, c] |= mono & (first == c)
        self.avail = q - self.blocked.sum(axis=1)  # (n, size)
        self.mono_free = np.ones(self.size, dtype=bool)
        for e in H.edges:
            first = self.digits[e[0]]
            mono = np.ones(self.size, dtype=bool)
            for u in e[1:]:
                mono &= self.digits[u] == first
            self.mono_free &= ~mono

    @property
    def proper(self) -> np.ndarray:
        return self.mono_free

    def target(self, v: int, c: int) -> np.ndarray:
        """Index of the state with v recoloured to 0-based colour ``c``."""
        idx = np.arange(self.size, dtype=np.int64)
        return idx + (c - self.digits[v].astype(np.int64)) * self.powers[v]

    def step(self, pi: np.ndarray) -> np.ndarray:
        """Push ``pi`` through one Glauber step."""
        if pi.shape != (self.size,):
            raise ValueError(f"distribution has shape {pi.shape}, expected ({self.size},)")
        n = self.n
        out = np.zeros(self.size)
        if n == 0:
            return pi.copy()
        for v in range(n):
            a = self.avail[v]
            stuck = a == 0
            out[stuck] += pi[stuck] / n
            w = np.where(stuck, 0.0, pi / (n * np.maximum(a, 1)))
            for c in range(self.q):
                ok = ~self.blocked[v, c]
                out += np.bincount(self.target(v, c)[ok], weights=w[ok], minlength=self.size)
        return out

    def adjacency(self) -> coo_matrix:
        """Edges of the move graph on proper colourings (moves that change a colour)."""
        rows, cols = [], []
        proper = self.proper
        for v in range(self.n):
            for c in range(self.q):
                ok = proper & ~self.blocked[v, c] & (self.digits[v] != c)
                src = np.flatnonzero(ok)
                rows.append(src)
                cols.append(self.target(v, c)[src])
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
        return coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(self.size, self.size))


@lru_cache(maxsize=16)
def _operator(H: Hypergraph, q: int, budget: int) -> GlauberOperator:
    return GlauberOperator(H, q, budget)


def operator(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> GlauberOperator:
    _check_budget(H.n, q, budget)
    return _operator(H, q, budget)


def count_proper(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> int:
    return int(operator(H, q, budget).proper.sum())


def enumerate_proper(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All proper colourings as an ``(count, n)`` array of 1-based colours."""
    op = operator(H, q, budget)
    idx = np.flatnonzero(op.proper)
    return (op.digits[:, idx].T + 1).astype(np.int64)


def uniform_on_omega(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    size = _check_budget(H.n, q, budget)
    return np.full(size, 1.0 / size)


def uniform_on_proper(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    proper = operator(H, q, budget).proper
    return proper / proper.sum()


def point_mass(H: Hypergraph, q: int, X, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    size = _check_budget(H.n, q, budget)
    pi = np.zeros(size)
    pi[encode(X.colours if isinstance(X, Colouring) else X, q)] = 1.0
    return pi


def transition_step_exact(
    H: Hypergraph, q: int, pi: np.ndarray, budget: int = DEFAULT_BUDGET
) -> np.ndarray:
    return operator(H, q, budget).step(np.asarray(pi, dtype=float))


def tv_distance(p: np.ndarray, r: np.ndarray) -> float:
    return 0.5 * math.fsum(np.abs(np.asarray(p, float) - np.asarray(r, float)))


def tv_to_uniform_proper(
    H: Hypergraph, q: int, pi: np.ndarray, budget: int = DEFAULT_BUDGET
) -> float:
    return tv_distance(pi, uniform_on_proper(H, q, budget))


def mixing_profile(
    H: Hypergraph, q: int, T: int, budget: int = DEFAULT_BUDGET, start: np.ndarray | None = None
) -> list[tuple[int, float]]:
    """``(t, TV(pi_t, uniform proper))`` for t = 0..T, from uniform on ``[q]^V`` by default."""
    op = operator(H, q, budget)
    target = uniform_on_proper(H, q, budget)
    pi = uniform_on_omega(H, q, budget) if start is None else np.asarray(start, float)
    out = [(0, tv_distance(pi, target))]
    for t in range(1, T + 1):
        pi = op.step(pi)
        out.append((t, tv_distance(pi, target)))
    return out


def component_labels(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET):
    """Connected components of the move graph on proper colourings.

    Returns ``(labels, proper_mask)``; labels of improper states are
    meaningless.
    """
    op = operator(H, q, budget)
    adj = op.adjacency().tocsr()
    asym = adj - adj.T
    if asym.count_nonzero():
        raise AssertionError("move graph is not symmetric")
    _, labels = connected_components(adj, directed=False)
    return labels, op.proper


def gamma_q_components(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> ComponentReport:
    labels, proper = component_labels(H, q, budget)
    n_proper = int(proper.sum())
    if n_proper == 0:
        return ComponentReport(0, [], 0.0, 0)
    sizes = np.bincount(labels[proper])
    sizes = sorted((int(s) for s in sizes if s), reverse=True)
    return ComponentReport(
        n_proper=n_proper,
        sizes=sizes,
        largest_fraction=sizes[0] / n_proper,
        isolated=sum(1 for s in sizes if s == 1),
    )


def gamma_q_degree(H: Hypergraph, X: Colouring) -> int:
    """Degree of ``X`` in the move graph, computed locally (no enumeration)."""
    return sum(X.q - len(blocked_set(H, X, v)) - 1 for v in range(H.n))


def stationarity_check(H: Hypergraph, q: int, budget: int = DEFAULT_BUDGET) -> float:
    """Max entry change of the uniform law on any component after one exact step.

    Moves from a proper colouring stay inside its component, so pushing the
    indicator of all proper states through one step yields, at each proper
    ``Y``, the inflow from ``Y``'s own component. The uniform law on a
    component ``C`` changes at ``Y`` by ``|inflow(Y) - 1| / |C|``. Any inflow
    to an improper state would be mass leaving a component and is an error.
    """
    op = operator(H, q, budget)
    labels, proper = component_labels(H, q, budget)
    inflow = op.step(proper.astype(float))
    leaked = inflow[~proper]
    if leaked.size and leaked.max() != 0.0:
        raise AssertionError(f"mass {leaked.sum()} leaves the proper colourings")
    if not proper.any():
        return 0.0
    sizes = np.bincount(labels[proper], minlength=labels.max() + 1)
    dev = np.abs(inflow[proper] - 1.0) / sizes[labels[proper]]
    return float(dev.max())


def write_profile_csv(profile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,tv\n")
        for t, tv in profile:
            fh.write(f"{t},{tv!r}\n")
