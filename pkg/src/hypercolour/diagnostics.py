"""Goodness statistics, parameter-regime checks and goodness-persistence traces.

For a vertex ``v`` and ``1 <= i <= k-1``, ``y[v, i]`` counts the edges through
``v`` whose other ``k-1`` vertices use exactly ``i`` colours. A colouring is
bad at scale ``s`` if ``y[v, i] >= s * eps_i * q**i`` for some ``v`` and some
``i <= k-2``, where ``eps_1 = 1/(8k)`` and ``eps_{i+1} = eps_i / (16k)``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .glauber import ChainState, init_chain
from .hypergraph import Colouring, Hypergraph


@dataclass(frozen=True)
class EpsilonSequence:
    k: int
    values: tuple[Fraction, ...]

    def threshold(self, i: int, q: int, scale: int = 1) -> Fraction:
        """``scale * eps_i * q**i`` for 1-based ``i``."""
        return scale * self.values[i - 1] * q**i

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Witness:
    v: int
    i: int
    y: int
    threshold: Fraction


@dataclass
class GoodnessReport:
    scale: int
    q: int
    y: np.ndarray  # shape (n, k-1); column i-1 holds y[v, i]
    witnesses: list[Witness]
    b_max: int

    @property
    def is_good(self) -> bool:
        return not self.witnesses

    @property
    def verdict(self) -> str:
        return "good" if self.is_good else "bad"

    @property
    def y_max_per_i(self) -> list[int]:
        if self.y.size == 0:
            return [0] * self.y.shape[1]
        return [int(c) for c in self.y.max(axis=0)]

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "verdict": self.verdict,
            "witnesses": [
                {"v": w.v, "i": w.i, "y": w.y, "threshold": str(w.threshold)}
                for w in self.witnesses
            ],
            "b_max": self.b_max,
            "y_max_per_i": self.y_max_per_i,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class Check:
    passed: bool
    lhs: object
    rhs: object


@dataclass
class ConditionReport:
    n: int
    k: int
    q: int
    max_degree: int
    K: Fraction
    delta: float
    checks: dict[str, Check]
    lll_value: Fraction
    dependency_degree: int  # k * Delta, bound on the local-lemma dependency degree
    edge_bad_probability: Fraction  # 1 / q^(k-1)
    t_star: float
    t_delta: int
    delta_floor: float
    t0: float | None

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def verdict(self) -> str:
        if not self.checks["qd"].passed:
            return "defer to Jerrum regime"
        return "all conditions hold" if self.all_passed else "conditions fail"

    def to_dict(self) -> dict:
        return {
            "inputs": {
                "n": self.n,
                "k": self.k,
                "q": self.q,
                "max_degree": self.max_degree,
                "K": str(self.K),
                "delta": self.delta,
            },
            "checks": {
                name: {"passed": c.passed, "lhs": str(c.lhs), "rhs": str(c.rhs)}
                for name, c in self.checks.items()
            },
            "verdict": self.verdict,
            "lll_value": float(self.lll_value),
            "dependency_degree": self.dependency_degree,
            "edge_bad_probability": str(self.edge_bad_probability),
            "t_star": self.t_star,
            "t_delta": self.t_delta,
            "delta_floor": self.delta_floor,
            "t0": self.t0,
        }


@dataclass
class PersistenceTrace:
    """Per-checkpoint growth of the cumulative counts ``z[v, i] = y[v, 1] + ... + y[v, i]``."""

    q: int
    eps: EpsilonSequence
    times: list[int] = field(default_factory=list)
    z_increase: list[list[int]] = field(default_factory=list)  # per checkpoint, per i = 1..k-2
    good2: list[bool] = field(default_factory=list)
    t0: float | None = None

    @property
    def thresholds(self) -> list[Fraction]:
        return [self.eps.threshold(i, self.q) for i in range(1, len(self.eps) + 1)]

    @property
    def breaches(self) -> list[bool]:
        th = self.thresholds
        return [any(z >= t for z, t in zip(row, th)) for row in self.z_increase]

    @property
    def breached(self) -> bool:
        return any(self.breaches)

    @property
    def always_good2(self) -> bool:
        return all(self.good2)

    def to_dict(self) -> dict:
        return {
            "thresholds": [str(t) for t in self.thresholds],
            "t0": self.t0,
            "breached": self.breached,
            "checkpoints": [
                {"t": t, "z_increase": z, "good2": g, "breach": b}
                for t, z, g, b in zip(self.times, self.z_increase, self.good2, self.breaches)
            ],
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"z_increase_{i}" for i in range(1, len(self.eps) + 1)] + ["good2", "breach"])
            for t, z, g, b in zip(self.times, self.z_increase, self.good2, self.breaches):
                w.writerow([t, *z, int(g), int(b)])


def epsilon_sequence(k: int) -> EpsilonSequence:
    if k < 3:
        raise ValueError("the epsilon sequence needs k >= 3 (indices 1..k-2)")
    vals = [Fraction(1, 8 * k)]
    while len(vals) < k - 2:
        vals.append(vals[-1] / (16 * k))
    return EpsilonSequence(k, tuple(vals))


def y_counts(state: ChainState, v: int) -> list[int]:
    """``[y[v, 1], ..., y[v, k-1]]`` from the per-edge colour counts."""
    q1 = state.q + 1
    x = state.colours[v]
    y = [0] * state.k
    for eid in state.H.incidence[v]:
        d = state.distinct[eid]
        if state.counts[eid * q1 + x] == 1:
            d -= 1
        y[d] += 1
    return y[1:]


def y_matrix(state: ChainState) -> np.ndarray:
    if state.y is not None:
        return np.array([row[1:] for row in state.y], dtype=np.int64).reshape(state.n, state.k - 1)
    return np.array([y_counts(state, v) for v in range(state.n)], dtype=np.int64).reshape(
        state.n, state.k - 1
    )


def goodness(state: ChainState, scale: int = 1) -> GoodnessReport:
    """Classify the colouring as eps-good (``scale=1``) or 2eps-good (``scale=2``)."""
    if scale not in (1, 2):
        raise ValueError("scale must be 1 or 2")
    eps = epsilon_sequence(state.k)
    y = y_matrix(state)
    witnesses = []
    for i in range(1, state.k - 1):
        th = eps.threshold(i, state.q, scale)
        # y is integral, so y >= th  <=>  y >= ceil(th)
        cut = math.ceil(th)
        for v in np.flatnonzero(y[:, i - 1] >= cut):
            witnesses.append(Witness(int(v), i, int(y[v, i - 1]), th))
    b_max = int(y[:, 0].max()) if y.size else 0
    return GoodnessReport(scale=scale, q=state.q, y=y, witnesses=witnesses, b_max=b_max)


def colouring_goodness(H: Hypergraph, X: Colouring, scale: int = 1) -> GoodnessReport:
    return goodness(init_chain(H, X.q, X, seed=0), scale)


def _n_pow_4_3_bound(n: int, d: int) -> bool:
    # d <= n^(4/3)  <=>  d^3 <= n^4
    return d**3 <= n**4


def persistence_horizon(n: int, k: int, q: int, max_deg: int) -> float | None:
    """``t0 = 1/2 min(eps_{k-2} (1 - 2 eps) q^(k-1) n / (e k D), q n / (2e))``."""
    if k < 3 or max_deg == 0:
        return None
    eps = epsilon_sequence(k)
    e1 = float(eps.values[0])
    ek2 = float(eps.values[-1])
    a = ek2 * (1 - 2 * e1) * q ** (k - 1) * n / (math.e * k * max_deg)
    b = q * n / (2 * math.e)
    return 0.5 * min(a, b)


def check_conditions(n: int, k: int, q: int, max_deg: int, K, delta: float) -> ConditionReport:
    """Evaluate the mixing theorem's hypotheses and derived run lengths.

    Inequalities are decided in exact arithmetic; ``K`` may be an int,
    Fraction or decimal string.
    """
    if min(n, k, q) <= 0 or max_deg < 0:
        raise ValueError("n, k, q must be positive and max_deg non-negative")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    K = Fraction(K) if not isinstance(K, float) else Fraction(str(K))
    checks = {
        "qd": Check(q <= 2 * max_deg, q, 2 * max_deg),
        "qk": Check(q**k >= K * n * max_deg, q**k, K * n * max_deg),
    }
    if k == 3:
        checks["del"] = Check(_n_pow_4_3_bound(n, max_deg), max_deg, f"{n}^(4/3)")
    else:
        checks["del"] = Check(max_deg <= n**2, max_deg, n**2)
    lll = Fraction(4 * k * max_deg, q ** (k - 1))
    checks["lll"] = Check(lll < 1, lll, 1)

    t_star = math.exp(q / (400 * k))
    t_delta = math.ceil(2 * n * math.log(2 * n / delta))
    delta_floor = 2 * n * math.exp(-t_star / (2 * n))
    return ConditionReport(
        n=n,
        k=k,
        q=q,
        max_degree=max_deg,
        K=K,
        delta=delta,
        checks=checks,
        lll_value=lll,
        dependency_degree=k * max_deg,
        edge_bad_probability=Fraction(1, q ** (k - 1)),
        t_star=t_star,
        t_delta=t_delta,
        delta_floor=delta_floor,
        t0=persistence_horizon(n, k, q, max_deg) if k >= 3 else None,
    )


def mixing_time_bound(n: int, delta: float) -> int:
    """``ceil(2 n log(2n / delta))``."""
    return math.ceil(2 * n * math.log(2 * n / delta))


def _z_rows(state: ChainState) -> np.ndarray:
    y = np.array([row[1:-1] for row in state.y], dtype=np.int64).reshape(state.n, state.k - 2)
    return np.cumsum(y, axis=1)


def _good2(state: ChainState, cuts: Sequence[int]) -> bool:
    for row in state.y:
        for i, cut in enumerate(cuts, start=1):
            if row[i] >= cut:
                return False
    return True


def goodness_trace(
    H: Hypergraph,
    q: int,
    X0: Colouring | Sequence[int] | str,
    T: int,
    checkpoints: int | Iterable[int],
    seed: int,
) -> PersistenceTrace:
    """Run the chain for ``T`` steps and record, at each checkpoint, the largest
    growth ``max_v z[v, i, t] - z[v, i, 0]`` for ``i = 1..k-2`` and whether the
    colouring is still 2eps-good.

    ``checkpoints`` is either a spacing or an explicit list of times; time 0
    is always recorded.
    """
    if T < 1:
        raise ValueError("T must be at least 1")
    eps = epsilon_sequence(H.k)
    if isinstance(checkpoints, int):
        if checkpoints < 1:
            raise ValueError("checkpoint spacing must be positive")
        times = set(range(0, T + 1, checkpoints)) | {T}
    else:
        times = {int(t) for t in checkpoints if 0 <= t <= T} | {0}
    times = sorted(times)
    state = init_chain(H, q, X0, seed, track_y=True)
    cuts = [math.ceil(eps.threshold(i, q, 2)) for i in range(1, H.k - 1)]
    trace = PersistenceTrace(q=q, eps=eps, t0=persistence_horizon(H.n, H.k, q, H.max_degree))
    z0 = _z_rows(state)
    step = state._step
    t = 0
    for target in times:
        while t < target:
            step()
            t += 1
        inc = (_z_rows(state) - z0).max(axis=0) if H.n else np.zeros(H.k - 2, dtype=np.int64)
        trace.times.append(t)
        trace.z_increase.append([int(x) for x in inc])
        trace.good2.append(_good2(state, cuts))
    return trace
