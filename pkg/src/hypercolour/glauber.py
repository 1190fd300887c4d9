"""Glauber dynamics for proper colourings of a k-uniform hypergraph.

One step picks a uniform vertex ``v`` and recolours it with a colour drawn
uniformly from ``A(v, X)``: the colours that would not make any edge through
``v`` monochromatic. If ``A(v, X)`` is empty the step is a self-loop.

:class:`ChainState` keeps, for every edge, the number of its vertices of each
colour and the number of distinct colours it sees. That is enough to decide
in O(deg v) which colours are blocked at ``v``, so a step never rescans the
colouring.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .hypergraph import Colouring, Hypergraph
from .rng import make_rng

UNIFORM_RANDOM = "uniform-random"


@dataclass(frozen=True)
class StepRecord:
    t: int
    v: int
    avail_size: int
    colour: int
    old_colour: int


@dataclass(frozen=True)
class CoupledStepRecord:
    t: int
    v: int
    avail_x: int
    avail_y: int
    agreed: bool
    hamming: int


@dataclass
class RunSummary:
    state: "ChainState"
    steps: int
    moves: int
    self_loops: int
    proper_trace: list[tuple[int, bool]]


@dataclass(frozen=True)
class CoalescenceResult:
    coalesced: bool
    time: int | None
    steps_run: int
    hamming_series: tuple[int, ...] = ()


class ChainState:
    """Current colouring of a Glauber chain plus per-edge colour counts.

    ``counts`` is a flat list indexed by ``edge * (q + 1) + colour``;
    ``distinct[e]`` is the number of nonzero entries of edge ``e``'s row. With
    ``track_y=True`` the state also maintains ``y[v][i]``, the number of edges
    through ``v`` whose other vertices use exactly ``i`` colours.
    """

    def __init__(
        self,
        H: Hypergraph,
        q: int,
        colours: Sequence[int],
        rng: random.Random,
        track_y: bool = False,
    ):
        if q < 2:
            raise ValueError("q must be at least 2")
        if len(colours) != H.n:
            raise ValueError(f"colouring has length {len(colours)}, hypergraph has {H.n} vertices")
        for v, c in enumerate(colours):
            if not 1 <= c <= q:
                raise ValueError(f"colour {c} of vertex {v} outside [1, {q}]")
        self.H = H
        self.q = q
        self.k = H.k
        self.n = H.n
        self.rng = rng
        self.t = 0
        self.colours = [int(c) for c in colours]
        # (edge id, some other vertex of that edge) for each vertex
        self._nbr = [
            [(eid, next(u for u in H.edges[eid] if u != v)) for eid in H.incidence[v]]
            for v in range(H.n)
        ]
        self.counts, self.distinct = recount(H, q, self.colours)
        self.mono = sum(1 for d in self.distinct if d == 1)
        self.track_y = track_y
        self.y = y_table(H, self.colours) if track_y else None

    @property
    def colouring(self) -> Colouring:
        return Colouring(self.colours, self.q)

    def is_proper(self) -> bool:
        return self.mono == 0

    def copy(self, rng: random.Random | None = None) -> "ChainState":
        other = ChainState.__new__(ChainState)
        other.__dict__.update(self.__dict__)
        other.colours = list(self.colours)
        other.counts = list(self.counts)
        other.distinct = list(self.distinct)
        other.y = [list(r) for r in self.y] if self.y is not None else None
        other.rng = rng if rng is not None else random.Random()
        if rng is None:
            other.rng.setstate(self.rng.getstate())
        return other

    def blocked(self, v: int) -> set[int]:
        """``B_v``: colours c with some edge through v coloured c off v."""
        col = self.colours
        counts = self.counts
        distinct = self.distinct
        q1 = self.q + 1
        x = col[v]
        out = set()
        for eid, u in self._nbr[v]:
            d = distinct[eid]
            if d == 1:
                out.add(x)
            elif d == 2 and counts[eid * q1 + x] == 1:
                out.add(col[u])
        return out

    def available(self, v: int) -> list[int]:
        B = self.blocked(v)
        return [c for c in range(1, self.q + 1) if c not in B]

    def set_colour(self, v: int, c: int) -> None:
        """Recolour ``v`` and update all bookkeeping in O(k deg v)."""
        if not 1 <= c <= self.q:
            raise ValueError(f"colour {c} outside [1, {self.q}]")
        if c != self.colours[v]:
            self._recolour(v, c)

    def _recolour(self, v: int, c: int) -> None:
        col = self.colours
        counts = self.counts
        distinct = self.distinct
        q1 = self.q + 1
        old = col[v]
        y = self.y
        edges = self.H.edges
        for eid in self.H.incidence[v]:
            if y is not None:
                e = edges[eid]
                before = [distinct[eid] - (counts[eid * q1 + col[u]] == 1) for u in e]
            d0 = distinct[eid]
            i = eid * q1 + old
            counts[i] -= 1
            if counts[i] == 0:
                distinct[eid] -= 1
            j = eid * q1 + c
            if counts[j] == 0:
                distinct[eid] += 1
            counts[j] += 1
            d1 = distinct[eid]
            if d0 == 1:
                self.mono -= 1
            if d1 == 1:
                self.mono += 1
            if y is not None:
                for u, b in zip(e, before):
                    if u == v:
                        continue
                    a = d1 - (counts[eid * q1 + col[u]] == 1)
                    if a != b:
                        y[u][b] -= 1
                        y[u][a] += 1
        col[v] = c

    def _step(self) -> tuple[int, int, int, int]:
        rng = self.rng
        q = self.q
        v = rng.randrange(self.n)
        B = self.blocked(v)
        a = q - len(B)
        old = self.colours[v]
        if a == 0:
            new = old
        elif 2 * len(B) <= q:
            new = rng.randrange(q) + 1
            while new in B:
                new = rng.randrange(q) + 1
        else:
            A = [c for c in range(1, q + 1) if c not in B]
            new = A[rng.randrange(a)]
        if new != old:
            self._recolour(v, new)
        self.t += 1
        return v, a, new, old


def recount(H: Hypergraph, q: int, colours: Sequence[int]) -> tuple[list[int], list[int]]:
    """Per-edge colour counts and distinct-colour counts, computed from scratch."""
    q1 = q + 1
    counts = [0] * (H.m * q1)
    distinct = [0] * H.m
    for eid, e in enumerate(H.edges):
        for u in e:
            counts[eid * q1 + colours[u]] += 1
        distinct[eid] = len({colours[u] for u in e})
    return counts, distinct


def y_table(H: Hypergraph, colours: Sequence[int]) -> list[list[int]]:
    """``y[v][i]`` for i in 0..k-1 by direct recount (index 0 is always zero)."""
    y = [[0] * H.k for _ in range(H.n)]
    for e in H.edges:
        for v in e:
            i = len({colours[u] for u in e if u != v})
            y[v][i] += 1
    return y


def init_chain(
    H: Hypergraph,
    q: int,
    start: Colouring | Sequence[int] | str = UNIFORM_RANDOM,
    seed: int | random.Random | None = None,
    track_y: bool = False,
) -> ChainState:
    """Build a chain state; ``"uniform-random"`` colours each vertex uniformly from [1, q]."""
    if q < 2:
        raise ValueError("q must be at least 2")
    rng = make_rng(seed)
    if isinstance(start, str):
        if start != UNIFORM_RANDOM:
            raise ValueError(f"unknown start {start!r}")
        colours = [rng.randrange(q) + 1 for _ in range(H.n)]
    else:
        if isinstance(start, Colouring):
            if start.q != q:
                raise ValueError(f"start colouring uses q={start.q}, chain has q={q}")
            colours = list(start.colours)
        else:
            colours = list(start)
    return ChainState(H, q, colours, rng, track_y=track_y)


def blocked_colours(state: ChainState, v: int) -> set[int]:
    return state.blocked(v)


def available_colours(state: ChainState, v: int) -> set[int]:
    return set(state.available(v))


def glauber_step(state: ChainState) -> StepRecord:
    t = state.t
    v, a, new, old = state._step()
    return StepRecord(t=t, v=v, avail_size=a, colour=new, old_colour=old)


def trajectory(state: ChainState, T: int) -> Iterator[StepRecord]:
    for _ in range(T):
        yield glauber_step(state)


def run(state: ChainState, T: int, checkpoint_every: int | None = None) -> RunSummary:
    """Apply ``T`` Glauber steps; record properness every ``checkpoint_every`` steps."""
    if T < 0:
        raise ValueError("T must be non-negative")
    moves = loops = 0
    trace = [(state.t, state.is_proper())]
    step = state._step
    for s in range(1, T + 1):
        _, a, new, old = step()
        if a == 0:
            loops += 1
        elif new != old:
            moves += 1
        if checkpoint_every and s % checkpoint_every == 0:
            trace.append((state.t, state.is_proper()))
    if not trace or trace[-1][0] != state.t:
        trace.append((state.t, state.is_proper()))
    return RunSummary(state=state, steps=T, moves=moves, self_loops=loops, proper_trace=trace)


def write_trajectory(records, path) -> None:
    """CSV log of :class:`StepRecord` or :class:`CoupledStepRecord` rows."""
    records = list(records)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if records and isinstance(records[0], CoupledStepRecord):
            w.writerow(["t", "v", "avail_x", "avail_y", "agreed", "hamming"])
            for r in records:
                w.writerow([r.t, r.v, r.avail_x, r.avail_y, int(r.agreed), r.hamming])
        else:
            w.writerow(["t", "v", "old_colour", "new_colour", "avail_size"])
            for r in records:
                w.writerow([r.t, r.v, r.old_colour, r.colour, r.avail_size])


def hamming(X, Y) -> int:
    if isinstance(X, Colouring) and isinstance(Y, Colouring) and X.q != Y.q:
        raise ValueError("colourings use different q")
    a = X.colours if isinstance(X, (Colouring, ChainState)) else X
    b = Y.colours if isinstance(Y, (Colouring, ChainState)) else Y
    if len(a) != len(b):
        raise ValueError(f"colourings have different lengths ({len(a)} vs {len(b)})")
    return sum(1 for s, t in zip(a, b) if s != t)


# -- maximal coupling of Uniform(A_X) and Uniform(A_Y) ------------------------


def coupling_table(
    AX: Sequence[int], AY: Sequence[int], x_cur: int, y_cur: int
) -> dict[tuple[int, int], Fraction]:
    """Exact joint law of the new colours ``(c_X, c_Y)`` under the coupling.

    With probability ``|I| / max(|A_X|, |A_Y|)`` (``I`` the intersection) both
    chains take the same colour, uniform on ``I``; otherwise each draws
    independently from its residual law. An empty set means that chain keeps
    its current colour.
    """
    AX, AY = sorted(AX), sorted(AY)
    table: dict[tuple[int, int], Fraction] = {}

    def add(cx, cy, p):
        if p:
            table[(cx, cy)] = table.get((cx, cy), Fraction(0)) + p

    if not AX or not AY:
        xs = [(c, Fraction(1, len(AX))) for c in AX] if AX else [(x_cur, Fraction(1))]
        ys = [(c, Fraction(1, len(AY))) for c in AY] if AY else [(y_cur, Fraction(1))]
        for cx, px in xs:
            for cy, py in ys:
                add(cx, cy, px * py)
        return table

    a, b = len(AX), len(AY)
    big = max(a, b)
    inter = [c for c in AX if c in set(AY)]
    overlap = Fraction(len(inter), big)
    for c in inter:
        add(c, c, Fraction(1, big))
    if overlap == 1:
        return table
    rx = _residual(AX, set(inter), a, big)
    ry = _residual(AY, set(inter), b, big)
    for cx, px in rx:
        for cy, py in ry:
            add(cx, cy, (1 - overlap) * px * py)
    return table


def _residual(A, inter, size, big):
    # integer weights proportional to 1/size - [c in I]/big
    weights = [(c, big - size if c in inter else big) for c in A]
    total = sum(w for _, w in weights)
    return [(c, Fraction(w, total)) for c, w in weights if w]


def _draw_residual(A, inter, size, big, rng: random.Random) -> int:
    r = rng.randrange(size * (big - len(inter)))
    for c in A:
        r -= big - size if c in inter else big
        if r < 0:
            return c
    raise AssertionError("residual draw fell off the end")


def draw_coupled_colours(
    AX: Sequence[int],
    AY: Sequence[int],
    shared: random.Random,
    aux_x: random.Random,
    aux_y: random.Random,
) -> tuple[int | None, int | None]:
    """Sample ``(c_X, c_Y)`` from :func:`coupling_table`; ``None`` marks an empty set.

    ``AX`` and ``AY`` must be sorted. The overlap branch uses ``shared``; the
    residual draws use the per-chain streams.
    """
    a, b = len(AX), len(AY)
    if a == 0 or b == 0:
        cx = AX[aux_x.randrange(a)] if a else None
        cy = AY[aux_y.randrange(b)] if b else None
        return cx, cy
    if a == b and AX == AY:
        c = AX[shared.randrange(a)]
        return c, c
    big = max(a, b)
    sy = set(AY)
    inter = [c for c in AX if c in sy]
    r = shared.randrange(big)
    if r < len(inter):
        c = inter[r]
        return c, c
    iset = set(inter)
    return (
        _draw_residual(AX, iset, a, big, aux_x),
        _draw_residual(AY, iset, b, big, aux_y),
    )


class CoupledPair:
    """Two chains on the same hypergraph driven by the vertex-sharing maximal coupling.

    ``shared`` picks the vertex and runs the overlap branch; each chain's own
    ``rng`` serves as its residual stream.
    """

    def __init__(self, x: ChainState, y: ChainState, shared: random.Random):
        if x.H is not y.H and x.H != y.H:
            raise ValueError("coupled chains must share the hypergraph")
        if x.q != y.q:
            raise ValueError("coupled chains must share q")
        self.x = x
        self.y = y
        self.shared = shared
        self.t = 0
        self.h = hamming(x.colours, y.colours)

    def step(self) -> CoupledStepRecord:
        x, y = self.x, self.y
        v = self.shared.randrange(x.n)
        AX = x.available(v)
        AY = y.available(v)
        cx, cy = draw_coupled_colours(AX, AY, self.shared, x.rng, y.rng)
        before = x.colours[v] != y.colours[v]
        if cx is not None and cx != x.colours[v]:
            x._recolour(v, cx)
        if cy is not None and cy != y.colours[v]:
            y._recolour(v, cy)
        x.t += 1
        y.t += 1
        after = x.colours[v] != y.colours[v]
        self.h += after - before
        rec = CoupledStepRecord(
            t=self.t,
            v=v,
            avail_x=len(AX),
            avail_y=len(AY),
            agreed=cx is not None and cx == cy,
            hamming=self.h,
        )
        self.t += 1
        return rec


def coupled_step(pair: CoupledPair) -> CoupledStepRecord:
    return pair.step()


def expected_hamming_one_step(X: ChainState, Y: ChainState) -> Fraction:
    """Exact ``E[h(X', Y') | X, Y]`` for one coupled step.

    Averages over the n vertex choices; for each, the disagreement
    probability at that vertex is read off :func:`coupling_table`.
    """
    if X.n != Y.n or X.q != Y.q:
        raise ValueError("states must share n and q")
    n = X.n
    if n == 0:
        return Fraction(0)
    h = hamming(X.colours, Y.colours)
    total = Fraction(0)
    for v in range(n):
        differs = X.colours[v] != Y.colours[v]
        total += h - differs
        AX = X.available(v)
        AY = Y.available(v)
        if AX and AX == AY:
            continue
        table = coupling_table(AX, AY, X.colours[v], Y.colours[v])
        total += sum(p for (cx, cy), p in table.items() if cx != cy)
    return total / n


def coalescence_run(
    H: Hypergraph,
    q: int,
    seed_x: int,
    seed_y: int,
    seed_shared: int,
    max_t: int,
    start_x: Colouring | Sequence[int] | str = UNIFORM_RANDOM,
    start_y: Colouring | Sequence[int] | str = UNIFORM_RANDOM,
    record_every: int | None = None,
) -> CoalescenceResult:
    """Run a coupled pair until the colourings agree or ``max_t`` steps pass."""
    if max_t < 0:
        raise ValueError("max_t must be non-negative")
    pair = CoupledPair(
        init_chain(H, q, start_x, seed_x),
        init_chain(H, q, start_y, seed_y),
        make_rng(seed_shared),
    )
    series = [pair.h] if record_every else []
    t = 0
    while pair.h and t < max_t:
        pair.step()
        t += 1
        if record_every and t % record_every == 0:
            series.append(pair.h)
    if pair.h == 0:
        return CoalescenceResult(True, t, t, tuple(series))
    return CoalescenceResult(False, None, t, tuple(series))
