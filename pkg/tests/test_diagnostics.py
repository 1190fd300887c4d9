import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolour import (
    Colouring,
    Hypergraph,
    check_conditions,
    epsilon_sequence,
    generate_random_simple,
    goodness,
    goodness_trace,
    init_chain,
    run,
    y_counts,
)
from hypercolour.diagnostics import (
    colouring_goodness,
    mixing_time_bound,
    persistence_horizon,
    y_matrix,
)
from hypercolour.glauber import y_table


class TestEpsilonSequence:
    def test_k3(self):
        assert epsilon_sequence(3).values == (Fraction(1, 24),)

    def test_k4(self):
        assert epsilon_sequence(4).values == (Fraction(1, 32), Fraction(1, 2048))

    @pytest.mark.parametrize("k", [3, 4, 5, 7])
    def test_recurrence(self, k):
        eps = epsilon_sequence(k)
        assert len(eps) == k - 2
        assert eps.values[0] == Fraction(1, 8 * k)
        for a, b in zip(eps.values, eps.values[1:]):
            assert b == a / (16 * k)

    def test_k2_rejected(self):
        with pytest.raises(ValueError):
            epsilon_sequence(2)

    def test_threshold(self):
        assert epsilon_sequence(3).threshold(1, 48) == 2
        assert epsilon_sequence(3).threshold(1, 48, scale=2) == 4


class TestYCounts:
    def test_single_edge(self, single_edge):
        s = init_chain(single_edge, 2, [1, 1, 2], seed=0)
        assert y_counts(s, 0) == [0, 1]
        assert y_counts(s, 2) == [1, 0]

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32), q=st.integers(2, 6), k=st.integers(3, 5))
    def test_sum_is_degree_and_matches_recount(self, seed, q, k):
        H = generate_random_simple(30, k, 20, 5, seed)
        s = init_chain(H, q, seed=seed)
        ref = y_table(H, s.colours)
        for v in range(H.n):
            y = y_counts(s, v)
            assert sum(y) == H.degree(v)
            assert y == ref[v][1:]

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32), q=st.integers(2, 5))
    def test_blocked_count_at_most_y1(self, seed, q):
        H = generate_random_simple(20, 3, 25, 6, seed)
        s = init_chain(H, q, seed=seed)
        for v in range(H.n):
            assert len(s.blocked(v)) <= y_counts(s, v)[0]

    def test_blocked_count_strictly_below_y1(self):
        # both edges through 0 are mono-blocked on colour 2
        H = Hypergraph(5, 3, [(0, 1, 2), (0, 3, 4)])
        s = init_chain(H, 2, [1, 2, 2, 2, 2], seed=0)
        assert s.blocked(0) == {2}
        assert y_counts(s, 0)[0] == 2

    def test_matrix_tracked_and_untracked_agree(self, desk):
        a = init_chain(desk, 48, seed=3, track_y=True)
        run(a, 3000)
        b = init_chain(desk, 48, a.colouring, seed=0)
        assert np.array_equal(y_matrix(a), y_matrix(b))


class TestGoodness:
    def test_edgeless(self):
        H = Hypergraph(6, 3, [])
        for scale in (1, 2):
            rep = goodness(init_chain(H, 3, seed=0), scale)
            assert rep.is_good and rep.b_max == 0

    def test_single_edge_bad(self, single_edge):
        rep = goodness(init_chain(single_edge, 2, [1, 1, 2], seed=0))
        assert rep.verdict == "bad"
        (w,) = rep.witnesses
        assert (w.v, w.i, w.y, w.threshold) == (2, 1, 1, Fraction(2, 24))
        assert rep.b_max == 1

    def test_boundary_is_exact(self):
        # q=48, k=3: eps_1 q = 2 exactly, so y = 2 is bad and y = 1 is good
        H = Hypergraph(5, 3, [(0, 1, 2), (0, 3, 4)])
        bad = goodness(init_chain(H, 48, [1, 2, 2, 3, 3], seed=0))
        assert [(w.v, w.y) for w in bad.witnesses] == [(0, 2)]
        good = goodness(init_chain(H, 48, [1, 2, 2, 3, 4], seed=0))
        assert good.is_good

    def test_scale_must_be_1_or_2(self, single_edge):
        with pytest.raises(ValueError):
            goodness(init_chain(single_edge, 2, seed=0), 3)

    def test_k4_uses_two_indices(self):
        H = generate_random_simple(40, 4, 30, 4, seed=1)
        rep = goodness(init_chain(H, 5, seed=1))
        assert rep.y.shape == (40, 3)
        assert {w.i for w in rep.witnesses} <= {1, 2}

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32), q=st.integers(20, 120))
    def test_scale_one_implies_scale_two(self, seed, q):
        H = generate_random_simple(40, 3, 80, 8, seed)
        s = init_chain(H, q, seed=seed)
        one, two = goodness(s, 1), goodness(s, 2)
        if one.is_good:
            assert two.is_good
        assert len(two.witnesses) <= len(one.witnesses)

    def test_json(self, single_edge):
        d = json.loads(colouring_goodness(single_edge, Colouring([1, 1, 2], 2)).to_json())
        assert set(d) == {"scale", "verdict", "witnesses", "b_max", "y_max_per_i"}
        assert d["y_max_per_i"] == [1, 1]
        assert d["witnesses"][0]["threshold"] == "1/12"


class TestCheckConditions:
    def test_all_hold(self):
        rep = check_conditions(30, 3, 8, 4, 4, 0.05)
        assert {name: c.passed for name, c in rep.checks.items()} == {
            "qd": True,
            "qk": True,
            "del": True,
            "lll": True,
        }
        assert (rep.checks["qk"].lhs, rep.checks["qk"].rhs) == (512, 480)
        assert rep.lll_value == Fraction(3, 4)
        assert rep.verdict == "all conditions hold"

    def test_defer(self):
        rep = check_conditions(30, 3, 10, 4, 4, 0.05)
        assert not rep.checks["qd"].passed
        assert rep.verdict == "defer to Jerrum regime"

    def test_desk_qk(self):
        rep = check_conditions(200, 3, 48, 24, 10, 0.05)
        assert rep.checks["qk"].passed
        assert (rep.checks["qk"].lhs, rep.checks["qk"].rhs) == (110592, 48000)
        assert rep.t_delta == 3595

    def test_del_boundary_exact(self):
        # 16^3 = 4096 = 8^4: equality must pass for k=3
        assert check_conditions(8, 3, 32, 16, 1, 0.5).checks["del"].passed
        assert not check_conditions(8, 3, 34, 17, 1, 0.5).checks["del"].passed
        assert check_conditions(5, 4, 50, 25, 1, 0.5).checks["del"].passed
        assert not check_conditions(5, 4, 52, 26, 1, 0.5).checks["del"].passed

    def test_lll_strict(self):
        # 4 * 3 * 3 / 36 = 1 is not < 1
        assert not check_conditions(30, 3, 6, 3, 1, 0.1).checks["lll"].passed

    def test_derived_quantities(self):
        rep = check_conditions(30, 3, 8, 4, "4", 0.05)
        assert rep.t_star == pytest.approx(math.exp(8 / 1200))
        assert rep.t_delta == math.ceil(60 * math.log(1200)) == mixing_time_bound(30, 0.05)
        assert rep.delta_floor == pytest.approx(60 * math.exp(-rep.t_star / 60))
        assert rep.dependency_degree == 12
        assert rep.edge_bad_probability == Fraction(1, 64)
        assert rep.t0 == persistence_horizon(30, 3, 8, 4)

    def test_fractional_K(self):
        assert check_conditions(30, 3, 8, 4, "4.5", 0.05).checks["qk"].passed is False
        assert check_conditions(30, 3, 8, 4, Fraction(32, 15), 0.05).checks["qk"].passed

    @pytest.mark.parametrize("delta", [0, 1, -0.5, 2])
    def test_bad_delta(self, delta):
        with pytest.raises(ValueError):
            check_conditions(30, 3, 8, 4, 4, delta)

    def test_dict_round_trip(self):
        d = json.loads(json.dumps(check_conditions(30, 3, 8, 4, 4, 0.05).to_dict()))
        assert d["inputs"]["K"] == "4" and d["verdict"] == "all conditions hold"


class TestGoodnessTrace:
    def test_edgeless_all_zero(self):
        H = Hypergraph(10, 3, [])
        tr = goodness_trace(H, 5, "uniform-random", 500, 100, seed=1)
        assert tr.times == [0, 100, 200, 300, 400, 500]
        assert all(z == [0] for z in tr.z_increase)
        assert not tr.breached and tr.always_good2

    def test_blocked_constant(self, blocked):
        tr = goodness_trace(blocked.hypergraph, 3, blocked.colouring, 5000, 1000, seed=2)
        assert all(z == tr.z_increase[0] == [0] for z in tr.z_increase)
        assert len(set(tr.good2)) == 1

    def test_explicit_checkpoints(self, three_edges):
        tr = goodness_trace(three_edges, 3, "uniform-random", 50, [7, 3, 99, 50], seed=0)
        assert tr.times == [0, 3, 7, 50]

    def test_t_must_be_positive(self, three_edges):
        with pytest.raises(ValueError):
            goodness_trace(three_edges, 3, "uniform-random", 0, 1, seed=0)

    def test_incremental_matches_scratch(self):
        H = generate_random_simple(80, 4, 80, 6, seed=7)
        q = 6
        X0 = init_chain(H, q, seed=7).colouring
        tr = goodness_trace(H, q, X0, 2000, 500, seed=8)
        # replay the same chain and recount y from scratch at each checkpoint
        s = init_chain(H, q, X0, seed=8)
        z0 = np.cumsum(np.array(y_table(H, s.colours))[:, 1:-1], axis=1)
        t = 0
        for t_ck, inc in zip(tr.times, tr.z_increase):
            run(s, t_ck - t)
            t = t_ck
            z = np.cumsum(np.array(y_table(H, s.colours))[:, 1:-1], axis=1)
            assert list((z - z0).max(axis=0)) == inc

    def test_good_start_stays_good(self):
        # q large enough that eps-good starts are typical: eps_1 q = 4
        H = generate_random_simple(60, 3, 240, 12, seed=2)
        T = mixing_time_bound(60, 0.05)
        ok = 0
        runs = 0
        for s in range(10):
            st0 = init_chain(H, 96, seed=s)
            if not goodness(st0).is_good:
                continue
            runs += 1
            tr = goodness_trace(H, 96, st0.colouring, T, 100, seed=s + 1000)
            ok += not tr.breached and tr.always_good2
        assert runs >= 5 and ok / runs >= 0.95

    def test_csv_and_dict(self, tmp_path, three_edges):
        tr = goodness_trace(three_edges, 3, "uniform-random", 30, 10, seed=0)
        tr.write_csv(tmp_path / "trace.csv")
        lines = (tmp_path / "trace.csv").read_text().splitlines()
        assert lines[0] == "t,z_increase_1,good2,breach"
        assert len(lines) == 5
        d = tr.to_dict()
        assert [c["t"] for c in d["checkpoints"]] == [0, 10, 20, 30]
