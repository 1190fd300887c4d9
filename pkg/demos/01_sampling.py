# Sampling proper colourings of a random 3-uniform hypergraph with Glauber dynamics.
#
# The instance has 200 vertices and 1600 edges, and every vertex has degree 24.
# We use q = 48 colours. A step picks a vertex and recolours it uniformly from
# the colours that would not complete a monochromatic edge.

from hypercolour import check_conditions, generate_random_simple, init_chain, run
from hypercolour.rng import substream_seed

H = generate_random_simple(200, 3, 1600, 24, seed=1)
q = 48
print(f"n={H.n} m={H.m} max degree={H.max_degree}")

# The regime checks: q must not exceed 2*Delta, q^k must beat K*n*Delta, and so on.
rep = check_conditions(H.n, H.k, q, H.max_degree, K=10, delta=0.05)
for name, c in rep.checks.items():
    print(f"  {name:4s} {'ok  ' if c.passed else 'FAIL'} {c.lhs} vs {c.rhs}")
print("run length t_delta =", rep.t_delta)

# A uniform-random start is usually improper. Watch the monochromatic edges vanish.
state = init_chain(H, q, seed=substream_seed(1, 0))
print("monochromatic edges at t=0:", state.mono)
summary = run(state, rep.t_delta, checkpoint_every=400)
for t, ok in summary.proper_trace:
    print(f"  t={t:5d} proper={ok}")
print(f"moves={summary.moves} self-loops={summary.self_loops}")

# Repeating from independent seeds gives an estimate of the proper rate at t_delta.
proper = 0
R = 50
for r in range(R):
    s = init_chain(H, q, seed=substream_seed(1, r + 1))
    run(s, rep.t_delta)
    proper += s.is_proper()
print(f"proper after t_delta steps: {proper}/{R}")
print("expected monochromatic edges in a uniform colouring:", round(H.m / q ** (H.k - 1), 2))
print("t* = e^(q/400k) =", round(rep.t_star, 4), "which is far below t_delta at this size")
