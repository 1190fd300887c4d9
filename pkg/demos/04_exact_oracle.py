# Exact computations on tiny instances.
#
# With q^n states small enough to enumerate, the chain's law after t steps
# can be computed exactly and compared with the uniform law on proper
# colourings. The move graph between proper colourings can also be built
# and split into connected components.

from hypercolour import (
    Hypergraph,
    count_proper,
    gamma_q_components,
    generate_random_simple,
    mixing_profile,
    stationarity_check,
)

edge = Hypergraph(3, 3, [(0, 1, 2)])
print("single edge, q=2: proper colourings =", count_proper(edge, 2))
print("  TV profile:", [round(tv, 6) for _, tv in mixing_profile(edge, 2, 3)])
print("  components:", gamma_q_components(edge, 2).sizes)

three = Hypergraph(9, 3, [(0, 1, 2), (3, 4, 5), (6, 7, 8)])
prof = mixing_profile(three, 3, 200)
print("three disjoint edges, q=3: proper colourings =", count_proper(three, 3))
for t in (0, 1, 5, 10, 20, 50, 100, 200):
    print(f"  t={t:3d} TV={prof[t][1]:.3e}")
print("  stationarity deviation:", stationarity_check(three, 3))

# A frozen instance: a triangle with 3 colours. Every proper colouring is isolated.
tri = Hypergraph(3, 2, [(0, 1), (0, 2), (1, 2)])
print("triangle, q=3:", gamma_q_components(tri, 3).to_dict())

# Random small instances usually have one giant component.
for seed in range(3):
    H = generate_random_simple(12, 3, 6, 3, seed)
    rep = gamma_q_components(H, 3)
    print(f"random n=12 seed={seed}: {rep.n_proper} proper, largest fraction {rep.largest_fraction:.4f}")
