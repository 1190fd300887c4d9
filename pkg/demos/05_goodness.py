# How typical are "good" colourings?
#
# y[v, i] counts the edges through v whose other vertices use exactly i
# colours. A colouring is eps-good when y[v, i] < eps_i * q^i for all v and
# i <= k-2, with eps_1 = 1/(8k). For k = 3 only i = 1 matters, and the
# threshold is q/24.

from math import ceil

from scipy.stats import binom

from hypercolour import epsilon_sequence, generate_random_simple, goodness, goodness_trace, init_chain
from hypercolour.diagnostics import mixing_time_bound

H = generate_random_simple(200, 3, 1600, 24, seed=1)
eps = epsilon_sequence(3)
print("eps:", [str(e) for e in eps.values])

for q in (48, 96, 192):
    th1 = eps.threshold(1, q)
    th2 = eps.threshold(1, q, scale=2)
    good = good2 = 0
    for s in range(200):
        st = init_chain(H, q, seed=s)
        good += goodness(st, 1).is_good
        good2 += goodness(st, 2).is_good
    # in a uniform colouring each edge through v is monochromatic off v w.p. 1/q
    tail = binom.sf(ceil(th1) - 1, 24, 1 / q)
    print(
        f"q={q:3d}: threshold {float(th1):.1f}, eps-good {good / 2:.0f}%, "
        f"2eps-good {good2 / 2:.0f}%, per-vertex P(y >= threshold) = {tail:.4f}"
    )

# With q = 96 good starts are typical; follow one through t_delta steps.
q = 96
T = mixing_time_bound(H.n, 0.05)
X0 = init_chain(H, q, seed=3)
print("start eps-good:", goodness(X0).is_good)
tr = goodness_trace(H, q, X0.colouring, T, 500, seed=4)
for row in tr.to_dict()["checkpoints"]:
    print(f"  t={row['t']:5d} max z increase={row['z_increase']} 2eps-good={row['good2']}")
print("threshold", [str(t) for t in tr.thresholds], "breached:", tr.breached)
