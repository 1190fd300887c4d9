# Coupling two chains and measuring how fast they meet.
#
# Both chains pick the same vertex. Their new colours are drawn from a
# maximal coupling of the two uniform laws on the available sets, so they
# agree with probability |A_X & A_Y| / max(|A_X|, |A_Y|).

from fractions import Fraction

import numpy as np

from hypercolour import (
    coalescence_run,
    expected_hamming_one_step,
    generate_random_simple,
    goodness,
    init_chain,
    run,
)
from hypercolour.glauber import coupling_table
from hypercolour.rng import substream_seed

print("joint law for A_X={1,2}, A_Y={2,3}:")
for (cx, cy), p in sorted(coupling_table([1, 2], [2, 3], 1, 1).items()):
    print(f"  ({cx},{cy}) {p}")

H = generate_random_simple(200, 3, 1600, 24, seed=1)
q = 48

# Coalescence times from independent uniform starts.
times = []
for r in range(20):
    res = coalescence_run(
        H, q, substream_seed(3, r, 0), substream_seed(3, r, 1), substream_seed(3, r, 2), 20_000
    )
    times.append(res.time)
print("coalescence times:", times)
print("median:", int(np.median(times)))

# One-step contraction at distance one, computed exactly.
X = init_chain(H, q, seed=11)
run(X, 3595)
print("X proper:", X.is_proper(), "2eps-good:", goodness(X, 2).is_good)
v = 0
c = next(c for c in X.available(v) if c != X.colours[v])
Y = X.copy()
Y.set_colour(v, c)
e = expected_hamming_one_step(X, Y)
print(f"E[h'] = {float(e):.6f}  (1 - 1/2n = {1 - 1 / (2 * H.n)})")
print("exact value has denominator", Fraction(e).denominator)

# The Hamming distance along one coupled run.
res = coalescence_run(H, q, 5, 6, 7, 20_000, record_every=100)
print("h every 100 steps:", list(res.hamming_series))
