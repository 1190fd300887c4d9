# A proper colouring that the chain can never leave.
#
# The construction splits the vertices into q blocks of m, colours block i
# with colour i, and adds edges so that every vertex sees each other colour
# completed by some edge. Then A(v, X) = {X(v)} everywhere and X is a fixed
# point, so the chain is not ergodic on proper colourings.

from hypercolour import (
    coalescence_run,
    gamma_q_degree,
    generate_blocked_instance,
    init_chain,
    run,
    validate_simple,
)

inst = generate_blocked_instance(7, 3, 3, seed=1)
H, X = inst.hypergraph, inst.colouring
print(f"n={H.n} m={H.m} simple={validate_simple(H).is_simple}")
print("colouring:", X.colours)

state = init_chain(H, 3, X, seed=0)
print("available sets:", {v: state.available(v) for v in range(6)}, "...")
run(state, 100_000)
print("unchanged after 10^5 steps:", tuple(state.colours) == X.colours)
print("degree in the move graph:", gamma_q_degree(H, X))

# A coupled pair started at X and at a random colouring never meets:
# the X chain is frozen, and the other chain almost never lands exactly on X.
res = coalescence_run(H, 3, 1, 2, 3, 20_000, start_x=X)
print("coalesced:", res.coalesced, "after", res.steps_run, "steps")

# Optional extra cross-block edges at density rho keep the colouring frozen.
aug = generate_blocked_instance(7, 3, 3, seed=4, augment=30.0)
print(f"augmented: rho={aug.rho:.4f}, {len(aug.f2_edges)} extra edges, m={aug.hypergraph.m}")
