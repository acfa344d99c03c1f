"""Dealing and reconstruction, end to end.

A dealer shares a secret for an access structure; any qualified subset
that can *prove* it is qualified (an NP witness) reconstructs exactly;
unqualified subsets get nothing.  The Hamiltonian structure is the
motivating example: parties are edge slots of a complete graph, and a
subset is qualified iff its edges contain a Hamiltonian cycle - a
predicate with no known efficient monotone circuit, but an easy witness.
"""

from npshare import (
    PartySet,
    Stream,
    edge_index,
    hamiltonian_structure,
    recon,
    setup,
    shares_of,
    threshold_structure,
)

rng = Stream(2026)

print("=== threshold 2-of-3 ===")
structure = threshold_structure(3, 2)
dealing = setup(structure, b"attack at dawn", rng)
print(f"dealt {len(dealing.shares)} shares; every share carries the same ciphertext")

X = PartySet.of(3, {1, 3})
print("parties {1,3} reconstruct:", recon(shares_of(dealing, X), X, None))

lonely = PartySet.of(3, {2})
print("party {2} alone gets:   ", recon(shares_of(dealing, lonely), lonely, None))

print()
print("=== Hamiltonian structure on K4 (6 edge-slot parties) ===")
ham = hamiltonian_structure(4)
dealing = setup(ham, b"tour de graphe", rng)

cycle = (1, 2, 3, 4)
cycle_edges = {edge_index(4, cycle[i], cycle[(i + 1) % 4]) for i in range(4)}
X = PartySet.of(6, cycle_edges)
print(f"edge parties {sorted(cycle_edges)} hold a Hamiltonian cycle")
print("with the cycle as witness:", recon(shares_of(dealing, X), X, cycle))

wrong_witness = (1, 3, 2, 4)  # a cycle, but not one inside X
print("with a wrong witness:     ", recon(shares_of(dealing, X), X, wrong_witness))

path = PartySet.of(6, {edge_index(4, 1, 2), edge_index(4, 2, 3), edge_index(4, 3, 4)})
print("a path (unqualified):     ", recon(shares_of(dealing, path), path, cycle))
