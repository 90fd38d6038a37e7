"""Width bounds three ways: greedy, exact brute force, and a closed form.

Subdivisions of the complete graph K_d admit a contraction schedule whose
total (black plus red) degree never exceeds d-1, so their twin-width is at
most d-1; brute force confirms greedy is in the right ballpark on small
graphs.
"""

from stww import (
    exact_tww_bruteforce,
    gen_grid,
    gen_subdivided_clique,
    greedy_sequence,
    replay,
    subdivided_clique_sequence,
    verify,
)

# a 3x3 grid with alternating signs
grid = gen_grid(2, 3, signs="alternating")
greedy = greedy_sequence(grid, bipartite=False)
exact, witness = exact_tww_bruteforce(grid)
print(f"3x3 grid: greedy width {greedy.declared_width}, exact width {exact}")
assert verify(grid, witness).width == exact

# a subdivision of K_4: each of the six edges gets 0-2 extra vertices
graph, clique = gen_subdivided_clique(4, [1, 2, 0, 1, 2, 1])
seq = subdivided_clique_sequence(graph, clique)
d = len(clique)
worst = max(len(graph.neighbors(v)) for v in graph.vertices())
for step in replay(graph, seq):
    degrees = [len(step.after.neighbors(v)) for v in step.after.vertices()]
    worst = max(worst, max(degrees, default=0))
print(
    f"subdivided K_{d}: {graph.num_vertices} vertices, "
    f"schedule width {verify(graph, seq).width}, max total degree {worst} (≤ {d - 1})"
)
assert worst <= d - 1
