"""Walk through one pair: three lower bounds, the exact distance, the edit
path, and the threshold question on either side of the optimum."""
from gedsearch import unit_costs
from gedsearch.bb import extract_edit_path, ilp_solve
from gedsearch.bounds import bm_bound, fori_lp_bound, ls_bound
from gedsearch.instances import worked_example_pair
from gedsearch.model import add_threshold, build_fori

g, h = worked_example_pair()
c = unit_costs()

print(f"G: {g.n} nodes {g.node_labels}, edges {list(g.edges)}")
print(f"H: {h.n} nodes {h.node_labels}, edges {list(h.edges)}")

for res in (ls_bound(g, h, c), bm_bound(g, h, c), fori_lp_bound(g, h, c, exact=True)):
    print(f"{res.algorithm:>7} lower bound: {res.value:g}")

model = build_fori(g, h, c)
sol = ilp_solve(model)
print(f"exact GED: {sol.objective:g} ({sol.node_count} branch-and-bound nodes)")
for op in extract_edit_path(model, sol):
    print(f"  {op.kind:<13} {op.source!s:>8} -> {op.target!s:<8} cost {op.cost:g}")

for tau in (4, 5):
    status = ilp_solve(add_threshold(model, tau), "feasibility").status
    print(f"edit path of cost <= {tau}? {status.value}")
