"""Star vs. cycle: the LP bound grows like 2n-5 while the branch bound
only reaches n-2.  Prints the exact values and the dual prices that prove
the LP value."""
from gedsearch import unit_costs
from gedsearch.bounds import bm_bound, fori_lp_bound
from gedsearch.graph import star_cycle_instance
from gedsearch.instances import star_cycle_dual
from gedsearch.lp import check_dual_certificate, dual_objective
from gedsearch.model import build_fori

c = unit_costs()
print(" n  LP  BM  dual certifies")
for n in range(3, 13):
    g, h = star_cycle_instance(n)
    model = build_fori(g, h, c)
    lp = fori_lp_bound(g, h, c, exact=True, model=model)
    prices = star_cycle_dual(model)
    value, _ = dual_objective(model, prices)
    ok = check_dual_certificate(model, None, prices) and value == lp.exact
    print(f"{n:2d} {lp.exact!s:>3} {bm_bound(g, h, c).exact!s:>3}  {ok}")
