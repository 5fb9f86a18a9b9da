"""Similarity search over a seeded synthetic dataset: how many graphs each
filter stage removes as the threshold grows, and a check against brute
force."""
from gedsearch.instances import synthetic_dataset
from gedsearch.search import SearchConfig, fori_sim, naive_filter

dataset, queries = synthetic_dataset(seed=7, size=30, n_queries=1)
q = queries[0]
print(f"query {q.name}: {q.n} nodes, {q.m} edges; dataset of {len(dataset)} graphs")
print("tau  LS  BM  LP  THR  accepted  matches oracle")
for tau in range(1, 9):
    rep = fori_sim(q, dataset, SearchConfig(tau))
    n = rep.counts
    same = rep.accepted == naive_filter(q, dataset, tau)
    print(f"{tau:3d} {n['LS']:3d} {n['BM']:3d} {n['FORILP']:3d} {n['THR']:4d} {n['accepted']:9d}  {same}")
