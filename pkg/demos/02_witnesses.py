# From a d-connected path to a concrete world where perturbing u moves v,
# and back again.
from causalsep import check_witness, evaluate, extract_d_connected_path, figures, find_clean_connection
from causalsep import build_g_path, build_partition, build_witness_sequence, semantic_separation_search


#%%
g = figures.partition_example()
u, v = g.id("u"), g.id("v")
Z = [g.id("s"), g.id("x")]
AZ = {g.id("s"): 0, g.id("x"): 0}

cc = find_clean_connection(g, u, v, Z)
part = build_partition(g, cc, Z, AZ)
print(g.labels(cc.path.nodes))
print(part.show(g))


#%%
# Node functions that copy values along the path, and a sequence that flips
# the path's sources one at a time.
f = build_g_path(g, part, AZ)
w = build_witness_sequence(g, part, 0, 1)
for U in w.sequence:
    vals = evaluate(g, f, U)
    print({g.names[k]: vals[k] for k in g.nodes})


#%%
verdict = check_witness(g, f, u, v, AZ, w)
print(verdict)


#%%
# Reading a d-connected path back out of the witness.
print(g.labels(extract_d_connected_path(g, u, v, Z, AZ, f, w).nodes))


#%%
# On small graphs the semantic side can be decided by brute force: every
# boolean world, every legal sequence.
col = figures.collider()
for cond in ([], [col.id("w")]):
    res = semantic_separation_search(col, col.id("u"), col.id("v"), cond)
    print(cond, res.separated)
