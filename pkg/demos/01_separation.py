# Which paths carry dependence, and which are blocked by what we condition on.
from causalsep import build_graph, classify_interior, d_separated, enumerate_paths, is_d_connected
from causalsep import figures, unblocked_ancestors


#%%
# Does caffeine influence GPA once courseload is held fixed?
g = build_graph(
    ["caffeine", "courseload", "GPA"],
    [("caffeine", "courseload"), ("courseload", "GPA")],
)
caffeine, courseload, gpa = g.id("caffeine"), g.id("courseload"), g.id("GPA")
print(d_separated(g, caffeine, gpa, []))
print(d_separated(g, caffeine, gpa, [courseload]))


#%%
# A collider behaves the other way round: conditioning on it opens the path.
col = figures.collider()
u, w, v = (col.id(x) for x in "uwv")
print(d_separated(col, u, v, []), d_separated(col, u, v, [w]))


#%%
# Every path between u and v in the larger example, with the role of each
# interior node and whether the path survives conditioning on {s, x}.
g6 = figures.partition_example()
Z = [g6.id("s"), g6.id("x")]
for p in enumerate_paths(g6, g6.id("u"), g6.id("v")):
    roles = {g6.names[k]: r.name.lower() for k, r in classify_interior(p, g6).items()}
    print(g6.labels(p.nodes), roles, is_d_connected(p, g6, Z))


#%%
# Nodes that can still push a value into u without passing through t.
g4 = figures.unblocked_ancestry()
print(g4.labels(unblocked_ancestors(g4, g4.id("u"), [g4.id("t")])))
