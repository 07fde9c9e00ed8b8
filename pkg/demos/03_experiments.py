# Testing a causal hypothesis by intervening on a world we cannot inspect.
from causalsep import CopyUnobserved, GraphFunction, Outcome, Rule, SimulatedWorld, build_graph
from causalsep import falsify_single_condition

names = ["caffeine", "courseload", "GPA"]
hypothesis = build_graph(names, [("caffeine", "courseload"), ("courseload", "GPA")])
parity = Rule(lambda e, ps: (e + sum(ps)) % 2)


#%%
# The real world secretly has a direct caffeine -> GPA effect.
truth = build_graph(names, [("caffeine", "courseload"), ("courseload", "GPA"), ("caffeine", "GPA")])
world = SimulatedWorld(truth, GraphFunction([CopyUnobserved(), parity, parity]), {0: 0, 1: 0, 2: 0})

# Give the student caffeine, then put courseload back where it was.
verdict = falsify_single_condition(world, hypothesis, 0, 2, 1, catalyst={0: 1}, repair={1: 1})
for action, values in verdict.trace:
    print(action, values)
print(verdict.outcome)


#%%
# Without the hidden edge the same experiment cannot refute the hypothesis.
faithful = build_graph(names, [("caffeine", "courseload"), ("courseload", "GPA")])
world = SimulatedWorld(faithful, GraphFunction([CopyUnobserved(), parity, parity]), {0: 0, 1: 0, 2: 0})
print(falsify_single_condition(world, hypothesis, 0, 2, 1, catalyst={0: 1}, repair={1: 1}).outcome is Outcome.CONSISTENT)
