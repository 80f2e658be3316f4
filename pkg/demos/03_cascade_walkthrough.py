"""Walkthrough: one cascade, step by step, in exact arithmetic.

Two nodes joined by an edge, both with capacity 1.6; dissipation g = 1/2.
Four grains land on node 0. A node strictly over capacity topples: it blows
away g, sends one grain to its neighbor, and both updates happen
synchronously when several nodes topple at once. Exact fractions make every
comparison reproducible.
"""

import warnings
from fractions import Fraction

from sandnet import Graph, SandpileState, SimulationConfig, run_cascade, simulate

warnings.filterwarnings("ignore", message="grains=.*is small")

F = Fraction
g = F(1, 2)
k = [F("1.6"), F("1.6")]
graph = Graph(2, [(0, 1)])

state = SandpileState.zeros(2, exact=True)
print("drop grains on node 0, settling after each one:")
for grain in range(4):
    state.sand[0] += 1
    state.drops += 1
    outcome = run_cascade(state, graph, k, g)
    sands = ", ".join(str(s) for s in state.sand)
    print(f"  grain {grain}: {outcome.topples} topples in {outcome.steps} steps"
          f" -> sand [{sands}], tallies {state.topples.tolist()}")

total = sum(state.sand)
print(f"\nconservation: dropped {state.drops}, toppled {int(state.topples.sum())} times,"
      f" each topple blew away {g}")
print(f"  sand remaining = {state.drops} - {g} * {int(state.topples.sum())} = {total}")
assert total == state.drops - g * int(state.topples.sum())

# the same four drops through the driver, which also records the running totals
result = simulate(
    SimulationConfig(
        graph=graph, capacities=tuple(k), dissipation=g, grains=4,
        drops=(0, 0, 0, 0), arithmetic="exact",
    )
)
print("\ncumulative topples after each grain:", result.ntnt_series.tolist())
print("final sand:", [str(s) for s in result.final_sand])
