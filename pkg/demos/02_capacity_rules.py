"""Walkthrough: spreading the network capacity K over nodes by degree power.

k_i = K * deg_i^P / sum_j deg_j^P. P=1 tracks degree, P=0 is uniform,
negative P inverts the relationship. A node survives its own topple only if
k_i >= deg_i + g, and this demo shows why the closed-form minimum-K formula
is advisory rather than sufficient: on a star with P=-1 it happily approves
a K that starves the hub.
"""

from fractions import Fraction

from sandnet import (
    Graph,
    capacities,
    feasible_min_capacity,
    min_capacity_bound,
    validate_capacities,
)

g = Fraction(1, 10)
star = Graph(4, [(0, 1), (0, 2), (0, 3)])
print("star graph: hub 0 with three leaves, degrees", star.degrees.tolist())

print("\nshares of K=24 across exponents:")
for P in (-2, -1, 0, 1, 2):
    k = capacities(star, 24, P, exact=True)
    print(f"  P={P:+d}: k = {[str(v) for v in k]}")

print("\nfeasibility at g = 1/10 (needs k_i >= deg_i + g):")
for K, P in ((24, 2), (10, -1)):
    k = capacities(star, K, P, exact=True)
    report = validate_capacities(star, k, g)
    verdict = "pass" if report.ok else report.describe()
    print(f"  K={K}, P={P:+d}: {verdict}")

print("\nthe advisory bound vs the sharp one, P=-1:")
advisory = min_capacity_bound(star, -1, g)
sharp = feasible_min_capacity(star, -1, g)
print(f"  closed-form minimum K : {advisory} (= {float(advisory):.4f})")
print(f"  sharp per-node minimum: {sharp} (= {float(sharp):.4f})")

k = capacities(star, advisory, -1, exact=True)
report = validate_capacities(star, k, g)
print(f"  at the closed-form K the hub gets k = {k[0]} "
      f"against a requirement of {Fraction(3) + g} -> {'pass' if report.ok else 'FAIL'}")
print("  conclusion: always run the per-node check; the formula alone can approve"
      " an infeasible configuration.")
