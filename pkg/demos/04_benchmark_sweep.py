"""Timing the solvers across matrix sizes and watching iteration telemetry.

The sweep times each solver on random matrices per size; brute force rows
above its guard are reported as skipped rather than fabricated. The
iteration profile shows how the polynomial solver needs more adjustment
rounds as the matching gets more ambiguous.
"""

from sepmatch import iteration_profile, reports_to_csv, sweep_solvers

reports = sweep_solvers([5, 10, 15, 20], trials=10, seed=0)

print(f"{'solver':<11} {'C':>3} {'median':>10} {'p95':>10} {'mean iters':>12}  note")
for r in reports:
    if r.skipped:
        print(f"{r.solver:<11} {r.c:>3} {'-':>10} {'-':>10} {'-':>12}  {r.skipped}")
    else:
        print(
            f"{r.solver:<11} {r.c:>3} {r.median_ns / 1e6:>8.3f}ms {r.p95_ns / 1e6:>8.3f}ms "
            f"{r.mean_iterations:>12.1f}"
        )

print("\nfactorial column (what an exhaustive matcher faces):")
for r in reports:
    if r.solver == "bruteforce":
        print(f"  C={r.c:>2}: {r.permutation_count:,} permutations"
              + ("  [skipped]" if r.skipped else ""))

# Difficulty 0 plants the optimum on the diagonal: zero adjustment rounds.
# Fully random matrices need the most work, and bigger C needs more still.
print("\nadjustment rounds vs difficulty:")
for c in (5, 20):
    points = iteration_profile([0.0, 0.25, 0.5, 0.75, 1.0], c=c, trials=200, seed=1)
    row = "  ".join(f"d={p.difficulty:.2f}: {p.mean_iterations:6.2f}" for p in points)
    print(f"  C={c:>2}  {row}")

print("\nCSV form:")
print(reports_to_csv(reports[:3]))
