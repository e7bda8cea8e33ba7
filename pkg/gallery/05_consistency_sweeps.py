# coding: utf-8

# # Sweeps over the sample size
#
# consistency_sweep lets the number of cells grow as floor(n^gamma) and keeps
# the alternative at distance c_b sqrt(m). rate_sweep follows simple
# alternatives whose L2 distance shrinks like n^-r on floor(c_m n^(2 - 4r))
# cells.

# %%

import chisq_homogeneity as ch

base = ch.ExperimentConfig(n=500, m=2, reps=500, seed=11, draw="counts")
for c_b in (0.0, 4.0, 8.0):
    rows = ch.consistency_sweep(base, [500, 2000, 8000], gamma=0.5, c_b=c_b)
    print(f"c_b = {c_b}")
    for r in rows:
        print(f"  n={r['n']:5d} m={r['m']:3d} rate {r['rate']:.3f}  predicted power {1 - r['predicted_beta']:.3f}")

# %%

rows = ch.rate_sweep(base, [1000, 4000, 16000], r=0.375, c_h=1.5)
for r in rows:
    print(f"n={r['n']:6d} m={r['m']:3d} rate {r['rate']:.3f}")
