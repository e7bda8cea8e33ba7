# coding: utf-8

# # Size and power by simulation
#
# ExperimentConfig describes one setting; run_experiment repeats it with an
# independent random substream per replication, so results do not depend on
# how the work is split across processes.

# %%

import chisq_homogeneity as ch

cfg = ch.ExperimentConfig(n=2000, m=20, reps=2000, seed=3, kinds=("K1", "K2", "K3", "GoF"))
res = ch.run_experiment(cfg)
for kind, s in res.kinds.items():
    print(f"{kind:3s} rate {s.rejection_rate:.4f} +- {s.se:.4f}  KS {s.ks_distance:.3f}")

# ## Power against an alternative at a given distance

# %%

alt = ch.ExperimentConfig(n=2000, m=20, reps=2000, seed=4, target=40.0, kinds=("K1", "K3"))
res = ch.run_experiment(alt)
for kind, s in res.kinds.items():
    print(f"{kind} power {s.rejection_rate:.3f}  predicted {1 - s.predicted_beta:.3f}")

# ## How good are the variance estimates?
#
# sigma_ratio summarizes estimated over true variance across replications.

# %%

print(res.kinds["K1"].sigma_ratio)

# ## Normality of the standardized statistic
#
# The histogram and KS distance of z under the null.

# %%

diag = ch.normality_diag(ch.ExperimentConfig(n=2000, m=20, reps=2000, seed=5))
print(diag.ks_distance, diag.z_mean, diag.z_sd)
