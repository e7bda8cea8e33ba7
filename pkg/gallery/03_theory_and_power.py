# coding: utf-8

# # Theoretical moments and predicted power
#
# The mean and variance of T1 and T2 are explicit functions of the cell
# coefficients. They give the centering and scale of the tests and the
# predicted type II error.

# %%

import numpy as np

import chisq_homogeneity as ch

# Moments of one basis function value for a cell of width p and coefficient theta.

# %%

print(ch.phi_moments(0.25, 1.0))

# ## Null case
#
# With F = G uniform on m equal cells the exact mean of T1 is (m - 1)(1 + a)
# and the leading variance is 2 m (1 + a)^2.

# %%

u = ch.uniform_density(ch.equal_partition(10))
null = ch.AlternativePair(u, u)
print(ch.t1_theory(null, 1000, 1000))

# ## An alternative
#
# Away from the null the mean picks up the shift M, and the variance grows by
# an addendum driven by the difference eta between the two densities.

# %%

pair = ch.make_alternative(ch.equal_partition(20), np.cos(np.arange(20)), 30.0, 2000)
rep = ch.t1_theory(pair, 2000, 2000)
print(rep.shift, rep.leading_sigma_sq, rep.full_sigma_sq)
print(ch.exact_mean_t1(pair, 2000, 2000), rep.mean)

# ## Predicted type II error

# %%

for kind in ("K1", "K2", "K3"):
    print(kind, ch.predict_beta(pair, 2000, 2000, kind))

# A power curve over the distance from the null.

# %%

part = ch.equal_partition(20)
targets = np.linspace(0, 60, 7)
pairs = [(t, ch.make_alternative(part, np.cos(np.arange(20)), t, 2000)) for t in targets]
for row in ch.power_curve(pairs, 2000, 2000, ("K1",)):
    print(f"{row['parameter']:5.1f}  power {row['power']:.3f}")
