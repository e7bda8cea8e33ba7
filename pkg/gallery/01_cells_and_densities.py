# coding: utf-8

# # Cells, basis functions and cell densities
#
# Everything in the package lives on a partition of [0, 1] into cells. A density
# is constant on each cell and is written as 1 + theta_j on cell j, with the
# coefficients weighted by cell width summing to zero.

# %%

import numpy as np

import chisq_homogeneity as ch

part = ch.equal_partition(4)
print(part.edges, part.widths)

# Cells are half-open on the right, except that x = 1 belongs to the last one.

# %%

print([ch.cell_index(part, x) for x in (0.0, 0.25, 0.5, 0.99, 1.0)])

# The centered basis function of cell j is its indicator minus the cell width,
# so it integrates to zero and the basis functions sum to zero at every point.

# %%

print([ch.phi_eval(part, j, 0.3) for j in range(1, 5)])

# ## Building densities
#
# Raw coefficients are projected onto the constraint; a constant shift is
# removed. Uneven cells are fine as long as the density stays nonnegative.

# %%

uneven = ch.custom_partition([0, 0.1, 0.35, 0.6, 1])
f = ch.project_thetas(uneven, [1.0, 0.2, 0.5, -0.3])
print(f.theta, f.masses, f.masses.sum())
print(ch.norms(f))

# %%

print(ch.density_value(f, 0.05), ch.cdf(f, 0.35))

# ## Sampling
#
# Draws pick a cell with probability r_j and then a uniform point inside it.

# %%

rng = np.random.default_rng(1)
xs = ch.sample(f, 50_000, rng)
print(np.bincount(uneven.locate(xs), minlength=uneven.m) / xs.size)

# ## Alternatives with a prescribed distance
#
# make_alternative moves G away from F along a direction until the population
# functional reaches the requested value.

# %%

pair = ch.make_alternative(ch.equal_partition(10), np.cos(np.arange(10)), 25.0, n=1000)
print(pair.eta.round(4))
print(ch.population_T(pair, 1000, "T1"))
