"""Independent reference computations used by the tests.

Kept deliberately naive (exact rationals, explicit loops, grid search) so
they share no code path with the package.
"""

import cmath
import itertools
import math
from fractions import Fraction


def moments_exact(powers, step=1.0):
    """Mean delay and RMS spread by exact rational two-pass arithmetic."""
    p = [Fraction(float(x)) for x in powers]
    s = Fraction(float(step))
    total = sum(p)
    mu = sum(k * s * pk for k, pk in enumerate(p)) / total
    var = sum((k * s - mu) ** 2 * pk for k, pk in enumerate(p)) / total
    return float(mu), math.sqrt(float(var))


def dft_forward(taps, n):
    """H_n = sum_k h_k exp(-j 2 pi k n / N), by explicit summation."""
    return [sum(h * cmath.exp(-2j * math.pi * k * m / n) for k, h in enumerate(taps))
            for m in range(n)]


def simplex_grid(n_bins, target=1000):
    """Integer compositions of ``m`` into ``n_bins`` parts, m chosen for ~target points."""
    if n_bins == 1:
        yield (1.0,)
        return
    m = 1
    while math.comb(m + 1 + n_bins - 1, n_bins - 1) <= target:
        m += 1
    for cuts in itertools.combinations(range(m + n_bins - 1), n_bins - 1):
        parts, prev = [], -1
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(m + n_bins - 1 - prev - 1)
        yield tuple(x / m for x in parts)


def capacity_of_allocation(noise, alloc):
    return sum(math.log2(1 + a / s) for a, s in zip(alloc, noise)) / len(noise)


def grid_best_capacity(noise, power):
    """Best mean-capacity over allocations on a simplex grid (mean allocation = power)."""
    n = len(noise)
    best = -1.0
    for frac in simplex_grid(n):
        alloc = [f * power * n for f in frac]
        best = max(best, capacity_of_allocation(noise, alloc))
    return best
