"""Brute-force reference implementations used by the metric tests."""

import math

import numpy as np


def pearson_loop(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def t_pvalue_trapezoid(r, n, points=400_001):
    """Two-sided tail of Student's t by trapezoid integration of the density on [0, |t|]."""
    df = n - 2
    t = abs(r) * math.sqrt(df / (1 - r * r))
    s = np.linspace(0.0, t, points)
    logc = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    dens = np.exp(logc - (df + 1) / 2 * np.log1p(s * s / df))
    return 1.0 - 2.0 * np.trapezoid(dens, s)


def bland_altman_loop(t, p):
    e = [a - b for a, b in zip(t, p)]
    n = len(e)
    mean = sum(e) / n
    sd = math.sqrt(sum((x - mean) ** 2 for x in e) / (n - 1))
    return mean, mean - 1.96 * sd, mean + 1.96 * sd
