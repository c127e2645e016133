"""Sampled checks of the two polynomial lemmas (Lebesgue constant, norming measure)."""
from __future__ import annotations

import numpy as np

from mqbound.bounds import LemmaReport
from mqbound.measure import exactness_residual, norming_weights, total_variation
from mqbound.polynomials import lagrange_basis, lebesgue_estimate, lebesgue_upper_bound
from mqbound.simplex import Simplex, equally_spaced_points

__all__ = ["random_points_in_simplex", "verify_lebesgue_lemma", "verify_measure_lemma"]

_SAMPLE_DEGREE = {1: 64, 2: 30, 3: 12}


def random_points_in_simplex(s: Simplex, count: int, rng) -> np.ndarray:
    """Uniform samples via Dirichlet(1, ..., 1) barycentric weights."""
    w = rng.dirichlet(np.ones(s.dim + 1), size=count)
    return w @ s.vertices


def verify_lebesgue_lemma(n: int, l_max: int, sample_degree=None) -> LemmaReport:
    """Sampled Lebesgue constant versus ``C(2l-1, l)`` for ``l = 1 .. l_max``."""
    s = Simplex.unit(n)
    rows = []
    estimates = {}
    for l in range(1, l_max + 1):
        deg = max(2 * l, sample_degree or _SAMPLE_DEGREE.get(n, 8))
        est = lebesgue_estimate(lagrange_basis(equally_spaced_points(s, l)), s, deg)
        estimates[l] = est.estimate
        rows.append((l, est.upper_bound - est.estimate))
    return LemmaReport("lebesgue", rows, tol=1e-9, detail={"n": n, "estimates": estimates})


def verify_measure_lemma(n: int, l: int, trials: int = 20, seed: int = 0,
                         residual_tol: float = 1e-9) -> LemmaReport:
    """Exactness and total variation of cardinal-value measures at random targets.

    A row's slack is the smaller of ``C(2l-1, l) - TV`` and ``residual_tol - residual``.
    """
    s = Simplex.unit(n)
    rng = np.random.default_rng(seed)
    bound = lebesgue_upper_bound(l)
    rows = []
    max_tv = 0.0
    max_res = 0.0
    for i, x in enumerate(random_points_in_simplex(s, trials, rng)):
        m = norming_weights(s, l, x)
        tv = total_variation(m)
        res = exactness_residual(m)
        max_tv = max(max_tv, tv)
        max_res = max(max_res, res)
        rows.append((i, min(bound - tv, residual_tol - res)))
    return LemmaReport("measure", rows, tol=0.0,
                       detail={"n": n, "l": l, "max_tv": max_tv, "tv_bound": bound,
                               "max_residual": max_res})
