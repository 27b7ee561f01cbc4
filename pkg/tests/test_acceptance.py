"""Acceptance criteria, one PASS/FAIL line each (see the summary at the end of the run)."""
import math
import time
import warnings

import numpy as np
import pytest
from sklearn.exceptions import ConvergenceWarning

from ivcollage.cli import main
from ivcollage.interval import Interval, add, dist, gh_sub, norm, scale
from ivcollage.inverse import minimize
from ivcollage.ivfun import EvalGrid, integrate, metric_h
from ivcollage.problems import SQRT2, example1_solution, make_target
from ivcollage.schauder import DyadicBasis1D, gh_decompose, integrate_projection, project_interval
from ivcollage.volterra import caccioppoli_alphas, perturbed_collage_bound, solve_forward

from conftest import random_grid_fun

LEVEL = 3  # q = 9, n = r = 81


@pytest.fixture(scope="module")
def ex1_m7(ex1, ex1_target_m7):
    family, _ = ex1
    t0 = time.perf_counter()
    res = minimize(family, ex1_target_m7, LEVEL)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def ex2_m7(ex2):
    family, lam0 = ex2
    t0 = time.perf_counter()
    target = make_target(family, lam0, LEVEL, m=7)
    res = minimize(family, target, LEVEL)
    return res, time.perf_counter() - t0


def test_c1_example1_recovery(ex1_m7, record):
    res, elapsed = ex1_m7
    ea, eb = abs(res.lambda_star[0] - SQRT2), abs(res.lambda_star[1] + 1)
    record(ea <= 1e-3 and eb <= 1e-3, "C1 example 1 parameters (m=7, n=81)",
           f"|a*-sqrt2| = {ea:.2e}, |b*+1| = {eb:.2e} (tol 1e-3)")


def test_c1_example1_objective(ex1_m7, record):
    res, _ = ex1_m7
    record(res.objective <= 1e-6, "C1 example 1 objective", f"H = {res.objective:.3e} (tol 1e-6)")


def test_c1_example1_runtime(ex1_m7, record):
    _, elapsed = ex1_m7
    record(elapsed <= 60, "C1 example 1 runtime", f"{elapsed:.2f} s (limit 60 s)")


def test_c2_trend_m3_to_m7(ex1, ex1_m7, record):
    family, lam0 = ex1
    r3 = minimize(family, make_target(family, lam0, LEVEL, m=3), LEVEL, certify=False)
    e3 = abs(r3.lambda_star[0] - SQRT2)
    e7 = abs(ex1_m7[0].lambda_star[0] - SQRT2)
    record(e3 >= 10 * e7, "C2 error shrinks from m=3 to m=7",
           f"{e3:.2e} -> {e7:.2e}, ratio {e3 / e7:.3g} (need >= 10)")


def test_c3_example2_recovery(ex2_m7, record):
    res, _ = ex2_m7
    ea, eb = abs(res.lambda_star[0] - 2), abs(res.lambda_star[1] - 1)
    record(ea <= 1e-2 and eb <= 1e-2, "C3 example 2 parameters (m=7, n=81)",
           f"|a*-2| = {ea:.2e}, |b*-1| = {eb:.2e} (tol 1e-2)")


def test_c3_example2_objective(ex2_m7, record):
    res, _ = ex2_m7
    record(res.objective <= 1e-6, "C3 example 2 objective", f"H = {res.objective:.3e} (tol 1e-6)")


def test_c3_example2_runtime(ex2_m7, record):
    _, elapsed = ex2_m7
    record(elapsed <= 120, "C3 example 2 runtime", f"{elapsed:.2f} s (limit 120 s)")


def test_c4_forward_accuracy(ex1, record):
    family, lam0 = ex1
    prob = family.problem(lam0)
    exact = example1_solution()
    errs = []
    for level in (1, 3, 4):
        with warnings.catch_warnings():
            warnings.simplefilter("error", ConvergenceWarning)
            X = solve_forward(prob, level, eps=1e-12).solution
        errs.append(metric_h(X, exact))
    ok = errs[2] <= 5e-3 and errs[0] > errs[1] > errs[2]
    record(ok, "C4 forward accuracy q=3,9,17",
           ", ".join(f"{e:.3e}" for e in errs) + " (last <= 5e-3, strictly decreasing)")


def test_c5a_interval_identities(record):
    rng = np.random.default_rng(501)
    # endpoints on a 2**-10 lattice so every identity holds exactly
    ends = np.sort(rng.integers(-(2**20), 2**20, size=(10_000, 2)) / 1024, axis=1)
    ivs = [Interval(lo, hi) for lo, hi in ends]
    fails = 0
    for i, a in enumerate(ivs):
        b, c = ivs[(i + 1) % len(ivs)], ivs[(i + 7) % len(ivs)]
        g = gh_sub(a, b)
        ok = (
            dist(a, b) == dist(b, a)
            and (dist(a, b) == 0) == (a == b)
            and dist(a, c) <= dist(a, b) + dist(b, c)
            and dist(a, a) == 0
            and dist(a, b) == norm(g)
            and gh_sub(a, a) == Interval(0, 0)
            and (a == add(b, g) or b == add(a, scale(-1, g)))
        )
        fails += not ok
    record(fails == 0, "C5a interval metric and gH identities", f"{fails} failures in 10000")


def test_c5b_integral_lipschitz(record):
    rng = np.random.default_rng(502)
    fails = 0
    worst = -math.inf
    for _ in range(1000):
        a = rng.uniform(-2, 1)
        b = a + rng.uniform(0.1, 3)
        f = random_grid_fun(rng, level=int(rng.integers(1, 7)), domain=(a, b))
        h = random_grid_fun(rng, level=int(rng.integers(1, 7)), domain=(a, b))
        lhs = dist(integrate(f), integrate(h))
        rhs = (b - a) * metric_h(f, h, EvalGrid(np.union1d(f.nodes, h.nodes)))
        worst = max(worst, lhs - rhs)
        fails += lhs > rhs + 1e-12
    record(fails == 0, "C5b D(int f, int h) <= (b-a) H(f, h)",
           f"{fails} failures in 1000, max lhs - rhs = {worst:.2e}")


def test_c5c_integrate_projection_oracle(record):
    rng = np.random.default_rng(503)
    worst = 0.0
    for _ in range(100):
        f = random_grid_fun(rng, level=7)
        basis = DyadicBasis1D(int(rng.integers(0, 7)))
        t0, t1 = np.sort(rng.uniform(0, 1, 2))
        got = integrate_projection(basis, f, t0, t1)
        ref = integrate(project_interval(basis, f), t0, t1)
        worst = max(worst, dist(got, ref))
    record(worst <= 1e-12, "C5c integrate_projection vs direct integral",
           f"max deviation {worst:.2e} over 100 functions (tol 1e-12)")


def test_c5d_reconstruction(record):
    rng = np.random.default_rng(504)
    worst = 0.0
    for _ in range(10):
        f = random_grid_fun(rng, level=7)
        basis = DyadicBasis1D(int(rng.integers(0, 7)))
        t = rng.uniform(0, 1, 100)
        lo, hi = gh_decompose(basis, f).endpoints(t)
        plo, phi = project_interval(basis, f).endpoints(t)
        worst = max(worst, np.max(np.abs(lo - plo)), np.max(np.abs(hi - phi)))
    record(worst <= 1e-12, "C5d gH reconstruction vs projection",
           f"max deviation {worst:.2e} over 1000 points (tol 1e-12)")


def test_c5e_caccioppoli_tail(ex1, record):
    family, lam0 = ex1
    prob = family.problem(lam0)
    res = solve_forward(prob, LEVEL, eps=1e-13, keep_history=True)
    J = res.n_iter
    alphas = caccioppoli_alphas(prob.lipschitz, 0.0, 1.0, J)
    grid = EvalGrid(res.solution.nodes)
    d10 = metric_h(res.history[1], res.history[0], grid)
    worst = -math.inf
    fails = 0
    for j in range(J + 1):
        lhs = metric_h(res.history[j], res.solution, grid)
        rhs = math.fsum(alphas[j:J + 1]) * d10
        worst = max(worst, lhs - rhs)
        fails += lhs > rhs + 1e-6
    record(fails == 0, "C5e Caccioppoli tail bound along Picard iterates",
           f"{fails} failures over {J + 1} iterates, max lhs - rhs = {worst:.2e}")


def test_c5f_bound_infimum(record):
    rng = np.random.default_rng(506)
    fails = 0
    for _ in range(100):
        a = rng.uniform(-1, 1)
        b = a + rng.uniform(0.05, 2)
        L = rng.uniform(0.01, 5 / (b - a))
        d, e = rng.uniform(0, 1), rng.uniform(0, 0.1)
        alphas = caccioppoli_alphas(L, a, b, 100)
        inf = min(perturbed_collage_bound(alphas, n, d, e) for n in range(1, 101) if alphas[n] < 1)
        fails += inf > math.exp(L * (b - a)) * (d + e) + 1e-12
    record(fails == 0, "C5f inf_n perturbed collage bound <= e^{L(b-a)}(d+eps)", f"{fails} failures in 100")


def test_c6_reproduce_is_deterministic(tmp_path, record):
    outs = []
    for run in range(2):
        paths = []
        for example in (1, 2):
            p = tmp_path / f"run{run}_ex{example}.csv"
            assert main(["reproduce", "--example", str(example), "--out", str(p)]) == 0
            paths.append(p.read_bytes())
        outs.append(b"".join(paths))
    record(outs[0] == outs[1], "C6 reproduce output byte-identical across runs",
           f"{len(outs[0])} bytes compared")
