"""Estimator-style front ends for the forward and inverse solvers."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_ivfun, check_level, check_positive
from .inverse import ParamFamily, build_y, minimize, objective
from .ivfun import EvalGrid
from .volterra import VolterraProblem, solve_forward


class PicardSolver(BaseEstimator):
    """Forward solver for a :class:`VolterraProblem`.

    Parameters
    ----------
    level : int
        Dyadic level ``k``; the grid has ``q = 2**k + 1`` nodes and the kernel
        projection uses ``n = q**2`` basis functions.
    eps : float
        Stop when successive iterates are closer than this in ``H``.
        Ignored when ``m`` is set.
    m : int or None
        Fixed number of Picard steps.
    max_iter : int
        Iteration cap in tolerance mode.
    x0 : IvFun1D or None
        Initial iterate; the forcing term when None.
    """

    def __init__(self, level=3, eps=1e-12, m=None, max_iter=100, x0=None):
        self.level = level
        self.eps = eps
        self.m = m
        self.max_iter = max_iter
        self.x0 = x0

    def fit(self, problem: VolterraProblem, y=None):
        if not isinstance(problem, VolterraProblem):
            raise TypeError(f"expected a VolterraProblem, got {type(problem).__name__}")
        level = check_level(self.level)
        eps = None if self.m is not None else check_positive(self.eps, "eps")
        res = solve_forward(problem, level, eps=eps, m=self.m, max_iter=self.max_iter, x0=self.x0)
        self.problem_ = problem
        self.solution_ = res.solution
        self.n_iter_ = res.n_iter
        self.distances_ = np.array(res.distances)
        self.converged_ = res.converged
        return self

    def predict(self, t):
        """Endpoints of the solution at ``t`` as an array of shape ``(len(t), 2)``."""
        check_is_fitted(self, "solution_")
        lo, hi = self.solution_.endpoints(np.atleast_1d(t))
        return np.column_stack((lo, hi))


class CollageInverseSolver(BaseEstimator):
    """Recover family parameters from a target interval function.

    ``fit`` minimizes ``H(X~, Y_lam)`` over the family's box and stores the
    minimizer in ``lambda_star_``.  ``predict`` evaluates the collage image
    ``Y_{lambda*}`` of the fitted target.
    """

    def __init__(self, family: ParamFamily | None = None, level=3, eval_points=1025,
                 fatol=1e-14, xatol=1e-10, max_fev=5000, certify=True):
        self.family = family
        self.level = level
        self.eval_points = eval_points
        self.fatol = fatol
        self.xatol = xatol
        self.max_fev = max_fev
        self.certify = certify

    def _grid(self):
        return EvalGrid.uniform(self.family.domain, check_level(self.eval_points, low=2, name="eval_points"))

    def fit(self, target, y=None):
        if not isinstance(self.family, ParamFamily):
            raise TypeError("family must be a ParamFamily")
        check_ivfun(target, "target")
        level = check_level(self.level)
        res = minimize(self.family, target, level, self._grid(), fatol=self.fatol,
                       xatol=self.xatol, max_fev=self.max_fev, certify=self.certify)
        self.target_ = target
        self.result_ = res
        self.lambda_star_ = res.lambda_star
        self.objective_ = res.objective
        self.no_descent_ = res.no_descent
        self.rho_bound_ = res.rho_bound
        self.certificate_ = res.certificate
        return self

    def predict(self, t):
        check_is_fitted(self, "lambda_star_")
        Y = build_y(self.family, self.lambda_star_, self.target_, self.level)
        lo, hi = Y.endpoints(np.atleast_1d(t))
        return np.column_stack((lo, hi))

    def score(self, target, y=None):
        """Negative collage distance of ``target`` at the fitted parameters."""
        check_is_fitted(self, "lambda_star_")
        return -objective(self.family, self.lambda_star_, check_ivfun(target, "target"), self.level, self._grid())
