"""Dense two-phase tableau simplex with Bland's pivoting rule.

Solves small problems of the form::

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x >= 0

Bland's rule (lowest-index entering column, lowest-index leaving basic
variable on ratio ties) makes the pivot sequence deterministic and
cycling-free, so repeated calls return the same vertex bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError


@dataclass
class LPResult:
    """Outcome of :func:`linprog`.

    ``duals_ub``/``duals_eq`` are the constraint marginals of an optimal
    solution (non-positive for ``<=`` rows). When ``status == "infeasible"``,
    ``farkas_ub``/``farkas_eq`` hold a certificate ``z`` with ``z_ub >= 0``,
    ``z @ A >= 0`` and ``z @ b < 0``.
    """

    status: str
    x: np.ndarray | None
    fun: float
    nit: int
    duals_ub: np.ndarray | None = None
    duals_eq: np.ndarray | None = None
    farkas_ub: np.ndarray | None = None
    farkas_eq: np.ndarray | None = None

    @property
    def success(self) -> bool:
        return self.status == "optimal"


def _as_2d(A, ncols):
    if A is None:
        return np.zeros((0, ncols))
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return np.zeros((0, ncols))
    if A.shape[1] != ncols:
        raise ValueError(f"constraint matrix has {A.shape[1]} columns, expected {ncols}")
    return A


def _as_1d(b, nrows):
    if b is None:
        b = np.zeros(0)
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape[0] != nrows:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {nrows}")
    return b


class _Tableau:
    def __init__(self, M, b, basis, pivot_tol, cost_tol):
        R, N = M.shape
        self.R, self.N = R, N
        self.T = np.zeros((R + 1, N + 1))
        self.T[:R, :N] = M
        self.T[:R, N] = b
        self.basis = list(basis)
        self.init_cols = list(basis)
        self.pivot_tol = pivot_tol
        self.cost_tol = cost_tol
        self.nit = 0

    def set_cost(self, cost):
        R, N = self.R, self.N
        cB = cost[self.basis]
        self.T[R, :N] = cost - cB @ self.T[:R, :N]
        self.T[R, N] = -cB @ self.T[:R, N]

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        rhs = T[: self.R, self.N]
        rhs[(rhs < 0) & (rhs > -1e-12)] = 0.0
        self.basis[r] = j
        self.nit += 1

    def run(self, allowed, max_iter):
        """Iterate to optimality over ``allowed`` columns; returns a status."""
        R, N = self.R, self.N
        allowed = np.asarray(allowed, dtype=bool)
        while True:
            if self.nit > max_iter:
                raise LPError(f"simplex exceeded {max_iter} pivots")
            d = self.T[R, :N]
            cand = np.flatnonzero(allowed & (d < -self.cost_tol))
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
            col = self.T[:R, j]
            rows = np.flatnonzero(col > self.pivot_tol)
            if rows.size == 0:
                return "unbounded"
            ratios = self.T[rows, N] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, j)

    def basis_inverse(self):
        Binv = np.empty((self.R, self.R))
        for row, col in enumerate(self.init_cols):
            Binv[:, row] = self.T[: self.R, col]
        return Binv


def linprog(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    *,
    feas_tol: float = 1e-9,
    cost_tol: float = 1e-12,
    pivot_tol: float = 1e-9,
    max_iter: int = 50_000,
) -> LPResult:
    """Solve a small dense LP with the two-phase simplex method.

    Parameters
    ----------
    c : array_like, shape (n,)
        Objective coefficients (minimised).
    A_ub, b_ub : array_like, optional
        Inequality constraints ``A_ub @ x <= b_ub``.
    A_eq, b_eq : array_like, optional
        Equality constraints ``A_eq @ x == b_eq``.
    feas_tol : float
        Phase-one objective above which the problem is declared infeasible.

    Returns
    -------
    LPResult
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n = c.shape[0]
    A_ub = _as_2d(A_ub, n)
    A_eq = _as_2d(A_eq, n)
    p, q = A_ub.shape[0], A_eq.shape[0]
    b_ub = _as_1d(b_ub, p)
    b_eq = _as_1d(b_eq, q)
    R = p + q

    A = np.zeros((R, n + p))
    A[:p, :n] = A_ub
    A[:p, n:] = np.eye(p)
    A[p:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign

    # rows whose slack already forms a feasible basis need no artificial
    needs_art = [i for i in range(R) if i >= p or sign[i] < 0]
    n_art = len(needs_art)
    N = n + p + n_art
    M = np.zeros((R, N))
    M[:, : n + p] = A
    basis = [0] * R
    for i in range(p):
        basis[i] = n + i
    for k, i in enumerate(needs_art):
        M[i, n + p + k] = 1.0
        basis[i] = n + p + k

    tab = _Tableau(M, b, basis, pivot_tol, cost_tol)
    is_art = np.zeros(N, dtype=bool)
    is_art[n + p :] = True

    if n_art:
        cost1 = is_art.astype(float)
        tab.set_cost(cost1)
        tab.run(np.ones(N, dtype=bool), max_iter)
        infeas = -tab.T[R, N]
        if infeas > feas_tol:
            y = cost1[tab.basis] @ tab.basis_inverse()
            z = -sign * y
            return LPResult(
                "infeasible", None, float("nan"), tab.nit,
                farkas_ub=z[:p], farkas_eq=z[p:],
            )
        # drive zero-level artificials out of the basis where possible
        for r in range(R):
            if is_art[tab.basis[r]]:
                row = tab.T[r, : n + p]
                cols = np.flatnonzero(np.abs(row) > pivot_tol)
                if cols.size:
                    tab.pivot(r, int(cols[0]))

    cost2 = np.zeros(N)
    cost2[:n] = c
    tab.set_cost(cost2)
    status = tab.run(~is_art, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, -np.inf, tab.nit)

    xs = np.zeros(N)
    xs[tab.basis] = tab.T[:R, N]
    x = xs[:n]
    y = cost2[tab.basis] @ tab.basis_inverse()
    duals = sign * y
    return LPResult(
        "optimal", x, float(c @ x), tab.nit,
        duals_ub=duals[:p], duals_eq=duals[p:],
    )
