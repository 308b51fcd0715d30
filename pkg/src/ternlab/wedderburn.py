"""Numeric algebra isomorphisms onto matrix algebras.

Solves the quadratic homomorphism equations phi(x) phi(y) = phi(xy) by
Gauss-Newton from random complex starts.  The residuals are holomorphic
in the unknowns, so the complex least-squares step applies directly.
Solutions are not canonicalized; only residuals and invertibility are
contracted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DecompositionInconclusive, PreconditionFailed, SolverBudgetExceeded
from .radical import AssocAlgebra, jacobson_radical

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class WedderburnSolution:
    """Coefficients of a numeric isomorphism onto M_n.

    ``phi`` maps basis coordinates to vec'd n-by-n matrices (column i is
    vec(phi(b_i))).  ``epsilon`` holds the sign table read off the
    source multiplication when the basis multiplies like matrix units,
    index (i, j, l) meaning b_(ij) b_(jl) = epsilon * b_(il).
    """

    phi: np.ndarray
    target_dim: int
    residual: float
    condition: float
    epsilon: dict

    def apply(self, x) -> np.ndarray:
        n = self.target_dim
        return (self.phi @ np.asarray(x, dtype=np.complex128)).reshape(n, n)


def _epsilon_table(a: AssocAlgebra, n: int) -> dict:
    """Signs from products of matrix-unit-shaped basis elements."""
    out = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                coeffs = a.table[i * n + j, j * n + l]
                target = i * n + l
                rest = np.delete(coeffs, target)
                if np.abs(rest).max(initial=0.0) <= 1e-12:
                    out[(i + 1, j + 1, l + 1)] = complex(coeffs[target])
    return out


def _residual_vector(a: AssocAlgebra, phi: np.ndarray, n: int, unit):
    d = a.dim
    mats = phi.T.reshape(d, n, n)
    prod = np.einsum("iab,jbc->ijac", mats, mats, optimize=True)
    inner = np.einsum("ijl,lx->ijx", a.table, phi.T, optimize=True).reshape(d, d, n, n)
    res = (prod - inner).ravel()
    if unit is not None:
        res = np.concatenate([res, (phi @ unit - np.eye(n, dtype=np.complex128).ravel())])
    return res


def _jacobian(a: AssocAlgebra, phi: np.ndarray, n: int, unit):
    d = a.dim
    nn = n * n
    mats = phi.T.reshape(d, n, n)
    eye = np.eye(n, dtype=np.complex128)
    jac = np.zeros((d * d * nn + (nn if unit is not None else 0), d * nn),
                   dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            row = (i * d + j) * nn
            # d(phi_i phi_j) = dphi_i phi_j + phi_i dphi_j, row-major vec
            right = np.kron(eye, mats[j].T)
            left = np.kron(mats[i], eye)
            jac[row:row + nn, i * nn:(i + 1) * nn] += right
            jac[row:row + nn, j * nn:(j + 1) * nn] += left
            for l in range(d):
                c = a.table[i, j, l]
                if c != 0:
                    jac[row:row + nn, l * nn:(l + 1) * nn] -= c * np.eye(nn)
    if unit is not None:
        base = d * d * nn
        for l in range(d):
            jac[base:base + nn, l * nn:(l + 1) * nn] = unit[l] * np.eye(nn)
    return jac


def solve_wedderburn(a: AssocAlgebra, target_dim: int, seed: int = 0,
                     restarts: int = 64, iters: int = 200,
                     tol: float = DEFAULT_TOL) -> WedderburnSolution:
    """Find an invertible phi with phi(x) phi(y) = phi(xy) onto M_n.

    The source must be semisimple with dim = target_dim**2; the unit,
    when present, is pinned to the identity matrix.  Raises
    SolverBudgetExceeded when no restart converges.
    """
    rad = jacobson_radical(a, verify=False)
    if rad.shape[1] != 0:
        raise PreconditionFailed(f"source algebra has a {rad.shape[1]}-dim radical")
    n = target_dim
    d = a.dim
    if d != n * n:
        raise PreconditionFailed(f"dim {d} != target_dim^2 = {n * n}")
    unit = a.unit()
    rng = np.random.default_rng(seed)

    best = None
    for _ in range(restarts):
        phi = (rng.standard_normal((n * n, d)) + 1j * rng.standard_normal((n * n, d)))
        vec = phi.T.ravel()  # layout: blocks of vec(phi(b_i))
        for _ in range(iters):
            phi = vec.reshape(d, n * n).T
            res = _residual_vector(a, phi, n, unit)
            rnorm = float(np.linalg.norm(res))
            if rnorm < 1e-12:
                break
            jac = _jacobian(a, phi, n, unit)
            step = np.linalg.lstsq(jac, -res, rcond=None)[0]
            t = 1.0
            for _ in range(20):
                trial = vec + t * step
                trial_res = _residual_vector(
                    a, trial.reshape(d, n * n).T, n, unit)
                if np.linalg.norm(trial_res) < rnorm:
                    vec = trial
                    break
                t /= 2.0
            else:
                break
        phi = vec.reshape(d, n * n).T
        res = _residual_vector(a, phi, n, unit)
        hom = float(np.abs(res[: d * d * n * n]).max(initial=0.0))
        s = np.linalg.svd(phi, compute_uv=False)
        cond = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
        if hom <= tol and np.isfinite(cond) and cond < 1e8:
            sol = WedderburnSolution(
                phi=phi, target_dim=n, residual=hom, condition=cond,
                epsilon=_epsilon_table(a, n))
            return sol
        if best is None or hom < best:
            best = hom
    raise SolverBudgetExceeded(
        f"no isomorphism found in {restarts} restarts (best residual {best:.2e})")


@dataclass(frozen=True)
class IsomorphismReport:
    max_residual: float
    condition: float
    invertible: bool

    def to_dict(self):
        return {"max_residual": self.max_residual, "condition": self.condition,
                "invertible": self.invertible}


def verify_isomorphism(phi: np.ndarray, a: AssocAlgebra,
                       b: AssocAlgebra) -> IsomorphismReport:
    """Max residual of phi(x y) - phi(x) phi(y) over basis pairs."""
    phi = np.asarray(phi, dtype=np.complex128)
    d = a.dim
    worst = 0.0
    eye = np.eye(d, dtype=np.complex128)
    for i in range(d):
        lhs = phi @ a.mul(np.broadcast_to(eye[i], (d, d)), eye).T
        rhs = b.mul(np.broadcast_to(phi[:, i], (d, d)), phi.T)
        worst = max(worst, float(np.abs(lhs - rhs.T).max(initial=0.0)))
    s = np.linalg.svd(phi, compute_uv=False)
    cond = float(s[0] / s[-1]) if s.size and s[-1] > 0 else np.inf
    return IsomorphismReport(max_residual=worst, condition=cond,
                             invertible=bool(np.isfinite(cond) and cond < 1e8))


def star_obstruction(phi: np.ndarray, a: AssocAlgebra, b: AssocAlgebra,
                     samples: int = 64, seed: int = 0):
    """Witness x maximizing ||phi(x*) - phi(x)*|| over basis and samples.

    A genuine *-isomorphism would yield deviation 0; the twisted
    algebras admit none, so a positive deviation is expected there.
    """
    if a.star is None or b.star is None:
        raise PreconditionFailed("both algebras need involutions")
    phi = np.asarray(phi, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    d = a.dim
    cands = [np.eye(d, dtype=np.complex128)[i] for i in range(d)]
    for _ in range(samples):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        cands.append(v / np.linalg.norm(v))

    def deviation(x):
        lhs = phi @ (a.star @ x.conj())
        rhs = b.star @ (phi @ x).conj()
        return float(np.linalg.norm(lhs - rhs))

    best = max(cands, key=deviation)
    return best, deviation(best)


# ---------------------------------------------------------------------------
# The 2x2 twisted algebra specifics


def m2_closed_form() -> np.ndarray:
    """The explicit isomorphism [a z; w b] -> [-a -z; w -b] as a matrix."""
    return np.diag(np.array([-1.0, -1.0, 1.0, -1.0], dtype=np.complex128))


def det_invertibility(a: AssocAlgebra, x, tol: float = 1e-10) -> bool:
    """Invertibility of [[a,b],[c,d]] in the twisted 2x2 algebra.

    True iff |ad + bc| exceeds tolerance; cross-checked against
    two-sided solvability of x y = e = y x.
    """
    v = np.asarray(x, dtype=np.complex128).ravel()
    if v.shape != (4,):
        raise PreconditionFailed("element must have 4 coordinates [a, b, c, d]")
    det = v[0] * v[3] + v[1] * v[2]
    verdict = bool(abs(det) > tol)
    unit = a.unit()
    if unit is None:
        raise PreconditionFailed("algebra has no unit")
    left = np.linalg.lstsq(a.left_op(v), unit, rcond=None)[0]
    right = np.linalg.lstsq(a.right_op(v), unit, rcond=None)[0]
    solvable = (
        float(np.linalg.norm(a.mul(v, left) - unit)) <= 1e-8 * (1 + np.linalg.norm(left))
        and float(np.linalg.norm(a.mul(right, v) - unit)) <= 1e-8 * (1 + np.linalg.norm(right))
    )
    if solvable != verdict:
        raise DecompositionInconclusive(
            f"determinant test ({verdict}) disagrees with solvability ({solvable})")
    return verdict
