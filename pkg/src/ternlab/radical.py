"""Quasi-inverses, Jacobson radicals, and semisimplicity verdicts.

The radical of a finite-dimensional associative algebra over the
complex numbers is computed by the trace-form criterion on the
unitization (x is radical iff tr(L_{x a}) = 0 for every a, including
the adjoined unit), then cross-audited by sampled homotope
quasi-invertibility.  Ternary radicals route through the standard
embedding and its Peirce corners.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import matkernel as mk
from .embedding import StandardEmbedding, build_embedding
from .errors import (
    BorderlineWarning,
    DecompositionInconclusive,
    InvalidInput,
    PreconditionFailed,
    ShapeError,
)
from .ternary import TernarySpace, _triple_coords, as_coords

DEFAULT_TOL = 1e-9
BORDERLINE_TOL = 1e-6


@dataclass(frozen=True)
class AssocAlgebra:
    """A bilinear associative product on a coordinate basis.

    ``table[i, j, l]`` is the l-th coordinate of ``b_i b_j``.  The
    optional ``star`` matrix realizes a conjugate-linear involution as
    ``x* = star @ conj(x)``.
    """

    table: np.ndarray
    star: np.ndarray = None

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.complex128)
        if t.ndim != 3 or len(set(t.shape)) > 1:
            raise ShapeError(f"structure table must be cubic, got {t.shape}")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)
        if self.star is not None:
            s = np.asarray(self.star, dtype=np.complex128)
            s.flags.writeable = False
            object.__setattr__(self, "star", s)

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def validate(self, tol: float = DEFAULT_TOL):
        t = self.table
        scale = max(1.0, float(np.abs(t).max(initial=0.0)) ** 2)
        resid = 0.0
        # chunk over the first index to keep the 4-way tensor small
        for i in range(self.dim):
            lhs = np.einsum("jm,mkl->jkl", t[i], t, optimize=True)
            rhs = np.einsum("jkm,ml->jkl", t, t[i], optimize=True)
            resid = max(resid, float(np.abs(lhs - rhs).max(initial=0.0)))
        if resid / scale > tol:
            raise InvalidInput(f"product is not associative on the basis "
                               f"(residual {resid / scale:.2e})")

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("ijl,...i,...j->...l", self.table, x, y, optimize=True)

    def left_op(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        return np.einsum("ijl,i->lj", self.table, x, optimize=True)

    def right_op(self, x) -> np.ndarray:
        """Matrix of y -> y x."""
        return np.einsum("ijl,j->li", self.table, x, optimize=True)

    @cached_property
    def trace_vector(self) -> np.ndarray:
        # tau_k = tr(L_{b_k})
        return np.einsum("kjj->k", self.table)

    def unit(self, tol: float = DEFAULT_TOL):
        """The two-sided unit, or None."""
        d = self.dim
        eye = np.eye(d, dtype=np.complex128)
        lhs = np.concatenate([
            self.table.reshape(d, -1).T,                      # e as left factor
            np.einsum("ijl->jil", self.table).reshape(d, -1).T,
        ])
        rhs = np.concatenate([eye.T.ravel(), eye.T.ravel()])
        x = mk.solve_linear(lhs, rhs, tol)
        return x

    def random_element(self, rng, scale=1.0):
        v = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return scale * v / np.sqrt(2.0)


def assoc_of_embedding(e: StandardEmbedding, tol: float = DEFAULT_TOL) -> AssocAlgebra:
    """Structure table and involution of a standard embedding."""
    d = e.dim
    eye = np.eye(d, dtype=np.complex128)
    table = np.zeros((d, d, d), dtype=np.complex128)
    for i in range(d):
        table[i] = e.mul_coords(eye[i][None, :], eye, tol)
    star = e.star_coords(eye)  # row i = coords of (e_i)*
    alg = AssocAlgebra(table=table, star=star.T)
    alg.validate(max(tol, 1e-8))
    return alg


def matrix_algebra(n: int) -> AssocAlgebra:
    """Full matrix algebra M_n with basis E_11, E_12, ..., E_nn."""
    d = n * n
    table = np.zeros((d, d, d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        table[i * n + j, k * n + l, i * n + l] = 1.0
    star = np.zeros((d, d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            star[j * n + i, i * n + j] = 1.0
    return AssocAlgebra(table=table, star=star)


# ---------------------------------------------------------------------------
# Quasi-inverses


@dataclass(frozen=True)
class QuasiInverseCertificate:
    """A solution y of y - x = (x u y) = (y u x), with residuals."""

    y: np.ndarray
    residuals: tuple
    scale: float

    @property
    def relative_residual(self) -> float:
        return max(self.residuals) / self.scale


def _solve_quasi_inverse(left_map, right_map, x, tol):
    """Shared solve of (I - L)y = x, (I - R)y = x with residual gating."""
    d = x.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    stacked = np.vstack([eye - left_map, eye - right_map])
    rhs = np.concatenate([x, x])
    y = np.linalg.lstsq(stacked, rhs, rcond=None)[0]
    r1 = float(np.linalg.norm(y - x - left_map @ y))
    r2 = float(np.linalg.norm(y - x - right_map @ y))
    opn = max(mk.op_norm(left_map), mk.op_norm(right_map))
    scale = max(1.0, float(np.linalg.norm(x)),
                float(np.linalg.norm(y)) * (1.0 + opn))
    rel = max(r1, r2) / scale
    if rel <= tol:
        return QuasiInverseCertificate(y=y, residuals=(r1, r2), scale=scale)
    if rel <= BORDERLINE_TOL:
        warnings.warn(f"quasi-inverse solve is borderline (residual {rel:.2e})",
                      BorderlineWarning, stacklevel=3)
    return None


def quasi_inverse_assoc(a: AssocAlgebra, x, u, tol: float = DEFAULT_TOL):
    """Quasi-inverse of x in the homotope with product (p, q) -> p u q."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    u = np.asarray(u, dtype=np.complex128).ravel()
    left = a.left_op(a.mul(x, u))       # y -> x u y
    right = a.right_op(a.mul(u, x))     # y -> y u x
    return _solve_quasi_inverse(left, right, x, tol)


def quasi_inverse_ternary(m: TernarySpace, x, u, tol: float = DEFAULT_TOL):
    """Quasi-inverse of x in the ternary homotope: y - x = [xuy] = [yux]."""
    xv, uv = as_coords(m, x), as_coords(m, u)
    d = m.dim
    eye = np.eye(d, dtype=np.complex128)
    left = _triple_coords(m, np.broadcast_to(xv, (d, d)),
                          np.broadcast_to(uv, (d, d)), eye).T
    right = _triple_coords(m, eye, np.broadcast_to(uv, (d, d)),
                           np.broadcast_to(xv, (d, d))).T
    return _solve_quasi_inverse(left, right, xv, tol)


# ---------------------------------------------------------------------------
# Radicals


def jacobson_radical(a: AssocAlgebra, tol: float = DEFAULT_TOL,
                     verify: bool = True, seed: int = 0) -> np.ndarray:
    """Orthonormal basis (columns) of Rad A by the trace-form criterion.

    Over characteristic zero, x is radical iff tr(L_{x b}) vanishes for
    every b in the unitization.  Nonzero results are audited: two-sided
    ideal, Rad(A / Rad A) = 0, and sampled homotope quasi-invertibility
    of every basis element.
    """
    d = a.dim
    if d == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    tau = a.trace_vector
    rows = np.einsum("ijk,k->ij", a.table, tau).T     # row j: tr(L_{b_i b_j})
    crit = np.vstack([rows, tau[None, :]])            # extra row: tr(L_{b_i})
    rad = mk.nullspace(crit, tol)
    if rad.shape[1] == 0 or not verify:
        return rad

    _audit_ideal(a, rad)
    comp = mk.nullspace(rad.conj().T, tol)
    quotient = _quotient_algebra(a, rad, comp)
    inner = jacobson_radical(quotient, tol, verify=False)
    if inner.shape[1] != 0:
        raise DecompositionInconclusive(
            "radical is not idempotent: quotient still has a radical")
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BorderlineWarning)
        for j in range(rad.shape[1]):
            for _ in range(50):
                u = a.random_element(rng)
                if quasi_inverse_assoc(a, rad[:, j], u, BORDERLINE_TOL) is None:
                    raise DecompositionInconclusive(
                        "radical element failed a homotope quasi-inverse audit")
    return rad


def _audit_ideal(a: AssocAlgebra, span: np.ndarray, tol: float = 1e-8):
    d = a.dim
    eye = np.eye(d, dtype=np.complex128)
    for j in range(span.shape[1]):
        s = np.broadcast_to(span[:, j], (d, d))
        for prods in (a.mul(eye, s), a.mul(s, eye)):
            coords = prods @ span.conj()
            resid = float(np.abs(prods - coords @ span.T).max(initial=0.0))
            scale = max(1.0, float(np.abs(prods).max(initial=0.0)))
            if resid > tol * scale:
                raise DecompositionInconclusive(
                    f"computed radical is not an ideal (residual {resid / scale:.2e})")


def _quotient_algebra(a: AssocAlgebra, ideal: np.ndarray,
                      comp: np.ndarray) -> AssocAlgebra:
    """Induced product on a complement of an ideal (coset table)."""
    k = comp.shape[1]
    if k == 0:
        return AssocAlgebra(table=np.zeros((0, 0, 0), dtype=np.complex128))
    full = np.hstack([ideal, comp])
    inv = np.linalg.pinv(full)
    table = np.zeros((k, k, k), dtype=np.complex128)
    for i in range(k):
        prods = a.mul(np.broadcast_to(comp[:, i], (k, a.dim)), comp.T)
        table[i] = (prods @ inv.T)[:, ideal.shape[1]:]
    return AssocAlgebra(table=table)


def ternary_radical(m: TernarySpace, tol: float = DEFAULT_TOL,
                    seed: int = 0) -> np.ndarray:
    """Basis (columns, base coordinates) of the radical of a ternary ring.

    Computed as Rad A(M) ∩ M via the Peirce corner of the embedding;
    structure presentations route through the abstract envelope built
    from the structure constants.  Every returned element is audited by
    sampled ternary homotope checks.
    """
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if m.is_block:
        alg, m_idx = _envelope_of_blocks(m, tol)
    else:
        alg, m_idx = structure_envelope(m, tol)
    rad = jacobson_radical(alg, tol, verify=False, seed=seed)
    corner = _corner_of(rad, m_idx, alg.dim)
    if corner.shape[1] == 0:
        return np.zeros((m.dim, 0), dtype=np.complex128)
    basis = mk.colspace(corner)
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BorderlineWarning)
        for j in range(basis.shape[1]):
            for _ in range(50):
                u = m.random_element(rng).coords
                if quasi_inverse_ternary(m, basis[:, j], u, BORDERLINE_TOL) is None:
                    raise DecompositionInconclusive(
                        "radical element failed a ternary homotope audit")
    return basis


def _envelope_of_blocks(m: TernarySpace, tol: float):
    e = build_embedding(m, tol)
    alg = assoc_of_embedding(e, tol)
    return alg, e.corner_indices["M"]


def _corner_of(span: np.ndarray, idx: np.ndarray, dim: int) -> np.ndarray:
    """Intersection of a span with a coordinate slice, in slice coordinates."""
    if span.shape[1] == 0:
        return np.zeros((idx.size, 0), dtype=np.complex128)
    mask = np.ones(dim, dtype=bool)
    mask[idx] = False
    ns = mk.nullspace(span[mask, :])
    inter = mk.colspace(span @ ns)
    return inter[idx, :]


# ---------------------------------------------------------------------------
# Abstract envelope from structure constants


def structure_envelope(m: TernarySpace, tol: float = DEFAULT_TOL):
    """Faithful associative envelope of a structure-constants space.

    Elements are (A, f, gbar, B) with A spanned by pairs of left
    multiplication operators, B by right multiplication pairs, and the
    bar slot stored in conjugated coordinates so every product rule is
    bilinear.  Returns the algebra and the coordinate indices of the
    embedded copy of M.
    """
    c = m.structure.c
    d = m.dim
    # left operators: L(b_i, b_j)[l, k] = c[i, j, k, l]
    lten = np.einsum("ijkl->ijlk", c)
    # right operators: R(b_j, b_k)[l, i] = c[i, j, k, l]
    rten = np.einsum("ijkl->jkli", c)

    def pair_span(ten):
        # pairs (T[i,j], conj(T[j,i])) stacked as vectors
        fwd = ten.reshape(d * d, d * d)
        bwd = np.einsum("ijlk->jilk", ten.reshape(d, d, d, d)).conj().reshape(d * d, d * d)
        return mk.colspace(np.hstack([fwd, bwd]).T, tol)

    l_basis = pair_span(lten)          # columns: vec(P) ++ vec(Ptilde)
    r_basis = pair_span(rten)
    dk, dr = l_basis.shape[1], r_basis.shape[1]
    n = dk + d + d + dr
    sl_a = slice(0, dk)
    sl_f = slice(dk, dk + d)
    sl_g = slice(dk + d, dk + 2 * d)
    sl_b = slice(dk + 2 * d, n)

    l_pinv = np.linalg.pinv(l_basis)
    r_pinv = np.linalg.pinv(r_basis)

    def l_pair(acoords):
        v = l_basis @ acoords
        return v[: d * d].reshape(d, d), v[d * d:].reshape(d, d)

    def r_pair(bcoords):
        v = r_basis @ bcoords
        return v[: d * d].reshape(d, d), v[d * d:].reshape(d, d)

    def mul(xa, xb):
        a1, a2 = l_pair(xa[sl_a])
        b1, b2 = r_pair(xa[sl_b])
        f, s = xa[sl_f], xa[sl_g]
        a1p, a2p = l_pair(xb[sl_a])
        b1p, b2p = r_pair(xb[sl_b])
        fp, sp = xb[sl_f], xb[sl_g]
        # corner products, all bilinear in the stored coordinates
        pa1 = a1 @ a1p + np.einsum("i,j,ijlk->lk", f, sp, lten, optimize=True)
        pa2 = a2p @ a2 + np.einsum("i,j,ijlk->lk", sp, f, lten.conj(), optimize=True)
        pf = a1 @ fp + b1p @ f
        ps = a2p @ s + b2 @ sp
        pb1 = b1p @ b1 + np.einsum("j,k,jkli->li", s, fp, rten, optimize=True)
        pb2 = b2 @ b2p + np.einsum("j,k,jkli->li", fp, s, rten.conj(), optimize=True)
        out = np.zeros(n, dtype=np.complex128)
        pav = np.concatenate([pa1.ravel(), pa2.ravel()])
        out[sl_a] = l_pinv @ pav
        if float(np.linalg.norm(l_basis @ out[sl_a] - pav)) > 1e-7 * max(
                1.0, float(np.linalg.norm(pav))):
            raise DecompositionInconclusive("envelope product left the A-corner span")
        out[sl_f] = pf
        out[sl_g] = ps
        pbv = np.concatenate([pb1.ravel(), pb2.ravel()])
        out[sl_b] = r_pinv @ pbv
        if float(np.linalg.norm(r_basis @ out[sl_b] - pbv)) > 1e-7 * max(
                1.0, float(np.linalg.norm(pbv))):
            raise DecompositionInconclusive("envelope product left the B-corner span")
        return out

    eye = np.eye(n, dtype=np.complex128)
    table = np.zeros((n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            table[i, j] = mul(eye[i], eye[j])
    alg = AssocAlgebra(table=table)
    alg.validate(max(tol, 1e-8))
    return alg, np.arange(dk, dk + d)


# ---------------------------------------------------------------------------
# Lemma checkers


def _qi_exists(result) -> bool:
    return result is not None


def check_corner_qi_equivalence(m: TernarySpace, x=None, u=None,
                                trials: int = 1, seed: int = 0,
                                tol: float = DEFAULT_TOL,
                                embedding: StandardEmbedding = None,
                                algebra: AssocAlgebra = None) -> bool:
    """Ternary quasi-invertibility matches the embedded corner element's.

    With explicit x, u the single pair is checked; otherwise ``trials``
    random pairs are drawn.  The corner element sits in the M slot and
    the homotope element carries u in the Mbar slot.
    """
    e = embedding if embedding is not None else build_embedding(m, tol)
    alg = algebra if algebra is not None else assoc_of_embedding(e, tol)
    rng = np.random.default_rng(seed)
    pairs = ([(as_coords(m, x), as_coords(m, u))] if x is not None
             else [(m.random_element(rng).coords, m.random_element(rng).coords)
                   for _ in range(trials)])
    for xv, uv in pairs:
        tern = _qi_exists(quasi_inverse_ternary(m, xv, uv, tol))
        xhat = e.embed_base(xv).coords
        uhat = e.embed_base_conj(uv).coords
        assoc = _qi_exists(quasi_inverse_assoc(alg, xhat, uhat, tol))
        if tern != assoc:
            return False
    return True


def check_symmetry_principle(a: AssocAlgebra, x, y,
                             tol: float = DEFAULT_TOL) -> bool:
    """qi(x in A_y) holds iff qi(y in A_x) holds."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    fwd = _qi_exists(quasi_inverse_assoc(a, x, y, tol))
    bwd = _qi_exists(quasi_inverse_assoc(a, y, x, tol))
    return fwd == bwd


def check_shifting_principle(a: AssocAlgebra, phi, psi, x, y,
                             tol: float = DEFAULT_TOL,
                             validate: bool = True) -> bool:
    """qi(x in A_{psi(y)}) holds iff qi(phi(x) in A_y) holds.

    ``phi`` and ``psi`` are linear self-maps given as matrices; they
    must satisfy phi(p) q phi(r) = phi(p psi(q) r) and the mirrored
    identity on the basis, else PreconditionFailed.
    """
    phi = np.asarray(phi, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    if validate:
        _validate_shifting_maps(a, phi, psi, tol=1e-8)
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    fwd = _qi_exists(quasi_inverse_assoc(a, x, psi @ y, tol))
    bwd = _qi_exists(quasi_inverse_assoc(a, phi @ x, y, tol))
    return fwd == bwd


def _validate_shifting_maps(a: AssocAlgebra, phi, psi, tol):
    t = a.table
    scale = max(1.0, float(np.abs(t).max(initial=0.0)) ** 2)
    for f, g in ((phi, psi), (psi, phi)):
        # f(b_i) b_j f(b_k)  vs  f(b_i g(b_j) b_k)
        fi = np.einsum("pi,pjm->ijm", f, t, optimize=True)    # f(b_i) b_j
        lhs = np.einsum("ijm,qk,mql->ijkl", fi, f, t, optimize=True)
        ig = np.einsum("qj,iqm->ijm", g, t, optimize=True)    # b_i g(b_j)
        rhs_arg = np.einsum("ijm,mkl->ijkl", ig, t, optimize=True)
        rhs = np.einsum("ijkp,lp->ijkl", rhs_arg, f, optimize=True)
        resid = float(np.abs(lhs - rhs).max(initial=0.0)) / scale
        if resid > tol:
            raise PreconditionFailed(
                f"compression maps fail the shifting identities "
                f"(residual {resid:.2e})")


def corner_compressions(e: StandardEmbedding) -> dict:
    """Coordinate projections of the four Peirce compressions.

    ``LL`` keeps the diagonal L corner, ``RR`` the R corner, ``LR``
    keeps the M slot and ``RL`` the Mbar slot.
    """
    d = e.dim
    out = {}
    for name, corner in (("LL", "L"), ("LR", "M"), ("RL", "Mbar"), ("RR", "R")):
        p = np.zeros((d, d), dtype=np.complex128)
        idx = e.corner_indices[corner]
        p[idx, idx] = 1.0
        out[name] = p
    return out


def radical_is_star_invariant(a: AssocAlgebra, rad: np.ndarray,
                              tol: float = 1e-8) -> bool:
    """The radical of a *-algebra is self-adjoint; check on the basis."""
    if a.star is None:
        raise PreconditionFailed("algebra carries no involution")
    if rad.shape[1] == 0:
        return True
    starred = a.star @ rad.conj()
    _, resid = mk.project_columns(rad, starred)
    return resid <= tol * max(1.0, float(np.abs(starred).max(initial=0.0)))
