"""Ideals and quotients of C*-ternary rings.

Quotients are represented by structure constants on a Hilbert-Schmidt
orthogonal complement of the ideal; quotient norms are certified by a
minimization upper bound paired with a dual lower bound, so the gap is
always reported rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import matkernel as mk
from .embedding import StandardEmbedding, _assoc_ideal_residual, peirce_split
from .errors import NotAnIdeal
from .ternary import (
    StructureConstants,
    TernarySpace,
    _triple_coords,
    as_coords,
    zettl_decompose,
)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class TernaryIdeal:
    """A subspace closed under [MMI], [IMM] and [MIM]."""

    parent: TernarySpace
    basis: np.ndarray  # columns, coordinates in the parent basis

    def __post_init__(self):
        b = mk.colspace(np.asarray(self.basis, dtype=np.complex128))
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, x, tol: float = DEFAULT_TOL) -> bool:
        v = as_coords(self.parent, x)
        _, resid = mk.project_columns(self.basis, v)
        return resid <= tol * max(1.0, float(np.linalg.norm(v)))


def _containment_residual(m: TernarySpace, span: np.ndarray,
                          pattern: str) -> float:
    """Worst projection residual of the given product pattern vs span."""
    if span.shape[1] == 0:
        return 0.0
    d = m.dim
    eye = np.eye(d, dtype=np.complex128)
    q = span
    worst = 0.0
    for j in range(q.shape[1]):
        s = np.broadcast_to(q[:, j], (d, d, d)).reshape(-1, d)
        x = np.broadcast_to(eye[:, None, :], (d, d, d)).reshape(-1, d)
        y = np.broadcast_to(eye[None, :, :], (d, d, d)).reshape(-1, d)
        args = {"MMI": (x, y, s), "IMM": (s, x, y), "MIM": (x, s, y)}[pattern]
        prods = _triple_coords(m, *args)
        coords = prods @ q.conj()
        resid = float(np.abs(prods - coords @ q.T).max(initial=0.0))
        scale = max(1.0, float(np.abs(prods).max(initial=0.0)))
        worst = max(worst, resid / scale)
    return worst


def is_ideal(m: TernarySpace, span, tol: float = DEFAULT_TOL) -> bool:
    """All three containments [MMI], [IMM], [MIM] hold within tolerance.

    The middle containment is checked explicitly even though it is
    automatic in an exact C*-ternary ring; numerically non-closed
    inputs should not get a free pass.
    """
    q = mk.colspace(np.asarray(span, dtype=np.complex128))
    if q.shape[1] == 0:
        return True
    return all(_containment_residual(m, q, p) <= tol
               for p in ("MMI", "IMM", "MIM"))


def generated_ideal(m: TernarySpace, gens, tol: float = 1e-9,
                    max_rounds: int = 64) -> TernaryIdeal:
    """Smallest ideal containing the generators (fixed point of products)."""
    cols = [as_coords(m, g) for g in np.atleast_2d(np.asarray(gens, dtype=np.complex128))] \
        if not isinstance(gens, (list, tuple)) else [as_coords(m, g) for g in gens]
    span = mk.colspace(np.stack(cols, axis=1) if cols else
                       np.zeros((m.dim, 0), dtype=np.complex128), tol)
    d = m.dim
    eye = np.eye(d, dtype=np.complex128)
    for _ in range(max_rounds):
        if span.shape[1] in (0, d):
            break
        new_vecs = [span]
        for j in range(span.shape[1]):
            s = np.broadcast_to(span[:, j], (d, d, d)).reshape(-1, d)
            x = np.broadcast_to(eye[:, None, :], (d, d, d)).reshape(-1, d)
            y = np.broadcast_to(eye[None, :, :], (d, d, d)).reshape(-1, d)
            for args in ((x, y, s), (s, x, y), (x, s, y)):
                new_vecs.append(_triple_coords(m, *args).T)
        new_span = mk.colspace(np.hstack(new_vecs), tol)
        if new_span.shape[1] == span.shape[1]:
            break
        span = new_span
    return TernaryIdeal(parent=m, basis=span)


def embed_ideal(e: StandardEmbedding, ideal: TernaryIdeal,
                tol: float = DEFAULT_TOL) -> np.ndarray:
    """The ideal L(I) ⊕ I ⊕ Ibar ⊕ R(I) inside the embedding.

    Returns an orthonormal column basis in embedding coordinates and
    verifies the associative ideal property; the Peirce corners of the
    result are exactly the four constituents.
    """
    m = e.base
    if not is_ideal(m, ideal.basis, tol):
        raise NotAnIdeal("subspace fails the ternary ideal containments")
    cols = []
    d = m.dim
    dim_e = e.dim
    # I in the M slot, Ibar in the Mbar slot
    for j in range(ideal.dim):
        cols.append(e.embed_base(ideal.basis[:, j]).coords)
        cols.append(e.embed_base_conj(ideal.basis[:, j]).coords)
    # L(I) = span{x y* : x, y in I} and R(I) = span{x* y} per block
    mats = [m.realize(ideal.basis[:, j]) for j in range(ideal.dim)]
    offset = 0
    for bi, (blk, be) in enumerate(zip(m.blocks, e.blocks)):
        xs = np.stack([mat[bi] for mat in mats]) if mats else None
        if xs is not None and xs.size:
            ll = np.einsum("iab,jcb->ijac", xs, xs.conj(),
                           optimize=True).reshape(-1, blk.rows, blk.rows)
            lc, resid = be._proj(be._l_pinv, be.l_stack, ll)
            if resid > tol * max(1.0, float(np.abs(ll).max(initial=0.0))):
                raise NotAnIdeal("L(I) escapes the L(M) span")
            rr = np.einsum("iba,jbc->ijac", xs.conj(), xs,
                           optimize=True).reshape(-1, blk.cols, blk.cols)
            rc, resid = be._proj(be._r_pinv, be.r_stack, rr)
            if resid > tol * max(1.0, float(np.abs(rr).max(initial=0.0))):
                raise NotAnIdeal("R(I) escapes the R(M) span")
            dl, dm, dw, dr = be.dims
            for row in lc.reshape(-1, dl):
                v = np.zeros(dim_e, dtype=np.complex128)
                v[offset:offset + dl] = row
                cols.append(v)
            for row in rc.reshape(-1, dr):
                v = np.zeros(dim_e, dtype=np.complex128)
                v[offset + dl + dm + dw:offset + be.dim] = row
                cols.append(v)
        offset += be.dim
    span = mk.colspace(np.stack(cols, axis=1) if cols else
                       np.zeros((dim_e, 0), dtype=np.complex128))
    resid = _assoc_ideal_residual(e, span)
    if resid > tol * 10:
        raise NotAnIdeal(f"embedded subspace fails the associative ideal check "
                         f"(residual {resid:.2e})")
    corners = peirce_split(e, span, tol=max(tol, 1e-8))
    expect = (span.shape[1] - 2 * ideal.dim) == corners.dims[0] + corners.dims[3]
    if not (corners.dims[1] == corners.dims[2] == ideal.dim and expect):
        raise NotAnIdeal(f"Peirce corners {corners.dims} do not match the ideal")
    return span


def quotient(m: TernarySpace, ideal: TernaryIdeal, tol: float = DEFAULT_TOL,
             seed: int = 0, check_samples: int = 20) -> TernarySpace:
    """The quotient ternary ring on an orthogonal complement of the ideal.

    The induced structure constants are validated for representative
    independence: products of perturbed coset representatives agree
    within tolerance.
    """
    if ideal.parent is not m and not np.array_equal(
            np.asarray(ideal.parent.dim), np.asarray(m.dim)):
        raise NotAnIdeal("ideal does not belong to this space")
    if not is_ideal(m, ideal.basis, max(tol, 1e-8)):
        raise NotAnIdeal("subspace fails the ternary ideal containments")
    d = m.dim
    j = ideal.basis
    comp = mk.nullspace(j.conj().T)
    k = comp.shape[1]
    if k == 0:
        return TernarySpace(structure=StructureConstants(
            0, np.zeros((0, 0, 0, 0), dtype=np.complex128)))
    full = np.hstack([j, comp])
    inv = np.linalg.pinv(full)

    def quot_coords(vecs):
        # coset coordinates: expansion in [J | C], keep the C part
        return (np.asarray(vecs) @ inv.T)[..., j.shape[1]:]

    cols = comp.T
    xs = np.repeat(np.repeat(cols[:, None, None, :], k, 1), k, 2).reshape(-1, d)
    ys = np.repeat(np.repeat(cols[None, :, None, :], k, 0), k, 2).reshape(-1, d)
    zs = np.repeat(np.repeat(cols[None, None, :, :], k, 0), k, 1).reshape(-1, d)
    c = quot_coords(_triple_coords(m, xs, ys, zs)).reshape(k, k, k, k)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(check_samples):
        x, y, z = (m.random_element(rng).coords for _ in range(3))
        jx, jy, jz = (j @ (rng.standard_normal(j.shape[1])
                           + 1j * rng.standard_normal(j.shape[1]))
                      if j.shape[1] else 0.0 for _ in range(3))
        base = quot_coords(_triple_coords(m, x, y, z))
        pert = quot_coords(_triple_coords(m, x + jx, y + jy, z + jz))
        scale = max(1.0, float(np.linalg.norm(base)))
        worst = max(worst, float(np.linalg.norm(base - pert)) / scale)
    if worst > max(tol, 1e-9) * 10:
        raise NotAnIdeal(f"quotient product depends on representatives "
                         f"(residual {worst:.2e})")
    return TernarySpace.from_structure(c, validate=True, tol=max(tol, 1e-8))


def quotient_zettl_dims(m: TernarySpace, ideal: TernaryIdeal,
                        seed: int = 0) -> tuple:
    """Expected (plus, minus) dimensions of the quotient's splitting."""
    split = zettl_decompose(m, seed=seed)
    jp = mk.subspace_intersect(ideal.basis, split.plus_coords)
    jm = mk.subspace_intersect(ideal.basis, split.minus_coords)
    return (split.plus_coords.shape[1] - jp.shape[1],
            split.minus_coords.shape[1] - jm.shape[1])


# ---------------------------------------------------------------------------
# Quotient norm


@dataclass(frozen=True)
class QuotientNormResult:
    upper: float
    lower: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def to_dict(self):
        return {"upper": self.upper, "lower": self.lower, "gap": self.gap}


def _blockdiag(mats):
    sizes = [(a.shape[0], a.shape[1]) for a in mats]
    rr = sum(s[0] for s in sizes)
    cc = sum(s[1] for s in sizes)
    out = np.zeros((rr, cc), dtype=np.complex128)
    r0 = c0 = 0
    for a in mats:
        out[r0:r0 + a.shape[0], c0:c0 + a.shape[1]] = a
        r0 += a.shape[0]
        c0 += a.shape[1]
    return out


def quotient_norm(m: TernarySpace, ideal: TernaryIdeal, f,
                  restarts: int = 4, seed: int = 0) -> QuotientNormResult:
    """Certified bounds on the coset norm inf_{j in J} ||f - j||.

    The upper bound minimizes the block operator norm over the ideal
    (convex, so local polishing from several starts is reliable); the
    lower bound evaluates the best dual certificate, a unit-trace-norm
    functional vanishing on J.
    """
    m._need_blocks("quotient_norm")
    fv = as_coords(m, f)
    j = ideal.basis
    nj = j.shape[1]

    def big(coords):
        return _blockdiag(m.realize(coords))

    fmat = big(fv)
    if nj == 0:
        n = mk.op_norm(fmat)
        return QuotientNormResult(upper=n, lower=n)
    jmats = np.stack([big(j[:, i]) for i in range(nj)])

    def coset(tr):
        tc = tr[:nj] + 1j * tr[nj:]
        return fmat - np.tensordot(tc, jmats, axes=([0], [0]))

    def objective(tr):
        return mk.op_norm(coset(tr))

    def smooth_objective(tr, p=64.0):
        s = np.linalg.svd(coset(tr), compute_uv=False)
        top = s.max(initial=0.0)
        if top == 0.0:
            return 0.0
        return top * float(np.sum((s / top) ** p)) ** (1.0 / p)

    rng = np.random.default_rng(seed)
    # hs-orthogonal projection of f onto J is the exact minimizer for
    # block-supported ideals and a strong start in general
    t0 = j.conj().T @ fv
    starts = [np.concatenate([t0.real, t0.imag]), np.zeros(2 * nj)]
    for _ in range(restarts):
        starts.append(rng.standard_normal(2 * nj))

    best_t, best_val = None, np.inf
    for s0 in starts:
        res = scipy.optimize.minimize(smooth_objective, s0, method="L-BFGS-B",
                                      options={"maxiter": 300})
        res2 = scipy.optimize.minimize(
            objective, res.x, method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000,
                     "maxfev": 8000})
        val = objective(res2.x)
        if val < best_val:
            best_t, best_val = res2.x, val

    # dual certificate: top singular pair of the optimal coset, projected
    # onto the HS-orthocomplement of J, normalized in trace norm
    x = coset(best_t)
    u, _, vh = np.linalg.svd(x)
    w = np.outer(u[:, 0], vh[0, :])  # u1 v1*, the subgradient of the norm
    qj = mk.colspace(jmats.reshape(nj, -1).T)
    wf = w.ravel() - qj @ (qj.conj().T @ w.ravel())
    w = wf.reshape(w.shape)
    tracenorm = float(np.sum(np.linalg.svd(w, compute_uv=False)))
    lower = 0.0
    if tracenorm > 1e-14:
        lower = max(0.0, float(np.real(np.vdot(w, fmat))) / tracenorm)
    return QuotientNormResult(upper=float(best_val), lower=lower)
