"""Shared instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from ternlab import ternary as tern


def random_closure_space(rng, rows, cols, sign, n_gens=1):
    """A signed block generated by random matrices (product-closed span)."""
    gens = [rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
            for _ in range(n_gens)]
    return tern.ternary_closure(gens, sign)


def standard_instances():
    """Deterministic catalog of 20 named instances, dims <= 16."""
    rng = np.random.default_rng(20230520)
    e12 = np.zeros((2, 2), dtype=np.complex128)
    e12[0, 1] = 1.0
    e21 = e12.T.copy()
    out = [
        ("scalar-tro", tern.scalar_space(+1)),
        ("scalar-anti", tern.scalar_space(-1)),
        ("mixed-2", tern.direct_sum(tern.scalar_space(+1), tern.scalar_space(-1))),
        ("full-2x2-tro", tern.full_matrix_space(2, 2, +1)),
        ("full-2x2-anti", tern.full_matrix_space(2, 2, -1)),
        ("full-2x3-tro", tern.full_matrix_space(2, 3, +1)),
        ("full-3x2-anti", tern.full_matrix_space(3, 2, -1)),
        ("diag-2-tro", tern.diagonal_space(2, +1)),
        ("diag-3-anti", tern.diagonal_space(3, -1)),
        ("offdiag-tro", tern.ternary_closure([e12, e21], +1)),
        ("closure-3x3-tro", random_closure_space(rng, 3, 3, +1)),
        ("closure-3x3-anti", random_closure_space(rng, 3, 3, -1)),
        ("closure-2x2-two-gens", random_closure_space(rng, 2, 2, +1, n_gens=2)),
        ("mix-full-scalar", tern.direct_sum(tern.full_matrix_space(2, 2, +1),
                                            tern.scalar_space(-1))),
        ("mix-anti-diag", tern.direct_sum(tern.full_matrix_space(2, 2, -1),
                                          tern.diagonal_space(2, +1))),
        ("mix-closures", tern.direct_sum(random_closure_space(rng, 3, 2, +1),
                                         random_closure_space(rng, 2, 3, -1))),
        ("full-4x2-tro", tern.full_matrix_space(4, 2, +1)),
        ("full-2x4-anti", tern.full_matrix_space(2, 4, -1)),
        ("mix-three-blocks", tern.direct_sum(tern.diagonal_space(2, +1),
                                             tern.diagonal_space(2, -1),
                                             tern.scalar_space(+1))),
        ("full-4x4-tro", tern.full_matrix_space(4, 4, +1)),
    ]
    assert len(out) == 20
    assert all(m.dim <= 16 for _, m in out)
    return out


def mixed_split_instances():
    """20 block spaces with both parts present and known (dim+, dim-)."""
    rng = np.random.default_rng(77)
    out = []
    shapes = [(1, 1), (2, 2), (2, 1), (1, 3), (3, 2), (2, 3)]
    for k in range(20):
        r1, c1 = shapes[k % len(shapes)]
        r2, c2 = shapes[(k + 2) % len(shapes)]
        plus = (tern.full_matrix_space(r1, c1, +1) if k % 3 == 0
                else random_closure_space(rng, max(r1, 2), max(c1, 2), +1))
        minus = (tern.full_matrix_space(r2, c2, -1) if k % 3 == 1
                 else random_closure_space(rng, max(r2, 2), max(c2, 2), -1))
        m = tern.direct_sum(plus, minus)
        if m.dim > 16:
            m = tern.direct_sum(tern.diagonal_space(2, +1),
                                random_closure_space(rng, 2, 2, -1))
        out.append((f"mix-{k}", m, plus.dim, minus.dim))
    return out


def scramble(m, rng, max_cond=20.0):
    """Structure constants of m in a random well-conditioned basis."""
    c = tern.structure_constants_of(m).c
    d = m.dim
    while True:
        s = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        if np.linalg.cond(s) <= max_cond:
            break
    si = np.linalg.inv(s)
    c2 = np.einsum("pqrs,pi,qj,rk,ls->ijkl", c, s, s.conj(), s, si, optimize=True)
    return tern.TernarySpace.from_structure(c2, validate=True, tol=1e-7), s


@pytest.fixture(scope="session")
def catalog():
    return standard_instances()
