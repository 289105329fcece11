"""Dense complex Hermitian eigensolver and matrix functions.

Self-contained Householder tridiagonalization followed by an implicit QL
iteration with Wilkinson-style shifts (the classic tql2 scheme, extended to
complex Hermitian input by absorbing off-diagonal phases into a diagonal
unitary).  Hilbert-space dimensions in this package stay below ~150, so a
dense O(n^3) solver is sufficient and keeps the eigenvalue ordering and
eigenvector phase conventions fully deterministic.

All tolerances are absolute/relative hybrids: a quantity x passes a check at
tolerance ``tol`` when ``|x| <= tol * max(1, scale)`` where ``scale`` is the
max-modulus entry of the matrix involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
_MAX_QL_ITERATIONS = 64


class LinalgError(ValueError):
    """Raised when an input violates a documented matrix invariant."""


def matrix_scale(m: np.ndarray) -> float:
    """Hybrid scale max(1, max|m_ij|) used by all tolerance checks."""
    if m.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(m))))


def hermiticity_defect(m: np.ndarray) -> float:
    """max|M - M^dagger| relative to max(1, max|M|)."""
    return float(np.max(np.abs(m - m.conj().T))) / matrix_scale(m)


def require_square(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"{what} must be square, got shape {m.shape}")
    return m


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL,
                      what: str = "matrix") -> np.ndarray:
    """Validate and return m as complex128; reject non-Hermitian input."""
    m = require_square(m, what)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise LinalgError(
            f"{what} violates Hermiticity: max|M - M^dagger| = "
            f"{defect:.3e} (relative), tolerance {tol:.1e}")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending, real) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """V diag(E) V^dagger; used as the reconstruction oracle in tests."""
        return (self.vectors * self.values) @ self.vectors.conj().T


def _householder_tridiagonalize(a: np.ndarray, want_vectors: bool):
    """Reduce Hermitian a in place to tridiagonal form.

    Returns (d, e, q): real diagonal d, complex subdiagonal e (e[i] couples
    i and i+1), and the accumulated unitary q with a = q T q^dagger
    (q is None when want_vectors is False).
    """
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128) if want_vectors else None
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        # Skip the reflection when the column is already tridiagonal.
        if np.linalg.norm(x[1:]) <= 1e-300:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0.0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm <= 1e-300:
            continue
        v /= vnorm
        sub = a[k + 1:, k + 1:]
        w = sub @ v
        kappa = np.real(np.vdot(v, w))  # v†Av is real for Hermitian A
        u = w - kappa * v
        sub -= 2.0 * np.outer(v, u.conj())
        sub -= 2.0 * np.outer(u, v.conj())
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        if q is not None:
            block = q[:, k + 1:]
            block -= 2.0 * np.outer(block @ v, v.conj())
    d = np.real(np.diag(a)).copy()
    e = np.diag(a, -1).astype(np.complex128).copy()
    return d, e, q


def _absorb_phases(e: np.ndarray, q):
    """Rotate complex subdiagonal e to |e| by a diagonal unitary folded into q."""
    n = len(e) + 1
    s = np.ones(n, dtype=np.complex128)
    for i in range(n - 1):
        mag = abs(e[i])
        s[i + 1] = s[i] * (e[i] / mag) if mag > 0.0 else s[i]
    if q is not None:
        q *= s[np.newaxis, :]
    return np.abs(e)


def _tql(d: np.ndarray, e: np.ndarray, z):
    """Implicit QL with Wilkinson shifts on a real symmetric tridiagonal.

    d: diagonal (modified in place to eigenvalues), e: subdiagonal
    (length n, last entry scratch), z: complex matrix whose columns are
    rotated alongside (or None for eigenvalues only).
    """
    n = len(d)
    if n == 1:
        return
    eps = np.finfo(float).eps
    ee = np.zeros(n)
    ee[: n - 1] = e
    for l in range(n):
        iteration = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            iteration += 1
            if iteration > _MAX_QL_ITERATIONS:
                raise LinalgError(
                    f"QL iteration failed to converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zi = z[:, i].copy()
                    z[:, i] = c * zi - s * z[:, i + 1]
                    z[:, i + 1] = s * zi + c * z[:, i + 1]
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0


def _fix_phases(vectors: np.ndarray) -> None:
    """Deterministic gauge: largest-modulus component real positive."""
    n = vectors.shape[1]
    for j in range(n):
        col = vectors[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        mag = abs(pivot)
        if mag > 0.0:
            col *= np.conj(pivot) / mag


def eig_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned ascending; within degenerate clusters the
    ordering is the stable sort order and each eigenvector carries the
    real-positive-pivot phase gauge, so repeated calls are bit-identical.
    """
    m = require_hermitian(m, tol=tol)
    a = m.copy()
    d, e, q = _householder_tridiagonalize(a, want_vectors=True)
    e_real = _absorb_phases(e, q)
    _tql(d, e_real, q)
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = q[:, order]
    _fix_phases(vectors)
    return EigenDecomposition(values=values, vectors=vectors)


def eigvals_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending eigenvalues only (cheaper inner loop, no vector updates)."""
    m = require_hermitian(m, tol=tol)
    a = m.copy()
    d, e, _ = _householder_tridiagonalize(a, want_vectors=False)
    e_real = _absorb_phases(e, None)
    _tql(d, e_real, None)
    d.sort()
    return d


def expm_hermitian(m: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * m) for Hermitian m, via the eigendecomposition.

    Unitary to round-off whenever scale is purely imaginary.
    """
    dec = eig_hermitian(m)
    phases = np.exp(scale * dec.values)
    return (dec.vectors * phases) @ dec.vectors.conj().T
