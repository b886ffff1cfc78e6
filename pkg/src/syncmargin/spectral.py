"""Symmetric eigendecomposition and the spectral inputs to the margin formulas.

The eigensolver is a cyclic Jacobi iteration: robust for dense symmetric
matrices at the target scale (N up to a couple thousand), with accuracy far
below the 1e-8 relative tolerance the downstream checks require. Rotations
with a pivot below a per-sweep threshold are skipped; convergence is declared
when the off-diagonal Frobenius norm falls below 1e-12 of the input norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import LaplacianSplit

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_DIAG_TOL = 1e-12
DISCONNECTION_TOL = 1e-10


class EigenConvergenceError(RuntimeError):
    """Jacobi iteration did not reach the off-diagonal tolerance in budget."""


class DisconnectedGraphError(RuntimeError):
    """Graph is effectively disconnected: lambda_2 vanishes relative to lambda_N."""


@dataclass(frozen=True)
class SpectralSummary:
    """Spectrum of L plus the split-Laplacian extremes entering the margin.

    tau = lambdaN_U / (lambdaN_U + lambda2_D) locates the stochastic edges:
    1 when the deterministic subgraph is disconnected, 0 when there are no
    stochastic edges at all.
    """

    eigenvalues: np.ndarray
    lambda2: float
    lambdaN: float
    lambda2_D: float
    lambdaN_U: float
    tau: float

    @classmethod
    def from_extremes(cls, lambda2: float, lambdaN: float, tau: float) -> "SpectralSummary":
        """Synthetic summary for formula-space sweeps.

        Used where the margin is evaluated on abstract (lambda2, lambdaN, tau)
        coordinates rather than a concrete graph. The split extremes are
        chosen consistent with tau.
        """
        if not 0 <= tau <= 1:
            raise ValueError(f"tau must be in [0, 1], got {tau}")
        eigs = np.array([0.0, lambda2, lambdaN]) if lambdaN > lambda2 else np.array([0.0, lambda2])
        return cls(
            eigenvalues=eigs,
            lambda2=lambda2,
            lambdaN=lambdaN,
            lambda2_D=1.0 - tau,
            lambdaN_U=tau,
            tau=tau,
        )


@dataclass(frozen=True)
class OrthonormalComplement:
    """N x (N-1) matrix whose orthonormal columns span the complement of the all-ones vector."""

    U: np.ndarray


@njit(cache=True, fastmath=True, nogil=True)
def _jacobi_cyclic(A, Vt, tol_off, max_sweeps):  # pragma: no cover - exercised via symmetric_eigen
    """Cyclic Jacobi on symmetric A, in place. Rows of Vt accumulate eigenvectors.

    Returns the number of sweeps used, or -1 if the off-diagonal norm is
    still above tol_off after max_sweeps.
    """
    n = A.shape[0]
    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += A[i, j] * A[i, j]
        if 2.0 * off2 <= tol_off * tol_off:
            return sweep
        if sweep == max_sweeps:
            return -1
        skip = tol_off / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # contiguous row update, then mirror into the columns
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    A[k, p] = A[p, k]
                    A[k, q] = A[q, k]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    vpk = Vt[p, k]
                    vqk = Vt[q, k]
                    Vt[p, k] = c * vpk - s * vqk
                    Vt[q, k] = s * vpk + c * vqk
    return -1


def symmetric_eigen(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Args:
        M: symmetric matrix (relative asymmetry at most 1e-10).

    Returns:
        (w, V): eigenvalues ascending and the matrix whose columns are the
        matching orthonormal eigenvectors, M @ V[:, k] = w[k] * V[:, k].

    Raises:
        ValueError: input is not square or not symmetric within tolerance.
        EigenConvergenceError: sweep budget exhausted before convergence.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = np.abs(M).max()
    if scale > 0 and np.abs(M - M.T).max() > 1e-10 * scale:
        raise ValueError("matrix is not symmetric within 1e-10 relative tolerance")
    A = np.array(M, dtype=np.float64, copy=True)
    Vt = np.eye(A.shape[0])
    tol_off = JACOBI_OFF_DIAG_TOL * np.linalg.norm(M, "fro")
    sweeps = _jacobi_cyclic(A, Vt, tol_off, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise EigenConvergenceError(
            f"Jacobi not converged after {JACOBI_MAX_SWEEPS} sweeps on shape {M.shape}"
        )
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], Vt[order].T.copy()


def _pattern_connected(M: np.ndarray) -> bool:
    """Connectivity of the graph whose edges are the nonzero off-diagonals of M."""
    n = M.shape[0]
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        nbrs = np.nonzero(M[u])[0]
        for v in nbrs:
            if v != u and not seen[v]:
                seen[v] = True
                stack.append(int(v))
    return bool(seen.all())


def spectral_summary(split: LaplacianSplit) -> SpectralSummary:
    """All spectral quantities the margin needs, from one Laplacian split.

    L, L_D and L_U are decomposed separately (no perturbative shortcuts).
    lambda2_D is exactly 0 when the deterministic subgraph is disconnected,
    so tau is exactly 1 there; tau is exactly 0 when no edge is stochastic.

    Raises:
        DisconnectedGraphError: lambda_2 <= 1e-10 * lambda_N, i.e. the
            nominal graph is effectively disconnected.
    """
    w, _ = symmetric_eigen(split.L)
    lambdaN = float(w[-1])
    lambda2 = float(w[1])
    if lambda2 <= DISCONNECTION_TOL * lambdaN:
        raise DisconnectedGraphError(
            f"graph effectively disconnected: lambda2={lambda2:g} vs lambdaN={lambdaN:g}"
        )
    if not split.L_U.any():
        return SpectralSummary(
            eigenvalues=w, lambda2=lambda2, lambdaN=lambdaN,
            lambda2_D=lambda2, lambdaN_U=0.0, tau=0.0,
        )
    wU, _ = symmetric_eigen(split.L_U)
    lambdaN_U = max(float(wU[-1]), 0.0)
    if not split.L_D.any() or not _pattern_connected(split.L_D):
        lambda2_D = 0.0
    else:
        wD, _ = symmetric_eigen(split.L_D)
        lambda2_D = max(float(wD[1]), 0.0)
    tau = 1.0 if lambda2_D == 0.0 else lambdaN_U / (lambdaN_U + lambda2_D)
    return SpectralSummary(
        eigenvalues=w, lambda2=lambda2, lambdaN=lambdaN,
        lambda2_D=lambda2_D, lambdaN_U=lambdaN_U, tau=tau,
    )


def orthonormal_complement(n: int) -> OrthonormalComplement:
    """Deterministic orthonormal basis of the subspace orthogonal to all-ones.

    Column m (1-based) has 1/sqrt(m(m+1)) on the first m coordinates and
    -m/sqrt(m(m+1)) on coordinate m+1. Fixed construction so that
    reduced-space quantities are reproducible everywhere.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    U = np.zeros((n, n - 1))
    for m in range(1, n):
        c = 1.0 / np.sqrt(m * (m + 1.0))
        U[:m, m - 1] = c
        U[m, m - 1] = -m * c
    return OrthonormalComplement(U=U)


def ring_lattice_spectrum(n: int, k: int) -> np.ndarray:
    """Closed-form Laplacian spectrum of ring_lattice(n, k), sorted ascending.

    The lattice is circulant, so eigenvalue j is
    2k - 2 * sum_{m=1..k} cos(2 pi m j / n).
    """
    if n < 3 or not 1 <= k <= (n - 1) // 2:
        raise ValueError(f"invalid ring lattice n={n}, k={k}")
    j = np.arange(n)[:, None]
    m = np.arange(1, k + 1)[None, :]
    eigs = 2.0 * k - 2.0 * np.cos(2.0 * np.pi * m * j / n).sum(axis=1)
    return np.sort(eigs)
