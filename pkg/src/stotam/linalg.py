"""Dense linear-algebra kernels used by the recovery algorithms.

Thin QR with a deterministic sign convention, minimum-norm least squares,
and truncated left singular vectors.  All routines are pure functions and
deterministic: identical input bits give identical output bits, which the
benchmark harness relies on for reproducible traces.
"""

import numpy as np

__all__ = [
    "RankDeficiencyError",
    "thin_qr",
    "lstsq_minnorm",
    "top_left_singular_vectors",
]

# R diagonals below this fraction of ||A||_F count as rank deficient.
RANK_TOL = 1e-12

# Gram condition estimate above which lstsq falls back to the SVD path.
_COND_LIMIT = 1e8


class RankDeficiencyError(np.linalg.LinAlgError):
    """A matrix that must have full column rank numerically does not."""


def thin_qr(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced QR with the R diagonal forced nonnegative.

    The sign fix makes the decomposition a deterministic function of the
    input, so retraction-based iterations are reproducible across runs.

    Raises RankDeficiencyError when any (sign-fixed) diagonal entry of R
    falls below ``RANK_TOL * ||a||_F``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise ValueError(f"thin_qr needs rows >= cols, got shape {a.shape}")
    q, r = np.linalg.qr(a, mode="reduced")
    signs = np.sign(np.diagonal(r)).copy()
    signs[signs == 0.0] = 1.0
    q = q * signs
    r = r * signs[:, None]
    if not np.all(np.diagonal(r) > RANK_TOL * np.linalg.norm(a)):
        raise RankDeficiencyError(
            f"matrix of shape {a.shape} is numerically rank deficient"
        )
    return q, r


def lstsq_minnorm(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution ``pinv(a) @ y``.

    Tall well-conditioned systems are solved through a QR factorization
    (the common case in the core update, where the system is small and
    overdetermined); anything rank deficient or underdetermined goes
    through the SVD-backed solver, which returns the minimum-norm
    solution silently.
    """
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    if a.ndim != 2 or y.ndim != 1 or y.size != a.shape[0]:
        raise ValueError(f"incompatible shapes {a.shape} and {y.shape}")
    rows, cols = a.shape
    if rows >= cols and cols > 0:
        q, r = np.linalg.qr(a, mode="reduced")
        d = np.abs(np.diagonal(r))
        dmax = d.max()
        if dmax > 0.0 and d.min() > dmax / _COND_LIMIT:
            return np.linalg.solve(r, q.T @ y)
    return np.linalg.lstsq(a, y, rcond=None)[0]


def top_left_singular_vectors(mat: np.ndarray, rank: int) -> np.ndarray:
    """Leading ``rank`` left singular vectors of ``mat``, as orthonormal columns.

    Computed from the full reduced SVD; ties at the truncation boundary
    keep the decomposition's own descending order.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={mat.ndim}")
    if not 1 <= rank <= min(mat.shape):
        raise ValueError(f"rank {rank} out of range for shape {mat.shape}")
    u = np.linalg.svd(mat, full_matrices=False)[0]
    return u[:, :rank].copy()
