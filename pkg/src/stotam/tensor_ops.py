"""Dense third-order tensor primitives.

A tensor is a float ndarray of shape ``(n1, n2, n3)``.  The flat element
order used by :func:`vectorize` (and by the rows of the sensing operator)
is mode-1 fastest: entry ``(i1, i2, i3)`` sits at linear position
``i1 + i2*n1 + i3*n1*n2`` (zero-based).  The mode-k unfolding puts the
mode-k index on the rows and enumerates the remaining indices along the
columns with the lower-numbered mode varying fastest.

These two conventions are chosen to be mutually consistent: for a core
``S`` and factors ``U1, U2, U3``,

    vectorize(S x1 U1 x2 U2 x3 U3) == kron(U3, kron(U2, U1)) @ vectorize(S)

and ``unfold(S x1 U1 x2 U2 x3 U3, 1) == U1 @ unfold(S, 1) @ kron(U3, U2).T``
(with ``kron(U3, U1)`` and ``kron(U2, U1)`` for modes 2 and 3).

Mode arguments are 1-based (``mode in {1, 2, 3}``); array indexing is
plain numpy.  All operations are pure functions of their inputs.
"""

import math

import numpy as np

__all__ = [
    "unfold",
    "fold",
    "mode_product",
    "inner",
    "fro_norm",
    "vectorize",
    "devectorize",
    "kron",
]


def _check_mode(mode: int) -> None:
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")


def unfold(x: np.ndarray, mode: int) -> np.ndarray:
    """Mode-k unfolding of a third-order tensor into an ``n_k x (N/n_k)`` matrix."""
    _check_mode(mode)
    x = np.asarray(x, dtype=float)
    if x.ndim != 3:
        raise ValueError(f"expected a third-order tensor, got ndim={x.ndim}")
    return np.reshape(np.moveaxis(x, mode - 1, 0), (x.shape[mode - 1], -1), order="F")


def fold(mat: np.ndarray, mode: int, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`unfold`: refold a mode-k unfolding into shape ``dims``."""
    _check_mode(mode)
    mat = np.asarray(mat, dtype=float)
    dims = tuple(int(d) for d in dims)
    rest = [d for i, d in enumerate(dims) if i != mode - 1]
    expected = (dims[mode - 1], math.prod(rest))
    if mat.ndim != 2 or mat.shape != expected:
        raise ValueError(f"mode-{mode} unfolding of {dims} must have shape {expected}, got {mat.shape}")
    moved = np.reshape(mat, (dims[mode - 1], *rest), order="F")
    return np.moveaxis(moved, 0, mode - 1)


def mode_product(x: np.ndarray, u: np.ndarray, mode: int) -> np.ndarray:
    """Mode-k product: the tensor whose mode-k unfolding is ``u @ unfold(x, mode)``."""
    _check_mode(mode)
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[1] != x.shape[mode - 1]:
        raise ValueError(
            f"mode-{mode} product needs u with {x.shape[mode - 1]} columns, got shape {u.shape}"
        )
    return np.moveaxis(np.tensordot(x, u, axes=(mode - 1, 1)), -1, mode - 1)


def inner(x: np.ndarray, y: np.ndarray) -> float:
    """Entrywise inner product of two tensors with identical dims."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.dot(x.ravel(), y.ravel()))


def fro_norm(x: np.ndarray) -> float:
    """Frobenius norm, ``sqrt(inner(x, x))``."""
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def vectorize(x: np.ndarray) -> np.ndarray:
    """Flatten a tensor in mode-1-fastest order (column-major vec of ``unfold(x, 1)``)."""
    return np.asarray(x, dtype=float).reshape(-1, order="F")


def devectorize(v: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=float)
    dims = tuple(int(d) for d in dims)
    if v.ndim != 1 or v.size != math.prod(dims):
        raise ValueError(f"cannot devectorize length-{v.size} into dims {dims}")
    return v.reshape(dims, order="F")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
