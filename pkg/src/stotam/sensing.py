"""Gaussian linear measurement operator and mini-batch plan.

The operator is stored densely as an ``m x (n1*n2*n3)`` matrix whose row i
is ``vectorize(A_i)``; applying the operator is then a single matvec and a
batch is a contiguous row slice.  Measurements are plain 1-D float arrays.
"""

import math
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .tensor_ops import devectorize, vectorize

__all__ = [
    "SensingEnsemble",
    "MiniBatchPlan",
    "gaussian_ensemble",
    "apply_operator",
    "adjoint_proxy",
    "measure",
    "batch_rows",
    "save_ensemble",
    "load_ensemble",
]

_MAGIC = b"TSNS1"
_HEADER = struct.Struct("<3IQ")


@dataclass(frozen=True)
class SensingEnsemble:
    """A linear operator given by ``m`` sensing tensors of shape ``dims``."""

    dims: tuple[int, int, int]
    a_mat: np.ndarray  # (m, n1*n2*n3), row i = vectorize(A_i)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise ValueError(f"invalid dims {self.dims}")
        a_mat = np.asarray(self.a_mat, dtype=float)
        if a_mat.ndim != 2 or a_mat.shape[0] < 1 or a_mat.shape[1] != math.prod(dims):
            raise ValueError(
                f"a_mat shape {a_mat.shape} inconsistent with dims {dims}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "a_mat", a_mat)

    @property
    def m(self) -> int:
        return self.a_mat.shape[0]

    @cached_property
    def tensors(self) -> np.ndarray:
        """The sensing tensors stacked as a C-contiguous ``(m, n1, n2, n3)`` array."""
        n1, n2, n3 = self.dims
        stacked = self.a_mat.reshape(self.m, n3, n2, n1).transpose(0, 3, 2, 1)
        return np.ascontiguousarray(stacked)


@dataclass(frozen=True)
class MiniBatchPlan:
    """Partition of ``m`` measurements into contiguous batches of size ``b``.

    Batches are disjoint and cover all rows; the last batch is smaller when
    ``b`` does not divide ``m``.  Batch indices are 0-based.
    """

    m: int
    b: int

    def __post_init__(self):
        if not 1 <= self.b <= self.m:
            raise ValueError(f"batch size {self.b} out of range for m={self.m}")

    @property
    def batch_count(self) -> int:
        return -(-self.m // self.b)

    def batch_slice(self, i: int) -> slice:
        if not 0 <= i < self.batch_count:
            raise IndexError(f"batch index {i} out of range [0, {self.batch_count})")
        return slice(i * self.b, min((i + 1) * self.b, self.m))


def gaussian_ensemble(dims: tuple[int, int, int], m: int, seed) -> SensingEnsemble:
    """Ensemble with i.i.d. N(0, 1/m) entries from a seeded generator.

    ``seed`` is anything ``numpy.random.default_rng`` accepts; the entry
    stream is a single ``(m, n1*n2*n3)`` normal draw, so the output is a
    pure function of ``(dims, m, seed)``.
    """
    if m < 1:
        raise ValueError(f"need at least one measurement, got m={m}")
    rng = np.random.default_rng(seed)
    n = math.prod(int(d) for d in dims)
    a_mat = rng.normal(0.0, 1.0 / math.sqrt(m), size=(m, n))
    return SensingEnsemble(tuple(dims), a_mat)


def apply_operator(ensemble: SensingEnsemble, x: np.ndarray) -> np.ndarray:
    """Measurement vector with entries ``inner(A_i, x)``."""
    x = np.asarray(x, dtype=float)
    if x.shape != ensemble.dims:
        raise ValueError(f"tensor dims {x.shape} do not match ensemble dims {ensemble.dims}")
    return ensemble.a_mat @ vectorize(x)


def adjoint_proxy(ensemble: SensingEnsemble, y: np.ndarray) -> np.ndarray:
    """Back-projection ``(1/m) * sum_i y_i A_i`` of a measurement vector."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.size != ensemble.m:
        raise ValueError(f"measurement vector length {y.size} != m={ensemble.m}")
    return devectorize(ensemble.a_mat.T @ (y / ensemble.m), ensemble.dims)


def measure(ensemble: SensingEnsemble, x_star: np.ndarray) -> np.ndarray:
    """Noiseless measurements of a ground-truth tensor."""
    return apply_operator(ensemble, x_star)


def batch_rows(
    ensemble: SensingEnsemble, y: np.ndarray, plan: MiniBatchPlan, i: int
) -> tuple[np.ndarray, np.ndarray]:
    """Row slice of the operator matrix and the matching measurements for batch ``i``."""
    if plan.m != ensemble.m:
        raise ValueError(f"plan covers {plan.m} rows but ensemble has {ensemble.m}")
    y = np.asarray(y, dtype=float)
    if y.size != ensemble.m:
        raise ValueError(f"measurement vector length {y.size} != m={ensemble.m}")
    s = plan.batch_slice(i)
    return ensemble.a_mat[s], y[s]


def save_ensemble(ensemble: SensingEnsemble, path) -> None:
    """Binary dump: magic ``TSNS1``, dims as 3 LE uint32, m as LE uint64,
    then ``a_mat`` as row-major LE float64."""
    payload = np.ascontiguousarray(ensemble.a_mat, dtype="<f8").tobytes()
    header = _MAGIC + _HEADER.pack(*ensemble.dims, ensemble.m)
    Path(path).write_bytes(header + payload)


def load_ensemble(path) -> SensingEnsemble:
    """Read back a dump written by :func:`save_ensemble`."""
    raw = Path(path).read_bytes()
    head = len(_MAGIC) + _HEADER.size
    if len(raw) < head or raw[: len(_MAGIC)] != _MAGIC:
        raise ValueError(f"{path}: not a sensing-ensemble dump")
    n1, n2, n3, m = _HEADER.unpack(raw[len(_MAGIC) : head])
    n = n1 * n2 * n3
    if len(raw) != head + 8 * m * n:
        raise ValueError(f"{path}: truncated or oversized payload")
    a_mat = np.frombuffer(raw, dtype="<f8", offset=head).reshape(m, n).copy()
    return SensingEnsemble((n1, n2, n3), a_mat)
