"""Tucker factorizations: value type, truncated HOSVD, ground truth, retraction."""

from dataclasses import dataclass

import numpy as np

from .linalg import thin_qr, top_left_singular_vectors
from .tensor_ops import mode_product, unfold

__all__ = [
    "ORTHO_TOL",
    "TuckerFactors",
    "reconstruct",
    "hosvd_truncate",
    "random_ground_truth",
    "qr_retraction",
]

# Allowed deviation of each factor's Gram matrix from the identity.
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class TuckerFactors:
    """A core tensor plus three factor matrices with orthonormal columns."""

    core: np.ndarray  # (r1, r2, r3)
    factors: tuple[np.ndarray, np.ndarray, np.ndarray]  # U_k: (n_k, r_k)

    def __post_init__(self):
        core = np.asarray(self.core, dtype=float)
        factors = tuple(np.asarray(u, dtype=float) for u in self.factors)
        if core.ndim != 3 or len(factors) != 3:
            raise ValueError("need a third-order core and exactly three factors")
        for k, u in enumerate(factors):
            if u.ndim != 2 or u.shape[1] != core.shape[k]:
                raise ValueError(
                    f"factor {k + 1} shape {u.shape} does not match core rank {core.shape[k]}"
                )
            if u.shape[0] < u.shape[1]:
                raise ValueError(f"factor {k + 1} has rank {u.shape[1]} > dim {u.shape[0]}")
            gram_err = np.linalg.norm(u.T @ u - np.eye(u.shape[1]))
            if gram_err > ORTHO_TOL:
                raise ValueError(
                    f"factor {k + 1} is not orthonormal (||U'U - I|| = {gram_err:.3e})"
                )
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "factors", factors)

    @property
    def ranks(self) -> tuple[int, int, int]:
        return self.core.shape

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(u.shape[0] for u in self.factors)


def reconstruct(f: TuckerFactors) -> np.ndarray:
    """Assemble the full tensor ``core x1 U1 x2 U2 x3 U3``."""
    x = f.core
    for k, u in enumerate(f.factors, start=1):
        x = mode_product(x, u, k)
    return x


def hosvd_truncate(x: np.ndarray, ranks: tuple[int, int, int]) -> TuckerFactors:
    """Rank-``ranks`` Tucker approximation by truncated HOSVD.

    Each factor is the leading left singular vectors of the corresponding
    unfolding of ``x`` itself (no sequential truncation), and the core is
    ``x`` contracted with the factor transposes.
    """
    x = np.asarray(x, dtype=float)
    ranks = tuple(int(r) for r in ranks)
    if x.ndim != 3 or len(ranks) != 3:
        raise ValueError("need a third-order tensor and three target ranks")
    for k, (n, r) in enumerate(zip(x.shape, ranks), start=1):
        if not 1 <= r <= n:
            raise ValueError(f"mode-{k} rank {r} out of range [1, {n}]")
    factors = tuple(
        top_left_singular_vectors(unfold(x, k), ranks[k - 1]) for k in (1, 2, 3)
    )
    core = x
    for k, u in enumerate(factors, start=1):
        core = mode_product(core, u.T, k)
    return TuckerFactors(core, factors)


def random_ground_truth(
    dims: tuple[int, int, int], ranks: tuple[int, int, int], seed
) -> tuple[TuckerFactors, np.ndarray]:
    """Random low-rank target: Gaussian core, orthonormalized Gaussian factors.

    The seeded stream is consumed in a fixed order (core, then U1, U2, U3)
    so the output is reproducible.  Returns the factors and the assembled
    full tensor.
    """
    rng = np.random.default_rng(seed)
    ranks = tuple(int(r) for r in ranks)
    core = rng.standard_normal(ranks)
    factors = []
    for n, r in zip(dims, ranks):
        q, _ = thin_qr(rng.standard_normal((int(n), r)))
        factors.append(q)
    f = TuckerFactors(core, tuple(factors))
    return f, reconstruct(f)


def qr_retraction(u_tilde: np.ndarray) -> np.ndarray:
    """Map a perturbed factor back onto the orthonormal-column manifold.

    Returns the Q factor of the sign-fixed thin QR, so orthonormal inputs
    come back unchanged.  Propagates RankDeficiencyError for degenerate
    inputs; callers treat that as a fatal divergence for the run.
    """
    return thin_qr(u_tilde)[0]
