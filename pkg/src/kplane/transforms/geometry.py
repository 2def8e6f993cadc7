"""k-planes in R^n: orthonormal frames, Haar sampling and distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Frame", "FlatParam", "haar_frame", "haar_frames", "point_flat_distance"]


@dataclass(frozen=True)
class Frame:
    """A k-dimensional subspace (``basis``, n x k) and its complement (n x (n-k))."""

    basis: np.ndarray
    complement: np.ndarray

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float))
        complement = np.atleast_2d(np.asarray(self.complement, dtype=float))
        if basis.shape[0] != complement.shape[0] or basis.shape[1] + complement.shape[1] != basis.shape[0]:
            raise ValueError("basis and complement do not split R^n")
        q = np.hstack([basis, complement])
        if not np.allclose(q.T @ q, np.eye(q.shape[1]), atol=1e-12, rtol=0):
            raise ValueError("frame columns are not orthonormal")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "complement", complement)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_matrix(cls, q, k):
        q = np.asarray(q, dtype=float)
        return cls(q[:, :k], q[:, k:])


@dataclass(frozen=True)
class FlatParam:
    """The affine plane ``{offset point + span(basis)}``.

    ``offset`` holds coordinates of the plane's foot point in the complement
    basis, so the plane never depends on how the offset was chosen.
    """

    frame: Frame
    offset: np.ndarray

    def __post_init__(self):
        offset = np.atleast_1d(np.asarray(self.offset, dtype=float))
        if offset.shape != (self.frame.n - self.frame.k,):
            raise ValueError(f"offset must have length n - k = {self.frame.n - self.frame.k}")
        object.__setattr__(self, "offset", offset)

    @property
    def foot(self) -> np.ndarray:
        return self.frame.complement @ self.offset

    def point(self, coords) -> np.ndarray:
        return self.foot + self.frame.basis @ np.asarray(coords, dtype=float)


def _orthonormalize(z):
    # QR with the sign of R's diagonal fixed, so the result is Haar on O(n).
    q, r = np.linalg.qr(z)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    return q * d[..., None, :]


def haar_frame(n: int, k: int, seed=None) -> Frame:
    """Frame whose k-subspace is distributed by the rotation-invariant measure."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    return Frame.from_matrix(_orthonormalize(rng.standard_normal((n, n))), k)


def haar_frames(n: int, k: int, count: int, rng) -> np.ndarray:
    """``count`` Haar orthogonal matrices stacked as (count, n, n); columns ``:k`` span the subspace."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    return _orthonormalize(rng.standard_normal((count, n, n)))


def point_flat_distance(x, flat: FlatParam) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (flat.frame.n,):
        raise ValueError(f"point has dimension {x.shape}, plane lives in R^{flat.frame.n}")
    return float(np.linalg.norm(flat.frame.complement.T @ x - flat.offset))
