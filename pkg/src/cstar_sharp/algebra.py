"""Primitive calculus on k x k complex matrices.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; they
stand in for elements of the unital C*-algebra ``M_k(C)``.  Hermitian
elements carry a cached Jacobi eigendecomposition (:class:`HermElement`) so
that square roots and inverse square roots are spectral functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, DomainError, NotHermitian
from .jacobi import jacobi_eigh


@dataclass(frozen=True)
class ToleranceConfig:
    herm_tol: float = 1e-10
    psd_tol: float = 1e-9
    recon_tol: float = 1e-9
    eq_tol: float = 1e-8
    inv_tol: float = 1e-10

    def __post_init__(self):
        for name in ("herm_tol", "psd_tol", "recon_tol", "eq_tol", "inv_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def with_eq_tol(self, eq_tol: float) -> "ToleranceConfig":
        """Set ``eq_tol`` and rescale the other tolerances by the same factor."""
        factor = eq_tol / self.eq_tol
        return replace(
            self,
            herm_tol=self.herm_tol * factor,
            psd_tol=self.psd_tol * factor,
            recon_tol=self.recon_tol * factor,
            eq_tol=eq_tol,
            inv_tol=self.inv_tol * factor,
        )


DEFAULT_TOL = ToleranceConfig()


def as_cmatrix(a, square: bool = True) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - adjoint(a)), initial=0.0))


def is_hermitian(a: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    scale = 1.0 + float(np.max(np.abs(a), initial=0.0))
    return hermitian_residual(a) <= tol.herm_tol * scale


def _require_hermitian(a: np.ndarray, tol: ToleranceConfig, what: str = "matrix") -> None:
    if not is_hermitian(a, tol):
        raise NotHermitian(
            f"{what} is not Hermitian: symmetry residual {hermitian_residual(a):.3e}"
        )


@dataclass(frozen=True)
class HermElement:
    """A Hermitian matrix together with its eigendecomposition.

    ``eigenvalues`` are nondecreasing and ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.  When eigenvalues are
    degenerate the basis of each eigenspace is arbitrary; only functions of
    the whole decomposition are meaningful.
    """

    base: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cached: bool = True
    sweeps: int = field(default=0, compare=False)

    @property
    def k(self) -> int:
        return self.base.shape[0]

    def scale(self) -> float:
        """``max(1, max |eigenvalue|)``, the reference magnitude for thresholds."""
        return max(1.0, float(np.max(np.abs(self.eigenvalues), initial=0.0)))

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ adjoint(v)

    def check(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        """Validate the cached decomposition; raises ``ValueError`` on failure."""
        base_f = np.linalg.norm(self.base)
        recon = np.linalg.norm(self.reconstruct() - self.base)
        if recon > tol.recon_tol * (1.0 + base_f):
            raise ValueError(f"eigendecomposition residual {recon:.3e} too large")
        v = self.eigenvectors
        ortho = np.linalg.norm(adjoint(v) @ v - np.eye(self.k))
        if ortho > tol.recon_tol:
            raise ValueError(f"eigenvectors not orthonormal (residual {ortho:.3e})")
        if np.any(np.diff(self.eigenvalues) < 0):
            raise ValueError("eigenvalues not sorted")

    def is_invertible(self, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return float(np.min(np.abs(self.eigenvalues))) >= tol.inv_tol * self.scale()


def herm_eig(a, tol: ToleranceConfig = DEFAULT_TOL) -> HermElement:
    """Jacobi eigendecomposition of a Hermitian matrix.

    Raises :class:`NotHermitian` when the symmetry residual exceeds
    ``tol.herm_tol``.
    """
    if isinstance(a, HermElement):
        return a
    a = as_cmatrix(a)
    _require_hermitian(a, tol)
    w, v, sweeps = jacobi_eigh(a)
    return HermElement(base=a, eigenvalues=w, eigenvectors=v, cached=True, sweeps=sweeps)


def matrix_fn(
    a,
    f: Callable[[np.ndarray], np.ndarray],
    domain: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> np.ndarray:
    """Apply a real scalar function through the spectral decomposition.

    ``f`` receives the eigenvalue array and must return an array of the same
    shape.  ``domain`` is an optional predicate on the eigenvalue array; any
    eigenvalue it rejects raises :class:`DomainError`.
    """
    h = herm_eig(a, tol)
    lam = h.eigenvalues
    if domain is not None:
        ok = np.asarray(domain(lam), dtype=bool)
        if not np.all(ok):
            bad = lam[~ok]
            raise DomainError(f"eigenvalue(s) {bad.tolist()} outside the function's domain")
    values = np.asarray(f(lam), dtype=np.float64)
    v = h.eigenvectors
    out = (v * values) @ adjoint(v)
    return 0.5 * (out + adjoint(out))


def _clamped_spectrum(h: HermElement, tol: ToleranceConfig) -> np.ndarray:
    lam = h.eigenvalues
    floor = -tol.psd_tol * h.scale()
    if np.any(lam < floor):
        raise DomainError(
            f"eigenvalue {float(lam.min()):.3e} is below -psd_tol*scale ({floor:.3e})"
        )
    return np.where(lam < 0.0, 0.0, lam)


def sqrtm_psd(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Positive square root; roundoff negatives within ``psd_tol`` clamp to 0."""
    h = herm_eig(a, tol)
    lam = _clamped_spectrum(h, tol)
    return matrix_fn(h, lambda _: np.sqrt(lam), tol=tol)


def inv_sqrtm(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``a^(-1/2)`` for a positive invertible element.

    Raises :class:`DomainError` for an eigenvalue below ``inv_tol * scale``.
    """
    h = herm_eig(a, tol)
    lam = _clamped_spectrum(h, tol)
    floor = tol.inv_tol * h.scale()
    return matrix_fn(h, lambda _: 1.0 / np.sqrt(lam), domain=lambda _: lam >= floor, tol=tol)


def abs_element(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Left absolute value ``(a a^*)^(1/2)``."""
    a = as_cmatrix(a)
    return sqrtm_psd(a @ adjoint(a), tol)


def _pair(a, b, tol):
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    _require_hermitian(a, tol, "left operand")
    _require_hermitian(b, tol, "right operand")
    return a, b


def loewner_margin(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of ``b - a``; nonnegative iff ``a <= b``."""
    a, b = _pair(a, b, tol)
    return float(herm_eig(b - a, tol).eigenvalues[0])


def loewner_leq(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``a <= b`` in the Loewner order, with slack ``psd_tol * (1 + ||b - a||_F)``."""
    a, b = _pair(a, b, tol)
    diff = b - a
    lam_min = float(herm_eig(diff, tol).eigenvalues[0])
    return lam_min >= -tol.psd_tol * (1.0 + float(np.linalg.norm(diff)))


def norm_cstar(a) -> float:
    """Operator norm (largest singular value)."""
    a = as_cmatrix(a, square=False)
    return float(np.linalg.norm(a, 2))


def frob(a) -> float:
    return float(np.linalg.norm(a))
