"""The Hilbert C*-module A^n over A = M_k(C).

The inner product is the left one, ``<x, y> = sum_i a_i b_i^*``, so the
module norm is ``||sum_i a_i a_i^*||^(1/2)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    HermElement,
    ToleranceConfig,
    abs_element,
    adjoint,
    as_cmatrix,
    herm_eig,
    inv_sqrtm,
    loewner_leq,
    loewner_margin,
    norm_cstar,
    sqrtm_psd,
)
from .errors import DimensionMismatch

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ModuleVector:
    """An n-tuple of k x k complex matrices, stored as an ``(n, k, k)`` array."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] != arr.shape[2] or arr.shape[1] < 1:
            raise DimensionMismatch(
                f"module vector needs n >= 1 square entries of equal size, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("module vector has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_list(cls, mats) -> "ModuleVector":
        mats = [as_cmatrix(m) for m in mats]
        if not mats:
            raise DimensionMismatch("module vector needs at least one entry")
        k = mats[0].shape[0]
        for i, m in enumerate(mats):
            if m.shape != (k, k):
                raise DimensionMismatch(f"entry {i} has shape {m.shape}, expected {(k, k)}")
        return cls(np.stack(mats))

    @classmethod
    def from_scalars(cls, values) -> "ModuleVector":
        """The k = 1 module vector with the given scalar coordinates."""
        return cls(np.asarray(values, dtype=np.complex128).reshape(-1, 1, 1))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    __hash__ = None

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        _check_compatible(self, other)
        return ModuleVector(self.entries - other.entries)

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        _check_compatible(self, other)
        return ModuleVector(self.entries + other.entries)

    def scale(self, factor: complex) -> "ModuleVector":
        return ModuleVector(self.entries * factor)

    def left_mul(self, a) -> "ModuleVector":
        """Left module action ``(a a_1, ..., a a_n)``."""
        a = as_cmatrix(a)
        if a.shape != (self.k, self.k):
            raise DimensionMismatch(f"scalar of shape {a.shape} cannot act on k={self.k}")
        return ModuleVector(np.einsum("ij,njk->nik", a, self.entries))


def _check_compatible(x: ModuleVector, y: ModuleVector) -> None:
    if x.entries.shape != y.entries.shape:
        raise DimensionMismatch(
            f"module vectors have (n, k) = {(x.n, x.k)} and {(y.n, y.k)}"
        )


def inner_product(x: ModuleVector, y: ModuleVector) -> np.ndarray:
    """``<x, y> = sum_i a_i b_i^*``."""
    _check_compatible(x, y)
    return np.einsum("nij,nkj->ik", x.entries, np.conj(y.entries))


def gram(x: ModuleVector) -> np.ndarray:
    g = inner_product(x, x)
    return 0.5 * (g + adjoint(g))


def module_norm(x: ModuleVector) -> float:
    return float(np.sqrt(norm_cstar(gram(x))))


@dataclass(frozen=True)
class GramData:
    gram: HermElement
    inv_sqrt_gram: Optional[np.ndarray]
    invertible: bool


def gram_data(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> GramData:
    h = herm_eig(gram(x), tol)
    if not h.is_invertible(tol):
        return GramData(gram=h, inv_sqrt_gram=None, invertible=False)
    return GramData(gram=h, inv_sqrt_gram=inv_sqrtm(h, tol), invertible=True)


def abs_entries(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Stack of ``(a_i a_i^*)^(1/2)``, shape ``(n, k, k)``."""
    return np.stack([abs_element(a, tol) for a in x.entries])


def ell1_side(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``sum_i (a_i a_i^*)^(1/2)``."""
    s = abs_entries(x, tol).sum(axis=0)
    return 0.5 * (s + adjoint(s))


def ell2_side(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``sqrt(n) (sum_i a_i a_i^*)^(1/2)``."""
    return np.sqrt(x.n) * sqrtm_psd(gram(x), tol)


def ell12_margin(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of ``ell2_side(x) - ell1_side(x)``.

    Zero signals equality in the l1-l2 inequality; a negative value beyond
    roundoff would be a numerical defect.
    """
    return loewner_margin(ell1_side(x, tol), ell2_side(x, tol), tol)


def check_ell12_inequality(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    lhs = ell1_side(x, tol)
    rhs = ell2_side(x, tol)
    ok = loewner_leq(lhs, rhs, tol)
    if not ok:
        log.warning(
            "l1-l2 inequality violated numerically (n=%d, k=%d): lambda_min = %.3e",
            x.n, x.k, loewner_margin(lhs, rhs, tol),
        )
    return ok


def check_cauchy_schwarz(x: ModuleVector, y: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``<x,y><y,x> <= ||<y,y>|| <x,x>`` in the Loewner order."""
    xy = inner_product(x, y)
    lhs = xy @ adjoint(xy)
    rhs = norm_cstar(gram(y)) * gram(x)
    return loewner_leq(0.5 * (lhs + adjoint(lhs)), rhs, tol)


def is_constant_modulus(y: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ``sqrt(n) y_i`` is a co-isometry (``c c^* = 1``) for every i.

    For square coordinates ``c c^* = 1`` and ``c^* c = 1`` coincide; both are
    checked and a disagreement is logged as a numerical inconsistency.
    """
    c = np.sqrt(y.n) * y.entries
    eye = np.eye(y.k)
    left = np.linalg.norm(c @ adjoint(c) - eye, axis=(1, 2))
    right = np.linalg.norm(adjoint(c) @ c - eye, axis=(1, 2))
    ok_left = bool(np.all(left <= tol.eq_tol))
    ok_right = bool(np.all(right <= tol.eq_tol))
    if ok_left != ok_right:
        log.warning("c c^* = 1 and c^* c = 1 disagree: residuals %s vs %s", left.max(), right.max())
    return ok_left
