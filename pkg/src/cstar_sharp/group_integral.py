"""Operator-valued functions on a finite group with normalized counting measure.

Only the measure enters: ``<f, g> = (1/|G|) sum_x f(x) g(x)^*`` and
``int f = (1/|G|) sum_x f(x)``.  The group law is never used.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import DEFAULT_TOL, ToleranceConfig, adjoint, herm_eig, loewner_leq, norm_cstar
from .errors import DimensionMismatch, NotHermitian, NotNormalized


@dataclass(frozen=True)
class FiniteGroupSpace:
    order: int
    labels: Optional[tuple] = None

    def __post_init__(self):
        if int(self.order) < 1:
            raise ValueError("group order must be at least 1")
        if self.labels is not None and len(self.labels) != self.order:
            raise DimensionMismatch("one label per group element required")

    @property
    def weight(self) -> float:
        return 1.0 / self.order


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """``f: G -> M_k(C)`` with Hermitian PSD values, stored as ``(|G|, k, k)``."""

    space: FiniteGroupSpace
    values: np.ndarray
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.ndim != 3 or v.shape[1] != v.shape[2] or v.shape[0] != self.space.order:
            raise DimensionMismatch(
                f"values of shape {v.shape} do not match a group of order {self.space.order}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must be finite")
        zero = np.zeros(v.shape[1:])
        for i, a in enumerate(v):
            if not loewner_leq(zero, a, self.tol):
                raise NotHermitian(f"f(x_{i}) is not positive semidefinite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self.space.order == other.space.order and bool(
            np.array_equal(self.values, other.values)
        )

    __hash__ = None


def _values(f):
    return f.values if isinstance(f, GroupFunction) else np.asarray(f, dtype=np.complex128)


def kasparov_inner(f, g) -> np.ndarray:
    """``(1/|G|) sum_x f(x) g(x)^*``.  Accepts GroupFunctions or raw ``(|G|, k, k)`` arrays."""
    fv, gv = _values(f), _values(g)
    if fv.shape != gv.shape:
        raise DimensionMismatch(f"shapes {fv.shape} and {gv.shape} differ")
    return np.einsum("xij,xkj->ik", fv, np.conj(gv)) / fv.shape[0]


def integral(f) -> np.ndarray:
    return _values(f).mean(axis=0)


@dataclass
class Thm27Report:
    integral: np.ndarray
    c: np.ndarray
    residual: float
    normalization_residual: float
    c_norm: float
    c_spectrum: list
    c_positive: bool
    ok: bool

    def to_dict(self) -> dict:
        from .serialization import matrix_to_json

        return {
            "integral": matrix_to_json(self.integral),
            "c": matrix_to_json(self.c),
            "residual": self.residual,
            "normalization_residual": self.normalization_residual,
            "c_norm": self.c_norm,
            "c_spectrum": list(self.c_spectrum),
            "c_positive": self.c_positive,
            "ok": self.ok,
        }


def verify_thm27(f: GroupFunction, tol: ToleranceConfig = DEFAULT_TOL) -> Thm27Report:
    """For ``<f, f> = 1``: ``<f - 1, f - 1> = 2 - 2 int f``.

    ``c`` is reported as an operator (norm and spectrum included).  Raises
    :class:`NotNormalized` when ``||<f, f> - 1||_F > eq_tol``.
    """
    eye = np.eye(f.k)
    norm_resid = float(np.linalg.norm(kasparov_inner(f, f) - eye))
    if norm_resid > tol.eq_tol:
        raise NotNormalized(f"||<f, f> - 1||_F = {norm_resid:.3e} exceeds eq_tol", norm_resid)
    m = integral(f)
    shifted = f.values - eye
    c = kasparov_inner(shifted, shifted)
    c = 0.5 * (c + adjoint(c))
    resid = float(np.linalg.norm(c - (2.0 * eye - 2.0 * m)))
    spectrum = herm_eig(c, tol).eigenvalues
    positive = loewner_leq(np.zeros_like(c), c, tol)
    return Thm27Report(
        integral=m,
        c=c,
        residual=resid,
        normalization_residual=norm_resid,
        c_norm=norm_cstar(c),
        c_spectrum=[float(v) for v in spectrum],
        c_positive=positive,
        ok=bool(resid <= tol.eq_tol and positive),
    )


def normalized_diagonal_function(rng: np.random.Generator, order: int, k: int) -> GroupFunction:
    """Random diagonal PSD-valued ``f`` with ``<f, f> = 1``.

    Each diagonal slot is an independent nonnegative scalar function,
    rescaled so that its mean square is 1.
    """
    d = np.abs(rng.standard_normal((order, k)))
    d[0] += 1e-3  # keeps every slot away from the zero function
    d /= np.sqrt(np.mean(d * d, axis=0))
    values = np.zeros((order, k, k), dtype=np.complex128)
    idx = np.arange(k)
    values[:, idx, idx] = d
    return GroupFunction(FiniteGroupSpace(order), values)
