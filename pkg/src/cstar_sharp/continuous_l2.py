"""Exact constant for the l1-l2 inequality on L^2 of a finite measure space.

A measure space is a finite list of atoms with positive weights, so every
integral is a weighted sum.  A constant-modulus function has
``|g| = 1/sqrt(mu(X))`` on every atom, hence ``||g||_2 = 1``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .algebra import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionMismatch, NotUnit, ProjectionZero, ZeroFunction


@dataclass(frozen=True, eq=False)
class FiniteMeasureSpace:
    weights: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).ravel()
        if w.size < 1:
            raise ValueError("measure space needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("atom weights must be finite and strictly positive")
        if not np.isfinite(w.sum()):
            raise ValueError("total mass must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != w.size:
                raise DimensionMismatch("one label per atom required")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def uniform(cls, m: int, total_mass: float = 1.0) -> "FiniteMeasureSpace":
        return cls(np.full(m, total_mass / m))

    @property
    def m(self) -> int:
        return self.weights.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def __eq__(self, other):
        if not isinstance(other, FiniteMeasureSpace):
            return NotImplemented
        return self.weights.shape == other.weights.shape and bool(
            np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class L2Function:
    space: FiniteMeasureSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).ravel()
        if v.size != self.space.m:
            raise DimensionMismatch(f"{v.size} values for {self.space.m} atoms")
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        if not isinstance(other, L2Function):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.values, other.values))

    __hash__ = None

    def with_values(self, values) -> "L2Function":
        return L2Function(self.space, values)


def inner(f: L2Function, g: L2Function) -> complex:
    """``sum_j w_j f_j conj(g_j)``."""
    if f.space.m != g.space.m:
        raise DimensionMismatch("functions live on different spaces")
    return complex(np.sum(f.space.weights * f.values * np.conj(g.values)))


def l2_norms(f: L2Function) -> tuple:
    """``(||f||_1, ||f||_2)``."""
    w = f.space.weights
    mod = np.abs(f.values)
    return float(np.sum(w * mod)), float(np.sqrt(np.sum(w * mod * mod)))


def _two_norm_checked(f: L2Function, tol: ToleranceConfig) -> tuple:
    one, two = l2_norms(f)
    if not two > tol.inv_tol:
        raise ZeroFunction(f"||f||_2 = {two:.3e} is not above inv_tol")
    return one, two


def compute_cf(f: L2Function, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``sum_j w_j (|f_j|/||f||_2 - 1/sqrt(mu(X)))^2``, a number in ``[0, 2]``."""
    _, two = _two_norm_checked(f, tol)
    d = np.abs(f.values) / two - 1.0 / np.sqrt(f.space.total_mass)
    return float(np.sum(f.space.weights * d * d))


def nearest_constant_modulus(f: L2Function) -> L2Function:
    """Phase-aligned constant-modulus function ``phase(f)/sqrt(mu(X))`` (phase 1 where f = 0)."""
    mod = np.abs(f.values)
    phase = np.where(mod > 0, f.values / np.where(mod > 0, mod, 1.0), 1.0)
    return f.with_values(phase / np.sqrt(f.space.total_mass))


def distance(f: L2Function, g: L2Function) -> float:
    d = f.values - g.values
    return float(np.sqrt(np.sum(f.space.weights * (d.real**2 + d.imag**2))))


def distance_to_constant_modulus_l2(f_unit: L2Function, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``(2 - 2 ||f||_1 / sqrt(mu(X)))^(1/2)`` for a unit-norm ``f``."""
    one, two = l2_norms(f_unit)
    if abs(two - 1.0) > tol.eq_tol:
        raise NotUnit(f"||f||_2 = {two!r} is not 1")
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * one / np.sqrt(f_unit.space.total_mass))))


@dataclass
class Thm32Report:
    c_f: float
    one_norm: float
    two_norm: float
    total_mass: float
    # |one_norm - (1 - c_f/2) sqrt(mu) two_norm|
    residual_i: float
    # |c_f - (2 - 2 one_norm / (sqrt(mu) two_norm))|
    residual_ii: float
    # max(|d_closed^2 - c_f|, |d_aligned - sqrt(c_f)|)
    residual_iii: float
    distance_closed_form: float
    distance_aligned: float
    scale: float
    ok: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_thm32(f: L2Function, tol: ToleranceConfig = DEFAULT_TOL) -> Thm32Report:
    """Three-way agreement between the norm identity, the integral form of
    ``c_f`` and the infimum distance to the constant-modulus set.

    The infimum is evaluated twice: by the closed form
    ``(2 - 2||f||_1/(sqrt(mu)||f||_2))^(1/2)`` and by the explicit distance to
    the phase-aligned minimizer.  The closed form is compared in squared
    form, since the square root amplifies roundoff near zero.
    """
    one, two = _two_norm_checked(f, tol)
    mu = f.space.total_mass
    cf = compute_cf(f, tol)
    closed_sq = 2.0 - 2.0 * one / (np.sqrt(mu) * two)
    unit = f.with_values(f.values / two)
    aligned = distance(unit, nearest_constant_modulus(unit))
    r_i = abs(one - (1.0 - cf / 2.0) * np.sqrt(mu) * two)
    r_ii = abs(cf - closed_sq)
    r_iii = max(abs(closed_sq - cf), abs(aligned - np.sqrt(cf)))
    scale = 1.0 + one + np.sqrt(mu) * two
    ok = r_i <= tol.eq_tol * scale and r_ii <= tol.eq_tol and r_iii <= tol.eq_tol
    return Thm32Report(
        c_f=cf,
        one_norm=one,
        two_norm=two,
        total_mass=mu,
        residual_i=float(r_i),
        residual_ii=float(r_ii),
        residual_iii=float(r_iii),
        distance_closed_form=float(np.sqrt(max(0.0, closed_sq))),
        distance_aligned=aligned,
        scale=float(scale),
        ok=bool(ok),
    )


def brute_force_phase_distance(f_unit: L2Function, phases_per_atom: int = 1024) -> float:
    """Grid minimization of ``||f - g||_2`` over constant-modulus ``g``.

    Each atom's phase runs over ``phases_per_atom`` equispaced angles.  The
    squared distance is a sum of per-atom terms, so the minimum over the
    product grid is the sum of per-atom grid minima.
    """
    theta = 2.0 * np.pi * np.arange(phases_per_atom) / phases_per_atom
    g = np.exp(1j * theta)[None, :] / np.sqrt(f_unit.space.total_mass)
    terms = np.abs(f_unit.values[:, None] - g) ** 2
    return float(np.sqrt(np.sum(f_unit.space.weights * terms.min(axis=1))))


@dataclass(frozen=True, eq=False)
class SubspaceProjector:
    """Orthogonal projection onto the span of an orthonormal basis.

    Orthonormality is with respect to ``<f, g> = sum_j w_j f_j conj(g_j)``.
    """

    space: FiniteMeasureSpace
    basis: np.ndarray  # shape (dim, m)

    def __post_init__(self):
        b = np.array(self.basis, dtype=np.complex128)
        if b.ndim == 1:
            b = b[None, :]
        if b.ndim != 2 or b.shape[1] != self.space.m:
            raise DimensionMismatch(f"basis shape {b.shape} does not match {self.space.m} atoms")
        gram = (b * self.space.weights) @ b.conj().T
        resid = float(np.linalg.norm(gram - np.eye(b.shape[0])))
        if resid > DEFAULT_TOL.eq_tol:
            raise ValueError(f"basis is not orthonormal (Gram residual {resid:.3e})")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def from_spanning(cls, space: FiniteMeasureSpace, vectors) -> "SubspaceProjector":
        """Orthonormalize the given vectors in the weighted inner product."""
        v = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        sw = np.sqrt(space.weights)
        q, r = np.linalg.qr((v * sw).T)
        keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, float(np.abs(r).max(initial=0.0)))
        q = q[:, keep]
        return cls(space, (q / sw[:, None]).T)

    @classmethod
    def whole_space(cls, space: FiniteMeasureSpace) -> "SubspaceProjector":
        return cls(space, np.diag(1.0 / np.sqrt(space.weights)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coefficients(self, f: L2Function) -> np.ndarray:
        return (self.basis.conj() * self.space.weights) @ f.values

    def apply(self, f: L2Function) -> L2Function:
        return f.with_values(self.coefficients(f) @ self.basis)

    def vectors(self) -> list:
        return [L2Function(self.space, row) for row in self.basis]


def closest_unit_in_subspace(h: L2Function, proj: SubspaceProjector, tol: ToleranceConfig = DEFAULT_TOL) -> L2Function:
    """``P h / ||P h||_2``, the unit vector of ``W`` nearest to ``h``."""
    ph = proj.apply(h)
    _, norm = l2_norms(ph)
    if not norm > tol.inv_tol:
        raise ProjectionZero(f"||P h||_2 = {norm:.3e} is not above inv_tol")
    return ph.with_values(ph.values / norm)


def random_constant_modulus(rng: np.random.Generator, space: FiniteMeasureSpace) -> L2Function:
    theta = rng.uniform(0.0, 2.0 * np.pi, space.m)
    return L2Function(space, np.exp(1j * theta) / np.sqrt(space.total_mass))


def random_unit_in_subspace(rng: np.random.Generator, proj: SubspaceProjector) -> L2Function:
    c = rng.standard_normal(proj.dim) + 1j * rng.standard_normal(proj.dim)
    c /= np.linalg.norm(c)
    return L2Function(proj.space, c @ proj.basis)


@dataclass
class Thm34Report:
    trials: int
    # (a): dist(f, constant modulus)^2 vs 2 - 2||f||_1/sqrt(mu) for unit f in W
    max_residual_a: float
    # (b): ||g - Pg/||Pg|| ||^2 vs 2 - 2||Pg|| for constant-modulus g
    max_residual_b: float
    skipped: int
    ok: bool
    # strict reading: does W contain a constant-modulus function at all?
    strict_max_projection: Optional[float] = None
    strict_contains_constant_modulus: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _max_projection_norm(proj: SubspaceProjector, rng: np.random.Generator, starts: int) -> float:
    """Largest ``||P g||_2`` over constant-modulus ``g`` (multi-start local ascent)."""
    w = proj.space.weights
    a = proj.basis.conj() * w / np.sqrt(proj.space.total_mass)  # coefficient map on phases

    def neg(theta):
        e = np.exp(1j * theta)
        c = a @ e
        val = float(np.sum(np.abs(c) ** 2))
        grad = 2.0 * np.real(np.conj(c) @ (a * (1j * e)))
        return -val, -grad

    best = 0.0
    for _ in range(starts):
        res = minimize(neg, rng.uniform(0, 2 * np.pi, proj.space.m), jac=True, method="L-BFGS-B")
        best = max(best, -float(res.fun))
    return float(np.sqrt(max(best, 0.0)))


def verify_thm34(
    proj: SubspaceProjector,
    trials: int,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
    strict: bool = False,
    strict_starts: int = 16,
) -> Thm34Report:
    """Check the two distance identities behind the subspace equivalences.

    (a) random unit ``f`` in ``W``: the explicit distance to the phase-aligned
    constant-modulus function, squared, equals ``2 - 2||f||_1/sqrt(mu)``.
    (b) random constant-modulus ``g`` on ``X``: ``||g - Pg/||Pg|| ||^2 = 2 - 2||Pg||``.
    Trials with ``||Pg|| <= inv_tol`` are skipped and counted.  With
    ``strict=True`` the report also records whether ``W`` itself contains a
    constant-modulus function (``max ||Pg|| = 1``).
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    mu = proj.space.total_mass
    max_a = 0.0
    max_b = 0.0
    skipped = 0
    for _ in range(trials):
        f = random_unit_in_subspace(rng, proj)
        one, _ = l2_norms(f)
        dist_sq = distance(f, nearest_constant_modulus(f)) ** 2
        max_a = max(max_a, abs(dist_sq - (2.0 - 2.0 * one / np.sqrt(mu))))

        g = random_constant_modulus(rng, proj.space)
        pg = proj.apply(g)
        _, pg_norm = l2_norms(pg)
        if pg_norm <= tol.inv_tol:
            skipped += 1
            continue
        lhs = distance(g, pg.with_values(pg.values / pg_norm)) ** 2
        max_b = max(max_b, abs(lhs - (2.0 - 2.0 * pg_norm)))

    report = Thm34Report(
        trials=trials,
        max_residual_a=float(max_a),
        max_residual_b=float(max_b),
        skipped=skipped,
        ok=bool(max_a <= tol.eq_tol and max_b <= tol.eq_tol),
    )
    if strict:
        best = _max_projection_norm(proj, rng, strict_starts)
        report.strict_max_projection = best
        report.strict_contains_constant_modulus = bool(1.0 - best * best <= tol.eq_tol)
    return report
