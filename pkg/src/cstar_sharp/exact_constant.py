"""The exact-constant element ``c_x`` for the noncommutative l1-l2 inequality.

With ``G = <x, x>`` invertible and ``S = sum_i (a_i a_i^*)^(1/2)``, the element

    c_x = 2 - (G^(-1/2) S + S G^(-1/2)) / sqrt(n)

also equals ``sum_i b_i b_i^*`` with ``b_i = G^(-1/2) (a_i a_i^*)^(1/2) - 1/sqrt(n)``,
and satisfies ``S G^(1/2) + G^(1/2) S = sqrt(n) G^(1/2) (2 - c_x) G^(1/2)``.
Both formulas are evaluated and cross-checked.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    ToleranceConfig,
    adjoint,
    herm_eig,
    inv_sqrtm,
    loewner_leq,
    norm_cstar,
    sqrtm_psd,
)
from .errors import CommutatorTooLarge, DomainError, GramNotUnit, NotInvertible
from .module_space import ModuleVector, abs_entries, ell1_side, gram, module_norm


@dataclass
class ConstantReport:
    c_x: np.ndarray
    c_x_norm: float
    residual_thm22_i: float
    residual_defs_match: float
    commuting: bool
    commutator_norm: float
    upper_bound_sqrt_cx_norm: float
    distance_found: Optional[float] = None
    # scale used for the residual_thm22_i contract: 1 + ||lhs||_F
    thm22_scale: float = 1.0
    # diagnostic only: ||S G^(-1/2)/sqrt(n) - (1 - c_x/2)||_F
    one_sided_residual: float = 0.0
    residual_cor23: Optional[float] = None
    cor23_monotone: list = field(default_factory=list)
    half_gap_norm: Optional[float] = None
    half_gap_lambda_max: Optional[float] = None
    status: str = "ok"

    def to_dict(self) -> dict:
        from .serialization import matrix_to_json

        d = asdict(self)
        d["c_x"] = matrix_to_json(self.c_x)
        return d


@dataclass
class _Pieces:
    n: int
    k: int
    g: np.ndarray
    g_half: np.ndarray
    g_inv_half: np.ndarray
    abs_a: np.ndarray
    s: np.ndarray


def _pieces(x: ModuleVector, tol: ToleranceConfig) -> _Pieces:
    g = gram(x)
    h = herm_eig(g, tol)
    if not h.is_invertible(tol):
        raise NotInvertible(
            f"<x, x> is not invertible: smallest eigenvalue {float(h.eigenvalues[0]):.3e}"
        )
    abs_a = abs_entries(x, tol)
    s = abs_a.sum(axis=0)
    s = 0.5 * (s + adjoint(s))
    return _Pieces(
        n=x.n,
        k=x.k,
        g=g,
        g_half=sqrtm_psd(h, tol),
        g_inv_half=inv_sqrtm(h, tol),
        abs_a=abs_a,
        s=s,
    )


def _cx_symmetrized(p: _Pieces) -> np.ndarray:
    t = p.g_inv_half @ p.s / np.sqrt(p.n)
    cx = 2.0 * np.eye(p.k) - t - adjoint(t)
    return 0.5 * (cx + adjoint(cx))


def _cx_sum_form(p: _Pieces) -> np.ndarray:
    b = np.einsum("ij,njk->nik", p.g_inv_half, p.abs_a) - np.eye(p.k) / np.sqrt(p.n)
    cx = np.einsum("nij,nkj->ik", b, np.conj(b))
    return 0.5 * (cx + adjoint(cx))


def compute_cx_symmetrized(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``2 - (G^(-1/2) S + S G^(-1/2)) / sqrt(n)``; needs only ``G`` invertible."""
    return _cx_symmetrized(_pieces(x, tol))


def compute_cx_sum_form(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``sum_i b_i b_i^*`` with ``b_i = G^(-1/2)|a_i| - 1/sqrt(n)``; positive by construction."""
    return _cx_sum_form(_pieces(x, tol))


def _base_report(p: _Pieces) -> tuple:
    cx_sym = _cx_symmetrized(p)
    cx_sum = _cx_sum_form(p)
    defs = float(np.linalg.norm(cx_sym - cx_sum))

    lhs = p.s @ p.g_half + p.g_half @ p.s
    rhs = np.sqrt(p.n) * p.g_half @ (2.0 * np.eye(p.k) - cx_sum) @ p.g_half
    resid = float(np.linalg.norm(lhs - rhs))

    comm = float(np.linalg.norm(p.g @ p.s - p.s @ p.g))
    one_sided = float(
        np.linalg.norm(p.s @ p.g_inv_half / np.sqrt(p.n) - (np.eye(p.k) - cx_sym / 2.0))
    )
    cx_norm = norm_cstar(cx_sym)
    report = ConstantReport(
        c_x=cx_sym,
        c_x_norm=cx_norm,
        residual_thm22_i=resid,
        residual_defs_match=defs,
        commuting=False,
        commutator_norm=comm,
        # the sum form is PSD by construction, so its root stays accurate near zero
        upper_bound_sqrt_cx_norm=float(np.sqrt(norm_cstar(cx_sum))),
        thm22_scale=1.0 + float(np.linalg.norm(lhs)),
        one_sided_residual=one_sided,
    )
    return report, cx_sym


def _commutes(p: _Pieces, comm: float, tol: ToleranceConfig) -> bool:
    return comm <= tol.eq_tol * float(np.linalg.norm(p.g)) * float(np.linalg.norm(p.s))


def verify_thm22(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> ConstantReport:
    """Evaluate ``c_x`` both ways and the symmetrized identity.

    ``status`` is ``"tolerance_violation"`` when either residual exceeds its
    bound: ``eq_tol * thm22_scale`` for the identity and
    ``eq_tol * (1 + ||c_x||_F)`` for the agreement of the two formulas.
    """
    p = _pieces(x, tol)
    report, cx = _base_report(p)
    report.commuting = _commutes(p, report.commutator_norm, tol)
    if (
        report.residual_thm22_i > tol.eq_tol * report.thm22_scale
        or report.residual_defs_match > tol.eq_tol * (1.0 + float(np.linalg.norm(cx)))
    ):
        report.status = "tolerance_violation"
    return report


def verify_cor23(
    x: ModuleVector,
    tol: ToleranceConfig = DEFAULT_TOL,
    s_values: Optional[Sequence[float]] = None,
) -> ConstantReport:
    """Commuting case: ``S = (1 - c_x/2) sqrt(n) G^(1/2) = sqrt(n) G^(1/2) (1 - c_x/2)``.

    Also evaluates, for each ``s`` in ``s_values`` (default ``1..n``), whether
    ``S <= sqrt(s) G^(1/2)`` and whether ``1 - c_x/2 <= sqrt(s/n)``.  For
    k = 1 these must agree; for k > 1 both sides are recorded only.
    Raises :class:`CommutatorTooLarge` when ``G`` and ``S`` do not commute.
    """
    p = _pieces(x, tol)
    report, cx = _base_report(p)
    if not _commutes(p, report.commutator_norm, tol):
        raise CommutatorTooLarge(
            f"||[G, S]||_F = {report.commutator_norm:.3e} exceeds the commuting threshold",
            report.commutator_norm,
        )
    report.commuting = True

    half_gap = np.eye(p.k) - cx / 2.0
    sqrt_n = np.sqrt(p.n)
    r_left = np.linalg.norm(p.s - sqrt_n * half_gap @ p.g_half)
    r_right = np.linalg.norm(p.s - sqrt_n * p.g_half @ half_gap)
    report.residual_cor23 = float(max(r_left, r_right))
    report.half_gap_norm = norm_cstar(half_gap)
    report.half_gap_lambda_max = float(herm_eig(0.5 * (half_gap + adjoint(half_gap)), tol).eigenvalues[-1])

    if s_values is None:
        s_values = list(range(1, p.n + 1))
    for s in s_values:
        if s < 0:
            raise ValueError("s must be nonnegative")
        operator_side = loewner_leq(p.s, np.sqrt(s) * p.g_half, tol)
        bound = float(np.sqrt(s / p.n))
        entry = {
            "s": float(s),
            "ell1_leq_sqrt_s_gram_half": operator_side,
            "half_gap_norm_leq_sqrt_s_over_n": report.half_gap_norm <= bound + tol.eq_tol,
            "half_gap_lambda_max_leq_sqrt_s_over_n": report.half_gap_lambda_max <= bound + tol.eq_tol,
            "asserted": p.k == 1,
        }
        report.cor23_monotone.append(entry)

    bad_identity = report.residual_cor23 > tol.eq_tol * (1.0 + float(np.linalg.norm(p.s)))
    bad_monotone = any(
        e["asserted"] and e["ell1_leq_sqrt_s_gram_half"] != e["half_gap_norm_leq_sqrt_s_over_n"]
        for e in report.cor23_monotone
    )
    if bad_identity or bad_monotone:
        report.status = "tolerance_violation"
    return report


@dataclass
class Prop25Bound:
    bound: float
    witness_distance: float
    witness: ModuleVector
    c_x: np.ndarray
    eq_tol: float = DEFAULT_TOL.eq_tol

    @property
    def holds(self) -> bool:
        return self.witness_distance <= self.bound + self.eq_tol


def analytic_witness_unitaries(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``(a_i a_i^*)^(-1/2) a_i`` for every i, shape ``(n, k, k)``.

    Raises :class:`NotInvertible` naming the first index with ``a_i a_i^*``
    singular.
    """
    out = []
    for i, a in enumerate(x.entries):
        aa = a @ adjoint(a)
        h = herm_eig(0.5 * (aa + adjoint(aa)), tol)
        if not h.is_invertible(tol):
            raise NotInvertible(f"a_{i} a_{i}^* is not invertible", index=i)
        try:
            out.append(inv_sqrtm(h, tol) @ a)
        except DomainError as exc:
            raise NotInvertible(f"a_{i} a_{i}^* is not invertible", index=i) from exc
    return np.stack(out)


def prop25_upper_bound(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> Prop25Bound:
    """``sqrt(||c_x||)`` together with the distance achieved by the explicit witness.

    The witness is ``(1/sqrt(n)) ((a_i a_i^*)^(-1/2) a_i)_i``, a constant
    modulus vector; its distance to ``G^(-1/2) x`` never exceeds the bound.
    """
    units = analytic_witness_unitaries(x, tol)
    p = _pieces(x, tol)
    cx = _cx_sum_form(p)
    witness = ModuleVector(units / np.sqrt(x.n))
    target = x.left_mul(p.g_inv_half)
    return Prop25Bound(
        bound=float(np.sqrt(norm_cstar(cx))),
        witness_distance=module_norm(target - witness),
        witness=witness,
        c_x=cx,
        eq_tol=tol.eq_tol,
    )


def prop26_bound(
    x: ModuleVector, dist_lower: float, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple:
    """For ``<x, x> = 1``: is ``dist_lower <= ||2 - (2/sqrt(n)) S||^(1/2)``?

    Returns ``(holds, rhs)``.  Raises :class:`GramNotUnit` unless the Gram
    element is the identity within ``eq_tol``.
    """
    g = gram(x)
    off = float(np.linalg.norm(g - np.eye(x.k)))
    if off > tol.eq_tol:
        raise GramNotUnit(f"||<x, x> - 1||_F = {off:.3e} exceeds eq_tol")
    s = ell1_side(x, tol)
    rhs = float(np.sqrt(norm_cstar(2.0 * np.eye(x.k) - 2.0 / np.sqrt(x.n) * s)))
    return dist_lower <= rhs + tol.eq_tol, rhs


def normalize(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> ModuleVector:
    """``G^(-1/2) x``, which has Gram element equal to the identity."""
    g = herm_eig(gram(x), tol)
    if not g.is_invertible(tol):
        raise NotInvertible("<x, x> is not invertible")
    return x.left_mul(inv_sqrtm(g, tol))


def cx_positive(x: ModuleVector, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return loewner_leq(np.zeros((x.k, x.k)), compute_cx_sum_form(x, tol), tol)

