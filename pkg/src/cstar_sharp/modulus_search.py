"""Search over constant-modulus vectors ``(1/sqrt(n)) (u_1, ..., u_n)``, ``u_i`` unitary.

Minimizes the module-norm distance ``||G^(-1/2) x - y||`` over constant
modulus ``y``.  Every value found is an upper bound on the true infimum;
nothing here certifies global optimality.

The local method is randomized coordinate descent: pick a coordinate, draw a
random Hermitian direction ``H``, try ``u_i exp(+-i t H)`` and keep the move
if the distance drops.  After ``2n`` consecutive rejections the step ``t``
shrinks geometrically; a restart stops when ``t < conv_tol`` or after
``max_iters`` proposals.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import DEFAULT_TOL, ToleranceConfig, adjoint, herm_eig, norm_cstar
from .ensembles import random_unitary_tuple
from .errors import DimensionMismatch, NotInvertible, NotUnitary
from .exact_constant import analytic_witness_unitaries, compute_cx_sum_form, normalize
from .module_space import ModuleVector, is_constant_modulus, module_norm

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 16
    max_iters: int = 2000
    step_init: float = 0.5
    step_shrink: float = 0.7
    conv_tol: float = 1e-9
    seed: int = 0
    # None: use the witness when every a_i a_i^* is invertible, else random starts
    witness_seed: Optional[bool] = None
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be a positive integer")
        if self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if not self.step_init > 0:
            raise ValueError("step_init must be positive")
        if not 0 < self.step_shrink < 1:
            raise ValueError("step_shrink must lie in (0, 1)")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")
        if not 0 <= self.seed <= _U64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be a positive integer")


@dataclass
class SearchResult:
    best_distance: float
    best_point: ModuleVector
    iterations_used: int
    # restarts (after the first) that lowered the running best, in index order
    restarts_improved: int
    gap_to_sqrt_cx_norm: float
    sqrt_cx_norm: float = 0.0
    witness_distance: float | None = None
    best_restart: int = 0
    restart_distances: list = field(default_factory=list)

    def to_dict(self) -> dict:
        from .serialization import module_vector_to_json

        return {
            "best_distance": self.best_distance,
            "best_point": module_vector_to_json(self.best_point),
            "iterations_used": self.iterations_used,
            "restarts_improved": self.restarts_improved,
            "gap_to_sqrt_cx_norm": self.gap_to_sqrt_cx_norm,
            "sqrt_cx_norm": self.sqrt_cx_norm,
            "witness_distance": self.witness_distance,
            "best_restart": self.best_restart,
            "restart_distances": list(self.restart_distances),
        }


def _check_unitaries(u: np.ndarray, tol: ToleranceConfig) -> None:
    eye = np.eye(u.shape[-1])
    resid = np.linalg.norm(u @ adjoint(u) - eye, axis=(1, 2))
    if np.any(resid > tol.eq_tol):
        i = int(np.argmax(resid))
        raise NotUnitary(f"u_{i} is not unitary: ||u u^* - 1||_F = {resid[i]:.3e}")


def distance_to(y_target: ModuleVector, u, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """``||y_target - (1/sqrt(n)) (u_1, ..., u_n)||`` in the module norm."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != y_target.entries.shape:
        raise DimensionMismatch(
            f"unitary tuple has shape {u.shape}, target has {y_target.entries.shape}"
        )
    _check_unitaries(u, tol)
    return module_norm(y_target - ModuleVector(u / np.sqrt(y_target.n)))


def expm_skew(h: np.ndarray, t: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``exp(i t h)`` for Hermitian ``h``, via its eigendecomposition."""
    e = herm_eig(h, tol)
    v = e.eigenvectors
    return (v * np.exp(1j * t * e.eigenvalues)) @ adjoint(v)


def reunitarize(u: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Nearest unitary ``u (u^* u)^(-1/2)`` (polar factor)."""
    e = herm_eig(adjoint(u) @ u, tol)
    v = e.eigenvectors
    return u @ ((v / np.sqrt(e.eigenvalues)) @ adjoint(v))


def _spread(target: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``sum_i d_i d_i^*`` with ``d_i = target_i - u_i/sqrt(n)``."""
    d = target - u / np.sqrt(len(u))
    return np.einsum("nij,nkj->ik", d, np.conj(d))


def _local_search(target, u0, rng, cfg, tol):
    n, k = target.shape[0], target.shape[1]
    u = u0.copy()
    sqrt_n = np.sqrt(n)
    d = target - u / sqrt_n
    m = np.einsum("nij,nkj->ik", d, np.conj(d))
    best = norm_cstar(m)
    step = cfg.step_init
    fails = 0
    iters = 0
    while iters < cfg.max_iters and step >= cfg.conv_tol:
        i = int(rng.integers(n))
        g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        h = 0.5 * (g + adjoint(g))
        h /= np.linalg.norm(h)
        e = herm_eig(h, tol)
        improved = False
        for sign in (1.0, -1.0):
            iters += 1
            rot = (e.eigenvectors * np.exp(1j * sign * step * e.eigenvalues)) @ adjoint(e.eigenvectors)
            cand = reunitarize(u[i] @ rot, tol)
            d_new = target[i] - cand / sqrt_n
            m_new = m - d[i] @ adjoint(d[i]) + d_new @ adjoint(d_new)
            val = norm_cstar(0.5 * (m_new + adjoint(m_new)))
            if val < best:
                u[i] = cand
                d[i] = d_new
                m = m_new
                best = val
                improved = True
                break
            if iters >= cfg.max_iters:
                break
        if improved:
            fails = 0
        else:
            fails += 1
            if fails >= 2 * n:
                step *= cfg.step_shrink
                fails = 0
    # recompute from scratch so the reported value carries no accumulated drift
    final = float(np.sqrt(norm_cstar(_spread(target, u))))
    return final, u, iters


def search_min_distance(
    x: ModuleVector, cfg: SearchConfig = SearchConfig(), tol: ToleranceConfig = DEFAULT_TOL
) -> SearchResult:
    """Upper bound on the distance from ``G^(-1/2) x`` to the constant-modulus set.

    Restart 0 starts from the analytic witness ``(a_i a_i^*)^(-1/2) a_i``
    when it exists; with ``cfg.witness_seed=True`` a singular ``a_i a_i^*``
    raises :class:`NotInvertible` instead of falling back to a random start.
    The other restarts start from Haar-random unitary tuples.  Restart ``r``
    draws from a generator seeded with ``seed XOR r``, so the result does not
    depend on ``cfg.workers``.
    """
    witness = None
    if cfg.witness_seed is not False:
        try:
            witness = analytic_witness_unitaries(x, tol)
        except NotInvertible:
            if cfg.witness_seed:
                raise
    cx = compute_cx_sum_form(x, tol)
    sqrt_cx_norm = float(np.sqrt(norm_cstar(cx)))
    target = normalize(x, tol).entries
    n, k = x.n, x.k

    def run(r):
        rng = np.random.Generator(np.random.PCG64(cfg.seed ^ r))
        if r == 0 and witness is not None:
            u0 = witness.copy()
        else:
            u0 = random_unitary_tuple(rng, n, k)
        return _local_search(target, u0, rng, cfg, tol)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(run, range(cfg.restarts)))
    else:
        outcomes = [run(r) for r in range(cfg.restarts)]

    best_r = 0
    improved = 0
    for r in range(1, cfg.restarts):
        if outcomes[r][0] < outcomes[best_r][0]:
            best_r = r
            improved += 1
    best_distance, best_u, _ = outcomes[best_r]
    point = ModuleVector(best_u / np.sqrt(n))
    if not is_constant_modulus(point, tol):
        raise RuntimeError("search produced a point outside the constant-modulus set")

    witness_distance = None
    if witness is not None:
        witness_distance = float(np.sqrt(norm_cstar(_spread(target, witness))))
    return SearchResult(
        best_distance=best_distance,
        best_point=point,
        iterations_used=int(sum(o[2] for o in outcomes)),
        restarts_improved=improved,
        gap_to_sqrt_cx_norm=sqrt_cx_norm - best_distance,
        sqrt_cx_norm=sqrt_cx_norm,
        witness_distance=witness_distance,
        best_restart=best_r,
        restart_distances=[o[0] for o in outcomes],
    )
