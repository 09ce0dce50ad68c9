"""Seeded random instances: Ginibre matrices, Haar unitaries, PSD elements.

Every stream is keyed by a tuple of nonnegative integers (for example
``(seed, k, n, trial)``), so any single instance can be regenerated on its
own without replaying the ones before it.
"""
import numpy as np

from .module_space import ModuleVector


def make_rng(*key: int) -> np.random.Generator:
    """Counter-based generator for the stream named by ``key``."""
    if not key or any(int(v) < 0 for v in key):
        raise ValueError(f"stream key must be nonempty and nonnegative, got {key!r}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(v) for v in key])))


def ginibre(rng: np.random.Generator, k: int, m: int = None) -> np.ndarray:
    """k x m matrix of i.i.d. standard complex Gaussians (independent N(0,1) real and imaginary parts)."""
    m = k if m is None else m
    return rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))


def haar_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase correction."""
    q, r = np.linalg.qr(ginibre(rng, k))
    d = np.diag(r)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * ph


def random_hermitian(rng: np.random.Generator, k: int) -> np.ndarray:
    g = ginibre(rng, k)
    return 0.5 * (g + g.conj().T)


def random_psd(rng: np.random.Generator, k: int, rank: int = None) -> np.ndarray:
    g = ginibre(rng, k, k if rank is None else rank)
    p = g @ g.conj().T
    return 0.5 * (p + p.conj().T)


def random_module_vector(rng: np.random.Generator, n: int, k: int) -> ModuleVector:
    return ModuleVector(rng.standard_normal((n, k, k)) + 1j * rng.standard_normal((n, k, k)))


def random_unitary_tuple(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    return np.stack([haar_unitary(rng, k) for _ in range(n)])
