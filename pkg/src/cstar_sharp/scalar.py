"""Closed forms for the commutative case ``A = C``.

Plain scalar arithmetic on complex vectors, with no matrix functions.  The
test-suite uses these as an oracle for the k = 1 specialization of the
module-space pipeline.
"""
import numpy as np


def one_two_norms(x):
    x = np.asarray(x, dtype=np.complex128).ravel()
    mod = np.abs(x)
    return float(mod.sum()), float(np.sqrt(np.sum(mod * mod)))


def exact_constant(x) -> float:
    """``c_x = 2 - 2 ||x||_1 / (sqrt(n) ||x||_2)``."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    one, two = one_two_norms(x)
    if two == 0.0:
        raise ZeroDivisionError("zero vector has no exact constant")
    return 2.0 - 2.0 * one / (np.sqrt(x.size) * two)


def exact_constant_sum_form(x) -> float:
    """``sum_i (|a_i| / ||x||_2 - 1/sqrt(n))^2``."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    _, two = one_two_norms(x)
    if two == 0.0:
        raise ZeroDivisionError("zero vector has no exact constant")
    d = np.abs(x) / two - 1.0 / np.sqrt(x.size)
    return float(np.sum(d * d))


def constant_modulus_distance(x) -> float:
    """Distance from ``x / ||x||_2`` to the nearest constant-modulus vector.

    The minimizer aligns each phase with the coordinate it approximates
    (any phase for a zero coordinate).
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    one, two = one_two_norms(x)
    if two == 0.0:
        raise ZeroDivisionError("zero vector has no exact constant")
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * one / (np.sqrt(x.size) * two))))


def nearest_constant_modulus(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128).ravel()
    mod = np.abs(x)
    phase = np.where(mod > 0, x / np.where(mod > 0, mod, 1.0), 1.0)
    return phase / np.sqrt(x.size)
