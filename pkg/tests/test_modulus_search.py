import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cstar_sharp import scalar
from cstar_sharp.algebra import adjoint
from cstar_sharp.ensembles import haar_unitary, make_rng, random_module_vector, random_unitary_tuple
from cstar_sharp.errors import DimensionMismatch, NotInvertible, NotUnitary
from cstar_sharp.exact_constant import normalize, prop25_upper_bound
from cstar_sharp.modulus_search import (
    SearchConfig,
    distance_to,
    expm_skew,
    reunitarize,
    search_min_distance,
)
from cstar_sharp.module_space import ModuleVector, is_constant_modulus

R2 = np.sqrt(2.0)
QUICK = SearchConfig(restarts=3, max_iters=400)


def test_config_validation():
    for bad in [dict(restarts=0), dict(max_iters=0), dict(step_init=0.0), dict(step_shrink=1.0),
                dict(step_shrink=0.0), dict(conv_tol=0.0), dict(seed=-1), dict(workers=0)]:
        with pytest.raises(ValueError):
            SearchConfig(**bad)


def test_distance_to_examples(rng):
    u = random_unitary_tuple(rng, 3, 2)
    y = ModuleVector(u / np.sqrt(3))
    assert distance_to(y, u) == pytest.approx(0.0, abs=1e-14)
    y = ModuleVector.from_scalars([1.0, 0.0])
    # |1 - 1/sqrt2|^2 + 1/2 = 2 - sqrt2
    assert distance_to(y, [[[1.0]], [[1.0]]]) == pytest.approx(np.sqrt(2 - R2), abs=1e-15)


def test_distance_to_expansion_oracle(rng):
    # ||y - u/sqrt n||^2 is the top eigenvalue of sum (y_i - u_i/sqrt n)(...)^*
    y = normalize(random_module_vector(rng, 4, 3))
    u = random_unitary_tuple(rng, 4, 3)
    d = y.entries - u / 2.0
    m = sum(a @ adjoint(a) for a in d)
    assert distance_to(y, u) ** 2 == pytest.approx(float(np.linalg.eigvalsh(m)[-1]), abs=1e-12)


def test_distance_to_rejects_bad_input(rng):
    y = ModuleVector.from_list([np.eye(2), np.eye(2)])
    with pytest.raises(NotUnitary):
        distance_to(y, np.stack([np.eye(2), 2 * np.eye(2)]))
    with pytest.raises(DimensionMismatch):
        distance_to(y, random_unitary_tuple(rng, 3, 2))


def test_unitary_helpers(rng):
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = h + adjoint(h)
    u = expm_skew(h, 0.7)
    assert np.linalg.norm(u @ adjoint(u) - np.eye(3)) < 1e-12
    from scipy.linalg import expm

    assert np.linalg.norm(u - expm(0.7j * h)) < 1e-10
    v = haar_unitary(rng, 3)
    assert np.linalg.norm(reunitarize(v) - v) < 1e-12
    w = reunitarize(v + 0.01 * h)
    assert np.linalg.norm(w @ adjoint(w) - np.eye(3)) < 1e-12


def test_search_unitary_input(rng):
    x = ModuleVector(random_unitary_tuple(rng, 3, 2))
    res = search_min_distance(x, QUICK)
    assert res.best_distance <= 1e-8
    assert res.sqrt_cx_norm <= 1e-6


def test_search_scalar_singular_entry_without_witness():
    x = ModuleVector.from_scalars([1.0, 0.0])
    res = search_min_distance(x, SearchConfig(restarts=4, max_iters=2000, witness_seed=False))
    assert res.best_distance == pytest.approx(np.sqrt(2 - R2), abs=1e-6)
    assert res.witness_distance is None
    # auto mode falls back to random starts; forced witness refuses
    assert search_min_distance(x, QUICK).witness_distance is None
    with pytest.raises(NotInvertible):
        search_min_distance(x, SearchConfig(witness_seed=True))


@pytest.mark.parametrize("seed", range(12))
def test_search_scalar_matches_closed_form(seed):
    rng = make_rng(31, seed)
    n = int(rng.integers(1, 9))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    res = search_min_distance(ModuleVector.from_scalars(v), SearchConfig(restarts=2, max_iters=2000,
                                                                       witness_seed=False, seed=seed))
    assert res.best_distance == pytest.approx(scalar.constant_modulus_distance(v), abs=1e-6)


@pytest.mark.parametrize("seed", range(8))
def test_search_soundness(seed):
    rng = make_rng(32, seed)
    n, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
    x = random_module_vector(rng, n, k)
    res = search_min_distance(x, QUICK)
    assert is_constant_modulus(res.best_point)
    assert res.best_distance <= res.sqrt_cx_norm + 1e-8
    assert res.witness_distance == pytest.approx(prop25_upper_bound(x).bound, abs=1e-8)
    # reported value is a true distance of the reported point
    target = normalize(x)
    assert distance_to(target, res.best_point.entries * np.sqrt(n)) == pytest.approx(res.best_distance, abs=1e-10)
    assert res.gap_to_sqrt_cx_norm == pytest.approx(res.sqrt_cx_norm - res.best_distance, abs=0)
    assert len(res.restart_distances) == QUICK.restarts
    assert res.best_distance == min(res.restart_distances)


def test_search_deterministic_and_worker_independent(rng):
    x = random_module_vector(rng, 3, 2)
    a = search_min_distance(x, QUICK)
    b = search_min_distance(x, QUICK)
    c = search_min_distance(x, SearchConfig(restarts=3, max_iters=400, workers=4))
    assert a.to_dict() == b.to_dict() == c.to_dict()


def test_search_seed_changes_random_restarts(rng):
    x = random_module_vector(rng, 3, 2)
    a = search_min_distance(x, SearchConfig(restarts=2, max_iters=100, seed=1))
    b = search_min_distance(x, SearchConfig(restarts=2, max_iters=100, seed=2))
    assert a.restart_distances[1] != b.restart_distances[1]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 4), k=st.integers(1, 3))
def test_search_never_worse_than_witness(seed, n, k):
    x = random_module_vector(make_rng(seed), n, k)
    res = search_min_distance(x, SearchConfig(restarts=1, max_iters=50))
    assert res.best_distance <= res.witness_distance + 1e-12
