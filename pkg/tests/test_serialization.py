import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cstar_sharp.continuous_l2 import FiniteMeasureSpace, L2Function, SubspaceProjector
from cstar_sharp.ensembles import make_rng, random_module_vector
from cstar_sharp.group_integral import normalized_diagonal_function
from cstar_sharp.serialization import (
    InputError,
    dumps,
    group_function_from_json,
    group_function_to_json,
    l2_function_from_json,
    l2_function_to_json,
    loads,
    matrix_from_json,
    matrix_to_json,
    measure_space_from_json,
    measure_space_to_json,
    module_vector_from_json,
    module_vector_to_json,
    projector_from_json,
    projector_to_json,
)

finite = st.floats(allow_nan=False, allow_infinity=False, allow_subnormal=True)


def roundtrip(obj):
    return loads(dumps(obj).encode("utf-8"))


@settings(max_examples=200, deadline=None)
@given(vals=st.lists(st.tuples(finite, finite), min_size=4, max_size=4))
def test_matrix_roundtrip_bitwise(vals):
    a = np.array([complex(r, i) for r, i in vals]).reshape(2, 2)
    b = matrix_from_json(roundtrip(matrix_to_json(a)))
    assert a.view(np.float64).tobytes() == b.view(np.float64).tobytes()


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 5), k=st.integers(1, 4))
def test_module_vector_roundtrip(seed, n, k):
    x = random_module_vector(make_rng(seed), n, k)
    assert module_vector_from_json(roundtrip(module_vector_to_json(x))) == x


def test_l2_and_projector_roundtrip(rng):
    space = FiniteMeasureSpace(rng.uniform(0.1, 2, 5))
    assert measure_space_from_json(roundtrip(measure_space_to_json(space))) == space
    f = L2Function(space, rng.standard_normal(5) + 1j * rng.standard_normal(5))
    assert l2_function_from_json(roundtrip(l2_function_to_json(f)), space) == f
    proj = SubspaceProjector.from_spanning(space, rng.standard_normal((2, 5)))
    back = projector_from_json(roundtrip(projector_to_json(proj)), space)
    assert back.dim == proj.dim
    g = L2Function(space, rng.standard_normal(5) + 1j * rng.standard_normal(5))
    assert np.allclose(back.apply(g).values, proj.apply(g).values, atol=1e-12)


def test_group_function_roundtrip(rng):
    f = normalized_diagonal_function(rng, 3, 2)
    assert group_function_from_json(roundtrip(group_function_to_json(f))) == f


@pytest.mark.parametrize(
    "doc",
    [
        {"rows": 2, "cols": 2, "data": [[1, 0]]},
        {"rows": 0, "cols": 1, "data": []},
        {"rows": 1, "cols": 1, "data": [[1]]},
        {"rows": 1, "cols": 1, "data": [["a", 0]]},
        {"rows": True, "cols": 1, "data": [[1, 0]]},
        {"cols": 1, "data": [[1, 0]]},
        [1, 2],
    ],
)
def test_malformed_matrix(doc):
    with pytest.raises(InputError):
        matrix_from_json(doc)


def test_malformed_module_vector():
    m = matrix_to_json(np.eye(2))
    with pytest.raises(InputError):
        module_vector_from_json({"n": 2, "k": 2, "entries": [m]})
    with pytest.raises(InputError):
        module_vector_from_json({"n": 1, "k": 3, "entries": [m]})


def test_byte_offsets():
    with pytest.raises(InputError) as info:
        loads(b'{"n": 1,, }')
    assert info.value.byte_offset == 8
    # multibyte characters before the error count in bytes, not code points
    with pytest.raises(InputError) as info:
        loads('{"é": x}'.encode("utf-8"))
    assert info.value.byte_offset == 7
    with pytest.raises(InputError) as info:
        loads(b'{"a": "\xff"}')
    assert info.value.byte_offset == 7
    assert "byte offset" in str(info.value)


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
    assert json.loads(dumps({"x": 0.1})) == {"x": 0.1}
