import json
from importlib import resources

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from owid.errors import DomainError
from owid.states import (
    BellDiagonalParams,
    XStateParams,
    bell_diagonal_density,
    bell_diagonal_spectrum,
    bloch_decompose,
    params_from_json,
    params_to_json,
    validate_corner_condition,
    x_state_density,
    x_state_matrix,
    x_state_spectrum,
)
from sampling import random_bell, random_x

PARAMS_SCHEMA = json.loads(resources.files("owid").joinpath("schemas/params.schema.json").read_text())


def test_bell_spectrum_matches_matrix(rng):
    for p in random_bell(rng, 20):
        np.testing.assert_allclose(bell_diagonal_spectrum(p), np.linalg.eigvalsh(bell_diagonal_density(p).matrix), atol=1e-14)


def test_x_spectrum_matches_matrix(rng):
    for p in random_x(rng, 20):
        np.testing.assert_allclose(x_state_spectrum(p), np.linalg.eigvalsh(x_state_matrix(p)), atol=1e-14)


def test_bell_state_phi_plus():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = bell_diagonal_density(BellDiagonalParams(1, -1, 1)).matrix
    np.testing.assert_allclose(rho, np.outer(v, v), atol=1e-15)


def test_maximally_mixed():
    np.testing.assert_allclose(bell_diagonal_density(BellDiagonalParams(0, 0, 0)).matrix, np.eye(4) / 4)


def test_x_state_bloch_form(rng):
    for p in random_x(rng, 5):
        dec = bloch_decompose(x_state_matrix(p))
        np.testing.assert_allclose(dec.r, 0, atol=1e-15)
        np.testing.assert_allclose(dec.s, [0, 0, p.s], atol=1e-15)
        np.testing.assert_allclose(dec.T, np.diag(p.c), atol=1e-15)
        np.testing.assert_allclose(dec.reconstruct(), x_state_matrix(p), atol=1e-15)


def test_bloch_round_trip_general(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    np.testing.assert_allclose(bloch_decompose(rho).reconstruct(), rho, atol=1e-14)


def test_labelled_spectrum_keys():
    assert list(BellDiagonalParams(0, 0, 0).labelled_spectrum()) == ["lambda1", "lambda2", "lambda3", "lambda4"]
    assert list(XStateParams(0, 0, 0, 0).labelled_spectrum()) == ["lambda13", "lambda14", "lambda15", "lambda16"]


def test_unphysical_names_eigenvalue():
    with pytest.raises(DomainError, match="lambda1 "):
        BellDiagonalParams(1, 1, 1).check_physical()
    with pytest.raises(DomainError, match="lambda14"):
        x_state_density(XStateParams(0.3, 0.9, 0.9, 0.9))
    with pytest.raises(DomainError, match="s = "):
        XStateParams(1.0, 0, 0, 0).check_physical()
    assert not BellDiagonalParams(1, 1, 1).is_physical()
    assert BellDiagonalParams(-1, -1, -1).is_physical()


@pytest.mark.parametrize(
    "p, holds",
    [
        (XStateParams(0.3, 0.3, -0.4, 0.56), True),
        (XStateParams(0.3, 0.5, 0.1, 0.2), False),
        (XStateParams(0.0, 0.1, 0.2, 0.3), False),
        (XStateParams(0.5, 0.1, 0.2, 0.6), False),
        (XStateParams(-0.2, 0.1, -0.2, -0.3), True),
    ],
)
def test_corner_condition(p, holds):
    assert bool(validate_corner_condition(p)) is holds


def test_corner_condition_boundary():
    p = XStateParams(0.0, 0.2, 0.2, 0.3)
    assert not validate_corner_condition(p)
    assert validate_corner_condition(p, allow_boundary=True)
    assert set(validate_corner_condition(p).violations) == {"|c1| < |c2|", "0 < |s|"}


@pytest.mark.parametrize("p", [BellDiagonalParams(0.1, -0.2, 0.3), XStateParams(0.3, 0.3, -0.4, 0.56)])
def test_json_round_trip(p):
    obj = params_to_json(p)
    jsonschema.validate(obj, PARAMS_SCHEMA)
    assert params_from_json(json.loads(json.dumps(obj))) == p


@pytest.mark.parametrize(
    "obj",
    [
        {"family": "x", "c": [0, 0, 0]},
        {"family": "bell", "s": 0.2, "c": [0, 0, 0]},
        {"family": "q", "c": [0, 0, 0]},
        {"family": "bell", "c": [0, 0]},
        {"family": "bell", "c": ["a", 0, 0]},
        [0, 0, 0],
    ],
)
def test_json_rejects(obj):
    with pytest.raises(DomainError):
        params_from_json(obj)


coef = st.floats(-1, 1, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.999, 0.999), coef, coef, coef)
def test_physicality_agrees_with_matrix(s, c1, c2, c3):
    p = XStateParams(s, c1, c2, c3)
    smallest = np.linalg.eigvalsh(x_state_matrix(p))[0]
    if p.is_physical():
        assert smallest >= -1e-9
    else:
        assert smallest < 1e-9
