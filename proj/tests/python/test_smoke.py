import cmath
import math

import numpy as np
import pytest

import pbphase


def density(amps):
    v = np.asarray(amps, dtype=complex)
    return np.outer(v, v.conj())


def test_eigenstate_amplitudes():
    amps = pbphase.pb_eigenstate(3, 1)
    assert len(amps) == 4
    for n, a in enumerate(amps):
        assert a == pytest.approx(cmath.exp(1j * n * math.pi / 2) / 2, abs=1e-14)


def test_single_photon_negativity():
    rho = np.diag([0.0, 1.0]).astype(complex)
    assert pbphase.wigner_point(rho, 0.0, 0.0) == pytest.approx(-2 / math.pi, abs=1e-14)
    assert pbphase.negativity_volume(rho) == pytest.approx(2 * math.exp(-0.5) - 1, abs=1e-6)


def test_grid_shape_and_symmetry():
    w = pbphase.wigner_grid(density(pbphase.pb_eigenstate(2)), 3.0, 21)
    assert w.shape == (21, 21)
    # |phi_0> has real amplitudes, so W is even in p
    assert np.allclose(w, w[:, ::-1], atol=1e-13)


def test_factors_and_roots():
    f = pbphase.symmetric_factors(4)
    assert f == pytest.approx([math.sqrt(math.factorial(j) / 4**j) for j in range(5)], abs=1e-12)
    roots = pbphase.alpha_roots(4, 0.2)
    assert len(roots) == 4


def test_interference_is_normalized():
    p = pbphase.interference_probs(3, 0.0, 1.0)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_herald_small_squeezing():
    res = pbphase.herald(4, 0.02, 1.0)
    assert res.F > 0.99
    assert res.rho_A.shape == (6, 6)
    assert 0.0 < res.P < 1e-10


def test_invalid_s_rejected():
    with pytest.raises(ValueError):
        pbphase.pb_eigenstate(0)
