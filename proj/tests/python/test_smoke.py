import json
import math

import numpy as np
import pytest

import magspec as ms


def test_version():
    assert ms.__version__


def test_potential_phases_and_json_round_trip():
    pot = ms.MagneticPotential.symmetric_gauge(0.8)
    assert pot.phase([0, 0], [1, 0]) == 0.0
    assert pot.phase([1, 0], [0, 1]) == pytest.approx(0.4 * (1 * 1 - 0 * 0))
    back = ms.MagneticPotential.from_json(pot.to_json())
    assert back.phase([2, 3], [-1, 4]) == pot.phase([2, 3], [-1, 4])
    doc = json.loads(pot.to_json())
    assert doc["kind"] == "symmetric_gauge"


def test_cocycle_invariants():
    pot = ms.MagneticPotential.random(2, 7, 5.0)
    coc = ms.cocycle_from_potential(pot)
    q, x, y, z = [1, -2], [3, 0], [0, 2], [-1, 1]
    lhs = coc.phase(q, [3, 2], z) + coc.phase(q, x, y)
    rhs = coc.phase([4, -2], y, z) + coc.phase(q, x, [-1, 3])
    assert math.remainder(lhs - rhs, 2 * math.pi) == pytest.approx(0.0, abs=1e-12)
    assert coc.phase(q, x, [0, 0]) == pytest.approx(0.0, abs=1e-12)


def test_assemble_matches_numpy_eigensolver():
    pot = ms.MagneticPotential.symmetric_gauge(2 * math.pi / 3)
    lam = ms.cochain_direct(pot)
    box = ms.Box.dirichlet(2, 3)
    h = ms.assemble(ms.Symbol.harper(), lam, box)
    assert h.shape == (49, 49)
    assert np.allclose(h, h.conj().T)
    ours = ms.eigenvalues(h)
    numpys = np.linalg.eigvalsh(h)
    assert np.max(np.abs(ours - numpys)) < 1e-10


def test_bloch_bands_free_case():
    bands = ms.bloch_bands_harper(0, 1, 32)
    assert bands.min() == pytest.approx(-4.0)
    assert bands.max() == pytest.approx(4.0)


def test_hausdorff_and_gaps():
    assert ms.hausdorff(np.array([0.0, 10.0]), np.array([0.5, 9.0])) == pytest.approx(1.0)
    gap_list = ms.gaps(np.array([0.0, 1.0]), 0.5)
    assert gap_list == [(0.0, 1.0)]
    assert ms.resolvent_norm(np.array([0.0]), 1j) == pytest.approx(1.0)


def test_norm_and_selfadjointness():
    harper = ms.Symbol.harper()
    value, certified = ms.norm_1_inf(harper)
    assert value == 4.0
    assert certified
    assert ms.is_selfadjoint(harper, ms.Box.dirichlet(2, 2), 1e-12)


def test_flux_scan_shape():
    grid, spectra = ms.harper_flux_scan(L=3, grid_n=5)
    assert list(grid) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(spectra) == 5
    assert all(len(s) == 49 for s in spectra)
    assert np.max(np.abs(spectra[0])) <= 4.0 + 1e-9
