import numpy as np
import pytest

import braggstack as bs

ND_Z = 1.215e11  # 3e11 cm^-3 over half an 810 nm period


def test_zeta_zero_density(cfg):
    assert bs.zeta(0.0, 0.0, cfg) == 0.0 + 0.0j


def test_zeta_on_resonance_single_line(cfg1):
    z = bs.zeta(ND_Z, 0.0, cfg1)
    assert z.real == pytest.approx(0.0, abs=1e-15)
    assert z.imag == pytest.approx(0.017647, abs=2e-5)


def test_zeta_half_linewidth(cfg1):
    z = bs.zeta(ND_Z, cfg1.gamma / 2, cfg1)
    assert z == pytest.approx(-0.0088236 + 0.0088236j, abs=2e-6)


def test_zeta_linear_in_density(cfg):
    deltas = np.linspace(-35, 10, 31) * cfg.gamma
    assert np.allclose(bs.zeta(2 * ND_Z, deltas, cfg), 2 * bs.zeta(ND_Z, deltas, cfg),
                       rtol=1e-14, atol=0)


def test_zeta_passive_sign(cfg):
    deltas = np.linspace(-60, 40, 501) * cfg.gamma
    z = bs.zeta(ND_Z, deltas, cfg)
    assert np.all(z.imag > 0)


def test_zeta_symmetry_about_line_center(cfg1):
    d = np.linspace(0.1, 20, 50) * cfg1.gamma
    zp = bs.zeta(ND_Z, d, cfg1)
    zm = bs.zeta(ND_Z, -d, cfg1)
    np.testing.assert_allclose(zp.real, -zm.real, rtol=1e-13)
    np.testing.assert_allclose(zp.imag, zm.imag, rtol=1e-13)


def test_cross_section_values(cfg1):
    sigma0 = bs.resonant_cross_section(780e-9)
    assert sigma0 * 1e4 == pytest.approx(2.905e-9, rel=1e-3)  # cm^2
    assert bs.cross_section(0.0, cfg1) == pytest.approx(sigma0, rel=1e-14)
    assert bs.cross_section(cfg1.gamma, cfg1) == pytest.approx(sigma0 / 5, rel=1e-14)
    assert bs.cross_section(1e6 * cfg1.gamma, cfg1) < 1e-12 * sigma0


def test_cross_section_tracks_im_zeta(cfg):
    # same Lorentzian envelope: sigma = 2 Im(zeta) / surface density
    deltas = np.linspace(-40, 15, 1101) * cfg.gamma
    sigma = bs.cross_section(deltas, cfg)
    z = bs.zeta(ND_Z, deltas, cfg)
    np.testing.assert_allclose(sigma, 2.0 * z.imag / ND_Z, rtol=1e-12)


def test_default_line_set_normalized():
    lines = bs.rb85_d2_f3_lines()
    assert sum(l.strength for l in lines) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose([l.delta_f / bs.GAMMA_RB85_D2 for l in lines],
                               [-31.0, -20.0, 0.0], rtol=1e-14)


def test_config_validation():
    with pytest.raises(ValueError):
        bs.AtomResponseConfig(0.0, bs.rb85_d2_f3_lines(), 780e-9)
    with pytest.raises(ValueError):
        bs.AtomResponseConfig(bs.GAMMA_RB85_D2, (), 780e-9)
    with pytest.raises(ValueError):
        bs.AtomResponseConfig(bs.GAMMA_RB85_D2,
                              (bs.SpectralLine(0.0, 0.5),), 780e-9)
