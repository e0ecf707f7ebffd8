"""Normal contact, pressure distribution and rolling creep.

Reference values were produced with a 50-digit mpmath evaluation of the
closed forms and are asserted at tight relative tolerances.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from lmprint import (DEFAULT_BEAD, PVC_FILM, BeadGeometry, ContactLoad,
                     SubstrateProperties, contact_pressure, indentation,
                     sliding_ratio, sr_fr_curve, static_slip_check)
from lmprint.errors import ConfigError, FullSlipError, OutOfContactError

# mpmath oracle: F=0.05 N, R=3.5e-4 m, E=3e9 Pa, sigma=0.40, vertical load
ORACLE_H = 6.8040921159533674e-7
ORACLE_A = 1.5431889840792924e-5
ORACLE_AC = 7.4814900320395657e-10


def _substrate(E, sigma, mu=0.4):
    return SubstrateProperties(
        name="test", youngs_modulus=E, poisson_ratio=sigma,
        friction_coefficient=mu, gamma_sub_air=0.04, gamma_sub_lm=0.5,
        angle_table=((0.0, 140.0), (0.2, 40.0)))


def test_indentation_matches_oracle():
    sol = indentation(ContactLoad(force=0.05), DEFAULT_BEAD, PVC_FILM)
    assert sol.indentation_depth == pytest.approx(ORACLE_H, rel=1e-12)
    assert sol.contact_radius == pytest.approx(ORACLE_A, rel=1e-12)
    assert sol.contact_area == pytest.approx(ORACLE_AC, rel=1e-12)


def test_indentation_zero_force():
    sol = indentation(ContactLoad(force=0.0), DEFAULT_BEAD, PVC_FILM)
    assert sol.indentation_depth == 0.0
    assert sol.contact_radius == 0.0
    assert sol.contact_area == 0.0


def test_indentation_tilted_load_uses_normal_component():
    phi = math.radians(30.0)
    tilted = indentation(ContactLoad(force=0.05, normal_angle=phi),
                         DEFAULT_BEAD, PVC_FILM)
    reduced = indentation(ContactLoad(force=0.05 * math.cos(phi)),
                          DEFAULT_BEAD, PVC_FILM)
    assert tilted.indentation_depth == pytest.approx(
        reduced.indentation_depth, rel=1e-14)


def test_contact_area_force_scaling():
    # A_c ~ F^(2/3): multiplying F by 8 multiplies the area by 4
    s1 = indentation(ContactLoad(force=0.02), DEFAULT_BEAD, PVC_FILM)
    s8 = indentation(ContactLoad(force=0.16), DEFAULT_BEAD, PVC_FILM)
    assert s8.contact_area == pytest.approx(4.0 * s1.contact_area, rel=1e-12)


def test_literal_transcribed_variant_differs():
    load = ContactLoad(force=0.05)
    physical = indentation(load, DEFAULT_BEAD, PVC_FILM)
    literal = indentation(load, DEFAULT_BEAD, PVC_FILM, literal_s4=True)
    # the uncorrected form swaps E with (1 - sigma^2) and is absurdly large
    assert literal.indentation_depth == pytest.approx(3714435.3983069716,
                                                      rel=1e-12)
    assert literal.indentation_depth > 1e12 * physical.indentation_depth


def test_pressure_profile_and_edges():
    load = ContactLoad(force=0.05)
    sol = indentation(load, DEFAULT_BEAD, PVC_FILM)
    a = sol.contact_radius
    p0 = contact_pressure(sol, load, 0.0)
    assert p0 == pytest.approx(3 * 0.05 / (2 * math.pi * a * a), rel=1e-12)
    assert contact_pressure(sol, load, a) == 0.0
    assert contact_pressure(sol, load, 0.5 * a) == pytest.approx(
        p0 * math.sqrt(0.75), rel=1e-12)
    with pytest.raises(OutOfContactError):
        contact_pressure(sol, load, a * 1.0000001)
    with pytest.raises(OutOfContactError):
        contact_pressure(sol, load, -1e-9)


def test_pressure_integrates_to_normal_force_randomized():
    # quadrature of P(r) * 2 pi r over the disc returns F cos(phi)
    rng = np.random.default_rng(20260826)
    for _ in range(100):
        force = float(rng.uniform(0.001, 5.0))
        phi = float(rng.uniform(0.0, 1.4))
        radius = float(rng.uniform(1e-4, 2e-3))
        E = float(rng.uniform(1e8, 3e11))
        sigma = float(rng.uniform(0.05, 0.45))
        load = ContactLoad(force=force, normal_angle=phi)
        bead = BeadGeometry(bead_radius=radius, gap_width=radius / 10)
        sol = indentation(load, bead, _substrate(E, sigma))
        integral, _ = quad(
            lambda r: contact_pressure(sol, load, r) * 2 * math.pi * r,
            0.0, sol.contact_radius, limit=200)
        assert integral == pytest.approx(force * math.cos(phi), rel=1e-6)


def test_sr_fr_relation_identity():
    fr = np.linspace(0.0, 1.0, 1000)
    pairs = sr_fr_curve(fr)
    for f, s in pairs:
        assert abs((1.0 - s) ** 3 - (1.0 - f)) < 1e-12
    with pytest.raises(ConfigError):
        sr_fr_curve([1.5])


def test_sliding_ratio_oracle():
    # tan(theta) = 0.2 on PVC (mu = 0.35, sigma = 0.40) at F = 0.05 N
    load = ContactLoad(force=0.05, tangential_angle=math.atan(0.2))
    sol = indentation(load, DEFAULT_BEAD, PVC_FILM)
    state = sliding_ratio(load, PVC_FILM, sol, DEFAULT_BEAD)
    assert state.fr == pytest.approx(0.57142857142857143, rel=1e-12)
    assert state.sr == pytest.approx(0.2460525588708462, rel=1e-12)
    assert state.creep == pytest.approx(-0.0044298986474634667, rel=1e-12)
    assert state.creep < 0  # lag convention


def test_sliding_ratio_zero_obliquity_rolls_cleanly():
    load = ContactLoad(force=0.05, tangential_angle=0.0)
    sol = indentation(load, DEFAULT_BEAD, PVC_FILM)
    state = sliding_ratio(load, PVC_FILM, sol, DEFAULT_BEAD)
    assert state.creep == 0.0
    assert state.sr == 0.0
    assert state.fr == 0.0


def test_full_slip_raises():
    # tan(theta) > mu exceeds the friction cone
    load = ContactLoad(force=0.05, tangential_angle=math.atan(0.4))
    sol = indentation(load, DEFAULT_BEAD, PVC_FILM)
    with pytest.raises(FullSlipError):
        sliding_ratio(load, PVC_FILM, sol, DEFAULT_BEAD)


def test_creep_magnitude_grows_with_obliquity():
    prev = 0.0
    for tan_t in (0.05, 0.1, 0.2, 0.3, 0.34):
        load = ContactLoad(force=0.05, tangential_angle=math.atan(tan_t))
        sol = indentation(load, DEFAULT_BEAD, PVC_FILM)
        mag = abs(sliding_ratio(load, PVC_FILM, sol, DEFAULT_BEAD).creep)
        assert mag > prev
        prev = mag


def test_static_slip_check():
    assert static_slip_check(ContactLoad(force=1.0, normal_angle=0.0),
                             PVC_FILM) == "no-slip"
    assert static_slip_check(
        ContactLoad(force=1.0, normal_angle=math.atan(0.35)),
        PVC_FILM) == "no-slip"  # boundary holds
    assert static_slip_check(
        ContactLoad(force=1.0, normal_angle=math.atan(0.36)),
        PVC_FILM) == "slip"


def test_load_validation():
    with pytest.raises(ConfigError):
        ContactLoad(force=-1.0)
    with pytest.raises(ConfigError):
        ContactLoad(force=1.0, normal_angle=math.pi / 2)
