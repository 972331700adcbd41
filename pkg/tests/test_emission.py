import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slabsqueeze.constants import C_M_S, KB_EV_K
from slabsqueeze.dielectric import DielectricResponse, FrequencyGrid, LorentzModel
from slabsqueeze.emission import (
    EmissionState,
    bose_occupation,
    emission_intensity,
    mode_normalization,
    mode_overlap_integral,
    quasiparticle_commutator,
    quasiparticle_normalization,
)
from slabsqueeze.errors import (
    CrossoverSingularity,
    InconsistentGrids,
    InconsistentMedium,
    LasingThreshold,
    TransparentMedium,
)
from slabsqueeze.slab import SlabGeometry, slab_transfer
from slabsqueeze.synthetic import single_crossover_table

from conftest import L25, MU, omega
from oracles import overlap_by_quadrature, two_sided_limit


class TestBose:
    def test_unit_occupation(self):
        state = EmissionState(300.0, 0.0)
        assert bose_occupation(state, KB_EV_K * 300.0 * np.log(2)) == pytest.approx(1.0, rel=1e-14)

    def test_below_mu(self):
        state = EmissionState(3.0, 1.49)
        e = 1.49 - KB_EV_K * 3.0 * np.log(2)
        assert bose_occupation(state, e) == pytest.approx(-2.0, rel=1e-10)

    def test_boltzmann_tail(self):
        state = EmissionState(300.0, 0.0)
        e = 40.0 * KB_EV_K * 300.0
        assert bose_occupation(state, e) == pytest.approx(np.exp(-40.0), rel=1e-10)

    def test_planck(self):
        state = EmissionState(300.0, 0.0)
        assert bose_occupation(state, KB_EV_K * 300.0) == pytest.approx(1 / (np.e - 1), rel=1e-14)
        assert bose_occupation(state, KB_EV_K * 300.0) == pytest.approx(0.58198, abs=5e-6)

    def test_singular_at_mu(self):
        with pytest.raises(CrossoverSingularity):
            bose_occupation(EmissionState(3.0, 1.49), 1.49)

    def test_large_argument_underflows_quietly(self):
        assert bose_occupation(EmissionState(3.0, 0.0), 1.5) == 0.0

    @settings(max_examples=200, deadline=None)
    @given(t=st.floats(0.5, 2000.0), mu=st.floats(0.0, 2.0), de=st.floats(-0.2, 0.2).filter(lambda v: abs(v) > 1e-9))
    def test_stable_inverse(self, t, mu, de):
        state = EmissionState(t, mu)
        e = mu + de
        if e <= 0:
            return
        x = state.beta * (e - mu)
        if x > 700:
            return
        b = bose_occupation(state, e)
        assert b * np.expm1(x) == pytest.approx(1.0, abs=1e-12)
        assert np.sign(b) == np.sign(de)

    @pytest.mark.parametrize("t, mu", [(0.0, 0.0), (-1.0, 0.0), (3.0, -0.1)])
    def test_invalid_state(self, t, mu):
        with pytest.raises(ValueError):
            EmissionState(t, mu)


def lorentz_pipeline(temperature, grid=None, model=None):
    grid = grid or FrequencyGrid.linspace(1.505, 1.525, 4001)
    model = model or LorentzModel(1.515, 2e-4)
    resp = DielectricResponse.lorentz(model, grid)
    tr = slab_transfer(resp, SlabGeometry(L25))
    return resp, tr, emission_intensity(EmissionState(temperature), tr, resp)


class TestEmissionIntensity:
    def test_lossless_emits_nothing(self):
        grid = FrequencyGrid.linspace(1.4, 1.6, 500)
        resp = DielectricResponse.from_chi(grid, np.full(500, 11.0 + 0j))
        tr = slab_transfer(resp, SlabGeometry(L25))
        em = emission_intensity(EmissionState(300.0), tr, resp)
        assert np.all(em.I == 0)

    def test_absorber_emits(self):
        resp, tr, em = lorentz_pipeline(300.0)
        assert np.all(em.I > 0)
        np.testing.assert_allclose(em.I, tr.loss * em.b, rtol=1e-15)

    def test_inconsistent_grids(self):
        resp, tr, _ = lorentz_pipeline(300.0)
        other = DielectricResponse.lorentz(LorentzModel(1.515, 2e-4), FrequencyGrid.linspace(1.5, 1.53, 4001))
        with pytest.raises(InconsistentGrids):
            emission_intensity(EmissionState(300.0), tr, other)

    def test_absorber_below_mu_is_inconsistent(self):
        resp, tr, _ = lorentz_pipeline(300.0)
        with pytest.raises(InconsistentMedium):
            emission_intensity(EmissionState(300.0, 1.52), tr, resp)

    def test_propagates_lasing(self):
        grid = FrequencyGrid.linspace(1.0, 2.0, 20)
        resp = DielectricResponse.from_chi(grid, np.full(20, 11.96 - 0.5j))
        tr = slab_transfer(resp, SlabGeometry(L25), lasing_guard=1e30, allow_lasing=True)
        with pytest.raises(LasingThreshold):
            emission_intensity(EmissionState(3.0, 2.5), tr, resp)
        em = emission_intensity(EmissionState(3.0, 2.5), tr, resp, allow_lasing=True)
        assert np.all(np.isnan(em.I))

    def test_crossover_regularized_and_continuous(self, crossover_response):
        tr = slab_transfer(crossover_response, SlabGeometry(L25))
        state = EmissionState(3.0, MU)
        em = emission_intensity(state, tr, crossover_response)
        e = crossover_response.grid.energies
        k = int(np.argmin(np.abs(e - MU)))
        assert em.regularized[k] and em.regularized.sum() == 1
        assert np.all(em.I >= 0) and np.all(np.isfinite(em.I))
        limit = two_sided_limit(state, single_crossover_table(mu=MU), L25)
        assert em.I[k] == pytest.approx(limit, rel=1e-6)

    def test_temperature_scales_crossover_value(self, crossover_response):
        tr = slab_transfer(crossover_response, SlabGeometry(L25))
        k = int(np.argmin(np.abs(crossover_response.grid.energies - MU)))
        cold = emission_intensity(EmissionState(3.0, MU), tr, crossover_response).I[k]
        warm = emission_intensity(EmissionState(6.0, MU), tr, crossover_response).I[k]
        assert warm == pytest.approx(2 * cold, rel=1e-12)


class TestModeOverlap:
    def test_real_index_limit(self):
        n, w, L = 3.6, omega(1.5), L25
        k = n * w / C_M_S
        expected = 2 * L + 2 * np.sin(k * L) / k
        assert mode_overlap_integral(n + 0j, w, L, +1) == pytest.approx(expected, rel=1e-14)
        assert mode_overlap_integral(n + 1e-12j, w, L, +1) == pytest.approx(expected, rel=1e-12)

    def test_generic_against_quadrature(self):
        n, w = 3.6 + 0.1j, omega(1.515)
        for parity in (+1, -1):
            closed = mode_overlap_integral(n, w, L25, parity)
            assert closed == pytest.approx(overlap_by_quadrature(n, w, L25, parity), rel=1e-10)

    def test_gain_side(self):
        n, w = 3.6 - 0.002j, omega(1.48)
        closed = mode_overlap_integral(n, w, L25, +1)
        assert closed == pytest.approx(overlap_by_quadrature(n, w, L25, +1), rel=1e-10)


class TestNormalization:
    def test_scaling(self):
        n, w = 3.6 + 0.1j, omega(1.515)
        p1, m1, _ = quasiparticle_normalization(n, 0.5, w, L25)
        p2, m2, _ = quasiparticle_normalization(n, 1.0, w, L25)
        assert p2**2 == pytest.approx(p1**2 / 2, rel=1e-14)
        assert m2**2 == pytest.approx(m1**2 / 2, rel=1e-14)

    def test_transparent(self):
        with pytest.raises(TransparentMedium):
            quasiparticle_normalization(3.6 + 0j, 0.0, omega(1.5), L25)

    @pytest.mark.parametrize("n, chi_im, sign", [(3.6 + 0.1j, 0.72, 1.0), (3.6 - 0.001j, -0.0072, -1.0)])
    def test_commutator_from_quadrature(self, n, chi_im, sign):
        w = omega(1.5)
        plus, minus, s = quasiparticle_normalization(n, chi_im, w, L25)
        assert s == sign
        for norm, parity in ((plus, +1), (minus, -1)):
            c = quasiparticle_commutator(norm, chi_im, w, overlap_by_quadrature(n, w, L25, parity))
            assert c == pytest.approx(sign, abs=1e-8)

    def test_grid_normalization(self):
        resp, _, _ = lorentz_pipeline(300.0)
        norm = mode_normalization(resp, L25)
        assert np.all(norm.N_plus > 0) and np.all(norm.N_minus > 0)
        assert np.all(norm.sign == 1)


@settings(max_examples=40, deadline=None)
@given(
    ex=st.floats(1.45, 1.55),
    gamma=st.floats(5e-5, 5e-3),
    peak=st.floats(1e-3, 2.0),
    temperature=st.floats(1.0, 1000.0),
)
def test_emission_nonnegative_lorentz(ex, gamma, peak, temperature):
    model = LorentzModel(ex, gamma, peak * gamma * ex)
    resp, tr, em = lorentz_pipeline(temperature, FrequencyGrid.linspace(1.40, 1.60, 800), model)
    assert np.all(em.I >= 0)
    lossy = tr.loss != 0
    assert np.array_equal(np.sign(tr.loss[lossy]), np.sign(resp.chi.imag[lossy]))


@settings(max_examples=40, deadline=None)
@given(
    slope=st.floats(0.2, 5.0),
    max_gain=st.floats(1e-4, 0.008),
    temperature=st.floats(1.0, 300.0),
    background=st.floats(0.0, 12.0),
    count=st.integers(101, 3001),
)
def test_emission_nonnegative_gain_table(slope, max_gain, temperature, background, count):
    table = single_crossover_table(mu=MU, slope=slope, max_gain=max_gain, background=background)
    if count % 2 == 0:
        count += 1
    grid = FrequencyGrid(np.linspace(1.44, 1.54, count))
    resp = DielectricResponse.tabulated(table, grid)
    tr = slab_transfer(resp, SlabGeometry(L25), allow_lasing=True)
    em = emission_intensity(EmissionState(temperature, MU), tr, resp, allow_lasing=True)
    ok = ~tr.lasing
    assert np.all(em.I[ok] >= 0)
