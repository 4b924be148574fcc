import math

import numpy as np
import pytest
from scipy import constants as const

from fluxspec.circuit import (
    DEFAULT_JUNCTION_AREA_UM2,
    CircuitParams,
    SpectrumTable,
    TruncationSpec,
    adiabatic_phi4,
    build_full_hamiltonian,
    ip_from_matrix_element,
    qubit_gap_and_ip,
    qubit_hamiltonian,
    spectrum_vs_flux,
)
from fluxspec.errors import ParameterError, TruncationLimitError
from fluxspec.operators import eigs_hermitian, hermiticity_defect

PHI0 = const.h / (2 * const.e)


class TestCircuitParams:
    def test_ec_conversion_roundtrip(self):
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=4.94, alpha=0.58,
                                 csh_ff=10.0, lr_nh=0.9, cr_ff=742.0, lc_nh=0.5)
        assert p.ec_ghz == pytest.approx(4.94, rel=1e-12)
        assert p.cj_ff == pytest.approx(3.9211, abs=2e-4)

    def test_ej_from_jc_default_area(self):
        p = CircuitParams.create(jc_ua_um2=0.66, ecj_ghz=4.94, alpha=0.53,
                                 csh_ff=10.0, lr_nh=0.9, cr_ff=742.0, lc_nh=0.74)
        assert p.junction_area_um2 == DEFAULT_JUNCTION_AREA_UM2
        assert p.ej_ghz == pytest.approx(93.46, abs=0.01)

    def test_alpha_tilde(self):
        p = CircuitParams.create(ej_ghz=90.0, cj_ff=4.0, alpha=0.5,
                                 csh_ff=2.0, lr_nh=0.9, cr_ff=742.0, lc_nh=0.5)
        assert p.alpha_tilde == pytest.approx(1.0)

    @pytest.mark.parametrize("bad", [
        dict(ej_ghz=90.0, cj_ff=4.0, alpha=1.5, csh_ff=2.0,
             lr_nh=0.9, cr_ff=742.0, lc_nh=0.5),
        dict(ej_ghz=-1.0, cj_ff=4.0, alpha=0.5, csh_ff=2.0,
             lr_nh=0.9, cr_ff=742.0, lc_nh=0.5),
        dict(ej_ghz=90.0, cj_ff=4.0, alpha=0.5, csh_ff=2.0,
             lr_nh=0.9, cr_ff=-742.0, lc_nh=0.5),
    ])
    def test_invalid_params(self, bad):
        with pytest.raises(ParameterError):
            CircuitParams.create(**bad)

    def test_exclusive_sources(self):
        with pytest.raises(ParameterError):
            CircuitParams.create(ej_ghz=90.0, jc_ua_um2=0.6, cj_ff=4.0,
                                 alpha=0.5, csh_ff=2.0, lr_nh=0.9,
                                 cr_ff=742.0, lc_nh=0.5)
        with pytest.raises(ParameterError):
            CircuitParams.create(ej_ghz=90.0, cj_ff=4.0, ecj_ghz=5.0,
                                 alpha=0.5, csh_ff=2.0, lr_nh=0.9,
                                 cr_ff=742.0, lc_nh=0.5)


class TestTruncation:
    def test_dim(self):
        t = TruncationSpec(4, 5, 6, 7)
        assert t.dim == 9 * 11 * 6 * 7

    def test_minimums(self):
        with pytest.raises(ParameterError):
            TruncationSpec(3, 4, 4, 4)
        with pytest.raises(ParameterError):
            TruncationSpec(4, 4, 3, 4)

    def test_cap(self):
        with pytest.raises(TruncationLimitError):
            TruncationSpec(40, 40, 40, 40)


class TestFullHamiltonian:
    def test_hermitian_and_dim(self, design_params):
        trunc = TruncationSpec(4, 4, 5, 5)
        h = build_full_hamiltonian(design_params, trunc, 0.3)
        assert h.shape == (trunc.dim, trunc.dim)
        assert trunc.dim == 9 * 9 * 5 * 5
        assert hermiticity_defect(h) <= 1e-12

    def test_invalid_flux(self, design_params):
        with pytest.raises(ParameterError):
            build_full_hamiltonian(design_params, TruncationSpec(4, 4, 4, 4), 1.2)

    def test_flux_reflection_symmetry(self, design_params):
        trunc = TruncationSpec(4, 4, 5, 5)
        va, _ = eigs_hermitian(build_full_hamiltonian(design_params, trunc, 0.3), 5)
        vb, _ = eigs_hermitian(build_full_hamiltonian(design_params, trunc, 0.7), 5)
        assert np.max(np.abs(va - vb)) < 1e-8

    def test_decoupled_limit_union_oracle(self, design_params):
        """Tiny coupler: spectrum approaches isolated qubit + isolated LC.

        The qubit oracle builds the standard 3-junction charge Hamiltonian
        from an explicitly inverted capacitance matrix; the resonator
        oracle is 1/(2 pi sqrt(L_R C_R)).
        """
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=4.94, alpha=0.58,
                                 csh_ff=design_params.csh_ff,
                                 lr_nh=0.8986, cr_ff=742.3, lc_nh=1e-6)
        ncut = 6
        dim = 2 * ncut + 1
        n_op = np.diag(np.arange(-ncut, ncut + 1).astype(float))
        cj = p.cj_ff * 1e-15
        csh = p.csh_ff * 1e-15
        cap = np.array([[cj * (1 + p.alpha) + csh, p.alpha * cj + csh],
                        [p.alpha * cj + csh, cj * (1 + p.alpha) + csh]])
        cinv = np.linalg.inv(cap)
        e2_ghz = (2 * const.e) ** 2 / 2 / const.h / 1e9
        eye = np.eye(dim)
        kin = e2_ghz * (cinv[0, 0] * np.kron(n_op @ n_op, eye)
                        + cinv[1, 1] * np.kron(eye, n_op @ n_op)
                        + 2 * cinv[0, 1] * np.kron(n_op, n_op))
        down = np.eye(dim, k=1)
        cosm = 0.5 * (down + down.T)
        shift = np.kron(down, down) * np.exp(2j * math.pi * 0.5)
        cos3 = 0.5 * (shift + shift.conj().T)
        h_oracle = (kin - p.ej_ghz * (np.kron(cosm, eye) + np.kron(eye, cosm))
                    - p.alpha * p.ej_ghz * cos3)
        qvals = np.linalg.eigvalsh(h_oracle)
        gap_oracle = qvals[1] - qvals[0]
        res_oracle = 1.0 / (2 * math.pi * math.sqrt(0.8986e-9 * 742.3e-15)) / 1e9

        full = build_full_hamiltonian(p, TruncationSpec(5, 5, 4, 6), 0.5)
        vals, _ = eigs_hermitian(full, 3)
        got = np.array([vals[1] - vals[0], vals[2] - vals[0]])
        expected = np.sort([gap_oracle, res_oracle])
        assert np.max(np.abs(got - expected)) < 1e-3

    def test_alpha_zero_resonator_crosscheck(self, design_params):
        # opening the loop at the small junction leaves the renormalized
        # resonator as the lowest transition (quadratic-mode approximation)
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=4.94, alpha=1e-9,
                                 csh_ff=design_params.csh_ff,
                                 lr_nh=0.8986, cr_ff=742.3, lc_nh=0.5)
        h = build_full_hamiltonian(p, TruncationSpec(4, 4, 6, 8), 0.5)
        vals, _ = eigs_hermitian(h, 2)
        omega_renorm = 1.0 / (2 * math.pi * math.sqrt(1.3986e-9 * 742.3e-15)) / 1e9
        assert (vals[1] - vals[0]) == pytest.approx(omega_renorm, rel=0.01)


class TestQubitReduction:
    def test_design_gap_paper_value(self, design_params):
        delta, _ = qubit_gap_and_ip(design_params)
        assert delta == pytest.approx(3.57, abs=0.005)

    def test_gap_truncation_doubling_alpha_one(self):
        # three equal junctions: gap against the same model at doubled cutoff
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=4.94, alpha=1.0,
                                 csh_ff=5.0, lr_nh=0.8986, cr_ff=742.3, lc_nh=0.5)
        h8 = qubit_hamiltonian(p, 0.5, ncut=8)
        h16 = qubit_hamiltonian(p, 0.5, ncut=16)
        gap8 = np.diff(np.sort(np.linalg.eigvalsh(h8))[:2])[0]
        gap16 = np.diff(np.sort(np.linalg.eigvalsh(h16))[:2])[0]
        assert abs(gap8 - gap16) < 1e-4

    def test_ip_estimators_agree_clean_regime(self):
        # deep double well with a light, fast coupler mode: slope at the
        # window edge vs sweet-spot current matrix element
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=1.2, alpha=0.8,
                                 csh_ff=1.0, lr_nh=0.9, cr_ff=742.0, lc_nh=0.01)
        ip_me = ip_from_matrix_element(p, 0.5, ncut=12)
        _, ip_slope = qubit_gap_and_ip(p, ncut=12, flux_window=(0.49, 0.51))
        assert abs(ip_slope - ip_me) / ip_me < 0.02

    def test_window_must_bracket_sweet_spot(self, design_params):
        with pytest.raises(ParameterError):
            qubit_gap_and_ip(design_params, flux_window=(0.52, 0.6))

    def test_window_too_narrow(self, design_params):
        from fluxspec.errors import EstimationError
        with pytest.raises(EstimationError):
            qubit_gap_and_ip(design_params, flux_window=(0.4999, 0.5001))


class TestAdiabaticPhi4:
    def test_sweet_spot_zero(self, design_params):
        assert adiabatic_phi4(design_params, 0.0, 0.0, 0.0, 0.5) == pytest.approx(0.0, abs=1e-15)

    def test_lc_to_zero(self):
        p = CircuitParams.create(ej_ghz=93.46, ecj_ghz=4.94, alpha=0.58,
                                 csh_ff=10.0, lr_nh=0.9, cr_ff=742.0, lc_nh=1e-9)
        assert abs(adiabatic_phi4(p, 0.7, -0.2, 1.3, 0.31)) < 1e-6

    def test_numeric_minimality(self, design_params):
        # phi4* minimizes the linearized coupler potential
        phi1, phi3, phi6, f = 0.4, -0.3, 0.8, 0.37
        star = adiabatic_phi4(design_params, phi1, phi3, phi6, f)
        lr = design_params.lr_nh * 1e-9
        lc = design_params.lc_nh * 1e-9
        ej_j = design_params.ej_ghz * 1e9 * const.h
        pref = (PHI0 / (2 * math.pi)) ** 2

        def potential(phi4):
            sin_term = math.sin(-phi1 - phi3 + 2 * math.pi * f)
            return (-design_params.alpha * ej_j * phi4 * sin_term
                    + pref * phi4**2 / (2 * lc)
                    + pref * (phi6 + phi4) ** 2 / (2 * lr))

        v0 = potential(star)
        for delta in (1e-4, -1e-4, 1e-3, -1e-3):
            assert v0 <= potential(star + delta)


@pytest.fixture(scope="module")
def small_table(design_params):
    trunc = TruncationSpec(4, 4, 4, 4)
    return spectrum_vs_flux(design_params, trunc, [0.49, 0.5], k=4)


class TestSpectrumTable:
    def test_levels_ascending_and_transitions_nonnegative(self, small_table):
        assert np.all(np.diff(small_table.levels_ghz, axis=1) >= 0)
        for arr in small_table.transitions_ghz.values():
            assert np.all(arr >= 0)

    def test_reports_csh_and_gap(self, small_table):
        assert small_table.meta["Csh_fF"] == pytest.approx(10.878)
        assert "qubit_gap_GHz" in small_table.meta

    def test_csv_roundtrip(self, small_table):
        text = small_table.to_csv()
        back = SpectrumTable.from_csv(text)
        assert np.array_equal(back.flux, small_table.flux)
        assert np.array_equal(back.levels_ghz, small_table.levels_ghz)
        for lab in small_table.transitions_ghz:
            assert np.array_equal(back.transitions_ghz[lab],
                                  small_table.transitions_ghz[lab])

    def test_json_roundtrip(self, small_table):
        back = SpectrumTable.from_json_dict(small_table.to_json_dict())
        assert np.array_equal(back.levels_ghz, small_table.levels_ghz)

    def test_deterministic_repeat(self, design_params):
        trunc = TruncationSpec(4, 4, 4, 4)
        t1 = spectrum_vs_flux(design_params, trunc, [0.5], k=4)
        t2 = spectrum_vs_flux(design_params, trunc, [0.5], k=4)
        assert np.array_equal(t1.levels_ghz, t2.levels_ghz)

    def test_offending_flux_point_named(self, design_params):
        with pytest.raises(ParameterError, match="1.7"):
            spectrum_vs_flux(design_params, TruncationSpec(4, 4, 4, 4),
                             [0.5, 1.7], k=4)

    def test_needs_four_levels(self, design_params):
        with pytest.raises(ParameterError):
            spectrum_vs_flux(design_params, TruncationSpec(4, 4, 4, 4),
                             [0.5], k=3)

    def test_empty_flux_list(self, design_params):
        with pytest.raises(ParameterError):
            spectrum_vs_flux(design_params, TruncationSpec(4, 4, 4, 4), [], k=4)
