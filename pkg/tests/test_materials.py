import math

import numpy as np
import pytest
from scipy import constants as const

from fluxspec.errors import (
    AmbiguousTransitionError,
    CalibrationRangeError,
    NoTransitionError,
    ParameterError,
)
from fluxspec.materials import (
    RTCurve,
    WireGeometry,
    gral_calibration,
    kinetic_inductance,
    resistivity,
    sheet_inductance,
    tc_from_rt_curve,
)

COUPLER = WireGeometry(length_um=30.0, width_um=0.487, thickness_nm=50.0)


class TestKineticInductance:
    def test_paper_value(self):
        assert kinetic_inductance(860.0, 1.60) == pytest.approx(0.739, abs=0.002)

    def test_hand_arithmetic(self):
        oracle = 0.18 * const.hbar * 1000.0 / (const.k * 1.0) * 1e9
        got = kinetic_inductance(1000.0, 1.0)
        assert got == pytest.approx(oracle, rel=1e-12)
        assert got == pytest.approx(1.375, abs=1e-3)

    def test_linear_in_resistance(self):
        assert kinetic_inductance(1720.0, 1.60) == pytest.approx(
            2 * kinetic_inductance(860.0, 1.60), rel=1e-12)

    def test_inverse_in_tc(self):
        assert kinetic_inductance(860.0, 3.20) == pytest.approx(
            0.5 * kinetic_inductance(860.0, 1.60), rel=1e-12)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            kinetic_inductance(-1.0, 1.0)


class TestResistivity:
    def test_paper_value(self):
        rho = resistivity(960.0, COUPLER)
        assert rho == pytest.approx(78.3, rel=0.01)

    def test_unit_square(self):
        # l = w: rho reduces to R * thickness
        geom = WireGeometry(5.0, 5.0, 50.0)
        oracle = 100.0 * 50e-9 * 1e8   # ohm*m -> micro-ohm*cm
        assert resistivity(100.0, geom) == pytest.approx(oracle, rel=1e-12)

    def test_length_scaling(self):
        g1 = WireGeometry(30.0, 0.5, 50.0)
        g2 = WireGeometry(60.0, 0.5, 50.0)
        assert resistivity(960.0, g2) == pytest.approx(
            0.5 * resistivity(960.0, g1), rel=1e-12)


class TestSheetInductance:
    def test_coupler_value(self):
        lk = kinetic_inductance(860.0, 1.60)
        lsq = sheet_inductance(lk, COUPLER)
        assert lsq == pytest.approx(lk * 0.487 / 30.0 * 1e3, rel=1e-12)
        assert lsq == pytest.approx(12.0, abs=0.05)

    def test_square_film(self):
        geom = WireGeometry(7.0, 7.0, 50.0)
        assert sheet_inductance(0.739, geom) == pytest.approx(739.0, rel=1e-12)

    def test_table_route(self):
        # per-square kinetic inductance from the baked 0.6 sccm sheet
        # resistance at the measured Tc
        lk_sq = kinetic_inductance(14.57, 1.60) * 1e3
        assert lk_sq == pytest.approx(12.5, abs=0.05)


def tanh_curve(center=1.6, width=0.1, amplitude=50.0, spacing=0.005,
               t_lo=1.0, t_hi=2.2):
    t = np.arange(t_lo, t_hi + spacing / 2, spacing)
    r = amplitude * (1 + np.tanh((t - center) / width))
    return RTCurve.from_samples(t, r)


class TestTcExtraction:
    def test_tanh_against_analytic_inverse(self):
        spacing = 0.005
        curve = tanh_curve(spacing=spacing)
        res = tc_from_rt_curve(curve)

        def analytic(level):
            return 1.6 + 0.1 * math.atanh(level / 50.0 - 1.0)

        onset = res.onset_resistance_ohm
        assert abs(res.tc_k - analytic(0.5 * onset)) <= spacing
        assert abs(res.t10_k - analytic(0.9 * onset)) <= spacing
        assert abs(res.t90_k - analytic(0.1 * onset)) <= spacing
        assert res.tc_k == pytest.approx(1.600, abs=spacing)
        assert res.t10_k == pytest.approx(1.710, abs=spacing)
        assert res.t90_k == pytest.approx(1.490, abs=spacing)
        assert res.delta_tc_k == pytest.approx(res.t10_k - res.t90_k, rel=1e-12)
        assert res.uncertainty_k == pytest.approx(res.delta_tc_k / 2, rel=1e-12)
        assert res.t90_k <= res.tc_k <= res.t10_k

    def test_step_function(self):
        # samples straddling the step symmetrically: interpolation lands on
        # the step temperature; widths collapse to within one spacing
        spacing = 0.005
        below = np.linspace(0.9975, 1.4975, 101)
        above = np.linspace(1.5025, 2.0025, 101)
        t = np.concatenate([below, above])
        r = np.where(t < 1.5, 0.0, 100.0)
        res = tc_from_rt_curve(RTCurve.from_samples(t, r))
        assert res.tc_k == pytest.approx(1.5, abs=1e-12)
        assert res.delta_tc_k <= spacing

    def test_rescaling_invariance(self):
        curve = tanh_curve()
        res1 = tc_from_rt_curve(curve)
        res7 = tc_from_rt_curve(RTCurve.from_samples(
            curve.temperature_k, 7.0 * curve.resistance_ohm))
        assert res7.tc_k == res1.tc_k
        assert res7.t10_k == res1.t10_k
        assert res7.t90_k == res1.t90_k

    def test_order_reversal_invariance(self):
        curve = tanh_curve()
        rev = RTCurve.from_samples(curve.temperature_k[::-1],
                                   curve.resistance_ohm[::-1])
        assert tc_from_rt_curve(rev).tc_k == tc_from_rt_curve(curve).tc_k

    def test_non_spanning_curve(self):
        t = np.linspace(2.0, 2.5, 20)
        r = 100.0 + np.linspace(0, 10, 20)
        with pytest.raises(NoTransitionError):
            tc_from_rt_curve(RTCurve.from_samples(t, r))

    def test_reentrant_curve_surfaces_crossings(self):
        t = np.linspace(1.0, 2.0, 51)
        r = 50.0 * (1 + np.tanh((t - 1.5) / 0.05))
        r[30] = 10.0   # re-entrant dip after the transition
        with pytest.raises(AmbiguousTransitionError) as exc:
            tc_from_rt_curve(RTCurve.from_samples(t, r))
        assert len(exc.value.crossings) > 1

    def test_duplicate_temperatures_rejected(self):
        with pytest.raises(ParameterError):
            RTCurve.from_samples([1.0, 1.0, 1.2, 1.3], [0.0, 1.0, 2.0, 3.0])

    def test_csv_ingestion(self):
        text = ("# test structure\n"
                "temperature_K,resistance_ohm\n"
                "1.0,0.0\n1.2,1.0\n1.5,50.0\n1.8,99.0\n2.0,100.0\n")
        curve = RTCurve.from_csv(text)
        assert curve.temperature_k.size == 5
        back = RTCurve.from_csv(curve.to_csv())
        assert np.array_equal(back.resistance_ohm, curve.resistance_ohm)


class TestCalibrationTable:
    TABLE = {
        (0.0, False): (0.89, 0.06), (0.0, True): (0.89, 0.05),
        (0.2, False): (2.96, 0.20), (0.2, True): (2.75, 0.19),
        (0.4, False): (7.56, 2.97), (0.4, True): (5.01, 0.77),
        (0.6, False): (17.31, 2.48), (0.6, True): (14.57, 1.49),
        (0.8, False): (43.49, 25.09), (0.8, True): (35.14, 19.96),
    }

    @pytest.mark.parametrize("flow,baked", sorted(TABLE))
    def test_exact_cells(self, flow, baked):
        rs, unc = self.TABLE[(flow, baked)]
        out = gral_calibration(flow, baked=baked)
        assert out["rs_ohm_sq"] == rs
        assert out["uncertainty_ohm_sq"] == unc
        assert out["interpolated"] is False

    def test_interpolation_flagged(self):
        out = gral_calibration(0.5, baked=True, interpolate=True)
        assert out["interpolated"] is True
        assert out["rs_ohm_sq"] == pytest.approx((5.01 + 14.57) / 2, rel=1e-12)

    def test_offgrid_without_interpolate(self):
        with pytest.raises(ParameterError):
            gral_calibration(0.5)

    def test_extrapolation_rejected(self):
        with pytest.raises(CalibrationRangeError):
            gral_calibration(0.9, interpolate=True)
        with pytest.raises(CalibrationRangeError):
            gral_calibration(-0.1)
