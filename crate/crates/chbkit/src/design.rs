//! Component sizing and selection: buck converter L/C/duty, LC output
//! filter, per-cell DC voltages for both modulators, minimum level count
//! for a distortion target, PV string arithmetic, reactance-coupled power
//! transfer, and fleet sizing.

use std::f64::consts::TAU;

use crate::error::{require_positive, ChbError, Result};
use crate::harmonics::thd_analytic;

/// Buck converter sizing result. Ripple approximations assume continuous
/// conduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuckDesign {
    /// Source voltage, volts.
    pub v_s: f64,
    /// Output voltage, volts.
    pub v_o: f64,
    /// Switching frequency, hertz.
    pub f_s: f64,
    /// Duty cycle `v_o / v_s`.
    pub duty: f64,
    /// Allowed inductor current ripple, amps.
    pub ripple_i: f64,
    /// Allowed output voltage ripple, volts.
    pub ripple_v: f64,
    /// Inductance meeting the current-ripple target, henries.
    pub inductance: f64,
    /// Capacitance meeting the voltage-ripple target, farads.
    pub capacitance: f64,
}

impl BuckDesign {
    /// Inductance at the edge of continuous conduction for a resistive
    /// load, `(1 - D) * R / (2 * f_s)`. The sized inductor should sit
    /// above this.
    pub fn critical_inductance(&self, r_load: f64) -> Result<f64> {
        require_positive("r_load", r_load)?;
        Ok((1.0 - self.duty) * r_load / (2.0 * self.f_s))
    }
}

/// Size a buck converter from its ripple targets:
/// `D = v_o / v_s`, `L = D * v_s * (1 - D) / (f_s * ripple_i)`,
/// `C = ripple_i / (8 * f_s * ripple_v)`.
pub fn buck_design(
    v_s: f64,
    v_o: f64,
    f_s: f64,
    ripple_i: f64,
    ripple_v: f64,
) -> Result<BuckDesign> {
    require_positive("v_s", v_s)?;
    require_positive("v_o", v_o)?;
    require_positive("f_s", f_s)?;
    require_positive("ripple_i", ripple_i)?;
    require_positive("ripple_v", ripple_v)?;
    if v_o >= v_s {
        return Err(ChbError::BoostRequired { v_s, v_o });
    }
    let duty = v_o / v_s;
    Ok(BuckDesign {
        v_s,
        v_o,
        f_s,
        duty,
        ripple_i,
        ripple_v,
        inductance: duty * v_s * (1.0 - duty) / (f_s * ripple_i),
        capacitance: ripple_i / (8.0 * f_s * ripple_v),
    })
}

/// LC output filter: inductance, capacitance, and the resulting corner
/// frequency `1 / (2 pi sqrt(L C))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterDesign {
    pub inductance: f64,
    pub capacitance: f64,
    pub cutoff: f64,
}

impl FilterDesign {
    /// Describe an existing L/C pair.
    pub fn from_components(l_f: f64, c_f: f64) -> Result<Self> {
        Ok(FilterDesign {
            inductance: l_f,
            capacitance: c_f,
            cutoff: lc_cutoff(l_f, c_f)?,
        })
    }

    /// Pick the capacitor that puts the corner at `f_c` for a given
    /// inductor.
    pub fn for_cutoff(f_c: f64, l_f: f64) -> Result<Self> {
        Ok(FilterDesign {
            inductance: l_f,
            capacitance: lc_for_cutoff(f_c, l_f)?,
            cutoff: f_c,
        })
    }
}

/// Corner frequency of a series-L shunt-C low pass, hertz.
pub fn lc_cutoff(l_f: f64, c_f: f64) -> Result<f64> {
    require_positive("l_f", l_f)?;
    require_positive("c_f", c_f)?;
    Ok(1.0 / (TAU * (l_f * c_f).sqrt()))
}

/// Capacitance that places the corner at `f_c` given the inductance.
pub fn lc_for_cutoff(f_c: f64, l_f: f64) -> Result<f64> {
    require_positive("f_c", f_c)?;
    require_positive("l_f", l_f)?;
    Ok(1.0 / ((TAU * f_c).powi(2) * l_f))
}

/// Per-cell DC voltage for NLS from the line-line RMS target:
/// `v_ll_rms * sqrt(2/3) / n_cells` (peak line-neutral split across the
/// stack).
pub fn nls_cell_voltage(v_ll_rms: f64, n_cells: u32) -> Result<f64> {
    require_positive("v_ll_rms", v_ll_rms)?;
    if n_cells == 0 {
        return Err(ChbError::NonPositive {
            name: "n_cells",
            value: 0.0,
        });
    }
    Ok(v_ll_rms * (2.0f64 / 3.0).sqrt() / n_cells as f64)
}

/// Total and per-cell DC voltage for PSPWM:
/// `v_dc_total = sqrt(2/3) * v_ll_rms / m_a`, split evenly across cells.
pub fn pspwm_dc_voltages(v_ll_rms: f64, m_a: f64, n_cells: u32) -> Result<(f64, f64)> {
    require_positive("v_ll_rms", v_ll_rms)?;
    if !(m_a.is_finite() && m_a > 0.0 && m_a <= 1.0) {
        return Err(ChbError::ModulationOutOfRange { m_a });
    }
    if n_cells == 0 {
        return Err(ChbError::NonPositive {
            name: "n_cells",
            value: 0.0,
        });
    }
    let total = (2.0f64 / 3.0).sqrt() * v_ll_rms / m_a;
    Ok((total, total / n_cells as f64))
}

/// Smallest odd level count at or below `l_max` whose closed-form THD
/// falls below `thd_limit` (a fraction). The search is exhaustive over odd
/// L, so the result brackets the limit: `thd(L) < limit <= thd(L - 2)`.
pub fn min_levels_for_thd(thd_limit: f64, l_max: u32) -> Result<u32> {
    require_positive("thd_limit", thd_limit)?;
    if l_max < 3 {
        return Err(ChbError::TooFewLevels { levels: l_max });
    }
    if l_max % 2 == 0 {
        return Err(ChbError::EvenLevels { levels: l_max });
    }
    let mut levels = 3;
    while levels <= l_max {
        if thd_analytic(levels)?.thd < thd_limit {
            return Ok(levels);
        }
        levels += 2;
    }
    Err(ChbError::NotAchievable { thd_limit, l_max })
}

/// Terminal voltage and current of a PV array built from `n_series` panels
/// per string and `n_parallel` strings.
pub fn pv_array(
    panel_v: f64,
    panel_i: f64,
    n_series: u32,
    n_parallel: u32,
) -> Result<(f64, f64)> {
    require_positive("panel_v", panel_v)?;
    require_positive("panel_i", panel_i)?;
    if n_series == 0 || n_parallel == 0 {
        return Err(ChbError::NonPositive {
            name: "panel count",
            value: 0.0,
        });
    }
    Ok((n_series as f64 * panel_v, n_parallel as f64 * panel_i))
}

/// Per-phase power transferred between two sources across a line
/// reactance: `v1 * v2 * sin(delta) / x_line`.
///
/// A sanity-check instrument, not a load-flow solver: series resistance
/// and the shunt filter capacitance are neglected.
pub fn power_transfer(v1_rms: f64, v2_rms: f64, delta: f64, x_line: f64) -> Result<f64> {
    require_positive("x_line", x_line)?;
    Ok(v1_rms * v2_rms * delta.sin() / x_line)
}

/// Number of identical units needed to reach a power target,
/// `ceil(p_target / p_unit)`.
pub fn fleet_size(p_target: f64, p_unit: f64) -> Result<u64> {
    require_positive("p_target", p_target)?;
    require_positive("p_unit", p_unit)?;
    Ok((p_target / p_unit).ceil() as u64)
}

/// Top-level electrical requirements a plant design is sized against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    /// Line-line RMS voltage target, volts.
    pub v_ll_rms: f64,
    /// Fundamental frequency, hertz.
    pub f0: f64,
    /// Total real-power target, watts.
    pub p_target: f64,
    /// Distortion ceiling as a fraction.
    pub thd_limit: f64,
    /// Inverter-grid angle, radians.
    pub delta: f64,
    /// Grid coupling inductance, henries.
    pub l_line: f64,
}

impl SystemSpec {
    pub fn new(
        v_ll_rms: f64,
        f0: f64,
        p_target: f64,
        thd_limit: f64,
        delta: f64,
        l_line: f64,
    ) -> Result<Self> {
        require_positive("v_ll_rms", v_ll_rms)?;
        require_positive("f0", f0)?;
        require_positive("p_target", p_target)?;
        require_positive("thd_limit", thd_limit)?;
        require_positive("l_line", l_line)?;
        if delta.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(ChbError::NonPositive {
                name: "delta",
                value: delta,
            });
        }
        Ok(SystemSpec {
            v_ll_rms,
            f0,
            p_target,
            thd_limit,
            delta,
            l_line,
        })
    }

    /// Line reactance at the fundamental, `2 pi f0 L`.
    pub fn x_line(&self) -> f64 {
        TAU * self.f0 * self.l_line
    }

    /// Phase (line-neutral) RMS voltage, `v_ll_rms / sqrt(3)`.
    pub fn v_phase_rms(&self) -> f64 {
        self.v_ll_rms / 3.0f64.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buck_reference_design() {
        let b = buck_design(48.9, 30.15, 200e3, 6.0, 4.0).unwrap();
        assert!((b.duty - 0.6165).abs() < 1e-4);
        assert!((b.inductance - 9.633e-6).abs() < 0.01e-6);
        assert!((b.capacitance - 937e-9).abs() < 1e-9);
    }

    #[test]
    fn buck_half_voltage_duty() {
        let b = buck_design(10.0, 5.0, 100e3, 1.0, 0.1).unwrap();
        assert_eq!(b.duty, 0.5);
    }

    #[test]
    fn buck_pspwm_supply_duty() {
        let b = buck_design(120.6, 81.67, 200e3, 6.0, 4.0).unwrap();
        assert!((b.duty - 0.677).abs() < 1e-3);
    }

    #[test]
    fn buck_rejects_step_up() {
        assert_eq!(
            buck_design(30.0, 48.9, 200e3, 6.0, 4.0),
            Err(ChbError::BoostRequired {
                v_s: 30.0,
                v_o: 48.9
            })
        );
        assert!(buck_design(30.0, 30.0, 200e3, 6.0, 4.0).is_err());
    }

    #[test]
    fn buck_duty_round_trip() {
        let b = buck_design(48.9, 30.15, 200e3, 6.0, 4.0).unwrap();
        assert!((b.duty * b.v_s - b.v_o).abs() < 1e-12 * b.v_o);
    }

    #[test]
    fn buck_critical_inductance() {
        let b = buck_design(120.6, 81.67, 200e3, 6.0, 4.0).unwrap();
        let l_crit = b.critical_inductance(6.0).unwrap();
        assert!((l_crit - (1.0 - b.duty) * 6.0 / (2.0 * 200e3)).abs() < 1e-18);
        assert!(l_crit < 100e-6); // the sized inductor stays above critical
        assert!(b.critical_inductance(0.0).is_err());
    }

    #[test]
    fn cutoff_reference_filters() {
        assert!((lc_cutoff(1e-3, 50e-6).unwrap() - 711.8).abs() < 1.0);
        assert!((lc_cutoff(200e-6, 60e-6).unwrap() - 1452.9).abs() < 1.0);
    }

    #[test]
    fn capacitor_for_cutoff() {
        let c = lc_for_cutoff(1453.0, 200e-6).unwrap();
        assert!((c - 60e-6).abs() < 0.1e-6);
    }

    #[test]
    fn cutoff_round_trip() {
        for f in [10.0, 711.8, 1453.0, 1e6] {
            let c = lc_for_cutoff(f, 200e-6).unwrap();
            let back = lc_cutoff(200e-6, c).unwrap();
            assert!((back - f).abs() < 1e-9 * f);
        }
    }

    #[test]
    fn filter_design_invariant() {
        let f = FilterDesign::from_components(1e-3, 50e-6).unwrap();
        let implied = 1.0 / (TAU * (f.inductance * f.capacitance).sqrt());
        assert!((f.cutoff - implied).abs() < 1e-9 * implied);
        let g = FilterDesign::for_cutoff(1453.0, 200e-6).unwrap();
        assert!((lc_cutoff(g.inductance, g.capacitance).unwrap() - 1453.0).abs() < 1e-9 * 1453.0);
    }

    #[test]
    fn cell_voltage_thirteen_cells() {
        assert!((nls_cell_voltage(480.0, 13).unwrap() - 30.15).abs() < 5e-3);
    }

    #[test]
    fn cell_voltage_single_cell_is_peak_line_neutral() {
        assert!((nls_cell_voltage(480.0, 1).unwrap() - 391.9183588453085).abs() < 1e-9);
    }

    #[test]
    fn cell_voltage_scales_inversely() {
        let base = nls_cell_voltage(480.0, 1).unwrap();
        for n in 2..=20 {
            assert!(
                (nls_cell_voltage(480.0, n).unwrap() * n as f64 - base).abs() < 1e-9
            );
        }
    }

    #[test]
    fn pspwm_voltages_reference_point() {
        let (total, level) = pspwm_dc_voltages(480.0, 0.8, 6).unwrap();
        assert!((total - 489.9).abs() < 0.5);
        assert!((level - 81.65).abs() < 0.1);
    }

    #[test]
    fn pspwm_voltages_full_modulation() {
        let (total, level) = pspwm_dc_voltages(480.0, 1.0, 6).unwrap();
        assert!((total - 391.9183588453085).abs() < 1e-9);
        assert!((level - 65.31972647421809).abs() < 1e-9);
    }

    #[test]
    fn pspwm_total_is_level_times_cells() {
        let (total, level) = pspwm_dc_voltages(480.0, 0.8, 6).unwrap();
        assert!((level * 6.0 - total).abs() < 1e-12 * total);
    }

    #[test]
    fn pspwm_voltages_reject_bad_modulation() {
        assert!(matches!(
            pspwm_dc_voltages(480.0, 0.0, 6),
            Err(ChbError::ModulationOutOfRange { .. })
        ));
        assert!(matches!(
            pspwm_dc_voltages(480.0, 1.5, 6),
            Err(ChbError::ModulationOutOfRange { .. })
        ));
    }

    #[test]
    fn modulator_voltage_formulas_agree_at_unity() {
        // Both give the peak line-neutral voltage of the same system.
        for n in [1, 6, 13] {
            let nls_total = nls_cell_voltage(480.0, 13).unwrap() * 13.0;
            let (pspwm_total, _) = pspwm_dc_voltages(480.0, 1.0, n).unwrap();
            assert!((nls_total - pspwm_total).abs() < 1e-12 * pspwm_total);
        }
    }

    #[test]
    fn level_selection_five_percent() {
        assert_eq!(min_levels_for_thd(0.05, 201).unwrap(), 17);
    }

    #[test]
    fn level_selection_three_percent() {
        assert_eq!(min_levels_for_thd(0.03, 201).unwrap(), 29);
    }

    #[test]
    fn level_selection_first_row_boundary() {
        assert_eq!(min_levels_for_thd(0.31085, 201).unwrap(), 3);
    }

    #[test]
    fn level_selection_brackets_limit() {
        for permille in [35, 50, 80, 120, 200, 310] {
            let limit = permille as f64 / 1000.0;
            let levels = min_levels_for_thd(limit, 201).unwrap();
            assert!(thd_analytic(levels).unwrap().thd < limit);
            if levels > 3 {
                assert!(thd_analytic(levels - 2).unwrap().thd >= limit);
            }
        }
    }

    #[test]
    fn level_selection_not_achievable() {
        assert_eq!(
            min_levels_for_thd(0.01, 27),
            Err(ChbError::NotAchievable {
                thd_limit: 0.01,
                l_max: 27
            })
        );
    }

    #[test]
    fn pv_reference_array() {
        assert_eq!(pv_array(40.2, 9.71, 3, 2).unwrap(), (120.60000000000001, 19.42));
        let (v, i) = pv_array(40.2, 9.71, 3, 2).unwrap();
        assert!((v - 120.6).abs() < 1e-9 && (i - 19.42).abs() < 1e-9);
    }

    #[test]
    fn pv_identity_and_parallel_only() {
        assert_eq!(pv_array(48.9, 15.0, 1, 1).unwrap(), (48.9, 15.0));
        assert_eq!(pv_array(48.9, 15.0, 1, 2).unwrap(), (48.9, 30.0));
        assert!(pv_array(48.9, 15.0, 0, 2).is_err());
    }

    #[test]
    fn power_transfer_reference_point() {
        let p = power_transfer(277.1, 277.1, 2.5f64.to_radians(), 0.377).unwrap();
        assert!((p - 8884.06).abs() < 1.0);
    }

    #[test]
    fn power_transfer_zero_angle_and_sign() {
        assert_eq!(power_transfer(277.1, 277.1, 0.0, 0.377).unwrap(), 0.0);
        let fwd = power_transfer(277.1, 277.1, 0.1, 0.377).unwrap();
        let rev = power_transfer(277.1, 277.1, -0.1, 0.377).unwrap();
        assert_eq!(fwd, -rev);
        assert!(power_transfer(277.1, 277.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn fleet_reference_counts() {
        assert_eq!(fleet_size(125e3, 25e3).unwrap(), 5);
        assert_eq!(fleet_size(125e3, 20.3e3).unwrap(), 7);
        assert_eq!(fleet_size(100.0, 100.0).unwrap(), 1);
        assert!(fleet_size(0.0, 100.0).is_err());
    }

    #[test]
    fn system_spec_validation() {
        let s = SystemSpec::new(480.0, 60.0, 125e3, 0.05, -2.5f64.to_radians(), 1e-3).unwrap();
        assert!((s.x_line() - 0.3769911184307752).abs() < 1e-12);
        assert!((s.v_phase_rms() - 277.1281292110204).abs() < 1e-9);
        assert!(SystemSpec::new(480.0, 60.0, 125e3, 0.05, 1.6, 1e-3).is_err());
    }
}
