//! Analytic 2D near-fields of complex line currents.
//!
//! Infinite straight conductors along y, each carrying a complex current
//! amplitude whose phase encodes the drive phase lag (the stand-in for
//! induced eddy currents), produce a phasor field that satisfies the
//! near-field condition exactly. This makes wire sets both a desk-scale
//! replacement for a finite-element field solution and a brute-force
//! oracle for the extraction pipeline.

use crate::error::{Error, Result};
use crate::model::ComplexVec2;
use num_complex::Complex64;

/// μ₀/2π in μT·μm/A with distances in μm (μ₀ = 4π×10⁻⁷ T·m/A).
pub const MU0_OVER_2PI: f64 = 2.0e5;

/// Evaluation closer than this to a wire is refused.
pub const WIRE_EXCLUSION_UM: f64 = 1.0;

/// A line current along y at position (x, z), μm, with complex amplitude, A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCurrent {
    pub x: f64,
    pub z: f64,
    pub amplitude: Complex64,
}

/// A set of line currents driven at a common frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct WireSet {
    pub wires: Vec<LineCurrent>,
    /// Drive frequency, MHz.
    pub freq: f64,
}

impl WireSet {
    pub fn new(wires: Vec<LineCurrent>, freq: f64) -> Result<Self> {
        if wires.is_empty() {
            return Err(Error::InvalidArgument("wire set must be non-empty".into()));
        }
        for (i, a) in wires.iter().enumerate() {
            if !(a.x.is_finite() && a.z.is_finite() && a.amplitude.is_finite()) {
                return Err(Error::InvalidArgument(format!("wire {i} is not finite")));
            }
            if a.amplitude.norm() == 0.0 {
                return Err(Error::InvalidArgument(format!("wire {i} has zero amplitude")));
            }
            for b in &wires[..i] {
                if a.x == b.x && a.z == b.z {
                    return Err(Error::InvalidArgument(format!(
                        "coincident wires at ({}, {})",
                        a.x, a.z
                    )));
                }
            }
        }
        Ok(Self { wires, freq })
    }
}

/// Phasor field of a wire set at (x, z) μm, in μT.
///
/// Each wire contributes `(μ₀ I / 2π) · (−Δz, Δx) / (Δx² + Δz²)`; complex
/// amplitudes propagate linearly.
pub fn field_of_wires(w: &WireSet, x: f64, z: f64) -> Result<ComplexVec2> {
    let mut bx = Complex64::new(0.0, 0.0);
    let mut bz = Complex64::new(0.0, 0.0);
    for wire in &w.wires {
        let dx = x - wire.x;
        let dz = z - wire.z;
        let r2 = dx * dx + dz * dz;
        if r2 < WIRE_EXCLUSION_UM * WIRE_EXCLUSION_UM {
            return Err(Error::TooCloseToWire { x_um: x, z_um: z });
        }
        let s = wire.amplitude * (MU0_OVER_2PI / r2);
        bx += s * -dz;
        bz += s * dx;
    }
    Ok(ComplexVec2::new(bx, bz))
}

/// Analytic complex gradient of the wire field at (x, z): d(Bx,Bz)/d(x,z)
/// in μT/μm. Used as the closed-form oracle for extracted gradients.
pub fn gradient_of_wires(w: &WireSet, x: f64, z: f64) -> Result<nalgebra::Matrix2<Complex64>> {
    let mut g = nalgebra::Matrix2::<Complex64>::zeros();
    for wire in &w.wires {
        let dx = x - wire.x;
        let dz = z - wire.z;
        let r2 = dx * dx + dz * dz;
        if r2 < WIRE_EXCLUSION_UM * WIRE_EXCLUSION_UM {
            return Err(Error::TooCloseToWire { x_um: x, z_um: z });
        }
        let s = wire.amplitude * (MU0_OVER_2PI / (r2 * r2));
        // Bx = −K Δz / r², Bz = K Δx / r² with K = μ₀I/2π.
        g[(0, 0)] += s * (2.0 * dx * dz);
        g[(0, 1)] += s * (dz * dz - dx * dx);
        g[(1, 0)] += s * (dz * dz - dx * dx);
        g[(1, 1)] += s * (-2.0 * dx * dz);
    }
    Ok(g)
}

/// Maximum central-finite-difference divergence and curl of the phasor
/// field over a grid, μT/μm. The analytic field is exactly divergence- and
/// curl-free, so these echo the O(h²) discretization error.
pub fn nearfield_residuals(
    w: &WireSet,
    xs: &[f64],
    zs: &[f64],
    spacing: f64,
) -> Result<(f64, f64)> {
    let mut max_div = 0.0f64;
    let mut max_curl = 0.0f64;
    let h = spacing;
    for &z in zs {
        for &x in xs {
            let vxp = field_of_wires(w, x + h, z)?;
            let vxm = field_of_wires(w, x - h, z)?;
            let vzp = field_of_wires(w, x, z + h)?;
            let vzm = field_of_wires(w, x, z - h)?;
            let div = (vxp.x - vxm.x + vzp.z - vzm.z) / (2.0 * h);
            let curl = (vxp.z - vxm.z - (vzp.x - vzm.x)) / (2.0 * h);
            max_div = max_div.max(div.norm());
            max_curl = max_curl.max(curl.norm());
        }
    }
    Ok((max_div, max_curl))
}

/// Named wire geometries at the length scale of a surface-electrode trap
/// (ion height ≈ 45 μm). Exact currents are pinned constants so tests are
/// reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// One 1 A wire at the origin.
    Single,
    /// Equal co-directed 1 A currents at (±100, 0) μm; the field cancels
    /// exactly at the midpoint.
    ParallelPair,
    /// Three wires at z = 0, x ∈ {−50, 0, 50} μm with alternating-sign
    /// currents chosen to put a field zero exactly at (0, 45) μm.
    Meander,
    /// Meander plus two weak π/2-out-of-phase wires (0.05i A) emulating
    /// the offset field induced by eddy currents.
    MeanderEddy,
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Preset::Single),
            "parallel-pair" => Ok(Preset::ParallelPair),
            "meander" => Ok(Preset::Meander),
            "meander-eddy" => Ok(Preset::MeanderEddy),
            other => Err(Error::UnknownPreset(other.into())),
        }
    }
}

/// Center-wire current that nulls the meander field at (0, 45) μm:
/// I₀ = −2 I₁ h² / (d² + h²) with I₁ = 1 A, d = 50 μm, h = 45 μm.
pub const MEANDER_CENTER_CURRENT: f64 = -2.0 * 45.0 * 45.0 / (50.0 * 50.0 + 45.0 * 45.0);

/// Build a preset scenario at 1092.55 MHz drive.
pub fn preset_scenario(name: Preset) -> WireSet {
    let freq = 1092.55;
    let re = |x: f64, z: f64, i: f64| LineCurrent {
        x,
        z,
        amplitude: Complex64::new(i, 0.0),
    };
    let im = |x: f64, z: f64, i: f64| LineCurrent {
        x,
        z,
        amplitude: Complex64::new(0.0, i),
    };
    let wires = match name {
        Preset::Single => vec![re(0.0, 0.0, 1.0)],
        Preset::ParallelPair => vec![re(-100.0, 0.0, 1.0), re(100.0, 0.0, 1.0)],
        Preset::Meander => vec![
            re(-50.0, 0.0, 1.0),
            re(0.0, 0.0, MEANDER_CENTER_CURRENT),
            re(50.0, 0.0, 1.0),
        ],
        Preset::MeanderEddy => {
            let mut wires = preset_scenario(Preset::Meander).wires;
            wires.push(im(-70.0, -25.0, 0.05));
            wires.push(im(130.0, -35.0, 0.05));
            wires
        }
    };
    WireSet::new(wires, freq).expect("presets are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn single_wire_magnitude_and_direction() {
        let w = WireSet::new(
            vec![LineCurrent {
                x: 0.0,
                z: 0.0,
                amplitude: Complex64::new(1.0, 0.0),
            }],
            1000.0,
        )
        .unwrap();
        let v = field_of_wires(&w, 45.0, 0.0).unwrap();
        // μ₀·1A/(2π·45 μm) ≈ 4444 μT, along +z, purely real.
        assert_relative_eq!(v.z.re, MU0_OVER_2PI / 45.0, epsilon = 1e-12);
        assert_relative_eq!(v.norm(), 4444.444, epsilon = 1e-3);
        assert_abs_diff_eq!(v.x.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.z.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parallel_pair_cancels_at_midpoint() {
        let w = preset_scenario(Preset::ParallelPair);
        let v = field_of_wires(&w, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parallel_pair_gradient_matches_closed_form() {
        // B' = μ₀ I / (π d²) = 40 μT/μm for I = 1 A, d = 100 μm.
        let w = preset_scenario(Preset::ParallelPair);
        let g = gradient_of_wires(&w, 0.0, 0.0).unwrap();
        assert_relative_eq!(g[(1, 0)].re, -40.0, epsilon = 1e-12);
        assert_relative_eq!(g[(0, 1)].re, -40.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[(0, 0)].norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[(1, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let w = preset_scenario(Preset::MeanderEddy);
        let (x, z) = (3.0, 47.0);
        let g = gradient_of_wires(&w, x, z).unwrap();
        let h = 1e-4;
        let fxp = field_of_wires(&w, x + h, z).unwrap();
        let fxm = field_of_wires(&w, x - h, z).unwrap();
        let fzp = field_of_wires(&w, x, z + h).unwrap();
        let fzm = field_of_wires(&w, x, z - h).unwrap();
        assert_relative_eq!(g[(0, 0)].re, ((fxp.x - fxm.x) / (2.0 * h)).re, epsilon = 1e-6);
        assert_relative_eq!(g[(0, 1)].re, ((fzp.x - fzm.x) / (2.0 * h)).re, epsilon = 1e-6);
        assert_relative_eq!(g[(1, 0)].im, ((fxp.z - fxm.z) / (2.0 * h)).im, epsilon = 1e-6);
        assert_relative_eq!(g[(1, 1)].im, ((fzp.z - fzm.z) / (2.0 * h)).im, epsilon = 1e-6);
    }

    #[test]
    fn meander_field_vanishes_at_design_height() {
        let w = preset_scenario(Preset::Meander);
        let v = field_of_wires(&w, 0.0, 45.0).unwrap();
        assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn too_close_to_wire_rejected() {
        let w = preset_scenario(Preset::Single);
        assert!(matches!(
            field_of_wires(&w, 0.5, 0.5),
            Err(Error::TooCloseToWire { .. })
        ));
    }

    #[test]
    fn residual_convergence_is_second_order() {
        let w = preset_scenario(Preset::Single);
        let xs: Vec<f64> = (0..5).map(|k| 140.0 + k as f64).collect();
        let zs: Vec<f64> = (0..5).map(|k| 60.0 + k as f64).collect();
        let (d1, c1) = nearfield_residuals(&w, &xs, &zs, 0.2).unwrap();
        let (d2, c2) = nearfield_residuals(&w, &xs, &zs, 0.1).unwrap();
        // Halving the spacing cuts the O(h²) residual by about 4.
        assert!(d1 / d2 > 3.0 && d1 / d2 < 5.0, "div ratio {}", d1 / d2);
        assert!(c1 / c2 > 3.0 && c1 / c2 < 5.0, "curl ratio {}", c1 / c2);
    }

    #[test]
    fn residual_small_relative_to_gradient_far_from_wires() {
        let w = preset_scenario(Preset::Single);
        let xs: Vec<f64> = (0..7).map(|k| 130.0 + 0.5 * k as f64).collect();
        let zs: Vec<f64> = (0..7).map(|k| 75.0 + 0.5 * k as f64).collect();
        let (d, c) = nearfield_residuals(&w, &xs, &zs, 0.1).unwrap();
        let g = gradient_of_wires(&w, 132.0, 77.0).unwrap();
        let gscale = g.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        assert!(d < 1e-6 * gscale, "div {} vs gradient {}", d, gscale);
        assert!(c < 1e-6 * gscale, "curl {} vs gradient {}", c, gscale);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Field of a wire set is the sum of per-wire fields.
        #[test]
        fn prop_linearity(
            x in -40.0f64..40.0,
            z in 30.0f64..90.0,
            i1 in 0.2f64..3.0,
            i2 in 0.2f64..3.0,
            ph in 0.0f64..std::f64::consts::TAU,
        ) {
            let w1 = LineCurrent { x: -20.0, z: 0.0, amplitude: Complex64::new(i1, 0.0) };
            let w2 = LineCurrent { x: 25.0, z: -5.0, amplitude: Complex64::from_polar(i2, ph) };
            let both = WireSet::new(vec![w1, w2], 1000.0).unwrap();
            let only1 = WireSet::new(vec![w1], 1000.0).unwrap();
            let only2 = WireSet::new(vec![w2], 1000.0).unwrap();
            let v = field_of_wires(&both, x, z).unwrap();
            let v1 = field_of_wires(&only1, x, z).unwrap();
            let v2 = field_of_wires(&only2, x, z).unwrap();
            let sum = v1.add(&v2);
            prop_assert!((v.x - sum.x).norm() <= 1e-12 * v.norm().max(1e-30));
            prop_assert!((v.z - sum.z).norm() <= 1e-12 * v.norm().max(1e-30));
        }

        /// A global phase on all amplitudes multiplies the field by that
        /// phase (and so leaves canonicalized parameters unchanged).
        #[test]
        fn prop_global_phase(
            x in -40.0f64..40.0,
            z in 30.0f64..90.0,
            chi in 0.0f64..std::f64::consts::TAU,
        ) {
            let base = preset_scenario(Preset::MeanderEddy);
            let phase = Complex64::from_polar(1.0, chi);
            let rotated = WireSet::new(
                base.wires.iter().map(|w| LineCurrent { amplitude: w.amplitude * phase, ..*w }).collect(),
                base.freq,
            ).unwrap();
            let v = field_of_wires(&base, x, z).unwrap();
            let vr = field_of_wires(&rotated, x, z).unwrap();
            prop_assert!((vr.x - v.x * phase).norm() < 1e-9 * v.norm().max(1e-30));
            prop_assert!((vr.z - v.z * phase).norm() < 1e-9 * v.norm().max(1e-30));
        }
    }
}
