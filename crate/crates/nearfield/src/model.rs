//! First-order representations of a 2D near-field phasor and the
//! canonicalization that reduces them to five parameters.
//!
//! In the near-field regime (dimensions ≪ wavelength) the oscillating
//! magnetic field phasor satisfies div B = 0 and curl B = 0 pointwise, so a
//! first-order 2D expansion around a point takes the form
//!
//! ```text
//! v(r) = (B_r e_{α_r} + i B_i e_{α_i}) + (B'_r Q_{β_r} + i B'_i Q_{β_i}) r
//! ```
//!
//! with `e_α = (cos α, sin α)` and `Q_β` the traceless symmetric quadrupole
//! matrix — eight real parameters ([`RawExpansion`]). Multiplying by the
//! global drive phase that maximizes the norm of the real gradient part, and
//! requiring `|v|` to be minimal at the origin, collapses this to the
//! five-parameter form ([`QuadrupoleParams`]):
//!
//! ```text
//! v(r) = B (e_α sin ψ − i e_{α−π/2} cos ψ)
//!      + B' (Q_β cos ψ + i Q_{β−π/2} sin ψ) r
//! ```
//!
//! The physical field is `Re{v e^{iωt}}`. Fields are μT, gradients μT/μm,
//! positions μm, angles rad.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Complex in-plane field phasor, μT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec2 {
    pub x: Complex64,
    pub z: Complex64,
}

impl ComplexVec2 {
    pub const ZERO: ComplexVec2 = ComplexVec2 {
        x: Complex64::new(0.0, 0.0),
        z: Complex64::new(0.0, 0.0),
    };

    pub fn new(x: Complex64, z: Complex64) -> Self {
        Self { x, z }
    }

    /// |v_x|² + |v_z|²; twice the time-averaged |B(t)|².
    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            x: self.x * c,
            z: self.z * c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            x: self.x + other.x,
            z: self.z + other.z,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.re.is_finite() && self.x.im.is_finite() && self.z.re.is_finite() && self.z.im.is_finite()
    }
}

/// Raw eight-parameter first-order expansion: real/imaginary offset
/// magnitudes and orientations, real/imaginary gradient magnitudes and
/// orientations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawExpansion {
    /// Real offset magnitude, μT.
    pub b_r: f64,
    /// Imaginary offset magnitude, μT.
    pub b_i: f64,
    /// Real offset orientation, rad.
    pub alpha_r: f64,
    /// Imaginary offset orientation, rad.
    pub alpha_i: f64,
    /// Real gradient magnitude, μT/μm.
    pub bp_r: f64,
    /// Imaginary gradient magnitude, μT/μm.
    pub bp_i: f64,
    /// Real gradient orientation, rad.
    pub beta_r: f64,
    /// Imaginary gradient orientation, rad.
    pub beta_i: f64,
}

/// The five-parameter quadrupole description plus minimum position and
/// drive frequency. The central exchange currency of the crate.
///
/// Sign conventions: `b` and `bp` are real-valued with sign allowed under
/// the identifications `(B, α) ≅ (−B, α+π)` and `(B', β) ≅ (−B', β+π)`;
/// serialization folds `alpha`, `beta` into `[0, π)`. The canonical
/// polarization angle produced by [`canonicalize`] always lies in
/// `[−π/4, π/4]` because the global phase maximizes the real gradient part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupoleParams {
    /// Offset field strength, μT.
    pub b: f64,
    /// Gradient strength, μT/μm.
    pub bp: f64,
    /// Offset orientation, rad, domain [0, π).
    pub alpha: f64,
    /// Gradient orientation, rad, domain [0, π).
    pub beta: f64,
    /// Polarization angle, rad, domain [−π/2, π/2).
    pub psi: f64,
    /// Minimum position, μm.
    pub x0: f64,
    /// Minimum position, μm.
    pub z0: f64,
    /// Drive frequency, MHz.
    pub freq: f64,
}

/// First-order affine form of a phasor field: `v(r) = offset + grad · r`.
#[derive(Debug, Clone, Copy)]
pub struct FirstOrder {
    pub offset: ComplexVec2,
    /// Complex 2×2 gradient, μT/μm, rows (x, z).
    pub grad: Matrix2<Complex64>,
}

/// Parts of a complex gradient matrix that a near-field cannot have.
///
/// A divergence- and curl-free first-order field has a traceless symmetric
/// gradient; anything else shows up here when decomposing fitted data.
#[derive(Debug, Clone, Copy)]
pub struct QuadrupoleDefect {
    /// (G₀₀ + G₁₁)/2 — divergence part, μT/μm.
    pub trace: Complex64,
    /// (G₀₁ − G₁₀)/2 — curl part, μT/μm.
    pub antisym: Complex64,
}

impl QuadrupoleDefect {
    /// Defect magnitude relative to the quadrupole part (or absolute when
    /// the quadrupole part vanishes).
    pub fn relative_to(&self, quadrupole_norm: f64) -> f64 {
        let d = (self.trace.norm_sqr() + self.antisym.norm_sqr()).sqrt();
        if quadrupole_norm > 0.0 {
            d / quadrupole_norm
        } else {
            d
        }
    }
}

/// Diagnostics reported by [`canonicalize`]. Residuals measure how far the
/// input is from an expansion with a `|B|` minimum at the origin; they are
/// reported, never silently dropped.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalDiagnostics {
    /// Global phase χ applied to the expansion, rad.
    pub phase_applied: f64,
    /// Deviation from α_i = α_r − π/2, rad (mod π).
    pub residual_alpha_orthogonality: f64,
    /// Deviation from β_i = β_r − π/2, rad (mod π).
    pub residual_beta_orthogonality: f64,
    /// Deviation from φ = ψ − π/2, rad (mod π).
    pub residual_phi_psi: f64,
    /// Offset below tolerance; B set to 0, α conventional.
    pub degenerate_offset: bool,
    /// Gradient below tolerance; B', β, ψ conventional and meaningless.
    pub degenerate_gradient: bool,
    /// The real-part maximization had a degenerate maximum (circular
    /// gradient polarization, ψ = ±π/4); χ = 0 was chosen.
    pub ambiguous_phase: bool,
}

impl CanonicalDiagnostics {
    /// True when every angle residual is within `tol` (mod π).
    pub fn within(&self, tol: f64) -> bool {
        self.residual_alpha_orthogonality.abs() <= tol
            && self.residual_beta_orthogonality.abs() <= tol
            && self.residual_phi_psi.abs() <= tol
    }
}

/// Tolerances for [`canonicalize`]. Defaults suit synthetic inputs; fitted
/// expansions violate the minimum condition slightly and may need looser
/// degeneracy thresholds.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalizeOptions {
    /// Absolute offset degeneracy floor, μT.
    pub offset_abs_tol: f64,
    /// Offset degeneracy threshold relative to |B'| · 1 μm.
    pub offset_rel_tol: f64,
    /// Absolute gradient degeneracy floor, μT/μm.
    pub gradient_abs_tol: f64,
    /// Phase-ambiguity threshold: |c₁²+c₂²| below this fraction of ‖c‖².
    pub phase_tie_tol: f64,
}

impl Default for CanonicalizeOptions {
    fn default() -> Self {
        Self {
            offset_abs_tol: 1e-12,
            offset_rel_tol: 1e-9,
            gradient_abs_tol: 1e-12,
            phase_tie_tol: 1e-9,
        }
    }
}

/// Unit vector `e_α = (cos α, sin α)`.
pub fn unit_vec(alpha: f64) -> Vector2<f64> {
    Vector2::new(alpha.cos(), alpha.sin())
}

/// Traceless symmetric quadrupole matrix
/// `Q_β = [[cos β, sin β], [sin β, −cos β]]`.
pub fn quadrupole_matrix(beta: f64) -> Matrix2<f64> {
    let (s, c) = beta.sin_cos();
    Matrix2::new(c, s, s, -c)
}

/// Fold an (orientation, magnitude) pair so the orientation lies in
/// `[0, π)`, absorbing π-shifts into the magnitude sign.
pub(crate) fn fold_orientation(angle: f64, magnitude: f64) -> (f64, f64) {
    let mut a = angle.rem_euclid(TAU);
    if a >= TAU {
        a -= TAU;
    }
    if a >= PI {
        (a - PI, -magnitude)
    } else {
        (a, magnitude)
    }
}

/// Wrap an angle difference into (−π/2, π/2] (angles identified mod π).
pub(crate) fn wrap_mod_pi(delta: f64) -> f64 {
    let mut d = delta.rem_euclid(PI);
    if d > FRAC_PI_2 {
        d -= PI;
    }
    d
}

impl RawExpansion {
    /// Decompose an affine first-order field into the raw eight-parameter
    /// form, splitting off the non-near-field gradient defect.
    pub fn from_affine(fo: &FirstOrder) -> (RawExpansion, QuadrupoleDefect) {
        let g = &fo.grad;
        // Quadrupole coordinates: G = c1·Q_0 + c2·Q_{π/2} + defect.
        let c1 = (g[(0, 0)] - g[(1, 1)]) * 0.5;
        let c2 = (g[(0, 1)] + g[(1, 0)]) * 0.5;
        let defect = QuadrupoleDefect {
            trace: (g[(0, 0)] + g[(1, 1)]) * 0.5,
            antisym: (g[(0, 1)] - g[(1, 0)]) * 0.5,
        };
        let re_c = Vector2::new(c1.re, c2.re);
        let im_c = Vector2::new(c1.im, c2.im);
        let re_o = Vector2::new(fo.offset.x.re, fo.offset.z.re);
        let im_o = Vector2::new(fo.offset.x.im, fo.offset.z.im);
        let raw = RawExpansion {
            b_r: re_o.norm(),
            b_i: im_o.norm(),
            alpha_r: re_o.y.atan2(re_o.x),
            alpha_i: im_o.y.atan2(im_o.x),
            bp_r: re_c.norm(),
            bp_i: im_c.norm(),
            beta_r: re_c.y.atan2(re_c.x),
            beta_i: im_c.y.atan2(im_c.x),
        };
        (raw, defect)
    }

    /// Affine form of the raw expansion.
    pub fn to_affine(&self) -> FirstOrder {
        let i = Complex64::i();
        let off_re = unit_vec(self.alpha_r) * self.b_r;
        let off_im = unit_vec(self.alpha_i) * self.b_i;
        let offset = ComplexVec2::new(
            Complex64::new(off_re.x, 0.0) + i * off_im.x,
            Complex64::new(off_re.y, 0.0) + i * off_im.y,
        );
        let g_re = quadrupole_matrix(self.beta_r) * self.bp_r;
        let g_im = quadrupole_matrix(self.beta_i) * self.bp_i;
        let grad = g_re.map(|v| Complex64::new(v, 0.0)) + g_im.map(|v| i * v);
        FirstOrder { offset, grad }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.b_r,
            self.b_i,
            self.alpha_r,
            self.alpha_i,
            self.bp_r,
            self.bp_i,
            self.beta_r,
            self.beta_i,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

impl QuadrupoleParams {
    /// Parameters with only the five field quantities set; position and
    /// frequency left at zero (filled in by the grid extraction pipeline).
    pub fn bare(b: f64, bp: f64, alpha: f64, beta: f64, psi: f64) -> Self {
        Self {
            b,
            bp,
            alpha,
            beta,
            psi,
            x0: 0.0,
            z0: 0.0,
            freq: 0.0,
        }
    }

    /// Affine first-order form of the field around the minimum:
    /// offset and gradient of `v(r)`, with `r` relative to `(x0, z0)`.
    pub fn first_order(&self) -> FirstOrder {
        let i = Complex64::i();
        let (s_psi, c_psi) = self.psi.sin_cos();
        let e_a = unit_vec(self.alpha) * (self.b * s_psi);
        let e_ap = unit_vec(self.alpha - FRAC_PI_2) * (self.b * c_psi);
        let offset = ComplexVec2::new(
            Complex64::new(e_a.x, 0.0) - i * e_ap.x,
            Complex64::new(e_a.y, 0.0) - i * e_ap.y,
        );
        let q_re = quadrupole_matrix(self.beta) * (self.bp * c_psi);
        let q_im = quadrupole_matrix(self.beta - FRAC_PI_2) * (self.bp * s_psi);
        let grad = q_re.map(|v| Complex64::new(v, 0.0)) + q_im.map(|v| i * v);
        FirstOrder { offset, grad }
    }

    /// Fold `alpha`, `beta` into `[0, π)` and `psi` into `[−π/2, π/2)`
    /// using the sign identifications; the physical field is unchanged.
    pub fn into_canonical_domains(mut self) -> Self {
        // ψ + π ≅ ψ with both B and B' negated.
        let mut psi = self.psi.rem_euclid(TAU);
        if psi >= TAU {
            psi -= TAU;
        }
        if psi >= PI {
            psi -= PI;
            self.b = -self.b;
            self.bp = -self.bp;
        }
        if psi >= FRAC_PI_2 {
            psi -= PI;
            self.b = -self.b;
            self.bp = -self.bp;
        }
        self.psi = psi;
        let (alpha, b) = fold_orientation(self.alpha, self.b);
        let (beta, bp) = fold_orientation(self.beta, self.bp);
        self.alpha = alpha;
        self.b = b;
        self.beta = beta;
        self.bp = bp;
        self
    }

    /// Same physical field with the pattern rotated by `theta` about the
    /// minimum: α → α+θ, β → β+2θ (both folded with sign absorption),
    /// B, B', ψ unchanged, and the minimum position rotated.
    pub fn rotate_frame(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let (alpha, b) = fold_orientation(self.alpha + theta, self.b);
        let (beta, bp) = fold_orientation(self.beta + 2.0 * theta, self.bp);
        Self {
            b,
            bp,
            alpha,
            beta,
            psi: self.psi,
            x0: c * self.x0 - s * self.z0,
            z0: s * self.x0 + c * self.z0,
            freq: self.freq,
        }
    }
}

/// Evaluate the five-parameter phasor at position `(dx, dz)` μm relative to
/// the minimum. The model is first order; validity away from the minimum is
/// the caller's concern.
pub fn synthesize_phasor(p: &QuadrupoleParams, dx: f64, dz: f64) -> ComplexVec2 {
    let fo = p.first_order();
    let r = Vector2::new(Complex64::new(dx, 0.0), Complex64::new(dz, 0.0));
    let gr = fo.grad * r;
    ComplexVec2::new(fo.offset.x + gr.x, fo.offset.z + gr.y)
}

/// Phasor at absolute coordinates `(x, z)` μm.
pub fn phasor_at(p: &QuadrupoleParams, x: f64, z: f64) -> ComplexVec2 {
    synthesize_phasor(p, x - p.x0, z - p.z0)
}

/// Reduce a raw expansion to the five-parameter form.
///
/// The construction follows the derivation between the eight- and
/// five-parameter forms: (a) the gradient is written as a complex 2-vector
/// `c = (c₁, c₂)` in the `(Q_0, Q_{π/2})` basis; (b) the global phase
/// `χ = −½·arg(c₁² + c₂²)` maximizes the norm of its real part; (c) B', β
/// come from the real part and the imaginary part is checked to be
/// orthogonal (β_i = β_r − π/2); (d) the same phase is applied to the
/// offset and B, α, φ extracted; (e) deviations from α_i = α_r − π/2 and
/// φ = ψ − π/2 are recorded as diagnostics; (f) results are folded into
/// the canonical angle domains.
///
/// Degenerate inputs do not abort: a vanishing gradient or offset and a
/// circular-polarization phase tie are reported through the diagnostics
/// flags, with conventional values (0) for the undetermined parameters.
pub fn canonicalize(
    raw: &RawExpansion,
    opts: &CanonicalizeOptions,
) -> (QuadrupoleParams, CanonicalDiagnostics) {
    let i = Complex64::i();
    // Gradient in quadrupole coordinates.
    let c1 = Complex64::new(raw.bp_r * raw.beta_r.cos(), raw.bp_i * raw.beta_i.cos());
    let c2 = Complex64::new(raw.bp_r * raw.beta_r.sin(), raw.bp_i * raw.beta_i.sin());
    let grad_norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
    // Raw complex offset.
    let o_x = Complex64::new(raw.b_r * raw.alpha_r.cos(), raw.b_i * raw.alpha_i.cos());
    let o_z = Complex64::new(raw.b_r * raw.alpha_r.sin(), raw.b_i * raw.alpha_i.sin());

    let mut diag = CanonicalDiagnostics {
        phase_applied: 0.0,
        residual_alpha_orthogonality: 0.0,
        residual_beta_orthogonality: 0.0,
        residual_phi_psi: 0.0,
        degenerate_offset: false,
        degenerate_gradient: false,
        ambiguous_phase: false,
    };

    let degenerate_gradient = grad_norm < opts.gradient_abs_tol;
    let (chi, bp, beta, psi) = if degenerate_gradient {
        diag.degenerate_gradient = true;
        // No gradient to set the phase; align the phase so the offset takes
        // the ψ = 0 form (imaginary part maximal).
        let s_o = o_x * o_x + o_z * o_z;
        let chi = if s_o.norm() < opts.phase_tie_tol * (o_x.norm_sqr() + o_z.norm_sqr()) {
            diag.ambiguous_phase = true;
            0.0
        } else {
            -0.5 * s_o.arg() - FRAC_PI_2
        };
        (chi, 0.0, 0.0, 0.0)
    } else {
        let s = c1 * c1 + c2 * c2;
        let chi = if s.norm() < opts.phase_tie_tol * grad_norm * grad_norm {
            diag.ambiguous_phase = true;
            0.0
        } else {
            -0.5 * s.arg()
        };
        let phase = (i * chi).exp();
        let cr1 = c1 * phase;
        let cr2 = c2 * phase;
        let a = Vector2::new(cr1.re, cr2.re);
        let b_vec = Vector2::new(cr1.im, cr2.im);
        let (beta, a_par) = fold_orientation(a.y.atan2(a.x), a.norm());
        let e_b = Vector2::new(beta.cos(), beta.sin());
        let e_b_perp = Vector2::new(beta.sin(), -beta.cos());
        let b_par = b_vec.dot(&e_b_perp);
        let b_defect = b_vec.dot(&e_b);
        if b_vec.norm() > opts.gradient_abs_tol {
            diag.residual_beta_orthogonality = (b_defect / b_vec.norm()).clamp(-1.0, 1.0).asin();
        }
        let sign = if a_par < 0.0 { -1.0 } else { 1.0 };
        let bp = sign * (a_par * a_par + b_par * b_par).sqrt();
        let psi = (b_par * sign).atan2(a_par.abs());
        (chi, bp, beta, psi)
    };

    diag.phase_applied = chi;
    let phase = (i * chi).exp();
    let ox = o_x * phase;
    let oz = o_z * phase;
    let p_vec = Vector2::new(ox.re, oz.re);
    let q_vec = Vector2::new(ox.im, oz.im);
    let offset_norm = (p_vec.norm_squared() + q_vec.norm_squared()).sqrt();
    let offset_floor = opts
        .offset_abs_tol
        .max(opts.offset_rel_tol * bp.abs());

    let (b, alpha) = if offset_norm < offset_floor {
        diag.degenerate_offset = true;
        diag.residual_phi_psi = 0.0;
        (0.0, 0.0)
    } else {
        // Joint best-fit of (B, α) to p = B sinψ e_α, q = −B cosψ e_{α−π/2}:
        // B e_α = u with the closed form below; exact for minimum-condition
        // inputs, least-squares otherwise.
        let (s_psi, c_psi) = psi.sin_cos();
        let u = Vector2::new(
            s_psi * p_vec.x + c_psi * q_vec.y,
            s_psi * p_vec.y - c_psi * q_vec.x,
        );
        let (alpha, b) = fold_orientation(u.y.atan2(u.x), u.norm());
        // Residual: measured offset phase φ against the ψ − π/2 target.
        let e_a = unit_vec(alpha);
        let e_ap = unit_vec(alpha - FRAC_PI_2);
        let p_par = p_vec.dot(&e_a);
        let q_par = q_vec.dot(&e_ap);
        if p_par.abs() > 0.0 || q_par.abs() > 0.0 {
            let phi = q_par.atan2(p_par);
            diag.residual_phi_psi = wrap_mod_pi(phi - (psi - FRAC_PI_2));
        }
        // Residual: direction of q against e_{α_r − π/2} where α_r = arg p.
        if p_vec.norm() > offset_floor && q_vec.norm() > offset_floor {
            let alpha_r = p_vec.y.atan2(p_vec.x);
            let alpha_i = q_vec.y.atan2(q_vec.x);
            diag.residual_alpha_orthogonality = wrap_mod_pi(alpha_i - (alpha_r - FRAC_PI_2));
        }
        (b, alpha)
    };

    let params = QuadrupoleParams::bare(b, bp, alpha, beta, psi).into_canonical_domains();
    (params, diag)
}

/// Semi-axes and orientation of the ellipse traced by `Re{v e^{iωt}}` over
/// one drive period.
#[derive(Debug, Clone, Copy)]
pub struct PolarizationEllipse {
    /// Semi-major axis, μT.
    pub major: f64,
    /// Semi-minor axis, μT; 0 for linear polarization.
    pub minor: f64,
    /// Major-axis orientation in [0, π); `None` for circular polarization.
    pub orientation: Option<f64>,
}

/// Polarization ellipse of a 2D phasor.
pub fn polarization_ellipse(v: &ComplexVec2) -> PolarizationEllipse {
    let ns = v.norm_sqr();
    let s = v.x * v.x + v.z * v.z;
    let sn = s.norm();
    let major = ((ns + sn) * 0.5).sqrt();
    let minor = (((ns - sn) * 0.5).max(0.0)).sqrt();
    if sn <= 1e-12 * ns || ns == 0.0 {
        return PolarizationEllipse {
            major,
            minor,
            orientation: None,
        };
    }
    // At t = −arg(s)/2ω the field magnitude is maximal.
    let phase = Complex64::from_polar(1.0, -0.5 * s.arg());
    let d = Vector2::new((v.x * phase).re, (v.z * phase).re);
    let (orientation, _) = fold_orientation(d.y.atan2(d.x), 1.0);
    PolarizationEllipse {
        major,
        minor,
        orientation: Some(orientation),
    }
}
