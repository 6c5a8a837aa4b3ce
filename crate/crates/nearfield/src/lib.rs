//! Modeling and inversion of 2D microwave near-fields around an intensity
//! minimum, probed through AC Zeeman shifts on a single ⁹Be⁺ ion.
//!
//! The crate is organized around one exchange currency, [`QuadrupoleParams`]:
//! the five parameters (offset strength `B`, gradient strength `B'`, their
//! orientations `α` and `β`, and the polarization angle `ψ`) that fully
//! describe a divergence- and curl-free 2D field phasor to first order
//! around its `|B|` minimum, plus the minimum position and drive frequency.
//!
//! * [`model`] — the first-order field representations, phasor evaluation
//!   and canonicalization of a raw expansion into the five-parameter form.
//! * [`grid`] — sampled complex fields on rectangular grids, 2D polynomial
//!   fitting, minimum location and parameter extraction.
//! * [`wires`] — analytically known fields of complex line currents; the
//!   desk-scale stand-in for a finite-element field solution.
//! * [`hyperfine`] — the ⁹Be⁺ ground-state manifold at a static field,
//!   transition frequencies, polarization decomposition, second-order AC
//!   Zeeman shifts and a Floquet brute-force cross-check.
//! * [`shiftmap`] — forward-modeled spatial maps of transition shifts.
//! * [`fit`] — nonlinear least-squares recovery of the field parameters
//!   from measured shift maps, with covariance-based uncertainties.
//! * [`io`] — CSV/JSON formats for fields, maps, parameters and fit
//!   reports, plus a PGM heatmap renderer.
//!
//! Units are fixed throughout the core: μT for fields, μT/μm for gradients,
//! μm for lengths, MHz for frequencies and mT for the static bias field.
//! Angles are radians internally and degrees at every serialization
//! boundary.

pub mod error;
pub mod fit;
pub mod grid;
pub mod hyperfine;
pub mod io;
pub mod model;
pub mod shiftmap;
pub mod wires;

pub use error::{Error, Result};
pub use grid::{FieldGrid, PolyFit};
pub use model::{
    CanonicalDiagnostics, CanonicalizeOptions, ComplexVec2, QuadrupoleParams, RawExpansion,
};
pub use shiftmap::ShiftMap;
pub use wires::{LineCurrent, WireSet};
