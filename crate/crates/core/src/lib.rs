//! Exact degree sets of closed points on curves over Henselian fields.
//!
//! Over the field of fractions of a Henselian discrete valuation ring, the
//! set of degrees of closed points of a smooth curve is determined by the
//! combinatorics of the special fiber of a strict-normal-crossings model:
//! component multiplicities, constant fields, marked intersection points and
//! the degree sets of the component interiors over the residue field. This
//! crate computes that set exactly.
//!
//! * [`eps`] — the universal value type: eventually periodic subsets of the
//!   positive integers, with exact union, intersection, scaling, sumsets and
//!   a canonical textual form.
//! * [`semigroup`] — numerical-semigroup closures of multiplicity multisets.
//! * [`fiber`] — the engine: degree set and index of the generic fiber from
//!   a special-fiber configuration.
//! * [`blowup`] — local blow-up calculus at non-SNC points: exceptional
//!   multiplicities, rewrite rules, enumeration of reachable degrees.
//! * [`finitefield`] — Weil bounds, zeta-function count extension, Möbius
//!   point counts and distinct-degree factor extraction.
//! * [`catalog`] — built-in special-fiber configurations (Namikawa–Ueno
//!   types among them), the genus-2 classifier and the hyperelliptic family.
//! * [`io`] — the JSON configuration format and result rendering.

pub mod blowup;
pub mod catalog;
pub mod eps;
pub mod fiber;
pub mod finitefield;
pub mod io;
pub mod semigroup;

pub use eps::{EpsError, EventuallyPeriodicSet};
pub use fiber::{ResidueFieldClass, SpecialFiberConfig};
