//! Bounds for bounded analytic functions on rectangles, strips and
//! semi-strips, built from the g-fraction expansion of the function.
//!
//! The pipeline takes the Taylor coefficients of `f` at the origin, maps the
//! domain onto a canonical one, extracts g-fraction coefficients and turns
//! them into two-sided envelopes and first-return certificates. The
//! [`three_body`] module applies the strip certificate to collisions in the
//! Newtonian three-body problem.

// NaN must fail domain checks, so `!(x < y)` is used on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod conformal;
pub mod envelope;
pub mod error;
pub mod format;
pub mod gfraction;
pub mod return_time;
pub mod series;
pub mod special_fn;
pub mod three_body;

pub use conformal::{scale_taylor, DomainKind, DomainSpec, ScaledTaylor, TaylorData};
pub use envelope::{envelope, EnvelopePoint, EnvelopeSample};
pub use error::{Error, Result};
pub use gfraction::{extract_coefficients, Extraction, ExtractionStop, GFraction};
pub use return_time::{certify, max_return, min_return, Region, ReturnCertificate};
pub use special_fn::{make_elliptic_context, EllipticContext};
