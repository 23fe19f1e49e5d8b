//! Exact K-stability computations for Fano threefolds of family 2.8.
//!
//! A smooth member `X` is a double cover of `Y = Bl_p P³` branched along an
//! anticanonical surface `S̄`, the strict transform of a quartic `S` with a
//! double point at `p`. Depending on whether that double point is an `A1`
//! or an `A2` singularity, `S` degenerates to one of two model surfaces and
//! the pair `(Y, c·S̄₀)` is shown to be K-semistable by an exact
//! computation:
//!
//! * `A1`: the `P¹`-bundle formula for δ ([`bundle_delta`]), balanced at `c = 3/17`;
//! * `A2`: β-invariants of the torus-invariant divisors ([`divgeom`]) and the
//!   vanishing of the Futaki character through two monomial valuations
//!   ([`valuations`]), at `c = 2/9`.
//!
//! [`pipeline::certify`] runs the whole chain on an input quartic.
//!
//! ```
//! use kfano::pipeline::{certify, CertifyOptions, Verdict};
//!
//! let report = certify("x*y*w^2 + z^3*w + x^4 + y^4 + z^4", &CertifyOptions::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::KSemistablePairCertified);
//! ```

pub mod bundle_delta;
pub mod divgeom;
pub mod exactnum;
pub mod pipeline;
pub mod polyforms;
pub mod valuations;

pub use exactnum::{int, rat, Rational};

/// The guide under `book/`, compiled so that its snippets run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/exact-numbers.md")]
    pub mod exact_numbers {}
    #[doc = include_str!("../../../book/src/quartics.md")]
    pub mod quartics {}
    #[doc = include_str!("../../../book/src/divisors.md")]
    pub mod divisors {}
    #[doc = include_str!("../../../book/src/valuations.md")]
    pub mod valuations {}
    #[doc = include_str!("../../../book/src/bundle-delta.md")]
    pub mod bundle_delta {}
    #[doc = include_str!("../../../book/src/certification.md")]
    pub mod certification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
