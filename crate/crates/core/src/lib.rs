//! Exact group-structure transport on subgroups of the rationals.
//!
//! Given a homeomorphism `h` of a group `G`, the transported operation
//! `x ⊕ y = h⁻¹(h(x) + h(y))` is a second group law on the same points for
//! which `h` is an isomorphism. The crate uses this to
//!
//! * turn an involution with a single fixed point into the inversion of a
//!   transported group ([`involution`]),
//! * check conjugacies `t∘f = g∘t` against regroupings ([`transport`]),
//! * exhibit a fixed-point-free bijection of `Z` with infinitely many orbits,
//!   which therefore is not a shift for any group law on `Z`, and build
//!   conjugacies to shifts for monotone maps ([`dynamics`]).
//!
//! All arithmetic is exact.
//!
//! ```
//! use regroup::{normalize, q, GroupDescriptor, HPolicy, Homeo, Window};
//!
//! let f = Homeo::affine(&GroupDescriptor::integers(), q("-1"), q("2"))?; // x ↦ 2 − x
//! let nf = normalize(&f, &Window::symmetric(50), HPolicy::Canonical)?;
//! assert_eq!(nf.e, q("1"));
//! assert_eq!(nf.transported.add(&q("3"), &q("4"))?, q("6")); // x ⊕ y = x + y − 1
//! assert!(nf.passed());
//! # Ok::<(), regroup::Error>(())
//! ```

pub mod cli;
pub mod corpus;
pub mod dynamics;
pub mod error;
pub mod groups;
pub mod involution;
pub mod maps;
pub mod numbers;
pub mod report;
pub mod transport;

pub use error::{Error, Result};
pub use groups::{GroupDescriptor, GroupElement, Resolution, Window};
pub use maps::{Bijection, GroupMap, Homeo, Monotonicity, PLMap, TableMap};
pub use numbers::{q, Rational, Valuation};
pub use report::{CheckReport, Counterexample, Status, SuiteReport};
pub use transport::{check_conjugacy, round_trip, Role, TransportedGroup};
pub use involution::{normalize, unique_fixed_point, HPolicy, InvolutionNormalForm};
pub use dynamics::{example_map, monotone_to_shift, orbit_decomposition, shift_obstruction, three_piece_map, Verdict};
