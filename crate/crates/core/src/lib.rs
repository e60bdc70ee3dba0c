//! Finite left-distributive algebras `A_n`, the critical-point calculus they
//! encode, conjecture verifiers over them, and the enumeration of the
//! ordinals between consecutive critical points.

pub mod conjectures;
pub mod crit;
pub mod error;
pub mod identities;
pub mod omega;
pub mod report;
pub mod store;
pub mod table;
pub mod tower;
pub mod word;

pub use conjectures::{revalidate, verify, verify_upto};
pub use crit::{act_on_gamma, in_range, least_range_witness, CertifiedIndex, Gamma};
pub use error::{Error, Result};
pub use omega::{Enumerator, IntervalEnumeration, OrdinalRep, PairRep};
pub use report::{Check, Status, SweepOptions, VerificationReport, Witness};
pub use store::{CorruptPolicy, TableStore};
pub use table::{BuildLimits, LaverTable};
pub use tower::Tower;
pub use word::Word;
