//! Square-free palindromes: enumeration, square-free censuses, square-divisor
//! counts, complete quadratic Kloosterman sums, oscillatory integral bounds
//! and the campaigns that fit their implied constants.

pub mod arith;
pub mod census;
pub mod digits;
pub mod enumerate;
pub mod expsum;
pub mod harness;
pub mod oscillate;
pub mod report;

pub use census::{CensusRecord, DensityConstant, SbStrategy};
pub use digits::{Base, DigitVec};
pub use enumerate::{PalindromeStream, Scope};
pub use expsum::{ExpSumParams, PoissonReport, StationarySplit};
pub use harness::acceptance::{AcceptanceOptions, CriterionOutcome};
pub use harness::{BoundFit, FitPoint, VdcReport};
pub use oscillate::{BoundReport, CompactFunction, DecayReport, PhaseSpec};
