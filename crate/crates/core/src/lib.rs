pub mod affine_root;
pub mod cli;
pub mod error;
pub mod gram;
pub mod monomial;
pub mod pbw_index;
pub mod qfield;
pub mod solver;
pub mod strata;

pub use affine_root::{BetaSequence, CartanDatum, CartanType, Root, RootClass};
pub use error::{Error, Result};
pub use monomial::{MonomialTable, MonomialWord};
pub use pbw_index::{PBWIndex, Partition};
pub use qfield::{LaurentPoly, RatFn, TruncSeries};
pub use strata::{IndecomposableClass, Quiver, StratumData};
