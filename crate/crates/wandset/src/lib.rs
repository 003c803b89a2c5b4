//! Finite fragments of wand/set universes.

pub mod conch;
pub mod error;
pub mod formula;
pub mod instances;
pub mod io;
pub mod pureset;
pub mod report;
pub mod suites;
pub mod universe;
pub mod wandspec;

pub use error::{Error, Result};
pub use pureset::PureSet;
pub use report::{Check, Report};
pub use universe::{build, BuildMode, Caps, Fragment, ObjId, ObjKind};
pub use wandspec::{spec_by_name, SetQuery, SpecRef, WandSpec};
