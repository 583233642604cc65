//! Constructors for polygons of prescribed edge lengths and dimension.

mod bend;
mod degenerate;
mod planar;
mod sample;

pub use bend::{bend, bend_direction, bend_sites, find_bend_site, raise_to_dimension, BendSite};
pub use degenerate::{
    build_degenerate, enumerate_degenerate_classes, SignPattern, MAX_ENUMERATION_EDGES,
};
pub use planar::{build_planar, cyclic_realization, CyclicRealization};
pub use sample::sample;

use crate::error::{Error, Result};
use crate::lengths::{classify_feasibility, EdgeLengths, FeasibilityClass};

pub(crate) fn require_interior(ell: &EdgeLengths, what: &str) -> Result<()> {
    match classify_feasibility(ell) {
        FeasibilityClass::Interior => Ok(()),
        other => Err(Error::Precondition(format!(
            "{what} needs edge lengths strictly inside the polygon cone; ({ell}) is {other}"
        ))),
    }
}
