//! Edge-length vectors and the polygon inequalities.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered edge lengths `(l_1, ..., l_n)` of a closed chain, `n >= 3`, all
/// strictly positive and finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EdgeLengths(Vec<f64>);

impl EdgeLengths {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() < 3 {
            return Err(Error::InvalidEdgeLengths(format!(
                "need at least 3 edges, got {}",
                lengths.len()
            )));
        }
        if let Some((i, l)) = lengths
            .iter()
            .enumerate()
            .find(|(_, l)| !(l.is_finite() && **l > 0.0))
        {
            return Err(Error::InvalidEdgeLengths(format!(
                "edge {} has length {l}; lengths must be finite and strictly positive",
                i + 1
            )));
        }
        Ok(Self(lengths))
    }

    /// Number of edges `n`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Length of edge `i`, 1-based as in `l_1 .. l_n`.
    pub fn edge(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn perimeter(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Index (0-based) of the first longest edge.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &l) in self.0.iter().enumerate() {
            if l > self.0[best] {
                best = i;
            }
        }
        best
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|l| l * c).collect())
    }
}

impl TryFrom<Vec<f64>> for EdgeLengths {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<EdgeLengths> for Vec<f64> {
    fn from(e: EdgeLengths) -> Self {
        e.0
    }
}

impl fmt::Display for EdgeLengths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Position of an edge-length vector relative to the cone of realizable
/// lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeasibilityClass {
    /// Some edge is longer than all the others together; no polygon exists.
    Infeasible,
    /// Some edge equals the sum of the others; every polygon is a segment.
    Border,
    /// Every edge is strictly shorter than the sum of the others.
    Interior,
}

impl fmt::Display for FeasibilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Infeasible => "Infeasible",
            Self::Border => "Border",
            Self::Interior => "Interior",
        };
        f.write_str(s)
    }
}

/// Classifies `ell` against the polygon inequalities `l_i <= sum_{j != i} l_j`.
///
/// Comparisons are exact on the given doubles: the sign of
/// `l_i - sum_{j != i} l_j` is evaluated with error-free expansion
/// arithmetic, so no rounding can move a vector across the border.
pub fn classify_feasibility(ell: &EdgeLengths) -> FeasibilityClass {
    let lengths = ell.as_slice();
    let mut border = false;
    for i in 0..lengths.len() {
        let terms = lengths
            .iter()
            .enumerate()
            .map(|(j, &l)| if j == i { l } else { -l });
        match exact_sum_sign(terms) {
            Ordering::Greater => return FeasibilityClass::Infeasible,
            Ordering::Equal => border = true,
            Ordering::Less => {}
        }
    }
    if border {
        FeasibilityClass::Border
    } else {
        FeasibilityClass::Interior
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    (s, (a - av) + (b - bv))
}

/// Exact sign of a sum of finite doubles.
///
/// Maintains a nonoverlapping expansion whose components sum exactly to the
/// running total; the sign of the total is the sign of the largest
/// nonzero component.
pub(crate) fn exact_sum_sign(terms: impl IntoIterator<Item = f64>) -> Ordering {
    let mut expansion: Vec<f64> = Vec::new();
    for t in terms {
        let mut q = t;
        let mut next = Vec::with_capacity(expansion.len() + 1);
        for &e in &expansion {
            let (s, err) = two_sum(q, e);
            if err != 0.0 {
                next.push(err);
            }
            q = s;
        }
        if q != 0.0 {
            next.push(q);
        }
        expansion = next;
    }
    // Components are ordered by increasing magnitude.
    match expansion.last() {
        Some(&v) if v > 0.0 => Ordering::Greater,
        Some(&v) if v < 0.0 => Ordering::Less,
        _ => Ordering::Equal,
    }
}
