use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lengths::EdgeLengths;
use crate::polygon::Polygon;
use crate::tolerance::ToleranceConfig;

/// Largest `n` accepted by [`enumerate_degenerate_classes`]; the search visits
/// `2^(n-1)` sign vectors.
pub const MAX_ENUMERATION_EDGES: usize = 24;

/// Directions of the edges of a 1-dimensional polygon along a fixed line:
/// edge `i` is `signs[i] * l_i * e_1`. Written as a string of `+` and `-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidPattern("signs must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// Signed closing sum `sum_i signs_i * l_i`.
    pub fn closing_sum(&self, ell: &EdgeLengths) -> f64 {
        self.0
            .iter()
            .zip(ell.as_slice())
            .map(|(&s, &l)| f64::from(s) * l)
            .sum()
    }

    /// The pattern closes up: `|sum_i signs_i l_i| <= eps_root * sum_i l_i`.
    ///
    /// For exactly representable data the float sum of the `n` terms is off
    /// by at most `n` ulps of the perimeter, far inside the tolerance.
    pub fn is_valid_for(&self, ell: &EdgeLengths, tol: &ToleranceConfig) -> bool {
        self.len() == ell.len() && self.closing_sum(ell).abs() <= tol.eps_root * ell.perimeter()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidPattern(format!(
                    "unexpected character {other:?}; use only '+' and '-'"
                ))),
            })
            .collect::<Result<Vec<i8>>>()
            .and_then(Self::new)
    }
}

impl TryFrom<String> for SignPattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SignPattern> for String {
    fn from(p: SignPattern) -> Self {
        p.to_string()
    }
}

/// All 1-dimensional polygon classes for `ell`: sign vectors with
/// `sum_i e_i l_i = 0`, one per `{e, -e}` pair (reversing the line is a
/// rotation). Each representative starts with `+`; the result is sorted with
/// `+` before `-`.
pub fn enumerate_degenerate_classes(
    ell: &EdgeLengths,
    tol: &ToleranceConfig,
) -> Result<Vec<SignPattern>> {
    let n = ell.len();
    if n > MAX_ENUMERATION_EDGES {
        return Err(Error::TooManyEdges { n, max: MAX_ENUMERATION_EDGES });
    }
    let lengths = ell.as_slice();
    let limit = tol.eps_root * ell.perimeter();
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << (n - 1)) {
        let mut sum = lengths[0];
        for (j, &l) in lengths.iter().enumerate().skip(1) {
            if mask & (1 << (j - 1)) != 0 {
                sum -= l;
            } else {
                sum += l;
            }
        }
        if sum.abs() <= limit {
            let signs = std::iter::once(1)
                .chain((1..n).map(|j| if mask & (1 << (j - 1)) != 0 { -1 } else { 1 }))
                .collect();
            found.push(SignPattern(signs));
        }
    }
    // '+' sorts before '-' in the string form: compare on -sign.
    found.sort_by(|a, b| {
        let ka: Vec<i8> = a.0.iter().map(|s| -s).collect();
        let kb: Vec<i8> = b.0.iter().map(|s| -s).collect();
        ka.cmp(&kb)
    });
    Ok(found)
}

/// The 1-dimensional polygon `v_k = (sum_{i<=k} e_i l_i) e_1` in `R^d`.
pub fn build_degenerate(
    ell: &EdgeLengths,
    pattern: &SignPattern,
    d: usize,
    tol: &ToleranceConfig,
) -> Result<Polygon> {
    if d < 2 {
        return Err(Error::Precondition(format!("ambient dimension must be at least 2, got {d}")));
    }
    if pattern.len() != ell.len() {
        return Err(Error::InvalidPattern(format!(
            "pattern has {} signs for {} edges",
            pattern.len(),
            ell.len()
        )));
    }
    if !pattern.is_valid_for(ell, tol) {
        return Err(Error::InvalidPattern(format!(
            "pattern {pattern} does not close up for ({ell}): signed sum {}",
            pattern.closing_sum(ell)
        )));
    }
    let n = ell.len();
    let mut m = DMatrix::zeros(d, n - 1);
    let mut position = 0.0;
    for k in 0..n - 1 {
        position += f64::from(pattern.0[k]) * ell.as_slice()[k];
        m[(0, k)] = position;
    }
    Polygon::from_matrix(ell.clone(), m, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ell(v: &[f64]) -> EdgeLengths {
        EdgeLengths::new(v.to_vec()).unwrap()
    }

    fn strings(ps: &[SignPattern]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn equilateral_quadrilateral_has_three_classes() {
        let classes = enumerate_degenerate_classes(&ell(&[1.0; 4]), &tol()).unwrap();
        assert_eq!(strings(&classes), vec!["++--", "+-+-", "+--+"]);
    }

    #[test]
    fn odd_and_border_cases() {
        assert!(enumerate_degenerate_classes(&ell(&[1.0; 3]), &tol()).unwrap().is_empty());
        let classes = enumerate_degenerate_classes(&ell(&[2.0, 1.0, 1.0]), &tol()).unwrap();
        assert_eq!(strings(&classes), vec!["+--"]);
    }

    #[test]
    fn enumeration_cap() {
        let big = ell(&[1.0; 25]);
        assert!(matches!(
            enumerate_degenerate_classes(&big, &tol()),
            Err(Error::TooManyEdges { n: 25, max: 24 })
        ));
    }

    #[test]
    fn builds_prefix_sums() {
        let p = build_degenerate(&ell(&[1.0; 4]), &"++--".parse().unwrap(), 2, &tol()).unwrap();
        assert_eq!(p.vertices(), vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(p.dimension(&tol()), 1);

        let p = build_degenerate(&ell(&[2.0, 1.0, 1.0]), &"+--".parse().unwrap(), 2, &tol()).unwrap();
        assert_eq!(p.vertices(), vec![vec![2.0, 0.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn rejects_bad_patterns() {
        let e = ell(&[1.0; 4]);
        assert!(build_degenerate(&e, &"+++-".parse().unwrap(), 2, &tol()).is_err());
        assert!(build_degenerate(&e, &"++-".parse().unwrap(), 2, &tol()).is_err());
        assert!(build_degenerate(&e, &"++--".parse().unwrap(), 1, &tol()).is_err());
        assert!("+x-".parse::<SignPattern>().is_err());
    }

    #[test]
    fn pattern_string_round_trip() {
        let p: SignPattern = "+-+-".parse().unwrap();
        assert_eq!(p.signs(), &[1, -1, 1, -1]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "\"+-+-\"");
        assert_eq!(serde_json::from_str::<SignPattern>(&json).unwrap(), p);
        assert_eq!(p.negated().to_string(), "-+-+");
    }
}
