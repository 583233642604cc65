//! Browser bindings for the polygon demo page. Every export takes edge
//! lengths as a comma-separated string and returns a JSON string.

use polygon_moduli::construct::{cyclic_realization, raise_to_dimension};
use polygon_moduli::quotient::align;
use polygon_moduli::{classify_feasibility, so_equivalent, EdgeLengths, Polygon, ToleranceConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse_ell(s: &str) -> Result<EdgeLengths, String> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{:?} is not a number", t.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    EdgeLengths::new(values).map_err(|e| e.to_string())
}

/// Vertices with the origin added at both ends, ready to draw as a closed path.
fn closed_path(p: &Polygon) -> Vec<Vec<f64>> {
    let origin = vec![0.0; p.ambient_dim()];
    let mut path = vec![origin.clone()];
    path.extend(p.vertices());
    path.push(origin);
    path
}

pub fn planar_json(ell: &str) -> Result<Value, String> {
    let ell = parse_ell(ell)?;
    let class = classify_feasibility(&ell);
    let c = cyclic_realization(&ell, &ToleranceConfig::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "feasibility": class.to_string(),
        "path": closed_path(&c.polygon),
        "circumradius": c.circumradius,
        "center_inside": c.center_inside,
    }))
}

pub fn raise_json(ell: &str, k: usize, seed: u64) -> Result<Value, String> {
    let ell = parse_ell(ell)?;
    let tol = ToleranceConfig::default();
    let p = raise_to_dimension(&ell, k, 3, &tol, seed).map_err(|e| e.to_string())?;
    Ok(json!({
        "path": closed_path(&p),
        "dimension": p.dimension(&tol),
        "singular_values": p.singular_values(),
        "edge_error": p.relative_edge_error(),
    }))
}

/// A `k`-dimensional polygon in `R^3` against its mirror image, compared
/// by rotations of `R^3` and of `R^4`.
pub fn mirror_json(ell: &str, k: usize, seed: u64) -> Result<Value, String> {
    let ell = parse_ell(ell)?;
    let tol = ToleranceConfig::default();
    let p = raise_to_dimension(&ell, k, 3, &tol, seed).map_err(|e| e.to_string())?;
    let m = p.reflect();
    let compare = |a: &Polygon, b: &Polygon| -> Result<Value, String> {
        let same = so_equivalent(a, b, &tol).map_err(|e| e.to_string())?;
        let residual = align(a, b, true, &tol).map_err(|e| e.to_string())?.residual;
        Ok(json!({ "equivalent": same, "residual": residual }))
    };
    let (p4, m4) = (p.embed(4).map_err(|e| e.to_string())?, m.embed(4).map_err(|e| e.to_string())?);
    Ok(json!({
        "path": closed_path(&p),
        "mirror_path": closed_path(&m),
        "dimension": p.dimension(&tol),
        "in_r3": compare(&p, &m)?,
        "in_r4": compare(&p4, &m4)?,
    }))
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn feasibility(ell: &str) -> Result<String, JsError> {
    export(parse_ell(ell).map(|e| Value::String(classify_feasibility(&e).to_string())))
}

/// The convex polygon inscribed in a circle.
#[wasm_bindgen]
pub fn planar(ell: &str) -> Result<String, JsError> {
    export(planar_json(ell))
}

/// A `k`-dimensional polygon in `R^3` obtained by bending the planar one.
#[wasm_bindgen]
pub fn raise(ell: &str, k: usize, seed: u64) -> Result<String, JsError> {
    export(raise_json(ell, k, seed))
}

#[wasm_bindgen]
pub fn mirror(ell: &str, k: usize, seed: u64) -> Result<String, JsError> {
    export(mirror_json(ell, k, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_path_closes() {
        let v = planar_json("1,1,1,1").unwrap();
        let path = v["path"].as_array().unwrap();
        assert_eq!(path.len(), 5);
        assert_eq!(path[0], path[4]);
        assert_eq!(v["feasibility"], "Interior");
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(planar_json("2,1,1").is_err());
        assert!(planar_json("1,x,1").is_err());
        assert!(raise_json("1,1,1,1", 4, 0).is_err());
    }

    #[test]
    fn mirror_identification() {
        let full = mirror_json("1,1,1,1", 3, 1).unwrap();
        assert_eq!(full["in_r3"]["equivalent"], false);
        assert_eq!(full["in_r4"]["equivalent"], true);
        let flat = mirror_json("1,1,1,1", 2, 1).unwrap();
        assert_eq!(flat["in_r3"]["equivalent"], true);
    }
}
