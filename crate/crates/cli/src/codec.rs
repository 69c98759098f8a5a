//! JSON layout for bundles, torsion modules and subschemes.
//!
//! Scalars are strings (`"3"`, `"-2/5"`), polynomials are arrays of scalars
//! in ascending degree, rational functions are `{"num": .., "den": ..}` and
//! matrices are arrays of rows. Points of the line are a scalar or `"inf"`.

use serde_json::{json, Value};

use scrollkit::eltrans::{PrincipalPart, TorsionModule};
use scrollkit::hilbquot::{Cluster, ZScheme};
use scrollkit::spans::DeltaPoint;
use scrollkit::{Bundle, CurvePoint, Error, Field, MatrixR, Poly, RatFunc, Result, Scalar};

/// Parse JSON text; syntax errors carry the byte offset of the failure.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse { offset: Some(byte_offset(text, e.line(), e.column())), message: e.to_string() })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

fn err(path: &str, what: impl std::fmt::Display) -> Error {
    Error::Parse { offset: None, message: format!("{path}: {what}") }
}

fn field_of(v: &Value, path: &str) -> Result<Field> {
    let s = v.as_str().ok_or_else(|| err(path, "expected a field name"))?;
    s.parse().map_err(|_| err(path, format!("unknown field {s:?}")))
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(path, format!("missing key {key:?}")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn usize_of(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn scalar_from_json(v: &Value, field: Field, path: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse_scalar(s).map_err(|_| err(path, format!("malformed scalar {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(field.int(n.as_i64().unwrap_or_default())),
        _ => Err(err(path, "expected a scalar string")),
    }
}

pub fn scalars_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn scalars_from_json(v: &Value, field: Field, path: &str) -> Result<Vec<Scalar>> {
    array(v, path)?.iter().enumerate().map(|(i, c)| scalar_from_json(c, field, &format!("{path}[{i}]"))).collect()
}

pub fn poly_to_json(p: &Poly) -> Value {
    scalars_to_json(p.coeffs())
}

pub fn poly_from_json(v: &Value, field: Field, path: &str) -> Result<Poly> {
    Ok(Poly::new(field, scalars_from_json(v, field, path)?))
}

fn polys_from_json(v: &Value, field: Field, path: &str) -> Result<Vec<Poly>> {
    array(v, path)?.iter().enumerate().map(|(i, p)| poly_from_json(p, field, &format!("{path}[{i}]"))).collect()
}

pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    json!({ "num": poly_to_json(f.num()), "den": poly_to_json(f.den()) })
}

/// A bare polynomial array is accepted in place of `{"num", "den"}`.
pub fn ratfunc_from_json(v: &Value, field: Field, path: &str) -> Result<RatFunc> {
    if v.is_array() {
        return Ok(RatFunc::from_poly(poly_from_json(v, field, path)?));
    }
    let num = poly_from_json(get(v, "num", path)?, field, &format!("{path}.num"))?;
    let den = poly_from_json(get(v, "den", path)?, field, &format!("{path}.den"))?;
    if den.is_zero() {
        return Err(err(path, "zero denominator"));
    }
    Ok(RatFunc::new(num, den))
}

pub fn ratvec_to_json(v: &[RatFunc]) -> Value {
    Value::Array(v.iter().map(ratfunc_to_json).collect())
}

pub fn ratvec_from_json(v: &Value, field: Field, path: &str) -> Result<Vec<RatFunc>> {
    array(v, path)?.iter().enumerate().map(|(i, f)| ratfunc_from_json(f, field, &format!("{path}[{i}]"))).collect()
}

pub fn matrix_to_json(m: &MatrixR) -> Value {
    Value::Array((0..m.rows()).map(|i| ratvec_to_json(&m.row(i))).collect())
}

pub fn matrix_from_json(v: &Value, field: Field, rank: usize, path: &str) -> Result<MatrixR> {
    let rows = array(v, path)?;
    if rows.len() != rank {
        return Err(err(path, format!("expected {rank} rows, found {}", rows.len())));
    }
    let rows: Vec<Vec<RatFunc>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{path}[{i}]");
            let row = ratvec_from_json(row, field, &p)?;
            if row.len() != rank {
                return Err(err(&p, format!("expected {rank} entries, found {}", row.len())));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(MatrixR::from_rows(field, rank, rows))
}

pub fn bundle_to_json(b: &Bundle) -> Value {
    json!({
        "field": b.field().to_string(),
        "rank": b.rank(),
        "lattice0": matrix_to_json(b.a0()),
        "latticeInf": matrix_to_json(b.ainf()),
    })
}

pub fn bundle_from_json(v: &Value, path: &str) -> Result<Bundle> {
    let field = field_of(get(v, "field", path)?, &format!("{path}.field"))?;
    let rank = usize_of(get(v, "rank", path)?, &format!("{path}.rank"))?;
    if rank == 0 {
        return Err(err(path, "rank must be positive"));
    }
    let a0 = matrix_from_json(get(v, "lattice0", path)?, field, rank, &format!("{path}.lattice0"))?;
    let ainf = matrix_from_json(get(v, "latticeInf", path)?, field, rank, &format!("{path}.latticeInf"))?;
    Bundle::from_lattices(a0, ainf)
}

pub fn point_to_json(x: &CurvePoint) -> Value {
    match x {
        CurvePoint::Finite(a) => scalar_to_json(a),
        CurvePoint::Infinity => Value::String("inf".into()),
    }
}

pub fn point_from_json(v: &Value, field: Field, path: &str) -> Result<CurvePoint> {
    if v.as_str() == Some("inf") {
        return Ok(CurvePoint::Infinity);
    }
    scalar_from_json(v, field, path).map(CurvePoint::Finite)
}

pub fn cluster_to_json(c: &Cluster) -> Value {
    json!({ "x": point_to_json(&c.x), "k": c.k, "jet": Value::Array(c.jet.iter().map(poly_to_json).collect()) })
}

/// Decoding normalizes the jet; `normalized` is set when the stored form
/// differs from the input.
pub fn cluster_from_json(v: &Value, field: Field, path: &str, normalized: &mut bool) -> Result<Cluster> {
    let x = point_from_json(get(v, "x", path)?, field, &format!("{path}.x"))?;
    let k = usize_of(get(v, "k", path)?, &format!("{path}.k"))?;
    let jet = polys_from_json(get(v, "jet", path)?, field, &format!("{path}.jet"))?;
    let c = Cluster::new(x, k, jet.clone()).map_err(|e| err(path, e))?;
    if c.jet != jet {
        *normalized = true;
    }
    Ok(c)
}

pub fn zscheme_to_json(z: &ZScheme) -> Value {
    Value::Array(z.clusters().iter().map(cluster_to_json).collect())
}

pub fn zscheme_from_json(v: &Value, field: Field, path: &str, normalized: &mut bool) -> Result<ZScheme> {
    let cs = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| cluster_from_json(c, field, &format!("{path}[{i}]"), normalized))
        .collect::<Result<_>>()?;
    ZScheme::new(cs)
}

pub fn torsion_to_json(t: &TorsionModule) -> Value {
    Value::Array(
        t.parts
            .iter()
            .map(|(x, gens)| {
                json!({
                    "point": point_to_json(x),
                    "generators": gens.iter().map(|g| json!({
                        "pole": g.pole,
                        "vector": Value::Array(g.vector.iter().map(poly_to_json).collect()),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn torsion_from_json(v: &Value, field: Field, rank: usize, path: &str) -> Result<TorsionModule> {
    let mut t = TorsionModule::new();
    for (i, entry) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let x = point_from_json(get(entry, "point", &p)?, field, &format!("{p}.point"))?;
        for (j, g) in array(get(entry, "generators", &p)?, &p)?.iter().enumerate() {
            let gp = format!("{p}.generators[{j}]");
            let pole = usize_of(get(g, "pole", &gp)?, &format!("{gp}.pole"))?;
            let vector = polys_from_json(get(g, "vector", &gp)?, field, &format!("{gp}.vector"))?;
            if pole == 0 || vector.len() != rank {
                return Err(err(&gp, format!("need a positive pole and {rank} coordinates")));
            }
            t.push(PrincipalPart::new(x.clone(), pole, vector));
        }
    }
    Ok(t)
}

pub fn delta_to_json(d: &DeltaPoint) -> Value {
    json!({ "x": point_to_json(&d.x), "v": scalars_to_json(&d.v), "w": scalars_to_json(&d.w) })
}

pub fn delta_from_json(v: &Value, field: Field, path: &str) -> Result<DeltaPoint> {
    DeltaPoint::new(
        point_from_json(get(v, "x", path)?, field, &format!("{path}.x"))?,
        scalars_from_json(get(v, "v", path)?, field, &format!("{path}.v"))?,
        scalars_from_json(get(v, "w", path)?, field, &format!("{path}.w"))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_count_bytes() {
        let text = "{\n  \"a\": [1,\n";
        let Err(Error::Parse { offset: Some(o), .. }) = parse_json(text) else { panic!("expected a parse error") };
        assert_eq!(o, text.len());
    }

    #[test]
    fn bundle_roundtrip() {
        let f = Field::Rational;
        let b = Bundle::split(f, &[2, -3]).twist(&CurvePoint::Finite(f.int(1)), 1);
        let back = bundle_from_json(&bundle_to_json(&b), "$").unwrap();
        assert_eq!(back.a0(), b.a0());
        assert_eq!(back.ainf(), b.ainf());
    }

    #[test]
    fn malformed_scalar_names_its_path() {
        let v: Value = serde_json::from_str(r#"{"field":"Q","rank":1,"lattice0":[[["1x"]]],"latticeInf":[[["1"]]]}"#).unwrap();
        let Err(Error::Parse { message, .. }) = bundle_from_json(&v, "$") else { panic!() };
        assert!(message.starts_with("$.lattice0[0][0][0]"), "{message}");
    }

    #[test]
    fn cluster_normalization_flagged() {
        let f = Field::prime(7).unwrap();
        let v: Value = serde_json::from_str(r#"{"x":"2","k":1,"jet":[["3"],["1"]]}"#).unwrap();
        let mut flag = false;
        let c = cluster_from_json(&v, f, "$", &mut flag).unwrap();
        assert!(flag);
        assert_eq!(c.branch(), vec![f.one(), f.int(5)]);
    }
}
