//! File formats. Indices are 1-based everywhere outside the library.
//!
//! * Relation: `{"n": 6, "pairs": [[1,5],[1,6]]}`, or plain text with `n` on
//!   the first line and one `i j` pair per following line (`#` starts a
//!   comment).
//! * Matrix: `{"field": "Q" | {"GF": p}, "n": 3, "entries": [[..], ..]}`.
//! * Transitive function: `{"field": .., "values": [[i, j, "v"], ..]}`,
//!   unlisted pairs are 1.
//! * Automorphism: `{"A": <matrix>, "g": <transitive-fn>, "tau": [..]}` or
//!   `{"field": .., "images": [[i, j, <matrix>], ..]}`, either with an
//!   optional `"relation"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::StructMatrix;
use crate::automorphism::{AutForm, AutomorphismSpec};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::DenseMatrix;
use crate::perm::Permutation;
use crate::relation::Relation;
use crate::transitive::TransitiveFn;

/// How to treat a relation file that is not a quasi-order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Completion {
    /// Reject anything that is not already a quasi-order.
    #[default]
    Strict,
    /// Add missing diagonal pairs, then require transitivity.
    AddDiagonal,
    /// Replace the input by its reflexive transitive closure.
    Close,
}

/// Parses a relation without checking that it is a quasi-order.
pub fn parse_relation_raw(text: &str) -> Result<Relation> {
    if text.trim_start().starts_with('{') {
        relation_from_json(&parse_json(text)?)
    } else {
        relation_from_text(text)
    }
}

pub fn parse_relation(text: &str, completion: Completion) -> Result<Relation> {
    complete(parse_relation_raw(text)?, completion)
}

pub fn complete(mut rel: Relation, completion: Completion) -> Result<Relation> {
    match completion {
        Completion::Strict => {}
        Completion::AddDiagonal => {
            for i in 0..rel.n() {
                rel.insert(i, i);
            }
        }
        Completion::Close => rel = rel.transitive_reflexive_closure(),
    }
    let report = rel.validate();
    if !report.ok {
        let first = report.violations.first().map(ToString::to_string).unwrap_or_default();
        return Err(Error::InvalidRelation(format!(
            "{} violation(s); first: {first}",
            report.total
        )));
    }
    Ok(rel)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn relation_from_text(text: &str) -> Result<Relation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or_else(|| Error::Parse("empty relation file".into()))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::Parse(format!("line {ln}: expected the ground set size, found {first:?}")))?;
    let mut pairs = Vec::new();
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[i, j]) => pairs.push((i, j)),
            _ => return Err(Error::Parse(format!("line {ln}: expected \"i j\", found {line:?}"))),
        }
    }
    Relation::from_pairs(n, pairs)
}

fn get<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("{what}: missing \"{key}\"")))
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{what}: expected a positive integer, found {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array, found {v}")))
}

pub fn relation_from_json(v: &Value) -> Result<Relation> {
    let n = as_index(get(v, "n", "relation")?, "relation.n")?;
    let mut pairs = Vec::new();
    for (k, p) in as_array(get(v, "pairs", "relation")?, "relation.pairs")?.iter().enumerate() {
        let what = format!("relation.pairs[{k}]");
        match as_array(p, &what)?.as_slice() {
            [i, j] => pairs.push((as_index(i, &what)?, as_index(j, &what)?)),
            _ => return Err(Error::Parse(format!("{what}: expected [i, j]"))),
        }
    }
    Relation::from_pairs(n, pairs)
}

pub fn relation_to_json(rel: &Relation) -> Value {
    let pairs: Vec<Value> = rel.pairs_one_based().into_iter().map(|(i, j)| json!([i, j])).collect();
    json!({ "n": rel.n(), "pairs": pairs })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rational),
        Value::Object(o) if o.len() == 1 && o.contains_key("GF") => {
            let p = o["GF"]
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("field: bad modulus {}", o["GF"])))?;
            Field::prime(p)
        }
        _ => Err(Error::Parse(format!("field: expected \"Q\" or {{\"GF\": p}}, found {v}"))),
    }
}

pub fn field_to_json(field: Field) -> Value {
    match field {
        Field::Rational => json!("Q"),
        Field::Prime(p) => json!({ "GF": p }),
    }
}

pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(x) if x.is_i64() || x.is_u64() => field.parse(&x.to_string()),
        _ => Err(Error::Parse(format!("expected a {field} element, found {v}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(_) => json!(s.to_string()),
        Scalar::Prime { value, .. } => json!(value),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<DenseMatrix> {
    let field = field_from_json(get(v, "field", "matrix")?)?;
    let n = as_index(get(v, "n", "matrix")?, "matrix.n")?;
    let rows = as_array(get(v, "entries", "matrix")?, "matrix.entries")?;
    if rows.len() != n {
        return Err(Error::Parse(format!("matrix: {} rows for n = {n}", rows.len())));
    }
    let mut out = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let row = as_array(row, &format!("matrix.entries[{r}]"))?;
        if row.len() != n {
            return Err(Error::Parse(format!("matrix row {}: {} entries for n = {n}", r + 1, row.len())));
        }
        out.push(row.iter().map(|x| scalar_from_json(field, x)).collect::<Result<Vec<_>>>()?);
    }
    DenseMatrix::from_rows(field, out)
}

pub fn matrix_to_json(m: &DenseMatrix) -> Value {
    let entries: Vec<Value> = m.to_rows().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect();
    json!({ "field": field_to_json(m.field()), "n": m.rows(), "entries": entries })
}

pub fn transitive_from_json(relation: Arc<Relation>, v: &Value) -> Result<TransitiveFn> {
    let field = field_from_json(get(v, "field", "transitive function")?)?;
    let mut overrides = Vec::new();
    for (k, item) in as_array(get(v, "values", "transitive function")?, "values")?.iter().enumerate() {
        let what = format!("values[{k}]");
        match as_array(item, &what)?.as_slice() {
            [i, j, x] => {
                let (i, j) = (as_index(i, &what)?, as_index(j, &what)?);
                if i == 0 || j == 0 || i > relation.n() || j > relation.n() {
                    return Err(Error::IndexOutOfRange { index: i.max(j).max(1), n: relation.n() });
                }
                overrides.push(((i - 1, j - 1), scalar_from_json(field, x)?));
            }
            _ => return Err(Error::Parse(format!("{what}: expected [i, j, value]"))),
        }
    }
    TransitiveFn::with_defaults(relation, field, overrides)
}

/// Lists the values different from 1.
pub fn transitive_to_json(g: &TransitiveFn) -> Value {
    let values: Vec<Value> = g
        .entries()
        .into_iter()
        .filter(|(_, v)| !v.is_one())
        .map(|((i, j), v)| json!([i + 1, j + 1, v.to_string()]))
        .collect();
    json!({ "field": field_to_json(g.field()), "values": values })
}

/// Reads an automorphism. `relation` is used when the file carries none;
/// when both are present they must agree.
pub fn automorphism_from_json(v: &Value, relation: Option<Arc<Relation>>) -> Result<AutomorphismSpec> {
    let embedded = match v.get("relation") {
        Some(r) => Some(complete(relation_from_json(r)?, Completion::Strict)?),
        None => None,
    };
    let relation = match (embedded, relation) {
        (Some(e), Some(r)) if e != *r => {
            return Err(Error::Mismatch("embedded relation differs from the relation file".into()))
        }
        (_, Some(r)) => r,
        (Some(e), None) => Arc::new(e),
        (None, None) => return Err(Error::Parse("automorphism: no relation given".into())),
    };

    if let Some(images) = v.get("images") {
        let field = field_from_json(get(v, "field", "automorphism")?)?;
        let mut map = BTreeMap::new();
        for (k, item) in as_array(images, "images")?.iter().enumerate() {
            let what = format!("images[{k}]");
            match as_array(item, &what)?.as_slice() {
                [i, j, m] => {
                    let (i, j) = (as_index(i, &what)?, as_index(j, &what)?);
                    if i == 0 || j == 0 {
                        return Err(Error::Parse(format!("{what}: indices are 1-based")));
                    }
                    if map.insert((i - 1, j - 1), matrix_from_json(m)?).is_some() {
                        return Err(Error::Parse(format!("{what}: duplicate image of E^{i},{j}")));
                    }
                }
                _ => return Err(Error::Parse(format!("{what}: expected [i, j, matrix]"))),
            }
        }
        return AutomorphismSpec::basis_images(relation, field, map);
    }

    let a = StructMatrix::new(Arc::clone(&relation), matrix_from_json(get(v, "A", "automorphism")?)?)?;
    let g = match v.get("g") {
        Some(g) => transitive_from_json(Arc::clone(&relation), g)?,
        None => TransitiveFn::one(Arc::clone(&relation), a.field()),
    };
    let tau = match v.get("tau") {
        Some(t) => {
            let images = as_array(t, "tau")?
                .iter()
                .map(|x| as_index(x, "tau"))
                .collect::<Result<Vec<_>>>()?;
            Permutation::from_one_based(&images)?
        }
        None => Permutation::identity(relation.n()),
    };
    AutomorphismSpec::factored(a, g, tau)
}

pub fn automorphism_to_json(phi: &AutomorphismSpec, with_relation: bool) -> Value {
    let mut out = match phi.form() {
        AutForm::Factored { a, g, tau } => json!({
            "A": matrix_to_json(a.dense()),
            "g": transitive_to_json(g),
            "tau": tau.images_one_based(),
        }),
        AutForm::BasisImages(map) => {
            let images: Vec<Value> =
                map.iter().map(|(&(i, j), m)| json!([i + 1, j + 1, matrix_to_json(m)])).collect();
            json!({ "field": field_to_json(phi.field()), "images": images })
        }
    };
    if with_relation {
        out["relation"] = relation_to_json(phi.relation());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn relation_formats_agree() {
        let json = r#"{"n": 3, "pairs": [[1,1],[2,2],[3,3],[1,3],[2,3]]}"#;
        let text = "3\n1 1\n2 2\n3 3\n# the two strict pairs\n1 3\n2 3\n";
        let a = parse_relation(json, Completion::Strict).unwrap();
        let b = parse_relation(text, Completion::Strict).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, examples::example2_block());
        assert_eq!(relation_from_json(&relation_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn completion_modes() {
        let bare = r#"{"n": 3, "pairs": [[1,2],[2,3]]}"#;
        assert!(matches!(parse_relation(bare, Completion::Strict), Err(Error::InvalidRelation(_))));
        assert!(matches!(parse_relation(bare, Completion::AddDiagonal), Err(Error::InvalidRelation(_))));
        let closed = parse_relation(bare, Completion::Close).unwrap();
        assert!(closed.contains(0, 2));
        let no_diag = r#"{"n": 2, "pairs": [[1,2]]}"#;
        assert_eq!(parse_relation(no_diag, Completion::AddDiagonal).unwrap().len(), 3);
    }

    #[test]
    fn parse_errors_name_positions() {
        let err = parse_relation_raw("3\n1 1\n1 x\n").unwrap_err();
        assert_eq!(err, Error::Parse("line 3: expected \"i j\", found \"1 x\"".into()));
        let err = parse_relation_raw("{\"n\": 3,\n \"pairs\": [1,}").unwrap_err();
        assert!(matches!(err, Error::Parse(m) if m.starts_with("line 2, column")));
        assert_eq!(parse_relation_raw("2\n1 3\n"), Err(Error::IndexOutOfRange { index: 3, n: 2 }));
    }

    #[test]
    fn matrix_round_trip() {
        for field in [Field::Rational, Field::Prime(7)] {
            let m = DenseMatrix::from_rows(
                field,
                vec![
                    vec![field.parse("1/2").unwrap(), field.from_i64(-3)],
                    vec![field.zero(), field.one()],
                ],
            )
            .unwrap();
            let v = matrix_to_json(&m);
            assert_eq!(matrix_from_json(&v).unwrap(), m);
        }
        let v = matrix_to_json(&DenseMatrix::from_i64(Field::Rational, &[&[1, 0], &[0, 1]]));
        assert_eq!(v["entries"][0][0], json!("1"));
    }

    #[test]
    fn transitive_one_liner() {
        let rel = Arc::new(examples::example3_block());
        let v = json!({"field": "Q", "values": [[1, 4, "2"]]});
        let g = transitive_from_json(Arc::clone(&rel), &v).unwrap();
        assert_eq!(g.get(0, 3), &Field::Rational.from_i64(2));
        assert!(g.get(0, 4).is_one());
        assert_eq!(transitive_to_json(&g), v);
    }

    #[test]
    fn automorphism_round_trip() {
        let rel = Arc::new(examples::example2_block());
        let q = Field::Rational;
        let mut a = StructMatrix::identity(Arc::clone(&rel), q);
        a.set(0, 2, q.from_i64(7)).unwrap();
        let phi = AutomorphismSpec::factored(a, TransitiveFn::one(Arc::clone(&rel), q), Permutation::transposition(3, 0, 1))
            .unwrap();
        for spec in [phi.clone(), phi.to_basis_images().unwrap()] {
            let v = automorphism_to_json(&spec, true);
            let back = automorphism_from_json(&v, None).unwrap();
            assert!(back.same_map(&spec).unwrap());
            assert_eq!(automorphism_to_json(&back, true), v);
        }
        let v = automorphism_to_json(&phi, false);
        assert!(automorphism_from_json(&v, None).is_err());
        assert!(automorphism_from_json(&v, Some(Arc::new(examples::example2()))).is_err());
    }
}
