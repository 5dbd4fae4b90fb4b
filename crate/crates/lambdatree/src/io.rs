//! JSON encodings shared by the library and the command-line front end.

use serde_json::{json, Value};

use crate::valued_field::{Coord, FieldError, Val};

/// Additive vector as a JSON array; integral coordinates become numbers and
/// fractional ones strings such as `"1/2"`.
pub fn val_to_json(v: &Val) -> Value {
    if v.is_bottom() {
        return json!("inf");
    }
    Value::Array(
        v.coords()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    json!(c.to_integer())
                } else {
                    json!(format!("{}/{}", c.numer(), c.denom()))
                }
            })
            .collect(),
    )
}

fn coord_from_json(v: &Value) -> Option<Coord> {
    match v {
        Value::Number(n) => n.as_i64().map(Coord::from_integer),
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => {
                let d: i64 = b.trim().parse().ok()?;
                (d != 0).then_some(Coord::new(a.trim().parse().ok()?, d))
            }
            None => s.trim().parse().ok().map(Coord::from_integer),
        },
        _ => None,
    }
}

pub fn val_from_json(v: &Value, rank: usize) -> Result<Val, FieldError> {
    let bad = || FieldError::Parse(v.to_string());
    let items = v.as_array().ok_or_else(bad)?;
    if items.len() != rank {
        return Err(bad());
    }
    let coords = items
        .iter()
        .map(coord_from_json)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Ok(Val::new(coords))
}

/// Parse the `"[k]"` / `"[k,m]"` precision flag syntax.
pub fn val_from_str(s: &str, rank: usize) -> Result<Val, FieldError> {
    let v: Value = serde_json::from_str(s).map_err(|_| FieldError::Parse(s.to_string()))?;
    val_from_json(&v, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn val_json_round_trip() {
        let v = Val::new(vec![Coord::new(1, 2), Coord::from_integer(-3)]);
        let j = val_to_json(&v);
        assert_eq!(j, json!(["1/2", -3]));
        assert_eq!(val_from_json(&j, 2).unwrap(), v);
        assert_eq!(val_from_str("[4]", 1).unwrap(), Val::from_ints(&[4]));
        assert!(val_from_str("[4]", 2).is_err());
    }
}
