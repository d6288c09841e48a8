//! JSON forms of vectors:
//! `{"space":"Z","entries":[{"point":3,"re":1.0,"im":0.0}]}` on discrete
//! groups and `{"space":"R","pieces":[{"anchor":6,"lo":0.0,"hi":0.5,"re":1.0,"im":0.0}]}`
//! on the real line. Entries come out in canonical point order and keys in
//! alphabetical order, so serialization is canonical.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupPoint, RealInterval, Space, StepPiece, SupportedVec};

fn space_name(space: Space) -> String {
    match space {
        Space::Z => "Z".into(),
        Space::Zd(d) => format!("Z{d}"),
        Space::R => "R".into(),
    }
}

pub fn parse_space(s: &str) -> Result<Space> {
    match s {
        "Z" => Ok(Space::Z),
        "R" => Ok(Space::R),
        _ => s
            .strip_prefix('Z')
            .and_then(|d| d.trim_start_matches('^').parse::<usize>().ok())
            .filter(|d| *d >= 1)
            .map(Space::Zd)
            .ok_or_else(|| Error::parse("space", format!("unknown space {s:?}"))),
    }
}

pub fn vector_to_json(f: &SupportedVec) -> Value {
    match f {
        SupportedVec::Discrete { space, .. } => json!({
            "space": space_name(*space),
            "entries": f.entries().map(|(p, c)| json!({"point": p, "re": c.re, "im": c.im})).collect::<Vec<_>>(),
        }),
        SupportedVec::Step(pieces) => json!({
            "space": "R",
            "pieces": pieces.iter().map(|p| json!({
                "anchor": p.interval.anchor,
                "lo": p.interval.lo,
                "hi": p.interval.hi,
                "re": p.coeff.re,
                "im": p.coeff.im,
            })).collect::<Vec<_>>(),
        }),
    }
}

fn number(v: &Value, field: &str) -> Result<f64> {
    match v.get(field.rsplit('.').next().unwrap_or(field)) {
        None => Ok(0.0),
        Some(x) => x
            .as_f64()
            .ok_or_else(|| Error::parse(field, "expected a number")),
    }
}

pub fn vector_from_json(v: &Value) -> Result<SupportedVec> {
    let space = parse_space(
        v.get("space")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("space", "expected a string"))?,
    )?;
    if space == Space::R {
        let pieces = v
            .get("pieces")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("pieces", "expected an array"))?;
        let pieces = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let f = |name: &str| format!("pieces[{i}].{name}");
                let anchor = p
                    .get("anchor")
                    .map(|a| a.as_i64().ok_or_else(|| Error::parse(f("anchor"), "expected an integer")))
                    .transpose()?
                    .unwrap_or(0);
                let lo = p
                    .get("lo")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::parse(f("lo"), "expected a number"))?;
                let hi = p
                    .get("hi")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::parse(f("hi"), "expected a number"))?;
                Ok(StepPiece {
                    interval: RealInterval::new(anchor, lo, hi)
                        .map_err(|e| Error::parse(f("hi"), e.to_string()))?,
                    coeff: Complex64::new(number(p, &f("re"))?, number(p, &f("im"))?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return SupportedVec::step(pieces);
    }
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("entries", "expected an array"))?;
    let items = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("entries[{i}].point");
            let point: GroupPoint = serde_json::from_value(
                e.get("point").cloned().ok_or_else(|| Error::parse(&field, "missing"))?,
            )
            .map_err(|err| Error::parse(&field, err.to_string()))?;
            if point.space() != space {
                return Err(Error::parse(field, format!("point is not in {space}")));
            }
            Ok((
                point,
                Complex64::new(
                    number(e, &format!("entries[{i}].re"))?,
                    number(e, &format!("entries[{i}].im"))?,
                ),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SupportedVec::from_entries(space, items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_vector_json_is_stable() {
        let text = r#"{"entries":[{"im":0.0,"point":-1,"re":0.5},{"im":-2.0,"point":3,"re":1.0}],"space":"Z"}"#;
        let f = vector_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&vector_to_json(&f)).unwrap(), text);
    }

    #[test]
    fn wrong_point_dimension_names_the_field() {
        let v = json!({"space": "Z2", "entries": [{"point": 3, "re": 1.0}]});
        match vector_from_json(&v) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "entries[0].point"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_vector_reads_pieces() {
        let v = json!({"space": "R", "pieces": [{"anchor": 6, "lo": 0.0, "hi": 0.5, "re": 2.0}]});
        let f = vector_from_json(&v).unwrap();
        assert_eq!(f.value_at(&GroupPoint::anchored(6, 0.25)), Complex64::new(2.0, 0.0));
    }
}
