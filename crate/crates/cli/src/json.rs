//! JSON documents for portraits and bound reports.
//!
//! Integers travel as decimal strings and points as `{"x": .., "y": ..}`.
//! Documents go through [`serde_json::Value`], whose maps are sorted, so
//! the key order is stable.

use num_bigint::BigInt;
use preperiodic::certify::{Bound, BoundCheck, BoundReport, BoundValue, SUnitCertificate};
use preperiodic::dynmap::RationalMap;
use preperiodic::families::ClaimReport;
use preperiodic::forms::BinaryForm;
use preperiodic::portrait::{self, Completeness, Counts, Portrait, TailPoint};
use preperiodic::ProjPoint;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad integer {0:?}")]
    Integer(String),
    #[error(transparent)]
    Core(#[from] preperiodic::Error),
    #[error("document disagrees with the recomputed map: {0}")]
    Mismatch(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub x: String,
    pub y: String,
}

/// `num` and `den` are the coefficients of the normalized forms `F` and `G`,
/// from `X^d` down to `Y^d`. `bad_primes` lists the finite bad primes; the
/// archimedean place is always in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub num: Vec<String>,
    pub den: Vec<String>,
    pub degree: usize,
    pub resultant: String,
    pub bad_primes: Vec<String>,
    pub bad_primes_complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resultant_cofactor: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailDoc {
    pub point: PointDoc,
    pub depth: usize,
    pub image: PointDoc,
    pub entry: PointDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDoc {
    pub per: usize,
    pub tail: usize,
    pub preper: usize,
    pub cycle_lengths: Vec<usize>,
    pub max_tail_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessDoc {
    pub n_max: usize,
    pub periodic_roots_complete: bool,
    pub preimage_roots_complete: bool,
    pub bad_primes_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitDoc {
    pub map: MapDoc,
    pub cycles: Vec<Vec<PointDoc>>,
    pub tails: Vec<TailDoc>,
    pub counts: CountsDoc,
    pub completeness: CompletenessDoc,
}

pub fn point_doc(p: &ProjPoint) -> PointDoc {
    PointDoc {
        x: p.x().to_string(),
        y: p.y().to_string(),
    }
}

fn int(s: &str) -> Result<BigInt, LoadError> {
    s.parse().map_err(|_| LoadError::Integer(s.to_string()))
}

fn point(d: &PointDoc) -> Result<ProjPoint, LoadError> {
    let p = ProjPoint::new(int(&d.x)?, int(&d.y)?)?;
    if p.x().to_string() != d.x || p.y().to_string() != d.y {
        return Err(LoadError::Mismatch("point not in lowest terms"));
    }
    Ok(p)
}

fn strings(f: &BinaryForm) -> Vec<String> {
    f.coeffs().iter().map(ToString::to_string).collect()
}

pub fn map_doc(map: &RationalMap) -> MapDoc {
    MapDoc {
        num: strings(map.f()),
        den: strings(map.g()),
        degree: map.degree(),
        resultant: map.resultant().to_string(),
        bad_primes: map.bad_primes().primes().map(ToString::to_string).collect(),
        bad_primes_complete: map.bad_primes_complete(),
        resultant_cofactor: map.res_cofactor().map(ToString::to_string),
    }
}

fn counts_doc(c: &Counts) -> CountsDoc {
    CountsDoc {
        per: c.per,
        tail: c.tail,
        preper: c.preper,
        cycle_lengths: c.cycle_lengths.clone(),
        max_tail_depth: c.max_tail_depth,
    }
}

pub fn portrait_doc(p: &Portrait) -> PortraitDoc {
    let c = &p.completeness;
    PortraitDoc {
        map: map_doc(&p.map),
        cycles: p.cycles.iter().map(|c| c.iter().map(point_doc).collect()).collect(),
        tails: p
            .tails
            .iter()
            .map(|t| TailDoc {
                point: point_doc(&t.point),
                depth: t.depth,
                image: point_doc(&t.image),
                entry: point_doc(&t.entry),
            })
            .collect(),
        counts: counts_doc(&p.counts()),
        completeness: CompletenessDoc {
            n_max: c.n_max,
            periodic_roots_complete: c.periodic_roots_complete,
            preimage_roots_complete: c.preimage_roots_complete,
            bad_primes_complete: c.bad_primes_complete,
        },
    }
}

fn load_map(d: &MapDoc) -> Result<RationalMap, LoadError> {
    let form = |v: &[String]| -> Result<BinaryForm, LoadError> {
        if v.is_empty() {
            return Err(LoadError::Mismatch("empty coefficient list"));
        }
        Ok(BinaryForm::new(v.iter().map(|s| int(s)).collect::<Result<_, _>>()?))
    };
    let map = RationalMap::from_forms(form(&d.num)?, form(&d.den)?)?;
    if map_doc(&map) != *d {
        return Err(LoadError::Mismatch("map fields"));
    }
    Ok(map)
}

/// Rebuild a portrait and check it: the map is recomputed from its forms and
/// every stored relation is verified against it.
pub fn load_portrait(doc: &PortraitDoc) -> Result<Portrait, LoadError> {
    let map = load_map(&doc.map)?;
    let cycles = doc
        .cycles
        .iter()
        .map(|c| c.iter().map(point).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let tails = doc
        .tails
        .iter()
        .map(|t| {
            Ok(TailPoint {
                point: point(&t.point)?,
                depth: t.depth,
                image: point(&t.image)?,
                entry: point(&t.entry)?,
            })
        })
        .collect::<Result<Vec<_>, LoadError>>()?;
    let c = &doc.completeness;
    let portrait = Portrait {
        map,
        cycles,
        tails,
        completeness: Completeness {
            n_max: c.n_max,
            periodic_roots_complete: c.periodic_roots_complete,
            preimage_roots_complete: c.preimage_roots_complete,
            bad_primes_complete: c.bad_primes_complete,
        },
    };
    portrait::verify(&portrait)?;
    if counts_doc(&portrait.counts()) != doc.counts {
        return Err(LoadError::Mismatch("counts"));
    }
    Ok(portrait)
}

pub fn portrait_from_json(text: &str) -> Result<Portrait, LoadError> {
    load_portrait(&serde_json::from_str(text)?)
}

/// Sorted-key serialization of any document.
pub fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

pub fn portrait_to_json(p: &Portrait) -> String {
    to_pretty(&to_value(&portrait_doc(p)))
}

pub fn claims_value(r: &ClaimReport) -> Value {
    serde_json::json!({
        "family": r.spec.family.to_string(),
        "d": r.spec.d,
        "all_pass": r.all_pass(),
        "claims": r.claims.iter().map(|c| serde_json::json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
    })
}

pub fn bound_value(v: &BoundValue) -> Value {
    match v {
        BoundValue::Exact(n) => serde_json::json!({"exact": n.to_string()}),
        BoundValue::Log2(x) => serde_json::json!({"log2": x}),
        BoundValue::Ln(s) => serde_json::json!({"ln": s}),
        BoundValue::Real(x) => serde_json::json!({"real": x}),
    }
}

fn bound_entry(b: &Bound, check: Option<&BoundCheck>) -> Value {
    let mut v = serde_json::json!({
        "name": b.name,
        "formula": b.formula,
        "quantity": b.quantity.to_string(),
        "hypothesis": b.hypothesis.to_string(),
        "value": bound_value(&b.value),
        "display": b.value.to_string(),
    });
    if let Some(c) = check {
        v["observed"] = c.observed.into();
        v["applies"] = c.applies.into();
        v["pass"] = c.pass.into();
    }
    v
}

pub fn bounds_value(r: &BoundReport, checks: &[BoundCheck]) -> Value {
    let entries: Vec<Value> = r
        .bounds
        .iter()
        .map(|b| bound_entry(b, checks.iter().find(|c| c.name == b.name)))
        .collect();
    serde_json::json!({"s": r.s, "d": r.d, "s_exact": r.s_exact, "bounds": entries})
}

pub fn certificate_value(c: &SUnitCertificate) -> Value {
    serde_json::json!({
        "tail_point": point_doc(&c.tail_point),
        "periodic_point": point_doc(&c.periodic_point),
        "cross_term": c.cross_term.to_string(),
        "excluded": c.excluded,
        "s_unit_ok": c.s_unit_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use preperiodic::portrait::build_portrait;
    use preperiodic::Rat;

    fn square() -> Portrait {
        let q = |n: i64| Rat::from_integer(n.into());
        let map = RationalMap::build(&[q(0), q(0), q(1)], &[Rat::one()]).unwrap();
        build_portrait(&map, 4).unwrap()
    }

    #[test]
    fn round_trip() {
        let p = square();
        let text = portrait_to_json(&p);
        assert_eq!(portrait_from_json(&text).unwrap(), p);
    }

    #[test]
    fn keys_are_sorted() {
        let text = portrait_to_json(&square());
        let c = text.find("\"completeness\"").unwrap();
        let m = text.find("\"map\"").unwrap();
        let t = text.find("\"tails\"").unwrap();
        assert!(c < m && m < t);
    }

    #[test]
    fn tampering_is_detected() {
        let text = portrait_to_json(&square());
        let mut doc: PortraitDoc = serde_json::from_str(&text).unwrap();
        doc.map.resultant = "2".into();
        assert!(load_portrait(&doc).is_err());
        let mut doc: PortraitDoc = serde_json::from_str(&text).unwrap();
        doc.tails[0].depth = 2;
        assert!(load_portrait(&doc).is_err());
        let mut doc: PortraitDoc = serde_json::from_str(&text).unwrap();
        doc.cycles.pop();
        assert!(load_portrait(&doc).is_err());
    }
}
