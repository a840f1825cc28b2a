//! Serialization: witness files (JSON with sorted keys, big integers as
//! decimal strings) and profile CSV.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{ExtField, ExtFieldElem};
use crate::group::GroupSpec;
use crate::multipoly::ExponentMethod;
use crate::parse::parse_entry;
use crate::profiler::{FarbProfile, ProfileRow};
use crate::ring::Characteristic;
use crate::specfile::fingerprint;
use crate::unipoly::UniPoly;
use crate::witness::{FieldHom, HomProvenance, ImageOrder, RejectReason, WitnessRecord};

pub const WITNESS_FORMAT: &str = "resfin-witness-1";

pub const PROFILE_HEADER: &str = "n,ball_size,max_gl_bound,max_image_order,max_d_reduction,exhaustive_flag";

/// Failure to read a witness file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessLoadError {
    #[error("malformed witness file: {0}")]
    Malformed(String),
    #[error("witness rejected: {0}")]
    Rejected(RejectReason),
}

fn coeff_strings(coeffs: &[BigInt]) -> Value {
    Value::Array(coeffs.iter().map(|c| Value::String(c.to_string())).collect())
}

fn provenance_json(p: &HomProvenance) -> Value {
    match p {
        HomProvenance::LemmaA { exponents, method, g_degree, max_coeff, point, value } => json!({
            "kind": p.kind(),
            "exponents": exponents,
            "method": method.as_str(),
            "g_degree": g_degree,
            "max_coeff": max_coeff.to_string(),
            "point": point,
            "value": value.to_string(),
        }),
        HomProvenance::LemmaB { exponents, method, g_degree, count_rule_degree } => json!({
            "kind": p.kind(),
            "exponents": exponents,
            "method": method.as_str(),
            "g_degree": g_degree,
            "count_rule_degree": count_rule_degree,
        }),
        HomProvenance::Constant | HomProvenance::Explicit => json!({ "kind": p.kind() }),
    }
}

/// Serializes a witness record, embedding the group's fingerprint.
pub fn witness_to_json(spec: &GroupSpec, record: &WitnessRecord) -> String {
    let hom = &record.hom;
    let field = hom.field();
    let value = json!({
        "format": WITNESS_FORMAT,
        "spec_fingerprint": fingerprint(spec),
        "word": record.word.render(spec),
        "word_length": record.word_length,
        "entry": [record.entry.0, record.entry.1],
        "target": record.target.display_with(spec.variables()).to_string(),
        "field": {
            "characteristic": field.characteristic().to_string(),
            "modulus": coeff_strings(field.modulus().coeffs()),
            "order": field.order().to_string(),
        },
        "images": hom.images().iter().map(|x| coeff_strings(&x.coeffs())).collect::<Vec<_>>(),
        "provenance": provenance_json(hom.provenance()),
        "field_size": record.field_size.to_string(),
        "gl_bound": record.gl_bound.to_string(),
        "image_order": record.image_order.as_ref().map(|io| json!({
            "order": io.order.to_string(),
            "exact": io.exact,
        })),
        "verified": record.verified,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn malformed(msg: impl Into<String>) -> WitnessLoadError {
    WitnessLoadError::Malformed(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, WitnessLoadError> {
    v.get(key).ok_or_else(|| malformed(format!("missing {key:?}")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str, WitnessLoadError> {
    get(v, key)?.as_str().ok_or_else(|| malformed(format!("{key:?} must be a string")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64, WitnessLoadError> {
    get(v, key)?.as_u64().ok_or_else(|| malformed(format!("{key:?} must be a nonnegative integer")))
}

fn get_bool(v: &Value, key: &str) -> Result<bool, WitnessLoadError> {
    get(v, key)?.as_bool().ok_or_else(|| malformed(format!("{key:?} must be a boolean")))
}

fn parse_big<T: std::str::FromStr>(v: &Value, key: &str) -> Result<T, WitnessLoadError> {
    get_str(v, key)?.parse().map_err(|_| malformed(format!("{key:?} is not a decimal integer")))
}

fn parse_coeffs(v: &Value, what: &str) -> Result<Vec<BigInt>, WitnessLoadError> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{what} must be an array")))?
        .iter()
        .map(|c| c.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| malformed(format!("bad coefficient in {what}"))))
        .collect()
}

fn parse_exponents(v: &Value) -> Result<Vec<u64>, WitnessLoadError> {
    get(v, "exponents")?
        .as_array()
        .ok_or_else(|| malformed("exponents must be an array"))?
        .iter()
        .map(|e| e.as_u64().ok_or_else(|| malformed("bad exponent")))
        .collect()
}

fn parse_method(v: &Value) -> Result<ExponentMethod, WitnessLoadError> {
    match get_str(v, "method")? {
        "degree_recursion" => Ok(ExponentMethod::DegreeRecursion),
        "kronecker_fallback" => Ok(ExponentMethod::KroneckerFallback),
        other => Err(malformed(format!("unknown method {other:?}"))),
    }
}

fn parse_provenance(v: &Value) -> Result<HomProvenance, WitnessLoadError> {
    Ok(match get_str(v, "kind")? {
        "lemma_a" => HomProvenance::LemmaA {
            exponents: parse_exponents(v)?,
            method: parse_method(v)?,
            g_degree: get_u64(v, "g_degree")?,
            max_coeff: parse_big(v, "max_coeff")?,
            point: get_u64(v, "point")?,
            value: parse_big(v, "value")?,
        },
        "lemma_b" => HomProvenance::LemmaB {
            exponents: parse_exponents(v)?,
            method: parse_method(v)?,
            g_degree: get_u64(v, "g_degree")?,
            count_rule_degree: get_u64(v, "count_rule_degree")?,
        },
        "constant" => HomProvenance::Constant,
        "explicit" => HomProvenance::Explicit,
        other => return Err(malformed(format!("unknown provenance {other:?}"))),
    })
}

/// Reads a witness file for `spec`. The embedded fingerprint must match
/// and the field modulus must be irreducible; everything else is left to
/// [`crate::witness::verify_witness`].
pub fn witness_from_json(spec: &GroupSpec, text: &str) -> Result<WitnessRecord, WitnessLoadError> {
    let v: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    if get_str(&v, "format")? != WITNESS_FORMAT {
        return Err(malformed("unknown format"));
    }
    if get_str(&v, "spec_fingerprint")? != fingerprint(spec) {
        return Err(WitnessLoadError::Rejected(RejectReason::FingerprintMismatch));
    }
    let word = spec.parse_word(get_str(&v, "word")?).map_err(|_| WitnessLoadError::Rejected(RejectReason::BadWord))?;
    let word_length = get_u64(&v, "word_length")? as usize;
    let entry = get(&v, "entry")?
        .as_array()
        .filter(|a| a.len() == 2)
        .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
        .ok_or_else(|| malformed("entry must be a pair of indices"))?;
    let target = parse_entry(get_str(&v, "target")?, spec.characteristic(), spec.variables())
        .map_err(|e| malformed(format!("target: {e}")))?
        .as_polynomial()
        .ok_or_else(|| malformed("target is not a polynomial"))?;
    let fv = get(&v, "field")?;
    let p: BigInt = parse_big(fv, "characteristic")?;
    let ch = Characteristic::prime(p).map_err(|_| WitnessLoadError::Rejected(RejectReason::InvalidField))?;
    let modulus = UniPoly::new(ch.clone(), parse_coeffs(get(fv, "modulus")?, "modulus")?);
    let field = Arc::new(ExtField::new(modulus).map_err(|_| WitnessLoadError::Rejected(RejectReason::InvalidField))?);
    let images = get(&v, "images")?
        .as_array()
        .ok_or_else(|| malformed("images must be an array"))?
        .iter()
        .map(|x| {
            let poly = UniPoly::new(ch.clone(), parse_coeffs(x, "image")?);
            ExtFieldElem::from_poly(&field, &poly).map_err(|e| malformed(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let hom = FieldHom::new(field, images, parse_provenance(get(&v, "provenance")?)?);
    let image_order = match get(&v, "image_order")? {
        Value::Null => None,
        io => Some(ImageOrder { order: parse_big::<BigUint>(io, "order")?, exact: get_bool(io, "exact")? }),
    };
    Ok(WitnessRecord {
        word,
        word_length,
        entry,
        target,
        hom,
        field_size: parse_big(&v, "field_size")?,
        gl_bound: parse_big(&v, "gl_bound")?,
        image_order,
        verified: get_bool(&v, "verified")?,
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

/// Profile rows as CSV with [`PROFILE_HEADER`]; missing values are empty.
pub fn profile_to_csv(profile: &FarbProfile) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for ProfileRow { radius, ball_size, max_gl_bound, max_image_order, max_d_reduction, exhaustive } in &profile.rows {
        out.push_str(&format!(
            "{radius},{ball_size},{max_gl_bound},{max_image_order},{},{}\n",
            opt(max_d_reduction),
            opt(exhaustive)
        ));
    }
    out
}

/// Samples (n, F(n)) read from CSV for the threshold check, with whether
/// the data describe an infinite group.
///
/// Accepts "n,farb" tables (the integers; infinite) and profile tables,
/// where F(n) is max_d_reduction when present and max_image_order
/// otherwise, and the group counts as infinite while the ball is still
/// growing at the last radius.
pub fn threshold_samples_from_csv(text: &str) -> Result<(Vec<(u64, u64)>, bool), String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header: Vec<&str> = lines.next().ok_or("empty CSV")?.split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let n_col = col("n").ok_or("CSV needs an n column")?;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').map(str::trim).collect()).collect();
    let cell = |row: &Vec<&str>, c: usize| -> Result<u64, String> {
        row.get(c)
            .ok_or_else(|| "short CSV row".to_string())?
            .parse::<u64>()
            .map_err(|_| format!("bad number in CSV row {}", row.join(",")))
    };
    if let Some(f_col) = col("farb") {
        let samples = rows.iter().map(|r| Ok((cell(r, n_col)?, cell(r, f_col)?))).collect::<Result<_, String>>()?;
        return Ok((samples, true));
    }
    let (Some(ball), Some(order), Some(dred)) = (col("ball_size"), col("max_image_order"), col("max_d_reduction"))
    else {
        return Err("CSV is neither an n,farb table nor a profile".into());
    };
    let mut samples = Vec::with_capacity(rows.len());
    let mut sizes = Vec::with_capacity(rows.len());
    for r in &rows {
        let f = match r.get(dred) {
            Some(s) if !s.is_empty() => cell(r, dred)?,
            _ => cell(r, order)?,
        };
        samples.push((cell(r, n_col)?, f));
        sizes.push(cell(r, ball)?);
    }
    let infinite = sizes.len() >= 2 && sizes[sizes.len() - 1] > sizes[sizes.len() - 2];
    Ok((samples, infinite))
}
