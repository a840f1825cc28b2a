//! Group specification files (TOML):
//!
//! ```toml
//! characteristic = 0
//! variables = ["t"]
//!
//! [[generator]]
//! label = "a"
//! matrix = [["1", "t"], ["0", "1"]]
//!
//! [budget]          # optional overrides
//! modulus = 13
//! ```

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::ParseError;
use crate::group::GroupSpec;
use crate::matrix::FieldMatrix;
use crate::parse::parse_entry;
use crate::ring::Characteristic;

/// A parsed spec file.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub spec: GroupSpec,
    /// Budget overrides from the file, as "key=value,..." text.
    pub budget_overrides: String,
}

fn file_err(msg: impl Into<String>) -> ParseError {
    ParseError::File(msg.into())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses spec-file text.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| file_err(format!("TOML: {}", e.message())))?;
    for key in table.keys() {
        if !matches!(key.as_str(), "characteristic" | "variables" | "generator" | "budget") {
            return Err(file_err(format!("unknown key {key:?}")));
        }
    }
    let characteristic = match table.get("characteristic") {
        Some(toml::Value::Integer(c)) => Characteristic::from_int(&BigInt::from(*c))?,
        Some(toml::Value::String(s)) => {
            let c: BigInt = s.trim().parse().map_err(|_| file_err(format!("bad characteristic {s:?}")))?;
            Characteristic::from_int(&c)?
        }
        Some(_) => return Err(file_err("characteristic must be an integer")),
        None => return Err(file_err("missing characteristic")),
    };
    let variables: Vec<String> = match table.get("variables") {
        None => Vec::new(),
        Some(toml::Value::Array(items)) => items
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| file_err("variables must be strings")))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(file_err("variables must be an array of strings")),
    };
    for (i, v) in variables.iter().enumerate() {
        if !is_identifier(v) {
            return Err(file_err(format!("bad variable name {v:?}")));
        }
        if variables[..i].contains(v) {
            return Err(file_err(format!("duplicate variable {v:?}")));
        }
    }
    let gens = match table.get("generator") {
        Some(toml::Value::Array(items)) => items,
        _ => return Err(file_err("missing [[generator]] entries")),
    };
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        let g = g.as_table().ok_or_else(|| file_err("generator must be a table"))?;
        let label = g
            .get("label")
            .and_then(toml::Value::as_str)
            .ok_or_else(|| file_err("generator needs a string label"))?
            .to_string();
        let rows = g
            .get("matrix")
            .and_then(toml::Value::as_array)
            .ok_or_else(|| file_err(format!("generator {label}: matrix must be an array of rows")))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| file_err(format!("generator {label}: row {i} is not an array")))?;
            if row.len() != rows.len() {
                return Err(file_err(format!("generator {label}: matrix is not square")));
            }
            let mut out = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                let text = match cell {
                    toml::Value::String(s) => s.clone(),
                    toml::Value::Integer(n) => n.to_string(),
                    _ => return Err(file_err(format!("generator {label}: entry ({i}, {j}) must be a string"))),
                };
                let value = parse_entry(&text, &characteristic, &variables)
                    .map_err(|e| file_err(format!("generator {label}: entry ({i}, {j}): {e}")))?;
                out.push(value);
            }
            parsed.push(out);
        }
        let m = FieldMatrix::from_rows(parsed).map_err(|e| file_err(format!("generator {label}: {e}")))?;
        generators.push((label, m));
    }
    let spec = GroupSpec::new(characteristic, variables, generators)?;
    let budget_overrides = match table.get("budget") {
        None => String::new(),
        Some(toml::Value::Table(t)) => t
            .iter()
            .map(|(k, v)| match v {
                toml::Value::Integer(n) => Ok(format!("{k}={n}")),
                _ => Err(file_err(format!("budget {k} must be an integer"))),
            })
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        Some(_) => return Err(file_err("budget must be a table")),
    };
    Ok(SpecFile { spec, budget_overrides })
}

/// Reads and parses a spec file from disk.
pub fn load_spec(path: &std::path::Path) -> Result<SpecFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| file_err(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

/// SHA-256 of the canonical text of a group, hex encoded. Formatting
/// differences in the source file do not change it.
pub fn fingerprint(spec: &GroupSpec) -> String {
    hex::encode(Sha256::digest(spec.canonical_text().as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SANOV: &str = r#"
characteristic = 0
variables = ["t"]

[[generator]]
label = "a"
matrix = [["1", "t"], ["0", "1"]]

[[generator]]
label = "b"
matrix = [["1", "0"], ["t", "1"]]
"#;

    #[test]
    fn parses_and_fingerprints() {
        let f = parse_spec(SANOV).unwrap();
        assert_eq!(f.spec.num_generators(), 2);
        assert_eq!(f.budget_overrides, "");
        let spaced = SANOV.replace("variables = [\"t\"]", "variables   =   [ \"t\" ]").replace("[\"1\", \"t\"]", "[\"1\",\"t*1\"]");
        let g = parse_spec(&spaced).unwrap();
        assert_eq!(fingerprint(&f.spec), fingerprint(&g.spec));
        assert_eq!(fingerprint(&f.spec).len(), 64);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_spec("characteristic = 4\n[[generator]]\nlabel=\"a\"\nmatrix=[[\"1\"]]"), Err(ParseError::Algebra(_))));
        assert!(parse_spec("characteristic = 0").is_err());
        let nonsquare = "characteristic = 0\n[[generator]]\nlabel=\"a\"\nmatrix=[[\"1\",\"0\"]]";
        assert!(matches!(parse_spec(nonsquare), Err(ParseError::File(_))));
        let singular = "characteristic = 0\n[[generator]]\nlabel=\"a\"\nmatrix=[[\"0\"]]";
        assert!(matches!(parse_spec(singular), Err(ParseError::Group(_))));
    }

    #[test]
    fn budget_table() {
        let text = format!("{SANOV}\n[budget]\nmodulus = 7\nball = 100\n");
        let f = parse_spec(&text).unwrap();
        assert_eq!(f.budget_overrides, "ball=100,modulus=7");
    }
}
