//! Model and vector inputs. Every number is read as an exact rational from a
//! `"p/q"` or decimal string (JSON numbers are read from their source text).

use std::fmt;

use mb_core::pricing::Asset;
use mb_core::rational::{parse_rational, parse_rational_list};
use mb_core::{LatticeElement, LatticeVector, MarketModel, Rational};
use serde_json::{Map, Value};

/// A user input problem; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<mb_core::Error> for ConfigError {
    fn from(e: mb_core::Error) -> Self {
        Self(e.to_string())
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

fn rational(v: &Value, field: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(bad(format!("{field}: expected a number or \"p/q\" string"))),
    };
    parse_rational(&text).map_err(|_| bad(format!("{field}: cannot parse {text:?} as a rational")))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(bad(format!("{what}: unknown field {k:?}"))),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("{what}: missing field {key:?}")))
}

/// Parses a model document:
///
/// ```json
/// {"horizon": 1, "rate": "1", "strike": "100", "discount": false,
///  "assets": [{"s0": "100", "down": "1/2", "up": "2", "weight": "1"}]}
/// ```
///
/// `weight` and `discount` are optional. The model invariants are checked.
pub fn parse_model(text: &str) -> Result<MarketModel> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("model is not valid JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| bad("model must be a JSON object"))?;
    reject_unknown(obj, &["horizon", "rate", "strike", "discount", "assets"], "model")?;

    let horizon = required(obj, "horizon", "model")?
        .as_u64()
        .and_then(|h| usize::try_from(h).ok())
        .ok_or_else(|| bad("model.horizon: expected a nonnegative integer"))?;
    let rate = rational(required(obj, "rate", "model")?, "model.rate")?;
    let strike = rational(required(obj, "strike", "model")?, "model.strike")?;
    let discount = match obj.get("discount") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| bad("model.discount: expected true or false"))?,
    };
    let raw_assets = required(obj, "assets", "model")?
        .as_array()
        .ok_or_else(|| bad("model.assets: expected an array"))?;

    let mut assets = Vec::with_capacity(raw_assets.len());
    let mut weights = Vec::with_capacity(raw_assets.len());
    for (i, a) in raw_assets.iter().enumerate() {
        let what = format!("model.assets[{i}]");
        let a = a.as_object().ok_or_else(|| bad(format!("{what}: expected an object")))?;
        reject_unknown(a, &["s0", "down", "up", "weight"], &what)?;
        let field = |key: &str| -> Result<Rational> {
            rational(required(a, key, &what)?, &format!("{what}.{key}"))
        };
        assets.push(Asset {
            s0: field("s0")?,
            down: field("down")?,
            up: field("up")?,
        });
        weights.push(match a.get("weight") {
            Some(_) => field("weight")?,
            None => Rational::from_integer(1.into()),
        });
    }

    let model = MarketModel {
        horizon,
        rate,
        assets,
        strike,
        weights,
        discount,
    };
    model.validate()?;
    Ok(model)
}

pub fn parse_b(text: &str) -> Result<Vec<Rational>> {
    let b = parse_rational_list(text).map_err(|e| bad(format!("--b: {e}")))?;
    if b.is_empty() {
        return Err(bad("--b: expected at least one entry"));
    }
    mb_core::lattice::check_m(b.len())?;
    Ok(b)
}

/// Parses a density on `Λ`, either as all `2^m` entries in index order
/// (`"1/4,1/4,1/4,1/4"`) or as `element:weight` pairs with the rest zero
/// (`"11:1/2,00:1/2"`).
pub fn parse_density(text: &str, m: usize) -> Result<LatticeVector> {
    let text = text.trim();
    let q = if text.contains(':') {
        let mut q = LatticeVector::zeros(m)?;
        for pair in text.split(',') {
            let (key, value) = pair
                .split_once(':')
                .ok_or_else(|| bad(format!("--density: expected element:weight, found {pair:?}")))?;
            let lambda = LatticeElement::parse(key.trim())
                .map_err(|_| bad(format!("--density: {key:?} is not an element of {{0,1}}^{m}")))?;
            if lambda.m() != m {
                return Err(bad(format!("--density: {key:?} is not an element of {{0,1}}^{m}")));
            }
            let w = parse_rational(value).map_err(|e| bad(format!("--density: {e}")))?;
            let total = &q[lambda] + w;
            q.set(lambda, total);
        }
        q
    } else {
        let entries = parse_rational_list(text).map_err(|e| bad(format!("--density: {e}")))?;
        if entries.len() != 1 << m {
            return Err(bad(format!(
                "--density: expected {} entries for m = {m}, found {}",
                1usize << m,
                entries.len()
            )));
        }
        LatticeVector::new(m, entries)?
    };
    if !q.is_density() {
        return Err(bad("--density: entries must be nonnegative and sum to 1"));
    }
    Ok(q)
}
