//! Text form of variable assignments: `name=value` pairs joined by commas,
//! sorted by name, values in decimal.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::BuchiError;

pub fn format_env(env: &BTreeMap<String, BigUint>) -> String {
    env.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_env(text: &str) -> Result<BTreeMap<String, BigUint>, BuchiError> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| BuchiError::Params(format!("expected name=value, got {part}")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(BuchiError::Params(format!("empty name in {part}")));
        }
        let v: BigUint = v
            .trim()
            .parse()
            .map_err(|_| BuchiError::Params(format!("bad value in {part}")))?;
        if out.insert(k.to_string(), v).is_some() {
            return Err(BuchiError::Params(format!("{k} assigned twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let e = parse_env("x=3, F=128,u1=0").unwrap();
        assert_eq!(format_env(&e), "F=128,u1=0,x=3");
        assert_eq!(parse_env(&format_env(&e)).unwrap(), e);
        assert!(parse_env("x").is_err());
        assert!(parse_env("x=1,x=2").is_err());
        assert!(parse_env("x=-1").is_err());
        assert!(parse_env("").unwrap().is_empty());
    }
}
