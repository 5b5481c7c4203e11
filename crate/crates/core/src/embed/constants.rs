use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regularity::REL_TOL;

/// Keys that pin a chain constant.
pub const CHAIN_KEYS: [&str; 12] = [
    "alpha",
    "mu",
    "eps_prime",
    "gamma",
    "eps",
    "K",
    "t0",
    "eta",
    "delta",
    "delta_prime",
    "c",
    "nu",
];

/// Keys with no computable default; they only take effect when given.
pub const OVERRIDE_ONLY_KEYS: [&str; 14] = [
    "eps1", "eps2", "eps3", "T0", "lambda", "N0", "L", "beta", "eps0", "C", "C1", "C2", "C3", "C4",
];

/// Number of partition classes assumed when computing `η = 1/(2 T0)` and
/// `T0` is not given.
pub const DEFAULT_T0: f64 = 64.0;

/// Named override sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// No overrides: the chain as derived from `α′`.
    Paper,
    /// Constants that give a nontrivial target side length at `n` in the
    /// tens of thousands.
    Desk,
}

impl Preset {
    pub fn overrides(self) -> BTreeMap<String, f64> {
        match self {
            Preset::Paper => BTreeMap::new(),
            Preset::Desk => [
                ("alpha", 0.3),
                ("mu", 0.1),
                ("eps_prime", 0.25),
                ("gamma", 0.05),
                ("eps", 0.25),
                ("t0", 4.0),
                ("eta", 0.1),
                ("delta", 0.25),
                ("c", 0.6),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            _ => Err(Error::param(format!("unknown preset {s:?} (paper, desk)"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Paper => "paper",
            Preset::Desk => "desk",
        })
    }
}

/// The embedding constants, derived from `α′` and `p` with overrides
/// applied at each step (so an overridden constant feeds the ones after it).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantChain {
    pub alpha_prime: f64,
    pub alpha: f64,
    pub mu: f64,
    /// Allowed non-`R` fraction for `Q`; equal to `μ` unless overridden.
    pub nu: f64,
    pub eps_prime: f64,
    pub gamma: f64,
    pub eps: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub t0: f64,
    pub eta: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub c: f64,
    pub p: f64,
    pub s_target: u64,
    pub overrides: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl ConstantChain {
    /// An override-only constant, if given.
    pub fn extra(&self, key: &str) -> Option<f64> {
        self.overrides.get(key).copied()
    }
}

fn in_unit(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::param(format!("{key} = {v} outside (0, 1)")))
    }
}

fn check_override(key: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::param(format!("{key} = {v} is not finite")));
    }
    match key {
        "K" => {
            if v <= 1.0 {
                return Err(Error::param(format!("K = {v} must exceed 1")));
            }
        }
        "t0" | "T0" | "N0" | "L" | "C" | "C1" | "C2" | "C3" | "C4" => {
            if v <= 0.0 {
                return Err(Error::param(format!("{key} = {v} must be positive")));
            }
        }
        _ if CHAIN_KEYS.contains(&key) || OVERRIDE_ONLY_KEYS.contains(&key) => {
            in_unit(key, v)?;
        }
        _ => return Err(Error::param(format!("unknown constant {key:?}"))),
    }
    Ok(())
}

/// Parses `key=value`, rejecting unknown keys.
pub fn parse_override(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::param(format!("override {s:?} is not key=value")))?;
    let k = k.trim();
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::param(format!("override {k}: {v:?} is not a number")))?;
    check_override(k, v)?;
    Ok((k.to_string(), v))
}

/// Derives the constant chain for `α′` at density `p`.
pub fn resolve_constants(
    alpha_prime: f64,
    p: f64,
    overrides: &BTreeMap<String, f64>,
) -> Result<ConstantChain> {
    if !(alpha_prime > 0.0 && alpha_prime <= 1.0) {
        return Err(Error::param(format!(
            "alpha' = {alpha_prime} outside (0, 1]"
        )));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("p = {p} outside (0, 1]")));
    }
    for (k, &v) in overrides {
        check_override(k, v)?;
    }
    let pick = |key: &str, derived: f64| overrides.get(key).copied().unwrap_or(derived);

    let alpha = pick("alpha", alpha_prime / 20.0);
    let mu = pick("mu", alpha / 100.0);
    let nu = pick("nu", mu);
    let eps_prime = pick("eps_prime", (alpha / 4.0).min(0.5));
    let gamma = pick("gamma", alpha * mu / 8.0);
    let component_eps = ["eps1", "eps2", "eps3"]
        .iter()
        .filter_map(|k| overrides.get(*k).copied())
        .fold(f64::INFINITY, f64::min);
    let eps = pick("eps", component_eps.min(alpha / 3.0).min(0.25));
    let k = pick("K", 2.0);
    let t0 = pick("t0", 2.0 / alpha);
    let big_t0 = overrides
        .get("T0")
        .copied()
        .unwrap_or(DEFAULT_T0.max(t0.ceil()));
    let eta = pick("eta", 1.0 / (2.0 * big_t0));
    let delta = pick("delta", (0.1f64).min(mu * alpha.powi(3) * eta * eta));
    let mut delta_prime = eps * alpha * delta * eta;
    if let Some(l) = overrides.get("lambda") {
        delta_prime = delta_prime.min(*l);
    }
    let delta_prime = pick("delta_prime", delta_prime);
    let c = pick("c", delta * alpha * eta / 16.0);

    for (key, v) in [
        ("alpha", alpha),
        ("mu", mu),
        ("nu", nu),
        ("eps_prime", eps_prime),
        ("gamma", gamma),
        ("eps", eps),
        ("eta", eta),
        ("delta", delta),
        ("delta_prime", delta_prime),
        ("c", c),
    ] {
        in_unit(key, v)?;
    }
    if eps_prime > alpha {
        return Err(Error::param(format!(
            "eps' = {eps_prime} exceeds alpha = {alpha}"
        )));
    }
    // c/p can land just below an integer in floating point
    let s_target = (c / p * (1.0 + REL_TOL)).floor() as u64;
    let mut warnings = Vec::new();
    if s_target < 2 {
        warnings.push(format!(
            "target side length floor(c/p) = {s_target} is below 2 (c = {c}, p = {p}); use overrides or the desk preset"
        ));
    }
    Ok(ConstantChain {
        alpha_prime,
        alpha,
        mu,
        nu,
        eps_prime,
        gamma,
        eps,
        k,
        t0,
        eta,
        delta,
        delta_prime,
        c,
        p,
        s_target,
        overrides: overrides.clone(),
        warnings,
    })
}

/// Resolves a preset, then applies `overrides` on top of it.
pub fn resolve_preset(
    preset: Preset,
    alpha_prime: f64,
    p: f64,
    overrides: &BTreeMap<String, f64>,
) -> Result<ConstantChain> {
    let mut all = preset.overrides();
    all.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
    resolve_constants(alpha_prime, p, &all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_override_rejected() {
        let e = parse_override("zeta=1").unwrap_err().to_string();
        assert!(e.contains("unknown constant \"zeta\""), "{e}");
        assert!(parse_override("alpha").is_err());
        assert!(parse_override("alpha=x").is_err());
        assert!(parse_override("alpha=1.5").is_err());
        assert_eq!(
            parse_override("eta = 0.5").unwrap(),
            ("eta".to_string(), 0.5)
        );
    }

    #[test]
    fn low_target_warns() {
        let c = resolve_constants(0.5, 0.1, &BTreeMap::new()).unwrap();
        assert_eq!(c.s_target, 0);
        assert_eq!(c.warnings.len(), 1);
        let d = resolve_preset(Preset::Desk, 0.5, 0.05, &BTreeMap::new()).unwrap();
        assert_eq!(d.s_target, 12);
        assert!(d.warnings.is_empty());
    }
}
