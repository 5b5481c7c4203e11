use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest host size the calculator searches before giving up.
pub const WITNESS_N_LIMIT: u64 = 1_000_000_000_000_000_000;

/// A random host `G(N, c/n)` large enough for the embedding guarantee to
/// produce `G_{n,n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeRamseyWitness {
    pub n: u64,
    /// Constant `c` in `p = c/n`.
    pub c: f64,
    /// Constant `C` in the density floor `p ≥ C·(ln N / N)^{1/2}`.
    #[serde(rename = "C")]
    pub big_c: f64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub p: f64,
    pub expected_edges: f64,
}

/// Default `C = 7/δ³`, the heavy-vertex bound of the random-graph properties
/// read as a density constant.
pub fn default_density_constant(delta: f64) -> f64 {
    7.0 / delta.powi(3)
}

fn floor_at(big_c: f64, big_n: u64) -> f64 {
    let x = big_n as f64;
    big_c * (x.ln() / x).sqrt()
}

/// Smallest `N ≥ 2` with `C·(ln N / N)^{1/2} ≤ c/n`, together with
/// `p = c/n` and the expected edge count `p·N(N−1)/2`.
pub fn size_ramsey_witness(n: u64, c: f64, big_c: f64) -> Result<SizeRamseyWitness> {
    if n < 2 {
        return Err(Error::param(format!(
            "grid side must be at least 2, got {n}"
        )));
    }
    if !(c.is_finite() && c > 0.0) || !(big_c.is_finite() && big_c > 0.0) {
        return Err(Error::param(format!(
            "constants must be positive and finite (c = {c}, C = {big_c})"
        )));
    }
    let p = c / n as f64;
    if p > 1.0 {
        return Err(Error::param(format!("p = c/n = {p} exceeds 1")));
    }
    let big_n = if floor_at(big_c, 2) <= p {
        2
    } else {
        // ln N / N is decreasing from N = 3 on
        if floor_at(big_c, WITNESS_N_LIMIT) > p {
            return Err(Error::TooLarge(format!(
                "no N up to {WITNESS_N_LIMIT} satisfies the density floor for n = {n}, c = {c}, C = {big_c}"
            )));
        }
        let (mut lo, mut hi) = (3u64, WITNESS_N_LIMIT);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if floor_at(big_c, mid) <= p {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    };
    let x = big_n as f64;
    Ok(SizeRamseyWitness {
        n,
        c,
        big_c,
        big_n,
        p,
        expected_edges: p * x * (x - 1.0) / 2.0,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::param(
            "slope needs at least two points with positive coordinates",
        ));
    }
    let k = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("slope needs two distinct x values"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_n_is_tight() {
        let w = size_ramsey_witness(100, 0.6, 448.0).unwrap();
        assert!(floor_at(448.0, w.big_n) <= w.p);
        assert!(floor_at(448.0, w.big_n - 1) > w.p);
    }

    #[test]
    fn degenerate_constants_give_floor() {
        let w = size_ramsey_witness(10, 100.0, 1.0).unwrap_err();
        assert!(matches!(w, Error::InvalidParameter(_)));
        let w = size_ramsey_witness(10, 10.0, 1.0).unwrap();
        assert_eq!(w.big_n, 2);
    }

    #[test]
    fn impossible_constants_error() {
        assert!(matches!(
            size_ramsey_witness(1000, 1e-12, 1e6),
            Err(Error::TooLarge(_))
        ));
    }
}
