//! Empirical checks of the `R`-to-`Q` transfer: if most edges between `X`
//! and `Y` are in `R`, then most are also in `Q`.

use serde::{Deserialize, Serialize};

use super::classify::{EdgeClassParams, EdgeClassifier};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::derive_seed;
use crate::regularity::{is_dense_pair, strictly_above, strictly_below, Mode};

/// Inputs of a transfer check besides the classification parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferParams {
    pub mu: f64,
    /// Denseness parameter for the `(A, B)` hypothesis.
    pub eps: f64,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub hypotheses: Vec<Hypothesis>,
    pub hypotheses_met: bool,
    pub edges: u64,
    pub in_r: u64,
    pub in_q: u64,
    pub in_r_and_q: u64,
    pub fraction_r: f64,
    pub fraction_q: f64,
    /// True when `fraction_r ≥ 1 − μ`, i.e. the conclusion is not vacuous.
    pub applicable: bool,
    /// `fraction_q ≥ 1 − 2μ`, or true when not applicable.
    pub implication_holds: bool,
}

fn hyp(name: &str, holds: bool, detail: String) -> Hypothesis {
    Hypothesis {
        name: name.to_string(),
        holds,
        detail,
    }
}

fn disjoint_and_sized(
    x: &VertexSet,
    y: &VertexSet,
    min: f64,
    h: &Graph,
    alpha: f64,
    p: f64,
) -> Vec<Hypothesis> {
    let e = h.edge_count_between(x, y) as f64;
    let floor = alpha / 2.0 * p * x.len() as f64 * y.len() as f64;
    vec![
        hyp("X, Y disjoint", x.is_disjoint(y), String::new()),
        hyp(
            "X, Y large",
            !strictly_below(x.len().min(y.len()) as f64, min),
            format!("|X| = {}, |Y| = {}, floor {min}", x.len(), y.len()),
        ),
        hyp(
            "E(X, Y) dense",
            strictly_above(e, floor),
            format!("e(X, Y) = {e}, floor {floor}"),
        ),
    ]
}

fn dense_ab(
    h: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &EdgeClassParams,
    eps: f64,
) -> Result<Hypothesis> {
    if a.is_empty() || b.is_empty() {
        return Ok(hyp("(A, B) dense", false, "empty side".into()));
    }
    let v = is_dense_pair(
        h,
        a,
        b,
        eps,
        params.alpha,
        params.p,
        Mode::Sampled {
            trials: params.dense_trials,
            seed: derive_seed(params.seed, u64::MAX - 1),
        },
    )?;
    Ok(hyp(
        "(A, B) dense",
        v.holds(),
        format!("sampled, {} trials", v.trials_used),
    ))
}

#[allow(clippy::too_many_arguments)]
fn conclusion(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
    params: &EdgeClassParams,
    tp: &TransferParams,
    hypotheses: Vec<Hypothesis>,
) -> Result<TransferReport> {
    let edges: Vec<(usize, usize)> = x
        .iter()
        .flat_map(|w| {
            h.neighbours(w)
                .intersection(y)
                .iter()
                .map(move |z| (w, z))
                .collect::<Vec<_>>()
        })
        .collect();
    if edges.is_empty() {
        return Err(Error::EmptySet("E_H(X, Y)"));
    }
    let c = EdgeClassifier::new(
        h,
        a.clone(),
        b.clone(),
        EdgeClassParams {
            nu: tp.mu,
            ..*params
        },
    )?;
    let (mut in_r, mut in_q, mut both) = (0u64, 0u64, 0u64);
    for &(w, z) in &edges {
        let r = c.in_r(w, z)?;
        let q = c.in_q(w, z)?;
        in_r += r as u64;
        in_q += q as u64;
        both += (r && q) as u64;
    }
    let m = edges.len() as f64;
    let fraction_r = in_r as f64 / m;
    let fraction_q = in_q as f64 / m;
    let applicable = !strictly_below(fraction_r, 1.0 - tp.mu);
    let implication_holds = !applicable || !strictly_below(fraction_q, 1.0 - 2.0 * tp.mu);
    Ok(TransferReport {
        hypotheses_met: hypotheses.iter().all(|h| h.holds),
        hypotheses,
        edges: edges.len() as u64,
        in_r,
        in_q,
        in_r_and_q: both,
        fraction_r,
        fraction_q,
        applicable,
        implication_holds,
    })
}

fn validate(tp: &TransferParams) -> Result<()> {
    if !(tp.mu > 0.0 && tp.mu < 0.5) {
        return Err(Error::param(format!("mu = {} outside (0, 1/2)", tp.mu)));
    }
    if !(tp.eps > 0.0 && tp.eps < 1.0) || !(tp.eta > 0.0 && tp.eta < 1.0) {
        return Err(Error::param("eps and eta must lie in (0, 1)"));
    }
    Ok(())
}

/// Transfer check for `X`, `Y` inside host neighbourhoods. `g` is the host
/// `H ⊆ G` was taken from.
#[allow(clippy::too_many_arguments)]
pub fn check_neighbourhood_transfer(
    g: &Graph,
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
    params: &EdgeClassParams,
    tp: &TransferParams,
) -> Result<TransferReport> {
    validate(tp)?;
    let n = h.n();
    let common = |s: &VertexSet| {
        let mut c = VertexSet::full(n);
        for v in s.iter() {
            c = c.intersection(&g.neighbours(v));
        }
        c.first()
    };
    let (vx, vy) = (common(x), common(y));
    let mut hyps = vec![hyp(
        "X, Y inside host neighbourhoods",
        vx.is_some() && vy.is_some(),
        format!("centres {vx:?}, {vy:?}"),
    )];
    hyps.extend(disjoint_and_sized(
        x,
        y,
        tp.eta * params.p * n as f64,
        h,
        params.alpha,
        params.p,
    ));
    let (la, lb) = (a.len(), b.len());
    hyps.push(hyp(
        "A, B disjoint and balanced",
        a.is_disjoint(b)
            && !strictly_below(la as f64, tp.eta * n as f64)
            && la <= lb
            && lb <= 2 * la,
        format!("|A| = {la}, |B| = {lb}"),
    ));
    hyps.push(dense_ab(h, a, b, params, tp.eps)?);
    conclusion(h, x, y, a, b, params, tp, hyps)
}

/// Transfer check for linear-size `X`, `Y`.
pub fn check_linear_transfer(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
    params: &EdgeClassParams,
    tp: &TransferParams,
) -> Result<TransferReport> {
    validate(tp)?;
    let n = h.n() as f64;
    let mut hyps = disjoint_and_sized(x, y, tp.eta * n, h, params.alpha, params.p);
    hyps.push(hyp(
        "A, B disjoint and large",
        a.is_disjoint(b) && !strictly_below(a.len().min(b.len()) as f64, tp.eta * n),
        format!("|A| = {}, |B| = {}", a.len(), b.len()),
    ));
    hyps.push(dense_ab(h, a, b, params, tp.eps)?);
    conclusion(h, x, y, a, b, params, tp, hyps)
}
