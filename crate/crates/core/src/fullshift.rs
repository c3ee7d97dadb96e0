//! The full shift on `k` symbols over `Z+^N` with a single-site potential,
//! where pressure and the equilibrium measure are known in closed form.

use crate::error::{domain, Error, Result};
use crate::lattice::LatticePoint;
use crate::topological::log_sum_exp;

#[derive(Clone, Debug, PartialEq)]
pub struct FullShift {
    dim: usize,
    phi: Vec<f64>,
}

impl FullShift {
    pub fn new(dim: usize, phi: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("dimension must be at least 1"));
        }
        if phi.is_empty() {
            return Err(domain("need at least one symbol"));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(domain("site potential must be finite"));
        }
        Ok(FullShift { dim, phi })
    }

    pub fn symbols(&self) -> usize {
        self.phi.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
}

/// `ln sum_i e^{phi(i)}`.
pub fn exact_pressure(spec: &FullShift) -> f64 {
    log_sum_exp(&spec.phi)
}

/// Sum over all configurations on `[0, n)` of `e^{sum of phi}`, by enumeration.
pub fn cylinder_sum(spec: &FullShift, n: &LatticePoint, budget: u64) -> Result<f64> {
    if n.dim() != spec.dim {
        return Err(Error::Dimension {
            expected: spec.dim,
            got: n.dim(),
        });
    }
    let sites = n.lambda()?;
    let k = spec.symbols() as u64;
    let configs = (0..sites).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&c| c <= budget));
    let Some(configs) = configs else {
        return Err(Error::Budget {
            what: "cylinder configurations",
            needed: k.saturating_pow(sites.min(u32::MAX as u64) as u32),
            limit: budget,
        });
    };
    let sites = sites as usize;
    let mut word = vec![0usize; sites];
    let mut total = 0.0;
    for _ in 0..configs {
        let s: f64 = word.iter().map(|&i| spec.phi[i]).sum();
        total += s.exp();
        for digit in word.iter_mut() {
            *digit += 1;
            if *digit < spec.symbols() {
                break;
            }
            *digit = 0;
        }
    }
    Ok(total)
}

fn check_probability(spec: &FullShift, p: &[f64]) -> Result<()> {
    if p.len() != spec.symbols() {
        return Err(domain("probability vector has the wrong length"));
    }
    if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(domain("probabilities must be non-negative"));
    }
    if (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(domain("probabilities must sum to one"));
    }
    Ok(())
}

/// Entropy plus integral for the product measure with marginal `p`.
pub fn bernoulli_pressure(spec: &FullShift, p: &[f64]) -> Result<f64> {
    check_probability(spec, p)?;
    Ok(p.iter()
        .zip(&spec.phi)
        .map(|(&q, &v)| if q > 0.0 { q * (v - q.ln()) } else { 0.0 })
        .sum())
}

/// `p*_i` proportional to `e^{phi(i)}`, with its pressure.
pub fn gibbs_optimizer(spec: &FullShift) -> (Vec<f64>, f64) {
    let z = exact_pressure(spec);
    let p: Vec<f64> = spec.phi.iter().map(|v| (v - z).exp()).collect();
    let s: f64 = p.iter().sum();
    let p: Vec<f64> = p.iter().map(|x| x / s).collect();
    let value = bernoulli_pressure(spec, &p).expect("normalized by construction");
    (p, value)
}
