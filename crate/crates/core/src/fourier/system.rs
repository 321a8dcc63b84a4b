//! The chain system
//! `-d1^k phi_1 = mu_0`, `d2^l phi_j - d1^k phi_{j+1} = mu_j`, `d2^l phi_N = mu_N`.

use std::collections::BTreeSet;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exact::ExactComplex;

use super::trigpoly::TrigPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingProblem {
    pub k: u32,
    pub l: u32,
    /// `mu_0 .. mu_N`.
    pub mus: Vec<TrigPoly>,
}

impl EmbeddingProblem {
    /// Checks shape and properness of the right-hand sides.
    pub fn new(k: u32, l: u32, mus: Vec<TrigPoly>) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument("k and l must be positive".into()));
        }
        if mus.len() < 2 {
            return Err(Error::InvalidArgument("need N >= 1, i.e. at least two right-hand sides".into()));
        }
        if !mus.iter().all(TrigPoly::is_proper) {
            return Err(Error::NotProper);
        }
        Ok(EmbeddingProblem { k, l, mus })
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.mus.len() - 1
    }

    /// The right-hand sides produced by `phis`.
    pub fn forward(k: u32, l: u32, phis: &[TrigPoly]) -> Result<Self> {
        if phis.is_empty() {
            return Err(Error::InvalidArgument("need at least one unknown".into()));
        }
        if !phis.iter().all(TrigPoly::is_proper) {
            return Err(Error::NotProper);
        }
        let n = phis.len();
        let mut mus = vec![TrigPoly::zero(); n + 1];
        for (j, phi) in phis.iter().enumerate() {
            for (&(m, q), c) in phi.terms() {
                let u = ExactComplex::two_pi_i_pow(m, k);
                let v = ExactComplex::two_pi_i_pow(q, l);
                // phi_{j+1} enters mu_j with -d1^k and mu_{j+1} with d2^l
                mus[j].add_term(m, q, -(c * &u));
                mus[j + 1].add_term(m, q, c * &v);
            }
        }
        Self::new(k, l, mus)
    }

    fn support(&self) -> BTreeSet<(i64, i64)> {
        self.mus.iter().flat_map(|mu| mu.terms().map(|(k, _)| *k)).collect()
    }

    /// Compatibility sum at one frequency and the sum of its term moduli.
    fn compat_at(&self, m: i64, n: i64) -> (ExactComplex, f64) {
        let big_n = self.n() as u32;
        let mut acc = ExactComplex::zero();
        let mut scale = 0.0;
        for (j, mu) in self.mus.iter().enumerate() {
            let c = mu.coefficient(m, n);
            if c.is_zero() {
                continue;
            }
            let j = j as u32;
            let w = &ExactComplex::two_pi_i_pow(m, j * self.k) * &ExactComplex::two_pi_i_pow(n, (big_n - j) * self.l);
            let t = &w * &c;
            scale += t.abs();
            acc = &acc + &t;
        }
        (acc, scale)
    }

    /// Max over the joint support of `|sum_j (2 pi i m)^{jk} (2 pi i n)^{(N-j)l} mu_j(m, n)|`.
    pub fn annihilation_residual(&self) -> f64 {
        self.support()
            .into_iter()
            .map(|(m, n)| self.compat_at(m, n).0.abs())
            .fold(0.0, f64::max)
    }
}

pub fn annihilation_residual(p: &EmbeddingProblem) -> f64 {
    p.annihilation_residual()
}

/// Recover `phi_1 .. phi_N` by the downward recursion.
pub fn solve_system(p: &EmbeddingProblem, tol: &Tolerances) -> Result<Vec<TrigPoly>> {
    let support = p.support();
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &(m, n) in &support {
        let (r, s) = p.compat_at(m, n);
        if !r.is_zero() {
            residual = residual.max(r.abs());
        }
        scale = scale.max(s);
    }
    let bound = tol.residual * scale;
    if residual > bound {
        return Err(Error::ResidualTooLarge {
            residual,
            tolerance: bound,
        });
    }
    let big_n = p.n();
    let mut phis = vec![TrigPoly::zero(); big_n];
    let mut worst: Option<(f64, f64)> = None;
    for &(m, n) in &support {
        let u = ExactComplex::two_pi_i_pow(m, p.k);
        let v = ExactComplex::two_pi_i_pow(n, p.l);
        let (ua, va) = (u.abs(), v.abs());
        let mut prev = ExactComplex::zero();
        // running bound on the moduli entering the recursion
        let mut mag = 0.0;
        for (j, phi) in phis.iter_mut().enumerate() {
            // -u phi_1 = mu_0, v phi_j - u phi_{j+1} = mu_j
            let mu = p.mus[j].coefficient(m, n);
            let rhs = &(&v * &prev) - &mu;
            let next = rhs.checked_div(&u).ok_or(Error::NotProper)?;
            mag = (va * mag + mu.abs()) / ua;
            phi.add_term(m, n, next.clone());
            prev = next;
        }
        let mu_n = p.mus[big_n].coefficient(m, n);
        let diff = &(&v * &prev) - &mu_n;
        if !diff.is_zero() {
            let bound = tol.residual * (va * mag).max(mu_n.abs());
            let r = diff.abs();
            if r > bound && worst.is_none_or(|(wr, wb)| r / bound > wr / wb) {
                worst = Some((r, bound));
            }
        }
    }
    if let Some((residual, tolerance)) = worst {
        return Err(Error::FinalEquationViolated { residual, tolerance });
    }
    Ok(phis)
}
