//! The family `phi_j = f_j z1^p z2^q` forced by right-hand sides
//! `z1^p z2^q` and `c_pq z1^p z2^q`, with `t = (iq)^l / (ip)^k`.
//!
//! The unknowns are eliminated symbolically: equations below `j1` are
//! solved downward in powers of `t`, those above `j1` upward in powers of
//! `1/t`, and equation `j1` becomes a scalar linear equation for `c_pq`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::GaussRational;

/// Laurent polynomial in `t` with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent(BTreeMap<i32, GaussRational>);

impl Laurent {
    fn constant(c: GaussRational) -> Self {
        let mut l = Laurent::default();
        if !c.is_zero() {
            l.0.insert(0, c);
        }
        l
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.0.clone();
        for (e, c) in &o.0 {
            let v = r.remove(e).map(|x| x.add(c)).unwrap_or_else(|| c.clone());
            if !v.is_zero() {
                r.insert(*e, v);
            }
        }
        Laurent(r)
    }

    fn shift(&self, by: i32) -> Self {
        Laurent(self.0.iter().map(|(e, c)| (e + by, c.clone())).collect())
    }

    fn neg(&self) -> Self {
        Laurent(self.0.iter().map(|(e, c)| (*e, c.neg())).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &GaussRational)> {
        self.0.iter()
    }

    fn to_numeric(&self) -> Vec<(i32, Complex64)> {
        self.0.iter().map(|(e, c)| (*e, c.to_complex64())).collect()
    }
}

fn eval_numeric(p: &[(i32, Complex64)], t: Complex64) -> Complex64 {
    p.iter().map(|(e, c)| c * t.powi(*e)).sum()
}

/// Channels of an affine expression in the unknown `c` and the junior terms.
const ONE: usize = 0;
const C: usize = 1;
const XI: usize = 2;
const ETA_C: usize = 3;
const RHO: usize = 4;
const KAPPA_C: usize = 5;
const CHANNELS: usize = 6;

/// `sum_ch poly_ch(t) * channel`, channels `1, c, xi, eta c, rho, kappa c`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearForm(pub [Laurent; CHANNELS]);

impl LinearForm {
    fn channel(ch: usize, c: GaussRational) -> Self {
        let mut f = LinearForm::default();
        f.0[ch] = Laurent::constant(c);
        f
    }

    fn add(&self, o: &Self) -> Self {
        LinearForm(std::array::from_fn(|i| self.0[i].add(&o.0[i])))
    }

    fn shift(&self, by: i32) -> Self {
        LinearForm(std::array::from_fn(|i| self.0[i].shift(by)))
    }

    fn neg(&self) -> Self {
        LinearForm(std::array::from_fn(|i| self.0[i].neg()))
    }
}

/// Junior coefficient model `coeff * p^(-eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decay {
    pub coeff: Complex64,
    pub eps: f64,
}

impl Decay {
    pub fn zero() -> Self {
        Decay {
            coeff: Complex64::new(0.0, 0.0),
            eps: 0.0,
        }
    }

    pub fn at(&self, p: u64) -> Complex64 {
        if self.coeff == Complex64::new(0.0, 0.0) {
            return self.coeff;
        }
        self.coeff * (p as f64).powf(-self.eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JuniorModels {
    pub xi: Decay,
    pub eta: Decay,
    pub rho: Decay,
    pub kappa: Decay,
}

impl Default for JuniorModels {
    fn default() -> Self {
        JuniorModels {
            xi: Decay::zero(),
            eta: Decay::zero(),
            rho: Decay::zero(),
            kappa: Decay::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleConfig {
    pub k: u32,
    pub l: u32,
    pub n: usize,
    pub j0: usize,
    pub j1: usize,
    /// `a_{1j}`, `j = 0..=N`.
    pub a1: Vec<GaussRational>,
    /// `a_{2j}`, `j = 0..=N`.
    pub a2: Vec<GaussRational>,
    pub delta: f64,
    pub cmin: u64,
    pub pmax: u64,
    /// Cut-offs `P` for the partial sums.
    pub ladder: Vec<u64>,
    pub junior: JuniorModels,
}

impl CounterexampleConfig {
    /// `j0 = 0`, `j1 = N`, `a_{1j} = 1`, `a_{2j} = 0`, `delta = 1/4`,
    /// `Cmin = 1`, `Pmax = 4096`, ladder of powers of two.
    pub fn case1(k: u32, l: u32, n: usize) -> Self {
        CounterexampleConfig {
            k,
            l,
            n,
            j0: 0,
            j1: n,
            a1: vec![GaussRational::one(); n + 1],
            a2: vec![GaussRational::zero(); n + 1],
            delta: 0.25,
            cmin: 1,
            pmax: 4096,
            ladder: power_ladder(4096),
            junior: JuniorModels::default(),
        }
    }

    pub fn case_name(&self) -> &'static str {
        if self.j0 == 0 && self.j1 == self.n {
            "case-1"
        } else if self.j0 > 0 && self.j1 < self.n {
            "case-2"
        } else {
            "intermediate"
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.k == 0 || self.l == 0 || self.n == 0 {
            return bad("k, l and N must be positive");
        }
        if !(self.j0 < self.j1 && self.j1 <= self.n) {
            return bad("need 0 <= j0 < j1 <= N");
        }
        if self.a1.len() != self.n + 1 || self.a2.len() != self.n + 1 {
            return bad("coefficient tables need N + 1 entries");
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return bad("delta must lie in (0, 1]");
        }
        if self.cmin == 0 {
            return bad("Cmin must be at least 1");
        }
        Ok(())
    }

    /// Right-hand side of equation `j` as a form in the channels.
    fn rhs(&self, j: usize) -> LinearForm {
        let one = GaussRational::one;
        let mut f = if j < self.j0 {
            LinearForm::default()
        } else if j == self.j0 {
            LinearForm::channel(ONE, one())
        } else if j < self.j1 {
            LinearForm::channel(ONE, self.a1[j].clone())
        } else if j == self.j1 {
            LinearForm::channel(ONE, self.a1[j].clone()).add(&LinearForm::channel(C, one()))
        } else {
            LinearForm::channel(ONE, self.a1[j].clone()).add(&LinearForm::channel(C, self.a2[j].clone()))
        };
        if j == 0 {
            f = f.add(&LinearForm::channel(XI, one())).add(&LinearForm::channel(ETA_C, one()));
        }
        if j == self.n {
            f = f.add(&LinearForm::channel(RHO, one())).add(&LinearForm::channel(KAPPA_C, one()));
        }
        f
    }
}

/// Powers of two from 8 up to `pmax`, ending at `pmax`.
pub fn power_ladder(pmax: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (3..63).map(|e| 1u64 << e).take_while(|&p| p <= pmax).collect();
    if v.last() != Some(&pmax) {
        v.push(pmax);
    }
    v
}

/// The eliminated system: `equation = 0` is linear in `c`, `gamma` is the
/// bracket of `phi_{j0+1} = -(ip)^{-k} gamma z1^p z2^q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eliminated {
    pub equation: LinearForm,
    pub gamma: LinearForm,
}

pub fn eliminate(cfg: &CounterexampleConfig) -> Result<Eliminated> {
    cfg.validate()?;
    // phi_j = -X_j (ip)^{-k}: X_1 = mu_0, X_{j+1} = t X_j + mu_j
    let mut x = cfg.rhs(0);
    let mut gamma = if cfg.j0 == 0 { Some(x.clone()) } else { None };
    for j in 1..cfg.j1 {
        x = x.shift(1).add(&cfg.rhs(j));
        if j == cfg.j0 {
            gamma = Some(x.clone());
        }
    }
    // phi_j = Y_j (iq)^{-l}: Y_N = mu_N, Y_j = mu_j + Y_{j+1} / t
    let mut equation = x.shift(1).neg().add(&cfg.rhs(cfg.j1).neg());
    if cfg.j1 < cfg.n {
        let mut y = cfg.rhs(cfg.n);
        for j in (cfg.j1 + 1..cfg.n).rev() {
            y = cfg.rhs(j).add(&y.shift(-1));
        }
        equation = equation.add(&y.shift(-1).neg());
    }
    Ok(Eliminated {
        equation,
        gamma: gamma.expect("j0 < j1"),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub case: String,
    pub pairs: usize,
    pub cpq_max: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Smallest modulus of the coefficient of `c_pq`.
    pub coefficient_min: f64,
    /// `(P, S(P))`.
    pub partial_sums: Vec<(u64, f64)>,
    /// Set when `k` and `l` are both even; such runs are outside the proven range.
    pub unverified: bool,
}

/// True when both exponents are even.
pub fn even_pair(k: u32, l: u32) -> bool {
    k.is_multiple_of(2) && l.is_multiple_of(2)
}

/// Integers `q >= 1` with `delta/2 p^k <= q^l <= delta p^k`.
fn q_range(p: u64, k: u32, l: u32, delta: f64) -> std::ops::RangeInclusive<u64> {
    let pk = (p as f64).powi(k as i32);
    let lo = delta / 2.0 * pk;
    let hi = delta * pk;
    let ql = |q: u64| (q as f64).powi(l as i32);
    let mut a = lo.powf(1.0 / l as f64).ceil().max(1.0) as u64;
    while a > 1 && ql(a - 1) >= lo {
        a -= 1;
    }
    while ql(a) < lo {
        a += 1;
    }
    let mut b = hi.powf(1.0 / l as f64).floor() as u64;
    while ql(b + 1) <= hi {
        b += 1;
    }
    while b > 0 && ql(b) > hi {
        b -= 1;
    }
    a..=b
}

pub fn counterexample_run(cfg: &CounterexampleConfig) -> Result<CounterexampleReport> {
    let el = eliminate(cfg)?;
    let eq: Vec<Vec<(i32, Complex64)>> = el.equation.0.iter().map(Laurent::to_numeric).collect();
    let gm: Vec<Vec<(i32, Complex64)>> = el.gamma.0.iter().map(Laurent::to_numeric).collect();
    let split = |f: &[Vec<(i32, Complex64)>], t: Complex64, xi: Complex64, eta: Complex64, rho: Complex64, kappa: Complex64| {
        let e = |ch: usize| eval_numeric(&f[ch], t);
        (
            e(ONE) + e(XI) * xi + e(RHO) * rho,
            e(C) + e(ETA_C) * eta + e(KAPPA_C) * kappa,
        )
    };
    let phase = Complex64::new(0.0, 1.0).powi(cfg.l as i32 - cfg.k as i32);
    let mut ladder: Vec<u64> = cfg.ladder.iter().copied().filter(|&p| p <= cfg.pmax).collect();
    ladder.sort_unstable();
    ladder.dedup();
    let mut report = CounterexampleReport {
        case: cfg.case_name().to_string(),
        pairs: 0,
        cpq_max: 0.0,
        gamma_min: f64::INFINITY,
        gamma_max: 0.0,
        coefficient_min: f64::INFINITY,
        partial_sums: Vec::new(),
        unverified: even_pair(cfg.k, cfg.l),
    };
    let mut sum = 0.0;
    let mut next = 0;
    for p in cfg.cmin..=cfg.pmax {
        while next < ladder.len() && ladder[next] < p {
            report.partial_sums.push((ladder[next], sum));
            next += 1;
        }
        let j = &cfg.junior;
        let (xi, eta, rho, kappa) = (j.xi.at(p), j.eta.at(p), j.rho.at(p), j.kappa.at(p));
        let pk = (p as f64).powi(cfg.k as i32);
        for q in q_range(p, cfg.k, cfg.l, cfg.delta) {
            let t = phase * ((q as f64).powi(cfg.l as i32) / pk);
            let (l0, l1) = split(&eq, t, xi, eta, rho, kappa);
            if l1.norm() < 0.5 {
                return Err(Error::NeedLargerC {
                    what: "of c_pq",
                    modulus: l1.norm(),
                    p,
                    q,
                });
            }
            let c = -l0 / l1;
            let (g0, g1) = split(&gm, t, xi, eta, rho, kappa);
            let g = (g0 + g1 * c).norm();
            report.pairs += 1;
            report.cpq_max = report.cpq_max.max(c.norm());
            report.gamma_min = report.gamma_min.min(g);
            report.gamma_max = report.gamma_max.max(g);
            report.coefficient_min = report.coefficient_min.min(l1.norm());
            let w = (p as f64).powi(cfg.k as i32 - 1) * (q as f64).powi(cfg.l as i32 - 1) / (pk * pk);
            sum += w * g * g;
        }
    }
    for &p in &ladder[next..] {
        report.partial_sums.push((p, sum));
    }
    if report.pairs == 0 {
        return Err(Error::NoIndices);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial(r: &CounterexampleReport, p: u64) -> f64 {
        r.partial_sums.iter().find(|(q, _)| *q == p).unwrap().1
    }

    #[test]
    fn case1_closed_form() {
        let cfg = CounterexampleConfig::case1(1, 1, 1);
        let el = eliminate(&cfg).unwrap();
        // -t - (1 + c) = 0
        let one = |e: i32, v: i64| Laurent([(e, GaussRational::from_int(v))].into_iter().collect());
        assert_eq!(el.equation.0[ONE], one(1, -1).add(&one(0, -1)));
        assert_eq!(el.equation.0[C], one(0, -1));
        assert_eq!(el.gamma.0[ONE], one(0, 1));
        let r = counterexample_run(&cfg).unwrap();
        assert!(r.cpq_max <= 1.25);
        assert_eq!((r.gamma_min, r.gamma_max), (1.0, 1.0));
        let ratio = partial(&r, 4096) / partial(&r, 64);
        assert!((1.7..=2.3).contains(&ratio), "{ratio}");
    }

    #[test]
    fn index_condition() {
        assert_eq!(q_range(8, 1, 1, 0.25), 1..=2);
        assert_eq!(q_range(4, 1, 1, 0.25), 1..=1);
        assert!(q_range(3, 1, 1, 0.25).is_empty());
        // 1/8 * 1000 <= q^3 <= 1/4 * 1000
        assert_eq!(q_range(10, 3, 3, 0.25), 5..=6);
    }

    #[test]
    fn higher_n_matches_substitution() {
        let mut cfg = CounterexampleConfig::case1(1, 2, 3);
        cfg.a1 = (0..4).map(|j| GaussRational::from_ints(j, 1 - j)).collect();
        cfg.pmax = 200;
        cfg.delta = 0.5;
        let el = eliminate(&cfg).unwrap();
        // plug c back into the chain and check the last equation directly
        let t = Complex64::new(0.3, -0.1);
        let eq: Vec<_> = el.equation.0.iter().map(Laurent::to_numeric).collect();
        let l0 = eval_numeric(&eq[ONE], t);
        let l1 = eval_numeric(&eq[C], t);
        let c = -l0 / l1;
        let a: Vec<Complex64> = cfg.a1.iter().map(GaussRational::to_complex64).collect();
        let mut x = Complex64::new(1.0, 0.0);
        for aj in &a[1..3] {
            x = t * x + aj;
        }
        assert!((-t * x - (a[3] + c)).norm() < 1e-12);
    }

    #[test]
    fn case2_meets_in_the_middle() {
        let mut cfg = CounterexampleConfig::case1(1, 1, 3);
        cfg.j0 = 1;
        cfg.j1 = 2;
        cfg.a2 = vec![GaussRational::from_int(2); 4];
        assert_eq!(cfg.case_name(), "case-2");
        let el = eliminate(&cfg).unwrap();
        let t = Complex64::new(0.2, 0.15);
        let ev = |f: &LinearForm, ch: usize| eval_numeric(&f.0[ch].to_numeric(), t);
        let c = -ev(&el.equation, ONE) / ev(&el.equation, C);
        // forward: X1 = 0, X2 = 1; backward: Y3 = 1 + 2c, Y2 unused
        let x2 = Complex64::new(1.0, 0.0);
        assert!((ev(&el.gamma, ONE) - x2).norm() < 1e-15);
        let y3 = 1.0 + 2.0 * c;
        assert!((-t * x2 - y3 / t - (1.0 + c)).norm() < 1e-12);
    }

    #[test]
    fn failure_modes() {
        let mut cfg = CounterexampleConfig::case1(1, 1, 1);
        cfg.delta = 1.0;
        cfg.pmax = 64;
        cfg.junior.eta = Decay {
            coeff: Complex64::new(-2.0, 0.0),
            eps: 0.0,
        };
        assert!(matches!(counterexample_run(&cfg), Err(Error::NeedLargerC { .. })));
        let mut cfg = CounterexampleConfig::case1(1, 1, 1);
        cfg.pmax = 3;
        assert_eq!(counterexample_run(&cfg), Err(Error::NoIndices));
        cfg.j0 = 1;
        assert!(matches!(counterexample_run(&cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn even_pairs_are_marked() {
        let mut cfg = CounterexampleConfig::case1(2, 2, 1);
        cfg.pmax = 32;
        assert!(counterexample_run(&cfg).unwrap().unverified);
        cfg.l = 1;
        assert!(!counterexample_run(&cfg).unwrap().unverified);
    }
}
