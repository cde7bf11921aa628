//! Existence bounds and searches over generating vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Elem, Field, Poly, SeriesPrefix};
use crate::duality::figure_of_merit;
use crate::error::{Error, Result};
use crate::seqgen::{quality_function_T, QualityProfile, SeqSpec};

/// Largest admissible set the exhaustive search will walk.
pub const EXHAUSTIVE_SEARCH_LIMIT: u64 = 1 << 20;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Delta_q(s, rho) =
/// sum_{d=0}^{s-1} C(s,d) (q-1)^{s-d} sum_{g=0}^{rho+d} C(s-d+g-1, g) q^g + 1 - q^{rho+s},
/// inner sums with negative upper limit being empty.
pub fn delta_bound(q: u32, s: usize, rho: i64) -> Result<BigInt> {
    if s < 2 {
        return Err(Error::Domain(format!("s = {s} must be at least 2")));
    }
    if rho < -(s as i64) {
        return Err(Error::Domain(format!("rho = {rho} is below -s")));
    }
    let qb = BigInt::from(q);
    let mut total = BigInt::one() - qb.pow((rho + s as i64) as u32);
    for d in 0..s as u64 {
        let top = rho + d as i64;
        if top < 0 {
            continue;
        }
        let inner: BigInt = (0..=top as u64)
            .map(|g| binomial(s as u64 - d + g - 1, g) * qb.pow(g as u32))
            .sum();
        total += binomial(s as u64, d) * BigInt::from(q - 1).pow((s as u64 - d) as u32) * inner;
    }
    Ok(total)
}

fn check_threshold_args(q: u32, s: usize, m: usize, beta: &BigRational) -> Result<()> {
    if q < 2 || s < 1 || m < 2 {
        return Err(Error::Domain(format!("threshold needs q >= 2, s >= 1, m >= 2 (q={q}, s={s}, m={m})")));
    }
    if !beta.is_positive() || *beta > BigRational::one() {
        return Err(Error::Domain(format!("beta = {beta} is not in (0, 1]")));
    }
    Ok(())
}

/// floor(m + log_q beta - (s-1)(log_q m - 1) + log_q((s-1)!/q^(s-1))).
///
/// The expression equals m + floor(log_q X) with
/// X = beta (s-1)! / m^(s-1), evaluated by exact comparison of X with
/// powers of q.
pub fn rho_threshold(q: u32, s: usize, m: usize, beta: &BigRational) -> Result<i64> {
    check_threshold_args(q, s, m, beta)?;
    let fact: BigInt = (1..s as u64).map(BigInt::from).product();
    let x = beta * BigRational::from_integer(fact) / BigRational::from_integer(BigInt::from(m).pow(s as u32 - 1));
    let qr = BigRational::from_integer(BigInt::from(q));
    // largest e with q^e <= x
    let mut e = 0i64;
    let mut pow = BigRational::one();
    if x >= pow {
        while &pow * &qr <= x {
            pow *= &qr;
            e += 1;
        }
    } else {
        while pow > x {
            pow /= &qr;
            e -= 1;
        }
    }
    Ok(m as i64 + e)
}

/// The same threshold from floating point logarithms with an error bracket.
/// Fails with [`Error::Ambiguous`] when the bracket straddles an integer.
pub fn rho_threshold_interval(q: u32, s: usize, m: usize, beta: &BigRational) -> Result<i64> {
    check_threshold_args(q, s, m, beta)?;
    let lq = (q as f64).ln();
    let beta_f = beta.to_f64().unwrap_or(f64::NAN);
    let fact_ln: f64 = (1..s).map(|k| (k as f64).ln()).sum();
    let s1 = (s - 1) as f64;
    let v = m as f64 + beta_f.ln() / lq - s1 * ((m as f64).ln() / lq - 1.0) + (fact_ln - s1 * lq) / lq;
    let eps = 1e-9 * (1.0 + v.abs() + s1 * (m as f64).ln());
    let (lo, hi) = ((v - eps).floor(), (v + eps).floor());
    if lo != hi || !v.is_finite() {
        return Err(Error::Ambiguous(format!("floor of {v} is not resolved at tolerance {eps:e}")));
    }
    Ok(lo as i64)
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: Field,
    pub s: usize,
    pub m: usize,
    pub beta: Ratio<u64>,
}

impl SearchConfig {
    pub fn new(field: Field, s: usize, m: usize, beta: Ratio<u64>) -> Result<Self> {
        if s < 2 || m < 1 {
            return Err(Error::Domain(format!("search needs s >= 2 and m >= 1 (s={s}, m={m})")));
        }
        if *beta.numer() == 0 || beta > Ratio::from_integer(1) {
            return Err(Error::Domain(format!("beta = {beta} is not in (0, 1]")));
        }
        Ok(SearchConfig { field, s, m, beta })
    }

    fn beta_big(&self) -> BigRational {
        BigRational::new((*self.beta.numer()).into(), (*self.beta.denom()).into())
    }

    /// ((q-1) q^(m-1))^(s-1), or `None` past 64 bits.
    pub fn admissible_count(&self) -> Option<u64> {
        let q = self.field.q() as u64;
        (q - 1)
            .checked_mul(q.checked_pow(self.m as u32 - 1)?)?
            .checked_pow(self.s as u32 - 1)
    }

    /// Admissible vector number `index`: alpha_1 = 1, and alpha_2..alpha_s in
    /// lexicographic order of their coefficient strings (constant term first).
    pub fn admissible(&self, mut index: u64) -> Vec<Poly> {
        let q = self.field.q() as u64;
        let mut coeffs = vec![vec![0 as Elem; self.m]; self.s - 1];
        for c in coeffs.iter_mut().rev() {
            for j in (1..self.m).rev() {
                c[j] = (index % q) as Elem;
                index /= q;
            }
            c[0] = (index % (q - 1) + 1) as Elem;
            index /= q - 1;
        }
        let mut alpha = vec![Poly::one()];
        alpha.extend(coeffs.into_iter().map(Poly::new));
        alpha
    }
}

/// Outcome of the counting statement at one rho*: if
/// Delta_q(s, rho*) < beta q^m ((q-1)/q)^(s-1), more than (1-beta) of the
/// admissible vectors have rho >= s + rho*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingCheck {
    pub rho_star: i64,
    pub delta: BigInt,
    pub hypothesis: bool,
    /// Number of admissible vectors with rho >= s + rho*.
    pub count: u64,
    /// (1 - beta) times the number of admissible vectors.
    pub needed: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub best_alpha: Vec<Poly>,
    pub best_rho: usize,
    pub best_t: usize,
    /// rho -> number of evaluated vectors.
    pub histogram: BTreeMap<usize, u64>,
    pub evaluated: u64,
    pub seed: Option<u64>,
    pub checks: Vec<CountingCheck>,
}

fn merit_rho(cfg: &SearchConfig, alpha: &[Poly]) -> Result<usize> {
    Ok(figure_of_merit(&cfg.field, alpha, &Poly::x_pow(cfg.m), cfg.m)?.rho)
}

fn summarize(cfg: &SearchConfig, indices: &[u64], rhos: &[usize], seed: Option<u64>) -> SearchReport {
    let mut histogram = BTreeMap::new();
    let mut best = 0;
    for (pos, &r) in rhos.iter().enumerate() {
        *histogram.entry(r).or_insert(0) += 1;
        if r > rhos[best] || r == rhos[best] && indices[pos] < indices[best] {
            best = pos;
        }
    }
    let best_rho = rhos[best];
    SearchReport {
        best_alpha: cfg.admissible(indices[best]),
        best_rho,
        best_t: cfg.m - best_rho.min(cfg.m),
        histogram,
        evaluated: rhos.len() as u64,
        seed,
        checks: Vec::new(),
    }
}

/// Evaluate every admissible vector.
pub fn exhaustive_search(cfg: &SearchConfig) -> Result<SearchReport> {
    let total = cfg
        .admissible_count()
        .filter(|&n| n <= EXHAUSTIVE_SEARCH_LIMIT)
        .ok_or_else(|| Error::Capacity(format!("more than {EXHAUSTIVE_SEARCH_LIMIT} admissible vectors")))?;
    let rhos = (0..total)
        .into_par_iter()
        .map(|i| merit_rho(cfg, &cfg.admissible(i)))
        .collect::<Result<Vec<_>>>()?;
    let indices: Vec<u64> = (0..total).collect();
    let mut report = summarize(cfg, &indices, &rhos, None);
    report.checks = counting_checks(cfg, &report.histogram, total)?;
    Ok(report)
}

/// Evaluate `samples` admissible vectors drawn uniformly with a seeded
/// generator.
pub fn random_search(cfg: &SearchConfig, samples: u64, seed: u64) -> Result<SearchReport> {
    if samples == 0 {
        return Err(Error::Domain("random search needs at least one sample".into()));
    }
    let total = cfg
        .admissible_count()
        .ok_or_else(|| Error::Capacity("admissible set exceeds 64-bit indexing".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices: Vec<u64> = (0..samples).map(|_| rng.gen_range(0..total)).collect();
    let rhos = indices
        .par_iter()
        .map(|&i| merit_rho(cfg, &cfg.admissible(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(cfg, &indices, &rhos, Some(seed)))
}

/// The counting statement for every rho* from -s up to m.
pub fn counting_checks(
    cfg: &SearchConfig,
    histogram: &BTreeMap<usize, u64>,
    total: u64,
) -> Result<Vec<CountingCheck>> {
    let q = cfg.field.q();
    let s = cfg.s;
    let beta = cfg.beta_big();
    // beta q^m ((q-1)/q)^(s-1)
    let bound = &beta
        * BigRational::from_integer(BigInt::from(q).pow(cfg.m as u32))
        * BigRational::new(BigInt::from(q - 1).pow(s as u32 - 1), BigInt::from(q).pow(s as u32 - 1));
    let needed = (BigRational::one() - &beta) * BigRational::from_integer(total.into());
    let mut out = Vec::new();
    for rho_star in -(s as i64)..=cfg.m as i64 {
        let delta = delta_bound(q, s, rho_star)?;
        let hypothesis = BigRational::from_integer(delta.clone()) < bound;
        let floor = s as i64 + rho_star;
        let count = histogram.range(floor.max(0) as usize..).map(|(_, c)| c).sum::<u64>();
        let holds = !hypothesis || BigRational::from_integer(count.into()) > needed;
        out.push(CountingCheck { rho_star, delta, hypothesis, count, needed: needed.clone(), holds });
    }
    Ok(out)
}

/// Result of the coefficient-by-coefficient extension.
#[derive(Clone, Debug)]
pub struct GreedyResult {
    pub spec: SeqSpec,
    pub profile: QualityProfile,
    /// log_q(m^(s-1) / beta_m) with beta_m = 1/(m (ln m)^2), for m >= 2.
    pub target: Vec<Option<f64>>,
}

/// Start from alpha = (1, ..., 1) at m = 1 and append one coefficient to
/// alpha_2..alpha_s at a time, keeping the digit tuple that maximizes
/// rho(alpha^(m+1)); ties go to the lexicographically smallest tuple.
pub fn greedy_extend(field: &Field, s: usize, m_max: usize) -> Result<GreedyResult> {
    if s < 2 || m_max < 1 {
        return Err(Error::Domain(format!("greedy extension needs s >= 2 and m_max >= 1 (s={s}, m_max={m_max})")));
    }
    let q = field.q() as u64;
    let choices = q
        .checked_pow(s as u32 - 1)
        .filter(|&c| c <= EXHAUSTIVE_SEARCH_LIMIT)
        .ok_or_else(|| Error::Capacity("too many extension candidates per step".into()))?;
    let mut coeffs: Vec<Vec<Elem>> = vec![vec![1]; s];
    for m in 1..m_max {
        let rhos = (0..choices)
            .into_par_iter()
            .map(|c| {
                let alpha = extended(&coeffs, c, q);
                Ok(figure_of_merit(field, &alpha, &Poly::x_pow(m + 1), m + 1)?.rho)
            })
            .collect::<Result<Vec<usize>>>()?;
        // first maximum; candidate order is lexicographic in the digit tuple
        let mut pick = 0;
        for (c, &r) in rhos.iter().enumerate() {
            if r > rhos[pick] {
                pick = c;
            }
        }
        let digits = tuple(pick as u64, q, s - 1);
        coeffs[0].push(0);
        for (c, d) in coeffs[1..].iter_mut().zip(digits) {
            c.push(d);
        }
    }
    let alpha = coeffs.into_iter().map(SeriesPrefix::new).collect();
    let spec = SeqSpec::canonical(field.clone(), alpha)?;
    let profile = quality_function_T(&spec, m_max)?;
    let target = (1..=m_max)
        .map(|m| {
            (m >= 2).then(|| {
                let mf = m as f64;
                let beta_m = 1.0 / (mf * mf.ln().powi(2));
                ((s - 1) as f64 * mf.ln() - beta_m.ln()) / (q as f64).ln()
            })
        })
        .collect();
    Ok(GreedyResult { spec, profile, target })
}

/// Digits of `c` in base q, most significant first.
fn tuple(mut c: u64, q: u64, len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = (c % q) as Elem;
        c /= q;
    }
    out
}

fn extended(coeffs: &[Vec<Elem>], c: u64, q: u64) -> Vec<Poly> {
    let digits = tuple(c, q, coeffs.len() - 1);
    let mut alpha = vec![Poly::one()];
    for (base, d) in coeffs[1..].iter().zip(digits) {
        let mut v = base.clone();
        v.push(d);
        alpha.push(Poly::new(v));
    }
    alpha
}

/// Exact decimal rendering helper: `num/den` rounded down to `digits`
/// places.
pub fn decimal(value: &BigRational, digits: usize) -> String {
    let neg = value.is_negative();
    let v = value.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (v * BigRational::from_integer(scale.clone())).floor().to_integer();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}
