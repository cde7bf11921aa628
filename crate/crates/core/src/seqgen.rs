//! Hyperplane sequences from generating vectors of power series.
//!
//! Infinite objects are finite prefixes: the series alpha_i are known
//! modulo x^M and every request that would need coefficient M or later fails
//! with [`Error::PrecisionExceeded`].
//!
//! With the canonical basis chain the generator matrices are
//! non-singular upper triangular. An explicit chain B_i multiplies the lower
//! triangular Psi(alpha_i) from the right, so C_i = (Psi(alpha_i) B_i)^T is
//! in general neither triangular nor NUT; digit j of a point then depends on
//! every digit of the index, and [`generate_sequence_points`] uses as many
//! columns as the largest index has digits.

use crate::algebra::{Elem, Field, Poly, SeriesPrefix};
use crate::duality::{convolution_system, figure_of_merit, min_degree_solution, DualSpaceBasis};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::netgen::{digital_points, lower_toeplitz, GeneratorFamily};
use crate::points::PointSet;

/// Basis chain of one coordinate: column j of B_i holds the coefficients of
/// the polynomial b_j, deg b_j = j - 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisChain {
    Canonical,
    /// b_1, b_2, ...; the chain is defined through index `len`.
    Explicit(Vec<Poly>),
}

impl BasisChain {
    pub fn explicit(elems: Vec<Poly>) -> Result<Self> {
        for (j, b) in elems.iter().enumerate() {
            if b.deg() != j as i64 {
                return Err(Error::Invariant(format!(
                    "chain element {} = {b} must have degree exactly {j}",
                    j + 1
                )));
            }
        }
        Ok(BasisChain::Explicit(elems))
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, BasisChain::Canonical)
    }

    /// Elements b_1..b_m.
    pub fn elems(&self, m: usize) -> Result<Vec<Poly>> {
        match self {
            BasisChain::Canonical => Ok((0..m).map(Poly::x_pow).collect()),
            BasisChain::Explicit(e) if e.len() >= m => Ok(e[..m].to_vec()),
            BasisChain::Explicit(e) => Err(Error::PrecisionExceeded { needed: m, available: e.len() }),
        }
    }
}

/// pi_m(B_i).
pub fn basis_chain_matrix(chain: &BasisChain, m: usize) -> Result<Matrix> {
    let elems = chain.elems(m)?;
    let mut b = Matrix::zeros(m, m);
    for (c, e) in elems.iter().enumerate() {
        for (r, &v) in e.coeffs().iter().enumerate() {
            b.set(r, c, v);
        }
    }
    Ok(b)
}

/// A hyperplane sequence: field, generating vector in Y^s known modulo
/// x^M, and one basis chain per coordinate.
#[derive(Clone, Debug)]
pub struct SeqSpec {
    pub field: Field,
    pub alpha: Vec<SeriesPrefix>,
    pub chains: Vec<BasisChain>,
}

impl SeqSpec {
    pub fn new(field: Field, alpha: Vec<SeriesPrefix>, chains: Vec<BasisChain>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::Domain("dimension s must be positive".into()));
        }
        if chains.len() != alpha.len() {
            return Err(Error::Shape(format!("{} chains for s = {}", chains.len(), alpha.len())));
        }
        let precision = alpha[0].precision();
        if alpha.iter().any(|a| a.precision() != precision) {
            return Err(Error::Shape("series prefixes differ in precision".into()));
        }
        if let Some(i) = alpha.iter().position(|a| !a.in_y()) {
            return Err(Error::Domain(format!("alpha_{} is not invertible modulo x", i + 1)));
        }
        Ok(SeqSpec { field, alpha, chains })
    }

    pub fn canonical(field: Field, alpha: Vec<SeriesPrefix>) -> Result<Self> {
        let chains = vec![BasisChain::Canonical; alpha.len()];
        SeqSpec::new(field, alpha, chains)
    }

    pub fn s(&self) -> usize {
        self.alpha.len()
    }

    /// The common precision M.
    pub fn precision(&self) -> usize {
        self.alpha[0].precision()
    }

    /// alpha^(m) = alpha mod x^m.
    pub fn truncated(&self, m: usize) -> Result<Vec<Poly>> {
        self.alpha.iter().map(|a| a.truncate(m)).collect()
    }

    /// Lines `q=`, `s=`, `M=`, `alpha_i=` and, for explicit chains,
    /// `chain_i=` with the polynomials separated by `;`.
    pub fn parse(text: &str) -> Result<SeqSpec> {
        let kv = parse_key_values(text)?;
        let field = Field::new(required(&kv, "q")?)?;
        let s: usize = required(&kv, "s")?;
        let m: usize = required(&kv, "M")?;
        let mut alpha = Vec::with_capacity(s);
        let mut chains = Vec::with_capacity(s);
        for i in 1..=s {
            let raw = lookup(&kv, &format!("alpha_{i}"))
                .ok_or_else(|| Error::Parse(format!("missing alpha_{i}")))?;
            let a = SeriesPrefix::parse(raw, &field)?;
            if a.precision() != m {
                return Err(Error::Parse(format!("alpha_{i} has {} digits, M = {m}", a.precision())));
            }
            alpha.push(a);
            chains.push(match lookup(&kv, &format!("chain_{i}")) {
                None => BasisChain::Canonical,
                Some(raw) => BasisChain::explicit(
                    raw.split(';').map(|p| Poly::parse(p, &field)).collect::<Result<_>>()?,
                )?,
            });
        }
        check_known_keys(&kv, s, &["q", "s", "M"], &["alpha_", "chain_"])?;
        SeqSpec::new(field, alpha, chains)
    }

    pub fn render(&self) -> String {
        let mut out = format!("q={}\ns={}\nM={}\n", self.field.q(), self.s(), self.precision());
        for (i, a) in self.alpha.iter().enumerate() {
            out.push_str(&format!("alpha_{}={}\n", i + 1, a.to_digits()));
        }
        for (i, c) in self.chains.iter().enumerate() {
            if let BasisChain::Explicit(e) = c {
                let list: Vec<String> = e.iter().map(Poly::to_digits).collect();
                out.push_str(&format!("chain_{}={}\n", i + 1, list.join(";")));
            }
        }
        out
    }
}

pub(crate) fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{line}'")))?;
        let k = k.trim().to_string();
        if out.iter().any(|(e, _)| *e == k) {
            return Err(Error::Parse(format!("duplicate key '{k}'")));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

pub(crate) fn lookup<'a>(kv: &'a [(String, String)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

pub(crate) fn required<T: std::str::FromStr>(kv: &[(String, String)], key: &str) -> Result<T> {
    lookup(kv, key)
        .ok_or_else(|| Error::Parse(format!("missing {key}=")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad value for {key}")))
}

pub(crate) fn check_known_keys(
    kv: &[(String, String)],
    s: usize,
    plain: &[&str],
    indexed: &[&str],
) -> Result<()> {
    for (k, _) in kv {
        let ok = plain.contains(&k.as_str())
            || indexed.iter().any(|p| {
                k.strip_prefix(p)
                    .and_then(|i| i.parse::<usize>().ok())
                    .is_some_and(|i| (1..=s).contains(&i))
            });
        if !ok {
            return Err(Error::Parse(format!("unexpected key '{k}'")));
        }
    }
    Ok(())
}

/// Upper-left `rows x cols` block of (Psi(alpha_i) B_i)^T for every i.
pub(crate) fn seq_generator_block(spec: &SeqSpec, rows: usize, cols: usize) -> Result<GeneratorFamily> {
    let n = rows.max(cols);
    let fq = &spec.field;
    let mut matrices = Vec::with_capacity(spec.s());
    for (a, chain) in spec.alpha.iter().zip(&spec.chains) {
        let psi = lower_toeplitz(a.truncate(n)?.coeffs(), n);
        let b = basis_chain_matrix(chain, n)?;
        matrices.push(psi.mul(&b, fq)?.transpose().top_left(rows, cols)?);
    }
    GeneratorFamily::new(matrices)
}

/// The m x m generator prefixes C_{m,i} = pi_m(Psi(alpha_i) B_i)^T.
pub fn seq_generator_prefix(spec: &SeqSpec, m: usize) -> Result<GeneratorFamily> {
    if m > spec.precision() {
        return Err(Error::PrecisionExceeded { needed: m, available: spec.precision() });
    }
    seq_generator_block(spec, m, m)
}

/// Points x_k for `k_from <= k < k_to`, each coordinate to `render_precision`
/// digits.
pub fn generate_sequence_points(
    spec: &SeqSpec,
    k_from: u64,
    k_to: u64,
    render_precision: usize,
) -> Result<PointSet> {
    let big_m = spec.precision();
    if render_precision > big_m {
        return Err(Error::PrecisionExceeded { needed: render_precision, available: big_m });
    }
    if k_from > k_to {
        return Err(Error::Domain(format!("empty index range {k_from}..{k_to}")));
    }
    let cols = index_width(spec.field.q(), k_to);
    if cols > big_m {
        return Err(Error::Capacity(format!(
            "index {} needs {cols} base-{} digits, precision is {big_m}",
            k_to - 1,
            spec.field.q()
        )));
    }
    let gens = seq_generator_block(spec, render_precision, cols)?;
    digital_points(&spec.field, &gens, k_from..k_to)
}

/// Number of base-q digits needed for every index below `k_to` (at least 1).
fn index_width(q: u32, k_to: u64) -> usize {
    let mut width = 1;
    let mut reach = q as u128;
    while reach < k_to as u128 {
        reach *= q as u128;
        width += 1;
    }
    width
}

/// First `m` digits of every coordinate of a point stored with `precision`
/// digits per coordinate.
pub fn truncate_point(point: &[Elem], precision: usize, m: usize) -> Result<Vec<Elem>> {
    if m > precision {
        return Err(Error::PrecisionExceeded { needed: m, available: precision });
    }
    if precision == 0 {
        return Ok(Vec::new());
    }
    if point.len() % precision != 0 {
        return Err(Error::Shape("point length is not a multiple of the precision".into()));
    }
    Ok(point.chunks(precision).flat_map(|c| c[..m].iter().copied()).collect())
}

/// T(m) = m - rho(alpha^(m)) for m = 1..m_max with the minimizing solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualityProfile {
    pub t: Vec<usize>,
    pub rho: Vec<usize>,
    pub witness: Vec<Vec<Poly>>,
}

impl QualityProfile {
    pub fn m_max(&self) -> usize {
        self.t.len()
    }

    /// T(m), 1-based.
    pub fn at(&self, m: usize) -> usize {
        self.t[m - 1]
    }

    /// A profile with prescribed values and no witnesses.
    pub fn from_values(t: Vec<usize>) -> Self {
        QualityProfile { rho: Vec::new(), witness: Vec::new(), t }
    }
}

#[allow(non_snake_case)]
pub fn quality_function_T(spec: &SeqSpec, m_max: usize) -> Result<QualityProfile> {
    if m_max > spec.precision() {
        return Err(Error::PrecisionExceeded { needed: m_max, available: spec.precision() });
    }
    let mut profile = QualityProfile { t: Vec::new(), rho: Vec::new(), witness: Vec::new() };
    for m in 1..=m_max {
        let r = figure_of_merit(&spec.field, &spec.truncated(m)?, &Poly::x_pow(m), m)?;
        profile.t.push(r.t);
        profile.rho.push(r.rho);
        profile.witness.push(r.witness);
    }
    Ok(profile)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UdCertificate {
    /// sum_i p_i alpha_i = 0 mod x^M with deg p_i <= the bound. Then
    /// rho(alpha^(m)) <= `rho_cap` = s - 1 + sum_i deg p_i, hence
    /// T(m) >= m - rho_cap, for `valid_from_m <= m <= M`.
    Dependent { p: Vec<Poly>, rho_cap: usize, valid_from_m: usize },
    /// No such relation with all degrees at most the bound.
    IndependentUpTo(usize),
}

/// Search for an F_q[x]-linear relation of small degree among the alpha_i,
/// decided modulo x^M.
///
/// With `s (bound + 1) > M` unknowns the congruence always has a nonzero
/// solution and says nothing about the series, so the call is refused.
pub fn ud_certificate(spec: &SeqSpec, degree_bound: usize) -> Result<UdCertificate> {
    let s = spec.s();
    let big_m = spec.precision();
    if s * (degree_bound + 1) > big_m {
        return Err(Error::Inconclusive(format!(
            "degree bound {degree_bound} is too large for precision {big_m}: \
             needs s * (bound + 1) <= M"
        )));
    }
    let alpha = spec.truncated(big_m)?;
    let caps = vec![degree_bound + 1; s];
    match min_degree_solution(&spec.field, &alpha, &Poly::x_pow(big_m), &caps)? {
        None => Ok(UdCertificate::IndependentUpTo(degree_bound)),
        Some((size, p)) => {
            let max_deg = p.iter().map(Poly::deg).max().unwrap_or(0).max(0) as usize;
            Ok(UdCertificate::Dependent { p, rho_cap: size - 1, valid_from_m: max_deg + 1 })
        }
    }
}

/// The pair (N_{alpha^(m)}, N_{m+1,m}) in the coordinates of the basis
/// chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualChainStep {
    pub m: usize,
    pub n_m: DualSpaceBasis,
    pub n_next_projected: DualSpaceBasis,
    pub contained: bool,
    /// dim N_m - dim N_{m+1,m}.
    pub codim: usize,
}

/// Kernel system in chain coordinates: columns of block i multiplied by
/// pi_width(B_i).
fn chain_system(spec: &SeqSpec, rows: usize, width: usize) -> Result<Matrix> {
    let fq = &spec.field;
    let h = convolution_system(&spec.alpha, rows, width)?;
    let mut blocks = Vec::with_capacity(spec.s());
    for (i, chain) in spec.chains.iter().enumerate() {
        let cols: Vec<usize> = (i * width..(i + 1) * width).collect();
        blocks.push(h.select_cols(&cols).mul(&basis_chain_matrix(chain, width)?, fq)?);
    }
    Matrix::hstack(&blocks)
}

/// Compare N_{alpha^(m)} with the zero-padded projection of N_{alpha^(m+1)}.
pub fn dual_chain_step(spec: &SeqSpec, m: usize) -> Result<DualChainStep> {
    if m + 1 > spec.precision() {
        return Err(Error::PrecisionExceeded { needed: m + 1, available: spec.precision() });
    }
    let fq = &spec.field;
    let s = spec.s();
    let n_m = DualSpaceBasis::kernel_of(fq, &chain_system(spec, m, m)?, m, s)?;
    let next = chain_system(spec, m + 1, m + 1)?;
    let projected = DualSpaceBasis::projected_kernel(fq, &next, m + 1, s)?;
    let contained = projected.is_subspace_of(fq, &n_m)?;
    let codim = n_m.dim().saturating_sub(projected.dim());
    Ok(DualChainStep { m, n_m, n_next_projected: projected, contained, codim })
}
