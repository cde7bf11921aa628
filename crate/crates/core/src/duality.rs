//! NRT weights, dual spaces of hyperplane nets, minimum distance and the
//! figure of merit.
//!
//! Vectors of F_q^{sm} are handled as `s` concatenated blocks of length `m`.
//! The NRT weight of a block is the (1-based) position of its last nonzero
//! entry, zero for the zero block; the weight of a vector is the block sum.

use crate::algebra::{Elem, Field, Poly, SeriesPrefix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest span the exhaustive distance engine will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

fn block_weight(block: &[Elem]) -> usize {
    block.iter().rposition(|&c| c != 0).map_or(0, |j| j + 1)
}

/// V_m(A) for A in F_q^{sm}.
pub fn nrt_weight(a: &[Elem], m: usize, s: usize) -> Result<usize> {
    if a.len() != s * m {
        return Err(Error::Shape(format!("vector of length {} is not {s} blocks of {m}", a.len())));
    }
    if m == 0 {
        return Ok(0);
    }
    Ok(a.chunks(m).map(block_weight).sum())
}

fn check_residues(alpha: &[Poly], f: &Poly, m: usize) -> Result<()> {
    if f.deg() != m as i64 {
        return Err(Error::Shape(format!("modulus {f} has degree {}, expected {m}", f.deg())));
    }
    if let Some(a) = alpha.iter().find(|a| a.deg() >= m as i64) {
        return Err(Error::Shape(format!("{a} is not reduced modulo {f}")));
    }
    Ok(())
}

/// The `m x sm` system whose kernel is the canonical-coordinate image of
/// {k in R_m^s : alpha . k = 0 mod f}. Column `(i, l)` holds the
/// coefficients of `alpha_i x^l mod f`, so row `j` is coefficient `j` of
/// `sum_i alpha_i k_i mod f`.
pub fn dual_kernel_matrix(fq: &Field, alpha: &[Poly], f: &Poly, m: usize) -> Result<Matrix> {
    check_residues(alpha, f, m)?;
    let mut cols = Vec::with_capacity(alpha.len() * m);
    for a in alpha {
        let mut g = a.clone();
        for _ in 0..m {
            cols.push(g.padded(m)?);
            g = g.shift(1).rem(f, fq)?;
        }
    }
    if cols.is_empty() {
        return Ok(Matrix::zeros(m, 0));
    }
    Matrix::from_cols(&cols)
}

/// Convolution system of power series prefixes: `rows x (s * width)` with
/// entry `(j, (i, l)) = alpha_{i, j - l}` for `j >= l`. With `rows = width = m`
/// it is the dual system mod x^m; with `rows = m + 1, width = m` it describes
/// which k of degree < m solve the congruence mod x^(m+1).
pub fn convolution_system(alpha: &[SeriesPrefix], rows: usize, width: usize) -> Result<Matrix> {
    let mut out = Matrix::zeros(rows, alpha.len() * width);
    for (i, a) in alpha.iter().enumerate() {
        for j in 0..rows {
            for l in 0..width.min(j + 1) {
                out.set(j, i * width + l, a.coeff(j - l)?);
            }
        }
    }
    Ok(out)
}

/// A linear subspace of F_q^{sm}, stored by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpaceBasis {
    m: usize,
    s: usize,
    basis: Vec<Vec<Elem>>,
}

impl DualSpaceBasis {
    pub fn new(fq: &Field, m: usize, s: usize, basis: Vec<Vec<Elem>>) -> Result<Self> {
        if basis.iter().any(|v| v.len() != s * m) {
            return Err(Error::Shape(format!("basis vectors must have length {}", s * m)));
        }
        if !basis.is_empty() && Matrix::from_rows(basis.clone())?.rank(fq) != basis.len() {
            return Err(Error::Invariant("basis vectors are linearly dependent".into()));
        }
        Ok(DualSpaceBasis { m, s, basis })
    }

    /// Right kernel of `system` (which must have `s * m` columns).
    pub fn kernel_of(fq: &Field, system: &Matrix, m: usize, s: usize) -> Result<Self> {
        if system.cols() != s * m {
            return Err(Error::Shape(format!("system has {} columns, expected {}", system.cols(), s * m)));
        }
        Ok(DualSpaceBasis { m, s, basis: system.kernel(fq) })
    }

    /// Kernel of a `(m+1)`-block system after deleting the last column of
    /// every block: the vectors of F_q^{sm} whose zero padding lies in the
    /// kernel of `system`.
    pub fn projected_kernel(fq: &Field, system: &Matrix, m_plus_1: usize, s: usize) -> Result<Self> {
        if m_plus_1 == 0 || system.cols() != s * m_plus_1 {
            return Err(Error::Shape("projection needs s blocks of length m+1".into()));
        }
        let m = m_plus_1 - 1;
        let keep: Vec<usize> = (0..s).flat_map(|i| (0..m).map(move |l| i * m_plus_1 + l)).collect();
        Self::kernel_of(fq, &system.select_cols(&keep), m, s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, fq: &Field, v: &[Elem]) -> Result<bool> {
        if v.len() != self.s * self.m {
            return Err(Error::Shape("vector length mismatch".into()));
        }
        if v.iter().all(|&c| c == 0) {
            return Ok(true);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(Matrix::from_rows(rows)?.rank(fq) == self.dim())
    }

    pub fn is_subspace_of(&self, fq: &Field, other: &DualSpaceBasis) -> Result<bool> {
        for v in &self.basis {
            if !other.contains(fq, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reorder the blocks: block `i` of the result is block `perm[i]`.
    pub fn permute_blocks(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.s {
            return Err(Error::Shape("permutation length differs from s".into()));
        }
        let m = self.m;
        let basis = self
            .basis
            .iter()
            .map(|v| perm.iter().flat_map(|&p| v[p * m..(p + 1) * m].iter().copied()).collect())
            .collect();
        Ok(DualSpaceBasis { m, s: self.s, basis })
    }

    fn combine(&self, fq: &Field, coeffs: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.s * self.m];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x = fq.add(*x, fq.mul(*c, *y));
            }
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceEngine {
    /// Enumerate the whole span.
    Exhaustive,
    /// Walk weight compositions in increasing total weight.
    ShapeSearch,
    /// Exhaustive when the span is small, shape search otherwise.
    Auto,
}

/// Minimum NRT weight with a vector attaining it (none for the zero space).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub value: usize,
    pub witness: Option<Vec<Elem>>,
}

/// delta_m of the space; `s*m + 1` for the zero space.
pub fn min_nrt_distance(fq: &Field, space: &DualSpaceBasis, engine: DistanceEngine) -> Result<usize> {
    Ok(min_nrt_distance_witness(fq, space, engine)?.value)
}

pub fn min_nrt_distance_witness(
    fq: &Field,
    space: &DualSpaceBasis,
    engine: DistanceEngine,
) -> Result<MinDistance> {
    let (m, s) = (space.m, space.s);
    if space.dim() == 0 {
        return Ok(MinDistance { value: s * m + 1, witness: None });
    }
    let span = (fq.q() as u64).checked_pow(space.dim() as u32);
    let small = span.is_some_and(|n| n <= EXHAUSTIVE_LIMIT);
    match engine {
        DistanceEngine::Exhaustive if !small => Err(Error::Capacity(format!(
            "span of dimension {} over F_{} is too large to enumerate",
            space.dim(),
            fq.q()
        ))),
        DistanceEngine::Exhaustive => Ok(exhaustive_distance(fq, space)),
        DistanceEngine::Auto if small => Ok(exhaustive_distance(fq, space)),
        _ => shape_distance(fq, space),
    }
}

fn exhaustive_distance(fq: &Field, space: &DualSpaceBasis) -> MinDistance {
    let q = fq.q() as Elem;
    let dim = space.dim();
    let mut coeffs = vec![0 as Elem; dim];
    let mut best = MinDistance { value: usize::MAX, witness: None };
    loop {
        // next coefficient tuple, skipping the zero tuple
        let mut k = 0;
        while k < dim {
            coeffs[k] += 1;
            if coeffs[k] < q {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == dim {
            break;
        }
        let v = space.combine(fq, &coeffs);
        let w = nrt_weight(&v, space.m, space.s).expect("shape checked");
        if w < best.value {
            best = MinDistance { value: w, witness: Some(v) };
        }
    }
    best
}

/// Calls `visit` with every tuple (v_1..v_s), 0 <= v_i <= caps[i], summing
/// to `total`, in lexicographic order. Stops early when `visit` returns true.
pub(crate) fn for_each_composition(
    total: usize,
    caps: &[usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    fn rec(
        i: usize,
        left: usize,
        caps: &[usize],
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == caps.len() {
            return left == 0 && visit(cur);
        }
        let rest: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(rest);
        for v in lo..=caps[i].min(left) {
            cur.push(v);
            let stop = rec(i + 1, left - v, caps, cur, visit);
            cur.pop();
            if stop {
                return true;
            }
        }
        false
    }
    rec(0, total, caps, &mut Vec::with_capacity(caps.len()), visit)
}

/// Increasing total weight w; for each shape (v_1..v_s) with sum w the
/// vectors of the space supported on the first v_i coordinates of each block
/// form the left kernel of the basis restricted to the other columns. The
/// first nonempty kernel gives delta = w: its nonzero vectors have weight at
/// most w and nothing lighter survived the earlier rounds.
fn shape_distance(fq: &Field, space: &DualSpaceBasis) -> Result<MinDistance> {
    let (m, s) = (space.m, space.s);
    let basis = Matrix::from_rows(space.basis.clone())?;
    let caps = vec![m; s];
    for w in 1..=s * m {
        let mut found = None;
        for_each_composition(w, &caps, &mut |shape| {
            let outside: Vec<usize> = (0..s)
                .flat_map(|i| (shape[i]..m).map(move |l| i * m + l))
                .collect();
            let restricted = basis.select_cols(&outside).transpose();
            if let Some(lambda) = restricted.kernel(fq).into_iter().next() {
                found = Some(space.combine(fq, &lambda));
                return true;
            }
            false
        });
        if let Some(v) = found {
            debug_assert_eq!(nrt_weight(&v, m, s).unwrap(), w);
            return Ok(MinDistance { value: w, witness: Some(v) });
        }
    }
    unreachable!("a nonzero space has a vector of weight at most s*m")
}

/// Figure of merit of a generating vector together with a minimizing
/// solution of the defining congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeritReport {
    pub m: usize,
    pub rho: usize,
    /// Nonzero k with alpha . k = 0 mod f attaining the minimum.
    pub witness: Vec<Poly>,
    /// Quality parameter m - rho.
    pub t: usize,
}

/// rho(alpha) = s - 1 + min sum_i deg(k_i) over nonzero solutions of
/// alpha . k = 0 (mod f), deg(0) = -1.
///
/// Ties are broken towards the lexicographically smallest coefficient
/// string, read from the last coordinate to the first, each coordinate
/// little-endian over `m` digits.
pub fn figure_of_merit(fq: &Field, alpha: &[Poly], f: &Poly, m: usize) -> Result<MeritReport> {
    if alpha.iter().all(Poly::is_zero) {
        return Err(Error::Domain("generating vector is zero".into()));
    }
    if f.deg() != m as i64 {
        return Err(Error::Shape(format!("modulus {f} has degree {}, expected {m}", f.deg())));
    }
    if let Some(a) = alpha.iter().find(|a| a.deg() >= m as i64) {
        return Err(Error::Domain(format!("{a} is not reduced modulo {f}")));
    }
    let s = alpha.len();
    let caps = vec![m; s];
    match min_degree_solution(fq, alpha, f, &caps)? {
        Some((size, witness)) => {
            let rho = size - 1;
            Ok(MeritReport { m, rho, witness, t: m - rho.min(m) })
        }
        None => Ok(MeritReport { m, rho: s * m, witness: Vec::new(), t: 0 }),
    }
}

/// Smallest `sum_i (deg k_i + 1)` over nonzero k with `deg k_i < caps[i]`
/// and `sum_i alpha_i k_i = 0 mod f`, with the tie-broken minimizer.
///
/// Degree shapes are visited by increasing size; a shape is feasible iff
/// the polynomial system restricted to it has a nonzero kernel, and every
/// nonzero kernel vector of a minimal feasible shape attains the minimum.
pub(crate) fn min_degree_solution(
    fq: &Field,
    alpha: &[Poly],
    f: &Poly,
    caps: &[usize],
) -> Result<Option<(usize, Vec<Poly>)>> {
    let n = f.deg().max(0) as usize;
    let s = alpha.len();
    // products[i][l] = coefficients of alpha_i x^l mod f
    let mut products = Vec::with_capacity(s);
    for (a, &cap) in alpha.iter().zip(caps) {
        let mut g = a.rem(f, fq)?;
        let mut col = Vec::with_capacity(cap);
        for _ in 0..cap {
            col.push(g.padded(n)?);
            g = g.shift(1).rem(f, fq)?;
        }
        products.push(col);
    }
    let total_cap: usize = caps.iter().sum();
    for size in 1..=total_cap {
        let mut best: Option<Vec<Elem>> = None;
        for_each_composition(size, caps, &mut |shape| {
            // columns ordered by significance: last coordinate first, powers ascending
            let mut cols = Vec::new();
            let mut place = Vec::new();
            for i in (0..s).rev() {
                for l in 0..shape[i] {
                    cols.push(products[i][l].clone());
                    place.push((i, l));
                }
            }
            let system = Matrix::from_cols(&cols).expect("equal column lengths");
            let kernel = system.kernel(fq);
            if kernel.is_empty() {
                return false;
            }
            let (r, _) = Matrix::from_rows(kernel).expect("rectangular").rref(fq);
            let last = r.row(r.rows() - 1);
            let mut full = vec![0 as Elem; total_cap];
            let offsets: Vec<usize> = {
                // offset of coordinate i inside the significance-ordered string
                let mut off = vec![0; s];
                let mut acc = 0;
                for i in (0..s).rev() {
                    off[i] = acc;
                    acc += caps[i];
                }
                off
            };
            for (&(i, l), &c) in place.iter().zip(last) {
                full[offsets[i] + l] = c;
            }
            if best.as_ref().is_none_or(|b| full < *b) {
                best = Some(full);
            }
            false
        });
        if let Some(full) = best {
            let mut witness = vec![Poly::zero(); s];
            let mut acc = 0;
            for i in (0..s).rev() {
                witness[i] = Poly::new(full[acc..acc + caps[i]].to_vec());
                acc += caps[i];
            }
            return Ok(Some((size, witness)));
        }
    }
    Ok(None)
}

/// `sum_i alpha_i k_i mod f`.
pub fn congruence_residue(fq: &Field, alpha: &[Poly], k: &[Poly], f: &Poly) -> Result<Poly> {
    if alpha.len() != k.len() {
        return Err(Error::Shape("alpha and k differ in length".into()));
    }
    alpha.iter().zip(k).try_fold(Poly::zero(), |acc, (a, b)| {
        Ok(acc.add(&a.mul_mod(b, f, fq)?, fq))
    })
}
