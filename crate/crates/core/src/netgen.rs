//! Hyperplane nets: companion-matrix representation of residues, ordered
//! bases, generator matrices and digital point generation.

use rayon::prelude::*;

use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::points::PointSet;

/// Ordered basis of F_q[x]/(f) as an F_q vector space, `deg(f) = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBasis {
    elems: Vec<Poly>,
    /// Columns are the canonical coordinates of the basis elements.
    change: Matrix,
    inverse: Matrix,
}

impl OrderedBasis {
    pub fn new(fq: &Field, m: usize, elems: Vec<Poly>) -> Result<Self> {
        if elems.len() != m {
            return Err(Error::Shape(format!("basis of R_m needs {m} elements, got {}", elems.len())));
        }
        let cols = elems.iter().map(|e| e.padded(m)).collect::<Result<Vec<_>>>()?;
        let change = if m == 0 { Matrix::zeros(0, 0) } else { Matrix::from_cols(&cols)? };
        let inverse = change
            .inverse(fq)
            .ok_or_else(|| Error::Domain("basis elements are linearly dependent".into()))?;
        Ok(OrderedBasis { elems, change, inverse })
    }

    /// {1, x, ..., x^(m-1)}
    pub fn canonical(m: usize) -> Self {
        OrderedBasis {
            elems: (0..m).map(Poly::x_pow).collect(),
            change: Matrix::identity(m),
            inverse: Matrix::identity(m),
        }
    }

    pub fn m(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[Poly] {
        &self.elems
    }

    /// Basis change matrix B into the canonical basis.
    pub fn change_matrix(&self) -> &Matrix {
        &self.change
    }

    /// Coordinates of `k` (deg k < m) with respect to this basis.
    pub fn coordinates(&self, fq: &Field, k: &Poly) -> Result<Vec<Elem>> {
        self.inverse.mul_vec(&k.padded(self.m())?, fq)
    }

    pub fn element(&self, fq: &Field, coords: &[Elem]) -> Result<Poly> {
        Ok(Poly::new(self.change.mul_vec(coords, fq)?))
    }
}

/// Matrix of multiplication by x on F_q[x]/(f) in the canonical basis.
pub fn companion_matrix(fq: &Field, f: &Poly) -> Result<Matrix> {
    if f.deg() < 1 {
        return Err(Error::Domain(format!("modulus {f} must have degree >= 1")));
    }
    let m = f.deg() as usize;
    let cols = (0..m)
        .map(|j| Poly::x_pow(j + 1).rem(f, fq)?.padded(m))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_cols(&cols)
}

/// Psi(g): the matrix of multiplication by g on F_q[x]/(f).
///
/// For `f = x^m` this is the lower triangular Toeplitz matrix with first
/// column the coefficients of g; otherwise it is g evaluated by Horner's
/// rule at the companion matrix of f.
pub fn companion_psi(fq: &Field, g: &Poly, f: &Poly) -> Result<Matrix> {
    if f.deg() < 1 {
        return Err(Error::Domain(format!("modulus {f} must have degree >= 1")));
    }
    let m = f.deg() as usize;
    if g.deg() >= m as i64 {
        return Err(Error::Domain(format!("{g} is not reduced modulo {f}")));
    }
    if *f == Poly::x_pow(m) {
        return Ok(lower_toeplitz(g.coeffs(), m));
    }
    let x = companion_matrix(fq, f)?;
    let mut acc = Matrix::zeros(m, m);
    for &c in g.coeffs().iter().rev() {
        acc = acc.mul(&x, fq)?.add(&Matrix::identity(m).scale(c, fq), fq)?;
    }
    Ok(acc)
}

/// `n x n` lower triangular Toeplitz matrix with first column `coeffs`
/// (zero beyond its length).
pub fn lower_toeplitz(coeffs: &[Elem], n: usize) -> Matrix {
    let mut t = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..=r {
            t.set(r, c, coeffs.get(r - c).copied().unwrap_or(0));
        }
    }
    t
}

/// theta: concatenated coordinate vectors of k_i with respect to the bases.
pub fn theta_encode(fq: &Field, k: &[Poly], bases: &[OrderedBasis]) -> Result<Vec<Elem>> {
    if k.len() != bases.len() {
        return Err(Error::Shape("one basis per coordinate is required".into()));
    }
    let mut out = Vec::new();
    for (ki, b) in k.iter().zip(bases) {
        out.extend(b.coordinates(fq, ki)?);
    }
    Ok(out)
}

pub fn theta_decode(fq: &Field, v: &[Elem], bases: &[OrderedBasis]) -> Result<Vec<Poly>> {
    let total: usize = bases.iter().map(OrderedBasis::m).sum();
    if v.len() != total {
        return Err(Error::Shape(format!("vector of length {} for total dimension {total}", v.len())));
    }
    let mut out = Vec::with_capacity(bases.len());
    let mut off = 0;
    for b in bases {
        out.push(b.element(fq, &v[off..off + b.m()])?);
        off += b.m();
    }
    Ok(out)
}

/// Parameters of a hyperplane net.
#[derive(Clone, Debug)]
pub struct NetSpec {
    pub field: Field,
    pub m: usize,
    pub f: Poly,
    pub alpha: Vec<Poly>,
    pub bases: Vec<OrderedBasis>,
}

impl NetSpec {
    pub fn new(field: Field, f: Poly, alpha: Vec<Poly>, bases: Vec<OrderedBasis>) -> Result<Self> {
        if f.deg() < 1 {
            return Err(Error::Domain(format!("modulus {f} must have degree >= 1")));
        }
        let m = f.deg() as usize;
        if alpha.iter().all(Poly::is_zero) {
            return Err(Error::Domain("generating vector is zero".into()));
        }
        if let Some(a) = alpha.iter().find(|a| a.deg() >= m as i64) {
            return Err(Error::Domain(format!("{a} is not reduced modulo {f}")));
        }
        if bases.len() != alpha.len() || bases.iter().any(|b| b.m() != m) {
            return Err(Error::Shape(format!("need {} bases of dimension {m}", alpha.len())));
        }
        Ok(NetSpec { field, m, f, alpha, bases })
    }

    /// Canonical bases in every coordinate.
    pub fn canonical(field: Field, f: Poly, alpha: Vec<Poly>) -> Result<Self> {
        let m = f.deg().max(0) as usize;
        let bases = vec![OrderedBasis::canonical(m); alpha.len()];
        NetSpec::new(field, f, alpha, bases)
    }

    pub fn s(&self) -> usize {
        self.alpha.len()
    }
}

/// The generating matrices C_1..C_s of a digital net or sequence prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFamily {
    matrices: Vec<Matrix>,
}

impl GeneratorFamily {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let shape = matrices.first().map(|c| (c.rows(), c.cols()));
        if matrices.iter().any(|c| Some((c.rows(), c.cols())) != shape) {
            return Err(Error::Shape("generator matrices differ in shape".into()));
        }
        Ok(GeneratorFamily { matrices })
    }

    pub fn s(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn rows(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    pub fn cols(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::cols)
    }

    /// (C_1^T C_2^T ... C_s^T)
    pub fn overall(&self) -> Result<Matrix> {
        let t: Vec<Matrix> = self.matrices.iter().map(Matrix::transpose).collect();
        Matrix::hstack(&t)
    }

    /// Upper-left `rows x cols` blocks of every matrix.
    pub fn top_left(&self, rows: usize, cols: usize) -> Result<GeneratorFamily> {
        let matrices = self.matrices.iter().map(|c| c.top_left(rows, cols)).collect::<Result<_>>()?;
        Ok(GeneratorFamily { matrices })
    }

    /// Right multiplication of every matrix by the same `p`.
    pub fn mul_right(&self, p: &Matrix, fq: &Field) -> Result<GeneratorFamily> {
        let matrices = self.matrices.iter().map(|c| c.mul(p, fq)).collect::<Result<_>>()?;
        Ok(GeneratorFamily { matrices })
    }
}

/// C_i = (Psi(alpha_i) B_i)^T.
pub fn net_generator_matrices(spec: &NetSpec) -> Result<GeneratorFamily> {
    let fq = &spec.field;
    let matrices = spec
        .alpha
        .iter()
        .zip(&spec.bases)
        .map(|(a, b)| Ok(companion_psi(fq, a, &spec.f)?.mul(b.change_matrix(), fq)?.transpose()))
        .collect::<Result<Vec<_>>>()?;
    GeneratorFamily::new(matrices)
}

/// Digits of k in base q, least significant first, `len` of them.
pub(crate) fn index_digits(mut k: u64, q: u32, len: usize) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let d = (k % q as u64) as Elem;
            k /= q as u64;
            d
        })
        .collect()
}

/// Points k in `range` of the digital construction: coordinate i of point k
/// has digits C_i (kappa_0, kappa_1, ...)^T. The matrices must have at least
/// as many columns as k has base-q digits.
pub(crate) fn digital_points(
    fq: &Field,
    gens: &GeneratorFamily,
    range: std::ops::Range<u64>,
) -> Result<PointSet> {
    let (rows, cols) = (gens.rows(), gens.cols());
    let q = fq.q();
    let limit = (q as u64).checked_pow(cols as u32);
    if limit.is_some_and(|l| range.end > l) {
        return Err(Error::Capacity(format!(
            "index {} needs more than {cols} base-{q} digits",
            range.end - 1
        )));
    }
    let s = gens.s();
    let digits: Vec<Elem> = range
        .into_par_iter()
        .flat_map_iter(|k| {
            let kappa = index_digits(k, q, cols);
            (0..s)
                .flat_map(|i| gens.get(i).mul_vec(&kappa, fq).expect("column count matches"))
                .collect::<Vec<_>>()
        })
        .collect();
    PointSet::new(q, s, rows, digits)
}

/// All q^m points of the digital net with square m x m generators, k ascending.
pub fn generate_net_points(fq: &Field, gens: &GeneratorFamily) -> Result<PointSet> {
    if gens.rows() != gens.cols() {
        return Err(Error::Shape("net generators must be square".into()));
    }
    let n = (fq.q() as u64)
        .checked_pow(gens.rows() as u32)
        .filter(|&n| n <= 1 << 26)
        .ok_or_else(|| Error::Capacity(format!("q^{} points are too many", gens.rows())))?;
    digital_points(fq, gens, 0..n)
}
