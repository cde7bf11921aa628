//! Larcher-Niederreiter sequences from Hankel matrices, the rank condition
//! on generator prefixes and equivalence up to a common NUT factor.
//!
//! A series g = c_1 z + c_2 z^2 + ... in zF_q[[z]] is stored as its
//! coefficients c_1, c_2, ... (the index-0 entry is c_1). Generator entry
//! (j, k), 1-based, is c_{j+k-1}.

use crate::algebra::{Elem, Field, SeriesPrefix};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::netgen::GeneratorFamily;
use crate::seqgen::{check_known_keys, lookup, parse_key_values, required};

#[derive(Clone, Debug)]
pub struct LnSpec {
    pub field: Field,
    /// Coefficients c_1, c_2, ... of every g_i.
    pub g: Vec<SeriesPrefix>,
}

impl LnSpec {
    pub fn new(field: Field, g: Vec<SeriesPrefix>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::Domain("dimension s must be positive".into()));
        }
        let precision = g[0].precision();
        if g.iter().any(|c| c.precision() != precision) {
            return Err(Error::Shape("series prefixes differ in precision".into()));
        }
        Ok(LnSpec { field, g })
    }

    pub fn s(&self) -> usize {
        self.g.len()
    }

    /// Number of known coefficients c_1..c_M.
    pub fn precision(&self) -> usize {
        self.g[0].precision()
    }

    /// Lines `q=`, `s=`, `M=` and `g_i=` with c_1 first.
    pub fn parse(text: &str) -> Result<LnSpec> {
        let kv = parse_key_values(text)?;
        let field = Field::new(required(&kv, "q")?)?;
        let s: usize = required(&kv, "s")?;
        let m: usize = required(&kv, "M")?;
        let mut g = Vec::with_capacity(s);
        for i in 1..=s {
            let raw = lookup(&kv, &format!("g_{i}")).ok_or_else(|| Error::Parse(format!("missing g_{i}")))?;
            let c = SeriesPrefix::parse(raw, &field)?;
            if c.precision() != m {
                return Err(Error::Parse(format!("g_{i} has {} coefficients, M = {m}", c.precision())));
            }
            g.push(c);
        }
        check_known_keys(&kv, s, &["q", "s", "M"], &["g_"])?;
        LnSpec::new(field, g)
    }

    pub fn render(&self) -> String {
        let mut out = format!("q={}\ns={}\nM={}\n", self.field.q(), self.s(), self.precision());
        for (i, c) in self.g.iter().enumerate() {
            out.push_str(&format!("g_{}={}\n", i + 1, c.to_digits()));
        }
        out
    }
}

/// m x m Hankel prefixes of the generator matrices; needs c_1..c_{2m-1}.
pub fn ln_generator_matrices(spec: &LnSpec, m: usize) -> Result<GeneratorFamily> {
    let needed = (2 * m).saturating_sub(1);
    if needed > spec.precision() {
        return Err(Error::PrecisionExceeded { needed, available: spec.precision() });
    }
    let matrices = spec
        .g
        .iter()
        .map(|c| hankel(&c.coeffs()[..needed], m))
        .collect();
    GeneratorFamily::new(matrices)
}

/// m x m matrix with entry (r, c) = coeffs[r + c], 0-based.
pub fn hankel(coeffs: &[Elem], m: usize) -> Matrix {
    let mut h = Matrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            h.set(r, c, coeffs[r + c]);
        }
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub m: usize,
    /// rank of C^(m,m+1).
    pub rank: usize,
    /// rank of C^(m).
    pub rank_m: usize,
    /// rank C^(m,m+1) = rank C^(m) + 1 = m + 1.
    pub pass: bool,
}

/// (C_1^T ... C_s^T) built from the `rows x cols` upper-left blocks.
fn stacked(gens: &GeneratorFamily, rows: usize, cols: usize) -> Result<Matrix> {
    let blocks = gens
        .matrices()
        .iter()
        .map(|c| Ok(c.top_left(rows, cols)?.transpose()))
        .collect::<Result<Vec<_>>>()?;
    Matrix::hstack(&blocks)
}

/// The rank condition for m = 1..m_max on prefixes of at least
/// (m_max + 1) x (m_max + 1).
pub fn rank_condition(fq: &Field, gens: &GeneratorFamily, m_max: usize) -> Result<Vec<RankWitness>> {
    if gens.rows() < m_max + 1 || gens.cols() < m_max + 1 {
        return Err(Error::Shape(format!(
            "prefixes of {}x{} cannot host m = {m_max}",
            gens.rows(),
            gens.cols()
        )));
    }
    (1..=m_max)
        .map(|m| {
            let rank = stacked(gens, m, m + 1)?.rank(fq);
            let rank_m = stacked(gens, m, m)?.rank(fq);
            Ok(RankWitness { m, rank, rank_m, pass: rank == m + 1 && rank_m == m })
        })
        .collect()
}

/// A NUT matrix P with B_i = A_i P for every i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NutEquivalence {
    pub p: Matrix,
    /// Whether P is the only such matrix.
    pub unique: bool,
}

/// Solve B_i = A_i P for one nonsingular upper triangular P.
///
/// Column c of P only meets columns 0..=c of every A_i, so the columns are
/// solved one at a time; the diagonal entry P[c][c] must be nonzero.
pub fn nut_equivalence(fq: &Field, a: &GeneratorFamily, b: &GeneratorFamily) -> Result<Option<NutEquivalence>> {
    if a.s() != b.s() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape("families differ in shape".into()));
    }
    let (rows, m) = (a.rows(), a.cols());
    let mut p = Matrix::zeros(m, m);
    let mut unique = true;
    for c in 0..m {
        let mut eq_rows = Vec::with_capacity(a.s() * rows);
        let mut rhs = Vec::with_capacity(a.s() * rows);
        for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
            for r in 0..rows {
                eq_rows.push(ai.row(r)[..=c].to_vec());
                rhs.push(bi.get(r, c));
            }
        }
        let system = Matrix::from_rows(eq_rows)?;
        let Some((mut x, kernel)) = system.solve(&rhs, fq)? else {
            return Ok(None);
        };
        unique &= kernel.is_empty();
        if x[c] == 0 {
            // some kernel vector moves the diagonal entry, or none does
            let Some(k) = kernel.iter().find(|k| k[c] != 0) else {
                return Ok(None);
            };
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi = fq.add(*xi, *ki);
            }
        }
        for (r, &v) in x.iter().enumerate() {
            p.set(r, c, v);
        }
    }
    Ok(Some(NutEquivalence { p, unique }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::netgen::{generate_net_points, net_generator_matrices, NetSpec};
    use crate::seqgen::{seq_generator_prefix, SeqSpec};
    use crate::verify::strict_t;
    use rand::{Rng, SeedableRng};

    fn ln(fq: &Field, gs: &[&[Elem]]) -> LnSpec {
        LnSpec::new(fq.clone(), gs.iter().map(|g| SeriesPrefix::new(g.to_vec())).collect()).unwrap()
    }

    fn hyper(fq: &Field, alphas: &[&[Elem]]) -> SeqSpec {
        SeqSpec::canonical(fq.clone(), alphas.iter().map(|a| SeriesPrefix::new(a.to_vec())).collect()).unwrap()
    }

    fn random_nut(rng: &mut impl Rng, q: u32, m: usize) -> Matrix {
        let mut p = Matrix::zeros(m, m);
        for r in 0..m {
            p.set(r, r, rng.gen_range(1..q) as Elem);
            for c in r + 1..m {
                p.set(r, c, rng.gen_range(0..q) as Elem);
            }
        }
        p
    }

    #[test]
    fn hankel_examples() {
        let f2 = Field::binary();
        let ones = ln(&f2, &[&[1; 5]]);
        let g = ln_generator_matrices(&ones, 3).unwrap();
        assert!(g.get(0).to_rows().iter().flatten().all(|&x| x == 1));
        let z = ln(&f2, &[&[1, 0, 0]]);
        assert_eq!(ln_generator_matrices(&z, 2).unwrap().get(0).to_rows(), vec![vec![1, 0], vec![0, 0]]);
        assert!(matches!(ln_generator_matrices(&z, 3), Err(Error::PrecisionExceeded { .. })));
    }

    #[test]
    fn text_round_trip() {
        let text = "q=3\ns=2\nM=3\ng_1=1,0,2\ng_2=0,1,1\n";
        let spec = LnSpec::parse(text).unwrap();
        assert_eq!(spec.g[0].coeffs(), &[1, 0, 2]);
        assert_eq!(spec.render(), text);
        assert!(LnSpec::parse("q=3\ns=2\nM=3\ng_1=1,0,2\n").is_err());
    }

    /// Digit j (1-based) of coordinate i of point h: coefficient of x^(m-j)
    /// in h g_i mod x^m.
    fn lattice_points(fq: &Field, g: &[Poly], m: usize) -> Vec<Vec<Elem>> {
        let q = fq.q() as u64;
        let mut out = Vec::new();
        for n in 0..q.pow(m as u32) {
            let h = Poly::new(crate::netgen::index_digits(n, fq.q(), m));
            let mut pt = Vec::new();
            for gi in g {
                let prod = h.mul(gi, fq).truncate(m);
                pt.extend((1..=m).map(|j| prod.coeff(m - j)));
            }
            out.push(pt);
        }
        out.sort();
        out
    }

    #[test]
    fn terminating_hankel_nets_are_polynomial_lattices() {
        let f2 = Field::binary();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for m in 1..=4 {
            for _ in 0..6 {
                // c_n = 0 for n > m
                let cs: Vec<Vec<Elem>> = (0..2)
                    .map(|_| (0..2 * m).map(|n| if n < m { rng.gen_range(0..2) } else { 0 }).collect())
                    .collect();
                let spec = LnSpec::new(f2.clone(), cs.iter().cloned().map(SeriesPrefix::new).collect()).unwrap();
                let pts = generate_net_points(&f2, &ln_generator_matrices(&spec, m).unwrap()).unwrap();
                let mut ours: Vec<Vec<Elem>> = pts.iter().map(<[Elem]>::to_vec).collect();
                ours.sort();
                // g_i = sum_j c_{i,j} x^(m-j)
                let g: Vec<Poly> = cs
                    .iter()
                    .map(|c| Poly::new((0..m).map(|l| c[m - 1 - l]).collect()))
                    .collect();
                assert_eq!(ours, lattice_points(&f2, &g, m));
                if g.iter().any(|p| !p.is_zero()) {
                    let net = NetSpec::canonical(f2.clone(), Poly::x_pow(m), g).unwrap();
                    let hp = generate_net_points(&f2, &net_generator_matrices(&net).unwrap()).unwrap();
                    let mut theirs: Vec<Vec<Elem>> = hp.iter().map(<[Elem]>::to_vec).collect();
                    theirs.sort();
                    assert_eq!(ours, theirs);
                    assert_eq!(strict_t(&pts, m).unwrap(), strict_t(&hp, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn rank_condition_examples() {
        let f2 = Field::binary();
        let spec = hyper(&f2, &[&[1, 0, 0, 0], &[1, 1, 0, 0]]);
        let g = seq_generator_prefix(&spec, 4).unwrap();
        let w = rank_condition(&f2, &g, 2).unwrap();
        assert_eq!((w[0].rank, w[0].pass), (2, true));
        assert_eq!((w[1].rank, w[1].pass), (3, true));
        assert_eq!(
            stacked(&g, 1, 2).unwrap().to_rows(),
            vec![vec![1, 1], vec![0, 1]]
        );
        let spec = hyper(&f2, &[&[1, 0, 0, 0], &[1, 0, 0, 0]]);
        let w = rank_condition(&f2, &seq_generator_prefix(&spec, 4).unwrap(), 1).unwrap();
        assert_eq!((w[0].rank, w[0].pass), (1, false));
        assert!(rank_condition(&f2, &g, 4).is_err());
    }

    #[test]
    fn nut_equivalence_recovers_constructed_factor() {
        let f3 = Field::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for m in 1..=5 {
            let alpha: Vec<Vec<Elem>> = (0..2)
                .map(|_| {
                    let mut a: Vec<Elem> = (0..m).map(|_| rng.gen_range(0..3)).collect();
                    a[0] = rng.gen_range(1..3);
                    a
                })
                .collect();
            let refs: Vec<&[Elem]> = alpha.iter().map(Vec::as_slice).collect();
            let a = seq_generator_prefix(&hyper(&f3, &refs), m).unwrap();
            let p = random_nut(&mut rng, 3, m);
            let b = a.mul_right(&p, &f3).unwrap();
            let found = nut_equivalence(&f3, &a, &b).unwrap().expect("constructed instance");
            assert!(found.p.is_nut());
            assert_eq!(a.mul_right(&found.p, &f3).unwrap(), b);
            // applying the found factor again reproduces it
            let again = nut_equivalence(&f3, &a, &a.mul_right(&found.p, &f3).unwrap()).unwrap().unwrap();
            assert_eq!(again.p, found.p);
            assert!(found.unique);
            let same = nut_equivalence(&f3, &a, &a).unwrap().unwrap();
            assert_eq!(same.p, Matrix::identity(m));
        }
    }

    #[test]
    fn degenerate_families_are_flagged_non_unique() {
        let f2 = Field::binary();
        let zero = GeneratorFamily::new(vec![Matrix::zeros(2, 2); 2]).unwrap();
        let r = nut_equivalence(&f2, &zero, &zero).unwrap().unwrap();
        assert!(!r.unique);
        assert!(r.p.is_nut());
    }

    #[test]
    fn hyperplane_prefixes_are_not_hankel_equivalent_at_m2() {
        let f2 = Field::binary();
        let a = seq_generator_prefix(&hyper(&f2, &[&[1, 0], &[1, 1]]), 2).unwrap();
        for n in 0..64u32 {
            let c: Vec<Elem> = (0..6).map(|j| ((n >> j) & 1) as Elem).collect();
            let spec = ln(&f2, &[&c[..3], &c[3..]]);
            let b = ln_generator_matrices(&spec, 2).unwrap();
            assert_eq!(nut_equivalence(&f2, &a, &b).unwrap(), None);
        }
    }
}
