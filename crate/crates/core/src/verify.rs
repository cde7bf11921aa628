//! Elementary-interval checks of (t,m,s)-nets and block checks of
//! (T,s)-sequences.
//!
//! A point lies in the elementary box of shape (d_1..d_s) and corner
//! (a_1..a_s) iff the first d_i digits of coordinate i spell a_i, so every
//! shape is handled by one bucketing pass over the points.

use std::fmt;

use rayon::prelude::*;

use crate::duality::for_each_composition;
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::seqgen::{generate_sequence_points, QualityProfile, SeqSpec};

/// An elementary box holding fewer than q^t points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingBox {
    pub shape: Vec<usize>,
    /// Box `prod_i [a_i q^{-d_i}, (a_i + 1) q^{-d_i})`.
    pub corner: Vec<u64>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetCheckReport {
    pub passed: bool,
    pub t_tested: usize,
    pub failure: Option<FailingBox>,
}

impl fmt::Display for NetCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RESULT {}", if self.passed { "pass" } else { "fail" })?;
        writeln!(f, "T_TESTED {}", self.t_tested)?;
        if let Some(b) = &self.failure {
            writeln!(f, "FAIL_SHAPE {}", join(&b.shape))?;
            writeln!(f, "FAIL_BOX {}", join(&b.corner))?;
            writeln!(f, "FAIL_COUNT {}", b.count)?;
        }
        Ok(())
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// All shapes with `sum d_i = total`, d_1 descending first.
fn shapes(s: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_composition(total, &vec![total + 1; s], &mut |d| {
        out.push(d.to_vec());
        false
    });
    out.reverse();
    out
}

fn first_underfull(points: &PointSet, shape: &[usize], target: u64) -> Option<FailingBox> {
    let q = points.q() as usize;
    let cells: usize = shape.iter().map(|&d| q.pow(d as u32)).product();
    let mut counts = vec![0u64; cells];
    for k in 0..points.len() {
        let mut idx = 0usize;
        for (i, &d) in shape.iter().enumerate() {
            for &digit in &points.coord(k, i)[..d] {
                idx = idx * q + digit as usize;
            }
        }
        counts[idx] += 1;
    }
    let cell = counts.iter().position(|&c| c < target)?;
    let mut corner = vec![0u64; shape.len()];
    let mut rest = cell;
    for i in (0..shape.len()).rev() {
        let width = q.pow(shape[i] as u32);
        corner[i] = (rest % width) as u64;
        rest /= width;
    }
    Some(FailingBox { shape: shape.to_vec(), corner, count: counts[cell] })
}

/// Whether `points` (exactly q^m of them, at least m digits each) form a
/// (t,m,s)-net. Reports the first under-filled box in shape order.
pub fn check_tms_net(points: &PointSet, m: usize, t: usize) -> Result<NetCheckReport> {
    let q = points.q() as u64;
    let n = q
        .checked_pow(m as u32)
        .ok_or_else(|| Error::Capacity(format!("q^{m} overflows")))?;
    if points.len() as u64 != n {
        return Err(Error::Shape(format!("{} points, a net with m = {m} has {n}", points.len())));
    }
    if points.precision() < m {
        return Err(Error::PrecisionExceeded { needed: m, available: points.precision() });
    }
    if t > m {
        return Err(Error::Domain(format!("t = {t} exceeds m = {m}")));
    }
    let target = q.pow(t as u32);
    let failure = shapes(points.s(), m - t)
        .par_iter()
        .find_map_first(|shape| first_underfull(points, shape, target));
    Ok(NetCheckReport { passed: failure.is_none(), t_tested: t, failure })
}

/// Smallest t for which the points form a (t,m,s)-net.
pub fn strict_t(points: &PointSet, m: usize) -> Result<usize> {
    for t in 0..=m {
        if check_tms_net(points, m, t)?.passed {
            return Ok(t);
        }
    }
    unreachable!("every set of q^m points is an (m,m,s)-net")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceCheckReport {
    pub passed: bool,
    pub blocks_tested: usize,
    /// (m, k, report) of the first failing block.
    pub failure: Option<(usize, u64, NetCheckReport)>,
}

impl fmt::Display for SequenceCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RESULT {}", if self.passed { "pass" } else { "fail" })?;
        writeln!(f, "BLOCKS_TESTED {}", self.blocks_tested)?;
        if let Some((m, k, r)) = &self.failure {
            writeln!(f, "FAIL_BLOCK m={m} k={k}")?;
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// For m = 1..m_max and k = 0..k_max, whether the points with index in
/// [k q^m, (k+1) q^m), truncated to m digits, form a (T(m),m,s)-net.
#[allow(non_snake_case)]
pub fn check_T_sequence(
    spec: &SeqSpec,
    profile: &QualityProfile,
    m_max: usize,
    k_max: u64,
) -> Result<SequenceCheckReport> {
    if profile.m_max() < m_max {
        return Err(Error::Shape(format!("profile covers m <= {}, need {m_max}", profile.m_max())));
    }
    let q = spec.field.q() as u64;
    let count = q
        .checked_pow(m_max as u32)
        .and_then(|b| b.checked_mul(k_max + 1))
        .ok_or_else(|| Error::Capacity("block range overflows".into()))?;
    let all = generate_sequence_points(spec, 0, count, m_max)?;
    let mut blocks_tested = 0;
    for m in 1..=m_max {
        let size = q.pow(m as u32) as usize;
        for k in 0..=k_max {
            let block = all.slice(k as usize * size..(k as usize + 1) * size).truncate(m)?;
            let report = check_tms_net(&block, m, profile.at(m))?;
            blocks_tested += 1;
            if !report.passed {
                return Ok(SequenceCheckReport { passed: false, blocks_tested, failure: Some((m, k, report)) });
            }
        }
    }
    Ok(SequenceCheckReport { passed: true, blocks_tested, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Poly, SeriesPrefix};
    use crate::seqgen::quality_function_T;

    fn rational_set(q: u32, m: usize, coords: &[(u64, u64)]) -> PointSet {
        let mut text = format!("# q={q} s=2 m={m} format=rational\n");
        let den = (q as u64).pow(m as u32);
        for (a, b) in coords {
            text.push_str(&format!("{a}/{den} {b}/{den}\n"));
        }
        PointSet::parse(&text).unwrap()
    }

    #[test]
    fn net_examples() {
        let net = rational_set(2, 2, &[(0, 0), (2, 2), (1, 3), (3, 1)]);
        assert!(check_tms_net(&net, 2, 0).unwrap().passed);
        assert_eq!(strict_t(&net, 2).unwrap(), 0);

        let grid = rational_set(2, 2, &[(0, 0), (0, 2), (2, 0), (2, 2)]);
        let r = check_tms_net(&grid, 2, 0).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failure, Some(FailingBox { shape: vec![2, 0], corner: vec![1, 0], count: 0 }));
        assert_eq!(r.to_string(), "RESULT fail\nT_TESTED 0\nFAIL_SHAPE 2,0\nFAIL_BOX 1,0\nFAIL_COUNT 0\n");
        assert_eq!(strict_t(&grid, 2).unwrap(), 1);

        let origin = rational_set(2, 2, &[(0, 0); 4]);
        assert_eq!(strict_t(&origin, 2).unwrap(), 2);
        assert!(check_tms_net(&origin, 2, 2).unwrap().passed);
        assert!(matches!(check_tms_net(&origin, 3, 0), Err(Error::Shape(_))));
    }

    #[test]
    fn shape_order() {
        assert_eq!(shapes(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(shapes(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(shapes(3, 2).len(), 6);
    }

    #[test]
    fn net_check_is_monotone_in_t() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let m = rng.gen_range(1..=4);
            let s = rng.gen_range(1..=3);
            let n = 1usize << m;
            let digits = (0..n * s * m).map(|_| rng.gen_range(0..2)).collect();
            let pts = PointSet::new(2, s, m, digits).unwrap();
            let passes: Vec<bool> = (0..=m).map(|t| check_tms_net(&pts, m, t).unwrap().passed).collect();
            let first = passes.iter().position(|&p| p).unwrap();
            assert!(passes[first..].iter().all(|&p| p));
            assert_eq!(strict_t(&pts, m).unwrap(), first);
        }
    }

    #[test]
    fn sequence_check_examples() {
        let f2 = Field::binary();
        let alpha = vec![
            SeriesPrefix::from_poly(&Poly::one(), 8).unwrap(),
            SeriesPrefix::from_poly(&Poly::new(vec![1, 1]), 8).unwrap(),
        ];
        let spec = SeqSpec::canonical(f2, alpha).unwrap();
        let prof = QualityProfile::from_values((1..=4).map(|m: usize| m.saturating_sub(2)).collect());
        assert_eq!(prof, QualityProfile::from_values(quality_function_T(&spec, 4).unwrap().t));
        let r = check_T_sequence(&spec, &prof, 4, 3).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.blocks_tested, 16);

        let lowered = QualityProfile::from_values(vec![0, 0, 0, 2]);
        let r = check_T_sequence(&spec, &lowered, 4, 3).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failure.as_ref().unwrap().0, 3);

        let trivial = QualityProfile::from_values((1..=4).collect());
        assert!(check_T_sequence(&spec, &trivial, 4, 3).unwrap().passed);
        assert!(matches!(check_T_sequence(&spec, &prof, 4, 16), Err(Error::Capacity(_))));
    }
}
