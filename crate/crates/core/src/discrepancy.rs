//! Exact star discrepancy of digit-exact point sets.
//!
//! All coordinates are fractions over the common denominator D = q^P, so
//! every comparison is an integer comparison.
//!
//! For an anchored box [0, a) the local discrepancy is A([0,a))/N - vol(a).
//! Moving a_i up to the next point coordinate (or 1) only increases the
//! volume while the open count stays put, so sup(vol - A/N) is attained at a
//! corner whose entries are point coordinates or 1, with open counts. For
//! the other sign, shrink a_i down towards the largest point coordinate
//! below it: the count stays constant while the volume decreases, and the
//! limit is the closed count at a corner built from point coordinates.
//! Both maxima are therefore found on the finite grid of distinct point
//! coordinates together with 1.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::points::PointSet;

/// Largest corner grid that will be allocated.
pub const CORNER_LIMIT: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    /// Value num/den in lowest terms.
    pub num: u128,
    pub den: u128,
    /// Corner a of the maximizing box, numerators over `corner_den`.
    pub corner: Vec<u64>,
    pub corner_den: u64,
    /// Whether the maximum is the closed-count term A([0,a])/N - vol.
    pub closed: bool,
    /// Whether the value is exact or only a lower bound.
    pub exact: bool,
}

impl DiscrepancyReport {
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The value rounded down to `digits` decimal places.
    pub fn decimal(&self, digits: usize) -> String {
        let value = num_rational::BigRational::new(self.num.into(), self.den.into());
        crate::search::decimal(&value, digits)
    }
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = if self.exact { "DSTAR" } else { "DSTAR_LOWER" };
        writeln!(f, "{key} {}/{}", self.num, self.den)?;
        let corner: Vec<String> = self.corner.iter().map(|a| format!("{a}/{}", self.corner_den)).collect();
        writeln!(f, "CORNER {} {}", corner.join(","), if self.closed { "closed" } else { "open" })
    }
}

struct Best {
    num: u128,
    corner: Vec<u64>,
    closed: bool,
}

fn overflow() -> Error {
    Error::Capacity("discrepancy numerators overflow 128 bits".into())
}

/// Tracks the maximum of `max(N vol - open D^s, closed D^s - N vol)`.
struct Scorer {
    n: u128,
    ds: u128,
    best: Option<Best>,
}

impl Scorer {
    fn new(n: usize, d: u64, s: usize) -> Result<Self> {
        let ds = (d as u128).checked_pow(s as u32).ok_or_else(overflow)?;
        (n as u128).checked_mul(ds).ok_or_else(overflow)?;
        Ok(Scorer { n: n as u128, ds, best: None })
    }

    fn visit(&mut self, corner: &[u64], open: u64, closed: u64) -> Result<()> {
        let vol = corner.iter().try_fold(1u128, |acc, &a| acc.checked_mul(a as u128)).ok_or_else(overflow)?;
        let nvol = vol.checked_mul(self.n).ok_or_else(overflow)?;
        let open = open as u128 * self.ds;
        let closed = closed as u128 * self.ds;
        for (num, is_closed) in [(nvol.saturating_sub(open), false), (closed.saturating_sub(nvol), true)] {
            if self.best.as_ref().is_none_or(|b| num > b.num) {
                self.best = Some(Best { num, corner: corner.to_vec(), closed: is_closed });
            }
        }
        Ok(())
    }

    fn finish(self, d: u64, exact: bool) -> DiscrepancyReport {
        let den = self.n * self.ds;
        let best = self.best.unwrap_or(Best { num: 0, corner: Vec::new(), closed: false });
        let g = best.num.gcd(&den).max(1);
        DiscrepancyReport {
            num: best.num / g,
            den: den / g,
            corner: best.corner,
            corner_den: d,
            closed: best.closed,
            exact,
        }
    }
}

fn check_nonempty(points: &PointSet) -> Result<u64> {
    if points.is_empty() || points.s() == 0 {
        return Err(Error::Domain("star discrepancy of an empty point set".into()));
    }
    points.denominator()
}

/// Exact D*_N over the critical corner grid.
pub fn star_discrepancy_exact(points: &PointSet) -> Result<DiscrepancyReport> {
    let d = check_nonempty(points)?;
    let (n, s) = (points.len(), points.s());
    // per axis: sorted distinct coordinates, then 1
    let mut grids: Vec<Vec<u64>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut g: Vec<u64> = (0..n).map(|k| points.numerator(k, i)).collect();
        g.sort_unstable();
        g.dedup();
        g.push(d);
        grids.push(g);
    }
    let dims: Vec<usize> = grids.iter().map(Vec::len).collect();
    let cells = dims
        .iter()
        .try_fold(1usize, |acc, &l| acc.checked_mul(l))
        .filter(|&c| c <= CORNER_LIMIT)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "corner grid {dims:?} exceeds {CORNER_LIMIT} cells; use the grid lower bound instead"
            ))
        })?;
    // closed[j] = #{points with grid position <= j componentwise}
    let mut closed = vec![0u64; cells];
    let strides: Vec<usize> = (0..s).map(|i| dims[i + 1..].iter().product()).collect();
    for k in 0..n {
        let idx: usize = (0..s)
            .map(|i| grids[i].binary_search(&points.numerator(k, i)).unwrap() * strides[i])
            .sum();
        closed[idx] += 1;
    }
    for i in 0..s {
        for idx in 0..cells {
            if (idx / strides[i]) % dims[i] > 0 {
                closed[idx] += closed[idx - strides[i]];
            }
        }
    }
    let mut scorer = Scorer::new(n, d, s)?;
    let mut pos = vec![0usize; s];
    let mut corner = vec![0u64; s];
    for idx in 0..cells {
        let mut rest = idx;
        for i in 0..s {
            pos[i] = rest / strides[i];
            rest %= strides[i];
            corner[i] = grids[i][pos[i]];
        }
        // open count: closed count one grid step below on every axis
        let open = if pos.iter().all(|&p| p > 0) {
            closed[idx - strides.iter().sum::<usize>()]
        } else {
            0
        };
        scorer.visit(&corner, open, closed[idx])?;
    }
    Ok(scorer.finish(d, true))
}

/// Lower bound for D*_N from the boxes [0, a) and [0, a] with every a_i in
/// {0, 1/r, ..., 1} for r = `resolution`.
pub fn star_discrepancy_grid(points: &PointSet, resolution: u64) -> Result<DiscrepancyReport> {
    let d = check_nonempty(points)?;
    if resolution == 0 {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let (n, s) = (points.len(), points.s());
    let d_grid = d.checked_mul(resolution).ok_or_else(overflow)?;
    let side = resolution as usize + 1;
    let cells = side
        .checked_pow(s as u32)
        .filter(|&c| c.saturating_mul(n) <= 1 << 34)
        .ok_or_else(|| Error::Capacity("grid lower bound too large".into()))?;
    let mut scorer = Scorer::new(n, d_grid, s)?;
    let mut corner = vec![0u64; s];
    for idx in 0..cells {
        let mut rest = idx;
        for c in corner.iter_mut().rev() {
            *c = (rest % side) as u64 * d;
            rest /= side;
        }
        let (mut open, mut closed) = (0, 0);
        for k in 0..n {
            let (mut lt, mut le) = (true, true);
            for (i, &a) in corner.iter().enumerate() {
                let x = points.numerator(k, i) * resolution;
                lt &= x < a;
                le &= x <= a;
            }
            open += lt as u64;
            closed += le as u64;
        }
        scorer.visit(&corner, open, closed)?;
    }
    Ok(scorer.finish(d_grid, false))
}
