//! Digit-exact point sets in [0,1)^s and their text file format.
//!
//! Coordinate `i` of a point is `sum_j d_{i,j} q^{-j}` for its stored digits
//! `d_{i,1}, ..., d_{i,M}`. The stored expansion is the point; values are
//! never re-derived from a rational.
//!
//! File format: comment lines start with `#`; the first comment line that
//! carries `q=`, `s=` and `m=` is the header (`m` is the digit precision,
//! `format` is `digits` or `rational`). Each further line is one point, its
//! coordinates separated by single spaces. A `digits` coordinate is the digit
//! string itself (`011`), with digits above 9 written as lowercase letters, or
//! colon separated decimal digits when q > 36. A `rational` coordinate is
//! `a/q^m` written as two integers (`3/8`).

use std::fmt::Write as _;

use crate::algebra::Elem;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    q: u32,
    s: usize,
    precision: usize,
    digits: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordFormat {
    Digits,
    Rational,
}

impl CoordFormat {
    pub fn name(self) -> &'static str {
        match self {
            CoordFormat::Digits => "digits",
            CoordFormat::Rational => "rational",
        }
    }
}

impl PointSet {
    /// `digits` holds the points back to back, each as `s` coordinates of
    /// `precision` digits.
    pub fn new(q: u32, s: usize, precision: usize, digits: Vec<Elem>) -> Result<Self> {
        let stride = s * precision;
        if stride == 0 && !digits.is_empty() || stride > 0 && digits.len() % stride != 0 {
            return Err(Error::Shape(format!(
                "{} digits do not split into points of {s} x {precision}",
                digits.len()
            )));
        }
        if let Some(d) = digits.iter().find(|&&d| d as u32 >= q) {
            return Err(Error::Domain(format!("digit {d} is not below q = {q}")));
        }
        Ok(PointSet { q, s, precision, digits })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn len(&self) -> usize {
        let stride = self.s * self.precision;
        if stride == 0 {
            0
        } else {
            self.digits.len() / stride
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, k: usize) -> &[Elem] {
        let stride = self.s * self.precision;
        &self.digits[k * stride..(k + 1) * stride]
    }

    pub fn coord(&self, k: usize, i: usize) -> &[Elem] {
        let start = (k * self.s + i) * self.precision;
        &self.digits[start..start + self.precision]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Points with index in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> PointSet {
        let stride = self.s * self.precision;
        let digits = self.digits[range.start * stride..range.end * stride].to_vec();
        PointSet { q: self.q, s: self.s, precision: self.precision, digits }
    }

    /// Keep the first `m` digits of every coordinate.
    pub fn truncate(&self, m: usize) -> Result<PointSet> {
        if m > self.precision {
            return Err(Error::PrecisionExceeded { needed: m, available: self.precision });
        }
        let digits = self
            .digits
            .chunks(self.precision.max(1))
            .flat_map(|c| c[..m].iter().copied())
            .collect();
        PointSet::new(self.q, self.s, m, digits)
    }

    /// `q^precision`, the common denominator of all coordinates.
    pub fn denominator(&self) -> Result<u64> {
        (self.q as u64)
            .checked_pow(self.precision as u32)
            .ok_or_else(|| Error::Capacity(format!("q^{} does not fit in 64 bits", self.precision)))
    }

    /// Numerator of coordinate `i` of point `k` over [`PointSet::denominator`].
    pub fn numerator(&self, k: usize, i: usize) -> u64 {
        self.coord(k, i).iter().fold(0u64, |acc, &d| acc * self.q as u64 + d as u64)
    }

    /// Points with coordinates permuted: axis `i` of the result is axis `perm[i]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<PointSet> {
        if perm.len() != self.s {
            return Err(Error::Shape("permutation length differs from s".into()));
        }
        let digits = (0..self.len())
            .flat_map(|k| perm.iter().flat_map(move |&p| self.coord(k, p).iter().copied()))
            .collect();
        PointSet::new(self.q, self.s, self.precision, digits)
    }

    /// Render the point file. `config` is appended to the header verbatim.
    pub fn render(&self, format: CoordFormat, config: &str) -> Result<String> {
        let mut out = String::new();
        write!(
            out,
            "# q={} s={} m={} n={} format={}",
            self.q,
            self.s,
            self.precision,
            self.len(),
            format.name()
        )
        .unwrap();
        if !config.is_empty() {
            write!(out, " {config}").unwrap();
        }
        out.push('\n');
        let den = match format {
            CoordFormat::Rational => Some(self.denominator()?),
            CoordFormat::Digits => None,
        };
        for k in 0..self.len() {
            let coords: Vec<String> = (0..self.s)
                .map(|i| match den {
                    Some(den) => format!("{}/{}", self.numerator(k, i), den),
                    None => render_digits(self.q, self.coord(k, i)),
                })
                .collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<PointSet> {
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if header.is_none() {
                    header = Header::parse(comment);
                }
                continue;
            }
            rows.push(line);
        }
        let h = header.ok_or_else(|| Error::Parse("missing point file header".into()))?;
        let den = (h.q as u64).checked_pow(h.m as u32);
        let mut digits = Vec::with_capacity(rows.len() * h.s * h.m);
        for (n, row) in rows.iter().enumerate() {
            let coords: Vec<&str> = row.split_whitespace().collect();
            if coords.len() != h.s {
                return Err(Error::Parse(format!("point {n} has {} coordinates, expected {}", coords.len(), h.s)));
            }
            for c in coords {
                let d = match h.format {
                    CoordFormat::Digits => parse_digit_string(h.q, c)?,
                    CoordFormat::Rational => {
                        let den = den.ok_or_else(|| Error::Capacity("q^m overflows 64 bits".into()))?;
                        parse_rational(h.q, h.m, den, c)?
                    }
                };
                if d.len() != h.m {
                    return Err(Error::Parse(format!("coordinate '{c}' does not have {} digits", h.m)));
                }
                digits.extend(d);
            }
        }
        if h.n.is_some_and(|n| n != rows.len()) {
            return Err(Error::Parse(format!("header announces {} points, found {}", h.n.unwrap(), rows.len())));
        }
        PointSet::new(h.q, h.s, h.m, digits)
    }
}

struct Header {
    q: u32,
    s: usize,
    m: usize,
    n: Option<usize>,
    format: CoordFormat,
}

impl Header {
    fn parse(line: &str) -> Option<Header> {
        let mut q = None;
        let mut s = None;
        let mut m = None;
        let mut n = None;
        let mut format = CoordFormat::Digits;
        for tok in line.split_whitespace() {
            let Some((k, v)) = tok.split_once('=') else { continue };
            match k {
                "q" => q = v.parse().ok(),
                "s" => s = v.parse().ok(),
                "m" => m = v.parse().ok(),
                "n" => n = v.parse().ok(),
                "format" if v == "rational" => format = CoordFormat::Rational,
                _ => {}
            }
        }
        Some(Header { q: q?, s: s?, m: m?, n, format })
    }
}

fn render_digits(q: u32, digits: &[Elem]) -> String {
    if q <= 36 {
        digits
            .iter()
            .map(|&d| char::from_digit(d as u32, 36).unwrap())
            .collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(":")
    }
}

fn parse_digit_string(q: u32, s: &str) -> Result<Vec<Elem>> {
    let bad = || Error::Parse(format!("bad digit string '{s}' for q = {q}"));
    let digits: Vec<u32> = if q <= 36 {
        s.chars().map(|c| c.to_digit(36).ok_or_else(bad)).collect::<Result<_>>()?
    } else {
        s.split(':').map(|d| d.parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    digits
        .into_iter()
        .map(|d| if d < q { Ok(d as Elem) } else { Err(bad()) })
        .collect()
}

fn parse_rational(q: u32, m: usize, den: u64, s: &str) -> Result<Vec<Elem>> {
    let bad = || Error::Parse(format!("bad rational coordinate '{s}'"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let a: u64 = a.parse().map_err(|_| bad())?;
    let b: u64 = b.parse().map_err(|_| bad())?;
    if b != den || a >= den {
        return Err(Error::Parse(format!("coordinate '{s}' is not a/{den} with a < {den}")));
    }
    let mut digits = vec![0; m];
    let mut n = a;
    for d in digits.iter_mut().rev() {
        *d = (n % q as u64) as Elem;
        n /= q as u64;
    }
    Ok(digits)
}
