//! Truncated formal power series over exact rationals, and matrices of
//! them.
//!
//! Every series carries a fixed truncation order; arithmetic keeps
//! coefficients exact (arbitrary-precision rationals) and discards degrees
//! above the order. Determinants are computed by cofactor expansion with
//! memoization on column masks, which is exact and fast enough for the
//! small matrices that arise here.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;

/// A power series truncated at a fixed degree; `coeffs[k]` is the degree-k
/// coefficient and `coeffs.len() == order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<BigRational>,
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The monomial `c z^k`, or zero if `k` exceeds the order.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn z(order: usize) -> Self {
        Self::monomial(BigRational::one(), 1, order)
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, &c) in coeffs.iter().enumerate() {
            if k > order {
                break;
            }
            s.coeffs[k] = BigRational::from_integer(BigInt::from(c));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Lowest degree with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates to a (smaller or larger) order; new high coefficients
    /// are zero.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        coeffs.truncate(order + 1);
        FormalSeries { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Option<Self> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let order = self.order();
        let c0 = self.coeffs[0].recip();
        let mut inv = Self::zero(order);
        inv.coeffs[0] = c0.clone();
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv.coeffs[k - j];
            }
            inv.coeffs[k] = -acc * &c0;
        }
        Some(inv)
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Option<Self> {
        if !self.coeffs[0].is_zero() {
            return None;
        }
        let order = self.order();
        // g' = f' g, solved coefficient by coefficient
        let mut g = Self::one(order);
        for k in 1..=order {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                // f' has degree-(j-1) coefficient j * f_j
                acc += &self.coeffs[j] * BigRational::from_integer(BigInt::from(j))
                    * &g.coeffs[k - j];
            }
            g.coeffs[k] = acc / BigRational::from_integer(BigInt::from(k));
        }
        Some(g)
    }

    /// `log` of a series with constant term one.
    pub fn log(&self) -> Option<Self> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let order = self.order();
        // (log f)' = f'/f
        let fprime_over_f = {
            let mut fp = Self::zero(order);
            for k in 1..=order {
                fp.coeffs[k - 1] = &self.coeffs[k] * BigRational::from_integer(BigInt::from(k));
            }
            &fp * &self.recip()?
        };
        let mut out = Self::zero(order);
        for k in 1..=order {
            out.coeffs[k] =
                &fprime_over_f.coeffs[k - 1] / BigRational::from_integer(BigInt::from(k));
        }
        Some(out)
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        assert_eq!(self.order(), rhs.order(), "order mismatch");
        FormalSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        assert_eq!(self.order(), rhs.order(), "order mismatch");
        FormalSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        assert_eq!(self.order(), rhs.order(), "order mismatch");
        let order = self.order();
        let mut out = FormalSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for FormalSeries {
    /// Renders nonzero terms as `c0 + c1 z + c2 z^2 + ...`; negative
    /// coefficients join with `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = fmt_rational(&c.abs());
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} z")?,
                _ => write!(f, "{mag} z^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for FormalSeries {
    /// Wire shape: a list of `[numerator, denominator]` string pairs, one
    /// per degree from zero through the order.
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&(c.numer().to_string(), c.denom().to_string()))?;
        }
        seq.end()
    }
}

/// A square matrix of series, all sharing one truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    order: usize,
    entries: Vec<FormalSeries>,
}

impl SeriesMatrix {
    pub fn zero(n: usize, order: usize) -> Self {
        SeriesMatrix { n, order, entries: vec![FormalSeries::zero(order); n * n] }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        let mut m = Self::zero(n, order);
        for i in 0..n {
            *m.at_mut(i, i) = FormalSeries::one(order);
        }
        m
    }

    /// Builds `(i, j) -> entries(i, j)` from a function.
    pub fn from_fn(n: usize, order: usize, mut f: impl FnMut(usize, usize) -> FormalSeries) -> Self {
        let mut m = Self::zero(n, order);
        for i in 0..n {
            for j in 0..n {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    /// Lifts an integer matrix `A` to the series matrix `A z`.
    pub fn scalar_times_z(a: &[Vec<i64>], order: usize) -> Self {
        let n = a.len();
        Self::from_fn(n, order, |i, j| {
            FormalSeries::monomial(BigRational::from_integer(BigInt::from(a[i][j])), 1, order)
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn series_order(&self) -> usize {
        self.order
    }

    pub fn at(&self, i: usize, j: usize) -> &FormalSeries {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FormalSeries {
        &mut self.entries[i * self.n + j]
    }

    pub fn add(&self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.n, self.order), (rhs.n, rhs.order));
        SeriesMatrix {
            n: self.n,
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.n, self.order), (rhs.n, rhs.order));
        SeriesMatrix {
            n: self.n,
            order: self.order,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, rhs: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.n, self.order), (rhs.n, rhs.order));
        SeriesMatrix::from_fn(self.n, self.order, |i, j| {
            let mut acc = FormalSeries::zero(self.order);
            for k in 0..self.n {
                acc = &acc + &(self.at(i, k) * rhs.at(k, j));
            }
            acc
        })
    }

    /// Minimum valuation over entries; `None` for the zero matrix.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.valuation()).min()
    }

    /// `(I - N)^{-1} = sum N^k` for `N = self` with strictly positive
    /// valuation, truncated at the series order.
    pub fn neumann_inverse(&self) -> Option<SeriesMatrix> {
        match self.valuation() {
            Some(0) => return None,
            _ => {}
        }
        let mut acc = SeriesMatrix::identity(self.n, self.order);
        let mut pow = SeriesMatrix::identity(self.n, self.order);
        for _ in 0..self.order {
            pow = pow.matmul(self);
            if pow.valuation().is_none() {
                break;
            }
            acc = acc.add(&pow);
        }
        Some(acc)
    }

    /// Determinant by cofactor expansion along rows, memoizing on the set
    /// of surviving columns.
    pub fn det(&self) -> FormalSeries {
        assert!(self.n <= 63, "matrix too large for mask-based expansion");
        if self.n == 0 {
            return FormalSeries::one(self.order);
        }
        let mut memo: HashMap<u64, FormalSeries> = HashMap::new();
        let full: u64 = if self.n == 63 { !0 >> 1 } else { (1u64 << self.n) - 1 };
        self.det_minor(full, &mut memo)
    }

    /// Determinant of the minor on the last `popcount(cols)` rows and the
    /// columns in `cols`.
    fn det_minor(&self, cols: u64, memo: &mut HashMap<u64, FormalSeries>) -> FormalSeries {
        if cols == 0 {
            return FormalSeries::one(self.order);
        }
        if let Some(hit) = memo.get(&cols) {
            return hit.clone();
        }
        let row = self.n - cols.count_ones() as usize;
        let mut acc = FormalSeries::zero(self.order);
        let mut sign = false;
        let mut rest = cols;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let a = self.at(row, j);
            if !a.is_zero() {
                let sub = self.det_minor(cols & !(1u64 << j), memo);
                let term = a * &sub;
                acc = if sign { &acc - &term } else { &acc + &term };
            }
            sign = !sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
}
