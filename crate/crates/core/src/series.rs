//! Eventually constant q-series and the telescoping operator `1 - q·shift`.

use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// Coefficient types a [`TailedSeries`] can carry.
pub trait SeriesCoeff: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl SeriesCoeff for Laurent {
    fn zero_like(&self) -> Self {
        Laurent::zero(self.nvars())
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
}

/// `Σ_{d<D} head[d] q^d + tail · Σ_{d≥D} q^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailedSeries<T> {
    head: Vec<T>,
    tail: T,
}

/// Scalar series over the character ring.
pub type TailedScalarSeries = TailedSeries<Laurent>;

impl<T: SeriesCoeff> TailedSeries<T> {
    pub fn new(head: Vec<T>, tail: T) -> Self {
        let mut s = TailedSeries { head, tail };
        s.normalize();
        s
    }

    /// The series `tail · Σ_{d ≥ start} q^d`.
    pub fn geometric(start: usize, tail: T) -> Self {
        let head = vec![tail.zero_like(); start];
        Self::new(head, tail)
    }

    fn normalize(&mut self) {
        while self.head.last() == Some(&self.tail) {
            self.head.pop();
        }
    }

    /// Stabilization degree `D`: the tail holds from `q^D` on.
    pub fn tail_start(&self) -> usize {
        self.head.len()
    }

    pub fn head(&self) -> &[T] {
        &self.head
    }

    pub fn tail(&self) -> &T {
        &self.tail
    }

    pub fn coeff(&self, d: usize) -> &T {
        self.head.get(d).unwrap_or(&self.tail)
    }

    pub fn map<U: SeriesCoeff>(&self, f: impl Fn(&T) -> U) -> TailedSeries<U> {
        TailedSeries::new(self.head.iter().map(&f).collect(), f(&self.tail))
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let len = self.head.len().max(other.head.len());
        let head = (0..len).map(|d| f(self.coeff(d), other.coeff(d))).collect();
        Self::new(head, f(&self.tail, &other.tail))
    }

    /// Applies `1 - q·shift`. The shift must fix the tail, and then the
    /// result is the finite polynomial `c_0 + Σ_{1≤d≤D} (c_d - shift(c_{d-1})) q^d`.
    pub fn apply_one_minus_qshift(&self, shift: impl Fn(&T) -> Result<T>) -> Result<Vec<T>> {
        if shift(&self.tail)? != self.tail {
            return Err(Error::TailNotFixed);
        }
        let top = self.tail_start();
        let mut out = Vec::with_capacity(top + 1);
        out.push(self.coeff(0).clone());
        for d in 1..=top {
            out.push(self.coeff(d).sub(&shift(self.coeff(d - 1))?));
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        Ok(out)
    }
}

impl TailedSeries<Laurent> {
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        self.map(|a| a * c)
    }
}
