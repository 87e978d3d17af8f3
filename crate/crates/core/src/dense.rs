//! Machine-word Laurent polynomials in one variable.
//!
//! Used only as an accelerator for eliminations in the one-parameter torus.
//! Every operation is checked: overflow or an inexact division returns
//! `None`, and the caller redoes the work with [`Laurent`].

use crate::laurent::{Exponents, Int, Laurent};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct DensePoly {
    // coefficient of z^{lo + k}; no leading or trailing zeros
    lo: i32,
    c: Vec<i64>,
}

impl DensePoly {
    pub(crate) fn from_laurent(x: &Laurent) -> Option<Self> {
        debug_assert_eq!(x.nvars(), 1);
        let Some(first) = x.terms().first() else {
            return Some(Self::default());
        };
        let lo = first.0[0];
        let hi = x.terms().last().expect("nonempty").0[0];
        let mut c = vec![0; (hi - lo + 1) as usize];
        for (e, k) in x.terms() {
            c[(e[0] - lo) as usize] = i64::try_from(k).ok()?;
        }
        Some(DensePoly { lo, c })
    }

    pub(crate) fn to_laurent(&self) -> Laurent {
        Laurent::from_terms(
            1,
            self.c
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| (Exponents::from_slice(&[self.lo + i as i32]), Int::from(k))),
        )
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|&&k| k == 0).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.lo += lead as i32;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
    }

    /// `self -= a * b`.
    pub(crate) fn sub_mul(&mut self, a: &DensePoly, b: &DensePoly) -> Option<()> {
        if a.is_zero() || b.is_zero() {
            return Some(());
        }
        let lo = a.lo + b.lo;
        let hi = lo + (a.c.len() + b.c.len() - 2) as i32;
        if self.is_zero() {
            self.lo = lo;
        }
        let new_lo = self.lo.min(lo);
        let new_hi = (self.lo + self.c.len() as i32 - 1).max(hi);
        if new_lo < self.lo {
            let pad = (self.lo - new_lo) as usize;
            self.c.splice(0..0, std::iter::repeat_n(0, pad));
            self.lo = new_lo;
        }
        self.c.resize((new_hi - self.lo + 1) as usize, 0);
        let off = (lo - self.lo) as usize;
        for (i, &x) in a.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                let slot = &mut self.c[off + i + j];
                *slot = slot.checked_sub(x.checked_mul(y)?)?;
            }
        }
        self.trim();
        Some(())
    }

    /// Exact quotient by `1 - z^k`.
    pub(crate) fn div_one_minus(&self, k: i32) -> Option<DensePoly> {
        if k == 0 {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        // 1 - z^k = -z^k (1 - z^{-k})
        let (mut p, step) = if k > 0 {
            (self.clone(), k as usize)
        } else {
            let c = self.c.iter().map(|x| x.checked_neg()).collect::<Option<Vec<_>>>()?;
            (DensePoly { lo: self.lo - k, c }, (-k) as usize)
        };
        // q (1 - z^s) = p  ⇔  q_j = p_j + q_{j-s}
        for j in step..p.c.len() {
            p.c[j] = p.c[j].checked_add(p.c[j - step])?;
        }
        let len = p.c.len().checked_sub(step)?;
        if p.c[len..].iter().any(|&x| x != 0) {
            return None;
        }
        p.c.truncate(len);
        p.trim();
        Some(p)
    }
}
