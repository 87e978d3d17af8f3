//! Exact integer Laurent polynomials: the representation ring of the torus.
//!
//! Terms are kept sorted ascending by exponent vector (lexicographic), with
//! no stored zero coefficients, so structural equality is ring equality and
//! the text form is canonical.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use smallvec::SmallVec;

/// Arbitrary-precision integer coefficients (small values stay inline).
pub type Int = dashu_int::IBig;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `t_1^{e_1} ... t_k^{e_k}`.
pub type Exponents = SmallVec<[i32; 8]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    nvars: usize,
    terms: Vec<(Exponents, Int)>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Self {
        Laurent { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: impl Into<Int>) -> Self {
        Self::monomial(nvars, &vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: &[i32], c: impl Into<Int>) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector width");
        let c = c.into();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Laurent { nvars, terms: vec![(Exponents::from_slice(exps), c)] }
    }

    /// The character `t_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(nvars, &e, 1)
    }

    /// `1 - t^e`.
    pub fn one_minus(nvars: usize, exps: &[i32]) -> Self {
        Self::one(nvars) - Self::monomial(nvars, exps, 1)
    }

    /// Builds from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Int)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        for (e, _) in &terms {
            assert_eq!(e.len(), nvars, "exponent vector width");
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Exponents, Int)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((e, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Laurent { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponents, Int)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && self.terms[0].0.iter().all(|&e| e == 0)
    }

    /// The constant coefficient when the element is a constant.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(e, c)] if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    /// Multiplication by the monomial `c·t^e`.
    pub fn mul_monomial(&self, exps: &[i32], c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| {
                let e: Exponents = e.iter().zip(exps).map(|(a, b)| a + b).collect();
                (e, k * c)
            })
            .collect();
        // translation preserves lexicographic order
        Laurent { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Substitution `t_i ↦ t_{σ(i)}` for a permutation `σ` given 1-based.
    pub fn permute_vars(&self, sigma: &[u8]) -> Self {
        assert_eq!(sigma.len(), self.nvars);
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f: Exponents = SmallVec::from_elem(0, self.nvars);
                for (i, &x) in e.iter().enumerate() {
                    f[sigma[i] as usize - 1] += x;
                }
                (f, c.clone())
            }),
        )
    }

    /// Swap of the variables `t_i` and `t_{i+1}` (the simple reflection `s_i`).
    pub fn swap_adjacent(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = e.clone();
                f.swap(i - 1, i);
                (f, c.clone())
            }),
        )
    }

    /// Sum of coefficients: the specialization setting every variable to 1.
    pub fn specialize_ones(&self) -> Int {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Restriction to the one-parameter subgroup `t_i = z^{weights[i]}`.
    pub fn restrict_to_cocharacter(&self, weights: &[i32]) -> Self {
        assert_eq!(weights.len(), self.nvars);
        Self::from_terms(
            1,
            self.terms.iter().map(|(e, c)| {
                let d: i32 = e.iter().zip(weights).map(|(a, b)| a * b).sum();
                (SmallVec::from_slice(&[d]), c.clone())
            }),
        )
    }

    /// `true` if every term has total degree zero, i.e. the element is
    /// invariant under the central (determinant) scaling of the torus.
    pub fn is_degree_zero(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().sum::<i32>() == 0)
    }

    /// Exact division by `g`, which must have the form `1 - t^e` with `e ≠ 0`.
    pub fn exact_div_binomial(&self, g: &Laurent) -> Result<Self> {
        let e = binomial_exponent(g).ok_or_else(|| {
            Error::NotDivisible(format!("divisor {g} is not of the form 1 - monomial"))
        })?;
        self.div_one_minus(&e)
    }

    /// Exact division by `1 - t^e`.
    ///
    /// Terms are grouped along lines `a + k e`; on each line the quotient is
    /// the sequence of prefix sums, and the division is exact iff every
    /// line's coefficients sum to zero.
    pub fn div_one_minus(&self, e: &[i32]) -> Result<Self> {
        assert_eq!(e.len(), self.nvars);
        let pivot = e
            .iter()
            .position(|&x| x != 0)
            .ok_or_else(|| Error::NotDivisible("division by 1 - 1 = 0".into()))?;
        let step = e[pivot];
        // (line representative, position along the line, coefficient)
        let mut keyed: Vec<(Exponents, i32, &Int)> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let k = a[pivot].div_euclid(step);
                let base: Exponents = a.iter().zip(e).map(|(x, y)| x - k * y).collect();
                (base, k, c)
            })
            .collect();
        keyed.sort_unstable_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));

        let mut out = Vec::new();
        let mut i = 0;
        while i < keyed.len() {
            let mut j = i;
            while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                j += 1;
            }
            // h_k = sum_{j <= k} f_j over consecutive positions
            let base = &keyed[i].0;
            let mut acc = Int::ZERO;
            let mut idx = i;
            let mut k = keyed[i].1;
            let last = keyed[j - 1].1;
            while k <= last {
                if idx < j && keyed[idx].1 == k {
                    acc += keyed[idx].2;
                    idx += 1;
                }
                if k == last {
                    break;
                }
                if !acc.is_zero() {
                    let exps: Exponents = base.iter().zip(e).map(|(x, y)| x + k * y).collect();
                    out.push((exps, acc.clone()));
                }
                // skip empty stretches with a constant partial sum
                let next = if idx < j { keyed[idx].1 } else { last };
                if acc.is_zero() {
                    k = next;
                } else {
                    k += 1;
                }
            }
            if !acc.is_zero() {
                return Err(Error::NotDivisible(format!(
                    "{self} by 1 - {}",
                    Laurent::monomial(self.nvars, e, 1)
                )));
            }
            i = j;
        }
        Ok(Laurent::from_terms(self.nvars, out))
    }

    /// Parses the canonical text grammar (`1 - t1*t2^-1`). Terms may appear
    /// in any order; the result is canonical.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let err = |msg: &str| Error::Parse(format!("{msg} in Laurent element {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            // a sign starts a new term unless it follows '^'
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let mut coeff = Int::from(sign);
            let mut exps: Exponents = SmallVec::from_elem(0, nvars);
            for (k, factor) in body.split('*').enumerate() {
                if let Some(rest) = factor.strip_prefix('t') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<i32>().map_err(|_| err("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                    if idx == 0 || idx > nvars {
                        return Err(err("variable index out of range"));
                    }
                    exps[idx - 1] += exp;
                } else if k == 0 {
                    let c: Int = factor.parse().map_err(|_| err("bad coefficient"))?;
                    coeff *= c;
                } else {
                    return Err(err("coefficient must lead the term"));
                }
            }
            terms.push((exps, coeff));
        }
        Ok(Laurent::from_terms(nvars, terms))
    }

    fn merge(&self, other: &Laurent, negate_other: bool) -> Laurent {
        assert_eq!(self.nvars, other.nvars, "Laurent elements over different tori");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Greater
            } else if j == b.len() {
                std::cmp::Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Laurent { nvars: self.nvars, terms: out }
    }

    fn product(&self, other: &Laurent) -> Laurent {
        assert_eq!(self.nvars, other.nvars, "Laurent elements over different tori");
        if self.is_zero() || other.is_zero() {
            return Laurent::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_monomial(e, c);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_monomial(e, c);
        }
        if self.nvars == 1 {
            return self.dense_product(other);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                acc.push((e, ca * cb));
            }
        }
        Laurent::from_terms(self.nvars, acc)
    }
}

impl Laurent {
    // one variable: plain convolution over the exponent range
    fn dense_product(&self, other: &Laurent) -> Laurent {
        let lo = self.terms[0].0[0] + other.terms[0].0[0];
        let hi = self.terms.last().expect("nonzero").0[0] + other.terms.last().expect("nonzero").0[0];
        let mut dense = vec![Int::ZERO; (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                dense[(ea[0] + eb[0] - lo) as usize] += ca * cb;
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Exponents::from_slice(&[lo + k as i32]), c))
            .collect();
        Laurent { nvars: 1, terms }
    }
}

/// If `g = 1 - t^e` with `e ≠ 0`, returns `e`.
pub fn binomial_exponent(g: &Laurent) -> Option<Exponents> {
    if g.terms.len() != 2 {
        return None;
    }
    let zero = |e: &Exponents| e.iter().all(|&x| x == 0);
    let (a, b) = (&g.terms[0], &g.terms[1]);
    let (unit, mono) = if zero(&a.0) { (a, b) } else if zero(&b.0) { (b, a) } else { return None };
    if unit.1.is_one() && mono.1 == Int::from(-1) {
        Some(mono.0.clone())
    } else {
        None
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| if x == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, x) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        self.merge(rhs, false)
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self.merge(rhs, true)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        self.product(rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &Laurent) -> Laurent {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(s: &str) -> Laurent {
        Laurent::parse(s, 3).unwrap()
    }

    #[test]
    fn ring_examples() {
        let x = l("t1*t2^-1");
        assert!((&l("1 - t1*t2^-1") + &x).is_one());
        assert!((&Laurent::zero(3) * &x).is_zero());
        assert_eq!(&l("1 - t1*t2^-1") * &l("1 + t1*t2^-1"), l("1 - t1^2*t2^-2"));
    }

    #[test]
    fn formatting_is_canonical() {
        assert_eq!(l("-t1*t2^-1 + 1").to_string(), "1 - t1*t2^-1");
        assert_eq!(l("3*t3^2 - 2 + t1").to_string(), "-2 + 3*t3^2 + t1");
        assert_eq!(Laurent::zero(2).to_string(), "0");
        assert_eq!(l("-1").to_string(), "-1");
        assert_eq!(l("t1 - t1").to_string(), "0");
        assert!(Laurent::parse("t4", 3).is_err());
        assert!(Laurent::parse("", 3).is_err());
        assert!(Laurent::parse("1 +", 3).is_err());
    }

    #[test]
    fn binomial_division_examples() {
        let g = l("1 - t1*t2^-1");
        assert!(g.exact_div_binomial(&g).unwrap().is_one());
        assert_eq!(l("1 - t1^2*t2^-2").exact_div_binomial(&g).unwrap(), l("1 + t1*t2^-1"));
        let g1 = l("1 - t1");
        assert!(matches!(l("1 + t1").exact_div_binomial(&g1), Err(Error::NotDivisible(_))));
        assert!(l("1").exact_div_binomial(&l("2 - t1")).is_err());
        // sparse lines: 1 - t^5 = (1 - t)(1 + t + ... + t^4)
        let q = l("1 - t1^5").div_one_minus(&[1, 0, 0]).unwrap();
        assert_eq!(q, l("1 + t1 + t1^2 + t1^3 + t1^4"));
        // negative exponent direction
        let q = l("1 - t2^-2").div_one_minus(&[0, -1, 0]).unwrap();
        assert_eq!(q, l("1 + t2^-1"));
    }

    #[test]
    fn specialization() {
        assert_eq!(l("1 - t1*t2^-1").specialize_ones(), Int::ZERO);
        assert_eq!(l("1").specialize_ones(), Int::ONE);
        let r = l("1 - t1*t2^-1").restrict_to_cocharacter(&[1, 2, 3]);
        assert_eq!(r, Laurent::parse("1 - t1^-1", 1).unwrap());
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((prop::collection::vec(-2i32..=2, 3), -4i64..=4), 0..6).prop_map(|ts| {
            Laurent::from_terms(3, ts.into_iter().map(|(e, c)| (Exponents::from_vec(e), Int::from(c))))
        })
    }

    fn arb_exponent() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(-2i32..=2, 3).prop_filter("nonzero", |e| e.iter().any(|&x| x != 0))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&a - &b) + &b) == a);
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn division_inverts_multiplication(h in arb_laurent(), e in arb_exponent()) {
            let g = Laurent::one_minus(3, &e);
            let f = &h * &g;
            prop_assert_eq!(f.exact_div_binomial(&g).unwrap(), h);
        }

        #[test]
        fn specialization_is_multiplicative(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!((&a * &b).specialize_ones(), a.specialize_ones() * b.specialize_ones());
        }

        #[test]
        fn text_round_trip(a in arb_laurent()) {
            prop_assert_eq!(Laurent::parse(&a.to_string(), 3).unwrap(), a);
        }
    }
}
