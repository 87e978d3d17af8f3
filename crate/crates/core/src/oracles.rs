//! Slow reference computations, kept independent of the fast paths.
//!
//! Nothing here is optimized; every routine is either brute-force
//! enumeration or a closed formula evaluated by hand-built localization.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gkm::Orientation;
use crate::laurent::{Exponents, Int, Laurent};
use crate::quantum::QKElement;
use crate::weyl::{FlagShape, Partition, Permutation};

/// Torus-fixed points of `Gr(m,n)` as `m`-subsets (bitmasks over `1..=n`)
/// joined by the `T`-stable lines: two subsets differing by one exchange.
///
/// Every `T`-stable curve in a type-A Grassmannian is such a line of degree 1,
/// so chains of `d` edges model connected curves of degree `d`.
#[derive(Clone, Debug)]
pub struct MomentGraph {
    m: usize,
    n: usize,
    vertices: Vec<u32>,
}

impl MomentGraph {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m <= n && n < 32);
        let vertices = (0u32..1 << n).filter(|s| s.count_ones() as usize == m).collect();
        MomentGraph { m, n, vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn neighbors(&self, s: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for i in 0..self.n {
            if s & (1 << i) == 0 {
                continue;
            }
            for j in 0..self.n {
                if s & (1 << j) == 0 {
                    out.push(s & !(1 << i) | (1 << j));
                }
            }
        }
        out
    }

    fn sorted(s: u32) -> Vec<u32> {
        (0..32).filter(|i| s & (1 << i) != 0).map(|i| i + 1).collect()
    }

    /// Bruhat order on subsets: entrywise comparison of sorted elements.
    pub fn leq(a: u32, b: u32) -> bool {
        Self::sorted(a).iter().zip(Self::sorted(b)).all(|(x, y)| *x <= y)
    }

    /// The subset `{λ_i + m + 1 - i}` of the fixed point indexed by `λ`.
    pub fn vertex_of(&self, lambda: &Partition) -> u32 {
        (1..=self.m).fold(0, |s, i| s | 1 << (lambda.part(i) as usize + self.m - i))
    }

    pub fn partition_of(&self, s: u32) -> Partition {
        let sorted = Self::sorted(s);
        let parts = (1..=self.m).map(|i| sorted[self.m - i] - (self.m + 1 - i) as u32).collect();
        Partition::new(parts).expect("sorted subsets give partitions")
    }

    /// Fixed points of the opposite Schubert variety `X^λ`.
    pub fn opposite_schubert_points(&self, lambda: &Partition) -> BTreeSet<u32> {
        let v = self.vertex_of(lambda);
        self.vertices.iter().copied().filter(|&x| Self::leq(v, x)).collect()
    }

    /// Fixed points of the Schubert variety `X_λ`.
    pub fn schubert_points(&self, lambda: &Partition) -> BTreeSet<u32> {
        let v = self.vertex_of(lambda);
        self.vertices.iter().copied().filter(|&x| Self::leq(x, v)).collect()
    }

    /// Everything reachable from `set` by at most `d` edges.
    pub fn gamma(&self, set: &BTreeSet<u32>, d: usize) -> BTreeSet<u32> {
        let mut seen: HashMap<u32, usize> = set.iter().map(|&s| (s, 0)).collect();
        let mut queue: VecDeque<u32> = set.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            let k = seen[&s];
            if k == d {
                continue;
            }
            for t in self.neighbors(s) {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
                    e.insert(k + 1);
                    queue.push_back(t);
                }
            }
        }
        seen.into_keys().collect()
    }

    /// `λ(-d)` read off `Γ_d(X^λ)`: the Bruhat-minimal fixed point, provided
    /// the neighborhood is again an opposite Schubert fixed-point set.
    pub fn neighborhood(&self, lambda: &Partition, d: usize) -> Option<Partition> {
        let reach = self.gamma(&self.opposite_schubert_points(lambda), d);
        let minimal: Vec<u32> =
            reach.iter().copied().filter(|&x| !reach.iter().any(|&y| y != x && Self::leq(y, x))).collect();
        match minimal.as_slice() {
            [x] => {
                let p = self.partition_of(*x);
                (self.opposite_schubert_points(&p) == reach).then_some(p)
            }
            _ => None,
        }
    }

    /// Fewest edges from a point of `X^λ` to a point of `X_μ`.
    pub fn dist(&self, lambda: &Partition, mu: &Partition) -> usize {
        let target = self.schubert_points(mu);
        let start = self.opposite_schubert_points(lambda);
        (0..=self.m.max(self.n - self.m))
            .find(|&d| !self.gamma(&start, d).is_disjoint(&target))
            .expect("the graph is connected")
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> usize {
        self.vertices
            .iter()
            .map(|&s| {
                let mut d = 0;
                let mut reach = BTreeSet::from([s]);
                while reach.len() < self.vertices.len() {
                    d += 1;
                    reach = self.gamma(&reach, 1);
                }
                d
            })
            .max()
            .unwrap_or(0)
    }
}

/// Set-valued tableaux of shape `λ` with entries in `1..=k`, as weights.
///
/// Each box holds a nonempty set (a bitmask). Rows: `max(left) ≤ min(right)`;
/// columns: `max(above) < min(below)`.
fn set_valued_weights(lambda: &Partition, k: usize) -> Vec<(Vec<i32>, usize)> {
    let boxes: Vec<(usize, usize)> =
        lambda.parts().iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    let mut fill: HashMap<(usize, usize), u32> = HashMap::new();
    let mut out = Vec::new();
    fn lo(s: u32) -> u32 {
        s.trailing_zeros()
    }
    fn hi(s: u32) -> u32 {
        31 - s.leading_zeros()
    }
    fn rec(
        i: usize,
        boxes: &[(usize, usize)],
        k: usize,
        fill: &mut HashMap<(usize, usize), u32>,
        out: &mut Vec<(Vec<i32>, usize)>,
    ) {
        if i == boxes.len() {
            let mut w = vec![0; k];
            let mut size = 0;
            for s in fill.values() {
                for (b, slot) in w.iter_mut().enumerate() {
                    if s & (1 << b) != 0 {
                        *slot += 1;
                        size += 1;
                    }
                }
            }
            out.push((w, size));
            return;
        }
        let (r, c) = boxes[i];
        for s in 1u32..1 << k {
            let left_ok = c == 0 || hi(fill[&(r, c - 1)]) <= lo(s);
            let up_ok = r == 0 || hi(fill[&(r - 1, c)]) < lo(s);
            if left_ok && up_ok {
                fill.insert((r, c), s);
                rec(i + 1, boxes, k, fill, out);
            }
        }
        fill.remove(&(r, c));
    }
    rec(0, &boxes, k, &mut fill, &mut out);
    out
}

/// The stable Grothendieck polynomial `G_λ(x_1, …, x_k)`:
/// `Σ_T (-1)^{|T| - |λ|} x^T` over set-valued tableaux.
pub fn grothendieck_polynomial(lambda: &Partition, k: usize) -> Laurent {
    let terms = set_valued_weights(lambda, k).into_iter().map(|(w, size)| {
        let sign = if (size - lambda.size()).is_multiple_of(2) { 1 } else { -1 };
        (Exponents::from_vec(w), Int::from(sign))
    });
    Laurent::from_terms(k, terms)
}

/// Constants `c_ν` with `O^λ · O^μ = Σ c_ν O^ν` in `K(Gr(m,n))`.
///
/// Multiplies Grothendieck polynomials in `m` variables and peels off the
/// lowest-degree, lex-leading monomial `x^ν` (the leading term of `G_ν`)
/// until nothing is left; `ν` outside the box are dropped.
pub fn lr_constants_setvalued(lambda: &Partition, mu: &Partition, m: usize, n: usize) -> BTreeMap<Partition, Int> {
    assert!(lambda.fits(m, n - m) && mu.fits(m, n - m));
    let mut memo: HashMap<Partition, Laurent> = HashMap::new();
    let mut g = |p: &Partition| memo.entry(p.clone()).or_insert_with(|| grothendieck_polynomial(p, m)).clone();
    let mut rest = &g(lambda) * &g(mu);
    let mut out = BTreeMap::new();
    while !rest.is_zero() {
        let degree = |e: &Exponents| e.iter().sum::<i32>();
        let low = rest.terms().iter().map(|(e, _)| degree(e)).min().expect("nonzero");
        let (e, c) = rest
            .terms()
            .iter()
            .filter(|(e, _)| degree(e) == low)
            .max_by(|a, b| a.0.cmp(&b.0))
            .cloned()
            .expect("nonzero");
        let nu = Partition::new(e.iter().map(|&x| x as u32).collect()).expect("leading monomials are partitions");
        rest = &rest - &(&g(&nu) * &Laurent::constant(m, c.clone()));
        if nu.fits(m, n - m) {
            out.insert(nu, c);
        }
    }
    out
}

/// `0`-Hecke (Demazure) product of a word.
fn demazure_product(n: usize, word: &[usize]) -> Permutation {
    word.iter().fold(Permutation::identity(n), |x, &i| {
        let y = x.swap_positions(i, i + 1);
        if y.length() > x.length() {
            y
        } else {
            x
        }
    })
}

/// `O^w|_v` on `shape`, by summing over subwords of a reduced word
/// `v = s_{i_1} ⋯ s_{i_l}` whose Demazure product is `w`:
/// `Σ_J (-1)^{|J| - ℓ(w)} ∏_{j ∈ J} (1 - e^{-β_j})`, where
/// `β_j = s_{i_1} ⋯ s_{i_{j-1}}(α_{i_j})`.
pub fn subword_restriction_check(shape: &FlagShape, w: &Permutation, v: &Permutation) -> Result<Laurent> {
    shape.check_index(w)?;
    shape.check_index(v)?;
    let n = shape.n();
    if n > 4 {
        return Err(Error::InvalidShape(format!("{shape}: subword check is limited to rank 3")));
    }
    let word = v.reduced_word();
    // prefix products and the factor 1 - t_b/t_a for β_j = ε_a - ε_b
    let mut factors = Vec::new();
    let mut y = Permutation::identity(n);
    for &i in &word {
        let (a, b) = (y.at(i), y.at(i + 1));
        let mut e = vec![0; n];
        e[b - 1] += 1;
        e[a - 1] -= 1;
        factors.push(Laurent::one_minus(n, &e));
        y = y.swap_positions(i, i + 1);
    }
    let mut total = Laurent::zero(n);
    for mask in 0u32..1 << word.len() {
        let chosen: Vec<usize> = (0..word.len()).filter(|j| mask & (1 << j) != 0).collect();
        let sub: Vec<usize> = chosen.iter().map(|&j| word[j]).collect();
        if demazure_product(n, &sub) != *w {
            continue;
        }
        let mut term = chosen.iter().fold(Laurent::one(n), |acc, &j| &acc * &factors[j]);
        if (chosen.len() - w.length()) % 2 == 1 {
            term = -term;
        }
        total = &total + &term;
    }
    Ok(total)
}

/// `O^s ⋆ O_id` on `P¹` from the quantized pairing.
///
/// Works in `Z[t1^±, t2^±, q]` (third variable `q`). Classes are written by
/// hand at the fixed points `id` and `s`; `χ(f) = (f(id) - (t1/t2) f(s)) / (1 - t1/t2)`.
/// Every two- and three-point invariant of positive degree is 1, so after
/// clearing `1/(1-q)` the pairing is `G'_ab = (1-q) χ(ab) + q` and the
/// right-hand side is `F'_c = (1-q) χ(O^s O_id c) + q`. A 2×2 Cramer solve gives
/// the product in the basis `{O^id, O^s}`.
pub fn givental_p1_product() -> Result<QKElement> {
    const NV: usize = 3;
    let t = |a: i32, b: i32| Laurent::monomial(NV, &[a, b, 0], 1);
    let one = Laurent::one(NV);
    let q = Laurent::monomial(NV, &[0, 0, 1], 1);
    let one_minus_q = &one - &q;
    // values at (id, s)
    let opp_id = [one.clone(), one.clone()];
    let opp_s = [Laurent::zero(NV), &one - &t(-1, 1)];
    let plain_id = [&one - &t(1, -1), Laurent::zero(NV)];
    let mul = |a: &[Laurent; 2], b: &[Laurent; 2]| [&a[0] * &b[0], &a[1] * &b[1]];
    let chi = |f: &[Laurent; 2]| (&f[0] - &(&t(1, -1) * &f[1])).div_one_minus(&[1, -1, 0]);
    let basis = [opp_id, opp_s.clone()];
    let lhs = mul(&opp_s, &plain_id);

    let mut g = vec![vec![Laurent::zero(NV); 2]; 2];
    let mut f = vec![Laurent::zero(NV); 2];
    for a in 0..2 {
        for b in 0..2 {
            g[a][b] = &(&one_minus_q * &chi(&mul(&basis[a], &basis[b]))?) + &q;
        }
        f[a] = &(&one_minus_q * &chi(&mul(&lhs, &basis[a]))?) + &q;
    }
    let det = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
    let num0 = &(&f[0] * &g[1][1]) - &(&g[0][1] * &f[1]);
    let num1 = &(&g[0][0] * &f[1]) - &(&f[0] * &g[1][0]);
    let x0 = divide_by_pairing_determinant(&num0, &det)?;
    let x1 = divide_by_pairing_determinant(&num1, &det)?;

    let mut out = QKElement::zero(2);
    for (w, x) in [(Permutation::identity(2), x0), (Permutation::longest(2), x1)] {
        for (e, c) in x.terms() {
            if e[2] < 0 {
                return Err(Error::NotDivisible(format!("negative power of q in {x}")));
            }
            let coeff = Laurent::monomial(2, &[e[0], e[1]], c.clone());
            out = out.add(&QKElement::term(w.clone(), e[2] as usize, coeff));
        }
    }
    debug_assert!(out.terms().values().all(|x| x.orientation() == Orientation::Opposite));
    Ok(out)
}

/// Exact division by a determinant of the form `± t^a (1 - q)^k`.
fn divide_by_pairing_determinant(num: &Laurent, det: &Laurent) -> Result<Laurent> {
    let mut num = num.clone();
    let mut det = det.clone();
    while det.num_terms() > 1 {
        det = det.div_one_minus(&[0, 0, 1])?;
        num = num.div_one_minus(&[0, 0, 1])?;
    }
    let [(e, c)] = det.terms() else {
        return Err(Error::NotDivisible("vanishing pairing determinant".into()));
    };
    let inv: Vec<i32> = e.iter().map(|x| -x).collect();
    if c.is_zero() || (c != &Int::from(1) && c != &Int::from(-1)) {
        return Err(Error::NotDivisible(format!("pairing determinant {det} is not a unit")));
    }
    Ok(num.mul_monomial(&inv, c))
}
