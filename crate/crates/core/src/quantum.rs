//! Quantum K-theory of the Grassmannian `X = Gr(m,n)`.
//!
//! Degree-`d` curves are handled through the kernel-span diagram
//!
//! ```text
//!            T_d = Fl(a, m, b; n)
//!          p /              \ q
//!   X = Gr(m, n)        Y_d = Fl(a, b; n)
//! ```
//!
//! with `a = max(m - d, 0)` and `b = min(m + d, n)`. Curve neighborhoods are
//! `Γ_d(Z) = p(q⁻¹(q(p⁻¹(Z))))`, and the projected Gromov-Witten variety
//! `Γ_d(X^u, X_v)` is `p(q⁻¹(Y^{u_d} ∩ Y_{v_d}))`.
//!
//! The product is `O^u ⋆ O_v = (1 - qψ)(O^u ⊙ O_v)`, where
//! `O^u ⊙ O_v = Σ_d [O_{Γ_d(X^u, X_v)}] q^d` and `ψ(O^w) = O^{w(-1)}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gkm::{BasisExpansion, Engine, LocalizedClass, Orientation};
use crate::laurent::{Int, Laurent};
use crate::series::{SeriesCoeff, TailedSeries};
use crate::weyl::{
    bruhat_leq, min_coset_rep, minrep_to_partition, opposite_image_index, opposite_preimage_index,
    partition_to_minrep, schubert_image_index, schubert_preimage_index, FlagShape, Partition, Permutation,
};

/// Curve degree, identified with `H_2(X; Z) = Z`.
pub type Degree = usize;

impl SeriesCoeff for LocalizedClass {
    fn zero_like(&self) -> Self {
        self.scale(&Laurent::zero(self.values()[0].nvars()))
    }
    fn sub(&self, other: &Self) -> Self {
        LocalizedClass::sub(self, other).expect("series coefficients live on one space")
    }
    fn is_zero(&self) -> bool {
        LocalizedClass::is_zero(self)
    }
}

/// `O^u ⊙ O_v`: projected Gromov-Witten classes up to the stabilization
/// degree, then the class 1.
pub type TailedQSeries = TailedSeries<LocalizedClass>;

/// A finite power series `Σ_d q^d Σ_w c_{w,d} O^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QKElement {
    nvars: usize,
    terms: BTreeMap<Degree, BasisExpansion>,
}

impl QKElement {
    pub fn zero(nvars: usize) -> Self {
        QKElement { nvars, terms: BTreeMap::new() }
    }

    /// The Schubert class `c · q^d · O^w`.
    pub fn term(w: Permutation, d: Degree, c: Laurent) -> Self {
        let mut out = Self::zero(c.nvars());
        out.add_at(d, &BasisExpansion::single(Orientation::Opposite, w, c));
        out
    }

    /// Builds `Σ_d q^d coeffs[d]` from opposite-basis expansions.
    pub fn from_coefficients(nvars: usize, coeffs: Vec<BasisExpansion>) -> Self {
        let mut out = Self::zero(nvars);
        for (d, c) in coeffs.into_iter().enumerate() {
            out.add_at(d, &c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Degree, BasisExpansion> {
        &self.terms
    }

    pub fn coeff(&self, d: Degree) -> BasisExpansion {
        self.terms.get(&d).cloned().unwrap_or_else(|| BasisExpansion::zero(Orientation::Opposite, self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lowest_degree(&self) -> Option<Degree> {
        self.terms.keys().next().copied()
    }

    pub fn highest_degree(&self) -> Option<Degree> {
        self.terms.keys().next_back().copied()
    }

    fn add_at(&mut self, d: Degree, x: &BasisExpansion) {
        assert_eq!(x.orientation(), Orientation::Opposite, "QK elements use the opposite basis");
        let sum = match self.terms.get(&d) {
            Some(a) => a.add(x),
            None => x.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, x) in &other.terms {
            out.add_at(*d, x);
        }
        out
    }

    /// Multiplication by `c · q^k`.
    pub fn scale_shift(&self, c: &Laurent, k: Degree) -> Self {
        let mut out = Self::zero(self.nvars);
        for (d, x) in &self.terms {
            out.add_at(d + k, &x.scale(c));
        }
        out
    }

    /// `χ` coefficient-wise: a polynomial in `q`, lowest degree first.
    pub fn chi_q(&self) -> Vec<Laurent> {
        let top = self.highest_degree().map_or(0, |d| d + 1);
        let mut out: Vec<Laurent> = (0..top).map(|d| self.coeff(d).coefficient_sum()).collect();
        while out.last().is_some_and(Laurent::is_zero) {
            out.pop();
        }
        out
    }

    /// `χ̂ = μ ∘ χ`: additionally sets `q = 1`.
    pub fn chi_hat(&self) -> Laurent {
        self.chi_q().iter().fold(Laurent::zero(self.nvars), |a, b| &a + b)
    }
}

/// All nonzero `N^{w,d}_{u,v}` for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    pub m: usize,
    pub n: usize,
    pub u: Permutation,
    pub v: Permutation,
    pub v_basis: Orientation,
    /// `(w, d, N)`, sorted by degree then partition.
    pub entries: Vec<(Permutation, Degree, Laurent)>,
}

impl StructureTable {
    pub fn from_element(m: usize, n: usize, u: Permutation, v: Permutation, v_basis: Orientation, x: &QKElement) -> Self {
        let mut entries = Vec::new();
        for (d, exp) in x.terms() {
            for (w, c) in exp.coeffs() {
                entries.push((w.clone(), *d, c.clone()));
            }
        }
        let mut t = StructureTable { m, n, u, v, v_basis, entries };
        t.sort();
        t
    }

    fn sort(&mut self) {
        let m = self.m;
        self.entries.sort_by_cached_key(|(w, d, _)| (*d, minrep_to_partition(w, m).expect("Grassmannian index")));
    }

    pub fn sum(&self) -> Laurent {
        let nv = self.entries.first().map_or(0, |e| e.2.nvars());
        self.entries.iter().fold(Laurent::zero(nv), |a, e| &a + &e.2)
    }

    pub fn to_element(&self) -> QKElement {
        let nv = self.entries.first().map_or(0, |e| e.2.nvars());
        self.entries
            .iter()
            .fold(QKElement::zero(nv), |acc, (w, d, c)| acc.add(&QKElement::term(w.clone(), *d, c.clone())))
    }

    /// Every coefficient specialized at 1 (zero entries dropped): the
    /// non-equivariant table.
    pub fn specialized(&self) -> StructureTable {
        let entries = self
            .entries
            .iter()
            .map(|(w, d, c)| (w.clone(), *d, Laurent::constant(0, c.specialize_ones())))
            .filter(|e| !e.2.is_zero())
            .collect();
        StructureTable { entries, ..self.clone() }
    }
}

/// Outcome of one theorem check over all pairs of a shape.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem: u8,
    pub pairs: usize,
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One flagged entry of the sign diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignFlag {
    pub w: Partition,
    pub d: Degree,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub header: String,
    pub checked: usize,
    pub flagged: Vec<SignFlag>,
}

/// The quantum K-theory ring of `Gr(m,n)` over an [`Engine`].
pub struct QuantumK {
    engine: Arc<Engine>,
    m: usize,
    n: usize,
    x: FlagShape,
    shift_rule: bool,
    star_memo: Mutex<HashMap<(Permutation, Permutation), Arc<QKElement>>>,
    star_opposite_memo: Mutex<HashMap<(Permutation, Permutation), Arc<QKElement>>>,
    // keyed by (d, u_d, v_d): many pairs share their transported indices
    gw_memo: Mutex<HashMap<(Degree, Permutation, Permutation), Arc<LocalizedClass>>>,
    to_plain_memo: Mutex<HashMap<Permutation, Arc<BasisExpansion>>>,
}

impl QuantumK {
    pub fn new(engine: Arc<Engine>, m: usize, n: usize) -> Result<Self> {
        let x = FlagShape::grassmannian(m, n)?;
        let mut qk = QuantumK {
            engine,
            m,
            n,
            x,
            shift_rule: false,
            star_memo: Mutex::new(HashMap::new()),
            star_opposite_memo: Mutex::new(HashMap::new()),
            gw_memo: Mutex::new(HashMap::new()),
            to_plain_memo: Mutex::new(HashMap::new()),
        };
        qk.shift_rule = qk.shift_rule_agrees_with_diagram();
        Ok(qk)
    }

    pub fn engine(&self) -> &Arc<Engine> {
        &self.engine
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &FlagShape {
        &self.x
    }

    pub fn nvars(&self) -> usize {
        self.engine.nvars(self.n)
    }

    /// `W^P` in `(length, one-line)` order.
    pub fn indices(&self) -> Vec<Permutation> {
        self.engine.space(&self.x).points().to_vec()
    }

    pub fn index_of(&self, lambda: &Partition) -> Result<Permutation> {
        partition_to_minrep(lambda, self.m, self.n)
    }

    pub fn partition_of(&self, w: &Permutation) -> Result<Partition> {
        minrep_to_partition(w, self.m)
    }

    /// Whether the partition shift rule is in use as a fast path.
    pub fn shift_rule_enabled(&self) -> bool {
        self.shift_rule
    }

    /// Smallest `d` with `Γ_d(pt, pt) = X`.
    pub fn diameter(&self) -> Degree {
        self.m.min(self.n - self.m)
    }

    /// `(Y_d, T_d)`, degenerate steps dropped.
    pub fn kernel_span_shapes(&self, d: Degree) -> (FlagShape, FlagShape) {
        let a = self.m.saturating_sub(d);
        let b = (self.m + d).min(self.n);
        let mut y = vec![a, b];
        let mut t = vec![a, self.m, b];
        y.dedup();
        t.dedup();
        let y = FlagShape::new(&y, self.n).expect("a <= m <= b");
        let t = FlagShape::new(&t, self.n).expect("a <= m <= b");
        (y, t)
    }

    /// `w(-d)` by index transport around the kernel-span diagram.
    pub fn neighborhood_by_diagram(&self, w: &Permutation, d: Degree) -> Result<Permutation> {
        self.x.check_index(w)?;
        let (y, t) = self.kernel_span_shapes(d);
        let on_t = opposite_preimage_index(w, &t, &self.x)?;
        let on_y = opposite_image_index(&on_t, &t, &y)?;
        let back = opposite_preimage_index(&on_y, &t, &y)?;
        opposite_image_index(&back, &t, &self.x)
    }

    /// `w(-d)`, with `Γ_d(X^w) = X^{w(-d)}`.
    pub fn curve_neighborhood_index(&self, w: &Permutation, d: Degree) -> Result<Permutation> {
        if self.shift_rule {
            self.x.check_index(w)?;
            let lambda = self.partition_of(w)?;
            self.index_of(&shift_rule(&lambda, self.m, d))
        } else {
            self.neighborhood_by_diagram(w, d)
        }
    }

    fn shift_rule_agrees_with_diagram(&self) -> bool {
        let top = 2 * self.diameter() + 1;
        self.indices().iter().all(|w| {
            let lambda = self.partition_of(w).expect("Grassmannian index");
            (0..=top).all(|d| {
                let fast = self.index_of(&shift_rule(&lambda, self.m, d)).ok();
                fast.as_ref() == self.neighborhood_by_diagram(w, d).ok().as_ref()
            })
        })
    }

    /// `dist(X^u, X_v) = min{d : u(-d) ≤ v}`.
    pub fn dist(&self, u: &Permutation, v: &Permutation) -> Result<Degree> {
        self.x.check_index(v)?;
        for d in 0..=self.diameter() {
            if bruhat_leq(&self.curve_neighborhood_index(u, d)?, v) {
                return Ok(d);
            }
        }
        unreachable!("every pair is joined by a curve of degree at most the diameter")
    }

    /// `(u_d, v_d)` on `Y_d`: opposite index of `q(p⁻¹(X^u))` and plain
    /// index of `q(p⁻¹(X_v))`.
    pub fn transported_indices(&self, u: &Permutation, v: &Permutation, d: Degree) -> Result<(Permutation, Permutation)> {
        let (y, t) = self.kernel_span_shapes(d);
        let ud = opposite_image_index(&opposite_preimage_index(u, &t, &self.x)?, &t, &y)?;
        let vd = schubert_image_index(&schubert_preimage_index(v, &t, &self.x)?, &t, &y)?;
        Ok((ud, vd))
    }

    fn richardson_on_y(&self, u: &Permutation, v: &Permutation, d: Degree) -> Result<Option<(FlagShape, FlagShape, LocalizedClass)>> {
        let (y, t) = self.kernel_span_shapes(d);
        let (ud, vd) = self.transported_indices(u, v, d)?;
        if !bruhat_leq(&ud, &vd) {
            return Ok(None);
        }
        let a = self.engine.schubert_class(&y, &ud, Orientation::Opposite)?;
        let b = self.engine.schubert_class(&y, &vd, Orientation::Plain)?;
        Ok(Some((y, t, a.multiply(&b)?)))
    }

    /// `[O_{Γ_d(X^u, X_v)}]`.
    ///
    /// The Richardson class on `Y_d` is expanded in the plain basis there;
    /// `q^*` and `p_*` then act on basis classes by index transport, which
    /// is the same push-pull as [`Self::projected_gw_class_via_incidence`]
    /// without eliminating on the larger `T_d`.
    pub fn projected_gw_class(&self, u: &Permutation, v: &Permutation, d: Degree) -> Result<LocalizedClass> {
        self.x.check_index(u)?;
        self.x.check_index(v)?;
        let (ud, vd) = self.transported_indices(u, v, d)?;
        let key = (d, ud, vd);
        if let Some(g) = self.gw_memo.lock().expect("memo lock poisoned").get(&key) {
            return Ok((**g).clone());
        }
        let Some((y, t, rich)) = self.richardson_on_y(u, v, d)? else {
            return Ok(self.engine.zero(&self.x));
        };
        let on_y = self.engine.expand(&rich, Orientation::Plain)?;
        let xp = self.x.parabolic();
        let mut on_x = BasisExpansion::zero(Orientation::Plain, on_y.nvars());
        for (w, c) in on_y.coeffs() {
            let pre = schubert_preimage_index(w, &t, &y)?;
            on_x.add_term(min_coset_rep(&pre, &xp), c);
        }
        let g = self.engine.recombine(&self.x, &on_x)?;
        self.gw_memo.lock().expect("memo lock poisoned").insert(key, Arc::new(g.clone()));
        Ok(g)
    }

    /// The same class by literally pulling the Richardson class back to
    /// `T_d` and pushing it forward to `X`.
    pub fn projected_gw_class_via_incidence(&self, u: &Permutation, v: &Permutation, d: Degree) -> Result<LocalizedClass> {
        let Some((_, t, rich)) = self.richardson_on_y(u, v, d)? else {
            return Ok(self.engine.zero(&self.x));
        };
        let pulled = self.engine.pullback(&rich, &t)?;
        self.engine.pushforward(&pulled, &self.x)
    }

    /// `O^u ⊙ O_v` as a tailed series; the stabilization degree is the first
    /// `d` at which the computed class equals 1.
    pub fn odot(&self, u: &Permutation, v: &Permutation) -> Result<TailedQSeries> {
        let bound = 2 * self.diameter() + 1;
        let mut head = Vec::new();
        for d in 0..=bound {
            let g = self.projected_gw_class(u, v, d)?;
            if g.is_one() {
                return Ok(TailedSeries::new(head, g));
            }
            head.push(g);
        }
        Err(Error::NotInSpan(format!(
            "projected Gromov-Witten classes of ({u}, {v}) did not stabilize by degree {bound}"
        )))
    }

    /// `ψ(O^w) = O^{w(-1)}`, extended Γ-linearly.
    pub fn psi(&self, a: &BasisExpansion) -> Result<BasisExpansion> {
        if a.orientation() != Orientation::Opposite {
            return Err(Error::ShapeMismatch("ψ acts on opposite-basis expansions".into()));
        }
        let mut out = BasisExpansion::zero(Orientation::Opposite, a.nvars());
        for (w, c) in a.coeffs() {
            out.add_term(self.curve_neighborhood_index(w, 1)?, c);
        }
        Ok(out)
    }

    /// `O^u ⋆ O_v = (1 - qψ)(O^u ⊙ O_v)`.
    pub fn star(&self, u: &Permutation, v: &Permutation) -> Result<Arc<QKElement>> {
        let key = (u.clone(), v.clone());
        if let Some(x) = self.star_memo.lock().expect("memo lock poisoned").get(&key) {
            return Ok(x.clone());
        }
        let series = self.odot(u, v)?;
        let head = series
            .head()
            .iter()
            .map(|g| self.engine.expand(g, Orientation::Opposite))
            .collect::<Result<Vec<_>>>()?;
        let tail = self.engine.expand(series.tail(), Orientation::Opposite)?;
        let expanded = TailedSeries::new(head, tail);
        let coeffs = expanded.apply_one_minus_qshift(|x| self.psi(x))?;
        let x = Arc::new(QKElement::from_coefficients(self.nvars(), coeffs));
        self.star_memo.lock().expect("memo lock poisoned").insert(key, x.clone());
        Ok(x)
    }

    fn opposite_in_plain(&self, w: &Permutation) -> Result<Arc<BasisExpansion>> {
        if let Some(x) = self.to_plain_memo.lock().expect("memo lock poisoned").get(w) {
            return Ok(x.clone());
        }
        let x = Arc::new(self.engine.opposite_to_plain(&self.x, w)?);
        self.to_plain_memo.lock().expect("memo lock poisoned").insert(w.clone(), x.clone());
        Ok(x)
    }

    /// `O^u ⋆ O^v`, converting `O^v` to the plain basis exactly.
    pub fn star_opposite(&self, u: &Permutation, v: &Permutation) -> Result<Arc<QKElement>> {
        let key = (u.clone(), v.clone());
        if let Some(x) = self.star_opposite_memo.lock().expect("memo lock poisoned").get(&key) {
            return Ok(x.clone());
        }
        let mut out = QKElement::zero(self.nvars());
        for (x, a) in self.opposite_in_plain(v)?.coeffs() {
            out = out.add(&self.star(u, x)?.scale_shift(a, 0));
        }
        let out = Arc::new(out);
        self.star_opposite_memo.lock().expect("memo lock poisoned").insert(key, out.clone());
        Ok(out)
    }

    /// Bilinear extension of `⋆` to finite power series in the opposite basis.
    pub fn product(&self, a: &QKElement, b: &QKElement) -> Result<QKElement> {
        let mut out = QKElement::zero(self.nvars());
        for (d1, x1) in a.terms() {
            for (w1, c1) in x1.coeffs() {
                for (d2, x2) in b.terms() {
                    for (w2, c2) in x2.coeffs() {
                        let p = self.star_opposite(w1, w2)?;
                        out = out.add(&p.scale_shift(&(c1 * c2), d1 + d2));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `N^{w,d}_{u,v}` for `O^u ⋆ O_v` (plain `v`) or `O^u ⋆ O^v` (opposite `v`).
    pub fn structure_constants(&self, u: &Permutation, v: &Permutation, v_basis: Orientation) -> Result<StructureTable> {
        let x = match v_basis {
            Orientation::Plain => (*self.star(u, v)?).clone(),
            Orientation::Opposite => (*self.star_opposite(u, v)?).clone(),
        };
        Ok(StructureTable::from_element(self.m, self.n, u.clone(), v.clone(), v_basis, &x))
    }

    fn pairs(&self) -> Vec<(Permutation, Permutation)> {
        let idx = self.indices();
        idx.iter().flat_map(|u| idx.iter().map(move |v| (u.clone(), v.clone()))).collect()
    }

    fn pair_label(&self, u: &Permutation, v: &Permutation) -> String {
        format!(
            "u=({}) v=({})",
            self.partition_of(u).map(|p| p.to_string()).unwrap_or_default(),
            self.partition_of(v).map(|p| p.to_string()).unwrap_or_default()
        )
    }

    /// `Σ_{w,d} N^{w,d}_{u,v} = 1` for every pair, in both `v` bases.
    pub fn verify_theorem1(&self) -> Result<VerificationReport> {
        let pairs = self.pairs();
        let violations = pairs
            .par_iter()
            .map(|(u, v)| -> Result<Vec<String>> {
                let mut bad = Vec::new();
                for basis in [Orientation::Plain, Orientation::Opposite] {
                    let sum = self.structure_constants(u, v, basis)?.sum();
                    if !sum.is_one() {
                        bad.push(format!("{} v_basis={} sum={}", self.pair_label(u, v), basis.name(), sum));
                    }
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VerificationReport { theorem: 1, pairs: pairs.len(), violations: violations.concat() })
    }

    /// `χ̂(a ⋆ b) = χ̂(a) χ̂(b)` on all pairs of basis elements.
    pub fn verify_theorem2(&self) -> Result<VerificationReport> {
        let pairs = self.pairs();
        let one = Laurent::one(self.nvars());
        let violations = pairs
            .par_iter()
            .map(|(u, v)| -> Result<Vec<String>> {
                let mut bad = Vec::new();
                let mixed = self.star(u, v)?.chi_hat();
                let opp = self.star_opposite(u, v)?.chi_hat();
                // χ̂(O^u) = χ̂(O_v) = χ̂(O^v) = 1
                if mixed != one {
                    bad.push(format!("{} plain chi_hat={}", self.pair_label(u, v), mixed));
                }
                if opp != one {
                    bad.push(format!("{} opposite chi_hat={}", self.pair_label(u, v), opp));
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VerificationReport { theorem: 2, pairs: pairs.len(), violations: violations.concat() })
    }

    /// `χ(O^u ⋆ O_v) = q^{dist(u,v)}`; with `oracle`, the distance is also
    /// recomputed on the moment graph and compared.
    pub fn verify_theorem3(&self, oracle: bool) -> Result<VerificationReport> {
        let pairs = self.pairs();
        let graph = oracle.then(|| crate::oracles::MomentGraph::new(self.m, self.n));
        let violations = pairs
            .par_iter()
            .map(|(u, v)| -> Result<Vec<String>> {
                let mut bad = Vec::new();
                let d = self.dist(u, v)?;
                let chi = self.star(u, v)?.chi_q();
                if !is_q_power(&chi, d) {
                    let shown: Vec<String> = chi.iter().map(|c| c.to_string()).collect();
                    bad.push(format!("{} dist={} chi_q=[{}]", self.pair_label(u, v), d, shown.join(", ")));
                }
                if let Some(g) = &graph {
                    let od = g.dist(&self.partition_of(u)?, &self.partition_of(v)?);
                    if od != d {
                        bad.push(format!("{} dist={} moment_graph_dist={}", self.pair_label(u, v), d, od));
                    }
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VerificationReport { theorem: 3, pairs: pairs.len(), violations: violations.concat() })
    }

    /// Sign diagnostic for a non-equivariant table. Never an error.
    pub fn positivity_sign_report(&self, table: &StructureTable) -> Result<PositivityReport> {
        let dim = self.m * (self.n - self.m);
        let cu = self.partition_of(&table.u)?.size();
        let cv = match table.v_basis {
            Orientation::Opposite => self.partition_of(&table.v)?.size(),
            Orientation::Plain => dim - self.partition_of(&table.v)?.size(),
        };
        let header = format!(
            "sign convention: (-1)^(|w| + d*{} - |u| - |v|) * N >= 0, codimensions |.|; a plain-basis v counts as codimension {} - |v|",
            self.n, dim
        );
        let mut flagged = Vec::new();
        for (w, d, c) in &table.entries {
            let value = c.specialize_ones();
            let e = self.partition_of(w)?.size() + d * self.n;
            let odd = (e + 2 * dim - cu - cv) % 2 == 1;
            let signed = if odd { -value.clone() } else { value.clone() };
            if signed < Int::from(0) {
                flagged.push(SignFlag { w: self.partition_of(w)?, d: *d, value: value.to_string() });
            }
        }
        Ok(PositivityReport { header, checked: table.entries.len(), flagged })
    }
}

/// `λ(-d)_i = max(λ_{i+d} - d, 0)`.
pub fn shift_rule(lambda: &Partition, m: usize, d: Degree) -> Partition {
    let parts = (1..=m).map(|i| lambda.part(i + d).saturating_sub(d as u32)).collect();
    Partition::new(parts).expect("shifting keeps parts decreasing")
}

/// `true` if `poly` (lowest degree first) is exactly `q^d`.
pub fn is_q_power(poly: &[Laurent], d: Degree) -> bool {
    poly.len() == d + 1 && poly[d].is_one() && poly[..d].iter().all(Laurent::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::Torus;

    fn qk(m: usize, n: usize, torus: Torus) -> QuantumK {
        QuantumK::new(Arc::new(Engine::new(torus)), m, n).unwrap()
    }

    fn idx(q: &QuantumK, s: &str) -> Permutation {
        q.index_of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn diameters() {
        assert_eq!(qk(1, 2, Torus::NonEquivariant).diameter(), 1);
        assert_eq!(qk(2, 4, Torus::NonEquivariant).diameter(), 2);
        assert_eq!(qk(1, 5, Torus::NonEquivariant).diameter(), 1);
    }

    #[test]
    fn kernel_span() {
        let q = qk(2, 4, Torus::NonEquivariant);
        let x = q.shape().clone();
        assert_eq!(q.kernel_span_shapes(0), (x.clone(), x.clone()));
        let (y, t) = q.kernel_span_shapes(1);
        assert_eq!(y, FlagShape::new(&[1, 3], 4).unwrap());
        assert_eq!(t, FlagShape::full_flag(4));
        let (y, t) = q.kernel_span_shapes(2);
        assert_eq!(y, FlagShape::new(&[], 4).unwrap());
        assert_eq!(t, x);
    }

    #[test]
    fn neighborhoods() {
        let q = qk(2, 4, Torus::NonEquivariant);
        let id = Permutation::identity(4);
        for d in 0..4 {
            assert_eq!(q.curve_neighborhood_index(&id, d).unwrap(), id);
        }
        assert_eq!(q.neighborhood_by_diagram(&idx(&q, "2,2"), 1).unwrap(), idx(&q, "1"));
        assert!(q.shift_rule_enabled());
        let p1 = qk(1, 2, Torus::NonEquivariant);
        assert_eq!(p1.curve_neighborhood_index(&idx(&p1, "1"), 1).unwrap(), Permutation::identity(2));
    }

    #[test]
    fn distances() {
        let q = qk(2, 4, Torus::NonEquivariant);
        assert_eq!(q.dist(&idx(&q, "2,2"), &Permutation::identity(4)).unwrap(), 2);
        assert_eq!(q.dist(&idx(&q, "1"), &idx(&q, "2,1")).unwrap(), 0);
        let p1 = qk(1, 2, Torus::NonEquivariant);
        assert_eq!(p1.dist(&idx(&p1, "1"), &Permutation::identity(2)).unwrap(), 1);
    }

    #[test]
    fn p1_product() {
        let p1 = qk(1, 2, Torus::Equivariant);
        let s = idx(&p1, "1");
        let id = Permutation::identity(2);
        let series = p1.odot(&s, &id).unwrap();
        assert_eq!(series.tail_start(), 1);
        assert!(series.head()[0].is_zero());
        let x = p1.star(&s, &id).unwrap();
        assert_eq!(*x, QKElement::term(id.clone(), 1, Laurent::one(2)));
        assert_eq!(x.chi_q(), vec![Laurent::zero(2), Laurent::one(2)]);
        assert!(x.chi_hat().is_one());
        // ψ(O^s) = O^id
        let psi = p1.psi(&BasisExpansion::single(Orientation::Opposite, s, Laurent::one(2))).unwrap();
        assert_eq!(psi, BasisExpansion::single(Orientation::Opposite, id, Laurent::one(2)));
    }

    #[test]
    fn unit_law_and_trivial_series() {
        let q = qk(2, 4, Torus::Equivariant);
        let id = Permutation::identity(4);
        let top = q.shape().max_min_rep();
        let series = q.odot(&id, &top).unwrap();
        assert_eq!(series.tail_start(), 0);
        for v in q.indices() {
            let x = q.star(&id, &v).unwrap();
            let expected = q.engine().plain_to_opposite(q.shape(), &v).unwrap();
            assert_eq!(*x, QKElement::from_coefficients(4, vec![expected]));
            let t = q.structure_constants(&id, &v, Orientation::Opposite).unwrap();
            assert_eq!(t.entries, vec![(v.clone(), 0, Laurent::one(4))]);
        }
    }

    #[test]
    fn incidence_route_matches() {
        for torus in [Torus::Equivariant, Torus::NonEquivariant] {
            let q = qk(2, 4, torus);
            for u in q.indices() {
                for v in q.indices() {
                    for d in 0..=3 {
                        let fast = q.projected_gw_class(&u, &v, d).unwrap();
                        let slow = q.projected_gw_class_via_incidence(&u, &v, d).unwrap();
                        assert_eq!(fast, slow, "u={u} v={v} d={d}");
                        let dist = q.dist(&u, &v).unwrap();
                        assert_eq!(fast.is_zero(), d < dist);
                        if d >= dist {
                            assert!(q.engine().euler_char(&fast).unwrap().is_one());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gr24_top_class_against_point() {
        let q = qk(2, 4, Torus::Equivariant);
        let g = q.projected_gw_class(&idx(&q, "2,2"), &q.shape().max_min_rep(), 1).unwrap();
        assert!(!g.is_zero());
        assert!(q.engine().euler_char(&g).unwrap().is_one());
        q.engine().check_gkm(&g).unwrap();
    }

    #[test]
    fn star_lowest_degree_is_dist() {
        let q = qk(2, 4, Torus::NonEquivariant);
        for u in q.indices() {
            for v in q.indices() {
                let x = q.star(&u, &v).unwrap();
                let d = q.dist(&u, &v).unwrap();
                assert_eq!(x.lowest_degree(), Some(d));
                let g = q.projected_gw_class(&u, &v, d).unwrap();
                assert_eq!(x.coeff(d), q.engine().expand(&g, Orientation::Opposite).unwrap());
                assert!(x.highest_degree().unwrap() <= q.odot(&u, &v).unwrap().tail_start());
            }
        }
    }

    #[test]
    fn shift_rule_values() {
        let l: Partition = "2,2".parse().unwrap();
        assert_eq!(shift_rule(&l, 2, 1).to_string(), "1");
        assert_eq!(shift_rule(&l, 2, 2).to_string(), "");
        assert_eq!(shift_rule(&l, 2, 0), l);
    }

    #[test]
    fn sign_report_for_unit_row() {
        let q = qk(2, 4, Torus::NonEquivariant);
        let id = Permutation::identity(4);
        for v in q.indices() {
            let t = q.structure_constants(&id, &v, Orientation::Opposite).unwrap().specialized();
            let r = q.positivity_sign_report(&t).unwrap();
            assert!(r.flagged.is_empty());
        }
    }
}
