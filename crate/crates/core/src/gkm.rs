//! Equivariant K-theory of type-A partial flag varieties in the fixed-point
//! localization model.
//!
//! Conventions: `B` is upper triangular, `B⁻` lower triangular, `T` the
//! diagonal torus of `GL_n` with characters `t_1, ..., t_n`. A point `vP` has
//! tangent weights `ε_{v(j)} - ε_{v(i)}` for positions `i < j` in distinct
//! blocks, and a smooth `T`-stable subvariety with normal weights `β`
//! restricts to `∏ (1 - e^{-β})`.
//!
//! Opposite classes are produced from the point class by the left Demazure
//! recursion
//!
//! ```text
//! O^{s_i w}(v) = (O^w(v) - (t_{i+1}/t_i) · s_i(O^w(s_i v))) / (1 - t_{i+1}/t_i),   s_i w < w,
//! ```
//!
//! and plain classes by the twist `O_w(v) = w0 · O^{min(w0 w)}(min(w0 v))`.
//!
//! The non-equivariant engine restricts every table to the one-parameter
//! subgroup `t_i = z^i`. Its fixed points are still isolated, so localization
//! stays injective and all eliminations stay exact; specializing `z = 1`
//! recovers ordinary K-theory.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::cache::DiskCache;
use crate::dense::DensePoly;
use crate::error::{Error, Result};
use crate::laurent::{Exponents, Int, Laurent};
use crate::weyl::{bruhat_leq, min_coset_rep, twist_index, FlagShape, ParabolicSet, Permutation};

/// Which of the two Schubert bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `O^w = [O_{X^w}]`, `X^w` the closure of `B⁻wP`.
    Opposite,
    /// `O_w = [O_{X_w}]`, `X_w` the closure of `BwP`.
    Plain,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Opposite => "opposite",
            Orientation::Plain => "plain",
        }
    }
}

/// The torus whose characters form the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Torus {
    /// All `n` characters of the diagonal torus of `GL_n`.
    Equivariant,
    /// The one-parameter subgroup `t_i = z^i`; specialize at `z = 1` for
    /// non-equivariant answers.
    NonEquivariant,
}

impl Torus {
    pub fn nvars(self, n: usize) -> usize {
        match self {
            Torus::Equivariant => n,
            Torus::NonEquivariant => 1,
        }
    }

    /// Exponent vector of `t_a / t_b` in this torus.
    pub fn ratio(self, n: usize, a: usize, b: usize) -> Exponents {
        match self {
            Torus::Equivariant => {
                let mut e: Exponents = smallvec::smallvec![0; n];
                e[a - 1] += 1;
                e[b - 1] -= 1;
                e
            }
            Torus::NonEquivariant => smallvec::smallvec![a as i32 - b as i32],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Torus::Equivariant => "equivariant",
            Torus::NonEquivariant => "one-parameter",
        }
    }

    fn cocharacter(n: usize) -> Vec<i32> {
        (1..=n as i32).collect()
    }

    /// Restriction of a full-torus element to this torus.
    pub fn restrict(self, x: &Laurent) -> Laurent {
        match self {
            Torus::Equivariant => x.clone(),
            Torus::NonEquivariant => x.restrict_to_cocharacter(&Self::cocharacter(x.nvars())),
        }
    }
}

/// Fixed points of a flag variety together with the data the engine needs
/// at each of them.
#[derive(Debug)]
pub struct FlagSpace {
    shape: FlagShape,
    parabolic: ParabolicSet,
    points: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    /// Per point, the pairs `(a, b)` with tangent factor `1 - t_a/t_b`.
    tangent: Vec<Vec<(usize, usize)>>,
}

impl FlagSpace {
    pub fn new(shape: FlagShape) -> Self {
        let parabolic = shape.parabolic();
        let points = shape.min_coset_reps();
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let blocks = parabolic.blocks();
        let mut block_of = vec![0; shape.n()];
        for (b, &(s, e)) in blocks.iter().enumerate() {
            block_of[s..e].iter_mut().for_each(|x| *x = b);
        }
        let tangent = points
            .iter()
            .map(|v| {
                let mut t = Vec::new();
                for i in 0..shape.n() {
                    for j in i + 1..shape.n() {
                        if block_of[i] != block_of[j] {
                            t.push((v.at(i + 1), v.at(j + 1)));
                        }
                    }
                }
                t
            })
            .collect();
        FlagSpace { shape, parabolic, points, index, tangent }
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    /// Fixed points, sorted by `(length, one-line)`: a linear extension of
    /// the Bruhat order.
    pub fn points(&self) -> &[Permutation] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, w: &Permutation) -> Result<usize> {
        self.index.get(w).copied().ok_or_else(|| Error::InvalidIndex {
            index: w.to_string(),
            shape: self.shape.to_string(),
        })
    }

    /// Position of the fixed point `min(w W_P)`.
    pub fn position_of_coset(&self, w: &Permutation) -> usize {
        self.index[&min_coset_rep(w, &self.parabolic)]
    }

    /// Pairs `(a, b)` for the normal factors `1 - t_a/t_b` of the Schubert
    /// cell of the given orientation at its own index.
    pub fn diagonal_factors(&self, idx: usize, orientation: Orientation) -> Vec<(usize, usize)> {
        self.tangent[idx]
            .iter()
            .copied()
            .filter(|&(a, b)| match orientation {
                Orientation::Opposite => a > b,
                Orientation::Plain => a < b,
            })
            .collect()
    }

    /// `T`-stable curves through each point: `(neighbor, a, b)` with
    /// character `ε_a - ε_b`, `a < b`.
    pub fn edges(&self, idx: usize) -> Vec<(usize, usize, usize)> {
        let v = &self.points[idx];
        let n = self.n();
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let j = self.position_of_coset(&v.swap_values(a, b));
                if j != idx {
                    out.push((j, a, b));
                }
            }
        }
        out
    }
}

/// Restrictions `rows[w][v] = O(w)|_v` of one Schubert basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionTable {
    orientation: Orientation,
    rows: Vec<Vec<Laurent>>,
}

impl RestrictionTable {
    pub fn new(orientation: Orientation, rows: Vec<Vec<Laurent>>) -> Self {
        RestrictionTable { orientation, rows }
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn rows(&self) -> &[Vec<Laurent>] {
        &self.rows
    }

    pub fn get(&self, class: usize, point: usize) -> &Laurent {
        &self.rows[class][point]
    }

    pub fn map(&self, f: impl Fn(&Laurent) -> Laurent) -> Self {
        RestrictionTable {
            orientation: self.orientation,
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

/// Full-torus opposite restriction table by the left Demazure recursion.
pub fn compute_opposite_table(space: &FlagSpace) -> Result<RestrictionTable> {
    let n = space.n();
    let len = space.len();
    let mut rows: Vec<Option<Vec<Laurent>>> = vec![None; len];
    let top = len - 1;

    let mut point = vec![Laurent::zero(n); len];
    point[top] = space.tangent[top]
        .iter()
        .fold(Laurent::one(n), |acc, &(a, b)| &acc * &Laurent::one_minus(n, &Torus::Equivariant.ratio(n, a, b)));
    rows[top] = Some(point);

    let blocks = space.parabolic.blocks();
    let block_of = |pos: usize| blocks.iter().position(|&(s, e)| pos >= s && pos < e).unwrap();

    for idx in (0..top).rev() {
        let w = &space.points[idx];
        let pos = w.inverse();
        let i = (1..n)
            .find(|&i| {
                let (pi, pj) = (pos.at(i) - 1, pos.at(i + 1) - 1);
                pi < pj && block_of(pi) != block_of(pj)
            })
            .expect("every non-maximal index has an ascent across blocks");
        let parent_idx = space.position(&w.swap_values(i, i + 1))?;
        let parent = rows[parent_idx].as_ref().expect("parents are longer and computed first");
        let shift = Torus::Equivariant.ratio(n, i + 1, i);
        let mut row = Vec::with_capacity(len);
        for (v_idx, v) in space.points.iter().enumerate() {
            let sv = space.position_of_coset(&v.swap_values(i, i + 1));
            let twisted = parent[sv].swap_adjacent(i).mul_monomial(&shift, &Int::from(1));
            let numer = &parent[v_idx] - &twisted;
            row.push(numer.div_one_minus(&shift)?);
        }
        rows[idx] = Some(row);
    }
    Ok(RestrictionTable::new(Orientation::Opposite, rows.into_iter().map(Option::unwrap).collect()))
}

/// Opposite restriction table from subword sums, in any torus.
///
/// For a reduced word `v = s_{i_1} ⋯ s_{i_l}`,
/// `O^w|_v = Σ_J (-1)^{|J| - ℓ(w)} ∏_{j ∈ J} (1 - e^{-β_j})` over subwords `J`
/// with Demazure product `w`, where `β_j = s_{i_1} ⋯ s_{i_{j-1}}(α_{i_j})`. All
/// subwords are handled at once by carrying the running Demazure product.
/// Unlike the recursion this never needs the Weyl group to act on the
/// coefficients, so it works directly in the one-parameter torus.
pub fn compute_opposite_table_by_subwords(space: &FlagSpace, torus: Torus) -> RestrictionTable {
    let n = space.n();
    let nv = torus.nvars(n);
    let len = space.len();
    let mut rows = vec![vec![Laurent::zero(nv); len]; len];
    for (vi, v) in space.points.iter().enumerate() {
        let mut states: HashMap<Permutation, Laurent> = HashMap::from([(Permutation::identity(n), Laurent::one(nv))]);
        let mut prefix = Permutation::identity(n);
        for i in v.reduced_word() {
            // 1 - e^{-β} with β = ε_a - ε_b
            let factor = Laurent::one_minus(nv, &torus.ratio(n, prefix.at(i + 1), prefix.at(i)));
            prefix = prefix.swap_positions(i, i + 1);
            let mut next = states.clone();
            for (x, p) in &states {
                let up = x.swap_positions(i, i + 1);
                let term = p * &factor;
                let (target, term) = if up.length() > x.length() { (up, term) } else { (x.clone(), -term) };
                let slot = next.entry(target).or_insert_with(|| Laurent::zero(nv));
                *slot = &*slot + &term;
            }
            next.retain(|_, p| !p.is_zero());
            states = next;
        }
        for (w, p) in states {
            if let Some(&wi) = space.index.get(&w) {
                rows[wi][vi] = p;
            }
        }
    }
    RestrictionTable::new(Orientation::Opposite, rows)
}

/// Plain table from the opposite one through the `w0` twist.
///
/// In the one-parameter torus `w0` sends `t_i = z^i` to `z^{n+1-i}`; on the
/// degree-zero entries of a table that is `z ↦ z^{-1}`.
pub fn twist_to_plain(space: &FlagSpace, opposite: &RestrictionTable, torus: Torus) -> RestrictionTable {
    let n = space.n();
    let w0 = Permutation::longest(n);
    let act = |x: &Laurent| match torus {
        Torus::Equivariant => x.permute_vars(w0.as_slice()),
        Torus::NonEquivariant => x.restrict_to_cocharacter(&[-1]),
    };
    let tw: Vec<usize> = space
        .points
        .iter()
        .map(|p| space.index[&twist_index(p, &space.shape)])
        .collect();
    let rows = (0..space.len())
        .map(|w| (0..space.len()).map(|v| act(&opposite.rows[tw[w]][tw[v]])).collect())
        .collect();
    RestrictionTable::new(Orientation::Plain, rows)
}

/// An element of `K_T(Y)` given by its restrictions to every fixed point.
#[derive(Clone, Debug)]
pub struct LocalizedClass {
    space: Arc<FlagSpace>,
    values: Vec<Laurent>,
}

impl PartialEq for LocalizedClass {
    fn eq(&self, other: &Self) -> bool {
        self.space.shape == other.space.shape && self.values == other.values
    }
}

impl LocalizedClass {
    pub fn shape(&self) -> &FlagShape {
        &self.space.shape
    }

    pub fn space(&self) -> &Arc<FlagSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Laurent] {
        &self.values
    }

    pub fn value_at(&self, w: &Permutation) -> Result<&Laurent> {
        Ok(&self.values[self.space.position(w)?])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Laurent::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.values.iter().all(Laurent::is_one)
    }

    /// Fixed points where the class does not vanish.
    pub fn support(&self) -> Vec<&Permutation> {
        self.space.points.iter().zip(&self.values).filter(|(_, v)| !v.is_zero()).map(|(p, _)| p).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space.shape != other.space.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.space.shape, other.space.shape)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a * b))
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        LocalizedClass { space: self.space.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Laurent, &Laurent) -> Laurent) -> Self {
        LocalizedClass {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

/// Coefficients of a class in one of the Schubert bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExpansion {
    orientation: Orientation,
    nvars: usize,
    coeffs: BTreeMap<Permutation, Laurent>,
}

impl BasisExpansion {
    pub fn zero(orientation: Orientation, nvars: usize) -> Self {
        BasisExpansion { orientation, nvars, coeffs: BTreeMap::new() }
    }

    pub fn single(orientation: Orientation, w: Permutation, c: Laurent) -> Self {
        let mut e = Self::zero(orientation, c.nvars());
        e.add_term(w, &c);
        e
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &BTreeMap<Permutation, Laurent> {
        &self.coeffs
    }

    pub fn coeff(&self, w: &Permutation) -> Laurent {
        self.coeffs.get(w).cloned().unwrap_or_else(|| Laurent::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, w: Permutation, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&w) {
            Some(a) => a + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.orientation, other.orientation, "adding expansions in different bases");
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Laurent::one(other.nvars)))
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        let mut out = Self::zero(self.orientation, self.nvars);
        for (w, a) in &self.coeffs {
            out.add_term(w.clone(), &(a * c));
        }
        out
    }

    /// Sum of the coefficients; the Euler characteristic of the class.
    pub fn coefficient_sum(&self) -> Laurent {
        self.coeffs.values().fold(Laurent::zero(self.nvars), |acc, c| &acc + c)
    }

    /// Γ-linear substitution of basis indices.
    pub fn map_indices(&self, f: impl Fn(&Permutation) -> Permutation) -> Self {
        let mut out = Self::zero(self.orientation, self.nvars);
        for (w, c) in &self.coeffs {
            out.add_term(f(w), c);
        }
        out
    }
}

impl crate::series::SeriesCoeff for BasisExpansion {
    fn zero_like(&self) -> Self {
        BasisExpansion::zero(self.orientation, self.nvars)
    }
    fn sub(&self, other: &Self) -> Self {
        BasisExpansion::sub(self, other)
    }
    fn is_zero(&self) -> bool {
        BasisExpansion::is_zero(self)
    }
}

type Slot<V> = Arc<OnceLock<Arc<V>>>;

/// A keyed memo table: lookups take a short lock, the value is computed at
/// most once per key outside that lock.
struct Memo<K, V> {
    slots: Mutex<HashMap<K, Slot<V>>>,
}

impl<K: std::hash::Hash + Eq + Clone, V> Memo<K, V> {
    fn new() -> Self {
        Memo { slots: Mutex::new(HashMap::new()) }
    }

    fn get_or_try_init(&self, key: &K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        let slot = {
            let mut slots = self.slots.lock().expect("memo lock poisoned");
            slots.entry(key.clone()).or_default().clone()
        };
        if let Some(v) = slot.get() {
            return Ok(v.clone());
        }
        let v = Arc::new(f()?);
        Ok(slot.get_or_init(|| v).clone())
    }

    fn len(&self) -> usize {
        self.slots.lock().expect("memo lock poisoned").values().filter(|s| s.get().is_some()).count()
    }
}

/// Nonzero row entries as machine-word polynomials.
type DenseRows = Vec<Vec<(usize, DensePoly)>>;

/// The localization engine: memoized fixed-point data and restriction
/// tables for one choice of torus.
pub struct Engine {
    torus: Torus,
    cache: Option<DiskCache>,
    spaces: Memo<FlagShape, FlagSpace>,
    tables: Memo<(FlagShape, Orientation), RestrictionTable>,
    // sparse rows of machine-word copies, one-parameter torus only
    dense_tables: Memo<(FlagShape, Orientation), Option<DenseRows>>,
}

impl Engine {
    pub fn new(torus: Torus) -> Self {
        Engine { torus, cache: None, spaces: Memo::new(), tables: Memo::new(), dense_tables: Memo::new() }
    }

    pub fn with_cache(torus: Torus, cache: DiskCache) -> Self {
        Engine { cache: Some(cache), ..Engine::new(torus) }
    }

    pub fn torus(&self) -> Torus {
        self.torus
    }

    pub fn is_equivariant(&self) -> bool {
        self.torus == Torus::Equivariant
    }

    pub fn nvars(&self, n: usize) -> usize {
        self.torus.nvars(n)
    }

    /// Number of restriction tables held in memory.
    pub fn memoized_tables(&self) -> usize {
        self.tables.len()
    }

    pub fn space(&self, shape: &FlagShape) -> Arc<FlagSpace> {
        self.spaces
            .get_or_try_init(shape, || Ok(FlagSpace::new(shape.clone())))
            .expect("building fixed points cannot fail")
    }

    fn build_table(&self, space: &FlagSpace, orientation: Orientation) -> Result<RestrictionTable> {
        let shape = space.shape();
        if let Some(cache) = &self.cache {
            if let Some(t) = cache.load(shape, orientation, self.torus, space.points()) {
                return Ok(t);
            }
        }
        let table = match (orientation, self.torus) {
            (Orientation::Opposite, Torus::Equivariant) => compute_opposite_table(space)?,
            (Orientation::Opposite, t) => compute_opposite_table_by_subwords(space, t),
            (Orientation::Plain, t) => twist_to_plain(space, &*self.table(shape, Orientation::Opposite)?, t),
        };
        if let Some(cache) = &self.cache {
            // a failed write only costs a recomputation later
            let _ = cache.store(shape, &table, self.torus, space.points());
        }
        Ok(table)
    }

    /// Restriction table of a Schubert basis, in this engine's torus.
    ///
    /// Equivariant opposite tables come from the Demazure recursion; in the
    /// one-parameter torus, where the recursion is unavailable, from subword sums.
    pub fn table(&self, shape: &FlagShape, orientation: Orientation) -> Result<Arc<RestrictionTable>> {
        self.tables.get_or_try_init(&(shape.clone(), orientation), || self.build_table(&self.space(shape), orientation))
    }

    fn class_from_values(&self, space: Arc<FlagSpace>, values: Vec<Laurent>) -> LocalizedClass {
        LocalizedClass { space, values }
    }

    pub fn class_from_fn(&self, shape: &FlagShape, f: impl Fn(&Permutation) -> Laurent) -> LocalizedClass {
        let space = self.space(shape);
        let values = space.points.iter().map(f).collect();
        self.class_from_values(space, values)
    }

    pub fn one(&self, shape: &FlagShape) -> LocalizedClass {
        let nv = self.nvars(shape.n());
        self.class_from_fn(shape, |_| Laurent::one(nv))
    }

    pub fn zero(&self, shape: &FlagShape) -> LocalizedClass {
        let nv = self.nvars(shape.n());
        self.class_from_fn(shape, |_| Laurent::zero(nv))
    }

    pub fn schubert_class(&self, shape: &FlagShape, w: &Permutation, orientation: Orientation) -> Result<LocalizedClass> {
        let space = self.space(shape);
        let idx = space.position(w)?;
        let table = self.table(shape, orientation)?;
        Ok(self.class_from_values(space, table.rows[idx].clone()))
    }

    /// The element `1 - t_a/t_b` of this engine's coefficient ring.
    pub fn one_minus_ratio(&self, n: usize, a: usize, b: usize) -> Laurent {
        Laurent::one_minus(self.nvars(n), &self.torus.ratio(n, a, b))
    }

    /// Diagonal restriction `O(v)|_v` as its list of binomial factors.
    pub fn diagonal(&self, shape: &FlagShape, v: &Permutation, orientation: Orientation) -> Result<Vec<Laurent>> {
        let space = self.space(shape);
        let idx = space.position(v)?;
        Ok(space
            .diagonal_factors(idx, orientation)
            .into_iter()
            .map(|(a, b)| self.one_minus_ratio(shape.n(), a, b))
            .collect())
    }

    /// Unique coefficients with `class = Σ c_w · O(w)`, by triangular
    /// elimination along the Bruhat order.
    pub fn expand(&self, class: &LocalizedClass, orientation: Orientation) -> Result<BasisExpansion> {
        if self.torus == Torus::NonEquivariant {
            if let Some(out) = self.expand_dense(class, orientation)? {
                return Ok(out);
            }
        }
        let space = class.space.clone();
        let shape = space.shape().clone();
        let n = shape.n();
        let table = self.table(&shape, orientation)?;
        let mut residual = class.values.clone();
        let mut out = BasisExpansion::zero(orientation, self.nvars(n));
        let order: Vec<usize> = match orientation {
            Orientation::Opposite => (0..space.len()).collect(),
            Orientation::Plain => (0..space.len()).rev().collect(),
        };
        for idx in order {
            if residual[idx].is_zero() {
                continue;
            }
            let mut c = residual[idx].clone();
            for (a, b) in space.diagonal_factors(idx, orientation) {
                c = c.div_one_minus(&self.torus.ratio(n, a, b)).map_err(|_| {
                    Error::NotInSpan(format!("inexact elimination at {} on {shape}", space.points[idx]))
                })?;
            }
            for (x, value) in table.rows[idx].iter().enumerate() {
                if !value.is_zero() {
                    residual[x] = &residual[x] - &(&c * value);
                }
            }
            debug_assert!(residual[idx].is_zero());
            out.add_term(space.points[idx].clone(), &c);
        }
        Ok(out)
    }

    fn dense_table(&self, shape: &FlagShape, orientation: Orientation) -> Result<Arc<Option<DenseRows>>> {
        self.dense_tables.get_or_try_init(&(shape.clone(), orientation), || {
            let table = self.table(shape, orientation)?;
            Ok(table
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(x, v)| Some((x, DensePoly::from_laurent(v)?)))
                        .collect::<Option<Vec<_>>>()
                })
                .collect::<Option<Vec<_>>>())
        })
    }

    /// [`Self::expand`] in machine words; `None` means "redo it exactly".
    fn expand_dense(&self, class: &LocalizedClass, orientation: Orientation) -> Result<Option<BasisExpansion>> {
        let space = class.space.clone();
        let shape = space.shape().clone();
        let n = shape.n();
        let table = self.dense_table(&shape, orientation)?;
        let Some(rows) = table.as_ref() else {
            return Ok(None);
        };
        let Some(mut residual) = class.values.iter().map(DensePoly::from_laurent).collect::<Option<Vec<_>>>() else {
            return Ok(None);
        };
        let order: Vec<usize> = match orientation {
            Orientation::Opposite => (0..space.len()).collect(),
            Orientation::Plain => (0..space.len()).rev().collect(),
        };
        let mut out = BasisExpansion::zero(orientation, 1);
        for idx in order {
            if residual[idx].is_zero() {
                continue;
            }
            let mut c = std::mem::take(&mut residual[idx]);
            for (a, b) in space.diagonal_factors(idx, orientation) {
                match c.div_one_minus(self.torus.ratio(n, a, b)[0]) {
                    Some(q) => c = q,
                    None => return Ok(None),
                }
            }
            for (x, value) in &rows[idx] {
                if *x != idx && residual[*x].sub_mul(&c, value).is_none() {
                    return Ok(None);
                }
            }
            out.add_term(space.points[idx].clone(), &c.to_laurent());
        }
        Ok(Some(out))
    }

    /// `Σ c_w · O(w)` as a localized class.
    pub fn recombine(&self, shape: &FlagShape, expansion: &BasisExpansion) -> Result<LocalizedClass> {
        let space = self.space(shape);
        let table = self.table(shape, expansion.orientation)?;
        let mut values = vec![Laurent::zero(self.nvars(shape.n())); space.len()];
        for (w, c) in &expansion.coeffs {
            let row = &table.rows[space.position(w)?];
            for (x, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    values[x] = &values[x] + &(c * v);
                }
            }
        }
        Ok(self.class_from_values(space, values))
    }

    /// Pullback along the projection `to → class.shape()` (so `to` is finer).
    pub fn pullback(&self, class: &LocalizedClass, to: &FlagShape) -> Result<LocalizedClass> {
        if !to.projects_to(class.shape()) {
            return Err(Error::ShapeMismatch(format!("no projection {to} -> {}", class.shape())));
        }
        let src = &class.space;
        Ok(self.class_from_fn(to, |x| class.values[src.position_of_coset(x)].clone()))
    }

    /// Pushforward along `class.shape() → to`, by transporting the plain
    /// basis: `π_*[O_{X_w}] = [O_{X_{π(w)}}]`.
    pub fn pushforward(&self, class: &LocalizedClass, to: &FlagShape) -> Result<LocalizedClass> {
        if !class.shape().projects_to(to) {
            return Err(Error::ShapeMismatch(format!("no projection {} -> {to}", class.shape())));
        }
        let q = to.parabolic();
        let expansion = self.expand(class, Orientation::Plain)?;
        let image = expansion.map_indices(|w| min_coset_rep(w, &q));
        self.recombine(to, &image)
    }

    /// Sheaf Euler characteristic: the coefficient sum in the opposite basis.
    pub fn euler_char(&self, class: &LocalizedClass) -> Result<Laurent> {
        Ok(self.expand(class, Orientation::Opposite)?.coefficient_sum())
    }

    /// `[O_{X_v}]` in the opposite basis.
    pub fn plain_to_opposite(&self, shape: &FlagShape, v: &Permutation) -> Result<BasisExpansion> {
        let class = self.schubert_class(shape, v, Orientation::Plain)?;
        self.expand(&class, Orientation::Opposite)
    }

    /// `[O_{X^w}]` in the plain basis.
    pub fn opposite_to_plain(&self, shape: &FlagShape, w: &Permutation) -> Result<BasisExpansion> {
        let class = self.schubert_class(shape, w, Orientation::Opposite)?;
        self.expand(&class, Orientation::Plain)
    }

    /// Verifies the edge condition: along every `T`-stable curve with
    /// character `ε_a - ε_b` the difference of the two restrictions is
    /// divisible by `1 - t_a/t_b`.
    pub fn check_gkm(&self, class: &LocalizedClass) -> Result<()> {
        let space = &class.space;
        let n = space.n();
        for i in 0..space.len() {
            for (j, a, b) in space.edges(i) {
                if j < i {
                    continue;
                }
                let diff = &class.values[i] - &class.values[j];
                diff.div_one_minus(&self.torus.ratio(n, a, b)).map_err(|_| {
                    Error::NotDivisible(format!(
                        "edge condition fails between {} and {} on {}",
                        space.points[i],
                        space.points[j],
                        space.shape()
                    ))
                })?;
            }
        }
        Ok(())
    }

    /// Triangular support test: `O^w|_v ≠ 0 ⇒ w ≤ v`, `O_w|_v ≠ 0 ⇒ v ≤ w`.
    pub fn check_triangular(&self, shape: &FlagShape) -> Result<bool> {
        let space = self.space(shape);
        for orientation in [Orientation::Opposite, Orientation::Plain] {
            let table = self.table(shape, orientation)?;
            for (i, w) in space.points.iter().enumerate() {
                for (j, v) in space.points.iter().enumerate() {
                    let allowed = match orientation {
                        Orientation::Opposite => bruhat_leq(w, v),
                        Orientation::Plain => bruhat_leq(v, w),
                    };
                    // support is exactly the Bruhat interval
                    if allowed == table.rows[i][j].is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{partition_to_minrep, FlagShape, Partition};

    fn gr(m: usize, n: usize) -> FlagShape {
        FlagShape::grassmannian(m, n).unwrap()
    }

    fn part(s: &str, m: usize, n: usize) -> Permutation {
        partition_to_minrep(&s.parse::<Partition>().unwrap(), m, n).unwrap()
    }

    #[test]
    fn identity_class_is_one() {
        let e = Engine::new(Torus::Equivariant);
        for shape in [gr(1, 2), gr(2, 4), FlagShape::full_flag(3), FlagShape::new(&[1, 3], 4).unwrap()] {
            let c = e.schubert_class(&shape, &Permutation::identity(shape.n()), Orientation::Opposite).unwrap();
            assert!(c.is_one(), "{shape}");
        }
    }

    #[test]
    fn one_parameter_tables_match_restricted_recursion() {
        let full = Engine::new(Torus::Equivariant);
        let z = Engine::new(Torus::NonEquivariant);
        for shape in FlagShape::all_for(5) {
            for orientation in [Orientation::Opposite, Orientation::Plain] {
                let restricted = full.table(&shape, orientation).unwrap().map(|x| Torus::NonEquivariant.restrict(x));
                assert_eq!(*z.table(&shape, orientation).unwrap(), restricted, "{shape} {}", orientation.name());
            }
        }
    }

    #[test]
    fn projective_line() {
        let e = Engine::new(Torus::Equivariant);
        let p1 = gr(1, 2);
        let s: Permutation = "[2,1]".parse().unwrap();
        let pt = e.schubert_class(&p1, &s, Orientation::Opposite).unwrap();
        assert!(pt.value_at(&Permutation::identity(2)).unwrap().is_zero());
        assert_eq!(pt.value_at(&s).unwrap().to_string(), "-t1^-1*t2 + 1");
        assert!(e.euler_char(&pt).unwrap().is_one());
        let plain_pt = e.schubert_class(&p1, &Permutation::identity(2), Orientation::Plain).unwrap();
        assert!(e.euler_char(&plain_pt).unwrap().is_one());
    }

    #[test]
    fn support_and_diagonal() {
        let e = Engine::new(Torus::Equivariant);
        for shape in [gr(2, 4), FlagShape::new(&[1, 3], 4).unwrap(), FlagShape::full_flag(3)] {
            assert!(e.check_triangular(&shape).unwrap(), "{shape}");
            let space = e.space(&shape);
            for w in space.points() {
                for orientation in [Orientation::Opposite, Orientation::Plain] {
                    let diag = e.diagonal(&shape, w, orientation).unwrap();
                    let prod = diag.iter().fold(Laurent::one(shape.n()), |a, b| &a * b);
                    let class = e.schubert_class(&shape, w, orientation).unwrap();
                    assert_eq!(class.value_at(w).unwrap(), &prod);
                    let codim = match orientation {
                        Orientation::Opposite => w.length(),
                        Orientation::Plain => shape.dimension() - w.length(),
                    };
                    assert_eq!(diag.len(), codim);
                    if codim > 0 {
                        assert_eq!(prod.specialize_ones(), Int::from(0));
                    }
                    e.check_gkm(&class).unwrap();
                    assert!(class.values().iter().all(Laurent::is_degree_zero));
                }
            }
        }
    }

    #[test]
    fn richardson_classes() {
        let e = Engine::new(Torus::Equivariant);
        let x = gr(2, 4);
        let pts = e.space(&x).points().to_vec();
        for u in &pts {
            for v in &pts {
                let a = e.schubert_class(&x, u, Orientation::Opposite).unwrap();
                let b = e.schubert_class(&x, v, Orientation::Plain).unwrap();
                let r = a.multiply(&b).unwrap();
                assert_eq!(r.is_zero(), !bruhat_leq(u, v));
                let exp = e.expand(&r, Orientation::Opposite).unwrap();
                for w in exp.coeffs().keys() {
                    assert!(bruhat_leq(u, w));
                }
                if !r.is_zero() {
                    assert!(e.euler_char(&r).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn nonequivariant_product_in_gr24() {
        let e = Engine::new(Torus::NonEquivariant);
        let x = gr(2, 4);
        let o1 = e.schubert_class(&x, &part("1", 2, 4), Orientation::Opposite).unwrap();
        let exp = e.expand(&o1.multiply(&o1).unwrap(), Orientation::Opposite).unwrap();
        let spec: Vec<(String, Int)> = exp
            .coeffs()
            .iter()
            .map(|(w, c)| (crate::weyl::minrep_to_partition(w, 2).unwrap().to_string(), c.specialize_ones()))
            .filter(|(_, c)| *c != Int::from(0))
            .collect();
        let mut expect = vec![
            ("1,1".to_string(), Int::from(1)),
            ("2".to_string(), Int::from(1)),
            ("2,1".to_string(), Int::from(-1)),
        ];
        let mut got = spec;
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn expansions_round_trip() {
        let e = Engine::new(Torus::Equivariant);
        let x = FlagShape::new(&[1, 3], 4).unwrap();
        let pts = e.space(&x).points().to_vec();
        for w in &pts {
            let c = e.schubert_class(&x, w, Orientation::Opposite).unwrap();
            let exp = e.expand(&c, Orientation::Opposite).unwrap();
            assert_eq!(exp, BasisExpansion::single(Orientation::Opposite, w.clone(), Laurent::one(4)));
            let plain = e.expand(&c, Orientation::Plain).unwrap();
            assert_eq!(e.recombine(&x, &plain).unwrap(), c);
        }
        assert!(e.expand(&e.zero(&x), Orientation::Opposite).unwrap().is_zero());
    }

    #[test]
    fn change_of_basis() {
        let e = Engine::new(Torus::Equivariant);
        let x = gr(2, 4);
        let top = x.max_min_rep();
        let exp = e.plain_to_opposite(&x, &top).unwrap();
        assert_eq!(exp, BasisExpansion::single(Orientation::Opposite, Permutation::identity(4), Laurent::one(4)));
        // non-equivariantly O_(1) is the translate O^(2,1)
        let v = part("1", 2, 4);
        let spec: Vec<_> = e
            .plain_to_opposite(&x, &v)
            .unwrap()
            .coeffs()
            .iter()
            .map(|(w, c)| (w.clone(), c.specialize_ones()))
            .filter(|(_, c)| *c != Int::from(0))
            .collect();
        assert_eq!(spec, vec![(part("2,1", 2, 4), Int::from(1))]);
        // and back
        for w in e.space(&x).points() {
            let there = e.plain_to_opposite(&x, w).unwrap();
            let mut back = BasisExpansion::zero(Orientation::Plain, 4);
            for (u, c) in there.coeffs() {
                back = back.add(&e.opposite_to_plain(&x, u).unwrap().scale(c));
            }
            assert_eq!(back, BasisExpansion::single(Orientation::Plain, w.clone(), Laurent::one(4)));
        }
    }

    #[test]
    fn inexact_elimination_is_reported() {
        let e = Engine::new(Torus::Equivariant);
        let x = gr(1, 2);
        let s: Permutation = "[2,1]".parse().unwrap();
        let bogus = e.class_from_fn(&x, |w| if *w == s { Laurent::one(2) } else { Laurent::zero(2) });
        assert!(matches!(e.expand(&bogus, Orientation::Opposite), Err(Error::NotInSpan(_))));
        assert!(e.check_gkm(&bogus).is_err());
    }
}
