//! Type-A Weyl group calculus.
//!
//! Permutations are stored in one-line notation with values `1..=n`. A flag
//! variety `Fl(a_1 < ... < a_k; n)` is described by a [`FlagShape`]; its
//! parabolic subgroup `W_P` is generated by the simple reflections `s_i` with
//! `i` not among the `a_j`, so the cosets `w W_P` are determined by which
//! values land in each block of positions `(a_{j-1}, a_j]`.
//!
//! Schubert indices are always minimal coset representatives. For a
//! Grassmannian the partition form is only a presentation layer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    /// The longest element `w0 = [n, n-1, ..., 1]`.
    pub fn longest(n: usize) -> Self {
        Permutation((1..=n as u8).rev().collect())
    }

    pub fn from_one_line(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            let e = e as usize;
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidPermutation(format!("{entries:?}")));
            }
            seen[e] = true;
        }
        Ok(Permutation(entries))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let w = &self.0;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation(inv)
    }

    /// The composition `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&i| self.0[i as usize - 1]).collect())
    }

    /// Left multiplication by the transposition of the values `a` and `b`.
    pub fn swap_values(&self, a: usize, b: usize) -> Self {
        let (a, b) = (a as u8, b as u8);
        Permutation(
            self.0
                .iter()
                .map(|&v| if v == a { b } else if v == b { a } else { v })
                .collect(),
        )
    }

    /// Right multiplication by the transposition of positions `i` and `j` (1-based).
    pub fn swap_positions(&self, i: usize, j: usize) -> Self {
        let mut w = self.0.clone();
        w.swap(i - 1, j - 1);
        Permutation(w)
    }

    /// Right descents: positions `i` with `w(i) > w(i+1)`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.0[i - 1] > self.0[i]).collect()
    }

    /// Some reduced word `s_{i_1} ... s_{i_l}` for this permutation.
    pub fn reduced_word(&self) -> Vec<usize> {
        // peel right descents: w = (w s_i) s_i
        let mut w = self.0.clone();
        let mut word = Vec::new();
        while let Some(i) = (1..w.len()).find(|&i| w[i - 1] > w[i]) {
            w.swap(i - 1, i);
            word.push(i);
        }
        word.reverse();
        word
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("permutation must be bracketed: {s:?}")))?;
        let entries = inner
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad permutation entry {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_line(entries)
    }
}

/// Bruhat order by the tableau criterion: `u ≤ v` iff for every `k` the
/// sorted values of `u(1..k)` are entrywise at most those of `v(1..k)`.
pub fn bruhat_leq(u: &Permutation, v: &Permutation) -> bool {
    assert_eq!(u.n(), v.n(), "Bruhat comparison across different n");
    let n = u.n();
    let mut a: Vec<u8> = Vec::with_capacity(n);
    let mut b: Vec<u8> = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        insert_sorted(&mut a, u.0[k]);
        insert_sorted(&mut b, v.0[k]);
        if a.iter().zip(&b).any(|(x, y)| x > y) {
            return false;
        }
    }
    true
}

fn insert_sorted(v: &mut Vec<u8>, x: u8) {
    let pos = v.partition_point(|&y| y < x);
    v.insert(pos, x);
}

/// A set of simple reflections `s_i`, `1 ≤ i < n`, generating `W_P`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParabolicSet {
    n: usize,
    gens: Vec<bool>,
}

impl ParabolicSet {
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        let mut gens = vec![false; n.saturating_sub(1)];
        for &i in indices {
            if i == 0 || i >= n {
                return Err(Error::InvalidShape(format!(
                    "simple reflection index {i} out of range for n = {n}"
                )));
            }
            gens[i - 1] = true;
        }
        Ok(ParabolicSet { n, gens })
    }

    pub fn empty(n: usize) -> Self {
        ParabolicSet { n, gens: vec![false; n.saturating_sub(1)] }
    }

    pub fn full(n: usize) -> Self {
        ParabolicSet { n, gens: vec![true; n.saturating_sub(1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i < self.n && self.gens[i - 1]
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..self.n).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_subset(&self, other: &ParabolicSet) -> bool {
        self.n == other.n && (1..self.n).all(|i| !self.contains(i) || other.contains(i))
    }

    /// Position blocks `[start, end)` (0-based) permuted by `W_P`.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=self.n {
            if i == self.n || !self.contains(i) {
                blocks.push((start, i));
                start = i;
            }
        }
        blocks
    }

    /// The flag shape whose parabolic subgroup is generated by this set.
    pub fn to_shape(&self) -> FlagShape {
        let dims = (1..self.n).filter(|&i| !self.contains(i)).collect();
        FlagShape { n: self.n, dims }
    }

    /// The longest element of `W_P`.
    pub fn longest_element(&self) -> Permutation {
        let mut w: Vec<u8> = (1..=self.n as u8).collect();
        for (s, e) in self.blocks() {
            w[s..e].reverse();
        }
        Permutation(w)
    }
}

/// Unique shortest element of `w W_P`: sort values inside every position block.
pub fn min_coset_rep(w: &Permutation, p: &ParabolicSet) -> Permutation {
    let mut v = w.0.clone();
    for (s, e) in p.blocks() {
        v[s..e].sort_unstable();
    }
    Permutation(v)
}

/// Unique longest element of `w W_P`.
pub fn max_coset_rep(w: &Permutation, p: &ParabolicSet) -> Permutation {
    let mut v = w.0.clone();
    for (s, e) in p.blocks() {
        v[s..e].sort_unstable_by(|a, b| b.cmp(a));
    }
    Permutation(v)
}

/// Ambient shape of a partial flag variety `Fl(a_1 < ... < a_k; n)`.
///
/// Degenerate steps `0` and `n` are dropped on construction, so the point
/// `Fl(;n)` and `Gr(n,n)` normalize to the same (empty) shape.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FlagShape {
    n: usize,
    dims: Vec<usize>,
}

impl FlagShape {
    pub fn new(dims: &[usize], n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidShape(format!("ambient dimension {n} out of range")));
        }
        let dims: Vec<usize> = dims.iter().copied().filter(|&a| a != 0 && a != n).collect();
        if dims.iter().any(|&a| a > n) || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidShape(format!("dimensions {dims:?} in C^{n}")));
        }
        Ok(FlagShape { n, dims })
    }

    pub fn grassmannian(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::InvalidShape(format!("Gr({m},{n}) needs 0 < m < n")));
        }
        FlagShape::new(&[m], n)
    }

    pub fn full_flag(n: usize) -> Self {
        FlagShape { n, dims: (1..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Every partial flag shape of `C^n`, the point included.
    pub fn all_for(n: usize) -> Vec<FlagShape> {
        (0..(1u32 << (n - 1)))
            .map(|mask| {
                let dims: Vec<usize> = (1..n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                FlagShape::new(&dims, n).expect("increasing by construction")
            })
            .collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parabolic(&self) -> ParabolicSet {
        let mut gens = vec![true; self.n.saturating_sub(1)];
        for &a in &self.dims {
            gens[a - 1] = false;
        }
        ParabolicSet { n: self.n, gens }
    }

    /// Complex dimension: number of position pairs in distinct blocks.
    pub fn dimension(&self) -> usize {
        let total = self.n * (self.n - 1) / 2;
        let within: usize = self
            .parabolic()
            .blocks()
            .iter()
            .map(|(s, e)| (e - s) * (e - s - 1) / 2)
            .sum();
        total - within
    }

    /// `true` when `coarser` forgets some of the dimensions of `self`
    /// (so there is a projection `self → coarser`).
    pub fn projects_to(&self, coarser: &FlagShape) -> bool {
        self.n == coarser.n && coarser.dims.iter().all(|a| self.dims.contains(a))
    }

    /// All minimal coset representatives, sorted by `(length, one-line)`.
    pub fn min_coset_reps(&self) -> Vec<Permutation> {
        let blocks = self.parabolic().blocks();
        let sizes: Vec<usize> = blocks.iter().map(|(s, e)| e - s).collect();
        let mut reps = Vec::new();
        let mut labels = vec![0usize; self.n];
        let mut remaining = sizes.clone();
        enumerate_labelings(0, &mut labels, &mut remaining, &mut |labels| {
            let mut w = vec![0u8; self.n];
            let mut fill: Vec<usize> = blocks.iter().map(|(s, _)| *s).collect();
            for (value_minus_one, &b) in labels.iter().enumerate() {
                w[fill[b]] = value_minus_one as u8 + 1;
                fill[b] += 1;
            }
            reps.push(Permutation(w));
        });
        reps.sort_by_cached_key(|w| (w.length(), w.clone()));
        reps
    }

    /// `true` if `w` is a minimal representative of its coset.
    pub fn is_min_rep(&self, w: &Permutation) -> bool {
        w.n() == self.n
            && self
                .parabolic()
                .blocks()
                .iter()
                .all(|&(s, e)| w.0[s..e].windows(2).all(|p| p[0] < p[1]))
    }

    pub fn check_index(&self, w: &Permutation) -> Result<()> {
        if self.is_min_rep(w) {
            Ok(())
        } else {
            Err(Error::InvalidIndex { index: w.to_string(), shape: self.to_string() })
        }
    }

    /// The maximal element of `W^P`, indexing the point Schubert variety.
    pub fn max_min_rep(&self) -> Permutation {
        min_coset_rep(&Permutation::longest(self.n), &self.parabolic())
    }

    /// Compact identifier used for cache file names, e.g. `fl2-4_n6`.
    pub fn slug(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(|a| a.to_string()).collect();
        format!("fl{}_n{}", dims.join("-"), self.n)
    }
}

fn enumerate_labelings(
    pos: usize,
    labels: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if pos == labels.len() {
        emit(labels);
        return;
    }
    for b in 0..remaining.len() {
        if remaining[b] > 0 {
            remaining[b] -= 1;
            labels[pos] = b;
            enumerate_labelings(pos + 1, labels, remaining, emit);
            remaining[b] += 1;
        }
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|a| a.to_string()).collect();
        write!(f, "Fl({};{})", dims.join(","), self.n)
    }
}

/// Index of the image Schubert variety under the projection `from → to`.
/// The image of `X_w` is `X_{w'}` and the image of `X^w` is `X^{w'}` with
/// `w'` the minimal representative of `w W_Q`.
pub fn schubert_image_index(w: &Permutation, from: &FlagShape, to: &FlagShape) -> Result<Permutation> {
    check_projection(from, to)?;
    from.check_index(w)?;
    Ok(min_coset_rep(w, &to.parabolic()))
}

/// Index of the full preimage of `X_w` (B-stable) under `from → to`:
/// the longest element of `w W_Q`, reduced modulo `W_R`.
pub fn schubert_preimage_index(w: &Permutation, from: &FlagShape, to: &FlagShape) -> Result<Permutation> {
    check_projection(from, to)?;
    to.check_index(w)?;
    Ok(min_coset_rep(&max_coset_rep(w, &to.parabolic()), &from.parabolic()))
}

/// The twist `w ↦ min(w0 w)` exchanging `X_w` and the translate
/// `w0 · X^{min(w0 w)}`.
pub fn twist_index(w: &Permutation, shape: &FlagShape) -> Permutation {
    let w0 = Permutation::longest(shape.n);
    min_coset_rep(&w0.compose(w), &shape.parabolic())
}

/// Image index for opposite (B⁻-stable) Schubert varieties, routed through
/// the longest-element twist.
pub fn opposite_image_index(w: &Permutation, from: &FlagShape, to: &FlagShape) -> Result<Permutation> {
    let plain = twist_index(w, from);
    let image = schubert_image_index(&plain, from, to)?;
    Ok(twist_index(&image, to))
}

/// Preimage index for opposite Schubert varieties, routed through the twist.
pub fn opposite_preimage_index(w: &Permutation, from: &FlagShape, to: &FlagShape) -> Result<Permutation> {
    let plain = twist_index(w, to);
    let pre = schubert_preimage_index(&plain, from, to)?;
    Ok(twist_index(&pre, from))
}

fn check_projection(from: &FlagShape, to: &FlagShape) -> Result<()> {
    if from.projects_to(to) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!("no projection {from} -> {to}")))
    }
}

/// A partition, stored without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (1-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.0.iter().all(|&p| p as usize <= cols)
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.0.len() <= self.0.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// All partitions in the `rows × cols` box.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<Partition> {
        fn rec(rows: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::new(prefix.clone()).expect("decreasing by construction"));
            if prefix.len() == rows {
                return;
            }
            for p in 1..=max {
                prefix.push(p);
                rec(rows, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols as u32, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| (a.size(), a).cmp(&(b.size(), b)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// The Grassmannian permutation of `λ` in `Gr(m,n)`:
/// `w(m+1-i) = λ_i + m + 1 - i`, remaining values increasing.
pub fn partition_to_minrep(lambda: &Partition, m: usize, n: usize) -> Result<Permutation> {
    if !lambda.fits(m, n - m) {
        return Err(Error::OutsideBox { partition: lambda.to_string(), rows: m, cols: n - m });
    }
    let mut w = vec![0u8; n];
    let mut used = vec![false; n + 1];
    for i in 1..=m {
        let v = lambda.part(i) as usize + m + 1 - i;
        w[m - i] = v as u8;
        used[v] = true;
    }
    let rest = (1..=n).filter(|&v| !used[v]);
    for (slot, v) in w[m..].iter_mut().zip(rest) {
        *slot = v as u8;
    }
    Ok(Permutation(w))
}

/// Inverse of [`partition_to_minrep`].
pub fn minrep_to_partition(w: &Permutation, m: usize) -> Result<Partition> {
    let shape = FlagShape::grassmannian(m, w.n())?;
    shape.check_index(w)?;
    let parts = (1..=m).map(|i| (w.at(m + 1 - i) - (m + 1 - i)) as u32).collect();
    Partition::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(4).length(), 0);
        assert_eq!(perm("[1,3,2,4]").length(), 1);
        let w = partition_to_minrep(&part("2,1"), 2, 4).unwrap();
        assert_eq!(w.length(), 3);
    }

    #[test]
    fn bruhat_examples() {
        let id = Permutation::identity(4);
        for w in FlagShape::full_flag(4).min_coset_reps() {
            assert!(bruhat_leq(&id, &w));
        }
        let a = partition_to_minrep(&part("1"), 2, 4).unwrap();
        let b = partition_to_minrep(&part("2,1"), 2, 4).unwrap();
        assert!(bruhat_leq(&a, &b));
        let c = partition_to_minrep(&part("2"), 2, 4).unwrap();
        let d = partition_to_minrep(&part("1,1"), 2, 4).unwrap();
        assert!(!bruhat_leq(&c, &d));
        assert!(!bruhat_leq(&d, &c));
    }

    #[test]
    fn coset_representatives() {
        let gr14 = FlagShape::grassmannian(1, 4).unwrap().parabolic();
        assert_eq!(gr14.indices(), vec![2, 3]);
        assert_eq!(min_coset_rep(&perm("[2,1,3,4]"), &gr14), perm("[2,1,3,4]"));
        assert_eq!(min_coset_rep(&Permutation::identity(4), &gr14), Permutation::identity(4));

        let p13 = ParabolicSet::new(4, &[1, 3]).unwrap();
        let w = perm("[3,1,4,2]");
        let min = min_coset_rep(&w, &p13);
        assert_eq!(min, perm("[1,3,2,4]"));
        // w = min · (W_P part), lengths add
        let wp = min.inverse().compose(&w);
        assert_eq!(min.length() + wp.length(), w.length());

        assert_eq!(
            max_coset_rep(&Permutation::identity(4), &ParabolicSet::full(4)),
            Permutation::longest(4)
        );
        assert_eq!(
            max_coset_rep(&Permutation::identity(4), &ParabolicSet::empty(4)),
            Permutation::identity(4)
        );
        let lam = partition_to_minrep(&part("1"), 2, 4).unwrap();
        let max = max_coset_rep(&lam, &p13);
        assert_eq!(max, lam.compose(&p13.longest_element()));
        assert_eq!(max.length(), 1 + p13.longest_element().length());
    }

    #[test]
    fn partition_dictionary() {
        assert_eq!(partition_to_minrep(&Partition::empty(), 2, 4).unwrap(), Permutation::identity(4));
        let w = partition_to_minrep(&part("1"), 2, 4).unwrap();
        assert_eq!(w, perm("[1,3,2,4]"));
        assert!(w.descents().iter().all(|&d| d == 2));
        let full = partition_to_minrep(&part("2,2"), 2, 4).unwrap();
        assert_eq!(full, perm("[3,4,1,2]"));
        assert_eq!(full.length(), 4);
        assert!(matches!(
            partition_to_minrep(&part("3,1"), 2, 4),
            Err(Error::OutsideBox { .. })
        ));
    }

    #[test]
    fn exhaustive_dictionary_and_containment() {
        for n in 2..=6 {
            for m in 1..n {
                let parts = Partition::all_in_box(m, n - m);
                let reps: Vec<_> = parts.iter().map(|p| partition_to_minrep(p, m, n).unwrap()).collect();
                let shape = FlagShape::grassmannian(m, n).unwrap();
                let mut expected = shape.min_coset_reps();
                let mut got = reps.clone();
                expected.sort();
                got.sort();
                assert_eq!(got, expected, "Gr({m},{n})");
                for (p, w) in parts.iter().zip(&reps) {
                    assert_eq!(w.length(), p.size());
                    assert_eq!(&minrep_to_partition(w, m).unwrap(), p);
                }
                for (p, u) in parts.iter().zip(&reps) {
                    for (q, v) in parts.iter().zip(&reps) {
                        assert_eq!(q.contains(p), bruhat_leq(u, v), "{p} vs {q} in Gr({m},{n})");
                    }
                }
            }
        }
    }

    #[test]
    fn length_splits_over_parabolic() {
        for n in 2..=5 {
            for w in FlagShape::full_flag(n).min_coset_reps() {
                for mask in 0..(1u32 << (n - 1)) {
                    let idx: Vec<usize> = (1..n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                    let p = ParabolicSet::new(n, &idx).unwrap();
                    let min = min_coset_rep(&w, &p);
                    let wp = min.inverse().compose(&w);
                    assert_eq!(min.length() + wp.length(), w.length());
                    assert_eq!(min_coset_rep(&min, &p), min);
                    assert_eq!(min_coset_rep(&max_coset_rep(&w, &p), &p), min);
                }
            }
        }
    }

    #[test]
    fn image_and_preimage() {
        let from = FlagShape::new(&[1, 3], 4).unwrap();
        let to = FlagShape::grassmannian(1, 4).unwrap();
        let id = Permutation::identity(4);
        assert_eq!(schubert_image_index(&id, &from, &to).unwrap(), id);
        // preimage of a point is the whole fiber
        let pre = schubert_preimage_index(&id, &from, &to).unwrap();
        assert_eq!(pre, min_coset_rep(&to.parabolic().longest_element(), &from.parabolic()));

        for w in to.min_coset_reps() {
            let pre = schubert_preimage_index(&w, &from, &to).unwrap();
            assert_eq!(schubert_image_index(&pre, &from, &to).unwrap(), w);
            let fiber = from.dimension() - to.dimension();
            assert_eq!(pre.length(), w.length() + fiber);
        }
        // an image never has larger dimension than its source
        for w in from.min_coset_reps() {
            let img = schubert_image_index(&w, &from, &to).unwrap();
            assert!(img.length() <= w.length());
            assert!(w.length() - img.length() <= from.dimension() - to.dimension());
        }
        assert!(matches!(
            schubert_image_index(&id, &to, &from),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn preimage_fixed_points_brute_force() {
        for n in 2..=5 {
            let full = FlagShape::full_flag(n);
            for from in FlagShape::all_for(n) {
                for to in FlagShape::all_for(n) {
                    if !from.projects_to(&to) {
                        continue;
                    }
                    for w in to.min_coset_reps() {
                        let pre = schubert_preimage_index(&w, &from, &to).unwrap();
                        for x in from.min_coset_reps() {
                            let in_pre = bruhat_leq(&x, &pre);
                            let maps_in = bruhat_leq(&min_coset_rep(&x, &to.parabolic()), &w);
                            assert_eq!(in_pre, maps_in, "{from} -> {to}, w = {w}, x = {x}");
                        }
                        let opp = opposite_preimage_index(&w, &from, &to).unwrap();
                        assert_eq!(opp, w, "opposite preimage keeps the index");
                    }
                    for w in from.min_coset_reps() {
                        let direct = min_coset_rep(&w, &to.parabolic());
                        assert_eq!(opposite_image_index(&w, &from, &to).unwrap(), direct);
                    }
                }
            }
            assert_eq!(full.min_coset_reps().len(), (1..=n).product::<usize>());
        }
    }

    #[test]
    fn reduced_words() {
        for w in FlagShape::full_flag(4).min_coset_reps() {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            let mut x = Permutation::identity(4);
            for &i in &word {
                x = x.swap_positions(i, i + 1);
            }
            assert_eq!(x, w);
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(perm("[2,4,1,3]").to_string(), "[2,4,1,3]");
        assert!("[1,1,2]".parse::<Permutation>().is_err());
        assert!("1,2".parse::<Permutation>().is_err());
        assert_eq!(part(""), Partition::empty());
        assert_eq!(part("2,1").to_string(), "2,1");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }
}
