//! Combinatorial calculus of relation subsets: complex products, closures,
//! thin radical and residue, strongly normal and singular subsets.
//!
//! All operations are pure functions of an immutable [`Scheme`] and return
//! canonical values; subsets render and iterate in ascending index order.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scheme::Scheme;

const WORD_BITS: usize = 64;

/// Default cap on the number of free indices `enumerate_singular` may search
/// over (the enumeration is exponential in this count).
pub const DEFAULT_MAX_FREE_BITS: usize = 24;

/// A subset of the relations of one scheme, as a bitset over `0..=d`.
///
/// One machine word is stored inline, which covers class counts up to 63;
/// larger schemes spill to further words transparently. A subset is only
/// meaningful relative to the scheme whose relation count it was built with,
/// and the operations on [`Scheme`] assert that the sizes line up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationSubset {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl RelationSubset {
    pub(crate) fn empty(len: usize) -> Self {
        let nwords = len.div_ceil(WORD_BITS).max(1);
        RelationSubset {
            len,
            words: SmallVec::from_elem(0, nwords),
        }
    }

    pub(crate) fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    /// Number of relation slots, i.e. `d + 1` of the owning scheme.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub(crate) fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn union(&self, other: &RelationSubset) -> RelationSubset {
        assert_eq!(self.len, other.len, "subsets belong to different schemes");
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        out
    }

    pub fn intersect(&self, other: &RelationSubset) -> RelationSubset {
        assert_eq!(self.len, other.len, "subsets belong to different schemes");
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out
    }

    pub fn is_subset_of(&self, other: &RelationSubset) -> bool {
        assert_eq!(self.len, other.len, "subsets belong to different schemes");
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    /// Indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compares the underlying bit patterns as integers. Used for canonical
    /// ordering of enumeration output.
    pub(crate) fn cmp_bits(&self, other: &RelationSubset) -> std::cmp::Ordering {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter().zip(&other.words).rev() {
            match w.cmp(o) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl std::fmt::Display for RelationSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Which clause of the quasi-thin product classification a product
/// `A_a A_b` of two valency-2 relations falls into, with the witness
/// indices of the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiThinCase {
    /// `A_a A_b = 2A_u + 2A_v` with `k_u = k_v = 1`.
    TwoThinPair { u: usize, v: usize },
    /// `A_a A_b = 2A_u` with `k_u = 2`.
    DoubledThick { u: usize },
    /// `A_a A_b = 2A_u + A_v` with `k_u = 1`, `k_v = 2`.
    ThinPlusThick { u: usize, v: usize },
    /// `A_a A_b = A_u + A_v` with `k_u = k_v = 2`.
    ThickPair { u: usize, v: usize },
    /// `A_a A_b = A_u` with `k_u = 4`.
    SingleQuadruple { u: usize },
}

impl QuasiThinCase {
    /// Roman tag of the case, "I" through "V".
    pub fn tag(&self) -> &'static str {
        match self {
            QuasiThinCase::TwoThinPair { .. } => "I",
            QuasiThinCase::DoubledThick { .. } => "II",
            QuasiThinCase::ThinPlusThick { .. } => "III",
            QuasiThinCase::ThickPair { .. } => "IV",
            QuasiThinCase::SingleQuadruple { .. } => "V",
        }
    }
}

/// Matches the nonzero coefficients of a product of two valency-2 adjacency
/// matrices against the five possible shapes. `entries` holds
/// `(index, coefficient, valency)` triples of the nonzero coefficients in
/// ascending index order.
pub(crate) fn match_quasi_thin_case(entries: &[(usize, u64, u64)]) -> Option<QuasiThinCase> {
    match entries {
        [(u, 2, 1), (v, 2, 1)] => Some(QuasiThinCase::TwoThinPair { u: *u, v: *v }),
        [(u, 2, 2)] => Some(QuasiThinCase::DoubledThick { u: *u }),
        [(u, 2, 1), (v, 1, 2)] | [(v, 1, 2), (u, 2, 1)] => {
            Some(QuasiThinCase::ThinPlusThick { u: *u, v: *v })
        }
        [(u, 1, 2), (v, 1, 2)] => Some(QuasiThinCase::ThickPair { u: *u, v: *v }),
        [(u, 1, 4)] => Some(QuasiThinCase::SingleQuadruple { u: *u }),
        _ => None,
    }
}

impl Scheme {
    /// The empty subset of this scheme's relations.
    pub fn empty_subset(&self) -> RelationSubset {
        RelationSubset::empty(self.relation_count())
    }

    /// The full subset S.
    pub fn full_subset(&self) -> RelationSubset {
        RelationSubset::full(self.relation_count())
    }

    /// Subset holding exactly the given indices.
    pub fn subset<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<RelationSubset> {
        let mut s = self.empty_subset();
        for i in indices {
            self.check_index(i)?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn singleton_subset(&self, i: usize) -> Result<RelationSubset> {
        self.subset([i])
    }

    fn assert_universe(&self, t: &RelationSubset) {
        assert_eq!(
            t.universe(),
            self.relation_count(),
            "subset built for a different scheme"
        );
    }

    /// Complex product of non-empty subsets without the emptiness check.
    fn product_unchecked(&self, u: &RelationSubset, v: &RelationSubset) -> RelationSubset {
        self.assert_universe(u);
        self.assert_universe(v);
        let mut out = self.empty_subset();
        for a in u.iter() {
            for b in v.iter() {
                for i in 0..self.relation_count() {
                    if self.p(a, b, i) > 0 {
                        out.insert(i);
                    }
                }
            }
        }
        out
    }

    /// Complex multiplication: UV = { R_i : p_uv^i > 0 for some R_u in U,
    /// R_v in V }. Products of empty subsets are rejected.
    pub fn complex_product(
        &self,
        u: &RelationSubset,
        v: &RelationSubset,
    ) -> Result<RelationSubset> {
        if u.is_empty() || v.is_empty() {
            return Err(Error::EmptyOperand);
        }
        Ok(self.product_unchecked(u, v))
    }

    /// Elementwise involution T* = { R_{i*} : R_i in T }.
    pub fn star(&self, t: &RelationSubset) -> RelationSubset {
        self.assert_universe(t);
        let mut out = self.empty_subset();
        for i in t.iter() {
            out.insert(self.involution(i));
        }
        out
    }

    /// The smallest closed subset containing H.
    ///
    /// H is first augmented with H* and R_0 (both lie in any closed superset)
    /// and the result is then the fixpoint of repeated complex
    /// multiplication.
    pub fn closure(&self, h: &RelationSubset) -> Result<RelationSubset> {
        if h.is_empty() {
            return Err(Error::EmptyOperand);
        }
        self.assert_universe(h);
        let mut current = h.union(&self.star(h));
        current.insert(0);
        loop {
            let next = current.union(&self.product_unchecked(&current, &current));
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// Whether T*T is contained in T.
    pub fn is_closed(&self, t: &RelationSubset) -> Result<bool> {
        if t.is_empty() {
            return Err(Error::EmptyOperand);
        }
        let product = self.product_unchecked(&self.star(t), t);
        Ok(product.is_subset_of(t))
    }

    /// Whether R_{i*} T R_i is contained in T for every relation.
    /// The input must be closed.
    pub fn is_strongly_normal(&self, t: &RelationSubset) -> Result<bool> {
        if !self.is_closed(t)? {
            return Err(Error::NotClosed);
        }
        for i in 0..self.relation_count() {
            let star = self.singleton_subset(self.involution(i))?;
            let single = self.singleton_subset(i)?;
            let left = self.product_unchecked(&star, t);
            let conj = self.product_unchecked(&left, &single);
            if !conj.is_subset_of(t) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The thin radical: all relations of valency 1. Always closed.
    pub fn thin_radical(&self) -> RelationSubset {
        let mut out = self.empty_subset();
        for i in 0..self.relation_count() {
            if self.valency(i) == 1 {
                out.insert(i);
            }
        }
        out
    }

    /// The thin residue: the closure of the union of all products
    /// R_{i*} R_i, which is the smallest strongly normal closed subset.
    pub fn thin_residue(&self) -> RelationSubset {
        let mut gen = self.empty_subset();
        for i in 0..self.relation_count() {
            for k in 0..self.relation_count() {
                if self.p(self.involution(i), i, k) > 0 {
                    gen.insert(k);
                }
            }
        }
        self.closure(&gen).expect("generator set contains R_0")
    }

    /// The smallest singular subset, the complex product of the thin residue
    /// with the thin radical.
    pub fn min_singular(&self) -> RelationSubset {
        self.product_unchecked(&self.thin_residue(), &self.thin_radical())
    }

    /// Whether T is a singular subset: it contains the thin radical, and
    /// R_x R_{y*} R_y R_z stays inside T for every thin R_x, every R_y, and
    /// every R_z in T.
    pub fn is_singular(&self, t: &RelationSubset) -> bool {
        self.assert_universe(t);
        let radical = self.thin_radical();
        if !radical.is_subset_of(t) {
            return false;
        }
        for x in radical.iter() {
            for y in 0..self.relation_count() {
                let sx = self.singleton_subset(x).expect("in range");
                let sy_star = self.singleton_subset(self.involution(y)).expect("in range");
                let sy = self.singleton_subset(y).expect("in range");
                let head = self.product_unchecked(
                    &self.product_unchecked(&sx, &sy_star),
                    &sy,
                );
                for z in t.iter() {
                    let sz = self.singleton_subset(z).expect("in range");
                    if !self.product_unchecked(&head, &sz).is_subset_of(t) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All singular subsets, found by testing every superset of
    /// `min_singular()` and sorted by (cardinality, bit pattern).
    ///
    /// `max_free_bits` caps the exponent of the search; exceeding it is an
    /// error the caller may lift by passing a larger cap.
    pub fn enumerate_singular(&self, max_free_bits: usize) -> Result<Vec<RelationSubset>> {
        let base = self.min_singular();
        let free: Vec<usize> = (0..self.relation_count())
            .filter(|&i| !base.contains(i))
            .collect();
        if free.len() > max_free_bits {
            return Err(Error::TooLarge {
                needed: free.len(),
                cap: max_free_bits,
            });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut t = base.clone();
            for (bit, &idx) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    t.insert(idx);
                }
            }
            if self.is_singular(&t) {
                out.push(t);
            }
        }
        out.sort_by(|a, b| {
            a.cardinality()
                .cmp(&b.cardinality())
                .then_with(|| a.cmp_bits(b))
        });
        Ok(out)
    }

    /// S_{p'}: the relations whose valency is not divisible by p.
    pub fn p_prime_relations(&self, p: u64) -> Result<RelationSubset> {
        crate::modular::require_prime(p)?;
        let mut out = self.empty_subset();
        for i in 0..self.relation_count() {
            if !self.valency(i).is_multiple_of(p) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// Classifies the product A_a A_b of two valency-2 relations of a
    /// quasi-thin scheme into one of the five possible matrix shapes.
    pub fn classify_quasi_thin_product(&self, a: usize, b: usize) -> Result<QuasiThinCase> {
        self.check_index(a)?;
        self.check_index(b)?;
        if let Some(i) = (0..self.relation_count()).find(|&i| self.valency(i) > 2) {
            return Err(Error::NotQuasiThin {
                index: i,
                valency: self.valency(i),
            });
        }
        if self.valency(a) != 2 {
            return Err(Error::ValencyNotTwo {
                index: a,
                valency: self.valency(a),
            });
        }
        if self.valency(b) != 2 {
            return Err(Error::ValencyNotTwo {
                index: b,
                valency: self.valency(b),
            });
        }
        let entries: Vec<(usize, u64, u64)> = (0..self.relation_count())
            .filter_map(|k| {
                let c = self.p(a, b, k);
                (c > 0).then_some((k, c, self.valency(k)))
            })
            .collect();
        match_quasi_thin_case(&entries).ok_or(Error::NoCaseMatches { a, b })
    }

    /// All closed subsets, found breadth-first over closures of extended
    /// generator sets. Intended for small class counts; capped at d <= 16.
    pub fn enumerate_closed_subsets(&self) -> Result<Vec<RelationSubset>> {
        const CAP: usize = 16;
        if self.class_count() > CAP {
            return Err(Error::TooLarge {
                needed: self.class_count(),
                cap: CAP,
            });
        }
        let start = self
            .closure(&self.singleton_subset(0).expect("R_0 exists"))
            .expect("non-empty");
        let mut seen = std::collections::HashSet::new();
        let mut queue = std::collections::VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(t) = queue.pop_front() {
            for i in 0..self.relation_count() {
                if t.contains(i) {
                    continue;
                }
                let mut gen = t.clone();
                gen.insert(i);
                let next = self.closure(&gen).expect("non-empty");
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<RelationSubset> = seen.into_iter().collect();
        out.sort_by(|a, b| {
            a.cardinality()
                .cmp(&b.cardinality())
                .then_with(|| a.cmp_bits(b))
        });
        Ok(out)
    }
}
