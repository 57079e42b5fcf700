//! The modular adjacency algebra in its adjacency basis.
//!
//! Over a field of characteristic p the adjacency matrices A_0, ..., A_d
//! span an algebra whose multiplication is given entirely by the
//! intersection numbers: A_i A_j = sum_k p_ij^k A_k. The regular module is
//! therefore represented here in dimension d+1 — left multiplication by
//! A_i is the (d+1) x (d+1) matrix with entry (k, j) = p_ij^k mod p — and
//! the point set never has to be materialised.
//!
//! The central computation is [`Scheme::fixed_space`]: the space of vectors
//! v with A_i v = k_i v for every i. A line spanned by such a vector is a
//! trivial submodule of the regular module, and the scheme is p-transitive
//! exactly when that space is one-dimensional (spanned by the all-ones
//! vector).
//!
//! Everything is exact arithmetic over GF(p) for machine-word primes p; no
//! extension fields. The defining linear system has GF(p) coefficients, so
//! its solution dimension is unchanged under field extension.

use crate::error::{Error, Result};
use crate::scheme::Scheme;
use crate::structure::RelationSubset;

/// Deterministic Miller-Rabin primality test, valid for all u64 inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Arithmetic context for GF(p).
#[derive(Debug, Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        pow_mod(a, self.p - 2, self.p)
    }
}

/// A vector over GF(p) in the adjacency basis: coordinate i is the
/// coefficient of A_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpVector {
    prime: u64,
    coords: Vec<u64>,
}

impl FpVector {
    /// Builds a vector, reducing every coordinate modulo p.
    pub fn new(prime: u64, coords: Vec<u64>) -> Result<Self> {
        require_prime(prime)?;
        let coords = coords.into_iter().map(|c| c % prime).collect();
        Ok(FpVector { prime, coords })
    }

    pub fn zero(prime: u64, len: usize) -> Result<Self> {
        FpVector::new(prime, vec![0; len])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, i: usize) -> u64 {
        self.coords[i]
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The set of relations whose coordinate is nonzero.
    pub fn support(&self) -> RelationSubset {
        let mut out = RelationSubset::empty(self.len());
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                out.insert(i);
            }
        }
        out
    }

    /// self + scale * other.
    pub fn add_scaled(&self, other: &FpVector, scale: u64) -> FpVector {
        assert_eq!(self.prime, other.prime, "modulus mismatch");
        assert_eq!(self.len(), other.len(), "length mismatch");
        let f = Fp { p: self.prime };
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f.add(a, f.mul(scale % self.prime, b)))
            .collect();
        FpVector {
            prime: self.prime,
            coords,
        }
    }

    pub fn scale(&self, s: u64) -> FpVector {
        let f = Fp { p: self.prime };
        FpVector {
            prime: self.prime,
            coords: self.coords.iter().map(|&c| f.mul(c, s % self.prime)).collect(),
        }
    }
}

impl std::fmt::Display for FpVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A square matrix over GF(p) acting on adjacency-basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    prime: u64,
    n: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(prime: u64, n: usize) -> Result<Self> {
        require_prime(prime)?;
        Ok(FpMatrix {
            prime,
            n,
            entries: vec![0; n * n],
        })
    }

    pub fn identity(prime: u64, n: usize) -> Result<Self> {
        let mut m = FpMatrix::zero(prime, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1 % prime;
        }
        Ok(m)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, v: u64) {
        self.entries[row * self.n + col] = v;
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.prime, other.prime, "modulus mismatch");
        assert_eq!(self.n, other.n, "size mismatch");
        let f = Fp { p: self.prime };
        let mut out = FpMatrix {
            prime: self.prime,
            n: self.n,
            entries: vec![0; self.n * self.n],
        };
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.entry(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..self.n {
                    let cur = out.entry(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.entry(k, j))));
                }
            }
        }
        out
    }

    pub fn mul_vector(&self, v: &FpVector) -> FpVector {
        assert_eq!(self.prime, v.prime(), "modulus mismatch");
        assert_eq!(self.n, v.len(), "size mismatch");
        let f = Fp { p: self.prime };
        let coords = (0..self.n)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.n {
                    acc = f.add(acc, f.mul(self.entry(i, j), v.coord(j)));
                }
                acc
            })
            .collect();
        FpVector {
            prime: self.prime,
            coords,
        }
    }

    /// self + scale * other.
    pub fn add_scaled(&self, other: &FpMatrix, scale: u64) -> FpMatrix {
        assert_eq!(self.prime, other.prime, "modulus mismatch");
        assert_eq!(self.n, other.n, "size mismatch");
        let f = Fp { p: self.prime };
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, f.mul(scale % self.prime, b)))
            .collect();
        FpMatrix {
            prime: self.prime,
            n: self.n,
            entries,
        }
    }
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns. Pivoting picks the first row with a nonzero entry in the current
/// column, so the output is deterministic. Zero rows are removed.
fn row_reduce(rows: &mut Vec<Vec<u64>>, width: usize, p: u64) -> Vec<usize> {
    let f = Fp { p };
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = f.inv(rows[rank][col]);
        for entry in rows[rank][col..width].iter_mut() {
            *entry = f.mul(*entry, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if r != rank && factor != 0 {
                for (c, &pv) in pivot.iter().enumerate().skip(col) {
                    row[c] = f.sub(row[c], f.mul(factor, pv));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Dimension of the span of the given vectors. All vectors must share one
/// prime and one length.
pub fn span_dimension(vectors: &[FpVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let width = first.len();
    let p = first.prime();
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| {
            assert_eq!(v.prime(), p, "modulus mismatch");
            assert_eq!(v.len(), width, "length mismatch");
            v.coords().to_vec()
        })
        .collect();
    row_reduce(&mut rows, width, p).len()
}

/// The space of vectors on which every A_i acts as the scalar k_i, as a
/// reduced-echelon basis over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSpace {
    prime: u64,
    basis: Vec<FpVector>,
}

impl FixedSpace {
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors in reduced echelon form, ordered by leading index.
    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    /// Whether `v` lies in the span of the basis.
    pub fn contains(&self, v: &FpVector) -> bool {
        if v.prime() != self.prime {
            return false;
        }
        if self.basis.is_empty() {
            return v.is_zero();
        }
        if v.len() != self.basis[0].len() {
            return false;
        }
        let f = Fp { p: self.prime };
        let mut w = v.coords().to_vec();
        for b in &self.basis {
            let lead = b
                .coords()
                .iter()
                .position(|&c| c != 0)
                .expect("basis vectors are nonzero");
            let factor = w[lead];
            if factor != 0 {
                for (wc, &bc) in w.iter_mut().zip(b.coords()) {
                    *wc = f.sub(*wc, f.mul(factor, bc));
                }
            }
        }
        w.iter().all(|&c| c == 0)
    }
}

impl Scheme {
    /// Left-multiplication matrix of A_i in the adjacency basis: entry
    /// (k, j) is p_ij^k mod p.
    pub fn regular_rep_matrix(&self, i: usize, p: u64) -> Result<FpMatrix> {
        self.check_index(i)?;
        let width = self.relation_count();
        let mut m = FpMatrix::zero(p, width)?;
        for k in 0..width {
            for j in 0..width {
                m.set(k, j, self.p(i, j, k) % p);
            }
        }
        Ok(m)
    }

    /// Left multiplication of `v` by A_i, computed straight from the
    /// intersection numbers.
    pub fn act(&self, i: usize, v: &FpVector) -> Result<FpVector> {
        self.check_index(i)?;
        if v.len() != self.relation_count() {
            return Err(Error::DimensionMismatch {
                got: v.len(),
                want: self.relation_count(),
            });
        }
        let f = Fp { p: v.prime() };
        let coords = (0..self.relation_count())
            .map(|k| {
                let mut acc = 0;
                for j in 0..self.relation_count() {
                    acc = f.add(acc, f.mul(self.p(i, j, k) % v.prime(), v.coord(j)));
                }
                acc
            })
            .collect();
        Ok(FpVector {
            prime: v.prime(),
            coords,
        })
    }

    /// The all-ones vector, i.e. the coordinates of the all-ones matrix in
    /// the adjacency basis.
    pub fn all_ones_vector(&self, p: u64) -> Result<FpVector> {
        FpVector::new(p, vec![1; self.relation_count()])
    }

    /// 0/1 vector of a non-empty subset of relations.
    pub fn indicator_vector(&self, t: &RelationSubset, p: u64) -> Result<FpVector> {
        if t.is_empty() {
            return Err(Error::EmptyOperand);
        }
        let coords = (0..self.relation_count())
            .map(|i| u64::from(t.contains(i)))
            .collect();
        FpVector::new(p, coords)
    }

    /// Solves the stacked system (M_i - k_i I) v = 0 for all i over GF(p)
    /// and returns the solution space with a deterministic reduced-echelon
    /// basis. The dimension is at least 1: the all-ones vector is always a
    /// solution.
    pub fn fixed_space(&self, p: u64) -> Result<FixedSpace> {
        require_prime(p)?;
        let width = self.relation_count();
        let f = Fp { p };
        let mut rows = Vec::with_capacity(width * width);
        for i in 0..width {
            let ki = self.valency(i) % p;
            for k in 0..width {
                let mut row = Vec::with_capacity(width);
                for j in 0..width {
                    let mut entry = self.p(i, j, k) % p;
                    if k == j {
                        entry = f.sub(entry, ki);
                    }
                    row.push(entry);
                }
                rows.push(row);
            }
        }
        let pivots = row_reduce(&mut rows, width, p);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..width).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis_rows: Vec<Vec<u64>> = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; width];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.sub(0, rows[r][fc]);
            }
            basis_rows.push(v);
        }
        row_reduce(&mut basis_rows, width, p);
        let basis = basis_rows
            .into_iter()
            .map(|coords| FpVector { prime: p, coords })
            .collect();
        Ok(FixedSpace { prime: p, basis })
    }

    /// Whether the regular module has a unique trivial submodule, i.e. the
    /// fixed space is exactly the line through the all-ones vector.
    pub fn is_p_transitive_oracle(&self, p: u64) -> Result<bool> {
        Ok(self.fixed_space(p)?.dim() == 1)
    }
}
