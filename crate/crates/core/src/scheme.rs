//! Scheme data model and axiom validation.
//!
//! An association scheme of class `d` on a point set `X` is a partition of
//! `X × X` into relations `R_0, ..., R_d` such that `R_0` is the diagonal,
//! the transpose of every relation is a relation, and the number of points
//! `z` with `(x, z) ∈ R_i` and `(z, y) ∈ R_j` depends only on the relation
//! containing `(x, y)`. Those counts are the intersection numbers `p_ij^k`,
//! and they determine everything this crate computes: once a
//! [`RelationMatrix`] has been condensed into an [`IntersectionTensor`] and
//! validated into a [`Scheme`], the point set never needs to be touched
//! again.

use crate::error::{AxiomIdentity, Error, Result};

/// How thoroughly `tensor_from_relation_matrix` verifies that triple counts
/// are constant across the representative pairs of each relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Check up to three representative pairs per relation.
    Spot,
    /// Check every pair of the relation.
    Strict,
}

/// The structure constants p_ij^k of a scheme of class `d`, together with
/// the order |X|. Construction only checks the shape; use
/// [`validate_tensor`] to verify the scheme axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTensor {
    d: usize,
    order: u64,
    p: Vec<u64>,
}

impl IntersectionTensor {
    /// Builds a tensor from a flat array laid out as `p[i][j][k]` with `k`
    /// fastest-varying.
    pub fn new(order: u64, d: usize, flat: Vec<u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::TensorShape("order must be positive".into()));
        }
        let m = d + 1;
        let want = m
            .checked_mul(m)
            .and_then(|v| v.checked_mul(m))
            .ok_or(Error::Overflow("tensor size"))?;
        if flat.len() != want {
            return Err(Error::TensorShape(format!(
                "expected {want} entries for class count {d}, got {}",
                flat.len()
            )));
        }
        Ok(IntersectionTensor { d, order, p: flat })
    }

    /// Builds a tensor from a nested `(d+1) x (d+1) x (d+1)` array.
    pub fn from_nested(order: u64, p: &[Vec<Vec<u64>>]) -> Result<Self> {
        let m = p.len();
        if m == 0 {
            return Err(Error::TensorShape("empty p array".into()));
        }
        let d = m - 1;
        let mut flat = Vec::with_capacity(m * m * m);
        for (i, plane) in p.iter().enumerate() {
            if plane.len() != m {
                return Err(Error::TensorShape(format!(
                    "p[{i}] has {} rows, expected {m}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != m {
                    return Err(Error::TensorShape(format!(
                        "p[{i}][{j}] has {} entries, expected {m}",
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        IntersectionTensor::new(order, d, flat)
    }

    pub fn class_count(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The intersection number p_ij^k.
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let m = self.d + 1;
        self.p[(i * m + j) * m + k]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, value: u64) {
        let m = self.d + 1;
        self.p[(i * m + j) * m + k] = value;
    }

    /// Nested copy of the entries, `p[i][j][k]`.
    pub fn to_nested(&self) -> Vec<Vec<Vec<u64>>> {
        let m = self.d + 1;
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|k| self.get(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }
}

/// A partition of `X × X` encoded as an `n × n` array of relation indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    n: usize,
    d: usize,
    cells: Vec<u32>,
}

impl RelationMatrix {
    /// Checks the partition invariants: the diagonal carries relation 0 and
    /// nothing else does, and every index `0..=d` occurs.
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedMatrix("matrix has no rows".into()));
        }
        if cells.len() != n * n {
            return Err(Error::MalformedMatrix(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        let d = *cells.iter().max().expect("nonempty") as usize;
        for x in 0..n {
            for y in 0..n {
                let v = cells[x * n + y];
                if x == y && v != 0 {
                    return Err(Error::MalformedMatrix(format!(
                        "diagonal cell ({x}, {x}) holds relation {v}, expected 0"
                    )));
                }
                if x != y && v == 0 {
                    return Err(Error::MalformedMatrix(format!(
                        "relation 0 appears off the diagonal at ({x}, {y})"
                    )));
                }
            }
        }
        let mut seen = vec![false; d + 1];
        for &v in &cells {
            seen[v as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedMatrix(format!(
                "relation index {missing} never occurs (max index is {d})"
            )));
        }
        Ok(RelationMatrix { n, d, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest relation index, i.e. the class count of the scheme.
    pub fn class_count(&self) -> usize {
        self.d
    }

    pub fn cell(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }
}

/// Condenses a relation matrix into its intersection tensor.
///
/// For every relation `R_k` a representative pair `(x, y)` is picked and the
/// counts `|{z : (x, z) ∈ R_i, (z, y) ∈ R_j}|` are tabulated in one sweep
/// over `z`. The counts are then re-verified on further representatives of
/// `R_k`: three of them in [`CheckMode::Spot`], all of them in
/// [`CheckMode::Strict`]. Any discrepancy means the input partition is not a
/// scheme.
pub fn tensor_from_relation_matrix(
    m: &RelationMatrix,
    mode: CheckMode,
) -> Result<IntersectionTensor> {
    let n = m.n();
    let d = m.class_count();
    let width = d + 1;

    let mut reps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); width];
    for x in 0..n {
        for y in 0..n {
            reps[m.cell(x, y)].push((x, y));
        }
    }

    let count_table = |x: usize, y: usize| -> Vec<u64> {
        let mut t = vec![0u64; width * width];
        for z in 0..n {
            t[m.cell(x, z) * width + m.cell(z, y)] += 1;
        }
        t
    };

    let mut tensor = IntersectionTensor::new(n as u64, d, vec![0; width * width * width])?;
    for (k, pairs) in reps.iter().enumerate() {
        let (x0, y0) = pairs[0];
        let table = count_table(x0, y0);
        let to_check = match mode {
            CheckMode::Spot => pairs.len().min(3),
            CheckMode::Strict => pairs.len(),
        };
        for &(x, y) in &pairs[1..to_check] {
            let other = count_table(x, y);
            if other != table {
                let (i, j) = (0..width * width)
                    .find(|idx| table[*idx] != other[*idx])
                    .map(|idx| (idx / width, idx % width))
                    .expect("tables differ");
                return Err(Error::NotAScheme(format!(
                    "triple count for (i={i}, j={j}) differs across relation {k}: \
                     {} at ({x0}, {y0}) vs {} at ({x}, {y})",
                    table[i * width + j],
                    other[i * width + j]
                )));
            }
        }
        for i in 0..width {
            for j in 0..width {
                tensor.set(i, j, k, table[i * width + j]);
            }
        }
    }
    Ok(tensor)
}

/// A validated association scheme: the tensor plus the derived valencies
/// `k_i` and the involution `i ↦ i*`. Immutable after construction and safe
/// to share across threads.
#[derive(Debug, Clone)]
pub struct Scheme {
    tensor: IntersectionTensor,
    valency: Vec<u64>,
    involution: Vec<usize>,
}

fn violation(identity: AxiomIdentity, indices: &[usize], lhs: u64, rhs: u64) -> Error {
    Error::AxiomViolation {
        identity,
        indices: indices.to_vec(),
        lhs,
        rhs,
    }
}

/// Verifies the defining identities of the intersection numbers and returns
/// the scheme on success.
///
/// The checks, in order: the delta identities for relation 0; existence and
/// uniqueness of the involution (with `k_i = k_{i*}` and `i** = i`); the
/// valency sum `Σ k_i = |X|`; the row sums `Σ_u p_iu^j = k_i`; the product
/// rule `k_i k_j = Σ_u p_ij^u k_u`; and the triple symmetry
/// `k_l p_ij^l = k_i p_{l j*}^i = k_j p_{i* l}^j`. Failures carry the
/// identity, the indices and both sides of the equation. All arithmetic is
/// checked; overflow is an error, never wraparound.
pub fn validate_tensor(tensor: IntersectionTensor) -> Result<Scheme> {
    let d = tensor.class_count();
    let width = d + 1;

    for j in 0..width {
        for k in 0..width {
            let delta = u64::from(j == k);
            let got = tensor.get(0, j, k);
            if got != delta {
                return Err(violation(AxiomIdentity::Delta, &[0, j, k], got, delta));
            }
            let got = tensor.get(j, 0, k);
            if got != delta {
                return Err(violation(AxiomIdentity::Delta, &[j, 0, k], got, delta));
            }
        }
    }

    let mut involution = vec![0usize; width];
    let mut valency = vec![0u64; width];
    for i in 0..width {
        let hits: Vec<usize> = (0..width).filter(|&j| tensor.get(i, j, 0) > 0).collect();
        if hits.len() != 1 {
            return Err(violation(
                AxiomIdentity::Involution,
                &[i],
                hits.len() as u64,
                1,
            ));
        }
        involution[i] = hits[0];
        valency[i] = tensor.get(i, hits[0], 0);
    }
    for (i, &star) in involution.iter().enumerate() {
        if involution[star] != i {
            return Err(violation(
                AxiomIdentity::Involution,
                &[i, star, involution[star]],
                involution[star] as u64,
                i as u64,
            ));
        }
        if valency[star] != valency[i] {
            return Err(violation(
                AxiomIdentity::InvolutionValency,
                &[i, star],
                valency[i],
                valency[star],
            ));
        }
    }

    let mut sum = 0u64;
    for &k in &valency {
        sum = sum
            .checked_add(k)
            .ok_or(Error::Overflow("valency sum"))?;
    }
    if sum != tensor.order() {
        return Err(violation(AxiomIdentity::ValencySum, &[], sum, tensor.order()));
    }

    for (i, &ki) in valency.iter().enumerate() {
        for j in 0..width {
            let mut row = 0u64;
            for u in 0..width {
                row = row
                    .checked_add(tensor.get(i, u, j))
                    .ok_or(Error::Overflow("row sum"))?;
            }
            if row != ki {
                return Err(violation(AxiomIdentity::RowSum, &[i, j], row, ki));
            }
        }
    }

    for i in 0..width {
        for j in 0..width {
            let lhs = valency[i]
                .checked_mul(valency[j])
                .ok_or(Error::Overflow("valency product"))?;
            let mut rhs = 0u64;
            for (u, &ku) in valency.iter().enumerate() {
                let term = tensor
                    .get(i, j, u)
                    .checked_mul(ku)
                    .ok_or(Error::Overflow("valency product sum"))?;
                rhs = rhs
                    .checked_add(term)
                    .ok_or(Error::Overflow("valency product sum"))?;
            }
            if lhs != rhs {
                return Err(violation(AxiomIdentity::ProductValency, &[i, j], lhs, rhs));
            }
        }
    }

    for i in 0..width {
        for j in 0..width {
            for l in 0..width {
                let a = valency[l]
                    .checked_mul(tensor.get(i, j, l))
                    .ok_or(Error::Overflow("triple symmetry"))?;
                let b = valency[i]
                    .checked_mul(tensor.get(l, involution[j], i))
                    .ok_or(Error::Overflow("triple symmetry"))?;
                if a != b {
                    return Err(violation(AxiomIdentity::TripleSymmetry, &[i, j, l], a, b));
                }
                let c = valency[j]
                    .checked_mul(tensor.get(involution[i], l, j))
                    .ok_or(Error::Overflow("triple symmetry"))?;
                if a != c {
                    return Err(violation(AxiomIdentity::TripleSymmetry, &[i, j, l], a, c));
                }
            }
        }
    }

    Ok(Scheme {
        tensor,
        valency,
        involution,
    })
}

impl Scheme {
    /// Class count `d`; the relations are indexed `0..=d`.
    pub fn class_count(&self) -> usize {
        self.tensor.class_count()
    }

    /// Number of relations, `d + 1`.
    pub fn relation_count(&self) -> usize {
        self.tensor.class_count() + 1
    }

    /// The order |X| of the underlying point set.
    pub fn order(&self) -> u64 {
        self.tensor.order()
    }

    /// The intersection number p_ij^k.
    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        self.tensor.get(i, j, k)
    }

    /// The valency k_i.
    pub fn valency(&self, i: usize) -> u64 {
        self.valency[i]
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valency
    }

    /// The index i* with R_{i*} the transpose of R_i.
    pub fn involution(&self, i: usize) -> usize {
        self.involution[i]
    }

    pub fn tensor(&self) -> &IntersectionTensor {
        &self.tensor
    }

    pub fn max_valency(&self) -> u64 {
        *self.valency.iter().max().expect("at least one relation")
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.relation_count() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.relation_count(),
            });
        }
        Ok(())
    }
}

/// Parses and validates a relation matrix in one step.
pub fn scheme_from_relation_matrix(m: &RelationMatrix, mode: CheckMode) -> Result<Scheme> {
    validate_tensor(tensor_from_relation_matrix(m, mode)?)
}
