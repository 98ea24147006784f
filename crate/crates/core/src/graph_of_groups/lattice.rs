//! Integer matrices and coset arithmetic for sublattices `M·ℤⁿ ⊆ ℤⁿ`.
//!
//! Every edge monomorphism `ℤⁿ → ℤⁿ` is an integer matrix of nonzero
//! determinant. Reducing a vector modulo the image lattice is done against a
//! lower-triangular column Hermite basis `H = M·U` (`U` unimodular), which
//! gives one canonical residue per coset, namely the unique representative in
//! the box `∏ [0, H_ii)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::GroupError;

/// Integer vector, an element of `ℤⁿ`.
pub type ZVec = Vec<BigInt>;

pub fn zero_vec(n: usize) -> ZVec {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize, sign: i64) -> ZVec {
    let mut v = zero_vec(n);
    v[i] = BigInt::from(sign);
    v
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[BigInt], b: &[BigInt]) -> ZVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg_vec(a: &[BigInt]) -> ZVec {
    a.iter().map(|x| -x).collect()
}

/// Square integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidInput(format!(
                "matrix must be square and nonempty, got {rows:?}"
            )));
        }
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { n, entries }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::identity(n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = BigInt::from(d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> ZVec {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> ZVec {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                *out.get_mut(i, j) = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect()
    }

    pub fn rows_i64(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_i64().unwrap_or(i64::MAX))
                    .collect()
            })
            .collect()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = GroupError;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows_i64()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// The image lattice `M·ℤⁿ` of a nonsingular integer matrix, with the data
/// needed to reduce vectors to canonical coset representatives.
#[derive(Clone, Debug)]
pub struct Lattice {
    matrix: IntMatrix,
    /// Lower-triangular basis with positive diagonal, `hermite = matrix · unimodular`.
    hermite: IntMatrix,
    unimodular: IntMatrix,
    index: BigInt,
}

impl Lattice {
    pub fn new(matrix: IntMatrix) -> Result<Self, GroupError> {
        let det = matrix.det();
        if det.is_zero() {
            return Err(GroupError::SingularMonomorphism(matrix.to_string()));
        }
        let (hermite, unimodular) = column_hermite(&matrix);
        Ok(Self {
            matrix,
            hermite,
            unimodular,
            index: det.abs(),
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn hermite(&self) -> &IntMatrix {
        &self.hermite
    }

    /// `|det M|`, the number of cosets of `M·ℤⁿ` in `ℤⁿ`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Splits `z = M·q + r` with `r` the canonical residue of `z + M·ℤⁿ`.
    pub fn residue(&self, z: &[BigInt]) -> (ZVec, ZVec) {
        let n = self.matrix.dim();
        let mut r: ZVec = z.to_vec();
        let mut c = zero_vec(n);
        for i in 0..n {
            let d = self.hermite.get(i, i);
            let k = r[i].div_floor(d);
            if !k.is_zero() {
                for row in i..n {
                    r[row] -= &k * self.hermite.get(row, i);
                }
            }
            c[i] = k;
        }
        let q = self.unimodular.mul_vec(&c);
        (r, q)
    }

    pub fn contains(&self, z: &[BigInt]) -> bool {
        is_zero_vec(&self.residue(z).0)
    }

    /// Diagonal of the Hermite basis; residues live in `∏ [0, d_i)`.
    pub fn box_sides(&self) -> Vec<BigInt> {
        (0..self.matrix.dim())
            .map(|i| self.hermite.get(i, i).clone())
            .collect()
    }

    /// All canonical residues in mixed-radix order (first coordinate fastest).
    pub fn transversal(&self) -> Vec<ZVec> {
        let sides = self.box_sides();
        let n = sides.len();
        let mut out = Vec::new();
        let mut cur = zero_vec(n);
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < sides[i] {
                    break;
                }
                cur[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    /// Position of a canonical residue in [`Lattice::transversal`] order.
    pub fn transversal_index(&self, residue: &[BigInt]) -> usize {
        use num_traits::ToPrimitive;
        let sides = self.box_sides();
        let mut idx = BigInt::zero();
        let mut radix = BigInt::one();
        for (r, s) in residue.iter().zip(&sides) {
            idx += r * &radix;
            radix *= s;
        }
        idx.to_usize().expect("transversal index fits in usize")
    }
}

/// Column operations bringing `m` to lower-triangular form with positive
/// diagonal and off-diagonal row entries reduced into `[0, pivot)`.
/// Returns `(H, U)` with `H = m·U`.
fn column_hermite(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(n);

    let col_axpy = |mat: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        for r in 0..n {
            let v = mat.get(r, src) * k;
            *mat.get_mut(r, dst) -= v;
        }
    };
    let col_swap = |mat: &mut IntMatrix, a: usize, b: usize| {
        if a != b {
            for r in 0..n {
                mat.entries.swap(r * n + a, r * n + b);
            }
        }
    };
    let col_neg = |mat: &mut IntMatrix, a: usize| {
        for r in 0..n {
            let v = -mat.get(r, a).clone();
            *mat.get_mut(r, a) = v;
        }
    };

    for i in 0..n {
        loop {
            let pivot = (i..n)
                .filter(|&j| !h.get(i, j).is_zero())
                .min_by(|&a, &b| h.get(i, a).abs().cmp(&h.get(i, b).abs()));
            let Some(p) = pivot else { break };
            col_swap(&mut h, i, p);
            col_swap(&mut u, i, p);
            let mut done = true;
            for j in i + 1..n {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let k = h.get(i, j).div_floor(h.get(i, i));
                col_axpy(&mut h, j, i, &k);
                col_axpy(&mut u, j, i, &k);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(i, i).is_negative() {
            col_neg(&mut h, i);
            col_neg(&mut u, i);
        }
        for j in 0..i {
            let k = h.get(i, j).div_floor(h.get(i, i));
            if !k.is_zero() {
                col_axpy(&mut h, j, i, &k);
                col_axpy(&mut u, j, i, &k);
            }
        }
    }
    (h, u)
}
