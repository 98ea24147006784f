use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph_of_groups::IntMatrix;

/// Exact affine map `x ↦ A·x + b` of `ℚⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    n: usize,
    a: Vec<BigRational>,
    b: Vec<BigRational>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![BigRational::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = BigRational::one();
        }
        Self {
            n,
            a,
            b: vec![BigRational::zero(); n],
        }
    }

    pub fn linear(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        Self {
            n,
            a: rows.into_iter().flatten().collect(),
            b: vec![BigRational::zero(); n],
        }
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        Self::linear(m.to_rational())
    }

    pub fn translation(b: Vec<BigRational>) -> Self {
        let mut m = Self::identity(b.len());
        m.b = b;
        m
    }

    pub fn from_parts(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Self {
        let mut m = Self::linear(a);
        assert_eq!(m.n, b.len());
        m.b = b;
        m
    }

    /// `x ↦ s·x + c` on the line.
    pub fn scalar(s: (i64, i64), c: (i64, i64)) -> Self {
        Self::from_parts(
            vec![vec![BigRational::new(s.0.into(), s.1.into())]],
            vec![BigRational::new(c.0.into(), c.1.into())],
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix_entry(&self, i: usize, j: usize) -> &BigRational {
        &self.a[i * self.n + j]
    }

    pub fn offset(&self) -> &[BigRational] {
        &self.b
    }

    pub fn matrix_rows(&self) -> Vec<Vec<BigRational>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_translation(&self) -> bool {
        self.linear_part() == Self::identity(self.n)
    }

    pub fn linear_part(&self) -> AffineMap {
        Self {
            n: self.n,
            a: self.a.clone(),
            b: vec![BigRational::zero(); self.n],
        }
    }

    pub fn mat_vec(&self, x: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &self.a[i * self.n + j] * &x[j]).sum())
            .collect()
    }

    pub fn apply(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.mat_vec(x)
            .into_iter()
            .zip(&self.b)
            .map(|(y, c)| y + c)
            .collect()
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.a[i * self.n + j].to_f64().unwrap_or(f64::NAN) * x[j])
                    .sum::<f64>()
                    + self.b[i].to_f64().unwrap_or(f64::NAN)
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let n = self.n;
        let mut a = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = (0..n).map(|k| &self.a[i * n + k] * &other.a[k * n + j]).sum();
            }
        }
        let b = self.apply(&other.b);
        AffineMap { n, a, b }
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<AffineMap> {
        let n = self.n;
        let mut m: Vec<Vec<BigRational>> = self.matrix_rows();
        let mut inv: Vec<Vec<BigRational>> = Self::identity(n).matrix_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            inv.swap(col, piv);
            let p = m[col][col].clone();
            for j in 0..n {
                m[col][j] = &m[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in 0..n {
                        let (mc, ic) = (m[col][j].clone(), inv[col][j].clone());
                        m[r][j] -= &f * mc;
                        inv[r][j] -= &f * ic;
                    }
                }
            }
        }
        let lin = AffineMap::linear(inv);
        let b = lin.mat_vec(&self.b).into_iter().map(|x| -x).collect();
        Some(AffineMap { b, ..lin })
    }

    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut m = self.matrix_rows();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            det *= &m[col][col];
            for r in col + 1..n {
                let f = &m[r][col] / &m[col][col];
                for j in col..n {
                    let v = &f * &m[col][j];
                    m[r][j] -= v;
                }
            }
        }
        det
    }

    /// Largest absolute row sum of the linear part, an operator-norm bound.
    pub fn row_sum_norm(&self) -> BigRational {
        self.a
            .chunks(self.n)
            .map(|r| r.iter().map(|x| x.abs()).sum::<BigRational>())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn linear_f64(&self) -> Vec<Vec<f64>> {
        self.a
            .chunks(self.n)
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ [")?;
        for (i, row) in self.a.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        let off: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "]x + ({})", off.join(", "))
    }
}

pub(crate) fn int_vec_to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn compose_and_invert() {
        let t = AffineMap::scalar((2, 1), (0, 1));
        let a = AffineMap::scalar((1, 1), (1, 1));
        let conj = t.compose(&a).compose(&t.inverse().unwrap());
        assert_eq!(conj, AffineMap::scalar((1, 1), (2, 1)));
        let m = AffineMap::from_parts(
            vec![vec![rat(0), rat(-2)], vec![rat(2), rat(1)]],
            vec![rat(3), BigRational::new(1.into(), 2.into())],
        );
        assert!(m.compose(&m.inverse().unwrap()).is_identity());
        assert_eq!(m.det(), rat(4));
    }
}
