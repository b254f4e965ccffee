//! Small square matrices over the rationals.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::error::{FrameError, Result};
use crate::rational::{fmt_q, to_f64, Q};

/// Row-major d×d rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMatrix {
    d: usize,
    a: Vec<Q>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(FrameError::Empty("matrix has no rows".into()));
        }
        let mut a = Vec::with_capacity(d * d);
        for r in rows {
            if r.len() != d {
                return Err(FrameError::DimensionMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
            a.extend(r);
        }
        Ok(RatMatrix { d, a })
    }

    pub fn identity(d: usize) -> Self {
        Self::scalar(d, Q::one())
    }

    pub fn scalar(d: usize, s: Q) -> Self {
        Self::diag(vec![s; d])
    }

    pub fn diag(entries: Vec<Q>) -> Self {
        let d = entries.len();
        let mut a = vec![Q::zero(); d * d];
        for (i, e) in entries.into_iter().enumerate() {
            a[i * d + i] = e;
        }
        RatMatrix { d, a }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.a.chunks(self.d).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let mut a = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                a.push(self.get(i, j).clone());
            }
        }
        RatMatrix { d, a }
    }

    pub fn mul(&self, o: &RatMatrix) -> Self {
        let d = self.d;
        let mut a = vec![Q::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..d {
                    a[i * d + j] += x * o.get(k, j);
                }
            }
        }
        RatMatrix { d, a }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(Q::zero(), |s, x| s + x)
            })
            .collect()
    }

    pub fn scale(&self, k: &Q) -> Self {
        RatMatrix {
            d: self.d,
            a: self.a.iter().map(|x| x * k).collect(),
        }
    }

    /// Exact determinant by Gaussian elimination over Q.
    pub fn det(&self) -> Q {
        let d = self.d;
        let mut m = self.a.clone();
        let mut det = Q::one();
        for c in 0..d {
            let Some(p) = (c..d).find(|&r| !m[r * d + c].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..d {
                    m.swap(p * d + j, c * d + j);
                }
                det = -det;
            }
            let piv = m[c * d + c].clone();
            det *= &piv;
            for r in c + 1..d {
                let f = &m[r * d + c] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..d {
                    let t = &f * &m[c * d + j];
                    m[r * d + j] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.d;
        let mut m = self.a.clone();
        let mut inv = RatMatrix::identity(d).a;
        for c in 0..d {
            let p = (c..d)
                .find(|&r| !m[r * d + c].is_zero())
                .ok_or(FrameError::Singular)?;
            if p != c {
                for j in 0..d {
                    m.swap(p * d + j, c * d + j);
                    inv.swap(p * d + j, c * d + j);
                }
            }
            let piv = m[c * d + c].clone();
            for j in 0..d {
                m[c * d + j] /= &piv;
                inv[c * d + j] /= &piv;
            }
            for r in 0..d {
                if r == c || m[r * d + c].is_zero() {
                    continue;
                }
                let f = m[r * d + c].clone();
                for j in 0..d {
                    let t = &f * &m[c * d + j];
                    m[r * d + j] -= t;
                    let t = &f * &inv[c * d + j];
                    inv[r * d + j] -= t;
                }
            }
        }
        Ok(RatMatrix { d, a: inv })
    }

    /// C' = (C*)⁻¹.
    pub fn dual(&self) -> Result<Self> {
        self.transpose().inverse()
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = RatMatrix::identity(self.d);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(out)
    }

    pub fn is_integer(&self) -> bool {
        self.a.iter().all(|x| x.is_integer())
    }

    pub fn is_identity(&self) -> bool {
        *self == RatMatrix::identity(self.d)
    }

    /// Exact ∞-norm (max absolute row sum).
    pub fn inf_norm(&self) -> Q {
        self.a
            .chunks(self.d)
            .map(|r| r.iter().fold(Q::zero(), |s, x| s + x.abs()))
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.d, self.d, |i, j| to_f64(self.get(i, j)))
    }

    pub fn eigen_moduli(&self) -> Vec<f64> {
        self.to_f64()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect()
    }

    pub fn is_expansive(&self) -> bool {
        self.eigen_moduli().iter().all(|&m| m > 1.0 + 1e-12)
    }

    pub fn is_scalar_1d(&self) -> Option<&Q> {
        (self.d == 1).then(|| &self.a[0])
    }

    pub fn abs_det(&self) -> Q {
        self.det().abs()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(fmt_q).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// The affine map ξ ↦ Mξ + b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub m: RatMatrix,
    pub b: Vec<Q>,
}

impl AffineMap {
    pub fn linear(m: RatMatrix) -> Self {
        let d = m.dim();
        AffineMap {
            m,
            b: vec![Q::zero(); d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear(RatMatrix::identity(d))
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.m
            .mul_vec(x)
            .into_iter()
            .zip(&self.b)
            .map(|(v, s)| v + s)
            .collect()
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        let d = self.m.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| to_f64(self.m.get(i, j)) * x[j])
                    .sum::<f64>()
                    + to_f64(&self.b[i])
            })
            .collect()
    }

    /// self ∘ inner: ξ ↦ M(M'ξ + b') + b.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            m: self.m.mul(&inner.m),
            b: self
                .m
                .mul_vec(&inner.b)
                .into_iter()
                .zip(&self.b)
                .map(|(v, s)| v + s)
                .collect(),
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self.m.inverse()?;
        let b = inv.mul_vec(&self.b).into_iter().map(|v| -v).collect();
        Ok(AffineMap { m: inv, b })
    }
}

/// Upper bounds for ‖M^{-j}‖_∞ that are valid for every j ≥ 0.
///
/// Exact powers P_r = M^{-r} are computed until some P_J has norm below one;
/// then ‖P_j‖ ≤ ‖P_J‖^{⌊j/J⌋} · max_{r<J} ‖P_r‖ by submultiplicativity.
#[derive(Clone, Debug)]
pub struct ContractionBound {
    period: usize,
    rate: f64,
    head: f64,
}

impl ContractionBound {
    pub fn new(m: &RatMatrix) -> Result<Self> {
        if !m.is_expansive() {
            return Err(FrameError::NotExpansive);
        }
        let inv = m.inverse()?;
        let mut p = RatMatrix::identity(m.dim());
        let mut head: f64 = 1.0;
        for r in 1..=512usize {
            p = p.mul(&inv);
            let n = to_f64(&p.inf_norm());
            if n < 1.0 {
                return Ok(ContractionBound {
                    period: r,
                    rate: n,
                    head,
                });
            }
            head = head.max(n);
        }
        Err(FrameError::NotExpansive)
    }

    /// Bound on ‖M^{-j}‖_∞.
    pub fn bound(&self, j: usize) -> f64 {
        self.rate.powi((j / self.period) as i32) * self.head
    }

    /// Smallest j0 such that bound(j) < eps for all j ≥ j0.
    pub fn horizon(&self, eps: f64) -> usize {
        let mut j = 0;
        while self.bound(j) >= eps {
            j += self.period;
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dual_of_shear() {
        let c = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(c.dual().unwrap(), m(&[&[1, 0], &[-1, 1]]));
        assert_eq!(c.dual().unwrap().dual().unwrap(), c);
    }

    #[test]
    fn dual_of_scalars() {
        assert_eq!(RatMatrix::identity(1).dual().unwrap(), RatMatrix::identity(1));
        assert_eq!(
            RatMatrix::scalar(1, q(2)).dual().unwrap(),
            RatMatrix::scalar(1, qr(1, 2))
        );
        assert_eq!(m(&[&[1, 2], &[2, 4]]).dual(), Err(FrameError::Singular));
    }

    #[test]
    fn det_and_powers() {
        let a = m(&[&[1, 1], &[-1, 1]]);
        assert_eq!(a.det(), q(2));
        assert_eq!(a.pow(2).unwrap(), m(&[&[0, 2], &[-2, 0]]));
        assert_eq!(a.pow(-1).unwrap().mul(&a), RatMatrix::identity(2));
        assert!(a.is_expansive());
        assert!(!m(&[&[2, 0], &[0, 1]]).is_expansive());
    }

    #[test]
    fn contraction_bound_dominates_powers() {
        let a = m(&[&[1, 1], &[-1, 1]]);
        let cb = ContractionBound::new(&a).unwrap();
        let inv = a.inverse().unwrap();
        let mut p = RatMatrix::identity(2);
        for j in 0..20 {
            assert!(to_f64(&p.inf_norm()) <= cb.bound(j) + 1e-12);
            p = p.mul(&inv);
        }
    }
}
