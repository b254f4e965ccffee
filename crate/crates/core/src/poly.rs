//! Univariate polynomials with Gaussian-rational coefficients.

use num_complex::Complex64;
use num_traits::Zero;

use crate::rational::{to_f64, Q, CQ};

/// Coefficients in ascending powers of ξ; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<CQ>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: CQ) -> Self {
        Poly::new(vec![c])
    }

    pub fn new(coeffs: Vec<CQ>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[Q]) -> Self {
        Poly::new(coeffs.iter().cloned().map(CQ::real).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CQ::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[CQ] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = CQ::zero();
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = o.coeffs.get(i).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&CQ::real(-Q::from_integer(1.into()))))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![CQ::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &CQ) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn conj(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(CQ::conj).collect())
    }

    /// p(λξ + β).
    pub fn compose_affine(&self, lambda: &Q, beta: &Q) -> Poly {
        let lin = Poly::new(vec![CQ::real(beta.clone()), CQ::real(lambda.clone())]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &Q) -> CQ {
        let mut acc = CQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_c64();
        }
        acc
    }

    /// ∫_a^b p(ξ) dξ, exact.
    pub fn integrate(&self, a: &Q, b: &Q) -> CQ {
        let mut total = CQ::zero();
        let mut pa = a.clone();
        let mut pb = b.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            let kp1 = Q::from_integer((k as i64 + 1).into());
            let span = (&pb - &pa) / &kp1;
            total = &total + &c.scale(&span);
            pa *= a;
            pb *= b;
        }
        total
    }

    /// Largest |p| over `samples + 1` equispaced points of [a, b].
    pub fn max_abs_on(&self, a: &Q, b: &Q, samples: usize) -> f64 {
        let (fa, fb) = (to_f64(a), to_f64(b));
        (0..=samples)
            .map(|i| {
                let t = i as f64 / samples.max(1) as f64;
                self.eval_f64(fa + (fb - fa) * t).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn p(c: &[i64]) -> Poly {
        Poly::from_real(&c.iter().map(|&v| q(v)).collect::<Vec<_>>())
    }

    #[test]
    fn compose_matches_pointwise() {
        let f = p(&[1, -2, 3]);
        let g = f.compose_affine(&qr(1, 2), &q(-1));
        for x in [q(0), q(3), qr(-5, 7)] {
            let inner = &(&x * &qr(1, 2)) + &q(-1);
            assert_eq!(g.eval(&x), f.eval(&inner));
        }
    }

    #[test]
    fn integrate_cubic() {
        // ∫_0^2 (x^3) dx = 4
        assert_eq!(p(&[0, 0, 0, 1]).integrate(&q(0), &q(2)), CQ::real(q(4)));
    }

    #[test]
    fn trims_cancellation() {
        let a = p(&[1, 2]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mul(&Poly::zero()), Poly::zero());
    }
}
