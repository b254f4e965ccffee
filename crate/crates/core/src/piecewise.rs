//! Compactly supported piecewise-polynomial functions on the real line.
//!
//! Pieces are half-open intervals `[lo, hi)`, kept sorted, pairwise disjoint,
//! with nonzero polynomials only; adjacent pieces carrying the same polynomial
//! are merged. Under this normal form a function vanishes almost everywhere
//! exactly when it has no pieces.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{FrameError, Result};
use crate::poly::Poly;
use crate::rational::{fmt_q, to_f64, Q, CQ};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub lo: Q,
    pub hi: Q,
    pub poly: Poly,
}

impl Piece {
    pub fn label(&self) -> String {
        format!("[{}, {})", fmt_q(&self.lo), fmt_q(&self.hi))
    }

    /// A rational point of the piece where the polynomial does not vanish.
    pub fn witness(&self) -> Q {
        // a nonzero polynomial has at most `degree` roots, so degree + 1 distinct
        // interior points always contain a non-root
        let span = &self.hi - &self.lo;
        let tries = self.poly.degree() + 2;
        for k in 1..=tries {
            let t = Q::new((k as i64).into(), ((tries + 1) as i64).into());
            let x = &self.lo + &span * &t;
            if !self.poly.eval(&x).is_zero() {
                return x;
            }
        }
        &self.lo + &span / Q::from_integer(2.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Piecewise {
    pieces: Vec<Piece>,
}

impl Piecewise {
    pub fn zero() -> Self {
        Piecewise { pieces: Vec::new() }
    }

    /// Builds from arbitrary (possibly unsorted) disjoint pieces.
    pub fn from_pieces(mut pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(FrameError::InvalidParameter(format!(
                    "empty or reversed interval {}",
                    p.label()
                )));
            }
        }
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(FrameError::InvalidParameter(format!(
                    "overlapping pieces {} and {}",
                    w[0].label(),
                    w[1].label()
                )));
            }
        }
        Ok(Self::normalized(pieces))
    }

    /// Constant `value` on every interval of `intervals` (assumed disjoint).
    pub fn indicator(intervals: &[(Q, Q)], value: CQ) -> Self {
        let mut pieces: Vec<Piece> = intervals
            .iter()
            .filter(|(lo, hi)| lo < hi)
            .map(|(lo, hi)| Piece {
                lo: lo.clone(),
                hi: hi.clone(),
                poly: Poly::constant(value.clone()),
            })
            .collect();
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        Self::normalized(pieces)
    }

    fn normalized(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if p.poly.is_zero() || p.lo >= p.hi {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.hi == p.lo && last.poly == p.poly {
                    last.hi = p.hi;
                    continue;
                }
            }
            out.push(p);
        }
        Piecewise { pieces: out }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Almost-everywhere zero.
    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(|p| p.poly.degree()).max().unwrap_or(0)
    }

    /// Maximal intervals on which the function is not identically zero.
    pub fn support(&self) -> Vec<(Q, Q)> {
        let mut out: Vec<(Q, Q)> = Vec::new();
        for p in &self.pieces {
            match out.last_mut() {
                Some(last) if last.1 == p.lo => last.1 = p.hi.clone(),
                _ => out.push((p.lo.clone(), p.hi.clone())),
            }
        }
        out
    }

    pub fn bounds(&self) -> Option<(Q, Q)> {
        Some((
            self.pieces.first()?.lo.clone(),
            self.pieces.last()?.hi.clone(),
        ))
    }

    fn piece_at(&self, x: &Q) -> Option<&Piece> {
        let idx = self.pieces.partition_point(|p| &p.hi <= x);
        self.pieces.get(idx).filter(|p| &p.lo <= x)
    }

    pub fn eval(&self, x: &Q) -> CQ {
        self.piece_at(x)
            .map(|p| p.poly.eval(x))
            .unwrap_or_else(CQ::zero)
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        let idx = self.pieces.partition_point(|p| to_f64(&p.hi) <= x);
        match self.pieces.get(idx) {
            Some(p) if to_f64(&p.lo) <= x => p.poly.eval_f64(x),
            _ => Complex64::zero(),
        }
    }

    /// Combines two functions over the common refinement of their breakpoints.
    fn combine(&self, o: &Piecewise, f: impl Fn(Option<&Poly>, Option<&Poly>) -> Poly) -> Self {
        let mut cuts: BTreeSet<Q> = BTreeSet::new();
        for p in self.pieces.iter().chain(&o.pieces) {
            cuts.insert(p.lo.clone());
            cuts.insert(p.hi.clone());
        }
        let cuts: Vec<Q> = cuts.into_iter().collect();
        let (mut i, mut j) = (0usize, 0usize);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            while i < self.pieces.len() && &self.pieces[i].hi <= a {
                i += 1;
            }
            while j < o.pieces.len() && &o.pieces[j].hi <= a {
                j += 1;
            }
            let pa = self.pieces.get(i).filter(|p| &p.lo <= a).map(|p| &p.poly);
            let pb = o.pieces.get(j).filter(|p| &p.lo <= a).map(|p| &p.poly);
            if pa.is_none() && pb.is_none() {
                continue;
            }
            out.push(Piece {
                lo: a.clone(),
                hi: b.clone(),
                poly: f(pa, pb),
            });
        }
        Self::normalized(out)
    }

    pub fn add(&self, o: &Piecewise) -> Self {
        self.combine(o, |a, b| match (a, b) {
            (Some(a), Some(b)) => a.add(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => Poly::zero(),
        })
    }

    pub fn sub(&self, o: &Piecewise) -> Self {
        self.add(&o.scale(&CQ::real(-Q::from_integer(1.into()))))
    }

    pub fn mul(&self, o: &Piecewise) -> Self {
        self.combine(o, |a, b| match (a, b) {
            (Some(a), Some(b)) => a.mul(b),
            _ => Poly::zero(),
        })
    }

    pub fn scale(&self, k: &CQ) -> Self {
        Self::normalized(
            self.pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    poly: p.poly.scale(k),
                })
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        Self::normalized(
            self.pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    poly: p.poly.conj(),
                })
                .collect(),
        )
    }

    /// ξ ↦ f(λξ + β). For λ < 0 the image of `[lo, hi)` is `(·, ·]`, which is
    /// stored half-open again; the two differ on a null set only.
    pub fn compose_affine(&self, lambda: &Q, beta: &Q) -> Result<Self> {
        if lambda.is_zero() {
            return Err(FrameError::Singular);
        }
        let mut out: Vec<Piece> = self
            .pieces
            .iter()
            .map(|p| {
                let a = (&p.lo - beta) / lambda;
                let b = (&p.hi - beta) / lambda;
                let (lo, hi) = if lambda.is_positive() { (a, b) } else { (b, a) };
                Piece {
                    lo,
                    hi,
                    poly: p.poly.compose_affine(lambda, beta),
                }
            })
            .collect();
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        Ok(Self::normalized(out))
    }

    /// ξ ↦ f(ξ + α).
    pub fn shift(&self, alpha: &Q) -> Self {
        self.compose_affine(&Q::from_integer(1.into()), alpha)
            .expect("unit scale is invertible")
    }

    /// Restriction to a union of disjoint intervals.
    pub fn restrict(&self, intervals: &[(Q, Q)]) -> Self {
        self.mul(&Piecewise::indicator(intervals, CQ::one()))
    }

    pub fn integrate(&self) -> CQ {
        self.pieces
            .iter()
            .fold(CQ::zero(), |acc, p| &acc + &p.poly.integrate(&p.lo, &p.hi))
    }

    pub fn max_abs(&self, samples_per_piece: usize) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.poly.max_abs_on(&p.lo, &p.hi, samples_per_piece))
            .fold(0.0, f64::max)
    }
}
