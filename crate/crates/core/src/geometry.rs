//! Half-open rational boxes and finite unions of them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{FrameError, Result};
use crate::matrix::RatMatrix;
use crate::rational::{fmt_q, q_max, q_min, Q};

/// The box ∏ [lo_i, hi_i). Empty when some lo_i ≥ hi_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatBox {
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
}

impl RatBox {
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(FrameError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        Ok(RatBox { lo, hi })
    }

    pub fn interval(lo: Q, hi: Q) -> Self {
        RatBox {
            lo: vec![lo],
            hi: vec![hi],
        }
    }

    pub fn cube(d: usize, lo: Q, hi: Q) -> Self {
        RatBox {
            lo: vec![lo; d],
            hi: vec![hi; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    /// Closed-box emptiness (degenerate boxes with lo = hi are not empty here).
    pub fn is_empty_closed(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }

    pub fn measure(&self) -> Q {
        if self.is_empty() {
            return Q::zero();
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .fold(Q::from_integer(1.into()), |acc, (a, b)| acc * (b - a))
    }

    pub fn intersect(&self, o: &RatBox) -> RatBox {
        RatBox {
            lo: self.lo.iter().zip(&o.lo).map(|(a, b)| q_max(a, b)).collect(),
            hi: self.hi.iter().zip(&o.hi).map(|(a, b)| q_min(a, b)).collect(),
        }
    }

    pub fn hull(&self, o: &RatBox) -> RatBox {
        RatBox {
            lo: self.lo.iter().zip(&o.lo).map(|(a, b)| q_min(a, b)).collect(),
            hi: self.hi.iter().zip(&o.hi).map(|(a, b)| q_max(a, b)).collect(),
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| a <= v && v < b)
    }

    pub fn contains_closed(&self, x: &[Q]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| a <= v && v <= b)
    }

    pub fn translate(&self, t: &[Q]) -> RatBox {
        RatBox {
            lo: self.lo.iter().zip(t).map(|(a, s)| a + s).collect(),
            hi: self.hi.iter().zip(t).map(|(a, s)| a + s).collect(),
        }
    }

    /// Minkowski difference {u − v : u ∈ self, v ∈ o}, as a closed bounding box.
    pub fn minus(&self, o: &RatBox) -> RatBox {
        RatBox {
            lo: self.lo.iter().zip(&o.hi).map(|(a, b)| a - b).collect(),
            hi: self.hi.iter().zip(&o.lo).map(|(a, b)| a - b).collect(),
        }
    }

    /// Bounding box of {Mξ + b : ξ ∈ self}; exact for diagonal M.
    pub fn image(&self, m: &RatMatrix, b: &[Q]) -> RatBox {
        let d = self.dim();
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let mut l = b[i].clone();
            let mut h = b[i].clone();
            for j in 0..d {
                let c = m.get(i, j);
                if c.is_positive() {
                    l += c * &self.lo[j];
                    h += c * &self.hi[j];
                } else if c.is_negative() {
                    l += c * &self.hi[j];
                    h += c * &self.lo[j];
                }
            }
            lo.push(l);
            hi.push(h);
        }
        RatBox { lo, hi }
    }

    /// Lower bound for min |ξ|_∞ over the closed box; zero when 0 is in its closure.
    pub fn inf_norm_lower(&self) -> Q {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                if a.is_positive() {
                    a.clone()
                } else if b.is_negative() {
                    -b.clone()
                } else {
                    Q::zero()
                }
            })
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// max |ξ|_∞ over the closed box.
    pub fn inf_norm_upper(&self) -> Q {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| q_max(&a.abs(), &b.abs()))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Integer points of the closed box, in lexicographic order.
    pub fn integer_points(&self, limit: usize) -> Result<Vec<Vec<BigInt>>> {
        let ranges: Vec<(BigInt, BigInt)> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (a.ceil().to_integer(), b.floor().to_integer()))
            .collect();
        let mut total: u128 = 1;
        for (a, b) in &ranges {
            if a > b {
                return Ok(Vec::new());
            }
            let n: u128 = (b - a + 1u32).try_into().unwrap_or(u128::MAX);
            total = total.saturating_mul(n);
        }
        if total > limit as u128 {
            return Err(FrameError::TooLarge(format!(
                "{total} integer points in box {self}"
            )));
        }
        let mut out = vec![Vec::new()];
        for (a, b) in ranges {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = a.clone();
                while k <= b {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k += 1;
                }
            }
            out = next;
        }
        Ok(out)
    }
}

impl fmt::Display for RatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("[{}, {})", fmt_q(a), fmt_q(b)))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

pub fn hull_of(boxes: &[RatBox]) -> Option<RatBox> {
    let mut it = boxes.iter().filter(|b| !b.is_empty());
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, b| acc.hull(b)))
}

/// A finite union of half-open rational boxes: the spectral set E of V_E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSet {
    dim: usize,
    boxes: Vec<RatBox>,
}

impl SpectralSet {
    /// Normalizes the boxes into a pairwise disjoint family.
    pub fn new(dim: usize, boxes: Vec<RatBox>) -> Result<Self> {
        let mut out: Vec<RatBox> = Vec::new();
        for b in boxes {
            if b.dim() != dim {
                return Err(FrameError::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
            if b.is_empty() {
                continue;
            }
            let mut pending = vec![b];
            for existing in &out {
                pending = pending
                    .into_iter()
                    .flat_map(|p| subtract(&p, existing))
                    .collect();
            }
            out.extend(pending);
        }
        out.sort();
        Ok(SpectralSet { dim, boxes: out })
    }

    pub fn intervals(iv: &[(Q, Q)]) -> Self {
        Self::new(
            1,
            iv.iter()
                .map(|(a, b)| RatBox::interval(a.clone(), b.clone()))
                .collect(),
        )
        .expect("1-D boxes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[RatBox] {
        &self.boxes
    }

    pub fn measure(&self) -> Q {
        self.boxes.iter().map(RatBox::measure).fold(Q::zero(), |a, b| a + b)
    }

    pub fn hull(&self) -> Option<RatBox> {
        hull_of(&self.boxes)
    }

    /// 1-D view as sorted intervals.
    pub fn as_intervals(&self) -> Vec<(Q, Q)> {
        self.boxes
            .iter()
            .map(|b| (b.lo[0].clone(), b.hi[0].clone()))
            .collect()
    }

    pub fn translate(&self, t: &[Q]) -> SpectralSet {
        SpectralSet {
            dim: self.dim,
            boxes: self.boxes.iter().map(|b| b.translate(t)).collect(),
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }
}

/// `a \ b` as a list of disjoint boxes.
pub(crate) fn subtract(a: &RatBox, b: &RatBox) -> Vec<RatBox> {
    let inter = a.intersect(b);
    if inter.is_empty() {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    let mut rest = a.clone();
    for i in 0..a.dim() {
        if rest.lo[i] < inter.lo[i] {
            let mut piece = rest.clone();
            piece.hi[i] = inter.lo[i].clone();
            out.push(piece);
            rest.lo[i] = inter.lo[i].clone();
        }
        if inter.hi[i] < rest.hi[i] {
            let mut piece = rest.clone();
            piece.lo[i] = inter.hi[i].clone();
            out.push(piece);
            rest.hi[i] = inter.hi[i].clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn overlapping_boxes_are_split() {
        let e = SpectralSet::intervals(&[(q(0), q(2)), (q(1), q(3))]);
        assert_eq!(e.measure(), q(3));
        assert_eq!(e.boxes().len(), 2);
    }

    #[test]
    fn square_minus_inner_square() {
        let outer = RatBox::cube(2, q(-2), q(2));
        let inner = RatBox::cube(2, q(-1), q(1));
        let parts = subtract(&outer, &inner);
        let total = parts.iter().map(RatBox::measure).fold(q(0), |a, b| a + b);
        assert_eq!(total, q(12));
    }

    #[test]
    fn minkowski_difference() {
        let a = RatBox::interval(q(0), qr(1, 4));
        let b = RatBox::interval(qr(1, 2), qr(3, 4));
        assert_eq!(a.minus(&b), RatBox::interval(qr(-3, 4), qr(-1, 4)));
    }

    #[test]
    fn integer_points_of_box() {
        let b = RatBox::cube(2, qr(-3, 2), qr(1, 2));
        assert_eq!(b.integer_points(100).unwrap().len(), 4);
        assert!(RatBox::cube(3, q(-100), q(100)).integer_points(1000).is_err());
    }
}
