//! Scalar functions of ξ built from sums of generator products
//! Σ w · conj(f(Mξ + b)) · g(Nξ + c), in exact or sampled form.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{FrameError, Result};
use crate::geometry::{hull_of, RatBox};
use crate::matrix::AffineMap;
use crate::piecewise::Piecewise;
use crate::rational::{exact_sqrt, fmt_q, to_f64, Q, CQ};
use crate::spectral::{Mode, SpectralGenerator};
use crate::verdict::CheckOptions;

/// One summand w · conj(f(fmap ξ)) · g(gmap ξ).
#[derive(Clone, Debug)]
pub struct ProductTerm {
    pub weight: Q,
    pub f: Arc<SpectralGenerator>,
    pub fmap: AffineMap,
    pub g: Arc<SpectralGenerator>,
    pub gmap: AffineMap,
}

impl ProductTerm {
    /// Bounding box of the set where both factors can be nonzero.
    pub fn support_hull(&self) -> Option<RatBox> {
        let pre = |gen: &SpectralGenerator, map: &AffineMap| -> Option<RatBox> {
            let inv = map.inverse().ok()?;
            let h = gen.support_hull()?;
            Some(h.image(&inv.m, &inv.b))
        };
        let a = pre(&self.f, &self.fmap)?;
        let b = pre(&self.g, &self.gmap)?;
        let i = a.intersect(&b);
        (!i.is_empty()).then_some(i)
    }

    fn eval_f64(&self, xi: &[f64]) -> Complex64 {
        let fv = self.f.eval_f64(&self.fmap.apply_f64(xi));
        if fv == Complex64::zero() {
            return fv;
        }
        fv.conj() * self.g.eval_f64(&self.gmap.apply_f64(xi)) * to_f64(&self.weight)
    }

    fn realize_exact(&self) -> Result<Piecewise> {
        let f = self.f.piecewise().ok_or(FrameError::ExactModeUnsupported(self.f.dim()))?;
        let g = self.g.piecewise().ok_or(FrameError::ExactModeUnsupported(self.g.dim()))?;
        let gain_sq = self.f.gain_sq() * self.g.gain_sq();
        let gain = exact_sqrt(&gain_sq).ok_or_else(|| FrameError::IrrationalWeight(fmt_q(&gain_sq)))?;
        let lam_f = self.fmap.m.is_scalar_1d().expect("1-D map");
        let lam_g = self.gmap.m.is_scalar_1d().expect("1-D map");
        let fc = f.compose_affine(lam_f, &self.fmap.b[0])?.conj();
        let gc = g.compose_affine(lam_g, &self.gmap.b[0])?;
        Ok(fc.mul(&gc).scale(&CQ::real(&self.weight * gain)))
    }
}

/// Where a condition fails: a label and a representative value.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub location: String,
    pub value: Complex64,
}

#[derive(Clone, Debug)]
pub struct SampledSymbol {
    dim: usize,
    /// The value is the product over factors of the sum over each factor's terms.
    factors: Vec<Vec<ProductTerm>>,
    region: Option<Vec<RatBox>>,
    spacing: f64,
    max_points: usize,
}

#[derive(Clone, Debug)]
pub enum SymbolFunction {
    Exact(Piecewise),
    Sampled(SampledSymbol),
}

/// Exact mode when requested or possible (1-D piecewise generators), else sampled.
pub fn resolve_mode(dim: usize, gens: &[&SpectralGenerator], opts: &CheckOptions) -> Result<Mode> {
    let all_exact = gens.iter().all(|g| g.mode() == Mode::Exact);
    match opts.mode {
        Some(Mode::Exact) => {
            if dim != 1 {
                return Err(FrameError::ExactModeUnsupported(dim));
            }
            if !all_exact {
                return Err(FrameError::InvalidParameter(
                    "exact mode needs piecewise-polynomial generators".into(),
                ));
            }
            Ok(Mode::Exact)
        }
        Some(Mode::Sampled) => Ok(Mode::Sampled),
        None => Ok(if dim == 1 && all_exact { Mode::Exact } else { Mode::Sampled }),
    }
}

impl SymbolFunction {
    pub fn from_terms(dim: usize, terms: Vec<ProductTerm>, mode: Mode, opts: &CheckOptions) -> Result<Self> {
        match mode {
            Mode::Exact => {
                if dim != 1 {
                    return Err(FrameError::ExactModeUnsupported(dim));
                }
                let mut acc = Piecewise::zero();
                for t in &terms {
                    acc = acc.add(&t.realize_exact()?);
                }
                Ok(SymbolFunction::Exact(acc))
            }
            Mode::Sampled => {
                let mut spacing = f64::INFINITY;
                for t in &terms {
                    let sf = t.f.resolution() / to_f64(&t.fmap.m.inf_norm()).max(1e-300);
                    let sg = t.g.resolution() / to_f64(&t.gmap.m.inf_norm()).max(1e-300);
                    spacing = spacing.min(sf).min(sg);
                }
                Ok(SymbolFunction::Sampled(SampledSymbol {
                    dim,
                    factors: vec![terms],
                    region: None,
                    spacing: spacing / 2.0,
                    max_points: opts.max_probe_points,
                }))
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SymbolFunction::Exact(_) => 1,
            SymbolFunction::Sampled(s) => s.dim,
        }
    }

    pub fn as_exact(&self) -> Option<&Piecewise> {
        match self {
            SymbolFunction::Exact(f) => Some(f),
            SymbolFunction::Sampled(_) => None,
        }
    }

    /// Pointwise product of two symbols built in the same mode.
    pub fn product(&self, other: &SymbolFunction) -> Result<Self> {
        match (self, other) {
            (SymbolFunction::Exact(a), SymbolFunction::Exact(b)) => Ok(SymbolFunction::Exact(a.mul(b))),
            (SymbolFunction::Sampled(a), SymbolFunction::Sampled(b)) => {
                let mut out = a.clone();
                out.factors.extend(b.factors.iter().cloned());
                out.spacing = a.spacing.min(b.spacing);
                if let Some(r) = &b.region {
                    return Ok(SymbolFunction::Sampled(out).restrict(r));
                }
                Ok(SymbolFunction::Sampled(out))
            }
            _ => Err(FrameError::InvalidParameter("cannot multiply exact and sampled symbols".into())),
        }
    }

    /// Restriction to a union of disjoint boxes.
    pub fn restrict(&self, region: &[RatBox]) -> Self {
        match self {
            SymbolFunction::Exact(f) => {
                let iv: Vec<(Q, Q)> = region.iter().map(|b| (b.lo[0].clone(), b.hi[0].clone())).collect();
                SymbolFunction::Exact(f.restrict(&iv))
            }
            SymbolFunction::Sampled(s) => {
                let mut s = s.clone();
                s.region = Some(match &s.region {
                    None => region.to_vec(),
                    Some(old) => old
                        .iter()
                        .flat_map(|a| region.iter().map(move |b| a.intersect(b)))
                        .filter(|b| !b.is_empty())
                        .collect(),
                });
                SymbolFunction::Sampled(s)
            }
        }
    }

    pub fn eval_f64(&self, xi: &[f64]) -> Complex64 {
        match self {
            SymbolFunction::Exact(f) => f.eval_f64(xi[0]),
            SymbolFunction::Sampled(s) => s.eval(xi),
        }
    }

    pub fn eval_exact(&self, xi: &Q) -> Option<CQ> {
        self.as_exact().map(|f| f.eval(xi))
    }

    /// Bounding box of the (possible) support.
    pub fn support_hull(&self) -> Option<RatBox> {
        match self {
            SymbolFunction::Exact(f) => f.bounds().map(|(a, b)| RatBox::interval(a, b)),
            SymbolFunction::Sampled(s) => {
                let h = hull_of(&s.term_hulls())?;
                match &s.region {
                    None => Some(h),
                    Some(r) => {
                        let rh = hull_of(r)?;
                        let i = h.intersect(&rh);
                        (!i.is_empty()).then_some(i)
                    }
                }
            }
        }
    }

    /// `None` when the function vanishes a.e. (exactly, or within `tol` on the probe set).
    pub fn zero_witness(&self, tol: f64) -> Option<Witness> {
        match self {
            SymbolFunction::Exact(f) => f.pieces().first().map(|p| {
                let x = p.witness();
                Witness {
                    location: p.label(),
                    value: p.poly.eval(&x).to_c64(),
                }
            }),
            SymbolFunction::Sampled(s) => {
                let regions: Vec<RatBox> = match &s.region {
                    None => s.term_hulls(),
                    Some(r) => r
                        .iter()
                        .flat_map(|a| s.term_hulls().into_iter().map(move |b| a.intersect(&b)))
                        .filter(|b| !b.is_empty())
                        .collect(),
                };
                s.worst(&regions, |v| v.norm(), tol)
            }
        }
    }

    /// `None` when the function equals 1 a.e. on `region`.
    pub fn one_witness(&self, region: &[RatBox], tol: f64) -> Option<Witness> {
        match self {
            SymbolFunction::Exact(f) => {
                let iv: Vec<(Q, Q)> = region.iter().map(|b| (b.lo[0].clone(), b.hi[0].clone())).collect();
                let diff = f.restrict(&iv).sub(&Piecewise::indicator(&iv, CQ::one()));
                diff.pieces().first().map(|p| {
                    let x = p.witness();
                    Witness {
                        location: p.label(),
                        value: f.eval(&x).to_c64(),
                    }
                })
            }
            SymbolFunction::Sampled(s) => {
                let one = Complex64::new(1.0, 0.0);
                s.worst(region, |v| (v - one).norm(), tol)
            }
        }
    }

    /// `None` when the function equals the constant `c` a.e. on `region`.
    pub fn equals_witness(&self, c: &Q, region: &[RatBox], tol: f64) -> Option<Witness> {
        if c.is_one() {
            return self.one_witness(region, tol);
        }
        match self {
            SymbolFunction::Exact(f) => {
                let iv: Vec<(Q, Q)> = region.iter().map(|b| (b.lo[0].clone(), b.hi[0].clone())).collect();
                let diff = f.restrict(&iv).sub(&Piecewise::indicator(&iv, CQ::real(c.clone())));
                diff.pieces().first().map(|p| {
                    let x = p.witness();
                    Witness {
                        location: p.label(),
                        value: f.eval(&x).to_c64(),
                    }
                })
            }
            SymbolFunction::Sampled(s) => {
                let target = Complex64::new(to_f64(c), 0.0);
                s.worst(region, |v| (v - target).norm(), tol)
            }
        }
    }

    /// (ξ, Re, Im) rows on an equispaced 1-D grid.
    pub fn sample_rows(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / n.max(1) as f64;
                let v = self.eval_f64(&[x]);
                (x, v.re, v.im)
            })
            .collect()
    }
}

impl SampledSymbol {
    fn in_region(&self, xi: &[f64]) -> bool {
        match &self.region {
            None => true,
            Some(r) => r.iter().any(|b| {
                xi.iter()
                    .zip(b.lo.iter().zip(&b.hi))
                    .all(|(x, (l, h))| to_f64(l) <= *x && *x < to_f64(h))
            }),
        }
    }

    fn eval(&self, xi: &[f64]) -> Complex64 {
        if !self.in_region(xi) {
            return Complex64::zero();
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            acc *= f.iter().map(|t| t.eval_f64(xi)).sum::<Complex64>();
            if acc == Complex64::zero() {
                break;
            }
        }
        acc
    }

    /// Boxes covering the support: term hulls of the first factor cut down by
    /// the hulls of the others.
    fn term_hulls(&self) -> Vec<RatBox> {
        let hulls: Vec<Vec<RatBox>> = self
            .factors
            .iter()
            .map(|f| f.iter().filter_map(ProductTerm::support_hull).collect())
            .collect();
        let mut out = hulls[0].clone();
        for h in &hulls[1..] {
            out = match hull_of(h) {
                None => Vec::new(),
                Some(b) => out.iter().map(|r| r.intersect(&b)).filter(|r| !r.is_empty()).collect(),
            };
        }
        out
    }

    /// Probes cell centres of a grid over each region and reports the point
    /// maximizing `score` if it exceeds `tol`.
    fn worst(
        &self,
        regions: &[RatBox],
        score: impl Fn(Complex64) -> f64,
        tol: f64,
    ) -> Option<Witness> {
        let mut best: Option<(f64, Vec<f64>, Complex64)> = None;
        for r in regions.iter().filter(|b| !b.is_empty()) {
            let lo: Vec<f64> = r.lo.iter().map(to_f64).collect();
            let hi: Vec<f64> = r.hi.iter().map(to_f64).collect();
            let mut h = self.spacing;
            if !h.is_finite() || h <= 0.0 {
                h = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min) / 16.0;
            }
            let counts = loop {
                let c: Vec<usize> = lo.iter().zip(&hi).map(|(a, b)| ((b - a) / h).ceil().max(1.0) as usize).collect();
                let total = c.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
                if total <= self.max_points {
                    break c;
                }
                h *= 1.5;
            };
            let steps: Vec<f64> = lo.iter().zip(&hi).zip(&counts).map(|((a, b), &n)| (b - a) / n as f64).collect();
            let total: usize = counts.iter().product();
            for flat in 0..total {
                let mut rem = flat;
                let mut x = vec![0.0; counts.len()];
                for ax in (0..counts.len()).rev() {
                    let i = rem % counts[ax];
                    rem /= counts[ax];
                    x[ax] = lo[ax] + (i as f64 + 0.5) * steps[ax];
                }
                let v = self.eval(&x);
                let s = score(v);
                if s > tol && best.as_ref().is_none_or(|(b, _, _)| s > *b) {
                    best = Some((s, x, v));
                }
            }
        }
        best.map(|(_, x, v)| Witness {
            location: format!(
                "xi = ({})",
                x.iter().map(|c| format!("{c:.9}")).collect::<Vec<_>>().join(", ")
            ),
            value: v,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;
    use crate::rational::{q, qr};
    use crate::spectral::{shannon, SampledGrid};

    fn shift_term(f: &SpectralGenerator, g: &SpectralGenerator, alpha: Q) -> ProductTerm {
        ProductTerm {
            weight: Q::one(),
            f: Arc::new(f.clone()),
            fmap: AffineMap::identity(1),
            g: Arc::new(g.clone()),
            gmap: AffineMap {
                m: RatMatrix::identity(1),
                b: vec![alpha],
            },
        }
    }

    #[test]
    fn exact_and_sampled_agree_on_shannon_overlap() {
        let s = shannon();
        let opts = CheckOptions::default();
        for (alpha, zero) in [(q(1), true), (qr(1, 2), false), (q(0), false)] {
            let t = vec![shift_term(&s, &s, alpha)];
            let e = SymbolFunction::from_terms(1, t.clone(), Mode::Exact, &opts).unwrap();
            let m = SymbolFunction::from_terms(1, t, Mode::Sampled, &opts).unwrap();
            assert_eq!(e.zero_witness(0.0).is_none(), zero);
            assert_eq!(m.zero_witness(1e-10).is_none(), zero);
        }
    }

    #[test]
    fn one_witness_on_region() {
        let s = shannon();
        let opts = CheckOptions::default();
        let e = SymbolFunction::from_terms(1, vec![shift_term(&s, &s, q(0))], Mode::Exact, &opts).unwrap();
        let inside = [RatBox::interval(qr(-1, 4), qr(1, 4))];
        let wide = [RatBox::interval(q(-1), q(1))];
        assert!(e.one_witness(&inside, 0.0).is_none());
        assert!(e.one_witness(&wide, 0.0).is_some());
    }

    #[test]
    fn sampled_two_dimensional_products() {
        let grid = SampledGrid::from_boxes(&[(RatBox::cube(2, q(0), q(1)), Complex64::new(1.0, 0.0))]).unwrap();
        let g = SpectralGenerator::from_grid("unit square", grid);
        let opts = CheckOptions::default();
        let mk = |b: Vec<Q>| ProductTerm {
            weight: Q::one(),
            f: Arc::new(g.clone()),
            fmap: AffineMap::identity(2),
            g: Arc::new(g.clone()),
            gmap: AffineMap {
                m: RatMatrix::identity(2),
                b,
            },
        };
        let touching = SymbolFunction::from_terms(2, vec![mk(vec![q(1), q(0)])], Mode::Sampled, &opts).unwrap();
        assert!(touching.zero_witness(1e-10).is_none());
        let overlap = SymbolFunction::from_terms(2, vec![mk(vec![qr(1, 2), q(0)])], Mode::Sampled, &opts).unwrap();
        assert!(overlap.zero_witness(1e-10).is_some());
    }
}
