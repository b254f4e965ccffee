//! Generators described by their Fourier transforms.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{FrameError, Result};
use crate::geometry::{hull_of, RatBox};
use crate::matrix::{AffineMap, ContractionBound, RatMatrix};
use crate::piecewise::{Piece, Piecewise};
use crate::poly::Poly;
use crate::rational::{exact_sqrt, fmt_q, q, q_pow, qr, to_f64, Q, CQ};

/// Highest polynomial degree accepted for a generator piece.
pub const MAX_GENERATOR_DEGREE: usize = 3;

/// Largest number of cells a sampled grid may hold.
pub const MAX_GRID_CELLS: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

/// Uniform grid of complex values; the value of cell `i` holds on
/// ∏ [origin + i·step, origin + (i+1)·step).
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGrid {
    pub origin: Vec<Q>,
    pub step: Vec<Q>,
    pub shape: Vec<usize>,
    /// Row-major, last axis fastest.
    pub values: Vec<Complex64>,
}

impl SampledGrid {
    pub fn new(origin: Vec<Q>, step: Vec<Q>, shape: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        let d = origin.len();
        if step.len() != d || shape.len() != d {
            return Err(FrameError::DimensionMismatch {
                expected: d,
                found: step.len().min(shape.len()),
            });
        }
        if step.iter().any(|s| !s.is_positive()) {
            return Err(FrameError::InvalidParameter("grid step must be positive".into()));
        }
        let cells: usize = shape.iter().product();
        if cells != values.len() {
            return Err(FrameError::DimensionMismatch {
                expected: cells,
                found: values.len(),
            });
        }
        Ok(SampledGrid {
            origin,
            step,
            shape,
            values,
        })
    }

    /// Grid fine enough to represent a piecewise-constant function on `boxes`
    /// exactly: per axis the step is the rational gcd of all breakpoints.
    pub fn from_boxes(boxes: &[(RatBox, Complex64)]) -> Result<Self> {
        let d = boxes
            .first()
            .map(|(b, _)| b.dim())
            .ok_or_else(|| FrameError::Empty("no boxes".into()))?;
        let mut origin = Vec::with_capacity(d);
        let mut step = Vec::with_capacity(d);
        let mut shape = Vec::with_capacity(d);
        for i in 0..d {
            let pts: Vec<Q> = boxes
                .iter()
                .flat_map(|(b, _)| [b.lo[i].clone(), b.hi[i].clone()])
                .collect();
            let lo = pts.iter().min().cloned().unwrap();
            let hi = pts.iter().max().cloned().unwrap();
            let mut g = Q::zero();
            for p in &pts {
                g = rational_gcd(&g, &(p - &lo));
            }
            if g.is_zero() {
                return Err(FrameError::InvalidParameter("degenerate box".into()));
            }
            let n = ((&hi - &lo) / &g).to_integer();
            let n: usize = n
                .try_into()
                .map_err(|_| FrameError::TooLarge("grid axis".into()))?;
            origin.push(lo);
            step.push(g);
            shape.push(n);
        }
        let cells: usize = shape.iter().try_fold(1usize, |a, &n| a.checked_mul(n)).unwrap_or(usize::MAX);
        if cells > MAX_GRID_CELLS {
            return Err(FrameError::TooLarge(format!("{cells} grid cells")));
        }
        let mut values = vec![Complex64::zero(); cells];
        for (b, v) in boxes {
            let lo_idx: Vec<usize> = (0..d)
                .map(|i| ((&b.lo[i] - &origin[i]) / &step[i]).to_integer().try_into().unwrap())
                .collect();
            let hi_idx: Vec<usize> = (0..d)
                .map(|i| ((&b.hi[i] - &origin[i]) / &step[i]).to_integer().try_into().unwrap())
                .collect();
            for_each_index(&lo_idx, &hi_idx, |idx| {
                let flat = flatten(idx, &shape);
                values[flat] += *v;
            });
        }
        SampledGrid::new(origin, step, shape, values)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let mut flat = 0usize;
        for i in 0..self.dim() {
            let t = (x[i] - to_f64(&self.origin[i])) / to_f64(&self.step[i]);
            if !(t >= 0.0) {
                return Complex64::zero();
            }
            let k = t.floor() as usize;
            if k >= self.shape[i] {
                return Complex64::zero();
            }
            flat = flat * self.shape[i] + k;
        }
        self.values[flat]
    }

    fn cell_box(&self, idx: &[usize]) -> RatBox {
        let lo: Vec<Q> = (0..self.dim())
            .map(|i| &self.origin[i] + &self.step[i] * Q::from_integer(idx[i].into()))
            .collect();
        let hi = lo.iter().zip(&self.step).map(|(a, s)| a + s).collect();
        RatBox { lo, hi }
    }

    /// Nonzero cells, merged into runs along the last axis.
    pub fn support_boxes(&self) -> Vec<RatBox> {
        let d = self.dim();
        let mut out: Vec<RatBox> = Vec::new();
        let zeros = vec![0usize; d];
        let mut run: Option<RatBox> = None;
        for_each_index(&zeros, &self.shape, |idx| {
            let v = self.values[flatten(idx, &self.shape)];
            let last = idx[d - 1];
            if last == 0 {
                if let Some(r) = run.take() {
                    out.push(r);
                }
            }
            if v.norm() == 0.0 {
                if let Some(r) = run.take() {
                    out.push(r);
                }
                return;
            }
            let cell = self.cell_box(idx);
            match run.as_mut() {
                Some(r) => r.hi[d - 1] = cell.hi[d - 1].clone(),
                None => run = Some(cell),
            }
        });
        if let Some(r) = run {
            out.push(r);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_step(&self) -> Q {
        self.step.iter().min().cloned().unwrap_or_else(Q::one)
    }
}

fn rational_gcd(a: &Q, b: &Q) -> Q {
    use num_integer::Integer;
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let den = a.denom().lcm(b.denom());
    let na = a.numer() * (&den / a.denom());
    let nb = b.numer() * (&den / b.denom());
    Q::new(na.gcd(&nb), den)
}

fn flatten(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (i, n)| acc * n + i)
}

fn for_each_index(lo: &[usize], hi: &[usize], mut f: impl FnMut(&[usize])) {
    if lo.iter().zip(hi).any(|(a, b)| a >= b) {
        return;
    }
    let mut idx = lo.to_vec();
    loop {
        f(&idx);
        let mut ax = idx.len();
        loop {
            if ax == 0 {
                return;
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < hi[ax] {
                break;
            }
            idx[ax] = lo[ax];
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// Piecewise polynomial on the real line.
    Exact(Piecewise),
    /// Grid values, read through an optional affine pre-map ξ ↦ grid(Mξ + b).
    Sampled {
        grid: SampledGrid,
        pre: Option<AffineMap>,
    },
}

/// A generator g given by ĝ = √gain_sq · profile.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralGenerator {
    pub name: String,
    dim: usize,
    gain_sq: Q,
    profile: Profile,
    support: Vec<RatBox>,
    sup_bound: f64,
}

impl SpectralGenerator {
    pub fn from_piecewise(name: impl Into<String>, f: Piecewise) -> Result<Self> {
        if f.max_degree() > MAX_GENERATOR_DEGREE {
            return Err(FrameError::InvalidParameter(format!(
                "piece degree {} exceeds {MAX_GENERATOR_DEGREE}",
                f.max_degree()
            )));
        }
        Ok(Self::exact_unchecked(name.into(), Q::one(), f))
    }

    fn exact_unchecked(name: String, gain_sq: Q, f: Piecewise) -> Self {
        let support = f
            .support()
            .into_iter()
            .map(|(a, b)| RatBox::interval(a, b))
            .collect();
        let sup_bound = f.max_abs(16) * to_f64(&gain_sq).sqrt();
        SpectralGenerator {
            name,
            dim: 1,
            gain_sq,
            profile: Profile::Exact(f),
            support,
            sup_bound,
        }
    }

    pub fn from_grid(name: impl Into<String>, grid: SampledGrid) -> Self {
        let support = grid.support_boxes();
        let sup_bound = grid.max_abs();
        SpectralGenerator {
            name: name.into(),
            dim: grid.dim(),
            gain_sq: Q::one(),
            profile: Profile::Sampled { grid, pre: None },
            support,
            sup_bound,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gain_sq(&self) -> &Q {
        &self.gain_sq
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn mode(&self) -> Mode {
        match self.profile {
            Profile::Exact(_) => Mode::Exact,
            Profile::Sampled { .. } => Mode::Sampled,
        }
    }

    /// The piecewise profile (without the gain) in exact mode.
    pub fn piecewise(&self) -> Option<&Piecewise> {
        match &self.profile {
            Profile::Exact(f) => Some(f),
            Profile::Sampled { .. } => None,
        }
    }

    pub fn support(&self) -> &[RatBox] {
        &self.support
    }

    pub fn support_hull(&self) -> Option<RatBox> {
        hull_of(&self.support)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Compact support bounded away from the origin.
    pub fn in_class_d(&self) -> bool {
        self.support.iter().all(|b| b.inf_norm_lower().is_positive())
    }

    /// Same generator with the gain multiplied by `factor_sq`, i.e. ĝ ↦ √factor_sq · ĝ.
    pub fn scaled_gain(&self, factor_sq: &Q) -> Self {
        let mut g = self.clone();
        g.gain_sq = &g.gain_sq * factor_sq;
        g.sup_bound *= to_f64(factor_sq).sqrt();
        g
    }

    /// ξ ↦ ĝ(Mξ) times √factor_sq.
    pub fn compose_linear(&self, m: &RatMatrix, factor_sq: &Q) -> Result<Self> {
        if m.dim() != self.dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        let gain_sq = &self.gain_sq * factor_sq;
        match &self.profile {
            Profile::Exact(f) => {
                let lam = m.is_scalar_1d().expect("exact profiles are 1-D");
                let g = f.compose_affine(lam, &Q::zero())?;
                Ok(Self::exact_unchecked(self.name.clone(), gain_sq, g))
            }
            Profile::Sampled { grid, pre } => {
                let outer = AffineMap::linear(m.clone());
                let pre = match pre {
                    Some(p) => p.compose(&outer),
                    None => outer,
                };
                let inv = pre.inverse()?;
                let support = grid
                    .support_boxes()
                    .iter()
                    .map(|b| b.image(&inv.m, &inv.b))
                    .collect();
                Ok(SpectralGenerator {
                    name: self.name.clone(),
                    dim: self.dim,
                    gain_sq: gain_sq.clone(),
                    sup_bound: grid.max_abs() * to_f64(&gain_sq).sqrt(),
                    profile: Profile::Sampled {
                        grid: grid.clone(),
                        pre: Some(pre),
                    },
                    support,
                })
            }
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(FrameError::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// ĝ(ξ) in floating point.
    pub fn eval_f64(&self, xi: &[f64]) -> Complex64 {
        let raw = match &self.profile {
            Profile::Exact(f) => f.eval_f64(xi[0]),
            Profile::Sampled { grid, pre } => match pre {
                Some(p) => grid.eval(&p.apply_f64(xi)),
                None => grid.eval(xi),
            },
        };
        raw * to_f64(&self.gain_sq).sqrt()
    }

    /// ĝ(ξ) at a rational point; the profile is evaluated exactly in exact mode.
    pub fn evaluate(&self, xi: &[Q]) -> Result<Complex64> {
        self.check_dim(xi.len())?;
        if !self.support.iter().any(|b| b.contains(xi)) {
            return Ok(Complex64::zero());
        }
        match &self.profile {
            Profile::Exact(f) => Ok(match exact_sqrt(&self.gain_sq) {
                Some(g) => f.eval(&xi[0]).scale(&g).to_c64(),
                None => f.eval(&xi[0]).to_c64() * to_f64(&self.gain_sq).sqrt(),
            }),
            Profile::Sampled { .. } => {
                let x: Vec<f64> = xi.iter().map(to_f64).collect();
                Ok(self.eval_f64(&x))
            }
        }
    }

    /// Exact value in exact mode; needs a rational square root of the gain.
    pub fn evaluate_exact(&self, xi: &Q) -> Result<CQ> {
        let f = self
            .piecewise()
            .ok_or(FrameError::ExactModeUnsupported(self.dim))?;
        let g = exact_sqrt(&self.gain_sq)
            .ok_or_else(|| FrameError::IrrationalWeight(fmt_q(&self.gain_sq)))?;
        Ok(f.eval(xi).scale(&g))
    }

    /// Grid (or piece) resolution used to choose probe spacing in sampled mode.
    pub fn resolution(&self) -> f64 {
        match &self.profile {
            Profile::Exact(f) => f
                .pieces()
                .iter()
                .map(|p| to_f64(&(&p.hi - &p.lo)))
                .fold(f64::INFINITY, f64::min),
            Profile::Sampled { grid, pre } => {
                let s = to_f64(&grid.min_step());
                match pre {
                    Some(p) => s / to_f64(&p.m.inf_norm()).max(1e-300),
                    None => s,
                }
            }
        }
    }
}

/// Bounding box of {u − v : u ∈ supp â, v ∈ supp b̂}; `None` if either is zero.
pub fn support_difference(a: &SpectralGenerator, b: &SpectralGenerator) -> Result<Option<RatBox>> {
    if a.dim() != b.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(match (a.support_hull(), b.support_hull()) {
        (Some(x), Some(y)) => Some(x.minus(&y)),
        _ => None,
    })
}

/// All integers j with Mʲ(window) ∩ supp ĝ of positive measure. Exact for
/// scalar or diagonal M; for general M the box images are bounding boxes,
/// so the result may contain extra indices but never misses one.
pub fn dilate_index_range(gen: &SpectralGenerator, m: &RatMatrix, window: &[RatBox]) -> Result<Vec<i64>> {
    if m.dim() != gen.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: gen.dim(),
            found: m.dim(),
        });
    }
    if !gen.in_class_d() {
        return Err(FrameError::NotClassD);
    }
    let cb = ContractionBound::new(m)?;
    let window: Vec<&RatBox> = window.iter().filter(|b| !b.is_empty()).collect();
    if window.is_empty() || gen.is_zero() {
        return Ok(Vec::new());
    }
    let w_lo = window.iter().map(|b| b.inf_norm_lower()).min().unwrap();
    if !w_lo.is_positive() {
        return Err(FrameError::WindowTouchesOrigin);
    }
    let w_hi = window.iter().map(|b| b.inf_norm_upper()).max().unwrap();
    let s_lo = gen.support.iter().map(|b| b.inf_norm_lower()).min().unwrap();
    let s_hi = gen.support.iter().map(|b| b.inf_norm_upper()).max().unwrap();
    let up = cb.horizon(to_f64(&w_lo) / to_f64(&s_hi) * (1.0 - 1e-9)) as i64;
    let down = cb.horizon(to_f64(&s_lo) / to_f64(&w_hi) * (1.0 - 1e-9)) as i64;
    let mut out = Vec::new();
    for j in -down..=up {
        let mj = m.pow(j)?;
        let zero = vec![Q::zero(); m.dim()];
        let hit = window.iter().any(|w| {
            let img = image_exact_1d(w, &mj).unwrap_or_else(|| w.image(&mj, &zero));
            gen.support.iter().any(|s| !s.intersect(&img).is_empty())
        });
        if hit {
            out.push(j);
        }
    }
    Ok(out)
}

/// Image of a 1-D half-open interval under a scalar, kept half-open.
fn image_exact_1d(w: &RatBox, m: &RatMatrix) -> Option<RatBox> {
    let lam = m.is_scalar_1d()?;
    let a = lam * &w.lo[0];
    let b = lam * &w.hi[0];
    Some(if lam.is_positive() {
        RatBox::interval(a, b)
    } else {
        RatBox::interval(b, a)
    })
}

// ---------------------------------------------------------------------------
// Named profiles

fn constant_piece(lo: Q, hi: Q, v: Q) -> Piece {
    Piece {
        lo,
        hi,
        poly: Poly::from_real(&[v]),
    }
}

fn linear_piece(lo: Q, hi: Q, c0: Q, c1: Q) -> Piece {
    Piece {
        lo,
        hi,
        poly: Poly::from_real(&[c0, c1]),
    }
}

/// χ of a disjoint union of intervals.
pub fn characteristic(intervals: &[(Q, Q)]) -> Result<SpectralGenerator> {
    let pieces = intervals
        .iter()
        .map(|(a, b)| constant_piece(a.clone(), b.clone(), Q::one()))
        .collect();
    SpectralGenerator::from_piecewise("characteristic", Piecewise::from_pieces(pieces)?)
}

/// χ_{[-1/2, 1/2)}.
pub fn shannon() -> SpectralGenerator {
    let mut g = characteristic(&[(qr(-1, 2), qr(1, 2))]).expect("valid interval");
    g.name = "shannon".into();
    g
}

/// χ_{[-1/2,-1/4) ∪ [1/4,1/2)}.
pub fn shannon_wavelet() -> SpectralGenerator {
    let mut g = characteristic(&[(qr(-1, 2), qr(-1, 4)), (qr(1, 4), qr(1, 2))]).expect("valid");
    g.name = "shannon_wavelet".into();
    g
}

/// ψ̂(ξ) = r(|ξ|/c) − r(|ξ|/(ac)) with r the linear ramp from 0 at 1 to 1 at a.
pub fn frazier_jawerth(a: &Q, c: &Q) -> Result<SpectralGenerator> {
    if *a <= Q::one() {
        return Err(FrameError::InvalidParameter(format!("dilation a = {} must exceed 1", fmt_q(a))));
    }
    if !c.is_positive() {
        return Err(FrameError::InvalidParameter(format!("scale c = {} must be positive", fmt_q(c))));
    }
    let am1 = a - Q::one();
    let ac = a * c;
    let aac = a * &ac;
    // on [c, ac): (ξ/c − 1)/(a − 1); on [ac, a²c): (a − ξ/(ac))/(a − 1)
    let up0 = -Q::one() / &am1;
    let up1 = Q::one() / (c * &am1);
    let dn0 = a / &am1;
    let dn1 = -Q::one() / (&ac * &am1);
    let pieces = vec![
        linear_piece(-aac.clone(), -ac.clone(), dn0.clone(), -dn1.clone()),
        linear_piece(-ac.clone(), -c.clone(), up0.clone(), -up1.clone()),
        linear_piece(c.clone(), ac.clone(), up0, up1),
        linear_piece(ac, aac, dn0, dn1),
    ];
    let mut g = SpectralGenerator::from_piecewise("frazier_jawerth", Piecewise::from_pieces(pieces)?)?;
    g.name = format!("frazier_jawerth({}, {})", fmt_q(a), fmt_q(c));
    Ok(g)
}

/// 1 on [-inner, inner), linear ramps down to 0 at ±outer.
pub fn plateau(inner: &Q, outer: &Q) -> Result<SpectralGenerator> {
    if !inner.is_positive() || outer <= inner {
        return Err(FrameError::InvalidParameter("plateau needs 0 < inner < outer".into()));
    }
    let w = outer - inner;
    let slope = Q::one() / &w;
    let pieces = vec![
        linear_piece(-outer.clone(), -inner.clone(), outer / &w, slope.clone()),
        constant_piece(-inner.clone(), inner.clone(), Q::one()),
        linear_piece(inner.clone(), outer.clone(), outer / &w, -slope),
    ];
    let mut g = SpectralGenerator::from_piecewise("plateau", Piecewise::from_pieces(pieces)?)?;
    g.name = "plateau".into();
    Ok(g)
}

/// (ψ, φ): ψ̂ the plateau on [-1/2, 1/2) with flat part [-1/4, 1/4), φ̂ = ψ̂ + ψ̂(· − 1).
pub fn bidual_pair() -> (SpectralGenerator, SpectralGenerator) {
    let mut psi = plateau(&qr(1, 4), &qr(1, 2)).expect("valid plateau");
    psi.name = "bidual_psi".into();
    let f = psi.piecewise().unwrap();
    let phi_f = f.add(&f.shift(&q(-1)));
    let mut phi = SpectralGenerator::from_piecewise("bidual_phi", phi_f).expect("degree 1");
    phi.name = "bidual_phi".into();
    (psi, phi)
}

/// Builds a named profile. Most names give one generator; `bidual_pair` gives (ψ, φ).
pub fn build_named_profile(name: &str, params: &[Q]) -> Result<Vec<SpectralGenerator>> {
    let want = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(FrameError::InvalidParameter(format!(
                "{name} takes {n} parameters, got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "characteristic" => {
            if params.is_empty() || !params.len().is_multiple_of(2) {
                return Err(FrameError::InvalidParameter(
                    "characteristic takes interval endpoint pairs".into(),
                ));
            }
            let iv: Vec<(Q, Q)> = params.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
            Ok(vec![characteristic(&iv)?])
        }
        "shannon" => {
            want(0)?;
            Ok(vec![shannon()])
        }
        "shannon_wavelet" => {
            want(0)?;
            Ok(vec![shannon_wavelet()])
        }
        "frazier_jawerth" => {
            want(2)?;
            Ok(vec![frazier_jawerth(&params[0], &params[1])?])
        }
        "plateau" => {
            if params.is_empty() {
                Ok(vec![plateau(&qr(1, 4), &qr(1, 2))?])
            } else {
                want(2)?;
                Ok(vec![plateau(&params[0], &params[1])?])
            }
        }
        "bidual_pair" => {
            want(0)?;
            let (a, b) = bidual_pair();
            Ok(vec![a, b])
        }
        other => Err(FrameError::UnknownProfile(other.to_string())),
    }
}

/// |det A|^{-j}, the squared gain of the j-th dilate.
pub fn det_gain(a: &RatMatrix, j: i64) -> Q {
    q_pow(&a.abs_det(), -j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_values() {
        let g = shannon();
        assert_eq!(g.evaluate(&[q(0)]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(g.evaluate(&[qr(1, 2)]).unwrap(), Complex64::zero());
        assert_eq!(g.evaluate(&[q(7)]).unwrap(), Complex64::zero());
        assert!(g.evaluate(&[q(0), q(0)]).is_err());
    }

    #[test]
    fn fj_dyadic_value_and_support() {
        let g = frazier_jawerth(&q(2), &qr(1, 128)).unwrap();
        assert_eq!(g.evaluate_exact(&qr(1, 64)).unwrap(), CQ::one());
        let s: Vec<String> = g.support().iter().map(|b| b.to_string()).collect();
        assert_eq!(s, vec!["[-1/32, -1/128)", "[1/128, 1/32)"]);
        let g3 = frazier_jawerth(&q(3), &qr(1, 27)).unwrap();
        let s: Vec<String> = g3.support().iter().map(|b| b.to_string()).collect();
        assert_eq!(s, vec!["[-1/3, -1/27)", "[1/27, 1/3)"]);
        assert!(g.in_class_d());
    }

    #[test]
    fn fj_is_symmetric() {
        let g = frazier_jawerth(&q(3), &qr(1, 27)).unwrap();
        for x in [qr(1, 20), qr(1, 9), qr(2, 9), qr(3, 10)] {
            assert_eq!(g.evaluate_exact(&x).unwrap(), g.evaluate_exact(&-x.clone()).unwrap());
        }
    }

    #[test]
    fn fj_parameter_errors() {
        assert!(frazier_jawerth(&q(1), &q(1)).is_err());
        assert!(frazier_jawerth(&q(2), &q(0)).is_err());
        assert!(matches!(
            build_named_profile("mexican_hat", &[]),
            Err(FrameError::UnknownProfile(_))
        ));
    }

    #[test]
    fn bidual_phi_at_one() {
        let (psi, phi) = bidual_pair();
        assert_eq!(phi.evaluate_exact(&q(1)).unwrap(), CQ::one());
        assert_eq!(psi.evaluate_exact(&q(1)).unwrap(), CQ::zero());
        assert_eq!(psi.evaluate_exact(&qr(3, 8)).unwrap(), CQ::real(qr(1, 2)));
    }

    #[test]
    fn support_difference_examples() {
        let a = characteristic(&[(q(0), qr(1, 4))]).unwrap();
        let b = characteristic(&[(qr(1, 2), qr(3, 4))]).unwrap();
        assert_eq!(
            support_difference(&a, &b).unwrap().unwrap(),
            RatBox::interval(qr(-3, 4), qr(-1, 4))
        );
        let s = shannon();
        assert_eq!(
            support_difference(&s, &s).unwrap().unwrap(),
            RatBox::interval(q(-1), q(1))
        );
        let (psi, phi) = bidual_pair();
        assert_eq!(
            support_difference(&phi, &psi).unwrap().unwrap(),
            RatBox::interval(q(-1), q(2))
        );
    }

    #[test]
    fn dilate_ranges() {
        let two = RatMatrix::scalar(1, q(2));
        let sw = shannon_wavelet();
        let w = [RatBox::interval(qr(1, 4), qr(1, 2))];
        assert_eq!(dilate_index_range(&sw, &two, &w).unwrap(), vec![0]);
        let fj = frazier_jawerth(&q(2), &qr(1, 128)).unwrap();
        let w = [RatBox::interval(qr(1, 2), q(1))];
        assert_eq!(dilate_index_range(&fj, &two, &w).unwrap(), vec![-6, -5]);
        assert_eq!(
            dilate_index_range(&sw, &two, &[RatBox::interval(q(0), q(1))]),
            Err(FrameError::WindowTouchesOrigin)
        );
        assert_eq!(
            dilate_index_range(&shannon(), &two, &w),
            Err(FrameError::NotClassD)
        );
        assert_eq!(
            dilate_index_range(&sw, &RatMatrix::identity(1), &w),
            Err(FrameError::NotExpansive)
        );
    }

    #[test]
    fn grid_matches_exact_characteristic() {
        let exact = characteristic(&[(qr(-1, 4), qr(1, 8))]).unwrap();
        let grid = SampledGrid::from_boxes(&[(
            RatBox::interval(qr(-1, 4), qr(1, 8)),
            Complex64::new(1.0, 0.0),
        )])
        .unwrap();
        let sampled = SpectralGenerator::from_grid("chi", grid);
        for k in -40..40 {
            let x = qr(k, 64);
            assert_eq!(sampled.evaluate(std::slice::from_ref(&x)).unwrap(), exact.evaluate(&[x]).unwrap());
        }
    }

    #[test]
    fn grid_support_runs_2d() {
        let grid = SampledGrid::from_boxes(&[
            (RatBox::cube(2, q(1), q(2)), Complex64::new(1.0, 0.0)),
            (RatBox::cube(2, q(-2), q(-1)), Complex64::new(0.0, 2.0)),
        ])
        .unwrap();
        let g = SpectralGenerator::from_grid("two squares", grid);
        assert!(g.in_class_d());
        assert_eq!(g.eval_f64(&[1.5, 1.5]), Complex64::new(1.0, 0.0));
        assert_eq!(g.eval_f64(&[-1.5, -1.5]), Complex64::new(0.0, 2.0));
        assert_eq!(g.eval_f64(&[0.0, 0.0]), Complex64::zero());
        let m: Q = g.support().iter().map(RatBox::measure).fold(q(0), |a, b| a + b);
        assert_eq!(m, q(2));
    }

    #[test]
    fn compose_linear_dilates() {
        let sw = shannon_wavelet();
        let d = sw.compose_linear(&RatMatrix::scalar(1, qr(1, 2)), &qr(1, 2)).unwrap();
        // ĝ(ξ/2)/√2 is supported on ±[1/2, 1)
        assert_eq!(d.support()[1], RatBox::interval(qr(1, 2), q(1)));
        assert!(matches!(d.evaluate_exact(&qr(3, 4)), Err(FrameError::IrrationalWeight(_))));
        assert!((d.evaluate(&[qr(3, 4)]).unwrap().re - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
