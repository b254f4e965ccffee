//! Finite cyclic model of L²(ℝ) for brute-force verification.
//!
//! Conventions: bin m ∈ [−N/2, N/2) stands for ξ_m = m·B/N and is stored at
//! index m + N/2 (negative frequencies first). Vectors are kept in unitary
//! coordinates u_m = √(B/N)·f̂(ξ_m), so translation by t becomes the phase
//! e^{−2πi t ξ_m}. A lattice cℤ is representable when s = c·B is a positive
//! integer dividing N; then T_{ck} for k < N/s is an exact cyclic group and
//! every Grammian is a literal finite sum of rank-one matrices.
//!
//! Norms are Frobenius norms unless stated otherwise. They dominate operator
//! norms, so "≤ tol" statements are conservative.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustfft::FftPlanner;
use serde_json::{json, Value};

use crate::affine::AffineSystem;
use crate::error::{FrameError, Result};
use crate::geometry::RatBox;
use crate::grammian::TranslationSystem;
use crate::rational::{fmt_q, q_pow, to_f64, Q};
use crate::spectral::SpectralGenerator;
use crate::verdict::{fmt_f, CheckOptions, Verdict, VerdictKind};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModel {
    n: usize,
    bandwidth: Q,
}

impl FiniteModel {
    pub fn new(n: usize, bandwidth: Q) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(FrameError::InvalidParameter(format!("model size N = {n} must be even and at least 2")));
        }
        if !bandwidth.is_positive() {
            return Err(FrameError::InvalidParameter(format!("bandwidth {} must be positive", fmt_q(&bandwidth))));
        }
        Ok(FiniteModel { n, bandwidth })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> &Q {
        &self.bandwidth
    }

    /// Signed bin of storage index i.
    pub fn bin(&self, i: usize) -> i64 {
        i as i64 - (self.n / 2) as i64
    }

    pub fn spacing(&self) -> Q {
        &self.bandwidth / Q::from_integer((self.n as i64).into())
    }

    pub fn xi(&self, i: usize) -> Q {
        self.spacing() * Q::from_integer(self.bin(i).into())
    }

    /// s = c·B when it is a positive integer dividing N.
    pub fn step(&self, c: &Q) -> Result<usize> {
        let s = c * &self.bandwidth;
        let bad = || FrameError::ModelStep {
            step: fmt_q(&s),
            n: self.n,
        };
        if !s.is_integer() || !s.is_positive() {
            return Err(bad());
        }
        let s = s.to_integer().to_usize().ok_or_else(bad)?;
        if !self.n.is_multiple_of(s) {
            return Err(bad());
        }
        Ok(s)
    }

    /// The same N with bandwidth a·B; in unitary coordinates D_a maps this model
    /// onto the dilated one as the identity matrix.
    pub fn dilated(&self, a: &Q) -> Result<FiniteModel> {
        FiniteModel::new(self.n, &self.bandwidth * a.abs())
    }

    pub fn check_fits(&self, gen: &SpectralGenerator) -> Result<()> {
        if gen.dim() != 1 {
            return Err(FrameError::DimensionMismatch { expected: 1, found: gen.dim() });
        }
        let half = &self.bandwidth / Q::from_integer(2.into());
        if let Some(h) = gen.support_hull() {
            if h.lo[0] < -half.clone() || h.hi[0] > half {
                return Err(FrameError::SupportOverflow {
                    support: h.to_string(),
                    half: fmt_q(&half),
                });
            }
        }
        Ok(())
    }

    pub fn header(&self) -> String {
        format!(
            "bins m in [-N/2, N/2) at xi_m = m*B/N, negative first; N = {}, B = {}",
            self.n,
            fmt_q(&self.bandwidth)
        )
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "bandwidth": fmt_q(&self.bandwidth), "convention": self.header() })
    }

    fn unit(&self) -> f64 {
        to_f64(&self.spacing()).sqrt()
    }

    fn samples_at(&self, gen: &SpectralGenerator, scale: &Q) -> Result<Vec<Complex64>> {
        (0..self.n).map(|i| gen.evaluate(&[self.xi(i) * scale])).collect()
    }
}

fn fmt_boxes(boxes: &[RatBox]) -> String {
    boxes.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ∪ ")
}

fn two() -> Q {
    Q::from_integer(2.into())
}

/// ĝ(ξ_m) at every bin; aliasing is refused.
pub fn sample_model(gen: &SpectralGenerator, model: &FiniteModel) -> Result<CVector> {
    model.check_fits(gen)?;
    Ok(CVector::from_vec(model.samples_at(gen, &Q::one())?))
}

#[derive(Clone, Debug)]
struct Channel {
    step: usize,
    vector: CVector,
}

/// Finite stand-in for {T_{c_p k} g_p}: per channel a step s_p | N and the
/// unitary-coordinate vector of g_p.
#[derive(Clone, Debug)]
pub struct FiniteSystem {
    n: usize,
    channels: Vec<Channel>,
}

impl FiniteSystem {
    pub fn new(n: usize, channels: Vec<(usize, CVector)>) -> Result<Self> {
        if channels.is_empty() {
            return Err(FrameError::Empty("finite system".into()));
        }
        let mut out = Vec::new();
        for (step, vector) in channels {
            if vector.len() != n {
                return Err(FrameError::DimensionMismatch { expected: n, found: vector.len() });
            }
            if step == 0 || !n.is_multiple_of(step) {
                return Err(FrameError::ModelStep { step: step.to_string(), n });
            }
            out.push(Channel { step, vector });
        }
        Ok(FiniteSystem { n, channels: out })
    }

    /// Samples every generator of a 1-D translation system on the model.
    pub fn from_translation(sys: &TranslationSystem, model: &FiniteModel) -> Result<Self> {
        if sys.dim() != 1 {
            return Err(FrameError::DimensionMismatch { expected: 1, found: sys.dim() });
        }
        let unit = model.unit();
        let channels = sys
            .entries()
            .iter()
            .map(|e| {
                let step = model.step(e.lattice.get(0, 0))?;
                Ok((step, sample_model(&e.generator, model)? * Complex64::new(unit, 0.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteSystem::new(model.n, channels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> Vec<usize> {
        self.channels.iter().map(|c| c.step).collect()
    }

    /// Number of vectors T_{s k} g over all channels.
    pub fn len(&self) -> usize {
        self.channels.iter().map(|c| self.n / c.step).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Columns T_{s k} g_p, channel by channel, k ascending.
    pub fn analysis_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.len());
        let mut col = 0;
        for ch in &self.channels {
            for k in 0..self.n / ch.step {
                m.set_column(col, &translate(&ch.vector, ch.step * k));
                col += 1;
            }
        }
        m
    }

    pub fn scaled(&self, t: Complex64) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|c| Channel {
                step: c.step,
                vector: &c.vector * t,
            })
            .collect();
        FiniteSystem { n: self.n, channels }
    }

    /// Both systems listed one after the other.
    pub fn concat(&self, other: &FiniteSystem) -> Result<Self> {
        if self.n != other.n {
            return Err(FrameError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut channels = self.channels.clone();
        channels.extend(other.channels.iter().cloned());
        Ok(FiniteSystem { n: self.n, channels })
    }

    /// Channel-wise v_p + t·w_p; both systems must share steps.
    pub fn add_scaled(&self, other: &FiniteSystem, t: f64) -> Result<Self> {
        self.check_shape(other)?;
        let channels = self
            .channels
            .iter()
            .zip(&other.channels)
            .map(|(a, b)| Channel {
                step: a.step,
                vector: &a.vector + &b.vector * Complex64::new(t, 0.0),
            })
            .collect();
        Ok(FiniteSystem { n: self.n, channels })
    }

    fn check_shape(&self, other: &FiniteSystem) -> Result<()> {
        if self.n != other.n {
            return Err(FrameError::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.steps() != other.steps() {
            return Err(FrameError::IndexMismatch(format!(
                "steps {:?} vs {:?}",
                self.steps(),
                other.steps()
            )));
        }
        Ok(())
    }
}

/// Multiplication by e^{−2πi t m/N} (translation by t samples).
fn translate(v: &CVector, t: usize) -> CVector {
    let n = v.len();
    let half = (n / 2) as i64;
    CVector::from_fn(n, |i, _| {
        let m = i as i64 - half;
        let r = (t as i64 * m).rem_euclid(n as i64);
        v[i] * Complex64::from_polar(1.0, -2.0 * PI * r as f64 / n as f64)
    })
}

/// a·b* through four real products, which run on the blocked f64 kernel.
fn mul_adjoint(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re).transpose(), b.map(|z| -z.im).transpose());
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    mul_adjoint(a, &b.adjoint())
}

/// Θ_{H,G} = Σ_p Σ_k (T_{s_p k} g_p)(T_{s_p k} h_p)*, i.e. Y·X*.
pub fn assemble_grammian(h: &FiniteSystem, g: &FiniteSystem) -> Result<CMatrix> {
    h.check_shape(g)?;
    Ok(mul_adjoint(&g.analysis_matrix(), &h.analysis_matrix()))
}

/// Σ_p Σ_{k < L_p} (T_{d_p k} g_p)(T_{c_p k} h_p)* with L_p the common period
/// of both translation groups; channels may use different steps.
pub fn assemble_cross(h: &FiniteSystem, g: &FiniteSystem) -> Result<CMatrix> {
    if h.n != g.n {
        return Err(FrameError::DimensionMismatch { expected: h.n, found: g.n });
    }
    if h.channels.len() != g.channels.len() {
        return Err(FrameError::IndexMismatch(format!(
            "{} vs {} channels",
            h.channels.len(),
            g.channels.len()
        )));
    }
    let n = h.n;
    let mut theta = CMatrix::zeros(n, n);
    for (hc, gc) in h.channels.iter().zip(&g.channels) {
        let period = (n / hc.step).lcm(&(n / gc.step));
        let mut x = CMatrix::zeros(n, period);
        let mut y = CMatrix::zeros(n, period);
        for k in 0..period {
            x.set_column(k, &translate(&hc.vector, (hc.step * k) % n));
            y.set_column(k, &translate(&gc.vector, (gc.step * k) % n));
        }
        theta += mul_adjoint(&y, &x);
    }
    Ok(theta)
}

/// Multiplication by e^{−2πi s m/N}, the model translation by s samples.
pub fn shift_matrix(n: usize, s: usize) -> CMatrix {
    let ones = CVector::from_element(n, Complex64::new(1.0, 0.0));
    CMatrix::from_diagonal(&translate(&ones, s))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierRecord {
    /// Largest off-diagonal magnitude.
    pub offdiag_norm: f64,
    pub diagonal: Vec<Complex64>,
}

/// In the model, Θ commutes with every translation iff it is diagonal.
pub fn multiplier_test(theta: &CMatrix) -> MultiplierRecord {
    let mut off = 0.0f64;
    for (i, j) in (0..theta.nrows()).flat_map(|i| (0..theta.ncols()).map(move |j| (i, j))) {
        if i != j {
            off = off.max(theta[(i, j)].norm());
        }
    }
    MultiplierRecord {
        offdiag_norm: off,
        diagonal: theta.diagonal().iter().copied().collect(),
    }
}

/// Finite-model upper frame bound: the largest eigenvalue of X X*.
pub fn bessel_bound(sys: &FiniteSystem) -> f64 {
    let x = sys.analysis_matrix();
    let frame = mul_adjoint(&x, &x);
    frame.symmetric_eigenvalues().iter().fold(0.0, |a, &b| a.max(b))
}

/// w_f(x) = ⟨Θ T_x f, T_x f⟩ for every cyclic shift x.
pub fn translation_wobble(theta: &CMatrix, f: &CVector) -> CVector {
    let n = f.len();
    CVector::from_fn(n, |x, _| {
        let tf = translate(f, x);
        (theta * &tf).dotc(&tf)
    })
    .map(|z| z.conj())
}

/// Coefficients c_d of w(x) = Σ_d c_d e^{2πi x d/N}; index d is the bin offset
/// m′ − m mod N, i.e. the frequency α = d·B/N.
pub fn bohr_coefficients(w: &CVector) -> CVector {
    let n = w.len();
    let mut buf: Vec<Complex64> = w.iter().copied().collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    CVector::from_vec(buf) / Complex64::new(n as f64, 0.0)
}

/// max_x |w(x) − w(0)|.
pub fn wobble_spread(w: &CVector) -> f64 {
    w.iter().map(|z| (z - w[0]).norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitRecord {
    pub b_norm: f64,
    pub c_norm: f64,
    pub commutes: bool,
}

/// Blocks ‖P Θ P^⊥‖ and ‖P^⊥ Θ P‖ for a diagonal 0/1 projection `p`.
pub fn projection_split_test(theta: &CMatrix, p: &[f64], tol: f64) -> Result<SplitRecord> {
    if p.len() != theta.nrows() {
        return Err(FrameError::DimensionMismatch { expected: theta.nrows(), found: p.len() });
    }
    if let Some(x) = p.iter().find(|&&x| x != 0.0 && x != 1.0) {
        return Err(FrameError::InvalidParameter(format!("projection entry {x} is not 0 or 1")));
    }
    let (mut b, mut c) = (0.0, 0.0);
    for i in 0..p.len() {
        for j in 0..p.len() {
            let z = theta[(i, j)].norm_sqr();
            if p[i] == 1.0 && p[j] == 0.0 {
                b += z;
            } else if p[i] == 0.0 && p[j] == 1.0 {
                c += z;
            }
        }
    }
    let (b_norm, c_norm) = (f64::sqrt(b), f64::sqrt(c));
    Ok(SplitRecord {
        b_norm,
        c_norm,
        commutes: b_norm <= tol && c_norm <= tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrip {
    pub v_err: f64,
    pub w_err: f64,
    /// Preconditions that failed; the errors are still computed.
    pub violated: Vec<String>,
}

/// Encodes c_j = ⟨v, x_j⟩ + ⟨w, y_j⟩ and decodes ṽ = Σ c_j x_j, w̃ = Σ c_j y_j.
pub fn multiaccess_roundtrip(x: &FiniteSystem, y: &FiniteSystem, v: &CVector, w: &CVector, tol: f64) -> Result<RoundTrip> {
    x.check_shape(y)?;
    for z in [v, w] {
        if z.len() != x.n {
            return Err(FrameError::DimensionMismatch { expected: x.n, found: z.len() });
        }
    }
    let (xm, ym) = (x.analysis_matrix(), y.analysis_matrix());
    let px = mul_adjoint(&xm, &xm);
    let py = mul_adjoint(&ym, &ym);
    let mut violated = Vec::new();
    for (name, p) in [("x", &px), ("y", &py)] {
        if frobenius(&(mul(p, p) - p)) > tol {
            violated.push(format!("{name} is not Parseval on its range"));
        }
    }
    if frobenius(&mul_adjoint(&ym, &xm)) > tol {
        violated.push("x and y are not orthogonal".into());
    }
    if (&px * v - v).norm() > tol * v.norm().max(1.0) {
        violated.push("v is outside the range of x".into());
    }
    if (&py * w - w).norm() > tol * w.norm().max(1.0) {
        violated.push("w is outside the range of y".into());
    }
    let c = xm.adjoint() * v + ym.adjoint() * w;
    Ok(RoundTrip {
        v_err: (&xm * &c - v).norm(),
        w_err: (&ym * &c - w).norm(),
        violated,
    })
}

/// Whether Θ_{Y+tZ}*Θ_X = I.
pub fn dual_parametrization_check(x: &FiniteSystem, y: &FiniteSystem, z: &FiniteSystem, t: f64, tol: f64) -> Result<Verdict> {
    let yz = y.add_scaled(z, t)?;
    let theta = assemble_grammian(x, &yz)?;
    let n = theta.nrows();
    let defect = frobenius(&(theta - CMatrix::identity(n, n)));
    let mut v = Verdict::new(VerdictKind::Characterized);
    v.note("t", fmt_f(t));
    v.note("defect", fmt_f(defect));
    if defect > tol {
        v.violate("mixed Grammian equals identity", format!("t = {t}"), "matrix", Complex64::new(defect, 0.0));
    }
    Ok(v.finish())
}

/// max |Θ_{H,G}* − Θ_{G,H}|.
pub fn adjoint_check(h: &FiniteSystem, g: &FiniteSystem) -> Result<f64> {
    let a = assemble_grammian(h, g)?;
    let b = assemble_grammian(g, h)?;
    Ok(max_abs(&(a.adjoint() - b)))
}

/// max |Θ_{H,G} S_c − S_d Θ_{H,G}| for systems with one step each.
pub fn shift_relation_defect(h: &FiniteSystem, g: &FiniteSystem) -> Result<f64> {
    let single = |s: &FiniteSystem| -> Result<usize> {
        let steps = s.steps();
        if steps.iter().any(|&x| x != steps[0]) {
            return Err(FrameError::MixedLattices);
        }
        Ok(steps[0])
    };
    let (c, d) = (single(h)?, single(g)?);
    let theta = assemble_cross(h, g)?;
    let n = h.n;
    let (sc, sd) = (shift_matrix(n, c).diagonal(), shift_matrix(n, d).diagonal());
    // both shifts are diagonal: scale columns by S_c and rows by S_d
    let defect = CMatrix::from_fn(n, n, |i, j| theta[(i, j)] * sc[j] - sd[i] * theta[(i, j)]);
    Ok(max_abs(&defect))
}

/// Band compression of Σ_k ⟨·, T_{ck} h⟩ T_{ck} g for raw samples h, g of
/// length r·N (r stacked components): entry (j m′, i m) is
/// (1/c)·g_j(ξ_{m′}) conj(h_i(ξ_m)) when ξ_{m′} − ξ_m ∈ (1/c)ℤ.
fn periodized(h: &CVector, g: &CVector, c: &Q, model: &FiniteModel) -> Result<CMatrix> {
    let n = model.n;
    // alias period in bins
    let t = Q::from_integer((n as i64).into()) / (c * model.bandwidth());
    let period = if t >= Q::from_integer((n as i64).into()) {
        None
    } else if t.is_integer() {
        t.to_integer().to_i64()
    } else {
        return Err(FrameError::ModelStep { step: fmt_q(&(c * model.bandwidth())), n });
    };
    let w = 1.0 / to_f64(c);
    let len = h.len();
    let mut out = CMatrix::zeros(len, len);
    let hs: Vec<usize> = (0..len).filter(|&i| h[i] != Complex64::zero()).collect();
    for jp in (0..len).filter(|&j| g[j] != Complex64::zero()) {
        for &i in &hs {
            let d = (jp % n) as i64 - (i % n) as i64;
            let hit = match period {
                None => d == 0,
                Some(p) => d % p == 0,
            };
            if hit {
                out[(jp, i)] = g[jp] * h[i].conj() * w;
            }
        }
    }
    Ok(out)
}

fn scalar_dilation(sys: &AffineSystem) -> Result<Q> {
    let a = sys
        .dilation
        .matrix()
        .is_scalar_1d()
        .cloned()
        .ok_or(FrameError::DimensionMismatch { expected: 1, found: sys.dim() })?;
    if !sys.translation.is_identity() {
        return Err(FrameError::InvalidParameter("the oracle needs translation lattice X = I".into()));
    }
    Ok(a)
}

/// Inner and outer radius of a class-D support.
fn radii(g: &SpectralGenerator) -> Result<Option<(f64, f64)>> {
    if !g.in_class_d() {
        return Err(FrameError::NotClassD);
    }
    Ok(g.support_hull().map(|h| {
        let r = g
            .support()
            .iter()
            .map(|b| to_f64(&b.inf_norm_lower()))
            .fold(f64::INFINITY, f64::min);
        (r, to_f64(&h.inf_norm_upper()))
    }))
}

/// Σ_{n ≥ from} of the band compressions of Σ_z ⟨·, D_aⁿ T_z ψ⟩ D_aⁿ T_z φ.
fn scale_sum(psi: &SpectralGenerator, phi: &SpectralGenerator, a: &Q, from: i64, model: &FiniteModel, opts: &CheckOptions) -> Result<CMatrix> {
    let n = model.n;
    let mut out = CMatrix::zeros(n, n);
    let (Some((rp, _)), Some((rf, _))) = (radii(psi)?, radii(phi)?) else {
        return Ok(out);
    };
    let top = to_f64(model.bandwidth()) / 2.0;
    let af = to_f64(&a.abs());
    for j in from.. {
        // a^{−j}·|ξ| stays below the inner radius for every bin
        if top * af.powi(-(j as i32)) < rp.min(rf) {
            break;
        }
        if j - from > opts.j_cap as i64 {
            return Err(FrameError::NotFinitelyComputable(format!("scale sum did not end within {} scales", opts.j_cap)));
        }
        let s = q_pow(a, -j);
        let gain = to_f64(&q_pow(&a.abs(), -j)).sqrt();
        let h = CVector::from_vec(model.samples_at(psi, &s)?) * Complex64::new(gain, 0.0);
        let g = CVector::from_vec(model.samples_at(phi, &s)?) * Complex64::new(gain, 0.0);
        out += periodized(&h, &g, &q_pow(&a.abs(), -j), model)?;
    }
    Ok(out)
}

/// max |Θ⁺(aB) − Θ⁺(B) − Θ⁰(B)| where Θ⁺ sums the positive scales and Θ⁰ is
/// the integer-translate Grammian, assembled from rank-one terms. Since D_a is
/// the identity between the models (N, B) and (N, aB), this is the finite form
/// of D_a⁻¹ Θ⁺ D_a = Θ⁺ + Θ⁰.
pub fn telescoping_defect(psi: &SpectralGenerator, phi: &SpectralGenerator, a: &Q, model: &FiniteModel, opts: &CheckOptions) -> Result<f64> {
    if !a.is_integer() || a.abs() <= Q::one() {
        return Err(FrameError::NotExpansive);
    }
    let wide = model.dilated(a)?;
    let left = scale_sum(psi, phi, a, 1, &wide, opts)?;
    let plus = scale_sum(psi, phi, a, 1, model, opts)?;
    let zero = assemble_grammian(
        &FiniteSystem::new(model.n, vec![(model.step(&Q::one())?, sample_model(psi, model)? * Complex64::new(model.unit(), 0.0))])?,
        &FiniteSystem::new(model.n, vec![(model.step(&Q::one())?, sample_model(phi, model)? * Complex64::new(model.unit(), 0.0))])?,
    )?;
    Ok(max_abs(&(left - plus - zero)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperwaveletOracle {
    /// max |Θ − I| over bins with ξ ≠ 0.
    pub defect: f64,
    /// Scales assembled from rank-one terms.
    pub rank_one_scales: Vec<i64>,
    /// Scales too fine for the model's translation group, added as exact band compressions.
    pub compressed_scales: Vec<i64>,
    pub theta: CMatrix,
}

/// Θ = Σ_n Σ_k x_{n,k} x_{n,k}* on ℂᴺ ⊕ … ⊕ ℂᴺ with x_{n,k} = (D_aⁿ T_k ψ_i)_i.
/// All components must share one integer dilation a and X = I.
pub fn superwavelet_oracle(systems: &[AffineSystem], model: &FiniteModel, opts: &CheckOptions) -> Result<SuperwaveletOracle> {
    let first = systems.first().ok_or_else(|| FrameError::Empty("superwavelet components".into()))?;
    let a = scalar_dilation(first)?;
    let mut gens = Vec::new();
    for s in systems {
        if scalar_dilation(s)? != a {
            return Err(FrameError::InvalidParameter("the superwavelet oracle needs a shared dilation".into()));
        }
        if s.r() != 1 {
            return Err(FrameError::InvalidParameter("each superwavelet component has one generator".into()));
        }
        gens.push(s.generators[0].clone());
    }
    let n = model.n;
    let r = gens.len();
    let mut inner = f64::INFINITY;
    let mut outer = 0.0f64;
    for g in &gens {
        if let Some((lo, hi)) = radii(g)? {
            inner = inner.min(lo);
            outer = outer.max(hi);
        }
    }
    let af = to_f64(&a.abs());
    let top = to_f64(model.bandwidth()) / 2.0;
    let spacing = to_f64(&model.spacing());
    let mut theta = CMatrix::zeros(r * n, r * n);
    let mut rank_one_scales = Vec::new();
    let mut compressed_scales = Vec::new();
    if outer > 0.0 {
        // scale j carries supports aʲ·[inner, outer]; keep those reaching a nonzero bin inside the band
        let lo = ((spacing / outer).ln() / af.ln()).floor() as i64 - 1;
        let hi = ((top / inner).ln() / af.ln()).ceil() as i64 + 1;
        if (hi - lo) as usize > opts.j_cap {
            return Err(FrameError::TooLarge(format!("{} scales", hi - lo)));
        }
        let unit = model.unit();
        for j in lo..=hi {
            let c = q_pow(&a.abs(), -j);
            let scale = q_pow(&a, -j);
            let mut raw = CVector::zeros(r * n);
            for (i, g) in gens.iter().enumerate() {
                let dil = g.compose_linear(&crate::matrix::RatMatrix::scalar(1, scale.clone()), &c)?;
                let band = RatBox::interval(-(model.bandwidth() / two()), model.bandwidth() / two());
                let touching: Vec<_> = dil.support().iter().filter(|b| !b.intersect(&band).is_empty()).collect();
                if touching.is_empty() {
                    continue;
                }
                if touching.iter().any(|b| b.intersect(&band) != **b) {
                    return Err(FrameError::SupportOverflow {
                        support: fmt_boxes(dil.support()),
                        half: fmt_q(&(model.bandwidth() / two())),
                    });
                }
                for m in 0..n {
                    raw[i * n + m] = dil.evaluate(&[model.xi(m)])?;
                }
            }
            if raw.iter().all(|z| *z == Complex64::zero()) {
                continue;
            }
            match model.step(&c) {
                Ok(s) => {
                    let u = raw * Complex64::new(unit, 0.0);
                    let mut x = CMatrix::zeros(r * n, n / s);
                    for k in 0..n / s {
                        for i in 0..r {
                            let block = translate(&u.rows(i * n, n).into_owned(), s * k);
                            x.view_mut((i * n, k), (n, 1)).copy_from(&block);
                        }
                    }
                    theta += mul_adjoint(&x, &x);
                    rank_one_scales.push(j);
                }
                Err(_) => {
                    theta += periodized(&raw, &raw, &c, model)?;
                    compressed_scales.push(j);
                }
            }
        }
    }
    let zero_bin = n / 2;
    let mut defect = 0.0f64;
    for row in 0..r * n {
        for col in 0..r * n {
            if row % n == zero_bin || col % n == zero_bin {
                continue;
            }
            let target = if row == col { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
            defect = defect.max((theta[(row, col)] - target).norm());
        }
    }
    Ok(SuperwaveletOracle {
        defect,
        rank_one_scales,
        compressed_scales,
        theta,
    })
}

/// Sparse CSV dump with columns row,col,re,im of entries above `threshold`.
pub fn matrix_csv(m: &CMatrix, threshold: f64) -> String {
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if z.norm() > threshold {
                out.push_str(&format!("{i},{j},{},{}\n", fmt_f(z.re), fmt_f(z.im)));
            }
        }
    }
    out
}
