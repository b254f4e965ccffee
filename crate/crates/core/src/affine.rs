//! Affine and quasi-affine systems D_Aⁿ T_{Xz} ψ_i: Calderón sums, the t_q
//! cross terms, equal- and mixed-dilation orthogonality, and Parseval
//! superwavelets.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{FrameError, Result};
use crate::geometry::{subtract, RatBox};
use crate::grammian::{closed_hull, SystemEntry, TranslationSystem};
use crate::lattice::{enumerate_q, fmt_point, in_lattice, DilationMatrix};
use crate::matrix::{AffineMap, ContractionBound, RatMatrix};
use crate::rational::{q_max, q_min, to_f64, Q};
use crate::spectral::{dilate_index_range, Mode, SpectralGenerator};
use crate::symbol::{resolve_mode, ProductTerm, SymbolFunction};
use crate::verdict::{CheckOptions, Verdict, VerdictKind};

pub const COND_TQ: &str = "dilated cross terms vanish";
pub const COND_CALDERON_ZERO: &str = "Calderon sum vanishes";
pub const COND_CALDERON_DELTA: &str = "Calderon sum equals delta";
pub const COND_TRANSLATES: &str = "translate products vanish";
pub const COND_POSITIVE_SCALES: &str = "positive-scale products vanish";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Affine,
    /// Scales n < 0 use the renormalized dilation |det A|ⁿ f(Aⁿ·) and sit on the lattice X.
    QuasiAffine,
}

#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub dilation: DilationMatrix,
    pub translation: RatMatrix,
    pub generators: Vec<Arc<SpectralGenerator>>,
    pub convention: Convention,
}

impl AffineSystem {
    pub fn new(dilation: RatMatrix, translation: RatMatrix, generators: Vec<SpectralGenerator>, convention: Convention) -> Result<Self> {
        let dilation = DilationMatrix::expansive(dilation)?;
        let d = dilation.matrix().dim();
        if translation.dim() != d {
            return Err(FrameError::DimensionMismatch {
                expected: d,
                found: translation.dim(),
            });
        }
        if translation.det().is_zero() {
            return Err(FrameError::Singular);
        }
        if generators.is_empty() {
            return Err(FrameError::Empty("affine system generators".into()));
        }
        for g in &generators {
            if g.dim() != d {
                return Err(FrameError::DimensionMismatch { expected: d, found: g.dim() });
            }
        }
        Ok(AffineSystem {
            dilation,
            translation,
            generators: generators.into_iter().map(Arc::new).collect(),
            convention,
        })
    }

    /// 𝒰_A(Ψ) with X = I.
    pub fn standard(dilation: RatMatrix, generators: Vec<SpectralGenerator>) -> Result<Self> {
        let d = dilation.dim();
        Self::new(dilation, RatMatrix::identity(d), generators, Convention::Affine)
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn r(&self) -> usize {
        self.generators.len()
    }

    fn a_star(&self) -> RatMatrix {
        self.dilation.adjoint()
    }

    fn with_generators(&self, generators: Vec<Arc<SpectralGenerator>>) -> Self {
        AffineSystem {
            generators,
            ..self.clone()
        }
    }
}

/// The X = I system with dilation X⁻¹AX and generators D_X ψ_i,
/// whose transforms are |det X|^{-1/2} ψ̂_i(X′ξ).
pub fn conjugate_system(sys: &AffineSystem) -> Result<AffineSystem> {
    let x = &sys.translation;
    let xinv = x.inverse()?;
    let a = xinv.mul(sys.dilation.matrix()).mul(x);
    let xd = x.dual()?;
    let factor = Q::one() / x.abs_det();
    let generators = sys
        .generators
        .iter()
        .map(|g| g.compose_linear(&xd, &factor).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    Ok(AffineSystem {
        dilation: DilationMatrix::expansive(a)?,
        translation: RatMatrix::identity(x.dim()),
        generators,
        convention: sys.convention,
    })
}

/// Scales `ns` of the system as a translation system with labels "n:i".
pub fn translation_slice(sys: &AffineSystem, ns: std::ops::RangeInclusive<i64>) -> Result<TranslationSystem> {
    let a = sys.dilation.matrix();
    let astar = sys.a_star();
    let mut entries = Vec::new();
    for n in ns {
        let renormalized = n < 0 && sys.convention == Convention::QuasiAffine;
        let (lattice, factor) = if renormalized {
            (sys.translation.clone(), Q::one())
        } else {
            (a.pow(-n)?.mul(&sys.translation), crate::spectral::det_gain(a, n))
        };
        let pre = astar.pow(-n)?;
        for (i, g) in sys.generators.iter().enumerate() {
            entries.push(SystemEntry {
                label: format!("{n}:{i}"),
                lattice: lattice.clone(),
                generator: Arc::new(g.compose_linear(&pre, &factor)?),
            });
        }
    }
    TranslationSystem::new(entries)
}

/// {ξ : 1 ≤ |ξ|_∞ < ‖A*‖_∞} as disjoint boxes; its A*-dilates cover ℝᵈ∖{0}.
pub fn fundamental_annulus(a: &DilationMatrix) -> Vec<RatBox> {
    let astar = a.adjoint();
    let d = astar.dim();
    let r = astar.inf_norm();
    let outer = RatBox::cube(d, -r.clone(), r);
    let inner = RatBox::cube(d, -Q::one(), Q::one());
    let mut out = subtract(&outer, &inner);
    out.sort();
    out
}

fn require_same_integer_dilation<'a>(a: &'a AffineSystem, b: &AffineSystem) -> Result<&'a DilationMatrix> {
    if a.dim() != b.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.dilation != b.dilation {
        return Err(FrameError::InvalidParameter(format!(
            "dilations differ ({} vs {}); use the mixed-dilation checks",
            a.dilation.matrix(),
            b.dilation.matrix()
        )));
    }
    if !a.dilation.is_integer() {
        return Err(FrameError::NotIntegerMatrix);
    }
    if a.r() != b.r() {
        return Err(FrameError::IndexMismatch(format!("{} vs {} generators", a.r(), b.r())));
    }
    Ok(&a.dilation)
}

fn require_identity_translation(systems: &[&AffineSystem]) -> Result<()> {
    for s in systems {
        if !s.translation.is_identity() {
            return Err(FrameError::InvalidParameter(format!(
                "translation matrix {} must be the identity here; conjugate the system first",
                s.translation
            )));
        }
    }
    Ok(())
}

fn mode_of(systems: &[&AffineSystem], opts: &CheckOptions) -> Result<Mode> {
    let gens: Vec<&SpectralGenerator> = systems.iter().flat_map(|s| s.generators.iter().map(|g| g.as_ref())).collect();
    resolve_mode(systems[0].dim(), &gens, opts)
}

fn require_class_d(systems: &[&AffineSystem]) -> Result<()> {
    if systems.iter().flat_map(|s| &s.generators).all(|g| g.in_class_d()) {
        Ok(())
    } else {
        Err(FrameError::NotClassD)
    }
}

/// conj(f(Mξ)) g(N(ξ + k)).
fn dilated_term(f: &Arc<SpectralGenerator>, m: &RatMatrix, g: &Arc<SpectralGenerator>, n: &RatMatrix, k: &[Q]) -> ProductTerm {
    ProductTerm {
        weight: Q::one(),
        f: f.clone(),
        fmap: AffineMap::linear(m.clone()),
        g: g.clone(),
        gmap: AffineMap {
            m: n.clone(),
            b: n.mul_vec(k),
        },
    }
}

fn calderon_parts(phi: &AffineSystem, psi: &AffineSystem, window: &[RatBox], opts: &CheckOptions) -> Result<(SymbolFunction, Vec<String>)> {
    if phi.dim() != psi.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    if phi.dilation != psi.dilation {
        return Err(FrameError::InvalidParameter("Calderon sums need a shared dilation".into()));
    }
    if phi.r() != psi.r() {
        return Err(FrameError::IndexMismatch(format!("{} vs {} generators", phi.r(), psi.r())));
    }
    require_class_d(&[phi, psi])?;
    let window: Vec<RatBox> = window.iter().filter(|b| !b.is_empty()).cloned().collect();
    if window.iter().any(|b| b.inf_norm_lower().is_zero()) {
        return Err(FrameError::WindowTouchesOrigin);
    }
    let astar = phi.a_star();
    let mut terms = Vec::new();
    let mut record = Vec::new();
    for (i, (f, g)) in phi.generators.iter().zip(&psi.generators).enumerate() {
        let jf = dilate_index_range(f, &astar, &window)?;
        let jg = dilate_index_range(g, &astar, &window)?;
        let js: Vec<i64> = jf.into_iter().filter(|j| jg.contains(j)).collect();
        record.push(format!("generator {i}: scales {}", fmt_range(&js)));
        for j in js {
            let m = astar.pow(j)?;
            terms.push(dilated_term(f, &m, g, &m, &vec![Q::zero(); phi.dim()]));
        }
    }
    let mode = mode_of(&[phi, psi], opts)?;
    Ok((SymbolFunction::from_terms(phi.dim(), terms, mode, opts)?.restrict(&window), record))
}

fn fmt_range(js: &[i64]) -> String {
    match (js.first(), js.last()) {
        (Some(a), Some(b)) if js.len() as i64 == b - a + 1 => format!("{a}..={b}"),
        (Some(_), Some(_)) => format!("{js:?}"),
        _ => "none".into(),
    }
}

/// s(ξ) = Σ_i Σ_{j∈ℤ} conj(φ̂_i(A*ʲξ)) ψ̂_i(A*ʲξ), evaluated on `window`.
pub fn calderon_mixed_symbol(phi: &AffineSystem, psi: &AffineSystem, window: &[RatBox], opts: &CheckOptions) -> Result<SymbolFunction> {
    Ok(calderon_parts(phi, psi, window, opts)?.0)
}

/// Scales j ≥ 0 whose term in t_q can be nonzero: A*ʲq ∈ supp ψ̂_i − supp φ̂_i.
fn tq_scales(phi: &AffineSystem, psi: &AffineSystem, q: &[Q]) -> Result<Vec<(usize, usize)>> {
    let astar = phi.a_star();
    let deltas: Vec<Option<RatBox>> = phi
        .generators
        .iter()
        .zip(&psi.generators)
        .map(|(f, g)| Some(g.support_hull()?.minus(&f.support_hull()?)))
        .collect();
    let stop = scale_horizon(&astar, &deltas)?;
    let mut out = Vec::new();
    let mut v = q.to_vec();
    for j in 0..stop {
        for (i, d) in deltas.iter().enumerate() {
            if d.as_ref().is_some_and(|d| d.contains_closed(&v)) {
                out.push((i, j));
            }
        }
        v = astar.mul_vec(&v);
    }
    Ok(out)
}

/// For nonzero integer q: A*ʲq lies outside every box once j reaches the result.
fn scale_horizon(astar: &RatMatrix, boxes: &[Option<RatBox>]) -> Result<usize> {
    let r = boxes
        .iter()
        .flatten()
        .map(|b| to_f64(&b.inf_norm_upper()))
        .fold(0.0, f64::max);
    if r == 0.0 {
        return Ok(0);
    }
    Ok(ContractionBound::new(astar)?.horizon(1.0 / r))
}

/// t_q(ξ) = Σ_i Σ_{j≥0} conj(φ̂_i(A*ʲξ)) ψ̂_i(A*ʲ(ξ + q)).
pub fn affine_cross_term(phi: &AffineSystem, psi: &AffineSystem, q: &[Q], opts: &CheckOptions) -> Result<SymbolFunction> {
    let a = require_same_integer_dilation(phi, psi)?;
    require_identity_translation(&[phi, psi])?;
    require_class_d(&[phi, psi])?;
    if q.len() != phi.dim() || !q.iter().all(|x| x.is_integer()) {
        return Err(FrameError::InvalidParameter(format!("q = {} must be an integer vector", fmt_point(q))));
    }
    if in_lattice(&a.adjoint(), q)? {
        return Err(FrameError::NotCosetRepresentative(fmt_point(q)));
    }
    let astar = phi.a_star();
    let terms = tq_scales(phi, psi, q)?
        .into_iter()
        .map(|(i, j)| {
            let m = astar.pow(j as i64)?;
            Ok(dilated_term(&phi.generators[i], &m, &psi.generators[i], &m, q))
        })
        .collect::<Result<Vec<_>>>()?;
    SymbolFunction::from_terms(phi.dim(), terms, mode_of(&[phi, psi], opts)?, opts)
}

/// Closed box holding every q for which some t_q term can be nonzero.
pub(crate) fn q_box(phi: &AffineSystem, psi: &AffineSystem) -> Result<Option<RatBox>> {
    let astar = phi.a_star();
    let deltas: Vec<Option<RatBox>> = phi
        .generators
        .iter()
        .zip(&psi.generators)
        .map(|(f, g)| Some(g.support_hull()?.minus(&f.support_hull()?)))
        .collect();
    let stop = scale_horizon(&astar, &deltas)?;
    let zero = vec![Q::zero(); phi.dim()];
    let mut boxes = Vec::new();
    for j in 0..stop.max(1) {
        let inv = astar.pow(-(j as i64))?;
        boxes.extend(deltas.iter().flatten().map(|d| d.image(&inv, &zero)));
    }
    Ok(closed_hull(&boxes))
}

/// Adds a violation for every q whose t_q is not a.e. zero.
fn check_tq(v: &mut Verdict, phi: &AffineSystem, psi: &AffineSystem, tag: &str, opts: &CheckOptions) -> Result<()> {
    let Some(bx) = q_box(phi, psi)? else {
        v.record(format!("{tag}q box: empty"));
        return Ok(());
    };
    let qs = enumerate_q(&phi.dilation, &bx, opts.enumeration_limit)?;
    v.record(format!("{tag}q box {bx}: {} coset points", qs.len()));
    for q in qs {
        let t = affine_cross_term(phi, psi, &q, opts)?;
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(COND_TQ, format!("{tag}q = {}", fmt_point(&q)), w.location, w.value);
        }
    }
    Ok(())
}

/// Orthogonality of 𝒰_A(Ψ) and 𝒰_A(Φ) (equivalently of the quasi-affine pair):
/// Σ_i Σ_{j≥0} conj(ψ̂_i(A*ʲξ)) φ̂_i(A*ʲ(ξ+q)) ≡ 0 for every q ∉ A*ℤᵈ and the
/// Calderón sum Σ_i Σ_j conj(ψ̂_i(A*ʲξ)) φ̂_i(A*ʲξ) ≡ 0.
pub fn check_affine_orthogonality(psi: &AffineSystem, phi: &AffineSystem, opts: &CheckOptions) -> Result<Verdict> {
    let a = require_same_integer_dilation(psi, phi)?;
    require_identity_translation(&[psi, phi])?;
    let mut v = Verdict::new(VerdictKind::Characterized);
    check_tq(&mut v, psi, phi, "", opts)?;
    let annulus = fundamental_annulus(a);
    let (s, rec) = calderon_parts(psi, phi, &annulus, opts)?;
    for r in rec {
        v.record(format!("annulus {}: {r}", fmt_boxes(&annulus)));
    }
    if let Some(w) = s.zero_witness(opts.tol_zero) {
        v.violate(COND_CALDERON_ZERO, "symbol", w.location, w.value);
    }
    Ok(v.finish())
}

fn fmt_boxes(b: &[RatBox]) -> String {
    b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" u ")
}

/// Whether θ_Φ*θ_Ψ = Σ ⟨·, D_Aⁿ T_z ψ_i⟩ D_Aⁿ T_z φ_i is a Fourier multiplier,
/// and its symbol on the fundamental annulus when it is.
#[derive(Clone, Debug)]
pub struct AqeClassification {
    pub commutant_holds: bool,
    pub symbol: Option<SymbolFunction>,
    pub annulus: Vec<RatBox>,
    pub verdict: Verdict,
}

pub fn classify_aqe(psi: &AffineSystem, phi: &AffineSystem, opts: &CheckOptions) -> Result<AqeClassification> {
    let a = require_same_integer_dilation(psi, phi)?;
    require_identity_translation(&[psi, phi])?;
    let mut v = Verdict::new(VerdictKind::Characterized);
    check_tq(&mut v, psi, phi, "", opts)?;
    let v = v.finish();
    let annulus = fundamental_annulus(a);
    let symbol = if v.holds {
        Some(calderon_mixed_symbol(psi, phi, &annulus, opts)?)
    } else {
        None
    };
    Ok(AqeClassification {
        commutant_holds: v.holds,
        symbol,
        annulus,
        verdict: v,
    })
}

type ShiftMap = BTreeMap<Vec<Q>, Vec<(usize, usize)>>;

/// For each k, the (generator, scale) pairs whose product
/// conj(ψ̂_i(Mξ)) φ̂_i(N(ξ+k)) can be nonzero, from box arithmetic per support piece.
fn feasible_shifts(
    psi: &[Arc<SpectralGenerator>],
    phi: &[Arc<SpectralGenerator>],
    scales: &[(RatMatrix, RatMatrix)],
    limit: usize,
) -> Result<ShiftMap> {
    let mut by_k = ShiftMap::new();
    let mut visited = 0usize;
    for (s, (m, n)) in scales.iter().enumerate() {
        let zero = vec![Q::zero(); m.dim()];
        let (mi, ni) = (m.inverse()?, n.inverse()?);
        for (i, (f, g)) in psi.iter().zip(phi).enumerate() {
            for fb in f.support() {
                for gb in g.support() {
                    let kb = gb.image(&ni, &zero).minus(&fb.image(&mi, &zero));
                    for k in kb.integer_points(limit)? {
                        visited += 1;
                        if visited > limit {
                            return Err(FrameError::TooLarge(format!("{visited} shift candidates")));
                        }
                        let k: Vec<Q> = k.into_iter().map(Q::from_integer).collect();
                        let e = by_k.entry(k).or_default();
                        if !e.contains(&(i, s)) {
                            e.push((i, s));
                        }
                    }
                }
            }
        }
    }
    Ok(by_k)
}

/// Adds violations of Σ_i Σ_{(M,N)} conj(ψ̂_i(Mξ)) φ̂_i(N(ξ+k)) ≡ 0 for all k ∈ ℤᵈ,
/// where each (M, N) is one scale of the sum.
#[allow(clippy::too_many_arguments)]
fn check_shifted_products(
    v: &mut Verdict,
    cond: &str,
    tag: &str,
    psi: &[Arc<SpectralGenerator>],
    phi: &[Arc<SpectralGenerator>],
    scales: &[(RatMatrix, RatMatrix)],
    mode: Mode,
    opts: &CheckOptions,
) -> Result<()> {
    let dim = psi[0].dim();
    let by_k = feasible_shifts(psi, phi, scales, opts.enumeration_limit)?;
    v.record(format!("{tag}{cond}: {} scales, {} candidate shifts", scales.len(), by_k.len()));
    for (k, pairs) in by_k {
        let terms = pairs
            .iter()
            .map(|&(i, s)| dilated_term(&psi[i], &scales[s].0, &phi[i], &scales[s].1, &k))
            .collect();
        let t = SymbolFunction::from_terms(dim, terms, mode, opts)?;
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(cond, format!("{tag}k = {}", fmt_point(&k)), w.location, w.value);
        }
    }
    Ok(())
}

/// Magnitude range [min |ξ|, max |ξ|] of a 1-D class-D interval.
fn magnitudes(b: &RatBox) -> (Q, Q) {
    let (a, c) = (b.lo[0].abs(), b.hi[0].abs());
    (q_min(&a, &c), q_max(&a, &c))
}

/// Last positive scale at which Σ_{j>0} conj(ψ̂(A*ʲX′ξ)) φ̂(B*ʲY′(ξ+k)) can have a
/// nonzero term, in dimension one.
fn positive_scale_end_1d(
    psi: &[Arc<SpectralGenerator>],
    phi: &[Arc<SpectralGenerator>],
    a: &Q,
    x: &Q,
    b: &Q,
    y: &Q,
    limit: usize,
) -> Result<usize> {
    // the ψ-side set at scale j has |ξ| ∈ |I| / (|a|ʲ|x|), the φ-side |ξ + k| ∈ |J| / (|b|ʲ|y|)
    let (a, b, x, y) = (a.abs(), b.abs(), x.abs(), y.abs());
    let rho = &b / &a;
    let mut end = 0usize;
    let mut hi_psi = Q::zero();
    let mut hi_phi = Q::zero();
    for (f, g) in psi.iter().zip(phi) {
        for fb in f.support() {
            let (ilo, ihi) = magnitudes(fb);
            hi_psi = q_max(&hi_psi, &ihi);
            for gb in g.support() {
                let (jlo, jhi) = magnitudes(gb);
                hi_phi = q_max(&hi_phi, &jhi);
                // overlap at k = 0 needs L ≤ ρʲ ≤ U
                let upper = &jhi * &x / (&ilo * &y);
                let lower = &jlo * &x / (&ihi * &y);
                let mut p = rho.clone();
                let mut last = 0usize;
                if rho.is_one() {
                    if lower <= Q::one() && Q::one() <= upper {
                        return Err(FrameError::NotFinitelyComputable(
                            "equal dilation moduli keep the k = 0 products overlapping at every scale".into(),
                        ));
                    }
                    continue;
                }
                for j in 1..=limit {
                    let inside = lower <= p && p <= upper;
                    if inside {
                        last = j;
                    }
                    let moving_away = if rho > Q::one() { p > upper } else { p < lower };
                    if moving_away {
                        break;
                    }
                    p = &p * &rho;
                }
                end = end.max(last);
            }
        }
    }
    // k ≠ 0 needs |k| ≤ max|ξ + k| + max|ξ|, which drops below one eventually
    let mut sa = Q::one();
    let mut sb = Q::one();
    for j in 1..=limit {
        sa = &sa * &a;
        sb = &sb * &b;
        let reach = &hi_phi / (&sb * &y) + &hi_psi / (&sa * &x);
        if reach < Q::one() {
            return Ok(end.max(j - 1));
        }
    }
    Err(FrameError::TooLarge("positive-scale sum does not terminate within the enumeration limit".into()))
}

/// Ã = X⁻¹AX and B̃ = Y⁻¹BY for the mixed-dilation results.
fn conjugated_dilations(psi: &AffineSystem, phi: &AffineSystem) -> Result<(RatMatrix, RatMatrix)> {
    let at = psi.translation.inverse()?.mul(psi.dilation.matrix()).mul(&psi.translation);
    let bt = phi.translation.inverse()?.mul(phi.dilation.matrix()).mul(&phi.translation);
    Ok((at, bt))
}

fn require_mixed_pair(psi: &AffineSystem, phi: &AffineSystem) -> Result<()> {
    if psi.dim() != phi.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: psi.dim(),
            found: phi.dim(),
        });
    }
    if psi.r() != phi.r() {
        return Err(FrameError::IndexMismatch(format!("{} vs {} generators", psi.r(), phi.r())));
    }
    Ok(())
}

/// Σ_i conj(ψ̂_i(X′ξ)) φ̂_i(Y′(ξ+k)) ≡ 0 for all k.
fn check_translates(v: &mut Verdict, tag: &str, psi: &AffineSystem, phi: &AffineSystem, mode: Mode, opts: &CheckOptions) -> Result<()> {
    let scales = vec![(psi.translation.dual()?, phi.translation.dual()?)];
    check_shifted_products(v, COND_TRANSLATES, tag, &psi.generators, &phi.generators, &scales, mode, opts)
}

/// Σ_i Σ_{j>0} conj(ψ̂_i(A*ʲX′ξ)) φ̂_i(B*ʲY′(ξ+k)) ≡ 0 for all k.
fn check_positive_scales(v: &mut Verdict, tag: &str, psi: &AffineSystem, phi: &AffineSystem, mode: Mode, opts: &CheckOptions) -> Result<()> {
    require_class_d(&[psi, phi])?;
    let (xd, yd) = (psi.translation.dual()?, phi.translation.dual()?);
    let (astar, bstar) = (psi.a_star(), phi.a_star());
    let dim = psi.dim();
    let end = if dim == 1 {
        positive_scale_end_1d(
            &psi.generators,
            &phi.generators,
            &astar.get(0, 0).clone(),
            &xd.get(0, 0).clone(),
            &bstar.get(0, 0).clone(),
            &yd.get(0, 0).clone(),
            opts.enumeration_limit,
        )?
    } else {
        opts.j_cap
    };
    let mut scales = Vec::new();
    let (mut am, mut bm) = (xd.clone(), yd.clone());
    for _ in 1..=end {
        am = astar.mul(&am);
        bm = bstar.mul(&bm);
        scales.push((am.clone(), bm.clone()));
    }
    // in higher dimensions the scan is only conclusive once the last scale is infeasible
    if dim > 1 {
        if let Some(last) = scales.last() {
            if !feasible_shifts(&psi.generators, &phi.generators, std::slice::from_ref(last), opts.enumeration_limit)?.is_empty() {
                return Err(FrameError::NotFinitelyComputable(format!(
                    "positive-scale products still feasible at j = {}",
                    opts.j_cap
                )));
            }
        }
    }
    v.record(format!("{tag}positive scales j = 1..={end}"));
    check_shifted_products(v, COND_POSITIVE_SCALES, tag, &psi.generators, &phi.generators, &scales, mode, opts)
}

/// Orthogonality of 𝒰^q_{A,X}(Ψ) and 𝒰^q_{B,Y}(Φ) when X⁻¹AX is an integer
/// matrix different from Y⁻¹BY.
pub fn check_quasi_affine_orthogonality(psi: &AffineSystem, phi: &AffineSystem, opts: &CheckOptions) -> Result<Verdict> {
    require_mixed_pair(psi, phi)?;
    let (at, bt) = conjugated_dilations(psi, phi)?;
    if !at.is_integer() {
        return Err(FrameError::NotIntegerMatrix);
    }
    if at == bt {
        return Err(FrameError::EqualDilations);
    }
    let mode = mode_of(&[psi, phi], opts)?;
    let mut v = Verdict::new(VerdictKind::Characterized);
    check_translates(&mut v, "", psi, phi, mode, opts)?;
    check_positive_scales(&mut v, "", psi, phi, mode, opts)?;
    Ok(v.finish())
}

/// Sufficient condition for orthogonality of 𝒰_{A,X}(Ψ) and 𝒰_{B,Y}(Φ):
/// Σ_i conj(ψ̂_i(X′ξ)) φ̂_i(Y′(ξ+k)) ≡ 0 for all k.
pub fn check_affine_sufficient(psi: &AffineSystem, phi: &AffineSystem, opts: &CheckOptions) -> Result<Verdict> {
    require_mixed_pair(psi, phi)?;
    let mode = mode_of(&[psi, phi], opts)?;
    let mut v = Verdict::new(VerdictKind::Sufficient);
    check_translates(&mut v, "", psi, phi, mode, opts)?;
    Ok(v.finish())
}

fn single(sys: &AffineSystem, i: usize) -> AffineSystem {
    sys.with_generators(vec![sys.generators[i].clone()])
}

/// Calderón identity Σ_n conj(ψ̂_j(A*ⁿξ)) ψ̂_i(A*ⁿξ) = δ_ij on the annulus and
/// vanishing t_q for the ordered pair (j, i).
fn check_parseval_pair(v: &mut Verdict, tag: &str, sj: &AffineSystem, si: &AffineSystem, delta: bool, opts: &CheckOptions) -> Result<()> {
    let annulus = fundamental_annulus(&si.dilation);
    let (s, rec) = calderon_parts(sj, si, &annulus, opts)?;
    for r in rec {
        v.record(format!("{tag}annulus {}: {r}", fmt_boxes(&annulus)));
    }
    let target = if delta { Q::one() } else { Q::zero() };
    let witness = if delta {
        s.equals_witness(&target, &annulus, opts.tol_zero)
    } else {
        s.zero_witness(opts.tol_zero)
    };
    if let Some(w) = witness {
        v.violate(COND_CALDERON_DELTA, format!("{tag}symbol"), w.location, w.value);
    }
    check_tq(v, sj, si, tag, opts)
}

/// Parseval superwavelet ψ_1 ⊕ … ⊕ ψ_r, each system carrying one generator.
///
/// With one shared dilation this is the full characterization. With several
/// dilations each component must itself be Parseval, and pairs with different
/// dilations must satisfy the translate and positive-scale conditions.
pub fn check_parseval_superwavelet(systems: &[AffineSystem], opts: &CheckOptions) -> Result<Verdict> {
    if systems.is_empty() {
        return Err(FrameError::Empty("superwavelet components".into()));
    }
    let dim = systems[0].dim();
    for s in systems {
        if s.r() != 1 {
            return Err(FrameError::InvalidParameter("each superwavelet component carries exactly one generator".into()));
        }
        if s.dim() != dim {
            return Err(FrameError::DimensionMismatch { expected: dim, found: s.dim() });
        }
        if !s.dilation.is_integer() {
            return Err(FrameError::NotIntegerMatrix);
        }
    }
    let refs: Vec<&AffineSystem> = systems.iter().collect();
    require_identity_translation(&refs)?;
    let mode = mode_of(&refs, opts)?;
    let equal = systems.iter().all(|s| s.dilation == systems[0].dilation);
    let mut v = Verdict::new(VerdictKind::Characterized);
    v.note("branch", if equal { "shared dilation" } else { "mixed dilations" });
    let r = systems.len();
    for i in 0..r {
        for j in 0..r {
            let tag = format!("pair ({}, {}) ", i + 1, j + 1);
            let (si, sj) = (single(&systems[i], 0), single(&systems[j], 0));
            if i == j {
                check_parseval_pair(&mut v, &tag, &sj, &si, true, opts)?;
            } else if si.dilation == sj.dilation {
                check_parseval_pair(&mut v, &tag, &sj, &si, false, opts)?;
            } else if i < j {
                // each unordered pair once: the conditions are symmetric under (i, j, k) ↦ (j, i, −k)
                check_translates(&mut v, &tag, &si, &sj, mode, opts)?;
                check_positive_scales(&mut v, &tag, &si, &sj, mode, opts)?;
            }
        }
    }
    Ok(v.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};
    use crate::spectral::{characteristic, frazier_jawerth, shannon_wavelet};

    fn dyadic(g: SpectralGenerator) -> AffineSystem {
        AffineSystem::standard(RatMatrix::scalar(1, q(2)), vec![g]).unwrap()
    }

    fn band(lo: Q, hi: Q) -> SpectralGenerator {
        characteristic(&[(-hi.clone(), -lo.clone()), (lo, hi)]).unwrap()
    }

    fn fj2() -> SpectralGenerator {
        frazier_jawerth(&q(2), &qr(1, 128)).unwrap()
    }

    fn fj3() -> SpectralGenerator {
        frazier_jawerth(&q(3), &qr(1, 27)).unwrap()
    }

    #[test]
    fn annulus_in_one_dimension() {
        let a = DilationMatrix::expansive(RatMatrix::scalar(1, q(2))).unwrap();
        let s: Vec<String> = fundamental_annulus(&a).iter().map(|b| b.to_string()).collect();
        assert_eq!(s, vec!["[-2, -1)", "[1, 2)"]);
    }

    #[test]
    fn shannon_calderon_is_one() {
        let sw = dyadic(shannon_wavelet());
        let opts = CheckOptions::default();
        let window = [RatBox::interval(qr(1, 4), qr(1, 2)), RatBox::interval(qr(-1, 2), qr(-1, 4))];
        let s = calderon_mixed_symbol(&sw, &sw, &window, &opts).unwrap();
        assert!(s.one_witness(&window, 0.0).is_none());
        assert!(matches!(
            calderon_mixed_symbol(&sw, &sw, &[RatBox::interval(q(0), q(1))], &opts),
            Err(FrameError::WindowTouchesOrigin)
        ));
    }

    #[test]
    fn shannon_tq_vanish() {
        let sw = dyadic(shannon_wavelet());
        let opts = CheckOptions::default();
        for qq in [-3, -1, 1, 3] {
            let t = affine_cross_term(&sw, &sw, &[q(qq)], &opts).unwrap();
            assert!(t.zero_witness(0.0).is_none());
        }
        assert!(matches!(
            affine_cross_term(&sw, &sw, &[q(2)], &opts),
            Err(FrameError::NotCosetRepresentative(_))
        ));
        assert!(matches!(
            affine_cross_term(&sw, &sw, &[q(0)], &opts),
            Err(FrameError::NotCosetRepresentative(_))
        ));
    }

    #[test]
    fn tq_matches_brute_force() {
        let f = dyadic(fj2());
        let g = dyadic(band(qr(1, 2), qr(3, 2)));
        let opts = CheckOptions::default();
        let t = affine_cross_term(&f, &g, &[q(1)], &opts).unwrap();
        assert!(t.zero_witness(0.0).is_some());
        let (fg, gg) = (fj2(), band(qr(1, 2), qr(3, 2)));
        for n in 1..200 {
            let xi = qr(n, 97) - q(1);
            let mut want = crate::rational::CQ::zero();
            let mut p = q(1);
            for _ in 0..40 {
                let a = fg.evaluate_exact(&(&p * &xi)).unwrap();
                let b = gg.evaluate_exact(&(&p * (&xi + q(1)))).unwrap();
                want = &want + &(&a.conj() * &b);
                p *= q(2);
            }
            assert_eq!(t.eval_exact(&xi).unwrap(), want, "xi = {xi}");
        }
    }

    #[test]
    fn consecutive_bands_are_orthogonal() {
        let s1 = dyadic(shannon_wavelet());
        let s2 = dyadic(band(qr(1, 8), qr(1, 4)));
        let opts = CheckOptions::default();
        assert!(check_affine_orthogonality(&s1, &s2, &opts).unwrap().holds);
        let v = check_affine_orthogonality(&s1, &s1, &opts).unwrap();
        assert!(!v.holds);
        assert!(v.violations_for(COND_CALDERON_ZERO).count() == 1);
        assert!(v.violations_for(COND_TQ).count() == 0);
    }

    #[test]
    fn aqe_for_shannon() {
        let sw = dyadic(shannon_wavelet());
        let c = classify_aqe(&sw, &sw, &CheckOptions::default()).unwrap();
        assert!(c.commutant_holds);
        let s = c.symbol.unwrap();
        assert!(s.one_witness(&c.annulus, 0.0).is_none());
    }

    #[test]
    fn aqe_failure_is_recorded() {
        // a band wider than one dyadic octave overlaps its own odd shifts
        let wide = dyadic(band(qr(1, 4), qr(5, 4)));
        let c = classify_aqe(&wide, &wide, &CheckOptions::default()).unwrap();
        assert!(!c.commutant_holds);
        assert!(c.symbol.is_none());
        assert!(c.verdict.violations.iter().any(|x| x.shift == "q = 1"));
    }

    #[test]
    fn fj_affine_and_quasi_affine_diverge() {
        let psi = dyadic(fj2());
        let phi = AffineSystem::standard(RatMatrix::scalar(1, q(3)), vec![fj3()]).unwrap();
        let opts = CheckOptions::default();
        assert!(check_affine_sufficient(&psi, &phi, &opts).unwrap().holds);
        let v = check_quasi_affine_orthogonality(&psi, &phi, &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violations_for(COND_TRANSLATES).count(), 0);
        let w: Vec<_> = v.violations_for(COND_POSITIVE_SCALES).collect();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].shift, "k = 0");
        assert!(w[0].value.re > 1e-6);
    }

    #[test]
    fn quasi_affine_errors() {
        let psi = dyadic(fj2());
        let opts = CheckOptions::default();
        assert_eq!(check_quasi_affine_orthogonality(&psi, &psi, &opts).unwrap_err(), FrameError::EqualDilations);
        let frac = AffineSystem::standard(RatMatrix::scalar(1, qr(5, 2)), vec![fj3()]).unwrap();
        assert_eq!(check_quasi_affine_orthogonality(&frac, &psi, &opts).unwrap_err(), FrameError::NotIntegerMatrix);
    }

    #[test]
    fn conjugation() {
        let sys = AffineSystem::new(
            RatMatrix::scalar(1, q(4)),
            RatMatrix::scalar(1, q(2)),
            vec![shannon_wavelet()],
            Convention::Affine,
        )
        .unwrap();
        let c = conjugate_system(&sys).unwrap();
        assert_eq!(c.dilation.matrix(), &RatMatrix::scalar(1, q(4)));
        assert!(c.translation.is_identity());
        assert_eq!(c.generators[0].gain_sq(), &qr(1, 2));
        assert_eq!(c.generators[0].support()[1], RatBox::interval(qr(1, 2), q(1)));
        let back = AffineSystem {
            translation: RatMatrix::scalar(1, qr(1, 2)),
            ..c
        };
        let round = conjugate_system(&back).unwrap();
        assert_eq!(round.generators[0].as_ref(), &shannon_wavelet());
        assert_eq!(round.dilation, sys.dilation);
    }

    #[test]
    fn shannon_superwavelet() {
        let opts = CheckOptions::default();
        let v = check_parseval_superwavelet(&[dyadic(shannon_wavelet())], &opts).unwrap();
        assert!(v.holds, "{:?}", v.violations);
    }

    #[test]
    fn two_band_superwavelet() {
        // each band alone tiles ℝ∖{0}, the cross Calderón sum vanishes, and all
        // supports sit inside (−1/2, 1/2) so no t_q term survives
        let opts = CheckOptions::default();
        let v = check_parseval_superwavelet(&[dyadic(shannon_wavelet()), dyadic(band(qr(1, 8), qr(1, 4)))], &opts).unwrap();
        assert_eq!(v.violations_for(COND_CALDERON_DELTA).count(), 0);
        assert!(v.holds, "{:?}", v.violations);
    }

    #[test]
    fn mixed_superwavelet_fj() {
        let opts = CheckOptions::default();
        let s2 = dyadic(fj2());
        let s3 = AffineSystem::standard(RatMatrix::scalar(1, q(3)), vec![fj3()]).unwrap();
        let v = check_parseval_superwavelet(&[s2, s3], &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violations_for(COND_TRANSLATES).count(), 0);
        assert!(v.violations_for(COND_POSITIVE_SCALES).count() > 0);
    }

    #[test]
    fn slice_lattices() {
        let sys = dyadic(shannon_wavelet());
        let t = translation_slice(&sys, -1..=1).unwrap();
        let lat: Vec<String> = t.entries().iter().map(|e| e.lattice.to_string()).collect();
        assert_eq!(lat.len(), 3);
        assert_eq!(t.entries()[0].lattice, RatMatrix::scalar(1, q(2)));
        assert_eq!(t.entries()[2].lattice, RatMatrix::scalar(1, qr(1, 2)));
        assert_eq!(t.entries()[2].generator.support()[1], RatBox::interval(qr(1, 2), q(1)));
    }
}
