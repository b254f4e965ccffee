//! Translation systems {T_{C_p k} g_p}: cross terms t_α, the multiplier
//! symbol s, and orthogonality, commutant and duality verdicts.
//!
//! Convention: the first system H is the analysis family (conjugated slot),
//! the second G the synthesis family, so that
//! Θ = Σ_p Σ_k ⟨·, T_{C_p k} h_p⟩ T_{C_p k} g_p.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{FrameError, Result};
use crate::geometry::{hull_of, RatBox, SpectralSet};
use crate::lattice::{enumerate_alpha, fmt_point, p_alpha, LatticeFamily};
use crate::matrix::{AffineMap, RatMatrix};
use crate::rational::{to_f64, Q};
use crate::spectral::{Mode, SpectralGenerator};
use crate::symbol::{resolve_mode, ProductTerm, SymbolFunction};
use crate::verdict::{CheckOptions, Verdict, VerdictKind};

pub const COND_COMMUTANT: &str = "translation commutant";
pub const COND_SYMBOL_ZERO: &str = "symbol vanishes";
pub const COND_SYMBOL_ONE: &str = "symbol equals one";
pub const COND_EQUAL_LATTICES: &str = "equal lattices";
pub const COND_CROSS_LATTICE: &str = "cross-lattice products vanish";
pub const COND_PERIODIZATION: &str = "periodization product vanishes";

#[derive(Clone, Debug)]
pub struct SystemEntry {
    pub label: String,
    pub lattice: RatMatrix,
    pub generator: Arc<SpectralGenerator>,
}

/// The generators g_p with their lattice matrices C_p.
#[derive(Clone, Debug)]
pub struct TranslationSystem {
    dim: usize,
    entries: Vec<SystemEntry>,
}

impl TranslationSystem {
    pub fn new(entries: Vec<SystemEntry>) -> Result<Self> {
        let dim = entries
            .first()
            .map(|e| e.generator.dim())
            .ok_or_else(|| FrameError::Empty("translation system".into()))?;
        for e in &entries {
            for found in [e.generator.dim(), e.lattice.dim()] {
                if found != dim {
                    return Err(FrameError::DimensionMismatch { expected: dim, found });
                }
            }
            if e.lattice.det().is_zero() {
                return Err(FrameError::Singular);
            }
        }
        let mut labels: Vec<&str> = entries.iter().map(|e| e.label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != entries.len() {
            return Err(FrameError::IndexMismatch("duplicate labels".into()));
        }
        Ok(TranslationSystem { dim, entries })
    }

    /// One generator on one lattice.
    pub fn single(lattice: RatMatrix, generator: SpectralGenerator) -> Result<Self> {
        Self::new(vec![SystemEntry {
            label: "0".into(),
            lattice,
            generator: Arc::new(generator),
        }])
    }

    /// Several generators sharing one lattice, labelled 0, 1, ...
    pub fn shared(lattice: RatMatrix, generators: Vec<SpectralGenerator>) -> Result<Self> {
        Self::new(
            generators
                .into_iter()
                .enumerate()
                .map(|(i, g)| SystemEntry {
                    label: i.to_string(),
                    lattice: lattice.clone(),
                    generator: Arc::new(g),
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[SystemEntry] {
        &self.entries
    }

    pub fn family(&self) -> LatticeFamily {
        LatticeFamily::new(self.entries.iter().map(|e| (e.label.clone(), e.lattice.clone())).collect())
            .expect("validated on construction")
    }

    /// The common lattice matrix, if every entry uses the same one.
    pub fn single_lattice(&self) -> Option<&RatMatrix> {
        let c = &self.entries[0].lattice;
        self.entries.iter().all(|e| &e.lattice == c).then_some(c)
    }

    fn generators(&self) -> impl Iterator<Item = &SpectralGenerator> {
        self.entries.iter().map(|e| e.generator.as_ref())
    }
}

/// H and G must be indexed by the same labels with the same lattices.
fn check_pair(h: &TranslationSystem, g: &TranslationSystem) -> Result<()> {
    if h.dim != g.dim {
        return Err(FrameError::DimensionMismatch {
            expected: h.dim,
            found: g.dim,
        });
    }
    if h.entries.len() != g.entries.len() {
        return Err(FrameError::IndexMismatch(format!(
            "{} analysis vs {} synthesis generators",
            h.entries.len(),
            g.entries.len()
        )));
    }
    for (a, b) in h.entries.iter().zip(&g.entries) {
        if a.label != b.label || a.lattice != b.lattice {
            return Err(FrameError::IndexMismatch(format!(
                "entry {} (lattice {}) vs {} (lattice {})",
                a.label, a.lattice, b.label, b.lattice
            )));
        }
    }
    Ok(())
}

fn pair_mode(h: &TranslationSystem, g: &TranslationSystem, opts: &CheckOptions) -> Result<Mode> {
    let gens: Vec<&SpectralGenerator> = h.generators().chain(g.generators()).collect();
    resolve_mode(h.dim, &gens, opts)
}

fn shift_terms(h: &TranslationSystem, g: &TranslationSystem, alpha: &[Q], ps: &[usize]) -> Vec<ProductTerm> {
    ps.iter()
        .map(|&p| {
            let (he, ge) = (&h.entries[p], &g.entries[p]);
            ProductTerm {
                weight: Q::one() / he.lattice.abs_det(),
                f: he.generator.clone(),
                fmap: AffineMap::identity(h.dim),
                g: ge.generator.clone(),
                gmap: AffineMap {
                    m: RatMatrix::identity(h.dim),
                    b: alpha.to_vec(),
                },
            }
        })
        .collect()
}

/// t_α(ξ) = Σ_{p∈𝒫_α} |det C_p|⁻¹ conj(ĥ_p(ξ)) ĝ_p(ξ + α).
pub fn cross_term(h: &TranslationSystem, g: &TranslationSystem, alpha: &[Q], opts: &CheckOptions) -> Result<SymbolFunction> {
    check_pair(h, g)?;
    if alpha.len() != h.dim {
        return Err(FrameError::DimensionMismatch {
            expected: h.dim,
            found: alpha.len(),
        });
    }
    let ps = p_alpha(&h.family(), alpha);
    SymbolFunction::from_terms(h.dim, shift_terms(h, g, alpha, &ps), pair_mode(h, g, opts)?, opts)
}

/// s(ξ) = Σ_p |det C_p|⁻¹ conj(ĥ_p(ξ)) ĝ_p(ξ).
pub fn multiplier_symbol(h: &TranslationSystem, g: &TranslationSystem, opts: &CheckOptions) -> Result<SymbolFunction> {
    check_pair(h, g)?;
    let ps: Vec<usize> = (0..h.entries.len()).collect();
    let zero = vec![Q::zero(); h.dim];
    SymbolFunction::from_terms(h.dim, shift_terms(h, g, &zero, &ps), pair_mode(h, g, opts)?, opts)
}

/// Closed box containing every α for which some t_α can be nonzero:
/// the hull over p of supp ĝ_p − supp ĥ_p.
pub fn alpha_box(h: &TranslationSystem, g: &TranslationSystem) -> Option<RatBox> {
    let boxes: Vec<RatBox> = h
        .entries
        .iter()
        .zip(&g.entries)
        .filter_map(|(he, ge)| Some(ge.generator.support_hull()?.minus(&he.generator.support_hull()?)))
        .collect();
    closed_hull(&boxes)
}

/// Hull of closed boxes (degenerate ones included).
pub(crate) fn closed_hull(boxes: &[RatBox]) -> Option<RatBox> {
    let mut it = boxes.iter().filter(|b| !b.is_empty_closed());
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, b| acc.hull(b)))
}

/// Θ commutes with all translations iff t_α ≡ 0 for every α ∈ Λ∖{0}.
pub fn check_translation_commutant(h: &TranslationSystem, g: &TranslationSystem, opts: &CheckOptions) -> Result<Verdict> {
    check_pair(h, g)?;
    let mut v = Verdict::new(VerdictKind::Characterized);
    let Some(bx) = alpha_box(h, g) else {
        v.record("alpha box: empty (zero generators)");
        return Ok(v.finish());
    };
    let alphas = enumerate_alpha(&h.family(), &bx, opts.enumeration_limit)?;
    v.record(format!("alpha box {bx}: {} points of the dual lattice union", alphas.len()));
    for alpha in &alphas {
        let t = cross_term(h, g, alpha, opts)?;
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(COND_COMMUTANT, fmt_point(alpha), w.location, w.value);
        }
    }
    Ok(v.finish())
}

/// Θ = 0 iff Θ is in the commutant and s ≡ 0.
pub fn check_orthogonality(h: &TranslationSystem, g: &TranslationSystem, opts: &CheckOptions) -> Result<Verdict> {
    let mut v = check_translation_commutant(h, g, opts)?;
    let s = multiplier_symbol(h, g, opts)?;
    if let Some(w) = s.zero_witness(opts.tol_zero) {
        v.violate(COND_SYMBOL_ZERO, "symbol", w.location, w.value);
    }
    Ok(v.finish())
}

/// Θ = I on L²(domain^), i.e. commutant plus s ≡ 1 on `domain`.
///
/// With `domain = None` the identity is required on all of ℝᵈ, which no pair
/// of compactly supported generators can meet; the violation then sits just
/// outside the support of s.
pub fn check_duality(
    h: &TranslationSystem,
    g: &TranslationSystem,
    domain: Option<&SpectralSet>,
    opts: &CheckOptions,
) -> Result<Verdict> {
    if let (Some(c), Some(d)) = (h.single_lattice(), g.single_lattice()) {
        if c != d {
            let mut v = Verdict::new(VerdictKind::Characterized);
            if opts.lattice_check {
                v.violate(
                    COND_EQUAL_LATTICES,
                    "C ≠ D",
                    format!("C = {c}, D = {d}"),
                    Default::default(),
                );
            } else {
                // Θ T_{Ck} = T_{Dk} Θ for all k, so Θ = I would force C = D.
                v.violate(
                    COND_COMMUTANT,
                    "C ≠ D",
                    format!("shift relation with C = {c}, D = {d} excludes the identity"),
                    Default::default(),
                );
            }
            return Ok(v.finish());
        }
    }
    let mut v = check_translation_commutant(h, g, opts)?;
    let s = multiplier_symbol(h, g, opts)?;
    let region: Vec<RatBox> = match domain {
        Some(e) => e.boxes().to_vec(),
        None => {
            let base = s
                .support_hull()
                .unwrap_or_else(|| RatBox::cube(h.dim, Q::zero(), Q::one()));
            let pad = vec![Q::one(); h.dim];
            let neg: Vec<Q> = pad.iter().map(|x| -x).collect();
            vec![RatBox::new(
                base.lo.iter().zip(&neg).map(|(a, b)| a + b).collect(),
                base.hi.iter().zip(&pad).map(|(a, b)| a + b).collect(),
            )?]
        }
    };
    v.record(match domain {
        Some(e) => format!("identity tested on {} boxes of E", e.boxes().len()),
        None => format!("identity tested on {}", region[0]),
    });
    if let Some(w) = s.one_witness(&region, opts.tol_zero) {
        v.violate(COND_SYMBOL_ONE, "symbol", w.location, w.value);
    }
    Ok(v.finish())
}

/// Singly-latticed pair for the different-lattice results.
fn cross_lattice_parts<'a>(
    g: &'a TranslationSystem,
    h: &'a TranslationSystem,
) -> Result<(&'a RatMatrix, &'a RatMatrix)> {
    if g.dim != h.dim {
        return Err(FrameError::DimensionMismatch {
            expected: g.dim,
            found: h.dim,
        });
    }
    let c = g.single_lattice().ok_or(FrameError::MixedLattices)?;
    let d = h.single_lattice().ok_or(FrameError::MixedLattices)?;
    if g.entries.len() != h.entries.len() || g.entries.iter().zip(&h.entries).any(|(a, b)| a.label != b.label) {
        return Err(FrameError::IndexMismatch("systems must share their labels".into()));
    }
    Ok((c, d))
}

/// Σ_p conj(ĝ_p(C′ξ)) ĥ_p(D′(ξ + k)) = 0 for all k ∈ ℤᵈ, for G on lattice C and H on D.
pub fn check_cross_lattice_zero(g: &TranslationSystem, h: &TranslationSystem, opts: &CheckOptions) -> Result<Verdict> {
    let (c, d) = cross_lattice_parts(g, h)?;
    let dim = g.dim;
    let (cd, dd) = (c.dual()?, d.dual()?);
    let (cs, ds) = (c.transpose(), d.transpose());
    let zero = vec![Q::zero(); dim];
    let mode = pair_mode(g, h, opts)?;
    let mut v = Verdict::new(VerdictKind::Characterized);

    // ξ ∈ C* supp ĝ_p and ξ + k ∈ D* supp ĥ_p
    let boxes: Vec<RatBox> = g
        .entries
        .iter()
        .zip(&h.entries)
        .filter_map(|(ge, he)| {
            let a = ge.generator.support_hull()?.image(&cs, &zero);
            let b = he.generator.support_hull()?.image(&ds, &zero);
            Some(b.minus(&a))
        })
        .collect();
    let ks = match closed_hull(&boxes) {
        Some(bx) => {
            let ks = bx.integer_points(opts.enumeration_limit)?;
            v.record(format!("k box {bx}: {} integer points", ks.len()));
            ks
        }
        None => {
            v.record("k box: empty");
            Vec::new()
        }
    };
    for k in ks {
        let k: Vec<Q> = k.into_iter().map(Q::from_integer).collect();
        let terms = g
            .entries
            .iter()
            .zip(&h.entries)
            .map(|(ge, he)| ProductTerm {
                weight: Q::one(),
                f: ge.generator.clone(),
                fmap: AffineMap::linear(cd.clone()),
                g: he.generator.clone(),
                gmap: AffineMap {
                    m: dd.clone(),
                    b: dd.mul_vec(&k),
                },
            })
            .collect();
        let t = SymbolFunction::from_terms(dim, terms, mode, opts)?;
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(COND_CROSS_LATTICE, fmt_point(&k), w.location, w.value);
        }
    }

    if g.entries.len() == 1 {
        let unit = RatBox::cube(dim, Q::zero(), Q::one());
        let pg = periodization(&g.entries[0].generator, &cd, &unit, mode, opts)?;
        let ph = periodization(&h.entries[0].generator, &dd, &unit, mode, opts)?;
        let prod = pg.product(&ph)?.restrict(std::slice::from_ref(&unit));
        let ok = match prod.zero_witness(opts.tol_zero) {
            Some(w) => {
                v.violate(COND_PERIODIZATION, "periodization", w.location, w.value);
                false
            }
            None => true,
        };
        v.note("periodization product", if ok { "vanishes" } else { "nonzero" });
    }
    Ok(v.finish())
}

/// Σ_m |ĝ(M(ξ + m))|² on the unit cube.
fn periodization(gen: &Arc<SpectralGenerator>, m: &RatMatrix, unit: &RatBox, mode: Mode, opts: &CheckOptions) -> Result<SymbolFunction> {
    let dim = m.dim();
    let Some(hull) = gen.support_hull() else {
        return SymbolFunction::from_terms(dim, Vec::new(), mode, opts);
    };
    // M(ξ + m) ∈ supp ĝ with ξ ∈ [0,1)ᵈ
    let pre = hull.image(&m.inverse()?, &vec![Q::zero(); dim]);
    let ms = pre.minus(unit).integer_points(opts.enumeration_limit)?;
    let terms = ms
        .into_iter()
        .map(|mm| {
            let mm: Vec<Q> = mm.into_iter().map(Q::from_integer).collect();
            let map = AffineMap {
                m: m.clone(),
                b: m.mul_vec(&mm),
            };
            ProductTerm {
                weight: Q::one(),
                f: gen.clone(),
                fmap: map.clone(),
                g: gen.clone(),
                gmap: map,
            }
        })
        .collect();
    Ok(SymbolFunction::from_terms(dim, terms, mode, opts)?.restrict(std::slice::from_ref(unit)))
}

/// L(f) with its exact value when available.
#[derive(Clone, Debug, PartialEq)]
pub struct LicEstimate {
    pub exact: Option<Q>,
    pub value: f64,
    pub truncation: Vec<String>,
}

/// L(f) = Σ_p Σ_k ∫_{supp f̂} |f̂(ξ + C_p′k)|² |det C_p|⁻¹ |ĝ_p(ξ)|² dξ,
/// with ξ further restricted to `window` when given.
pub fn estimate_lic(
    sys: &TranslationSystem,
    f: &SpectralGenerator,
    window: Option<&RatBox>,
    opts: &CheckOptions,
) -> Result<LicEstimate> {
    if f.dim() != sys.dim {
        return Err(FrameError::DimensionMismatch {
            expected: sys.dim,
            found: f.dim(),
        });
    }
    if !f.in_class_d() {
        return Err(FrameError::NotClassD);
    }
    let dim = sys.dim;
    let gens: Vec<&SpectralGenerator> = sys.generators().chain(std::iter::once(f)).collect();
    let mode = resolve_mode(dim, &gens, opts)?;
    let fa = Arc::new(f.clone());
    let mut region: Vec<RatBox> = f.support().to_vec();
    if let Some(w) = window {
        region = region.iter().map(|b| b.intersect(w)).filter(|b| !b.is_empty()).collect();
    }
    let mut truncation = Vec::new();
    let mut exact = Some(Q::zero());
    let mut value = 0.0;
    let Some(f_hull) = hull_of(&region) else {
        truncation.push("integration region empty".into());
        return Ok(LicEstimate {
            exact: (mode == Mode::Exact).then(Q::zero),
            value,
            truncation,
        });
    };
    for e in &sys.entries {
        let Some(g_hull) = e.generator.support_hull() else { continue };
        let both = f_hull.intersect(&g_hull);
        if both.is_empty() {
            continue;
        }
        // C′k ∈ supp f̂ − (supp f̂ ∩ supp ĝ_p)
        let kbox = f.support_hull().unwrap().minus(&both).image(&e.lattice.transpose(), &vec![Q::zero(); dim]);
        let ks = kbox.integer_points(opts.enumeration_limit)?;
        truncation.push(format!("entry {}: k box {kbox}, {} points", e.label, ks.len()));
        let cd = e.lattice.dual()?;
        let w = Q::one() / e.lattice.abs_det();
        for k in ks {
            let k: Vec<Q> = k.into_iter().map(Q::from_integer).collect();
            let shift = AffineMap {
                m: RatMatrix::identity(dim),
                b: cd.mul_vec(&k),
            };
            match mode {
                Mode::Exact => {
                    // |ĝ|² carries the rational weight gain_sq, so integrate the profiles directly
                    let fp = f.piecewise().expect("exact mode");
                    let gp = e.generator.piecewise().expect("exact mode");
                    let shifted = fp.shift(&shift.b[0]);
                    let iv: Vec<(Q, Q)> = region.iter().map(|b| (b.lo[0].clone(), b.hi[0].clone())).collect();
                    let integrand = shifted.conj().mul(&shifted).mul(&gp.conj().mul(gp)).restrict(&iv);
                    let term = integrand.integrate().re * f.gain_sq() * e.generator.gain_sq() * &w;
                    value += to_f64(&term);
                    if let Some(acc) = exact.as_mut() {
                        *acc += term;
                    }
                }
                Mode::Sampled => {
                    exact = None;
                    let square = |gen: &Arc<SpectralGenerator>, map: AffineMap, weight: Q| {
                        SymbolFunction::from_terms(
                            dim,
                            vec![ProductTerm {
                                weight,
                                f: gen.clone(),
                                fmap: map.clone(),
                                g: gen.clone(),
                                gmap: map,
                            }],
                            mode,
                            opts,
                        )
                    };
                    let prod = square(&fa, shift, Q::one())?.product(&square(&e.generator, AffineMap::identity(dim), w.clone())?)?;
                    value += midpoint_integral(&prod, &region, opts.max_probe_points);
                }
            }
        }
    }
    Ok(LicEstimate { exact, value, truncation })
}

/// Midpoint rule over each box with about `budget` points per box.
fn midpoint_integral(s: &SymbolFunction, region: &[RatBox], budget: usize) -> f64 {
    let mut total = 0.0;
    for b in region {
        let d = b.dim();
        let per_axis = ((budget as f64).powf(1.0 / d as f64).floor() as usize).max(1);
        let lo: Vec<f64> = b.lo.iter().map(to_f64).collect();
        let hi: Vec<f64> = b.hi.iter().map(to_f64).collect();
        let steps: Vec<f64> = lo.iter().zip(&hi).map(|(a, c)| (c - a) / per_axis as f64).collect();
        let cell: f64 = steps.iter().product();
        let n = per_axis.pow(d as u32);
        for flat in 0..n {
            let mut rem = flat;
            let x: Vec<f64> = (0..d)
                .map(|ax| {
                    let i = rem % per_axis;
                    rem /= per_axis;
                    lo[ax] + (i as f64 + 0.5) * steps[ax]
                })
                .collect();
            total += s.eval_f64(&x).re * cell;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};
    use crate::spectral::{bidual_pair, characteristic, shannon};

    fn one(g: SpectralGenerator) -> TranslationSystem {
        TranslationSystem::single(RatMatrix::identity(1), g).unwrap()
    }

    fn chi(a: Q, b: Q) -> SpectralGenerator {
        characteristic(&[(a, b)]).unwrap()
    }

    #[test]
    fn disjoint_bands_are_orthogonal() {
        let h = one(chi(qr(1, 2), qr(3, 4)));
        let g = one(chi(q(0), qr(1, 4)));
        let opts = CheckOptions::default();
        for k in -3..=3 {
            assert!(cross_term(&h, &g, &[q(k)], &opts).unwrap().as_exact().unwrap().is_zero());
        }
        assert!(check_orthogonality(&h, &g, &opts).unwrap().holds);
    }

    #[test]
    fn shannon_symbol_and_orthogonality() {
        let s = one(shannon());
        let opts = CheckOptions::default();
        let sym = multiplier_symbol(&s, &s, &opts).unwrap();
        assert_eq!(sym.as_exact().unwrap(), shannon().piecewise().unwrap());
        assert!(cross_term(&s, &s, &[q(1)], &opts).unwrap().zero_witness(0.0).is_none());
        assert!(check_translation_commutant(&s, &s, &opts).unwrap().holds);
        let v = check_orthogonality(&s, &s, &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].shift, "symbol");
    }

    #[test]
    fn bidual_cross_term_at_minus_one() {
        let (psi, phi) = bidual_pair();
        let h = one(phi.clone());
        let g = one(psi.clone());
        let opts = CheckOptions::default();
        let t = cross_term(&h, &g, &[q(-1)], &opts).unwrap();
        let f = t.as_exact().unwrap();
        assert!(!f.is_zero());
        let (lo, hi) = f.bounds().unwrap();
        assert!(lo >= qr(1, 2) && hi <= qr(3, 2));
        assert_eq!(f.eval(&q(1)).to_c64().re, 1.0);
        let s = multiplier_symbol(&h, &g, &opts).unwrap();
        let e = [RatBox::interval(qr(-1, 4), qr(1, 4))];
        assert!(s.one_witness(&e, 0.0).is_none());
    }

    #[test]
    fn plateau_commutant() {
        // supp ψ̂ has length 1, so integer shifts only touch at endpoints
        let (psi, phi) = bidual_pair();
        let s = one(psi);
        assert!(check_translation_commutant(&s, &s, &CheckOptions::default()).unwrap().holds);
        let s = one(phi);
        let v = check_translation_commutant(&s, &s, &CheckOptions::default()).unwrap();
        assert!(!v.holds);
        let shifts: Vec<&str> = v.violations.iter().map(|x| x.shift.as_str()).collect();
        assert_eq!(shifts, vec!["-1", "1"]);
    }

    #[test]
    fn duality_cases() {
        let opts = CheckOptions::default();
        let s = one(shannon());
        assert!(!check_duality(&s, &s, None, &opts).unwrap().holds);
        let c = TranslationSystem::single(RatMatrix::identity(1), shannon()).unwrap();
        let d = TranslationSystem::single(RatMatrix::scalar(1, qr(1, 2)), shannon()).unwrap();
        let v = check_duality(&c, &d, None, &opts).unwrap();
        assert_eq!(v.violations[0].condition, COND_EQUAL_LATTICES);
        assert_eq!(v.violations[0].shift, "C ≠ D");
        let over = CheckOptions {
            lattice_check: false,
            ..Default::default()
        };
        let v = check_duality(&c, &d, None, &over).unwrap();
        assert_eq!(v.violations[0].condition, COND_COMMUTANT);
        let unit = one(chi(q(0), q(1)));
        let e = SpectralSet::intervals(&[(q(0), q(1))]);
        assert!(check_duality(&unit, &unit, Some(&e), &opts).unwrap().holds);
        assert!(!check_duality(&unit, &unit, None, &opts).unwrap().holds);
    }

    #[test]
    fn index_mismatch() {
        let a = TranslationSystem::single(RatMatrix::identity(1), shannon()).unwrap();
        let b = TranslationSystem::single(RatMatrix::scalar(1, q(2)), shannon()).unwrap();
        assert!(matches!(
            cross_term(&a, &b, &[q(1)], &CheckOptions::default()),
            Err(FrameError::IndexMismatch(_))
        ));
    }

    #[test]
    fn cross_lattice_examples() {
        let opts = CheckOptions::default();
        let s = one(shannon());
        let v = check_cross_lattice_zero(&s, &s, &opts).unwrap();
        assert!(v.violations_for(COND_CROSS_LATTICE).any(|x| x.shift == "0"));
        // supp ĝ ⊂ [0,1/4] + ℤ, supp ĥ ⊂ D′([1/2,3/4] + ℤ) with D = 1/2, D′ = 2
        let g = one(chi(q(0), qr(1, 4)));
        let h = TranslationSystem::single(RatMatrix::scalar(1, qr(1, 2)), chi(q(1), qr(3, 2))).unwrap();
        let v = check_cross_lattice_zero(&g, &h, &opts).unwrap();
        assert!(v.holds, "{:?}", v.violations);
        assert_eq!(v.notes["periodization product"], "vanishes");
    }

    #[test]
    fn cross_lattice_interval_test_per_k() {
        let opts = CheckOptions::default();
        let g = one(chi(q(0), qr(1, 8)));
        let h = TranslationSystem::single(RatMatrix::scalar(1, qr(1, 2)), chi(qr(1, 4), qr(3, 8))).unwrap();
        let v = check_cross_lattice_zero(&g, &h, &opts).unwrap();
        // ĥ(2(ξ + k)) lives on [1/8, 3/16) − k, which never meets [0, 1/8)
        assert!(v.holds);
        let h2 = TranslationSystem::single(RatMatrix::scalar(1, qr(1, 2)), chi(q(0), qr(1, 8))).unwrap();
        let v = check_cross_lattice_zero(&g, &h2, &opts).unwrap();
        assert!(!v.holds);
        assert!(v.violations_for(COND_PERIODIZATION).count() == 1);
    }

    #[test]
    fn mixed_lattices_rejected() {
        let sys = TranslationSystem::new(vec![
            SystemEntry {
                label: "a".into(),
                lattice: RatMatrix::identity(1),
                generator: Arc::new(shannon()),
            },
            SystemEntry {
                label: "b".into(),
                lattice: RatMatrix::scalar(1, q(2)),
                generator: Arc::new(shannon()),
            },
        ])
        .unwrap();
        assert_eq!(
            check_cross_lattice_zero(&sys, &sys, &CheckOptions::default()).unwrap_err(),
            FrameError::MixedLattices
        );
    }

    #[test]
    fn lic_examples() {
        let opts = CheckOptions::default();
        let s = one(shannon());
        let est = estimate_lic(&s, &chi(qr(1, 8), qr(1, 4)), None, &opts).unwrap();
        assert_eq!(est.exact, Some(qr(1, 8)));
        let far = estimate_lic(&s, &chi(q(3), q(4)), None, &opts).unwrap();
        assert_eq!(far.exact, Some(q(0)));
        assert!(estimate_lic(&s, &chi(q(-1), q(1)), None, &opts).is_err());
        let sampled = estimate_lic(&s, &chi(qr(1, 8), qr(1, 4)), None, &CheckOptions::sampled()).unwrap();
        assert!((sampled.value - 0.125).abs() < 1e-9);
    }
}
