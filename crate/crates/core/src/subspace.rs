//! Duality restricted to V_E = {f : supp f̂ ⊂ E}: subspace duals, Plancherel
//! frames, and affine subspace duals.
//!
//! `check_subspace_dual(H, G, E)` decides whether the H-translates are a
//! V_E-subspace dual to the G-translates, i.e. v = Σ ⟨v, T g⟩ T h for v ∈ V_E.
//! The order matters: the relation is not symmetric.

use num_traits::Zero;

use crate::affine::{affine_cross_term, calderon_mixed_symbol, q_box, AffineSystem, COND_TQ};
use crate::error::{FrameError, Result};
use crate::geometry::{RatBox, SpectralSet};
use crate::grammian::{
    check_translation_commutant, closed_hull, cross_term, multiplier_symbol, TranslationSystem, COND_COMMUTANT,
    COND_EQUAL_LATTICES, COND_SYMBOL_ONE,
};
use crate::lattice::{enumerate_alpha, enumerate_q, fmt_point};
use crate::rational::Q;
use crate::verdict::{CheckOptions, Verdict, VerdictKind};

pub const COND_SUBSPACE_SHIFTS: &str = "shifted products vanish on E";
pub const COND_CALDERON_ONE: &str = "Calderon sum equals one on E";

fn check_dims(dim: usize, e: &SpectralSet) -> Result<()> {
    if e.dim() != dim {
        return Err(FrameError::DimensionMismatch {
            expected: dim,
            found: e.dim(),
        });
    }
    Ok(())
}

/// Distinct single lattices can never give a subspace dual.
fn lattice_obstruction(h: &TranslationSystem, g: &TranslationSystem, kind: VerdictKind) -> Option<Verdict> {
    let (c, d) = (h.single_lattice()?, g.single_lattice()?);
    if c == d {
        return None;
    }
    let mut v = Verdict::new(kind);
    v.violate(COND_EQUAL_LATTICES, "C ≠ D", format!("C = {c}, D = {d}"), Default::default());
    Some(v.finish())
}

fn symbol_one_on(v: &mut Verdict, h: &TranslationSystem, g: &TranslationSystem, e: &SpectralSet, opts: &CheckOptions) -> Result<()> {
    let s = multiplier_symbol(h, g, opts)?;
    if let Some(w) = s.one_witness(e.boxes(), opts.tol_zero) {
        v.violate(COND_SYMBOL_ONE, "symbol", w.location, w.value);
    }
    Ok(())
}

/// H-translates are a V_E-subspace dual to the G-translates:
/// Σ_p |det C_p|⁻¹ conj(ĥ_p) ĝ_p = 1 on E, and for α ∈ Λ∖{0}
/// Σ_{p∈𝒫_α} |det C_p|⁻¹ conj(ĥ_p(ξ − α)) ĝ_p(ξ) = 0 on E.
pub fn check_subspace_dual(h: &TranslationSystem, g: &TranslationSystem, e: &SpectralSet, opts: &CheckOptions) -> Result<Verdict> {
    check_dims(h.dim(), e)?;
    if let Some(v) = lattice_obstruction(h, g, VerdictKind::Characterized) {
        return Ok(v);
    }
    let mut v = Verdict::new(VerdictKind::Characterized);
    symbol_one_on(&mut v, h, g, e, opts)?;

    // ξ ∈ supp ĝ_p ∩ E and ξ − α ∈ supp ĥ_p
    let boxes: Vec<RatBox> = h
        .entries()
        .iter()
        .zip(g.entries())
        .filter_map(|(he, ge)| {
            let hh = he.generator.support_hull()?;
            let cut: Vec<RatBox> = ge
                .generator
                .support()
                .iter()
                .flat_map(|s| e.boxes().iter().map(move |b| s.intersect(b)))
                .filter(|b| !b.is_empty())
                .collect();
            Some(closed_hull(&cut)?.minus(&hh))
        })
        .collect();
    let Some(bx) = closed_hull(&boxes) else {
        v.record("alpha box: empty");
        return Ok(v.finish());
    };
    let alphas = enumerate_alpha(&h.family(), &bx, opts.enumeration_limit)?;
    v.record(format!("alpha box {bx}: {} points", alphas.len()));
    for alpha in alphas {
        // t_α(η) = Σ conj(ĥ(η)) ĝ(η + α), read on η ∈ E − α
        let neg: Vec<Q> = alpha.iter().map(|x| -x).collect();
        let region = e.translate(&neg);
        let t = cross_term(h, g, &alpha, opts)?.restrict(region.boxes());
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(COND_SUBSPACE_SHIFTS, fmt_point(&alpha), w.location, w.value);
        }
    }
    Ok(v.finish())
}

/// Global vanishing of every cross term plus s = 1 on E; implies duality in
/// both directions.
pub fn check_sufficient_subspace_dual(h: &TranslationSystem, g: &TranslationSystem, e: &SpectralSet, opts: &CheckOptions) -> Result<Verdict> {
    check_dims(h.dim(), e)?;
    if let Some(v) = lattice_obstruction(h, g, VerdictKind::Sufficient) {
        return Ok(v);
    }
    let mut v = Verdict::new(VerdictKind::Sufficient);
    v.absorb(check_translation_commutant(h, g, opts)?);
    symbol_one_on(&mut v, h, g, e, opts)?;
    debug_assert!(v.violations.iter().all(|x| x.condition == COND_COMMUTANT || x.condition == COND_SYMBOL_ONE));
    Ok(v.finish())
}

/// v = Σ ⟨v, T g⟩ T g for every v ∈ V_E.
pub fn check_plancherel_frame(g: &TranslationSystem, e: &SpectralSet, opts: &CheckOptions) -> Result<Verdict> {
    check_subspace_dual(g, g, e, opts)
}

/// 𝒰_A(Φ) is a V_E-subspace dual to 𝒰_A(Ψ): the Calderón sum
/// Σ_i Σ_j conj(φ̂_i(A*ʲξ)) ψ̂_i(A*ʲξ) = 1 on E, and for q ∉ A*ℤᵈ
/// Σ_i Σ_{j≥0} conj(φ̂_i(A*ʲ(ξ − q))) ψ̂_i(A*ʲξ) = 0 on E.
pub fn check_affine_subspace_dual(phi: &AffineSystem, psi: &AffineSystem, e: &SpectralSet, opts: &CheckOptions) -> Result<Verdict> {
    check_dims(phi.dim(), e)?;
    let mut v = Verdict::new(VerdictKind::Characterized);
    let s = calderon_mixed_symbol(phi, psi, e.boxes(), opts)?;
    if let Some(w) = s.one_witness(e.boxes(), opts.tol_zero) {
        v.violate(COND_CALDERON_ONE, "symbol", w.location, w.value);
    }
    let Some(bx) = q_box(phi, psi)? else {
        v.record("q box: empty");
        return Ok(v.finish());
    };
    let qs = enumerate_q(&phi.dilation, &bx, opts.enumeration_limit)?;
    v.record(format!("q box {bx}: {} coset points", qs.len()));
    for q in qs {
        let neg: Vec<Q> = q.iter().map(|x| -x).collect();
        let region = e.translate(&neg);
        let t = affine_cross_term(phi, psi, &q, opts)?.restrict(region.boxes());
        if let Some(w) = t.zero_witness(opts.tol_zero) {
            v.violate(COND_TQ, format!("q = {}", fmt_point(&q)), w.location, w.value);
        }
    }
    debug_assert!(!v.violations.iter().any(|x| x.value.is_nan() && x.value.re.is_zero()));
    Ok(v.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;
    use crate::rational::{q, qr};
    use crate::spectral::{bidual_pair, characteristic, frazier_jawerth, plateau, shannon, shannon_wavelet, SpectralGenerator};

    fn one(g: SpectralGenerator) -> TranslationSystem {
        TranslationSystem::single(RatMatrix::identity(1), g).unwrap()
    }

    fn quarter() -> SpectralSet {
        SpectralSet::intervals(&[(qr(-1, 4), qr(1, 4))])
    }

    #[test]
    fn bidual_is_one_directional() {
        let (psi, phi) = bidual_pair();
        let opts = CheckOptions::default();
        let forward = check_subspace_dual(&one(psi.clone()), &one(phi.clone()), &quarter(), &opts).unwrap();
        assert!(forward.holds, "{:?}", forward.violations);
        let back = check_subspace_dual(&one(phi), &one(psi), &quarter(), &opts).unwrap();
        assert!(!back.holds);
        assert_eq!(back.violations.len(), 1);
        assert_eq!(back.violations[0].shift, "-1");
        assert_eq!(back.violations[0].location, "[3/4, 5/4)");
    }

    #[test]
    fn sufficient_condition_is_stronger() {
        let (psi, phi) = bidual_pair();
        let opts = CheckOptions::default();
        let v = check_sufficient_subspace_dual(&one(psi), &one(phi), &quarter(), &opts).unwrap();
        assert!(!v.holds);
        assert_eq!(v.kind, VerdictKind::Sufficient);
        assert!(v.violations.iter().all(|x| x.condition == COND_COMMUTANT));
        let s = one(shannon());
        let half = SpectralSet::intervals(&[(qr(-1, 2), qr(1, 2))]);
        assert!(check_sufficient_subspace_dual(&s, &s, &half, &opts).unwrap().holds);
    }

    #[test]
    fn plateau_against_characteristic() {
        let opts = CheckOptions::default();
        let h = one(plateau(&qr(1, 4), &qr(1, 2)).unwrap());
        let g = one(characteristic(&[(qr(-1, 4), qr(1, 4))]).unwrap());
        assert!(check_subspace_dual(&h, &g, &quarter(), &opts).unwrap().holds);
    }

    #[test]
    fn plancherel_examples() {
        let opts = CheckOptions::default();
        let half = SpectralSet::intervals(&[(qr(-1, 2), qr(1, 2))]);
        assert!(check_plancherel_frame(&one(shannon()), &half, &opts).unwrap().holds);
        let p = one(plateau(&qr(1, 4), &qr(1, 2)).unwrap());
        assert!(check_plancherel_frame(&p, &quarter(), &opts).unwrap().holds);
        let weak = one(shannon().scaled_gain(&qr(1, 4)));
        let v = check_plancherel_frame(&weak, &quarter(), &opts).unwrap();
        assert_eq!(v.violations[0].condition, COND_SYMBOL_ONE);
        assert_eq!(v.violations[0].value.re, 0.25);
    }

    #[test]
    fn different_lattices_short_circuit() {
        let opts = CheckOptions::default();
        let c = one(shannon());
        let d = TranslationSystem::single(RatMatrix::scalar(1, qr(1, 2)), shannon()).unwrap();
        let v = check_subspace_dual(&c, &d, &quarter(), &opts).unwrap();
        assert_eq!(v.violations[0].condition, COND_EQUAL_LATTICES);
    }

    #[test]
    fn affine_subspace_duals() {
        let opts = CheckOptions::default();
        let sw = AffineSystem::standard(RatMatrix::scalar(1, q(2)), vec![shannon_wavelet()]).unwrap();
        let band = SpectralSet::intervals(&[(qr(-1, 2), qr(-1, 4)), (qr(1, 4), qr(1, 2))]);
        assert!(check_affine_subspace_dual(&sw, &sw, &band, &opts).unwrap().holds);
        let fj = AffineSystem::standard(RatMatrix::scalar(1, q(2)), vec![frazier_jawerth(&q(2), &qr(1, 128)).unwrap()]).unwrap();
        let e = SpectralSet::intervals(&[(qr(1, 64), qr(1, 32))]);
        let v = check_affine_subspace_dual(&fj, &fj, &e, &opts).unwrap();
        assert_eq!(v.violations_for(COND_CALDERON_ONE).count(), 1);
        let touching = SpectralSet::intervals(&[(q(0), qr(1, 4))]);
        assert!(check_affine_subspace_dual(&sw, &sw, &touching, &opts).is_err());
    }
}
