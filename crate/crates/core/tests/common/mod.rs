#![allow(dead_code)]

use framecheck::piecewise::Piecewise;
use framecheck::rational::{q, qr};
use framecheck::spectral::SpectralGenerator;
use framecheck::grammian::TranslationSystem;
use framecheck::{RatMatrix, Q, CQ};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Grid unit for random endpoints.
pub const DEN: i64 = 8;

pub fn at(k: i64) -> Q {
    qr(k, DEN)
}

/// Σ value·χ_[lo, hi) over disjoint grid intervals.
pub fn steps(name: &str, pieces: &[(i64, i64, CQ)]) -> SpectralGenerator {
    let mut f = Piecewise::zero();
    for (lo, hi, v) in pieces {
        f = f.add(&Piecewise::indicator(&[(at(*lo), at(*hi))], v.clone()));
    }
    SpectralGenerator::from_piecewise(name, f).unwrap()
}

pub fn height(rng: &mut ChaCha8Rng) -> CQ {
    let choices = [
        CQ::real(q(1)),
        CQ::real(q(2)),
        CQ::real(q(-1)),
        CQ::real(qr(1, 2)),
        CQ::new(q(0), q(1)),
        CQ::new(q(1), qr(-3, 2)),
    ];
    choices.choose(rng).unwrap().clone()
}

/// Random step function on [lo, hi) in grid units, one or two pieces.
pub fn random_on(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Vec<(i64, i64, CQ)> {
    if hi - lo >= 2 && rng.gen_bool(0.5) {
        let mid = rng.gen_range(lo + 1..hi);
        vec![(lo, mid, height(rng)), (mid, hi, height(rng))]
    } else {
        vec![(lo, hi, height(rng))]
    }
}

pub fn negate(p: &[(i64, i64, CQ)]) -> Vec<(i64, i64, CQ)> {
    p.iter().map(|(a, b, v)| (*a, *b, v.scale(&q(-1)))).collect()
}

pub fn lattice(c: &Q) -> RatMatrix {
    RatMatrix::scalar(1, c.clone())
}

pub fn single(c: &Q, g: SpectralGenerator) -> TranslationSystem {
    TranslationSystem::single(lattice(c), g).unwrap()
}

/// One of the lattice constants 1, 1/2, 2.
pub fn random_lattice(rng: &mut ChaCha8Rng) -> Q {
    [q(1), qr(1, 2), q(2)].choose(rng).unwrap().clone()
}

/// Dual period 1/c in grid units.
pub fn period_units(c: &Q) -> i64 {
    (Q::from_integer(DEN.into()) / c).to_integer().try_into().unwrap()
}

/// A pair of translation systems inside [−2, 2) whose orthogonality is known
/// from the construction: `kind` 0 and 3 are orthogonal, 1 and 2 are not.
pub struct Case {
    pub h: TranslationSystem,
    pub g: TranslationSystem,
    pub orthogonal: bool,
    pub what: &'static str,
}

pub fn random_case(rng: &mut ChaCha8Rng, kind: usize) -> Case {
    let half = 2 * DEN;
    let c = random_lattice(rng);
    let p = period_units(&c);
    match kind {
        // ĝ after ĥ inside one period: no alias of supp ĝ meets supp ĥ
        0 => {
            let span = p.min(2 * half);
            let w1 = rng.gen_range(1..=span - 1);
            let gap = rng.gen_range(0..=span - w1 - 1);
            let w2 = rng.gen_range(1..=span - w1 - gap);
            let x = rng.gen_range(-half..=half - (w1 + gap + w2));
            let h = steps("h", &random_on(rng, x, x + w1));
            let g = steps("g", &random_on(rng, x + w1 + gap, x + w1 + gap + w2));
            Case { h: single(&c, h), g: single(&c, g), orthogonal: true, what: "disjoint modulo the dual lattice" }
        }
        // overlapping supports
        1 => {
            let w = rng.gen_range(1..=DEN);
            let x = rng.gen_range(-half..=half - 2 * w);
            let o = rng.gen_range(0..w);
            let h = steps("h", &random_on(rng, x, x + w));
            let g = steps("g", &random_on(rng, x + o, x + o + w));
            Case { h: single(&c, h), g: single(&c, g), orthogonal: false, what: "overlapping supports" }
        }
        // ĝ meets ĥ only after a shift by the dual period
        2 => {
            let c = [q(1), q(2)].choose(rng).unwrap().clone();
            let p = period_units(&c);
            let w = rng.gen_range(1..=p / 2);
            let x = rng.gen_range(-half..=half - p - w);
            let h = steps("h", &random_on(rng, x, x + w));
            let g = steps("g", &random_on(rng, x + p, x + p + w));
            Case { h: single(&c, h), g: single(&c, g), orthogonal: false, what: "overlap after one alias" }
        }
        // (u, u) against (v, −v): the two channels cancel
        _ => {
            let x = rng.gen_range(-half..half - 1);
            let y = rng.gen_range(-half..half - 1);
            let (wu, wv) = (rng.gen_range(1..=half - x), rng.gen_range(1..=half - y));
            let u = random_on(rng, x, x + wu);
            let v = random_on(rng, y, y + wv);
            let h = TranslationSystem::shared(lattice(&c), vec![steps("u", &u), steps("u", &u)]).unwrap();
            let g = TranslationSystem::shared(lattice(&c), vec![steps("v", &v), steps("-v", &negate(&v))]).unwrap();
            Case { h, g, orthogonal: true, what: "cancelling channels" }
        }
    }
}

/// ĥ and ĝ supported in one window of length 1/c, so every cross term with
/// α ≠ 0 vanishes.
pub fn commutant_case(rng: &mut ChaCha8Rng) -> (TranslationSystem, TranslationSystem) {
    let half = 2 * DEN;
    let c = random_lattice(rng);
    let p = period_units(&c).min(2 * half);
    let x = rng.gen_range(-half..=half - p);
    let (a1, b1) = sub_interval(rng, x, x + p);
    let (a2, b2) = sub_interval(rng, x, x + p);
    let h = steps("h", &random_on(rng, a1, b1));
    let g = steps("g", &random_on(rng, a2, b2));
    (single(&c, h), single(&c, g))
}

fn sub_interval(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> (i64, i64) {
    let a = rng.gen_range(lo..hi);
    let b = rng.gen_range(a + 1..=hi);
    (a, b)
}
