//! JSON documents for systems and spectral sets. Rationals travel as strings
//! ("p/q", "p" or finite decimals) so exact inputs stay exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::affine::{AffineSystem, Convention};
use crate::error::{FrameError, Result};
use crate::geometry::{RatBox, SpectralSet};
use crate::grammian::{SystemEntry, TranslationSystem};
use crate::matrix::RatMatrix;
use crate::piecewise::{Piece, Piecewise};
use crate::poly::Poly;
use crate::rational::{fmt_q, parse_q, q, qr, Q, CQ};
use crate::spectral::{
    bidual_pair, build_named_profile, Profile, SampledGrid, SpectralGenerator,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Translation,
    Affine,
    QuasiAffine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub kind: Kind,
    pub dim: usize,
    /// Shared lattice of a translation system (per-generator lattices override it).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation: Option<Vec<Vec<String>>>,
    /// Translation lattice X of an affine system; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<Vec<String>>>,
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled: Option<GridDoc>,
    /// ĝ is multiplied by √gain_sq.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain_sq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub lo: String,
    pub hi: String,
    /// Ascending powers of ξ.
    pub coeffs: Vec<CoeffDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffDoc {
    Real(String),
    Complex([String; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub origin: Vec<String>,
    pub step: Vec<String>,
    pub shape: Vec<usize>,
    /// (re, im) per cell, row-major with the last axis fastest.
    pub values: Vec<[f64; 2]>,
}

/// A lower or upper corner: a bare rational in 1-D, a list otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Corner {
    Scalar(String),
    Point(Vec<String>),
}

/// A spectral set as a list of [lo, hi] pairs.
pub type SetDoc = Vec<[Corner; 2]>;

#[derive(Clone, Debug)]
pub enum System {
    Translation(TranslationSystem),
    Affine(AffineSystem),
}

impl System {
    pub fn dim(&self) -> usize {
        match self {
            System::Translation(t) => t.dim(),
            System::Affine(a) => a.dim(),
        }
    }
}

fn parse_err(e: serde_json::Error) -> FrameError {
    FrameError::Parse(e.to_string())
}

fn matrix(rows: &[Vec<String>]) -> Result<RatMatrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

fn matrix_doc(m: &RatMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect()
}

fn coeff(c: &CoeffDoc) -> Result<CQ> {
    Ok(match c {
        CoeffDoc::Real(s) => CQ::real(parse_q(s)?),
        CoeffDoc::Complex([re, im]) => CQ::new(parse_q(re)?, parse_q(im)?),
    })
}

fn coeff_doc(c: &CQ) -> CoeffDoc {
    if c.im == Q::from_integer(0.into()) {
        CoeffDoc::Real(fmt_q(&c.re))
    } else {
        CoeffDoc::Complex([fmt_q(&c.re), fmt_q(&c.im)])
    }
}

impl GeneratorDoc {
    pub fn named(name: &str, params: &[Q]) -> Self {
        GeneratorDoc {
            name: Some(name.into()),
            params: params.iter().map(fmt_q).collect(),
            ..Default::default()
        }
    }

    /// Lossless document for a generator; pre-mapped grids are not representable.
    pub fn from_generator(g: &SpectralGenerator) -> Result<Self> {
        let mut doc = GeneratorDoc {
            name: Some(g.name.clone()),
            ..Default::default()
        };
        match g.profile() {
            Profile::Exact(f) => {
                doc.pieces = Some(
                    f.pieces()
                        .iter()
                        .map(|p| PieceDoc {
                            lo: fmt_q(&p.lo),
                            hi: fmt_q(&p.hi),
                            coeffs: p.poly.coeffs().iter().map(coeff_doc).collect(),
                        })
                        .collect(),
                )
            }
            Profile::Sampled { grid, pre: None } => {
                doc.sampled = Some(GridDoc {
                    origin: grid.origin.iter().map(fmt_q).collect(),
                    step: grid.step.iter().map(fmt_q).collect(),
                    shape: grid.shape.clone(),
                    values: grid.values.iter().map(|z| [z.re, z.im]).collect(),
                })
            }
            Profile::Sampled { pre: Some(_), .. } => {
                return Err(FrameError::InvalidParameter(format!(
                    "generator {} reads its grid through a linear map and has no document form",
                    g.name
                )))
            }
        }
        if *g.gain_sq() != Q::from_integer(1.into()) {
            doc.gain_sq = Some(fmt_q(g.gain_sq()));
        }
        Ok(doc)
    }

    /// One document may expand to several generators (`bidual_pair`).
    pub fn build(&self) -> Result<Vec<SpectralGenerator>> {
        let forms = [self.pieces.is_some(), self.sampled.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if forms > 1 || (forms == 0 && self.name.is_none()) {
            return Err(FrameError::Parse(
                "a generator needs exactly one of name+params, pieces or sampled".into(),
            ));
        }
        let mut gens = if let Some(pieces) = &self.pieces {
            let pieces = pieces
                .iter()
                .map(|p| {
                    Ok(Piece {
                        lo: parse_q(&p.lo)?,
                        hi: parse_q(&p.hi)?,
                        poly: Poly::new(p.coeffs.iter().map(coeff).collect::<Result<Vec<_>>>()?),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let name = self.name.clone().unwrap_or_else(|| "pieces".into());
            vec![SpectralGenerator::from_piecewise(name, Piecewise::from_pieces(pieces)?)?]
        } else if let Some(s) = &self.sampled {
            let parse = |v: &[String]| v.iter().map(|x| parse_q(x)).collect::<Result<Vec<_>>>();
            let grid = SampledGrid::new(
                parse(&s.origin)?,
                parse(&s.step)?,
                s.shape.clone(),
                s.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            )?;
            let name = self.name.clone().unwrap_or_else(|| "sampled".into());
            vec![SpectralGenerator::from_grid(name, grid)]
        } else {
            let params = self.params.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
            build_named_profile(self.name.as_deref().unwrap_or_default(), &params)?
        };
        if let Some(g) = &self.gain_sq {
            let k = parse_q(g)?;
            if k <= Q::from_integer(0.into()) {
                return Err(FrameError::InvalidParameter(format!("gain_sq {g} must be positive")));
            }
            gens = gens.into_iter().map(|x| x.scaled_gain(&k)).collect();
        }
        Ok(gens)
    }
}

impl SystemDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_err)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("documents serialize")
    }

    pub fn build(&self) -> Result<System> {
        let need = |m: &Option<Vec<Vec<String>>>, what: &str| -> Result<RatMatrix> {
            let m = m
                .as_ref()
                .ok_or_else(|| FrameError::Parse(format!("missing {what}")))?;
            let m = matrix(m)?;
            if m.dim() != self.dim {
                return Err(FrameError::DimensionMismatch { expected: self.dim, found: m.dim() });
            }
            Ok(m)
        };
        match self.kind {
            Kind::Translation => {
                let mut entries = Vec::new();
                for (i, g) in self.generators.iter().enumerate() {
                    let lattice = match &g.lattice {
                        Some(_) => need(&g.lattice, "generator lattice")?,
                        None => need(&self.lattice, "lattice")?,
                    };
                    let built = g.build()?;
                    let many = built.len() > 1;
                    for (j, gen) in built.into_iter().enumerate() {
                        let base = g.label.clone().unwrap_or_else(|| i.to_string());
                        entries.push(SystemEntry {
                            label: if many { format!("{base}.{j}") } else { base },
                            lattice: lattice.clone(),
                            generator: gen.into(),
                        });
                    }
                }
                check_dims(self.dim, entries.iter().map(|e| e.generator.dim()))?;
                Ok(System::Translation(TranslationSystem::new(entries)?))
            }
            Kind::Affine | Kind::QuasiAffine => {
                if self.generators.iter().any(|g| g.lattice.is_some() || g.label.is_some()) {
                    return Err(FrameError::Parse("affine generators take no lattice or label".into()));
                }
                let a = need(&self.dilation, "dilation")?;
                let x = match &self.translation {
                    Some(_) => need(&self.translation, "translation")?,
                    None => RatMatrix::identity(self.dim),
                };
                let mut gens = Vec::new();
                for g in &self.generators {
                    gens.extend(g.build()?);
                }
                check_dims(self.dim, gens.iter().map(|g| g.dim()))?;
                let conv = if self.kind == Kind::Affine {
                    Convention::Affine
                } else {
                    Convention::QuasiAffine
                };
                Ok(System::Affine(AffineSystem::new(a, x, gens, conv)?))
            }
        }
    }

    pub fn from_translation(sys: &TranslationSystem) -> Result<Self> {
        Ok(SystemDoc {
            kind: Kind::Translation,
            dim: sys.dim(),
            lattice: None,
            dilation: None,
            translation: None,
            generators: sys
                .entries()
                .iter()
                .map(|e| {
                    let mut d = GeneratorDoc::from_generator(&e.generator)?;
                    d.label = Some(e.label.clone());
                    d.lattice = Some(matrix_doc(&e.lattice));
                    Ok(d)
                })
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn from_affine(sys: &AffineSystem) -> Result<Self> {
        Ok(SystemDoc {
            kind: match sys.convention {
                Convention::Affine => Kind::Affine,
                Convention::QuasiAffine => Kind::QuasiAffine,
            },
            dim: sys.dim(),
            lattice: None,
            dilation: Some(matrix_doc(sys.dilation.matrix())),
            translation: (!sys.translation.is_identity()).then(|| matrix_doc(&sys.translation)),
            generators: sys
                .generators
                .iter()
                .map(|g| GeneratorDoc::from_generator(g))
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

fn check_dims(dim: usize, found: impl Iterator<Item = usize>) -> Result<()> {
    for f in found {
        if f != dim {
            return Err(FrameError::DimensionMismatch { expected: dim, found: f });
        }
    }
    Ok(())
}

pub fn parse_system(text: &str) -> Result<System> {
    SystemDoc::parse(text)?.build()
}

pub fn parse_set(text: &str) -> Result<SpectralSet> {
    let doc: SetDoc = serde_json::from_str(text).map_err(parse_err)?;
    let corner = |c: &Corner| -> Result<Vec<Q>> {
        match c {
            Corner::Scalar(s) => Ok(vec![parse_q(s)?]),
            Corner::Point(v) => v.iter().map(|s| parse_q(s)).collect(),
        }
    };
    let boxes = doc
        .iter()
        .map(|[lo, hi]| RatBox::new(corner(lo)?, corner(hi)?))
        .collect::<Result<Vec<_>>>()?;
    let dim = boxes
        .first()
        .map(|b| b.dim())
        .ok_or_else(|| FrameError::Empty("spectral set".into()))?;
    SpectralSet::new(dim, boxes)
}

pub fn set_to_json(e: &SpectralSet) -> Value {
    let doc: SetDoc = e
        .boxes()
        .iter()
        .map(|b| {
            if b.dim() == 1 {
                [Corner::Scalar(fmt_q(&b.lo[0])), Corner::Scalar(fmt_q(&b.hi[0]))]
            } else {
                [
                    Corner::Point(b.lo.iter().map(fmt_q).collect()),
                    Corner::Point(b.hi.iter().map(fmt_q).collect()),
                ]
            }
        })
        .collect();
    serde_json::to_value(doc).expect("sets serialize")
}

pub const BUILTINS: &[&str] = &["fj2", "fj3", "bidual", "shannon", "shannon-wavelet", "super2"];

fn affine_doc(a: i64, generators: Vec<GeneratorDoc>) -> SystemDoc {
    SystemDoc {
        kind: Kind::Affine,
        dim: 1,
        lattice: None,
        dilation: Some(vec![vec![a.to_string()]]),
        translation: None,
        generators,
    }
}

fn translation_doc(generators: Vec<GeneratorDoc>) -> SystemDoc {
    SystemDoc {
        kind: Kind::Translation,
        dim: 1,
        lattice: Some(vec![vec!["1".into()]]),
        dilation: None,
        translation: None,
        generators,
    }
}

/// File name and JSON of every document a builtin example consists of.
pub fn builtin_documents(name: &str) -> Result<Vec<(String, Value)>> {
    let one = |file: &str, d: SystemDoc| vec![(file.to_string(), d.to_json())];
    Ok(match name {
        "fj2" => one("fj2.json", affine_doc(2, vec![GeneratorDoc::named("frazier_jawerth", &[q(2), qr(1, 128)])])),
        "fj3" => one("fj3.json", affine_doc(3, vec![GeneratorDoc::named("frazier_jawerth", &[q(3), qr(1, 27)])])),
        "shannon" => one("shannon.json", translation_doc(vec![GeneratorDoc::named("shannon", &[])])),
        "shannon-wavelet" => one(
            "shannon-wavelet.json",
            affine_doc(2, vec![GeneratorDoc::named("shannon_wavelet", &[])]),
        ),
        "bidual" => {
            let (_, phi) = bidual_pair();
            let e = SpectralSet::intervals(&[(qr(-1, 4), qr(1, 4))]);
            vec![
                (
                    "psi.json".into(),
                    translation_doc(vec![GeneratorDoc::named("plateau", &[qr(1, 4), qr(1, 2)])]).to_json(),
                ),
                ("phi.json".into(), translation_doc(vec![GeneratorDoc::from_generator(&phi)?]).to_json()),
                ("E.json".into(), set_to_json(&e)),
            ]
        }
        "super2" => {
            let band = |a: Q, b: Q| GeneratorDoc::named("characteristic", &[-b.clone(), -a.clone(), a, b]);
            vec![
                ("super2_a.json".into(), affine_doc(2, vec![band(qr(1, 4), qr(1, 2))]).to_json()),
                ("super2_b.json".into(), affine_doc(2, vec![band(qr(1, 8), qr(1, 4))]).to_json()),
            ]
        }
        other => {
            return Err(FrameError::InvalidParameter(format!(
                "unknown builtin {other:?}; expected one of {}",
                BUILTINS.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{plateau, shannon};

    #[test]
    fn named_translation_system() {
        let text = r#"{"kind": "translation", "dim": 1, "lattice": [["1/2"]],
            "generators": [{"name": "shannon"}, {"name": "plateau", "params": ["1/4", "1/2"], "gain_sq": "1/4"}]}"#;
        let System::Translation(t) = parse_system(text).unwrap() else { panic!() };
        assert_eq!(t.entries().len(), 2);
        assert_eq!(t.entries()[0].lattice, RatMatrix::scalar(1, qr(1, 2)));
        assert_eq!(t.entries()[1].generator.gain_sq(), &qr(1, 4));
    }

    #[test]
    fn pieces_round_trip() {
        let (_, phi) = bidual_pair();
        let doc = GeneratorDoc::from_generator(&phi).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GeneratorDoc = serde_json::from_str(&text).unwrap();
        let g = back.build().unwrap().remove(0);
        assert_eq!(g.piecewise(), phi.piecewise());
        let t = TranslationSystem::single(RatMatrix::identity(1), plateau(&qr(1, 4), &qr(1, 2)).unwrap().scaled_gain(&q(2))).unwrap();
        let System::Translation(again) = SystemDoc::from_translation(&t).unwrap().build().unwrap() else { panic!() };
        assert_eq!(again.entries()[0].generator.gain_sq(), &q(2));
        assert_eq!(again.entries()[0].generator.piecewise(), t.entries()[0].generator.piecewise());
    }

    #[test]
    fn complex_coefficients() {
        let text = r#"{"pieces": [{"lo": "0", "hi": "1", "coeffs": [["1", "-1/2"], "2"]}]}"#;
        let doc: GeneratorDoc = serde_json::from_str(text).unwrap();
        let g = doc.build().unwrap().remove(0);
        let v = g.evaluate_exact(&qr(1, 2)).unwrap();
        assert_eq!(v, CQ::new(q(2), qr(-1, 2)));
    }

    #[test]
    fn affine_documents() {
        let text = r#"{"kind": "quasi-affine", "dim": 1, "dilation": [["3"]],
            "generators": [{"name": "frazier_jawerth", "params": ["3", "1/27"]}]}"#;
        let System::Affine(a) = parse_system(text).unwrap() else { panic!() };
        assert_eq!(a.convention, Convention::QuasiAffine);
        let doc = SystemDoc::from_affine(&a).unwrap();
        assert_eq!(doc.kind, Kind::QuasiAffine);
        let bad = r#"{"kind": "affine", "dim": 1, "dilation": [["1/2"]], "generators": [{"name": "shannon_wavelet"}]}"#;
        assert_eq!(parse_system(bad).unwrap_err(), FrameError::NotExpansive);
    }

    #[test]
    fn malformed_inputs() {
        let bad_q = r#"{"kind": "translation", "dim": 1, "lattice": [["1/0"]], "generators": [{"name": "shannon"}]}"#;
        assert_eq!(parse_system(bad_q).unwrap_err().kind(), "parse_error");
        let no_form = r#"{"kind": "translation", "dim": 1, "lattice": [["1"]], "generators": [{}]}"#;
        assert_eq!(parse_system(no_form).unwrap_err().kind(), "parse_error");
        let unknown = r#"{"kind": "translation", "dim": 1, "lattice": [["1"]], "generators": [{"name": "gabor"}]}"#;
        assert_eq!(parse_system(unknown).unwrap_err().kind(), "unknown_profile");
        assert_eq!(parse_system("{").unwrap_err().kind(), "parse_error");
    }

    #[test]
    fn sets() {
        let e = parse_set(r#"[["-1/4", "1/4"], ["1/2", "0.75"]]"#).unwrap();
        assert_eq!(e.measure(), qr(3, 4));
        let back = parse_set(&set_to_json(&e).to_string()).unwrap();
        assert_eq!(back, e);
        let sq = parse_set(r#"[[["0", "0"], ["1", "1/2"]]]"#).unwrap();
        assert_eq!(sq.dim(), 2);
        assert!(parse_set("[]").is_err());
    }

    #[test]
    fn builtins_parse() {
        for name in BUILTINS {
            for (file, v) in builtin_documents(name).unwrap() {
                if file == "E.json" {
                    parse_set(&v.to_string()).unwrap();
                } else {
                    parse_system(&v.to_string()).unwrap();
                }
            }
        }
        let docs = builtin_documents("bidual").unwrap();
        let System::Translation(psi) = parse_system(&docs[0].1.to_string()).unwrap() else { panic!() };
        assert_eq!(psi.entries()[0].generator.piecewise(), plateau(&qr(1, 4), &qr(1, 2)).unwrap().piecewise());
        let System::Translation(s) = parse_system(&builtin_documents("shannon").unwrap()[0].1.to_string()).unwrap() else { panic!() };
        assert_eq!(s.entries()[0].generator.piecewise(), shannon().piecewise());
        assert!(builtin_documents("fj4").is_err());
    }
}
