//! Lattices, dual lattices, and coset enumeration.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{FrameError, Result};
use crate::geometry::RatBox;
use crate::matrix::RatMatrix;
use crate::rational::{fmt_q, Q};

/// Invertible lattice matrices C_p indexed by labels p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFamily {
    labels: Vec<String>,
    mats: Vec<RatMatrix>,
}

impl LatticeFamily {
    pub fn new(entries: Vec<(String, RatMatrix)>) -> Result<Self> {
        let d = entries
            .first()
            .map(|(_, m)| m.dim())
            .ok_or_else(|| FrameError::Empty("lattice family".into()))?;
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        for (l, m) in entries {
            if m.dim() != d {
                return Err(FrameError::DimensionMismatch {
                    expected: d,
                    found: m.dim(),
                });
            }
            if m.det().is_zero() {
                return Err(FrameError::Singular);
            }
            labels.push(l);
            mats.push(m);
        }
        Ok(LatticeFamily { labels, mats })
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self, p: usize) -> &RatMatrix {
        &self.mats[p]
    }
}

/// A dilation matrix with its exact integrality and numerical expansiveness flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationMatrix {
    a: RatMatrix,
    expansive: bool,
    integer_valued: bool,
}

impl DilationMatrix {
    pub fn new(a: RatMatrix) -> Result<Self> {
        if a.det().is_zero() {
            return Err(FrameError::Singular);
        }
        Ok(DilationMatrix {
            expansive: a.is_expansive(),
            integer_valued: a.is_integer(),
            a,
        })
    }

    /// Like `new` but rejects non-expansive matrices.
    pub fn expansive(a: RatMatrix) -> Result<Self> {
        let d = Self::new(a)?;
        if !d.expansive {
            return Err(FrameError::NotExpansive);
        }
        Ok(d)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn is_expansive(&self) -> bool {
        self.expansive
    }

    pub fn is_integer(&self) -> bool {
        self.integer_valued
    }

    /// A*.
    pub fn adjoint(&self) -> RatMatrix {
        self.a.transpose()
    }
}

/// C′ = (C*)⁻¹.
pub fn dual_matrix(c: &RatMatrix) -> Result<RatMatrix> {
    c.dual()
}

pub fn fmt_point(x: &[Q]) -> String {
    if x.len() == 1 {
        return fmt_q(&x[0]);
    }
    let parts: Vec<String> = x.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

/// All nonzero points of Λ = ∪_p C_p′ℤᵈ in the closed box, sorted and duplicate-free.
pub fn enumerate_alpha(fam: &LatticeFamily, bound: &RatBox, limit: usize) -> Result<Vec<Vec<Q>>> {
    if bound.dim() != fam.dim() {
        return Err(FrameError::DimensionMismatch {
            expected: fam.dim(),
            found: bound.dim(),
        });
    }
    let mut out = BTreeSet::new();
    if bound.is_empty_closed() {
        return Ok(Vec::new());
    }
    let zero = vec![Q::zero(); fam.dim()];
    for c in &fam.mats {
        let cd = c.dual()?;
        // z = C* α ranges over the image of the box under C*
        let zbox = bound.image(&c.transpose(), &zero);
        for z in zbox.integer_points(limit)? {
            let z: Vec<Q> = z.into_iter().map(Q::from_integer).collect();
            let alpha = cd.mul_vec(&z);
            if alpha != zero && bound.contains_closed(&alpha) {
                out.insert(alpha);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// 𝒫_α = {p : C_p* α ∈ ℤᵈ}, as indices into the family.
pub fn p_alpha(fam: &LatticeFamily, alpha: &[Q]) -> Vec<usize> {
    (0..fam.len())
        .filter(|&p| {
            fam.mats[p]
                .transpose()
                .mul_vec(alpha)
                .iter()
                .all(|v| v.is_integer())
        })
        .collect()
}

/// Whether v ∈ Mℤᵈ.
pub fn in_lattice(m: &RatMatrix, v: &[Q]) -> Result<bool> {
    Ok(m.inverse()?.mul_vec(v).iter().all(|x| x.is_integer()))
}

/// Integer points of the closed box outside A*ℤᵈ.
pub fn enumerate_q(a: &DilationMatrix, bound: &RatBox, limit: usize) -> Result<Vec<Vec<Q>>> {
    if !a.is_integer() {
        return Err(FrameError::NotIntegerMatrix);
    }
    let astar = a.adjoint();
    let mut out = Vec::new();
    for z in bound.integer_points(limit)? {
        let z: Vec<Q> = z.into_iter().map(Q::from_integer).collect();
        if !in_lattice(&astar, &z)? {
            out.push(z);
        }
    }
    Ok(out)
}
