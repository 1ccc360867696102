//! Coefficient models for homology 3-spheres, link recognition by
//! invariant profile, and the signature oracle for Rokhlin values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::reduced_homology;
use crate::coefficients::{CoefficientSystem, PresentedGroup};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::CssError;
use crate::group::GroupDescriptor;
use crate::matrix::IntegerMatrix;
use crate::presentation::edge_path_presentation;
use crate::quotient::{quotient_orders, simply_connected_verdict, Budgets, SCVerdict, Verdict};

pub const S3: &str = "S3";
pub const POINCARE: &str = "Poincare";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaGenerator {
    pub name: String,
    #[serde(default)]
    pub rok: Option<u8>,
}

/// Abelian group generated by named link classes modulo integer relations,
/// with Rokhlin values. Orientation reversal acts by negation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaModel {
    pub generators: Vec<ThetaGenerator>,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

impl ThetaModel {
    pub fn empty() -> Self {
        ThetaModel { generators: Vec::new(), relations: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Self, CssError> {
        let m: ThetaModel = serde_json::from_str(text).map_err(|e| CssError::BadModel(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<(), CssError> {
        let g = self.generators.len();
        for (i, a) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|b| b.name == a.name) {
                return Err(CssError::BadModel(format!("duplicate generator {}", a.name)));
            }
            if let Some(r) = a.rok {
                if r > 1 {
                    return Err(CssError::BadModel(format!("rok of {} must be 0 or 1", a.name)));
                }
            }
            if a.name == S3 && a.rok == Some(1) {
                return Err(CssError::BadModel("the S3 class has rok 0".into()));
            }
        }
        for (i, r) in self.relations.iter().enumerate() {
            if r.len() != g {
                return Err(CssError::BadModel(format!("relation {i} has {} entries for {g} generators", r.len())));
            }
            let known = r.iter().zip(&self.generators).all(|(c, gen)| *c == 0 || gen.rok.is_some());
            let sum: i64 = r.iter().zip(&self.generators).map(|(c, gen)| c * gen.rok.unwrap_or(0) as i64).sum();
            if known && sum.rem_euclid(2) != 0 {
                return Err(CssError::BadModel(format!("rok does not vanish on relation {i}")));
            }
        }
        Ok(())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Index of `name`, appending it as a free generator when absent. The
    /// Poincaré class gets its rok from the signature oracle; other new
    /// classes have none.
    pub fn ensure(&mut self, name: &str) -> usize {
        if let Some(i) = self.index_of(name) {
            return i;
        }
        let rok = (name == POINCARE).then(poincare_rok);
        self.generators.push(ThetaGenerator { name: name.to_string(), rok });
        for r in self.relations.iter_mut() {
            r.push(0);
        }
        self.generators.len() - 1
    }

    pub fn group(&self) -> PresentedGroup {
        let rows: Vec<Vec<BigInt>> = self.relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let m = if rows.is_empty() {
            IntegerMatrix::zeros(0, self.generators.len())
        } else {
            IntegerMatrix::from_dense(&rows)
        };
        PresentedGroup::new(self.generators.len(), m).expect("validated shape")
    }

    pub fn coefficients(&self) -> CoefficientSystem {
        CoefficientSystem::new("theta", self.group())
    }

    /// Orientation-twisted coefficients (negation).
    pub fn twisted_coefficients(&self) -> CoefficientSystem {
        self.coefficients().orientation_twisted()
    }

    /// Rok values, or the names of generators without one.
    pub fn rok_vector(&self) -> Result<Vec<u8>, Vec<String>> {
        let missing: Vec<String> =
            self.generators.iter().filter(|g| g.rok.is_none()).map(|g| g.name.clone()).collect();
        if missing.is_empty() {
            Ok(self.generators.iter().map(|g| g.rok.unwrap_or(0)).collect())
        } else {
            Err(missing)
        }
    }
}

/// Invariants used to recognize a homology 3-sphere link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkProfile {
    pub homology: Vec<GroupDescriptor>,
    pub simply_connected: SCVerdict,
    pub quotient_orders: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkClassLabel {
    pub name: String,
    pub profile: LinkProfile,
    pub warning: Option<String>,
}

fn is_three_sphere_homology(h: &[GroupDescriptor]) -> bool {
    h.len() == 5 && h[..4].iter().all(|g| g.is_zero()) && h[4].is_integers()
}

/// Name for a profile: `S3` for a simply connected link, `Poincare` when
/// the quotient orders are exactly 60 and 120, otherwise a label built from
/// the profile.
pub fn label_for(profile: &LinkProfile) -> (String, Option<String>) {
    match profile.simply_connected.value {
        Verdict::Yes => (S3.to_string(), None),
        _ if profile.quotient_orders == [60, 120] => (POINCARE.to_string(), None),
        v => {
            let orders: Vec<String> = profile.quotient_orders.iter().map(|o| o.to_string()).collect();
            let verdict = match v {
                Verdict::No => "no",
                _ => "unknown",
            };
            let name = format!("L[sc={verdict};q={}]", orders.join(","));
            let warning = format!("link recognized only by its profile as {name}; distinct links may share it");
            (name, Some(warning))
        }
    }
}

pub fn link_class(link: &SimplicialComplex, budgets: &Budgets) -> Result<LinkClassLabel, CssError> {
    let homology = reduced_homology(link);
    if !is_three_sphere_homology(&homology) {
        return Err(CssError::NotSphereLink(homology.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ")));
    }
    let p = edge_path_presentation(link)?;
    let simply_connected = simply_connected_verdict(&p, budgets);
    let quotient_orders =
        if simply_connected.value == Verdict::Yes { Vec::new() } else { quotient_orders(&p, budgets) };
    let profile = LinkProfile { homology, simply_connected, quotient_orders };
    let (name, warning) = label_for(&profile);
    Ok(LinkClassLabel { name, profile, warning })
}

/// Label of the link of an `(n−4)`-simplex.
pub fn link_class_of(k: &SimplicialComplex, sigma: &Simplex, budgets: &Budgets) -> Result<LinkClassLabel, CssError> {
    if k.dim() - sigma.dim() as isize != 4 {
        return Err(CssError::NotSphereLink(format!("{} does not have codimension 4", k.describe(sigma))));
    }
    link_class(&k.link(sigma)?, budgets)
}

/// Cartan matrix of `E8`: even, unimodular, positive definite.
pub fn e8_form() -> Vec<Vec<i64>> {
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    m
}

/// Signature and determinant of a symmetric integer matrix, by exact
/// rational congruence diagonalization.
pub fn signature_and_determinant(m: &[Vec<i64>]) -> (i64, BigRational) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut diag = Vec::with_capacity(n);
    let mut det_factor = BigRational::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                det_factor = -det_factor;
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // add row/column j to k: new pivot 2·a_kj (a_jj = 0)
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        diag.push(p.clone());
        if p.is_zero() {
            continue;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
        }
        for c in k + 1..n {
            a[k][c] = BigRational::zero();
        }
        for row in a.iter_mut().skip(k + 1) {
            row[k] = BigRational::zero();
        }
    }
    let sig = diag.iter().map(|d| if d.is_positive() { 1 } else if d.is_negative() { -1 } else { 0 }).sum();
    let det = diag.iter().fold(det_factor, |acc, d| acc * d);
    (sig, det)
}

/// Rokhlin value `σ/8 mod 2` of a homology sphere bounding a plumbing with
/// this even unimodular intersection form.
pub fn rokhlin_from_form(m: &[Vec<i64>]) -> Result<u8, String> {
    if m.iter().enumerate().any(|(i, r)| r[i] % 2 != 0) {
        return Err("form is not even".into());
    }
    if m.iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, x)| *x != m[j][i])) {
        return Err("form is not symmetric".into());
    }
    let (sig, det) = signature_and_determinant(m);
    if det.abs() != BigRational::one() {
        return Err(format!("form is not unimodular (determinant {det})"));
    }
    if sig % 8 != 0 {
        return Err(format!("signature {sig} is not divisible by 8"));
    }
    Ok((sig / 8).rem_euclid(2) as u8)
}

/// `rok(Poincare)` from the `E8` form.
pub fn poincare_rok() -> u8 {
    rokhlin_from_form(&e8_form()).expect("E8 is even unimodular")
}
