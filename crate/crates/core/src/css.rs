//! The link-class cochain of a closed homology manifold, its Rokhlin
//! reduction, the lifting obstruction, and the dual twisted homology class.
//!
//! For an `(n−4)`-simplex `σ` with link `L`, pick the reference orientation
//! `o(G)` of `L` that makes its first facet positive. The css cochain takes
//! the value `s_σ · [L]` on the dual cone `D(σ)`, where `s_σ` compares the
//! boundary orientation of `D(σ)` (see [`crate::conical`]) with `o`:
//!
//! ```text
//! s_σ = ε(σ, σ ∪ G) · sgn(σ, G) · o(G)        for any facet G of L
//! ```
//!
//! The homology chain on the representative lift of `σ` (sorted
//! orientation) has the same coefficient: `L` is oriented so that
//! `[σ] * [L]` is the canonical orientation of the cover near the lift.
//! Links recognized as `S3` contribute zero.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bockstein::{bockstein, lift_exists};
use crate::chain::{BasisKind, ChainComplexData, ClassHandle, Cochain, Direction};
use crate::coefficients::{CoefficientSystem, ShortExactSequence};
use crate::complex::{permutation_sign, Simplex, SimplicialComplex};
use crate::conical::{local_orientation, shuffle_sign, ConicalChainComplex};
use crate::cover::{coherent_orientation, DoubleCover};
use crate::error::{AlgebraError, CssError};
use crate::group::{int_json, GroupDescriptor};
use crate::manifold::{certify_links, is_homology_manifold, LinkVerdict};
use crate::matrix::Integer;
use crate::quotient::Budgets;
use crate::theta::{link_class_of, LinkClassLabel, ThetaModel, S3};

#[derive(Clone, Copy, Debug)]
pub struct CssOptions {
    /// Append unrecognized link classes to the model as free generators.
    pub auto_extend: bool,
    pub budgets: Budgets,
}

impl Default for CssOptions {
    fn default() -> Self {
        CssOptions { auto_extend: true, budgets: Budgets::default() }
    }
}

/// One `(n−4)`-simplex with its link class and orientation sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkEntry {
    pub simplex: Simplex,
    pub label: String,
    /// Sign from the dual-cone boundary orientation.
    pub cone_sign: i8,
    /// Sign from the orientation induced on the link by the cover.
    pub chain_sign: i8,
}

#[derive(Clone, Debug)]
pub struct ThetaCochain {
    pub dimension: usize,
    /// Degree-4 cochain on the conical complex (empty when `n < 4`).
    pub cochain: Cochain,
    pub model: ThetaModel,
    pub entries: Vec<LinkEntry>,
    /// One label per distinct class name, with its profile.
    pub classes: Vec<LinkClassLabel>,
    pub warnings: Vec<String>,
}

fn reference_orientation(link_facets: &[Simplex], k: &SimplicialComplex) -> Result<Vec<i8>, CssError> {
    if link_facets.len() == 1 && link_facets[0].is_empty() {
        return Ok(vec![1]);
    }
    let link = k.subcomplex(link_facets.to_vec());
    coherent_orientation(&link).ok_or_else(|| CssError::NotSphereLink("non-orientable link".into()))
}

/// `(cone_sign, chain_sign)` for an `(n−4)`-simplex, computed along the two
/// routes and checked for constancy over the link facets.
fn orientation_signs(k: &SimplicialComplex, cover: &DoubleCover, sigma: &Simplex) -> Result<(i8, i8), CssError> {
    let link_facets = k.link_facets(sigma)?;
    let o = reference_orientation(&link_facets, k)?;
    let mut cone = None;
    let mut chain = None;
    for (g, og) in link_facets.iter().zip(&o) {
        let f = sigma.union(g);
        let eps = local_orientation(k, cover, sigma, &f);
        // cone route: flag adding G's vertices in decreasing order, whose
        // boundary face away from b_σ is the subdivided G with sign sgn(rev)
        let rev: Vec<_> = g.vertices().iter().rev().copied().collect();
        let c = eps * shuffle_sign(sigma.vertices(), &rev) * permutation_sign(&rev) * og;
        // chain route: [σ]·[G] against ε[F]
        let induced = eps * shuffle_sign(sigma.vertices(), g.vertices());
        let h = induced * og;
        for (slot, v) in [(&mut cone, c), (&mut chain, h)] {
            match slot {
                None => *slot = Some(v),
                Some(x) if *x != v => {
                    return Err(CssError::NotAManifold(format!("inconsistent orientation around {}", k.describe(sigma))))
                }
                _ => {}
            }
        }
    }
    Ok((cone.unwrap_or(1), chain.unwrap_or(1)))
}

fn unit(g: usize, i: usize, sign: i8) -> Vec<Integer> {
    let mut v = vec![Integer::zero(); g];
    v[i] = Integer::from(sign);
    v
}

/// Certify, build the conical complex, and assemble the css cochain.
pub fn css_cochain(
    k: &SimplicialComplex,
    model: &ThetaModel,
    options: &CssOptions,
) -> Result<(ConicalChainComplex, ThetaCochain), CssError> {
    model.validate()?;
    let conical = ConicalChainComplex::new(k).map_err(|e| CssError::NotAManifold(e.to_string()))?;
    let tc = css_cochain_on(k, &conical, model, options)?;
    Ok((conical, tc))
}

pub fn css_cochain_on(
    k: &SimplicialComplex,
    conical: &ConicalChainComplex,
    model: &ThetaModel,
    options: &CssOptions,
) -> Result<ThetaCochain, CssError> {
    let n = conical.n;
    let mut model = model.clone();
    if n < 4 {
        let g = model.generators.len();
        return Ok(ThetaCochain {
            dimension: n,
            cochain: Cochain::zero(4, 0, g),
            model,
            entries: Vec::new(),
            classes: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let simplices = k.simplices(n - 4);
    // links with identical facet sets are classified once
    let keys: Vec<Vec<Vec<String>>> = simplices
        .par_iter()
        .map(|s| Ok(k.link(s)?.facet_tokens()))
        .collect::<Result<_, CssError>>()?;
    let mut first: BTreeMap<&[Vec<String>], usize> = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        first.entry(key.as_slice()).or_insert(i);
    }
    let distinct: Vec<usize> = first.values().copied().collect();
    let labels: BTreeMap<usize, LinkClassLabel> = distinct
        .par_iter()
        .map(|&i| Ok((i, link_class_of(k, &simplices[i], &options.budgets)?)))
        .collect::<Result<_, CssError>>()?;
    let found: Vec<(LinkClassLabel, (i8, i8))> = simplices
        .par_iter()
        .zip(&keys)
        .map(|(s, key)| Ok((labels[&first[key.as_slice()]].clone(), orientation_signs(k, &conical.cover, s)?)))
        .collect::<Result<_, CssError>>()?;
    let mut classes: Vec<LinkClassLabel> = Vec::new();
    let mut warnings = Vec::new();
    let mut entries = Vec::with_capacity(simplices.len());
    for (s, (label, (cone_sign, chain_sign))) in simplices.iter().zip(found) {
        if !classes.iter().any(|c| c.name == label.name) {
            if let Some(w) = &label.warning {
                warnings.push(w.clone());
            }
            classes.push(label.clone());
        }
        entries.push(LinkEntry { simplex: s.clone(), label: label.name, cone_sign, chain_sign });
    }
    for c in &classes {
        if c.name != S3 && model.index_of(&c.name).is_none() {
            if !options.auto_extend {
                return Err(CssError::MissingClass(c.name.clone()));
            }
            model.ensure(&c.name);
        }
    }
    let g = model.generators.len();
    let values = entries
        .iter()
        .map(|e| match model.index_of(&e.label) {
            Some(i) if e.label != S3 => unit(g, i, e.cone_sign),
            _ => vec![Integer::zero(); g],
        })
        .collect();
    let cochain = Cochain { degree: 4, generators: g, values };
    Ok(ThetaCochain { dimension: n, cochain, model, entries, classes, warnings })
}

/// Exact check that `δc = 0` on the conical complex.
pub fn verify_cocycle(conical: &ConicalChainComplex, c: &Cochain, model: &ThetaModel) -> bool {
    if conical.n < 4 {
        return true;
    }
    conical.data.coboundary(c, &model.coefficients()).is_zero_in(&model.coefficients())
}

#[derive(Clone, Debug)]
pub struct CssClass {
    pub class: ClassHandle,
    /// A cochain whose coboundary is the css cochain, when the class is zero.
    pub witness: Option<Cochain>,
}

pub fn css_class(conical: &ConicalChainComplex, tc: &ThetaCochain) -> Result<CssClass, CssError> {
    let coeffs = tc.model.coefficients();
    if conical.n < 4 {
        let class = ClassHandle { degree: 4, group: GroupDescriptor::zero(), coordinates: Vec::new() };
        return Ok(CssClass { class, witness: None });
    }
    let classes = conical.data.classes(4, &coeffs, Direction::Cohomology)?;
    let class = classes.class_of(&tc.cochain)?;
    let witness = if class.is_zero() { classes.coboundary_witness(&tc.cochain)? } else { None };
    Ok(CssClass { class, witness })
}

/// Entrywise `rok`: a `Z/2` cochain.
pub fn rokhlin_reduction(c: &Cochain, model: &ThetaModel) -> Result<Cochain, CssError> {
    let two = Integer::from(2);
    let values = c
        .values
        .iter()
        .map(|v| {
            let mut acc = Integer::zero();
            for (x, g) in v.iter().zip(&model.generators) {
                if x.is_zero() {
                    continue;
                }
                let r = g.rok.ok_or_else(|| CssError::MissingRok(g.name.clone()))?;
                acc += x * Integer::from(r);
            }
            Ok(vec![acc.mod_floor(&two)])
        })
        .collect::<Result<_, CssError>>()?;
    Ok(Cochain { degree: c.degree, generators: 1, values })
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub kernel: GroupDescriptor,
    pub class: ClassHandle,
    /// Whether the `Z/2` class comes from a model-valued class, decided by
    /// an independent solve.
    pub lift_exists: bool,
}

impl ObstructionReport {
    pub fn obstructed(&self) -> bool {
        !self.class.is_zero()
    }

    /// The connecting class vanishes exactly when a lift exists.
    pub fn exact(&self) -> bool {
        self.class.is_zero() == self.lift_exists
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kernel": self.kernel,
            "class": self.class.to_json(),
            "obstructed": self.obstructed(),
            "lift_exists": self.lift_exists,
            "exact": self.exact(),
        })
    }
}

/// `β(ksm)` through `0 → ker rok → model → Z/2 → 0`, on any complex.
pub fn triangulation_obstruction(
    c: &ChainComplexData,
    ksm: &Cochain,
    model: &ThetaModel,
) -> Result<ObstructionReport, CssError> {
    model.validate()?;
    let rok = model.rok_vector().map_err(|missing| CssError::MissingRok(missing.join(", ")))?;
    let z2 = CoefficientSystem::mod_k(2);
    if ksm.generators != 1 || ksm.len() != c.dims().get(ksm.degree).copied().unwrap_or(usize::MAX) {
        return Err(AlgebraError::Dimension("ksm must be a Z/2 cochain on the complex".into()).into());
    }
    if !c.coboundary(ksm, &z2).is_zero_in(&z2) {
        return Err(AlgebraError::NotACocycle(ksm.degree).into());
    }
    if rok.iter().all(|r| *r == 0) {
        let zero_class = c.classes(ksm.degree, &z2, Direction::Cohomology)?.class_of(ksm)?;
        if !zero_class.is_zero() {
            return Err(AlgebraError::NoLift("rok is not surjective, so a nonzero class cannot lift".into()).into());
        }
    }
    let seq = if rok.iter().all(|r| *r == 0) {
        // every model element maps to 0; the zero class lifts trivially
        let group = model.group();
        let g = group.generators();
        ShortExactSequence::new(
            group.clone(),
            group,
            crate::coefficients::PresentedGroup::cyclic(2),
            crate::matrix::IntegerMatrix::identity(g),
            crate::matrix::IntegerMatrix::zeros(1, g),
        )?
    } else {
        ShortExactSequence::kernel_of_character(&model.group(), &rok)?
    };
    let b = bockstein(c, ksm, &seq)?;
    let lift = lift_exists(c, ksm, &seq)?;
    Ok(ObstructionReport { kernel: seq.a.descriptor().clone(), class: b.class, lift_exists: lift.is_some() })
}

#[derive(Clone, Debug)]
pub struct CssHomology {
    pub degree: usize,
    pub chain: Cochain,
    pub is_cycle: bool,
    pub class: Option<ClassHandle>,
}

/// The chain `Σ σ·[link σ]` with orientation-twisted model coefficients.
/// `reverse` flips the canonical orientation of the cover.
pub fn css_homology_class(
    k: &SimplicialComplex,
    conical: &ConicalChainComplex,
    tc: &ThetaCochain,
    reverse: bool,
) -> Result<CssHomology, CssError> {
    let n = conical.n;
    let g = tc.model.generators.len();
    if n < 4 {
        return Ok(CssHomology { degree: 0, chain: Cochain::zero(0, 0, g), is_cycle: true, class: None });
    }
    let flip = if reverse { -1 } else { 1 };
    let values = tc
        .entries
        .iter()
        .map(|e| match tc.model.index_of(&e.label) {
            Some(i) if e.label != S3 => unit(g, i, e.chain_sign * flip),
            _ => vec![Integer::zero(); g],
        })
        .collect();
    let chain = Cochain { degree: n - 4, generators: g, values };
    let twisted = ChainComplexData::twisted_simplicial(k, &conical.cover);
    let coeffs = tc.model.twisted_coefficients();
    let is_cycle = n == 4 || twisted.boundary(&chain, &coeffs).is_zero_in(&coeffs);
    let class = if is_cycle { Some(twisted.classes(n - 4, &coeffs, Direction::Homology)?.class_of(&chain)?) } else { None };
    Ok(CssHomology { degree: n - 4, chain, is_cycle, class })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    /// Conical boundaries equal `±` the transposed twisted boundaries.
    pub complexes_match: bool,
    /// Cochain and chain agree entrywise under simplex ↔ own dual cone.
    pub values_match: bool,
}

impl DualityReport {
    pub fn matched(&self) -> bool {
        self.complexes_match && self.values_match
    }
}

pub fn duality_match(k: &SimplicialComplex, conical: &ConicalChainComplex, tc: &ThetaCochain, h: &CssHomology) -> DualityReport {
    let n = conical.n;
    let twisted = ChainComplexData::twisted_simplicial(k, &conical.cover);
    let complexes_match = (0..n).all(|d| {
        // ∂^cone_{d+1} versus (P − Q) of ∂_{n−d}, transposed
        let cone = conical.data.boundary_plain(d + 1);
        let p = twisted.boundary_plain(n - d);
        let q = twisted.boundary_twisted(n - d).expect("twisted complex");
        let mut expected = p.add(&q.neg()).transpose();
        if (n - d) % 2 == 1 {
            expected = expected.neg();
        }
        *cone == expected
    });
    let values_match = n < 4 || tc.cochain.values == h.chain.values;
    DualityReport { complexes_match, values_match }
}

/// Everything computed for one complex and model.
#[derive(Clone, Debug)]
pub struct CssReport {
    pub tokens: Vec<Vec<String>>,
    pub cochain: ThetaCochain,
    pub cone_labels: Vec<String>,
    /// Labels of degree-3 cones, the basis of the coboundary witness.
    pub witness_labels: Vec<String>,
    pub is_cocycle: bool,
    pub class: CssClass,
    pub ksm: Result<Cochain, String>,
    pub obstruction: Result<ObstructionReport, String>,
    pub homology: CssHomology,
    pub duality: DualityReport,
}

pub fn css_report(k: &SimplicialComplex, model: &ThetaModel, options: &CssOptions) -> Result<CssReport, CssError> {
    let (conical, tc) = css_cochain(k, model, options)?;
    let is_cocycle = verify_cocycle(&conical, &tc.cochain, &tc.model);
    let class = css_class(&conical, &tc)?;
    let ksm = rokhlin_reduction(&tc.cochain, &tc.model).map_err(|e| e.to_string());
    let obstruction = match &ksm {
        Err(e) => Err(e.clone()),
        Ok(_) if conical.n < 4 => Err("dimension below four".to_string()),
        Ok(x) => triangulation_obstruction(&conical.data, x, &tc.model).map_err(|e| e.to_string()),
    };
    let homology = css_homology_class(k, &conical, &tc, false)?;
    let duality = duality_match(k, &conical, &tc, &homology);
    let tokens = tc.entries.iter().map(|e| k.tokens_of(&e.simplex)).collect();
    let cone_labels = if conical.n >= 4 { conical.data.labels(4).to_vec() } else { Vec::new() };
    let witness_labels = if conical.n >= 4 { conical.data.labels(3).to_vec() } else { Vec::new() };
    Ok(CssReport { tokens, cochain: tc, cone_labels, witness_labels, is_cocycle, class, ksm, obstruction, homology, duality })
}

fn vector_json(v: &[Integer]) -> Vec<serde_json::Value> {
    v.iter().map(int_json).collect()
}

impl CssReport {
    /// Indices of `(n−4)`-simplices with nonzero css value.
    pub fn support(&self) -> Vec<usize> {
        self.cochain.cochain.support(&self.cochain.model.coefficients())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tc = &self.cochain;
        let support: Vec<serde_json::Value> = self
            .support()
            .into_iter()
            .map(|i| {
                serde_json::json!({
                    "cone": self.cone_labels[i],
                    "simplex": self.tokens[i],
                    "link_class": tc.entries[i].label,
                    "value": vector_json(&tc.cochain.values[i]),
                })
            })
            .collect();
        let ksm = match &self.ksm {
            Ok(x) => {
                let z2 = CoefficientSystem::mod_k(2);
                serde_json::json!({"support": x.support(&z2).into_iter().map(|i| &self.cone_labels[i]).collect::<Vec<_>>()})
            }
            Err(e) => serde_json::json!({"error": e}),
        };
        let obstruction = match &self.obstruction {
            Ok(o) => o.to_json(),
            Err(e) => serde_json::json!({"error": e}),
        };
        let classes: Vec<serde_json::Value> = tc
            .classes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "name": c.name,
                    "simply_connected": c.profile.simply_connected.value,
                    "quotient_orders": c.profile.quotient_orders,
                    "warning": c.warning,
                })
            })
            .collect();
        let twisted = tc.model.twisted_coefficients();
        let chain_support: Vec<serde_json::Value> = self
            .homology
            .chain
            .support(&twisted)
            .into_iter()
            .map(|i| serde_json::json!([self.tokens[i], vector_json(&self.homology.chain.values[i])]))
            .collect();
        serde_json::json!({
            "dimension": tc.dimension,
            "model": tc.model,
            "link_classes": classes,
            "cochain": {"basis": BasisKind::DualCones, "support": support},
            "is_cocycle": if self.is_cocycle { "yes" } else { "no" },
            "class": self.class.class.to_json(),
            "coboundary_witness": self.class.witness.as_ref().map(|w| w.to_json(BasisKind::DualCones, &self.witness_labels, &tc.model.coefficients())),
            "ksm": ksm,
            "obstruction": obstruction,
            "homology": {
                "degree": self.homology.degree,
                "chain_support": chain_support,
                "is_cycle": self.homology.is_cycle,
                "class": self.homology.class.as_ref().map(|c| c.to_json()),
            },
            "duality": if self.duality.matched() { "yes" } else { "no" },
            "warnings": tc.warnings,
        })
    }
}

/// Outcome of the boundary naturality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundaryCheck {
    /// No boundary, or a boundary of dimension below 4.
    NotApplicable,
    /// `H⁴(K)` vanishes, so the boundary class must be zero; it is.
    Consistent,
    /// `H⁴(K)` vanishes but the boundary class does not.
    Violated,
    /// `H⁴(K) ≠ 0`; the boundary class is reported only.
    Unchecked { boundary_class_zero: bool },
}

/// For a homology manifold with boundary: compute css of the boundary and
/// compare with the restriction of a class from `K`, which must vanish when
/// `H⁴(K; model) = 0`.
pub fn boundary_naturality(k: &SimplicialComplex, model: &ThetaModel, options: &CssOptions) -> Result<BoundaryCheck, CssError> {
    let report = is_homology_manifold(k, &options.budgets)?;
    if !report.is_homology_manifold {
        return Err(CssError::NotAManifold("link criterion fails".into()));
    }
    if report.closed || report.boundary.dim() < 4 {
        return Ok(BoundaryCheck::NotApplicable);
    }
    let boundary = &report.boundary;
    if certify_links(boundary)?.iter().any(|c| c.verdict != LinkVerdict::SphereLike) {
        return Err(CssError::NotAManifold("boundary is not closed".into()));
    }
    let (conical, tc) = css_cochain(boundary, model, options)?;
    let c = css_class(&conical, &tc)?;
    let h4 = ChainComplexData::simplicial(k).cohomology(4, &tc.model.coefficients());
    Ok(if h4.is_zero() {
        if c.class.is_zero() {
            BoundaryCheck::Consistent
        } else {
            BoundaryCheck::Violated
        }
    } else {
        BoundaryCheck::Unchecked { boundary_class_zero: c.class.is_zero() }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::theta::POINCARE;

    #[test]
    fn sphere_has_zero_css() {
        let r = css_report(&corpus::sphere(6), &ThetaModel::empty(), &CssOptions::default()).unwrap();
        assert!(r.support().is_empty());
        assert!(r.is_cocycle && r.class.class.is_zero());
        assert!(r.duality.matched());
    }

    #[test]
    fn low_dimensions_are_empty() {
        let r = css_report(&corpus::rp2(), &ThetaModel::empty(), &CssOptions::default()).unwrap();
        assert!(r.support().is_empty());
        assert!(r.duality.matched());
    }

    #[test]
    fn suspended_poincare_sphere() {
        let k = corpus::sigma_p();
        let r = css_report(&k, &ThetaModel::empty(), &CssOptions::default()).unwrap();
        let support: Vec<&Vec<String>> = r.support().into_iter().map(|i| &r.tokens[i]).collect();
        assert_eq!(support, vec![&vec!["~n1".to_string()], &vec!["~s1".to_string()]]);
        assert!(r.is_cocycle);
        assert!(r.duality.matched());
        assert_eq!(r.cochain.model.generators[0].name, POINCARE);
    }

    #[test]
    fn perturbed_cochain_is_not_a_cocycle() {
        let k = corpus::sigma2p();
        let (conical, mut tc) = css_cochain(&k, &ThetaModel::empty(), &CssOptions::default()).unwrap();
        assert!(verify_cocycle(&conical, &tc.cochain, &tc.model));
        assert_eq!(tc.cochain.support(&tc.model.coefficients()).len(), 4);
        tc.cochain.values[0][0] += 1;
        assert!(!verify_cocycle(&conical, &tc.cochain, &tc.model));
    }

    #[test]
    fn missing_rok_is_an_error() {
        let model = ThetaModel::from_json(r#"{"generators":[{"name":"Poincare"}]}"#).unwrap();
        let (_, tc) = css_cochain(&corpus::sigma_p(), &model, &CssOptions::default()).unwrap();
        assert_eq!(rokhlin_reduction(&tc.cochain, &tc.model).unwrap_err(), CssError::MissingRok("Poincare".into()));
    }

    #[test]
    fn strict_models_reject_new_classes() {
        let opts = CssOptions { auto_extend: false, ..CssOptions::default() };
        let err = css_cochain(&corpus::sigma_p(), &ThetaModel::empty(), &opts).unwrap_err();
        assert_eq!(err, CssError::MissingClass(POINCARE.into()));
    }
}
