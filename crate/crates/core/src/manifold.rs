//! Homology-manifold certification by links, and the singular vertex set.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::reduced_homology;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::ManifoldError;
use crate::group::GroupDescriptor;
use crate::presentation::edge_path_presentation;
use crate::quotient::{simply_connected_verdict, Budgets, SCVerdict, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkVerdict {
    SphereLike,
    DiskLike,
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkCertificate {
    pub simplex: Simplex,
    /// Reduced homology of the link in degrees `-1, 0, …, dim link`.
    pub link_homology: Vec<GroupDescriptor>,
    pub verdict: LinkVerdict,
    /// `n − k − 1`.
    pub expected_sphere_dim: isize,
}

/// Classify reduced homology (degrees from −1) against `S^m`.
pub fn classify_link(homology: &[GroupDescriptor], m: isize) -> LinkVerdict {
    let sphere = homology.iter().enumerate().all(|(i, h)| {
        if i as isize - 1 == m {
            h.is_integers()
        } else {
            h.is_zero()
        }
    }) && (m + 1) < homology.len() as isize
        && m >= -1;
    if sphere {
        LinkVerdict::SphereLike
    } else if homology.iter().all(|h| h.is_zero()) {
        LinkVerdict::DiskLike
    } else {
        LinkVerdict::Bad
    }
}

pub fn certificate(k: &SimplicialComplex, s: &Simplex) -> Result<LinkCertificate, ManifoldError> {
    let link = k.link(s)?;
    let link_homology = reduced_homology(&link);
    let m = k.dim() - s.dim() as isize - 1;
    let verdict = classify_link(&link_homology, m);
    Ok(LinkCertificate { simplex: s.clone(), link_homology, verdict, expected_sphere_dim: m })
}

/// Certificates for every simplex, in dimension then index order.
pub fn certify_links(k: &SimplicialComplex) -> Result<Vec<LinkCertificate>, ManifoldError> {
    if !k.is_pure() {
        return Err(ManifoldError::NotPure);
    }
    if k.is_void_link() {
        return Ok(Vec::new());
    }
    let all: Vec<&Simplex> = (0..=k.dim() as usize).flat_map(|d| k.simplices(d).iter()).collect();
    all.par_iter().map(|s| certificate(k, s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVerdict {
    pub vertex: String,
    pub link_dimension: isize,
    pub verdict: SCVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularSet {
    /// Every vertex whose link was tested, in vertex order.
    pub tested: Vec<VertexVerdict>,
    /// Tokens of vertices with a verified non-simply-connected link.
    pub singular: Vec<String>,
    /// Tokens of vertices whose link could not be decided.
    pub undetermined: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ManifoldReport {
    pub dimension: isize,
    pub is_homology_manifold: bool,
    pub closed: bool,
    pub boundary: SimplicialComplex,
    pub certificates: Vec<LinkCertificate>,
    /// Present when the complex is a homology manifold.
    pub singular: Option<SingularSet>,
    pub notes: Vec<String>,
    /// Token form of every certificate's simplex.
    tokens: Vec<Vec<String>>,
}

const DIM3_NOTE: &str = "vertices with 3-dimensional simply connected links are reported as manifold points; \
no geometric recognition of the link is attempted";

/// Link-criterion certification. Simplices with disk-like links form the
/// boundary, which must itself be a closed homology manifold of one
/// dimension less.
pub fn is_homology_manifold(k: &SimplicialComplex, budgets: &Budgets) -> Result<ManifoldReport, ManifoldError> {
    let certificates = certify_links(k)?;
    let n = k.dim();
    let mut notes = Vec::new();
    let disk: Vec<&Simplex> =
        certificates.iter().filter(|c| c.verdict == LinkVerdict::DiskLike).map(|c| &c.simplex).collect();
    let any_bad = certificates.iter().any(|c| c.verdict == LinkVerdict::Bad);
    let boundary_facets: Vec<Simplex> = disk.iter().filter(|s| s.dim() as isize == n - 1).map(|s| (*s).clone()).collect();
    let boundary = if boundary_facets.is_empty() {
        SimplicialComplex::empty()
    } else {
        k.subcomplex(boundary_facets.clone())
    };
    let mut ok = !any_bad;
    if ok && !disk.is_empty() {
        // disk-like simplices must be exactly the simplices of the boundary
        let count = if boundary.is_void_link() { 0 } else { boundary.simplex_count() };
        let covered = disk.iter().all(|s| boundary_facets.iter().any(|f| s.is_face_of(f)));
        if !covered || count != disk.len() || !boundary.is_pure() {
            ok = false;
            notes.push("disk-like simplices do not form a pure codimension-one subcomplex".into());
        } else {
            let sub = certify_links(&boundary)?;
            if sub.iter().any(|c| c.verdict != LinkVerdict::SphereLike) {
                ok = false;
                notes.push("boundary is not a closed homology manifold".into());
            }
        }
    }
    let singular = if ok { Some(singular_set(k, &certificates, budgets)?) } else { None };
    if ok && n == 4 {
        notes.push(DIM3_NOTE.into());
    }
    let tokens = certificates.iter().map(|c| k.tokens_of(&c.simplex)).collect();
    Ok(ManifoldReport { dimension: n, is_homology_manifold: ok, closed: disk.is_empty(), boundary, certificates, singular, notes, tokens })
}

fn singular_set(k: &SimplicialComplex, certs: &[LinkCertificate], budgets: &Budgets) -> Result<SingularSet, ManifoldError> {
    let candidates: Vec<&LinkCertificate> = certs
        .iter()
        .filter(|c| c.simplex.dim() == 0 && c.verdict == LinkVerdict::SphereLike && c.expected_sphere_dim >= 3)
        .collect();
    let tested: Vec<VertexVerdict> = candidates
        .par_iter()
        .map(|c| {
            let link = k.link(&c.simplex)?;
            let p = edge_path_presentation(&link)?;
            let verdict = simply_connected_verdict(&p, budgets);
            Ok(VertexVerdict { vertex: k.tokens_of(&c.simplex)[0].clone(), link_dimension: c.expected_sphere_dim, verdict })
        })
        .collect::<Result<_, ManifoldError>>()?;
    let pick = |v: Verdict| tested.iter().filter(|t| t.verdict.value == v).map(|t| t.vertex.clone()).collect();
    Ok(SingularSet { singular: pick(Verdict::No), undetermined: pick(Verdict::Unknown), tested })
}

/// Vertices with non-simply-connected links of dimension at least 3.
pub fn singular_vertices(k: &SimplicialComplex, budgets: &Budgets) -> Result<SingularSet, ManifoldError> {
    let report = is_homology_manifold(k, budgets)?;
    report
        .singular
        .ok_or_else(|| ManifoldError::Precondition("complex is not a homology manifold".into()))
}

impl ManifoldReport {
    pub fn bad_simplices(&self) -> Vec<&[String]> {
        self.certificates
            .iter()
            .zip(&self.tokens)
            .filter(|(c, _)| c.verdict == LinkVerdict::Bad)
            .map(|(_, t)| t.as_slice())
            .collect()
    }

    pub fn certificate_for(&self, tokens: &[&str]) -> Option<&LinkCertificate> {
        self.tokens
            .iter()
            .position(|t| t.len() == tokens.len() && t.iter().zip(tokens).all(|(a, b)| a == b))
            .map(|i| &self.certificates[i])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let certificates: Vec<serde_json::Value> = self
            .certificates
            .iter()
            .zip(&self.tokens)
            .map(|(c, t)| {
                serde_json::json!({
                    "simplex": t,
                    "link_homology": c.link_homology,
                    "verdict": c.verdict,
                    "expected_sphere_dim": c.expected_sphere_dim,
                })
            })
            .collect();
        let boundary = if self.boundary.is_void_link() { Vec::new() } else { self.boundary.facet_tokens() };
        serde_json::json!({
            "dimension": self.dimension,
            "is_homology_manifold": if self.is_homology_manifold { "yes" } else { "no" },
            "closed": self.closed,
            "boundary_subcomplex": boundary,
            "bad_simplices": self.bad_simplices(),
            "singular_vertices": self.singular.as_ref().map(|s| &s.singular),
            "undetermined_vertices": self.singular.as_ref().map(|s| &s.undetermined),
            "link_verdicts": self.singular.as_ref().map(|s| &s.tested),
            "certificates": certificates,
            "notes": self.notes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn fast() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn sphere_is_closed_manifold() {
        let r = is_homology_manifold(&corpus::sphere(4), &fast()).unwrap();
        assert!(r.is_homology_manifold && r.closed);
        assert!(r.singular.unwrap().singular.is_empty());
        assert!(r.certificates.iter().all(|c| c.verdict == LinkVerdict::SphereLike));
    }

    #[test]
    fn simplex_has_boundary() {
        let r = is_homology_manifold(&corpus::simplex(3), &fast()).unwrap();
        assert!(r.is_homology_manifold);
        assert!(!r.closed);
        assert_eq!(r.boundary.f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn cone_on_torus_is_bad_at_apex() {
        let k = corpus::torus().cone_with("apex").unwrap();
        let r = is_homology_manifold(&k, &fast()).unwrap();
        assert!(!r.is_homology_manifold);
        let apex = r.certificate_for(&["apex"]).unwrap();
        assert_eq!(apex.verdict, LinkVerdict::Bad);
        assert_eq!(apex.link_homology[2], GroupDescriptor::free(2));
        assert_eq!(r.bad_simplices(), vec![&["apex".to_string()][..]]);
    }

    #[test]
    fn projective_plane_and_facets() {
        let r = is_homology_manifold(&corpus::rp2(), &fast()).unwrap();
        assert!(r.is_homology_manifold && r.closed);
        let facet = &r.certificates.last().unwrap();
        assert_eq!(facet.expected_sphere_dim, -1);
        assert_eq!(facet.link_homology, vec![GroupDescriptor::free(1)]);
    }

    #[test]
    fn wedge_is_not_a_manifold() {
        let k = SimplicialComplex::from_facets(&[vec!["a", "b"], vec!["b", "c"], vec!["b", "d"]]).unwrap();
        let r = is_homology_manifold(&k, &fast()).unwrap();
        assert!(!r.is_homology_manifold);
        assert!(singular_vertices(&k, &fast()).is_err());
    }

    #[test]
    fn non_pure_is_rejected() {
        let k = SimplicialComplex::from_facets(&[vec!["a", "b", "c"], vec!["c", "d"]]).unwrap();
        assert_eq!(is_homology_manifold(&k, &fast()).unwrap_err(), ManifoldError::NotPure);
    }

    #[test]
    fn suspension_of_poincare_sphere() {
        let k = corpus::sigma_p();
        let s = singular_vertices(&k, &fast()).unwrap();
        assert_eq!(s.singular, vec!["~n1".to_string(), "~s1".to_string()]);
        assert!(s.undetermined.is_empty());
    }

    #[test]
    fn double_suspension_has_no_singular_vertices() {
        let k = corpus::sigma2p();
        let r = is_homology_manifold(&k, &fast()).unwrap();
        assert!(r.is_homology_manifold && r.closed);
        let s = r.singular.unwrap();
        assert!(s.singular.is_empty() && s.undetermined.is_empty());
        assert_eq!(s.tested.len(), 20);
    }
}
