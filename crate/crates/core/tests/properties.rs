mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use plhm::conical::{incidence_matrix, is_permutation_matrix, ConicalChainComplex};
use plhm::corpus;
use plhm::css::{css_cochain, css_homology_class, rokhlin_reduction, CssOptions};
use plhm::manifold::{certify_links, is_homology_manifold, LinkVerdict};
use plhm::presentation::{replay, simplify, GroupPresentation};
use plhm::quotient::{simply_connected_verdict, Budgets};
use plhm::theta::{ThetaGenerator, ThetaModel};
use plhm::{
    barycentric_subdivision, orientability_and_double_cover, reduced_homology, smith_normal_form, ChainComplexData,
    Cochain, CoefficientSystem, GroupDescriptor, IntegerMatrix, Simplex, SimplicialComplex,
};

fn complex_from(facets: &[BTreeSet<u8>], prefix: &str) -> SimplicialComplex {
    let facets: Vec<Vec<String>> = facets.iter().map(|f| f.iter().map(|v| format!("{prefix}{v}")).collect()).collect();
    SimplicialComplex::from_facets(&facets).expect("nonempty facets")
}

fn small_complex() -> impl Strategy<Value = Vec<BTreeSet<u8>>> {
    prop::collection::vec(prop::collection::btree_set(0u8..7, 1..=4), 1..7)
}

fn all_simplices(k: &SimplicialComplex) -> Vec<Simplex> {
    (0..=k.dim().max(0) as usize).flat_map(|d| k.simplices(d).to_vec()).collect()
}

/// Link facets as token sets; `{∅}` for a facet.
fn link_token_sets(k: &SimplicialComplex, s: &Simplex) -> BTreeSet<BTreeSet<String>> {
    let mut out: BTreeSet<BTreeSet<String>> =
        k.link_facets(s).unwrap().iter().map(|f| k.tokens_of(f).into_iter().collect()).collect();
    if out.is_empty() {
        out.insert(BTreeSet::new());
    }
    out
}

fn squares_vanish(c: &ChainComplexData) -> bool {
    (2..=c.top()).all(|d| {
        let sq = |a: &IntegerMatrix, b: &IntegerMatrix| product_is_zero(a, b);
        let (p1, p2) = (c.boundary_plain(d - 1), c.boundary_plain(d));
        match (c.boundary_twisted(d - 1), c.boundary_twisted(d)) {
            (Some(q1), Some(q2)) => sq(&p1.add(q1), &p2.add(q2)) && sq(&p1.add(&q1.neg()), &p2.add(&q2.neg())),
            _ => sq(p1, p2),
        }
    })
}

fn alternating_faces(k: &SimplicialComplex) -> i64 {
    k.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
}

fn small_budgets() -> Budgets {
    Budgets { tietze_moves: 300, quotient_bound: 24, search_nodes: 50_000, seed: 0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn link_of_join_is_join_of_links(a in small_complex(), b in small_complex(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (ka, kb) = (complex_from(&a, "a"), complex_from(&b, "b"));
        let joined = ka.join(&kb).unwrap();
        let (sa, sb) = (all_simplices(&ka), all_simplices(&kb));
        let (alpha, beta) = (i.get(&sa), j.get(&sb));
        let mut tokens = ka.tokens_of(alpha);
        tokens.extend(kb.tokens_of(beta));
        let ab = joined.simplex_from_tokens(&tokens).unwrap();
        let expected: BTreeSet<BTreeSet<String>> = link_token_sets(&ka, alpha)
            .iter()
            .flat_map(|f| link_token_sets(&kb, beta).into_iter().map(move |g| f.union(&g).cloned().collect()))
            .collect();
        prop_assert_eq!(link_token_sets(&joined, &ab), expected);
    }

    #[test]
    fn boundary_squares_to_zero(a in small_complex()) {
        let k = complex_from(&a, "v");
        prop_assert!(squares_vanish(&ChainComplexData::simplicial(&k)));
        if let Ok((_, cover)) = orientability_and_double_cover(&k) {
            prop_assert!(squares_vanish(&ChainComplexData::twisted_simplicial(&k, &cover)));
        }
    }

    #[test]
    fn subdivision_keeps_euler_characteristic(a in small_complex()) {
        let k = complex_from(&a, "v");
        prop_assert_eq!(barycentric_subdivision(&k).complex.euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn euler_characteristic_from_homology(a in small_complex(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let k = complex_from(&a, "v");
        let c = ChainComplexData::simplicial(&k);
        let field = CoefficientSystem::mod_k(p);
        let chi: i64 = c.homology_all(&field).iter().enumerate()
            .map(|(d, h)| if d % 2 == 0 { h.generator_count() as i64 } else { -(h.generator_count() as i64) })
            .sum();
        prop_assert_eq!(chi, alternating_faces(&k));
        let rational: i64 = c.homology_all(&CoefficientSystem::integers()).iter().enumerate()
            .map(|(d, h)| { let r = h.free_rank as i64; if d % 2 == 0 { r } else { -r } })
            .sum();
        prop_assert_eq!(rational, alternating_faces(&k));
    }

    #[test]
    fn universal_coefficients(a in small_complex()) {
        let k = complex_from(&a, "v");
        let c = ChainComplexData::simplicial(&k);
        let z = CoefficientSystem::integers();
        let (h, co) = (c.homology_all(&z), c.cohomology_all(&z));
        for d in 0..h.len() {
            prop_assert_eq!(h[d].free_rank, co[d].free_rank);
            let below = if d == 0 { Vec::new() } else { h[d - 1].torsion_u64() };
            prop_assert_eq!(co[d].torsion_u64(), below);
        }
    }

    #[test]
    fn snf_postconditions(rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| {
            use rand::Rng;
            if rng.gen_bool(0.4) { rng.gen_range(-30..=30) } else { 0 }
        }).collect()).collect();
        let am = IntegerMatrix::from_dense(&a);
        let s = smith_normal_form(&am);
        prop_assert_eq!(mat_mul(&mat_mul(&dense(&s.u), &dense(&am), rows, cols), &dense(&s.v), cols, cols), dense(&s.s()));
        prop_assert!(is_identity(&mat_mul(&dense(&s.u), &dense(&s.u_inv), rows, rows)));
        prop_assert!(is_identity(&mat_mul(&dense(&s.v_inv), &dense(&s.v), cols, cols)));
        prop_assert!(s.diagonal.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        if rows.min(cols) <= 4 {
            prop_assert_eq!(&s.diagonal, &invariant_factors_by_minors(&dense(&am), rows, cols));
        }
    }

    #[test]
    fn verdicts_replay(g in 1usize..=3, words in prop::collection::vec(prop::collection::vec(prop::sample::select(vec![1i32, -1, 2, -2, 3, -3]), 1..8), 0..4), seed in 0u64..4) {
        let relators: Vec<Vec<i32>> = words.into_iter()
            .map(|w| w.into_iter().filter(|l| l.unsigned_abs() as usize <= g).collect::<Vec<_>>())
            .filter(|w| !w.is_empty())
            .collect();
        let p = GroupPresentation::new(g, relators).unwrap();
        let budgets = Budgets { seed, ..small_budgets() };
        let v = simply_connected_verdict(&p, &budgets);
        prop_assert!(v.verify(&p));
        let out = simplify(&p, 300, seed);
        let state = replay(&p, &out.moves).unwrap();
        prop_assert_eq!(state.is_trivial(), out.trivialized);
        prop_assert_eq!(state.total_length(), out.state.total_length());
    }

    #[test]
    fn random_sphere_combinations_certify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, k) = random_sphere_combination(&mut rng);
        let n = k.dim();
        let certs = certify_links(&k).unwrap();
        prop_assert!(certs.iter().all(|c| c.verdict == LinkVerdict::SphereLike));
        // links have exactly the reduced homology of a sphere
        for c in &certs {
            let m = c.expected_sphere_dim;
            prop_assert_eq!(m, n - c.simplex.dim() as isize - 1);
            for (i, h) in c.link_homology.iter().enumerate() {
                let expected = if i as isize - 1 == m { GroupDescriptor::free(1) } else { GroupDescriptor::zero() };
                prop_assert_eq!(h, &expected);
            }
        }
        for d in 0..=n as usize {
            prop_assert!(is_permutation_matrix(&incidence_matrix(&k, d)));
        }
    }

    #[test]
    fn deck_involution(seed in any::<u64>(), base in prop::sample::select(vec!["rp2", "torus", "sphere"])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = match base {
            "rp2" => shuffle_tokens(&corpus::rp2(), "r", &mut rng),
            "torus" => shuffle_tokens(&corpus::torus(), "t", &mut rng),
            _ => random_sphere_combination(&mut rng).1,
        };
        let (orientable, cover) = orientability_and_double_cover(&k).unwrap();
        prop_assert_eq!(orientable, base != "rp2");
        for v in 0..2 * k.vertex_count() as u32 {
            prop_assert_ne!(cover.deck(v), v);
            prop_assert_eq!(cover.deck(cover.deck(v)), v);
            prop_assert_eq!(cover.projection(cover.deck(v)), cover.projection(v));
        }
        for f in k.facets() {
            let lift = cover.representative_lift(&k, f);
            let image = Simplex::new(lift.vertices().iter().map(|&v| cover.deck(v)).collect()).unwrap();
            let (a, b) = (cover.total_orientation(&lift).unwrap(), cover.total_orientation(&image).unwrap());
            prop_assert_eq!(a, -b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Reduction mod 2 through rok commutes with the coboundary.
    #[test]
    fn rok_commutes_with_coboundary(rok in prop::collection::vec(0u8..2, 1..4), seed in any::<u64>()) {
        use rand::Rng;
        let conical = ConicalChainComplex::new(&corpus::sphere(5)).unwrap();
        let model = ThetaModel {
            generators: rok.iter().enumerate().map(|(i, &r)| ThetaGenerator { name: format!("g{i}"), rok: Some(r) }).collect(),
            relations: Vec::new(),
        };
        let g = rok.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = conical.data.dims()[4];
        let flat: Vec<BigInt> = (0..len * g).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        let c = Cochain::from_flat(4, g, flat);
        let z2 = CoefficientSystem::mod_k(2);
        let lhs = conical.data.coboundary(&rokhlin_reduction(&c, &model).unwrap(), &z2);
        let rhs = rokhlin_reduction(&conical.data.coboundary(&c, &model.coefficients()), &model).unwrap();
        let two = BigInt::from(2);
        let norm = |x: &Cochain| x.values.iter().map(|v| v[0].mod_floor(&two)).collect::<Vec<_>>();
        prop_assert_eq!(norm(&lhs), norm(&rhs));
    }
}

#[test]
fn universal_coefficients_on_corpus() {
    let z = CoefficientSystem::integers();
    for (name, k) in corpus_manifolds().into_iter().chain([("susp3(RP2)".to_string(), corpus::sigma3rp2())]) {
        let c = ChainComplexData::simplicial(&k);
        let (h, co) = (c.homology_all(&z), c.cohomology_all(&z));
        for d in 0..h.len() {
            assert_eq!(h[d].free_rank, co[d].free_rank, "{name} degree {d}");
            let below = if d == 0 { Vec::new() } else { h[d - 1].torsion_u64() };
            assert_eq!(co[d].torsion_u64(), below, "{name} degree {d}");
        }
        assert_eq!(barycentric_subdivision(&k).complex.euler_characteristic(), k.euler_characteristic(), "{name}");
    }
}

#[test]
fn suspensions_of_homology_spheres_certify() {
    for (name, k) in [("S2", corpus::sphere(2)), ("P", corpus::poincare())] {
        let s = k.suspension().unwrap();
        let r = is_homology_manifold(&s, &Budgets::default()).unwrap();
        assert!(r.is_homology_manifold && r.closed, "{name}");
        let h = reduced_homology(&s);
        let n = s.dim() as usize;
        assert!(h.iter().enumerate().all(|(i, g)| if i == n + 1 { g.is_integers() } else { g.is_zero() }), "{name}");
    }
}

#[test]
fn cone_point_over_poincare_is_singular() {
    let k = corpus::poincare().cone_with("apex").unwrap();
    let r = is_homology_manifold(&k, &Budgets::default()).unwrap();
    assert!(r.is_homology_manifold && !r.closed);
    let s = r.singular.unwrap();
    assert!(s.singular.contains(&"apex".to_string()));
}

#[test]
fn reversing_orientation_negates_homology_chain() {
    let k = corpus::sigma2p();
    let (conical, tc) = css_cochain(&k, &ThetaModel::empty(), &CssOptions::default()).unwrap();
    let forward = css_homology_class(&k, &conical, &tc, false).unwrap();
    let backward = css_homology_class(&k, &conical, &tc, true).unwrap();
    let coeffs = tc.model.twisted_coefficients();
    assert_eq!(forward.chain.support(&coeffs), backward.chain.support(&coeffs));
    assert!(!forward.chain.support(&coeffs).is_empty());
    assert_eq!(forward.chain.neg().values, backward.chain.values);
    assert!(forward.is_cycle && backward.is_cycle);
}

#[test]
fn large_sparse_snf() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (rows, cols) in [(200, 200), (180, 90), (60, 150)] {
        let triplets: Vec<(usize, usize, i64)> = (0..rows * 3)
            .map(|_| (rng.gen_range(0..rows), rng.gen_range(0..cols), rng.gen_range(-2..=2)))
            .collect();
        let a = IntegerMatrix::from_triplets(rows, cols, triplets);
        let s = smith_normal_form(&a);
        let uav = s.u.mul(&a).mul(&s.v);
        assert_eq!(uav, s.s());
        assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(rows));
        assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(cols));
        assert!(s.diagonal.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        assert!(s.diagonal.iter().all(|d| !d.is_zero()));
    }
}
