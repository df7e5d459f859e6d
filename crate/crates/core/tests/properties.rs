use num_bigint::BigUint;
use proptest::prelude::*;
use trinity_core::factor::{factorize_u64, is_prime_u64};
use trinity_core::field::{FieldCtx, FieldElem};
use trinity_core::flagmap::{toys, Color, RegularMap};
use trinity_core::intpoly::{cyclotomic, palindromic_expansion, real_cyclotomic, resultant, IntPoly};
use trinity_core::lift::{lifted_step, CornerVoltage, LiftedFlag};
use trinity_core::norm::{norm_g, NormReport};
use trinity_core::plan;
use trinity_core::psl2::{MapSeed, MatrixRing};

fn psi_identity_holds(k: u64) -> bool {
    let psi = real_cyclotomic(k).unwrap();
    let r = psi.degree().unwrap();
    palindromic_expansion(&psi, r) == cyclotomic(k).unwrap()
}

fn base_maps() -> Vec<RegularMap> {
    let mut maps: Vec<RegularMap> = toys::NAMES.iter().map(|n| toys::by_name(n).unwrap()).collect();
    for (k, p) in [(5, 11), (7, 13)] {
        let seed = MapSeed::build(k, p).unwrap();
        let ring = seed.ring();
        let table = seed.enumerate(10_000).unwrap();
        maps.push(RegularMap::from_group(&table.elements, seed.triple(), |a, b| ring.proj_mul(a, b)).unwrap());
    }
    maps
}

#[test]
fn dual_and_petrie_are_involutions_preserving_edges() {
    for m in base_maps() {
        assert_eq!(m.dual().dual(), m);
        assert_eq!(m.petrie().petrie(), m);
        let e = m.invariants().edges;
        assert_eq!(m.dual().invariants().edges, e);
        assert_eq!(m.petrie().invariants().edges, e);
        let inv = m.invariants();
        let d = m.dual().invariants();
        assert_eq!((d.vertices, d.faces), (inv.faces, inv.vertices));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_expands_to_phi(k in 3u64..=200) {
        prop_assert!(psi_identity_holds(k));
    }

    #[test]
    fn resultant_is_norm_squared(idx in 0usize..22) {
        let primes: Vec<u64> = (5..=97).filter(|&k| is_prime_u64(k)).collect();
        let k = primes[idx % primes.len()];
        let q = IntPoly::from_i64s(&[3, 2, 3]);
        let res = resultant(&cyclotomic(k).unwrap(), &q).unwrap();
        let n = norm_g(k).unwrap();
        prop_assert_eq!(res, &n * &n);
    }

    #[test]
    fn factorization_multiplies_back(n in 2u64..u64::MAX / 2) {
        let f = factorize_u64(n);
        prop_assert_eq!(f.iter().map(|&(q, e)| q.pow(e)).product::<u64>(), n);
        prop_assert!(f.iter().all(|&(q, _)| is_prime_u64(q)));
    }

    #[test]
    fn quadratic_field_arithmetic(a0 in 0u64..13, a1 in 0u64..13, b0 in 0u64..13, b1 in 0u64..13) {
        let f = FieldCtx::quadratic(13).unwrap();
        let (a, b) = (FieldElem { a0, a1 }, FieldElem { a0: b0, a1: b1 });
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow(a, 168), f.one());
        }
        let sq = f.square(a);
        let root = f.sqrt(sq).unwrap();
        prop_assert_eq!(f.square(root), sq);
    }

    #[test]
    fn projective_form_ignores_scalars(idx in 0usize..660, s in 1u64..11) {
        let seed = MapSeed::build(5, 11).unwrap();
        let ring: MatrixRing = seed.ring();
        let table = seed.enumerate(1000).unwrap();
        let g = table.elements[idx];
        let scaled = ring.scale(g.matrix(), FieldElem::base(s));
        prop_assert_eq!(ring.proj(&scaled).unwrap(), g);
    }

    #[test]
    fn lifted_steps_are_involutions(base in 0u32..24, coords in prop::collection::btree_map(0u32..12, 1u32..5, 0..6), c in 0usize..3) {
        let m = toys::tetrahedron();
        let cv = CornerVoltage::assign(&m, 5).unwrap();
        let f = LiftedFlag { base, v: coords.into_iter().collect() };
        let color = Color::ALL[c];
        let g = lifted_step(&m, &cv, &f, color);
        prop_assert_eq!(lifted_step(&m, &cv, &g, color), f);
    }

    #[test]
    fn plans_are_valid(half in 2u64..5000) {
        let m = 2 * half + 1;
        let p = plan::plan(m).unwrap();
        prop_assert!(p.is_valid());
        prop_assert_eq!(p.d * p.n, m);
    }
}

#[test]
fn prime_valency_factors_pass_congruences() {
    for k in (5u64..=61).filter(|&k| is_prime_u64(k)) {
        let rep = NormReport::compute(k).unwrap();
        assert_eq!(rep.factor_product(), rep.norm.magnitude().clone());
        assert!(rep.checks.iter().all(|c| c.passes()), "k={k}");
        assert!(rep.factorization.iter().all(|f| f.prime >= BigUint::from(5u32)));
    }
}
