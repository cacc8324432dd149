use std::collections::BTreeMap;

use hyperalg::chevalley::StructureConstants;
use hyperalg::grammar::{parse_element, serialize_element, TorusForm};
use hyperalg::rootdata::{RootSystem, Weight};
use hyperalg::straighten::{Algebra, PBWElement};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn systems() -> impl Strategy<Value = (&'static str, u64)> {
    prop::sample::select(vec![("A1", 2), ("A1", 5), ("A2", 2), ("A2", 3), ("B2", 3), ("G2", 2), ("A3", 2)])
}

/// A product of up to three root powers with small divided exponents and a torus binomial.
fn word(alg: &Algebra, picks: &[(usize, u32)], torus: (usize, u64)) -> PBWElement {
    let rank = alg.root_system().rank();
    let mut d = vec![0i64; rank];
    d[torus.0 % rank] = 1;
    let h = alg.hspace().binomial(&d, 0, torus.1).unwrap();
    let mut factors: Vec<PBWElement> =
        picks.iter().map(|&(k, n)| alg.root_power(k % (2 * alg.nu()), n)).collect();
    factors.insert(factors.len() / 2, alg.torus(h));
    alg.product(&factors).unwrap()
}

fn picks() -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0usize..64, 1u32..4), 0..3)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn serialize_then_parse_is_identity(sys in systems(), ps in picks(), t in (0usize..4, 0u64..3), idem in any::<bool>()) {
        let alg = Algebra::new(sys.0, sys.1, 2).unwrap();
        let x = word(&alg, &ps, t);
        let form = if idem { TorusForm::Idempotent } else { TorusForm::Binomial };
        let text = serialize_element(&alg, &x, form);
        prop_assert_eq!(parse_element(&alg, &text).unwrap(), x);
    }

    #[test]
    fn binomial_basis_round_trip(sys in systems(), seed in prop::collection::vec(0u32..1000, 1..64)) {
        let alg = Algebra::new(sys.0, sys.1, 2).unwrap();
        let hs = alg.hspace();
        let h = hs.from_fn(|l| {
            let i = l.iter().fold(0usize, |a, &c| a * 31 + c as usize);
            seed[i % seed.len()] % sys.1 as u32
        });
        let coeffs = hs.to_binomial_basis(&h);
        prop_assert_eq!(hs.from_binomial_basis(&coeffs).unwrap(), h);
        let empty: BTreeMap<Vec<u64>, u32> = BTreeMap::new();
        prop_assert!(hyperalg::hpart::HSpace::is_zero(&hs.from_binomial_basis(&empty).unwrap()));
    }

    #[test]
    fn multiplication_is_associative(sys in systems(), a in picks(), b in picks(), c in picks(), t in (0usize..4, 0u64..3)) {
        let alg = Algebra::new(sys.0, sys.1, 2).unwrap();
        let (x, y, z) = (word(&alg, &a, t), word(&alg, &b, (t.0 + 1, 1)), word(&alg, &c, (0, 0)));
        let left = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_respect_weights(sys in systems(), a in picks(), b in picks()) {
        let alg = Algebra::new(sys.0, sys.1, 2).unwrap();
        let rs = alg.root_system();
        let weight = |ps: &[(usize, u32)]| {
            ps.iter().fold(Weight(vec![0; rs.rank()]), |w, &(k, n)| {
                let r = &rs.root(k % (2 * alg.nu())).0;
                let coords: Vec<i32> = r.iter().map(|&c| c * n as i32).collect();
                w.add(&rs.weight_of(&coords))
            })
        };
        let x = word(&alg, &a, (0, 0));
        let y = word(&alg, &b, (0, 0));
        let total = weight(&a).add(&weight(&b));
        let xy = alg.multiply(&x, &y).unwrap();
        for (f, _, e) in xy.terms() {
            prop_assert_eq!(alg.term_weight(f, e), total.clone());
        }
    }

    #[test]
    fn shift_is_invertible(sys in systems(), w in prop::collection::vec(-20i64..20, 4), seed in 0u32..1000) {
        let alg = Algebra::new(sys.0, sys.1, 2).unwrap();
        let hs = alg.hspace();
        let w = Weight(w[..hs.rank()].to_vec());
        let neg = Weight(w.0.iter().map(|c| -c).collect());
        let h = hs.from_fn(|l| l.iter().fold(seed, |a, &c| a.wrapping_mul(7).wrapping_add(c as u32)) % sys.1 as u32);
        prop_assert_eq!(hs.shift(&hs.shift(&h, &w), &neg), h);
    }
}

#[test]
fn flipped_constant_is_detected() {
    let rs = RootSystem::build("A2").unwrap();
    let sc = StructureConstants::new(&rs);
    assert_eq!(sc.jacobi_violations(&rs), 0);
    let (i, j) = (0, 2);
    assert!(rs.sum(i, j).is_some());
    let bad = sc.with_flipped_pair(i, j);
    assert!(bad.jacobi_violations(&rs) > 0);

    // the engine built on the flipped table stops being associative
    let alg = Algebra::from_parts(rs.clone(), bad, 3, 2).unwrap();
    let gens: Vec<PBWElement> = (0..2 * alg.nu()).map(|k| alg.root_power(k, 1)).collect();
    let broken = gens.iter().any(|x| {
        gens.iter().any(|y| {
            gens.iter().any(|z| {
                let l = alg.multiply(&alg.multiply(x, y).unwrap(), z).unwrap();
                let r = alg.multiply(x, &alg.multiply(y, z).unwrap()).unwrap();
                l != r
            })
        })
    });
    assert!(broken);
}
