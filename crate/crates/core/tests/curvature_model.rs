use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use yamabe_core::curvature_model::{
    parse_rational, random_admissible, random_admissible_with_jets, weyl_decompose,
    BoundaryCurvature, JetEvaluator, Tensor,
};
use yamabe_core::Error;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn delta(a: usize, b: usize) -> BigRational {
    if a == b {
        rat(1, 1)
    } else {
        BigRational::zero()
    }
}

/// Full Riemann tensor at the base point in Fermi coordinates, normal index last.
fn riemann(curv: &BoundaryCurvature) -> Tensor {
    let m = curv.m();
    let nn = m;
    let mut r = Tensor::zeros(m + 1, 4);
    for idx in curv.wbar().indices().collect::<Vec<_>>() {
        r.set(&idx, curv.wbar().get(&idx).clone());
    }
    for i in 0..m {
        for j in 0..m {
            let v = curv.rn().get(&[i, j]).clone();
            r.set(&[nn, i, nn, j], v.clone());
            r.set(&[i, nn, j, nn], v.clone());
            r.set(&[nn, i, j, nn], -v.clone());
            r.set(&[i, nn, nn, j], -v);
        }
    }
    r
}

/// Weyl tensor straight from its definition.
fn weyl_by_definition(curv: &BoundaryCurvature) -> Tensor {
    let r = riemann(curv);
    let d = r.dim();
    let n = BigRational::from_integer(BigInt::from(d as i64));
    let two = rat(2, 1);
    let one = rat(1, 1);
    let mut ric = Tensor::zeros(d, 2);
    for b in 0..d {
        for e in 0..d {
            let s: BigRational = (0..d).map(|a| r.get(&[a, b, a, e]).clone()).sum();
            ric.set(&[b, e], s);
        }
    }
    let scal: BigRational = (0..d).map(|a| ric.get(&[a, a]).clone()).sum();
    let mut w = Tensor::zeros(d, 4);
    for idx in r.indices().collect::<Vec<_>>() {
        let (a, b, c, e) = (idx[0], idx[1], idx[2], idx[3]);
        let ricci_part = ric.get(&[a, c]) * delta(b, e) - ric.get(&[a, e]) * delta(b, c)
            + ric.get(&[b, e]) * delta(a, c)
            - ric.get(&[b, c]) * delta(a, e);
        let scal_part = &scal * (delta(a, c) * delta(b, e) - delta(a, e) * delta(b, c));
        let v = r.get(&idx) - ricci_part / (&n - &two) + scal_part / ((&n - &two) * (&n - &one));
        w.set(&idx, v);
    }
    w
}

#[test]
fn reconstruction_matches_definition() {
    for n in 4..=10 {
        for seed in 0..3 {
            let curv = random_admissible(n, seed, &rat(1, 1)).unwrap();
            assert_eq!(
                curv.weyl_reconstruct().unwrap(),
                weyl_by_definition(&curv),
                "n={n} seed={seed}"
            );
        }
    }
}

#[test]
fn reconstructed_weyl_is_trace_free() {
    let curv = random_admissible(7, 11, &rat(3, 2)).unwrap();
    let w = curv.weyl_reconstruct().unwrap();
    let d = w.dim();
    for b in 0..d {
        for e in 0..d {
            let t: BigRational = (0..d).map(|a| w.get(&[a, b, a, e]).clone()).sum();
            assert!(t.is_zero());
        }
    }
}

#[test]
fn normal_block_scales_rn() {
    let curv = random_admissible(8, 2, &rat(1, 1)).unwrap();
    let w = curv.weyl_reconstruct().unwrap();
    let m = curv.m();
    for i in 0..m {
        for j in 0..m {
            assert_eq!(w.get(&[m, i, m, j]), &(curv.rn().get(&[i, j]) * rat(5, 6)));
        }
    }
}

#[test]
fn validation_rejects_broken_data() {
    let m = 5;
    let mut rn = Tensor::zeros(m, 2);
    rn.set(&[0, 1], rat(1, 1));
    let c = BoundaryCurvature::new(6, rn, Tensor::zeros(m, 4), rat(0, 1)).unwrap();
    assert!(matches!(c.validate(), Err(Error::SymmetryViolation(_))));

    let mut wbar = Tensor::zeros(m, 4);
    wbar.set(&[0, 1, 0, 1], rat(1, 1));
    let c = BoundaryCurvature::new(6, Tensor::zeros(m, 2), wbar, rat(0, 1)).unwrap();
    assert!(matches!(c.validate(), Err(Error::SymmetryViolation(_))));
    assert!(c.weyl_reconstruct().is_err());
}

#[test]
fn json_examples() {
    let c = BoundaryCurvature::from_json_str(r#"{"n": 6, "Rn": [[1,0,0,0,0],[0,-1,0,0,0],[0,0,0,0,0],[0,0,0,0,0],[0,0,0,0,0]], "N2": "1/3"}"#)
        .unwrap();
    assert_eq!(c.s(), rat(2, 1));
    assert_eq!(c.n2(), &rat(1, 3));
    assert_eq!(c.d(), rat(-13, 6));
    assert!(c.weyl_nonzero());

    assert!(BoundaryCurvature::from_json_str(r#"{"n": 6, "bogus": 1}"#).is_err());
    assert!(BoundaryCurvature::from_json_str("not json").is_err());
    assert!(!BoundaryCurvature::from_json_str(r#"{"n": 7}"#)
        .unwrap()
        .weyl_nonzero());
    assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
    assert_eq!(parse_rational("-7/21").unwrap(), rat(-1, 3));
    assert_eq!(parse_rational("1e-2").unwrap(), rat(1, 100));
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn generation_is_deterministic() {
    let a = random_admissible_with_jets(7, 42, &rat(1, 1)).unwrap();
    let b = random_admissible_with_jets(7, 42, &rat(1, 1)).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_ne!(
        a.to_json(),
        random_admissible_with_jets(7, 43, &rat(1, 1))
            .unwrap()
            .to_json()
    );
}

#[test]
fn scalar_curvature_vanishes_at_base_point() {
    for n in 6..=8 {
        let curv = random_admissible_with_jets(n, 9, &rat(1, 1)).unwrap();
        let jet = JetEvaluator::new(&curv, 4).unwrap();
        let zero = vec![0.0; curv.m()];
        assert_eq!(jet.scalar_curvature(&zero, 0.0), 0.0);
        let mut sc = jet.scratch();
        let v: Vec<f64> = (0..curv.m()).map(|i| i as f64 - 1.0).collect();
        assert_eq!(jet.metric_correction(&zero, 0.0, &v, &mut sc), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_round_trip(n in 4u32..9, seed in any::<u64>(), jets in any::<bool>()) {
        let curv = if jets {
            random_admissible_with_jets(n, seed, &rat(1, 2)).unwrap()
        } else {
            random_admissible(n, seed, &rat(1, 2)).unwrap()
        };
        curv.validate().unwrap();
        let back = BoundaryCurvature::from_json_str(&curv.to_json().to_string()).unwrap();
        prop_assert_eq!(back.to_json(), curv.to_json());
    }

    #[test]
    fn decompose_inverts_reconstruct(n in 4u32..9, seed in any::<u64>()) {
        let curv = random_admissible(n, seed, &rat(1, 1)).unwrap();
        let (rn, wbar) = weyl_decompose(&curv.weyl_reconstruct().unwrap()).unwrap();
        prop_assert_eq!(&rn, curv.rn());
        prop_assert_eq!(&wbar, curv.wbar());
    }

    #[test]
    fn weyl_is_linear_in_scale(seed in any::<u64>(), p in 1i64..5) {
        let a = random_admissible(7, seed, &rat(1, 1)).unwrap();
        let b = random_admissible(7, seed, &rat(p, 1)).unwrap();
        prop_assert_eq!(b.weyl_reconstruct().unwrap(), a.weyl_reconstruct().unwrap().scale(&rat(p, 1)));
        prop_assert_eq!(b.s(), a.s() * rat(p * p, 1));
    }
}
