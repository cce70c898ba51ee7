use ddouble::catalog::build;
use ddouble::dalgebra::{Ctx, DoubleContext};
use ddouble::field::Field;
use ddouble::label::{parse_scalar, render_scalar, IndecLabel};
use ddouble::modrep::{decompose_with, hom, is_isomorphic, qdim, EngineConfig, ModuleRep};
use ddouble::{Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ctx33() -> Ctx {
    DoubleContext::new(3, 3).unwrap()
}

fn pool(c: &Ctx) -> Vec<IndecLabel> {
    let mut v = Vec::new();
    let lambdas = [Scalar::one(), c.qp(1), Scalar::int(2)];
    for u in 0..c.n {
        for j in 0..c.n {
            v.push(IndecLabel::Simple { u, j });
            if c.simple_dim(u, j) == c.d {
                continue;
            }
            v.push(IndecLabel::Proj { u, j });
            for l in 1..=2 {
                v.push(IndecLabel::StringPlus { u, j, l });
                v.push(IndecLabel::StringMinus { u, j, l });
            }
            for lam in &lambdas {
                v.push(IndecLabel::BandPlus { u, j, l: 1, lambda: lam.clone() });
            }
        }
    }
    v.into_iter().filter_map(|l| l.canonical(c).ok()).collect()
}

fn scalar(order: u32) -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 0..6).prop_map(move |cs| {
        Scalar::from_coeffs(order, cs.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect())
    })
}

fn label_index() -> impl Strategy<Value = usize> {
    0usize..1000
}

fn pick(c: &Ctx, i: usize) -> IndecLabel {
    let p = pool(c);
    p[i % p.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(12), b in scalar(12), c in scalar(12)) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!((a.clone() - b.clone()) + b.clone(), a.clone());
        match a.inv() {
            Some(ai) => prop_assert!((a * ai).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn scalar_literals_round_trip(a in scalar(6)) {
        let c = DoubleContext::new(6, 6).unwrap();
        let s = render_scalar(&c, &a);
        prop_assert_eq!(parse_scalar(&c, &s).unwrap(), a);
    }

    #[test]
    fn labels_round_trip(i in label_index()) {
        let c = ctx33();
        let l = pick(&c, i);
        let s = l.render(&c);
        prop_assert_eq!(IndecLabel::parse(&c, &s).unwrap().canonical(&c).unwrap(), l);
    }

    #[test]
    fn module_json_round_trip(i in label_index()) {
        let c = ctx33();
        let m = build(&c, &pick(&c, i)).unwrap();
        let j = m.to_json();
        let back = ModuleRep::from_json(&c, &j).unwrap();
        prop_assert_eq!(back.to_json(), j);
    }

    #[test]
    fn built_modules_decompose_to_their_label(i in label_index(), seed in 0u64..1000) {
        let c = ctx33();
        let l = pick(&c, i);
        let dec = decompose_with(&build(&c, &l).unwrap(), &EngineConfig { seed, ..Default::default() }).unwrap();
        prop_assert_eq!(dec.labels(), vec![l]);
    }

    #[test]
    fn double_dual_is_isomorphic(i in label_index()) {
        let c = ctx33();
        let m = build(&c, &pick(&c, i)).unwrap();
        prop_assert!(is_isomorphic(&m.dual().dual(), &m).is_some());
    }

    #[test]
    fn tensor_dimension_audit(i in label_index(), k in label_index()) {
        let c = ctx33();
        let (a, b) = (build(&c, &pick(&c, i)).unwrap(), build(&c, &pick(&c, k)).unwrap());
        prop_assume!(a.dim() * b.dim() <= 36);
        let t = a.tensor(&b).unwrap();
        let dec = decompose_with(&t, &EngineConfig::default()).unwrap();
        prop_assert_eq!(dec.total_dim(&c), a.dim() * b.dim());
        prop_assert!(dec.certificate.as_ref().is_some_and(|cert| cert.verify(&t)));
    }

    #[test]
    fn qdim_is_multiplicative(i in label_index(), k in label_index()) {
        let c = ctx33();
        let (a, b) = (build(&c, &pick(&c, i)).unwrap(), build(&c, &pick(&c, k)).unwrap());
        prop_assume!(a.dim() * b.dim() <= 36);
        prop_assert_eq!(qdim(&a.tensor(&b).unwrap()), qdim(&a) * qdim(&b));
    }

    #[test]
    fn hom_tensor_adjunction(i in label_index(), k in label_index(), m in label_index()) {
        let c = ctx33();
        let a = build(&c, &pick(&c, i)).unwrap();
        let b = build(&c, &pick(&c, k)).unwrap();
        let t = build(&c, &pick(&c, m)).unwrap();
        prop_assume!(a.dim() * b.dim() * t.dim() <= 60);
        let lhs = hom(&a.tensor(&b).unwrap(), &t).unwrap().dim();
        let rhs = hom(&a, &b.dual().tensor(&t).unwrap()).unwrap().dim();
        prop_assert_eq!(lhs, rhs);
    }
}
