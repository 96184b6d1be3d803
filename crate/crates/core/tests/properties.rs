use hecke_core::amplifier::{self, AmplifierCoefficients, EigenvalueTable};
use hecke_core::hecke::coprime_product;
use hecke_core::intmat::{canonical_label, det_divisors, hnf_col, hnf_row, random_unimodular, same_double_coset};
use hecke_core::json;
use hecke_core::{CosetLabel, HeckeAlgebra, HeckeElement, IntMatrix};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-20i64..=20, 9).prop_filter_map("singular", |e| IntMatrix::from_i64(3, &e).ok())
}

fn upper_bounded(m: &IntMatrix, row_reduced: bool) -> bool {
    let n = m.dim();
    let d = |i: usize| m.entry(i, i).clone();
    (0..n).all(|i| d(i) > BigInt::from(0))
        && (0..n).all(|i| {
            (0..n).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Greater => m.entry(i, j) == &BigInt::from(0),
                std::cmp::Ordering::Less => {
                    let bound = if row_reduced { d(i) } else { d(j) };
                    m.entry(i, j) >= &BigInt::from(0) && m.entry(i, j) < &bound
                }
                _ => true,
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_divisors_two_sided_invariant(m in matrix(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = random_unimodular(3, s1, 10).unwrap();
        let v = random_unimodular(3, s2, 10).unwrap();
        let umv = u.mul(&m).mul(&v);
        prop_assert_eq!(det_divisors(&umv), det_divisors(&m));
        prop_assert!(same_double_coset(&m, &umv));
    }

    #[test]
    fn column_reduction(m in matrix(), s in any::<u64>()) {
        let h = hnf_col(&m);
        prop_assert!(upper_bounded(&h, false));
        prop_assert_eq!(&hnf_col(&h), &h);
        let u = random_unimodular(3, s, 10).unwrap();
        prop_assert_eq!(hnf_col(&u.mul(&m)), h.clone());
        prop_assert_eq!(h.det().magnitude().clone(), m.det().magnitude().clone());
    }

    #[test]
    fn row_reduction(m in matrix(), s in any::<u64>()) {
        let h = hnf_row(&m);
        prop_assert!(upper_bounded(&h, true));
        prop_assert_eq!(&hnf_row(&h), &h);
        let u = random_unimodular(3, s, 10).unwrap();
        prop_assert_eq!(hnf_row(&m.mul(&u)), h);
    }

    #[test]
    fn label_of_diagonal(a in 1u64..6, b in 1u64..6, c in 1u64..6, r in 1u64..4) {
        let s1 = a;
        let s2 = a * b;
        let m = IntMatrix::diag_u64(&[r, r * s1, r * s2 * c]).unwrap();
        let l = canonical_label(&m, &BigRational::one());
        prop_assert_eq!(l.clone(), CosetLabel::from_diagonal(&[r, r * s1, r * s2 * c]).unwrap());
        prop_assert_eq!(l.r().clone(), BigRational::from_integer(r.into()));
        prop_assert_eq!(l.s().to_vec(), vec![BigUint::from(s1), BigUint::from(s2 * c)]);
    }

    #[test]
    fn element_json_round_trip(terms in prop::collection::vec((1u64..5, 1u64..5, -50i64..50, 1i64..9), 0..6)) {
        let e = HeckeElement::from_terms(terms.into_iter().map(|(a, b, num, den)| {
            (CosetLabel::from_diagonal(&[1, a, a * b]).unwrap(), BigRational::new(num.into(), den.into()))
        }));
        let v = json::element_to_json(&e);
        prop_assert_eq!(json::element_from_json(&v).unwrap(), e);
        let text = json::emit(&v);
        prop_assert_eq!(json::reemit(&text).unwrap(), text);
    }

    #[test]
    fn split_bound(vals in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 12), l in 1u64..200) {
        let mut c = EigenvalueTable::new();
        for (ell, (re, im)) in amplifier::support(l).into_iter().zip(vals.iter().cycle()) {
            c.insert(ell, Complex64::new(*re, *im));
        }
        let alpha: AmplifierCoefficients = amplifier::build_alpha(l, &c).unwrap();
        prop_assert!(amplifier::split_bound_check(&alpha, &c).unwrap().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_commute_and_balance(
        p in prop::sample::select(vec![2u64, 3]),
        a in prop::sample::select(vec![[0u32, 0, 1], [0, 1, 1], [0, 1, 2], [0, 0, 2], [1, 1, 2]]),
        b in prop::sample::select(vec![[0u32, 0, 1], [0, 1, 1], [0, 0, 2], [0, 2, 2]]),
    ) {
        let h = HeckeAlgebra::default();
        let (g1, g2) = (CosetLabel::from_exponents(p, &a).unwrap(), CosetLabel::from_exponents(p, &b).unwrap());
        let ab = h.convolve_audited(&g1, &g2).unwrap();
        let ba = h.convolve(&g2, &g1).unwrap();
        prop_assert_eq!(&ab.product, &ba);
        prop_assert!(ab.formulas_agree());
        prop_assert!(ab.degree_sum_holds());
        prop_assert!(ab.supports_agree());
        prop_assert!(ab.product.is_positive_integral());
    }

    #[test]
    fn dispatcher_matches_direct(
        a in prop::sample::select(vec![[0u32, 0, 1], [0, 1, 1], [0, 1, 2]]),
        b in prop::sample::select(vec![[0u32, 0, 1], [0, 1, 1], [0, 1, 2]]),
    ) {
        let h = HeckeAlgebra::default();
        let g1 = CosetLabel::from_exponents(2, &a).unwrap();
        let g2 = CosetLabel::from_exponents(3, &b).unwrap();
        let direct = h.convolve(&g1, &g2).unwrap();
        prop_assert_eq!(&h.multiply(&g1, &g2).unwrap(), &direct);
        prop_assert_eq!(&coprime_product(&g1, &g2).unwrap(), &direct);
    }
}
