use gauss_dioph::factorization::{
    factor, gcd_canonical, gcd_euclidean, is_gaussian_prime, sqrt_in_g, to_g,
};
use gauss_dioph::families::{
    check_canonical, check_solution, divisibility_profile, generate, param_recover,
    reduce_to_canonical, sample_params, system_params, Family, Triple,
};
use gauss_dioph::mordell::{mordell_normalize, mordell_solutions, verify_mordell, MordellInstance};
use gauss_dioph::oracle::{enumerate_primitive, SearchBox};
use gauss_dioph::parity::{
    classify, in_fundamental_domain, is_oi, normalize_odd_to_oi, normalize_to_d, ParityClass,
};
use gauss_dioph::{GaussianInt, UnitPower};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gauss(r: i64) -> impl Strategy<Value = GaussianInt> {
    (-r..=r, -r..=r).prop_map(|(a, b)| GaussianInt::new(a, b))
}

fn nonzero(r: i64) -> impl Strategy<Value = GaussianInt> {
    gauss(r).prop_filter("nonzero", |z| !z.is_zero())
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

proptest! {
    #[test]
    fn ring_axioms(a in gauss(1000), b in gauss(1000), c in gauss(1000)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a + &(-&a), GaussianInt::zero());
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    #[test]
    fn division_with_remainder(z in gauss(10_000), w in nonzero(500)) {
        let (q, r) = z.divrem(&w).unwrap();
        prop_assert_eq!(&q * &w + &r, z);
        // nearest-integer rounding bounds the remainder by half the divisor's norm
        prop_assert!(r.norm() * 2u32 <= w.norm());
    }

    #[test]
    fn text_round_trip(z in gauss(1_000_000)) {
        let s = z.to_string();
        prop_assert_eq!(s.parse::<GaussianInt>().unwrap(), z);
    }

    #[test]
    fn factorization_is_multiplicative(z in nonzero(300), w in nonzero(300)) {
        let fz = factor(&z).unwrap();
        let fw = factor(&w).unwrap();
        prop_assert_eq!(factor(&(&z * &w)).unwrap(), fz.merge(&fw));
        for (p, e) in &fz.odd_factors {
            prop_assert!(*e > 0);
            prop_assert!(is_gaussian_prime(p).unwrap());
            prop_assert!(is_oi(p).unwrap());
        }
    }

    #[test]
    fn gcds_agree(z in nonzero(400), w in nonzero(400)) {
        let canonical = gcd_canonical(&z, &w).unwrap();
        let mut unit_free = canonical.clone();
        unit_free.unit_exp = UnitPower::ONE;
        let d = unit_free.reconstruct();
        prop_assert!(z.is_divisible_by(&d) && w.is_divisible_by(&d));
        let e = gcd_euclidean(&z, &w);
        prop_assert_eq!(to_g(&e).unwrap(), d);
    }

    #[test]
    fn associate_normalizations(z in nonzero(1000)) {
        let (n, w) = normalize_to_d(&z).unwrap();
        prop_assert!(in_fundamental_domain(&w));
        prop_assert_eq!(w.rotate(n), z.clone());
        if z.is_odd() {
            let (m, b) = normalize_odd_to_oi(&z).unwrap();
            prop_assert!(is_oi(&b).unwrap());
            prop_assert_eq!(b.rotate(m), z.clone());
        }
        let g = to_g(&z).unwrap();
        prop_assert_eq!(factor(&g).unwrap().unit_exp, UnitPower::ONE);
    }

    #[test]
    fn squares_in_g(z in nonzero(300)) {
        let g = to_g(&z).unwrap();
        prop_assert_eq!(sqrt_in_g(&g.square()).unwrap(), Some(g));
    }

    #[test]
    fn product_classes(z in nonzero(200), w in nonzero(200)) {
        use ParityClass::*;
        let (cz, cw) = (classify(&z).unwrap(), classify(&w).unwrap());
        let cp = classify(&(&z * &w)).unwrap();
        let expected = match (cz, cw) {
            (O0, O0) | (OI, OI) => Some(OI),
            (O0, OI) | (OI, O0) => Some(O0),
            (E0, _) | (_, E0) => Some(E0),
            (EI, EI) => Some(E0),
            (EI, _) | (_, EI) => Some(EI),
        };
        prop_assert_eq!(Some(cp), expected);
    }

    #[test]
    fn mordell_solutions_verify(k in nonzero(12), v in nonzero(12)) {
        let (k, v) = (to_g(&k).unwrap(), to_g(&v).unwrap());
        prop_assume!(gcd_euclidean(&k, &v).is_unit());
        let inst = MordellInstance::new(k, v).unwrap();
        let sols = mordell_solutions(&inst);
        prop_assert_eq!(sols.len(), inst.expected_count());
        for s in &sols {
            let (x, y) = (s.x(), s.y());
            prop_assert!(verify_mordell(&x, &y, &inst));
            prop_assert_eq!(mordell_normalize(&x, &y).unwrap(), s.t.inverse());
        }
    }

    #[test]
    fn generated_solutions_reduce_and_recover(f in family(), seed in any::<u64>(), rot in 0i64..4, swap in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = sample_params(f, &mut rng, 2_000);
        let t = generate(f, &params).unwrap();
        prop_assert!(check_canonical(f, &t));
        if f.is_complete() {
            prop_assert_eq!(param_recover(f, &t).unwrap(), params.clone());
        }
        if !t.primitive {
            return Ok(());
        }
        // scramble: global rotation, and for symmetric forms swap X and Z
        let u = UnitPower::new(rot);
        let mut scrambled = t.map(|c| c.rotate(u));
        if swap && f != Family::D {
            scrambled = Triple::new(scrambled.z.clone(), scrambled.y.clone(), scrambled.x.clone());
        }
        if check_canonical(f, &scrambled) || check_solution(f, &scrambled) {
            prop_assert!(divisibility_profile(f, &scrambled).unwrap());
            let (c, cert) = reduce_to_canonical(f, &scrambled).unwrap();
            prop_assert!(check_canonical(f, &c));
            prop_assert_eq!(cert.apply(&c), scrambled);
            if f.is_complete() {
                let p = param_recover(f, &c).unwrap();
                prop_assert_eq!(generate(f, &p).unwrap(), c);
            }
        }
    }

    #[test]
    fn system_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = sample_params(Family::D, &mut rng, 5_000);
        let sys = system_params(&params.p, &params.q).unwrap();
        prop_assert!(sys.is_valid());
        let disc = &params.p.square() + GaussianInt::new(1, -1) * params.q.square();
        prop_assert_eq!(disc.square(), sys.discriminant_squared());
    }
}

#[test]
fn oracle_set_is_closed_under_sign_changes_and_rotation() {
    for f in Family::ALL {
        let sols = enumerate_primitive(f, SearchBox::new(4).unwrap());
        let set: std::collections::BTreeSet<_> = sols.iter().cloned().collect();
        for t in &sols {
            assert!(check_solution(f, t));
            let images = [
                Triple::new(-&t.x, t.y.clone(), t.z.clone()),
                Triple::new(t.x.clone(), -&t.y, t.z.clone()),
                Triple::new(t.x.clone(), t.y.clone(), -&t.z),
                t.map(|c| c.rotate(UnitPower::new(1))),
            ];
            for img in images {
                assert!(set.contains(&img), "{f}: image {img} of {t} missing");
            }
        }
    }
}

#[test]
fn every_b_solution_has_even_y() {
    // B1 and B2 split the solutions of X² + iY² + Z² = 0 by the exponent of
    // 1+i in Y; no solution with odd Y exists, so the split is exhaustive
    let b = 5;
    let all = enumerate_primitive(Family::B1, SearchBox::new(b).unwrap()).len()
        + enumerate_primitive(Family::B2, SearchBox::new(b).unwrap()).len();
    let mut naive = 0;
    let r = b;
    for x1 in -r..=r {
        for x2 in -r..=r {
            for y1 in -r..=r {
                for y2 in -r..=r {
                    let x = GaussianInt::new(x1, x2);
                    let y = GaussianInt::new(y1, y2);
                    let rhs = -(x.square() + y.square().rotate(UnitPower::new(1)));
                    for z1 in -r..=r {
                        for z2 in -r..=r {
                            let z = GaussianInt::new(z1, z2);
                            if z.square() == rhs {
                                let t = Triple::new(x.clone(), y.clone(), z);
                                if t.primitive && !t.has_zero() {
                                    naive += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert_eq!(all, naive);
}
