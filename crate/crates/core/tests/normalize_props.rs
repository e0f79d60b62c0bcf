use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zxp::interp::{interp, interp_raw, interp_scalar};
use zxp::normalize::*;
use zxp::rules::{random_diagram, random_rewrites, RandomSpec};
use zxp::{Cyclo, Diagram, Phase, Prime};

fn gen(p: Prime, rng: &mut ChaCha8Rng) -> C1Gen {
    let n = p.get() as i64;
    let ph = Phase::new(p.zp(rng.gen_range(0..n)), p.zp(rng.gen_range(0..n)));
    let u = p.zp(rng.gen_range(1..n));
    match rng.gen_range(0..4) {
        0 => C1Gen::Z(ph),
        1 => C1Gen::X(ph),
        2 => C1Gen::H(u),
        _ => C1Gen::Mul(u),
    }
}

fn diagram(p: Prime, closed: bool, rng: &mut ChaCha8Rng) -> Diagram {
    let wires = if closed { 0 } else { rng.gen_range(0..=3) };
    let inputs = rng.gen_range(0..=wires);
    let spec = RandomSpec {
        spiders: rng.gen_range(1..=12 - wires),
        inputs,
        outputs: wires - inputs,
        extra_edges: rng.gen_range(0..4),
    };
    random_diagram(p, spec, rng)
}

fn prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(3u64), Just(5), Just(7)].prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn c1_normalization_is_idempotent(p in prime(), seed in any::<u64>(), len in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word: Vec<C1Gen> = (0..len).map(|_| gen(p, &mut rng)).collect();
        let f = c1_normalize(p, &word);
        let again = c1_normalize(p, &f.word());
        prop_assert_eq!(again.key(), f.key());
        prop_assert!(again.scalar.is_one());
        let g = gen(p, &mut rng);
        let mut longer = word.clone();
        longer.push(g);
        prop_assert_eq!(f.then(g), c1_normalize(p, &longer));
    }

    #[test]
    fn c1_form_matches_its_word(p in prime(), seed in any::<u64>(), len in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word: Vec<C1Gen> = (0..len).map(|_| gen(p, &mut rng)).collect();
        let f = c1_normalize(p, &word);
        let lhs = interp(&word_diagram(p, &word)).unwrap();
        let rhs = interp(&f.to_diagram()).unwrap().scalar_mul(&f.scalar);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_forms_round_trip(p in prime(), unit in 0u8..4, s in 0i64..13, r in -4i64..5) {
        let unit = if p.is_one_mod_four() { unit & 2 } else { unit };
        let nf = ScalarNf::Value { unit, s: p.zp(s), r };
        prop_assert_eq!(scalar_normal_form(&nf.value(p)).unwrap(), nf);
        prop_assert_eq!(interp_scalar(&nf.to_diagram(p)).unwrap(), nf.value(p));
    }

    #[test]
    fn normal_form_preserves_the_interpretation(seed in any::<u64>(), big in any::<bool>()) {
        let p = Prime::new(if big { 5 } else { 3 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = diagram(p, false, &mut rng);
        let want = interp(&d.choi()).unwrap();
        let r = to_rgs_lc(&d).unwrap();
        r.check_reduced().unwrap();
        let got = if r.zero { Cyclo::zero(p) } else { r.scalar.clone() };
        if r.zero {
            prop_assert!(want.is_zero());
        } else {
            prop_assert_eq!(interp(&r.to_diagram()).unwrap().scalar_mul(&got), want);
        }
    }

    #[test]
    fn closed_diagrams_have_scalar_forms(seed in any::<u64>(), big in any::<bool>()) {
        let p = Prime::new(if big { 5 } else { 3 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = diagram(p, true, &mut rng);
        let v = interp_scalar(&d).unwrap();
        let nf = scalar_normal_form(&v).unwrap();
        prop_assert_eq!(nf.value(p), v.clone());
        prop_assert_eq!(interp_scalar(&nf.to_diagram(p)).unwrap(), v);
    }

    #[test]
    fn rewrites_are_decided_equal(seed in any::<u64>()) {
        let p = Prime::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = diagram(p, false, &mut rng);
        let st = random_rewrites(&d, 12, 16, &mut rng);
        let e = with_scalar(&st.graph, &st.scalar).unwrap();
        prop_assert!(interp_raw(&d).unwrap().scaled_eq(&Cyclo::one(p), &interp_raw(&e).unwrap(), &Cyclo::one(p)));
        prop_assert!(decide_equal(&d, &e).unwrap().equal);
        prop_assert!(decide_equal(&d, &d).unwrap().equal);
    }
}
