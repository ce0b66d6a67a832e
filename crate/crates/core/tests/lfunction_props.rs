use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toricnp::field::{evaluate, make_field, torus_iter, trace_counts, FieldCtx, FieldTower, LaurentPoly};
use toricnp::lfunction::{l_polynomial, newton_polygon, toric_sum, PowerSums};

fn random_poly(ctx: &FieldCtx, m: usize, terms: usize, seed: u64) -> LaurentPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = LaurentPoly::new(m);
    for _ in 0..terms {
        let v: Vec<i64> = (0..m).map(|_| rand::Rng::gen_range(&mut rng, -2..=2)).collect();
        f.add_term(ctx, v, ctx.random_nonzero(&mut rng));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn torus_partition_does_not_change_counts(seed in any::<u64>(), parts in 1usize..9) {
        let base = make_field(3, 1).unwrap();
        let tower = FieldTower::new(base.clone(), 2).unwrap();
        let f = random_poly(&base, 2, 3, seed);
        let it = torus_iter(&tower.ext, 2, u128::MAX).unwrap();
        let mut counts = vec![0u64; 3];
        for chunk in it.split(parts) {
            for x in chunk {
                counts[tower.ext.trace(&evaluate(&tower, &f, &x).unwrap()) as usize] += 1;
            }
        }
        prop_assert_eq!(counts, trace_counts(&tower, &f, u128::MAX).unwrap());
    }

    #[test]
    fn sums_do_not_depend_on_the_modulus(seed in any::<u64>()) {
        // f has coefficients in F_3; F_9 built from two different irreducible quadratics.
        let f3 = make_field(3, 1).unwrap();
        let f = random_poly(&f3, 2, 3, seed);
        let a = FieldCtx::from_modulus(3, vec![1, 0, 1]).unwrap();
        let b = FieldCtx::from_modulus(3, vec![2, 1, 1]).unwrap();
        let lift = |ctx: &FieldCtx| {
            let mut g = LaurentPoly::new(2);
            for (v, c) in f.terms() {
                g.add_term(ctx, v.clone(), ctx.from_base(c.coeffs()[0]));
            }
            g
        };
        let (fa, fb) = (lift(&a), lift(&b));
        for k in 1..=2 {
            prop_assert_eq!(toric_sum(&fa, &a, k, u128::MAX).unwrap(), toric_sum(&fb, &b, k, u128::MAX).unwrap());
        }
        let sa = PowerSums::compute(&fa, &a, 2, u128::MAX).unwrap();
        let sb = PowerSums::compute(&fb, &b, 2, u128::MAX).unwrap();
        if let (Ok(la), Ok(lb)) = (l_polynomial(&sa, 2, 2), l_polynomial(&sb, 2, 2)) {
            prop_assert_eq!(newton_polygon(&la, 2), newton_polygon(&lb, 2));
        }
    }
}
