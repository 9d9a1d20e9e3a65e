use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumset_minimax::arith::divisors;
use sumset_minimax::oracle::brute_force_phi;
use sumset_minimax::stability::{evaluate_threshold, measure};
use sumset_minimax::{
    best_construction, evaluate, phi_exact, phi_lower_bound, phi_upper_bound, restricted_sumset,
    Coloring, ResidueSet, SubgroupContext,
};

fn naive_sumset(a: &ResidueSet) -> Vec<usize> {
    let n = a.modulus();
    let v = a.to_vec();
    let mut out: Vec<usize> = v
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| v[i + 1..].iter().map(move |&y| (x + y) % n))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[test]
fn random_stability_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 100_000 {
        let n = rng.gen_range(3..=64);
        let ts: Vec<usize> = divisors(n).into_iter().filter(|&t| t >= 3).collect();
        let t = ts[rng.gen_range(0..ts.len())];
        let density: f64 = rng.gen_range(0.02..0.6);
        let a = ResidueSet::from_residues(n, (0..n).filter(|_| rng.gen_bool(density))).unwrap();
        let h = SubgroupContext::new(n, t).unwrap();
        let r = measure(&a, &h).unwrap();
        assert!(r.actual >= r.cross_bound, "n={n} t={t} A={a}: {r:?}");
        assert!(r.actual >= r.internal_bound, "n={n} t={t} A={a}: {r:?}");
        for s in 0..=3 {
            let th = evaluate_threshold(&r, s);
            if th.hypothesis_holds && r.x > 0 {
                assert!(r.r * r.x + r.alpha_star <= t + s, "n={n} t={t} s={s} A={a}");
                if th.concentrated == Some(true) {
                    assert_eq!(r.r, 0, "n={n} t={t} s={s} A={a}");
                }
            }
        }
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kernel_matches_pairwise_on_multiword_moduli(n in 2usize..300, picks in prop::collection::vec(any::<usize>(), 0..40)) {
        let a = ResidueSet::from_residues(n, picks.iter().map(|x| x % n)).unwrap();
        prop_assert_eq!(restricted_sumset(&a).to_vec(), naive_sumset(&a));
    }

    #[test]
    fn sumset_commutes_with_translation(n in 2usize..200, picks in prop::collection::vec(any::<usize>(), 0..30), v in any::<usize>()) {
        let a = ResidueSet::from_residues(n, picks.iter().map(|x| x % n)).unwrap();
        let v = v % n;
        prop_assert_eq!(restricted_sumset(&a.translate(v)), restricted_sumset(&a).translate(2 * v % n));
    }

    #[test]
    fn sumset_size_meets_lower_bound(n in 2usize..200, picks in prop::collection::vec(any::<usize>(), 2..30)) {
        let a = ResidueSet::from_residues(n, picks.iter().map(|x| x % n)).unwrap();
        prop_assume!(a.len() >= 2);
        let p = sumset_minimax::least_prime_divisor(n).unwrap();
        prop_assert!(restricted_sumset(&a).len() >= p.min(2 * a.len() - 3));
    }

    #[test]
    fn constructions_attain_the_upper_bound(n in 2usize..150, k in 2usize..160) {
        let (c, e) = best_construction(n, k).unwrap();
        prop_assert_eq!(e.value, phi_upper_bound(n, k).unwrap());
        prop_assert_eq!(c.n(), n);
        prop_assert_eq!(c.k(), k);
        let r = phi_exact(n, k).unwrap();
        prop_assert!(r.lower <= r.upper);
        prop_assert!(phi_lower_bound(n, k).unwrap() <= r.lower);
    }

    #[test]
    fn oracle_lies_between_bounds(n in 2usize..=10, k in 2usize..=10) {
        let o = brute_force_phi(n, k).unwrap();
        prop_assert!(phi_lower_bound(n, k).unwrap() <= o.value);
        prop_assert!(o.value <= phi_upper_bound(n, k).unwrap());
        prop_assert_eq!(evaluate(&o.witness).value, o.value);
    }

    #[test]
    fn coloring_json_round_trips(n in 2usize..40, k in 2usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let c = Coloring::from_assignment(k, assignment).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: Coloring = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, c);
    }
}
