use hyperlat::enumerate::{enumerate_norm, random_definite};
use hyperlat::linalg::{Int, Rat};
use hyperlat::roots::roots_of;
use hyperlat::GramLattice;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice(seed: u64, rank: usize) -> GramLattice {
    random_definite(&mut ChaCha8Rng::seed_from_u64(seed), rank)
}

fn as_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn root_set_is_reflection_closed(seed in any::<u64>(), rank in 1usize..=4) {
        let l = lattice(seed, rank);
        let roots = roots_of(&l, None).unwrap();
        let vs: Vec<Vec<Rat>> = roots.iter().map(|r| r.vector.clone()).collect();
        for r in &vs {
            let neg: Vec<Rat> = r.iter().map(|x| -x).collect();
            prop_assert!(vs.contains(&neg));
            for s in &vs {
                prop_assert!(vs.contains(&l.reflect(r, s)));
            }
            for i in 0..rank {
                let mut e = vec![Rat::from_integer(0.into()); rank];
                e[i] = Rat::from_integer(1.into());
                prop_assert!(l.contains(&l.reflect(r, &e)));
            }
        }
    }

    #[test]
    fn shell_has_exact_norm_and_is_symmetric(seed in any::<u64>(), rank in 1usize..=4, n in 1i64..=12) {
        let l = lattice(seed, rank);
        let n = Rat::from_integer(n.into());
        let shell = enumerate_norm(&l, &n).unwrap();
        for v in &shell {
            prop_assert_eq!(l.norm(&as_rat(v)), n.clone());
            let neg: Vec<Int> = v.iter().map(|x| -x).collect();
            prop_assert!(shell.contains(&neg));
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), rank in 1usize..=5) {
        let l = lattice(seed, rank);
        let back = GramLattice::from_json(&l.to_json()).unwrap();
        prop_assert_eq!(back.gram(), l.gram());
    }

    #[test]
    fn direct_sum_adds_signature(a in any::<u64>(), b in any::<u64>()) {
        let x = lattice(a, 2);
        let y = lattice(b, 3);
        let s = GramLattice::direct_sum(&[x.clone(), y.clone()]);
        prop_assert_eq!(s.rank(), 5);
        prop_assert_eq!(s.det(), x.det() * y.det());
        prop_assert_eq!(s.signature(), (5, 0, 0));
    }
}
