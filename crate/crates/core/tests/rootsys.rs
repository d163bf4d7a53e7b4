use coho_core::rootsys::{CartanType, ParabolicSubset, RationalFunctional, RootSystem, Series};
use coho_core::Q;
use proptest::prelude::*;

fn all_types(max_rank: usize) -> Vec<CartanType> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        for s in [Series::A, Series::B, Series::C, Series::D] {
            if let Ok(t) = CartanType::new(s, n) {
                out.push(t);
            }
        }
    }
    for (s, n) in [(Series::E, 6), (Series::E, 7), (Series::E, 8), (Series::F, 4), (Series::G, 2)] {
        out.push(CartanType::new(s, n).unwrap());
    }
    out
}

fn closed_form_count(t: CartanType) -> usize {
    let n = t.rank();
    match (t.series(), n) {
        (Series::A, _) => n * (n + 1),
        (Series::B | Series::C, _) => 2 * n * n,
        (Series::D, _) => 2 * n * (n - 1),
        (Series::E, 6) => 72,
        (Series::E, 7) => 126,
        (Series::E, 8) => 240,
        (Series::F, _) => 48,
        (Series::G, _) => 12,
        _ => unreachable!(),
    }
}

#[test]
fn root_counts_and_reflection_closure() {
    for t in all_types(8) {
        let sys = RootSystem::new(t);
        assert_eq!(sys.len(), closed_form_count(t), "{t}");
        for j in 0..sys.len() {
            let a: Vec<Q> = sys.root(j).iter().map(|&x| Q::from(x)).collect();
            for i in 0..sys.rank() {
                let r = sys.reflect_vec(&a, sys.simple_index(i));
                assert!(r.iter().all(|x| x.is_integer()));
                let r: Vec<i64> = r.iter().map(|x| x.to_integer()).collect();
                assert!(sys.index_of(&r).is_some(), "{t}: s_{i} of root {j} is not a root");
            }
        }
    }
}

#[test]
fn rho_is_all_ones() {
    for t in all_types(8) {
        let sys = RootSystem::new(t);
        assert!(sys.rho().coords.iter().all(|c| *c == Q::from(1)), "{t}");
    }
}

#[test]
fn levi_and_nilradical_partition_positive_roots() {
    for t in all_types(6) {
        let sys = RootSystem::new(t);
        let positive = sys.positive_indices().count();
        for s in ParabolicSubset::all(sys.rank()) {
            let (levi, nil) = sys.parabolic_split(&s);
            assert_eq!(nil.len() + levi.len() / 2, positive, "{t} {s}");
        }
    }
}

fn rational() -> impl Strategy<Value = Q> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Q::new(n, d))
}

fn type_index() -> impl Strategy<Value = usize> {
    0..all_types(8).len()
}

proptest! {
    #[test]
    fn pairing_is_linear(
        ti in type_index(),
        x in prop::collection::vec(rational(), 8),
        y in prop::collection::vec(rational(), 8),
        s in rational(),
        root in any::<prop::sample::Index>(),
    ) {
        let t = all_types(8)[ti];
        let sys = RootSystem::new(t);
        let n = sys.rank();
        let l = RationalFunctional::new(x[..n].to_vec());
        let m = RationalFunctional::new(y[..n].to_vec());
        let i = root.index(sys.len());
        let lhs = sys.pair_index(&l.scaled(s).add(&m), i);
        let rhs = s * sys.pair_index(&l, i) + sys.pair_index(&m, i);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nilradical_count_for_random_subsets(ti in type_index(), mask in any::<u8>()) {
        let t = all_types(8)[ti];
        let sys = RootSystem::new(t);
        let s = ParabolicSubset::new((0..sys.rank()).filter(|i| mask & (1 << i) != 0));
        let (levi, nil) = sys.parabolic_split(&s);
        prop_assert_eq!(nil.len() + levi.len() / 2, sys.positive_indices().count());
    }
}
