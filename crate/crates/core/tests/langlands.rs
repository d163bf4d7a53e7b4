use coho_core::langlands::{cone_membership, langlands_decompose, Membership};
use coho_core::realform::{load_bundled, RestrictedRootSystem};
use coho_core::rootsys::{ParabolicSubset, RationalFunctional};
use coho_core::Q;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// One restricted system per reduced type of rank ≤ 4, plus non-reduced ones.
const FORMS: [&str; 14] = [
    "sl(2,R)",
    "sl(3,R)",
    "sl(4,R)",
    "sl(5,R)",
    "so(3,2)",
    "so(4,3)",
    "sp(6,R)",
    "so(4,4)",
    "F I",
    "G",
    "su(2,1)",
    "su(3,2)",
    "sp(2,2)",
    "so*(10)",
];

fn systems() -> Vec<(String, RestrictedRootSystem)> {
    let c = load_bundled().unwrap();
    FORMS
        .iter()
        .map(|id| (id.to_string(), c.get(id).unwrap().restricted_root_system().unwrap()))
        .collect()
}

fn random_nu(rng: &mut StdRng, rank: usize) -> RationalFunctional {
    RationalFunctional::new(
        (0..rank)
            .map(|_| {
                // a share of exact zeros exercises the cell boundaries
                if rng.gen_bool(0.15) {
                    Q::zero()
                } else {
                    Q::new(rng.gen_range(-40..=40), rng.gen_range(1..=9))
                }
            })
            .collect(),
    )
}

#[test]
fn covers_every_reduced_type_up_to_rank_four() {
    let labels: std::collections::BTreeSet<String> =
        systems().iter().map(|(_, rs)| rs.reduced.components()[0].to_string()).collect();
    for t in ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "F4", "G2"] {
        assert!(labels.contains(t), "{t} missing from {labels:?}");
    }
}

#[test]
fn unique_cell_for_random_functionals() {
    let mut rng = StdRng::seed_from_u64(0x1a9c);
    for (id, rs) in systems() {
        for _ in 0..10_000 {
            let nu = random_nu(&mut rng, rs.rank());
            let d = langlands_decompose(&rs, &nu).unwrap_or_else(|e| panic!("{id}: {e}"));
            // ν_+ kills the Levi coroots and ν_+ - ν is a nonnegative combination of Levi roots
            for i in &d.parabolic.levi {
                assert!(d.nu_plus.coords[*i].is_zero(), "{id} {nu}");
            }
            assert!(d.coefficients.iter().all(|c| !c.is_negative()));
            assert_eq!(d.nu_plus.sub(&nu), d.cone_part);
        }
    }
}

#[test]
fn idempotent_on_its_own_output() {
    let mut rng = StdRng::seed_from_u64(0x1a9d);
    for (id, rs) in systems() {
        for _ in 0..500 {
            let nu = random_nu(&mut rng, rs.rank());
            let d = langlands_decompose(&rs, &nu).unwrap();
            let again = langlands_decompose(&rs, &d.nu_plus).unwrap();
            assert!(again.cone_part.is_zero(), "{id} {nu}");
            assert_eq!(again.nu_plus, d.nu_plus, "{id} {nu}");
        }
    }
}

#[test]
fn equivariant_under_positive_scaling() {
    let mut rng = StdRng::seed_from_u64(0x1a9e);
    for (id, rs) in systems() {
        for _ in 0..500 {
            let nu = random_nu(&mut rng, rs.rank());
            let t = Q::new(rng.gen_range(1..=30), rng.gen_range(1..=7));
            let d = langlands_decompose(&rs, &nu).unwrap();
            let e = langlands_decompose(&rs, &nu.scaled(t)).unwrap();
            assert_eq!(e.parabolic, d.parabolic, "{id} {nu} t={t}");
            assert_eq!(e.nu_plus, d.nu_plus.scaled(t), "{id} {nu} t={t}");
        }
    }
}

#[test]
fn dominant_goes_to_minimal_and_negative_cone_to_whole_group() {
    let mut rng = StdRng::seed_from_u64(0x1a9f);
    for (id, rs) in systems() {
        let n = rs.rank();
        let sys = &rs.reduced;
        for _ in 0..300 {
            let nu = RationalFunctional::new((0..n).map(|_| Q::new(rng.gen_range(1..=40), rng.gen_range(1..=9))).collect());
            let d = langlands_decompose(&rs, &nu).unwrap();
            assert_eq!(d.parabolic, ParabolicSubset::borel(), "{id} {nu}");
            assert_eq!(d.nu_plus, nu);
            // -Σ c_i α_i with c_i ≥ 0
            let mut neg = RationalFunctional::zero(n);
            for i in 0..n {
                let c = if rng.gen_bool(0.2) { Q::zero() } else { Q::new(rng.gen_range(0..=20), rng.gen_range(1..=5)) };
                neg = neg.sub(&sys.root_weight(sys.simple_index(i)).scaled(c));
            }
            let d = langlands_decompose(&rs, &neg).unwrap();
            assert_eq!(d.parabolic, ParabolicSubset::full(n), "{id} {neg}");
            assert!(d.nu_plus.is_zero());
        }
    }
}

#[test]
fn farkas_certificates_separate() {
    let mut rng = StdRng::seed_from_u64(0x1aa0);
    for (_, rs) in systems() {
        let sys = &rs.reduced;
        let gens: Vec<Vec<Q>> = (0..rs.rank()).map(|i| sys.root_weight(sys.simple_index(i)).coords).collect();
        for _ in 0..200 {
            let x = random_nu(&mut rng, rs.rank()).coords;
            match cone_membership(&x, &gens).unwrap() {
                Membership::Inside { coefficients } => {
                    let mut sum = vec![Q::zero(); x.len()];
                    for (c, g) in coefficients.iter().zip(&gens) {
                        assert!(!c.is_negative());
                        for (s, v) in sum.iter_mut().zip(g) {
                            *s += *c * *v;
                        }
                    }
                    assert_eq!(sum, x);
                }
                Membership::Outside { certificate } => {
                    let dot = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(p, q)| *p * *q).sum::<Q>();
                    assert!(gens.iter().all(|g| !dot(&certificate, g).is_negative()));
                    assert!(dot(&certificate, &x).is_negative());
                }
            }
        }
    }
}
