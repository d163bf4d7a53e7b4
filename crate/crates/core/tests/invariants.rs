use coho_core::invariants::{r_g, r_g_exhaustive, r_prime, RgOptions, Value};
use coho_core::realform::load_bundled;

#[test]
fn literature_values_reproduce() {
    let cat = load_bundled().unwrap();
    let mut bad = Vec::new();
    for f in cat.iter() {
        if let Some(rp) = f.literature_r_prime() {
            let got = r_prime(f).unwrap().value;
            if got != Value::Finite(rp.into()) {
                bad.push(format!("{}: r' {got} vs {rp}", f.id));
            }
        }
        if let Some(r) = f.literature_r_g() {
            let got = r_g(f, RgOptions::deep()).unwrap().value;
            if got != Value::Finite(r.into()) {
                bad.push(format!("{}: r_g {got} vs {r}", f.id));
            }
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn complex_fast_path_agrees_with_chamber_search() {
    let cat = load_bundled().unwrap();
    for id in ["complex:A2", "complex:A3", "complex:B2", "complex:G2", "complex:C3"] {
        let f = cat.get(id).unwrap();
        let fast = r_g(f, RgOptions::default()).unwrap().value;
        let slow = r_g_exhaustive(f, RgOptions::deep()).unwrap().value;
        assert_eq!(fast, slow, "{id}");
    }
}

mod face_oracle {
    use coho_core::cartans::{fundamental_cartan, RootClass};
    use coho_core::fm::{feasible_point, Constraint, Rel};
    use coho_core::invariants::{r_g, RgOptions, Value};
    use coho_core::linalg;
    use coho_core::realform::load_bundled;
    use coho_core::Q;
    use num_traits::{Signed, Zero};

    /// Twice the minimum of `dim(n_x ∩ s_C)` over all nonzero `x ∈ t`,
    /// found by walking every face of the `t`-root arrangement.
    fn min_over_faces(id: &str) -> u64 {
        let cat = load_bundled().unwrap();
        let f = cat.get(id).unwrap();
        let sys = &f.system;
        let c = fundamental_cartan(f);
        let gram = sys.gram();
        let t = c.eigenspace(1);
        // each root as a linear functional on t-coordinates, with weight 2/1/0
        let mut funcs: Vec<(Vec<Q>, u64)> = Vec::new();
        for i in 0..sys.len() {
            let a = linalg::to_q(sys.root(i));
            let g: Vec<Q> = t.iter().map(|b| linalg::form(gram, &a, b)).collect();
            let w = match c.class(i) {
                RootClass::NoncompactImaginary => 2,
                RootClass::Complex => 1,
                _ => 0,
            };
            funcs.push((g, w));
        }
        let mut lines: Vec<Vec<Q>> = Vec::new();
        for (g, _) in &funcs {
            if linalg::is_zero(g) {
                continue;
            }
            let lead = g.iter().find(|x| !x.is_zero()).unwrap();
            let n: Vec<Q> = g.iter().map(|x| *x / *lead).collect();
            if !lines.contains(&n) {
                lines.push(n);
            }
        }
        let d = t.len();
        let mut best = u64::MAX;
        let mut signs = Vec::new();
        walk(&lines, d, &mut signs, &funcs, &mut best);
        best
    }

    fn constraint(line: &[Q], s: i8) -> Constraint {
        match s {
            1 => Constraint::new(line.to_vec(), Rel::Gt, Q::zero()),
            -1 => Constraint::new(line.iter().map(|x| -*x).collect(), Rel::Gt, Q::zero()),
            _ => Constraint::new(line.to_vec(), Rel::Eq, Q::zero()),
        }
    }

    fn walk(lines: &[Vec<Q>], d: usize, signs: &mut Vec<i8>, funcs: &[(Vec<Q>, u64)], best: &mut u64) {
        let cs: Vec<Constraint> = lines.iter().zip(signs.iter()).map(|(l, &s)| constraint(l, s)).collect();
        let Some(x) = feasible_point(d, &cs) else { return };
        if signs.len() == lines.len() {
            if signs.iter().all(|&s| s == 0) {
                return;
            }
            let v: u64 = funcs
                .iter()
                .filter(|(g, _)| linalg::dot(g, &x).is_positive())
                .map(|(_, w)| w)
                .sum();
            *best = (*best).min(v);
            return;
        }
        for s in [1, 0, -1] {
            signs.push(s);
            walk(lines, d, signs, funcs, best);
            signs.pop();
        }
    }

    #[test]
    fn chamber_search_matches_face_enumeration() {
        let cat = load_bundled().unwrap();
        for id in [
            "sl(2,R)", "sl(3,R)", "sl(4,R)", "su(2,1)", "su(3,1)", "su(3,2)", "su(2,2)", "so(3,2)",
            "so(4,1)", "so(4,2)", "so(5,1)", "so(3,3)", "sp(4,R)", "sp(2,1)", "G", "complex:A2",
            "complex:B2",
        ] {
            let twice = min_over_faces(id);
            assert_eq!(twice % 2, 0, "{id}");
            let got = r_g(cat.get(id).unwrap(), RgOptions::default()).unwrap().value;
            assert_eq!(got, Value::Finite(twice / 2), "{id}");
        }
    }
}

mod properties {
    use coho_core::invariants::{kostant_degree, r_g_mu, r_prime, Value};
    use coho_core::realform::load_bundled;
    use coho_core::rootsys::{CartanType, ParabolicSubset, RationalFunctional, RootSystem, Series};
    use coho_core::Q;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn types() -> Vec<CartanType> {
        let mut out = Vec::new();
        for n in 1..=5 {
            for s in [Series::A, Series::B, Series::C, Series::D] {
                if let Ok(t) = CartanType::new(s, n) {
                    out.push(t);
                }
            }
        }
        out.push(CartanType::new(Series::G, 2).unwrap());
        out.push(CartanType::new(Series::F, 4).unwrap());
        out
    }

    proptest! {
        #[test]
        fn kostant_degree_of_lambda_and_minus_lambda_fill_the_nilradical(
            ti in 0..types().len(),
            mask in any::<u8>(),
            coords in prop::collection::vec(-6i64..=6, 5),
        ) {
            let sys = RootSystem::new(types()[ti]);
            let n = sys.rank();
            let s = ParabolicSubset::new((0..n).filter(|i| mask & (1 << i) != 0));
            let lambda = RationalFunctional::from_ints(&coords[..n]);
            prop_assume!(sys.first_singular(&lambda).is_none());
            let (_, nil) = sys.parabolic_split(&s);
            let up = kostant_degree(&sys, &s, &lambda).unwrap();
            let down = kostant_degree(&sys, &s, &lambda.neg()).unwrap();
            prop_assert_eq!(up + down, nil.len());
        }
    }

    #[test]
    fn smaller_levi_never_shrinks_the_nilradical() {
        let cat = load_bundled().unwrap();
        for f in cat.iter().filter(|f| !f.is_compact()) {
            let rs = f.restricted_root_system().unwrap();
            let r = rs.rank();
            let all = ParabolicSubset::all(r);
            for s in &all {
                for i in s.levi.iter().copied() {
                    let smaller = ParabolicSubset::new(s.levi.iter().copied().filter(|&j| j != i));
                    assert!(
                        rs.nilradical_dim(&smaller) >= rs.nilradical_dim(s),
                        "{}: {smaller} vs {s}",
                        f.id
                    );
                }
            }
            // so the minimum over maximal parabolics is the minimum over all proper ones
            let min_proper = all.iter().filter(|s| s.is_proper(r)).map(|s| rs.nilradical_dim(s)).min().unwrap();
            assert_eq!(r_prime(f).unwrap().value, Value::Finite(min_proper as u64), "{}", f.id);
        }
    }

    /// Sign vector of `⟨μ - ρ_μ, α∨⟩` over all roots.
    fn shifted_signs(sys: &RootSystem, mu: &RationalFunctional) -> Vec<i8> {
        let mut rho = RationalFunctional::zero(sys.rank());
        for i in 0..sys.len() {
            if sys.pair_index(mu, i).is_positive() {
                rho = rho.add(&sys.root_weight(i).scaled(Q::new(1, 2)));
            }
        }
        let shifted = mu.sub(&rho);
        (0..sys.len())
            .map(|i| {
                let v = sys.pair_index(&shifted, i);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    #[test]
    fn r_g_mu_depends_only_on_the_shifted_sign_vector() {
        use rand::{Rng, SeedableRng};
        let cat = load_bundled().unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for id in ["sl(2,R)", "su(2,1)", "su(3,1)", "su(2,2)", "sp(4,R)", "so(4,1)", "so(3,2)", "G", "sl(3,R)", "sp(2,1)"] {
            let f = cat.get(id).unwrap();
            let sys = &f.system;
            let sigma = &f.vogan.automorphism;
            let mut seen: HashMap<Vec<i8>, u64> = HashMap::new();
            for _ in 0..400 {
                let mut c: Vec<i64> = (0..sys.rank()).map(|_| rng.gen_range(-5..=5)).collect();
                // symmetrize so μ lives on t
                for i in 0..c.len() {
                    c[sigma[i]] = c[i];
                }
                let mu = RationalFunctional::from_ints(&c);
                if sys.first_singular(&mu).is_some() {
                    continue;
                }
                let Ok(v) = r_g_mu(f, &mu) else { continue };
                let v = v.value.finite().unwrap();
                let key = shifted_signs(sys, &mu);
                if let Some(prev) = seen.insert(key, v) {
                    assert_eq!(prev, v, "{id} μ = {mu}");
                }
            }
            assert!(!seen.is_empty(), "{id}: no pure regular samples");
        }
    }
}
