//! Randomized invariants over the ring and network layers.

use chordalnet::chordal::{complete_with_order, support_graph};
use chordalnet::network::{chains, chordal_triangularize, merge_to_fixpoint, print_network, Mode};
use chordalnet::queries::{chain_count, dim_census, zero_count};
use chordalnet::ring::{
    buchberger_lex, normal_form, parse_poly, prem, Monomial, Poly, Ring, DEFAULT_SPAIR_BUDGET,
};
use proptest::prelude::*;

fn arb_poly(n: usize, p: u64, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=max_exp, n), 0..p);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let ring = Ring::new(n, p);
        let mut f = Poly::zero(ring);
        for (exps, c) in terms {
            f.add_term(Monomial(exps), c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_roundtrip(f in arb_poly(4, 13, 4, 6)) {
        let ring = Ring::new(4, 13);
        let text = f.to_string();
        let back = parse_poly(ring, &text).unwrap();
        prop_assert_eq!(f, back);
    }

    #[test]
    fn multiplication_distributes(
        f in arb_poly(3, 7, 3, 4),
        g in arb_poly(3, 7, 3, 4),
        h in arb_poly(3, 7, 3, 4),
    ) {
        let lhs = &(&f + &g) * &h;
        let rhs = &(&f * &h) + &(&g * &h);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(&f * &g, &g * &f);
    }

    #[test]
    fn normal_form_is_idempotent_and_irreducible(
        f in arb_poly(3, 7, 3, 5),
        g in arb_poly(3, 7, 2, 3),
    ) {
        prop_assume!(!g.is_zero());
        let divisors = vec![g.clone()];
        let r = normal_form(&f, &divisors);
        prop_assert_eq!(normal_form(&r, &divisors), r.clone());
        if let Some(lm) = g.leading_monomial() {
            for (m, _) in r.terms_desc() {
                prop_assert!(!lm.divides(m));
            }
        }
    }

    #[test]
    fn prem_drops_the_main_degree(
        f in arb_poly(3, 7, 3, 4),
        g in arb_poly(3, 7, 2, 3),
    ) {
        prop_assume!(!g.is_constant());
        let x = g.mvar().unwrap();
        let r = prem(&f, &g);
        if f.degree_in(x) >= g.degree_in(x) {
            prop_assert!(r.degree_in(x) < g.degree_in(x));
        } else {
            prop_assert_eq!(r, f);
        }
    }

    #[test]
    fn groebner_members_reduce_to_zero(
        f in arb_poly(2, 5, 2, 3),
        g in arb_poly(2, 5, 2, 3),
    ) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let gens = vec![f.clone(), g.clone()];
        if let Ok(gb) = buchberger_lex(&gens, DEFAULT_SPAIR_BUDGET) {
            for gen in &gens {
                prop_assert!(normal_form(gen, &gb).is_zero());
            }
            let gb2 = buchberger_lex(&gb, DEFAULT_SPAIR_BUDGET).unwrap();
            prop_assert_eq!(gb, gb2);
        }
    }
}

/// Counting is invariant under extra merging, and stripping is stable.
#[test]
fn count_survives_extra_merging() {
    let mut rng = chordalnet::rng::Rng::new(0xACE);
    for _ in 0..40 {
        let p = if rng.below(2) == 0 { 3u64 } else { 5 };
        let n = 2 + rng.below(3) as usize;
        let ring = Ring::new(n, p);
        let mut gens: Vec<Poly> = (0..n)
            .map(|v| {
                let x = Poly::var(ring, v);
                let mut xp = x.clone();
                for _ in 1..p {
                    xp = &xp * &x;
                }
                &xp - &x
            })
            .collect();
        for _ in 0..2 {
            let mut f = Poly::zero(ring);
            for _ in 0..2 {
                let mut e = vec![0u32; n];
                for x in e.iter_mut() {
                    *x = rng.below(p) as u32;
                }
                f.add_term(Monomial(e), rng.field_element(p));
            }
            if !f.is_zero() {
                gens.push(f);
            }
        }
        let g = support_graph(n, &gens);
        let cs = complete_with_order(&g, &(0..n).collect::<Vec<_>>());
        let net =
            chordal_triangularize(&gens, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET)
                .unwrap();
        let count = zero_count(&net).unwrap();
        let mut merged = net.clone();
        merge_to_fixpoint(&mut merged);
        assert_eq!(zero_count(&merged).unwrap(), count);
        assert_eq!(
            dim_census(&merged).values().sum::<u128>(),
            chain_count(&merged)
        );
    }
}

/// The chain census total always matches explicit enumeration.
#[test]
fn census_total_matches_enumeration() {
    for (file, mode) in [
        ("coloring9.sys", Mode::ZeroDim),
        ("monomial51.sys", Mode::Monomial),
        ("minors2x4.sys", Mode::Binomial),
    ] {
        let path = format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), file);
        let problem =
            chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
        let g = support_graph(problem.ring.n, &problem.polys);
        let cs = complete_with_order(&g, &(0..problem.ring.n).collect::<Vec<_>>());
        let squarefree = mode == Mode::ZeroDim;
        let net = chordal_triangularize(
            &problem.polys,
            &cs,
            mode,
            squarefree,
            false,
            DEFAULT_SPAIR_BUDGET,
        )
        .unwrap();
        assert_eq!(chain_count(&net), chains(&net).len() as u128, "{file}");
    }
}

/// Fibonacci growth of cycle-coloring chain counts: the n-vertex cycle
/// gives the (n-1)-th Fibonacci number of triangular sets.
#[test]
fn cycle_coloring_chains_follow_fibonacci() {
    // F(1) = F(2) = 1, F(8) = 21.
    let fib = |k: usize| -> u128 {
        let (mut a, mut b) = (1u128, 1u128);
        for _ in 3..=k {
            let c = a + b;
            a = b;
            b = c;
        }
        b
    };
    assert_eq!(fib(8), 21);
    for n in [5usize, 7, 9] {
        let ring = Ring::new(n, 13);
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(parse_poly(ring, &format!("x{i}^3 - 1")).unwrap());
            let j = (i + 1) % n;
            let (a, b) = (i.min(j), i.max(j));
            gens.push(parse_poly(ring, &format!("x{a}^2 + x{a}*x{b} + x{b}^2")).unwrap());
        }
        let g = support_graph(n, &gens);
        let cs = complete_with_order(&g, &(0..n).collect::<Vec<_>>());
        let net =
            chordal_triangularize(&gens, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET)
                .unwrap();
        assert_eq!(chain_count(&net), fib(n - 1), "cycle length {n}");
    }
}

/// isolate_dim at the network's own dimension agrees with the chains of
/// the top component.
#[test]
fn isolate_at_top_dimension_matches_top_component() {
    for (file, mode) in [("monomial51.sys", Mode::Monomial), ("minors2x4.sys", Mode::Binomial)] {
        let path = format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), file);
        let problem =
            chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
        let g = support_graph(problem.ring.n, &problem.polys);
        let cs = complete_with_order(&g, &(0..problem.ring.n).collect::<Vec<_>>());
        let net = chordal_triangularize(&problem.polys, &cs, mode, false, false, DEFAULT_SPAIR_BUDGET)
            .unwrap();
        let d = chordalnet::queries::dimension(&net) as isize;
        let isolated: std::collections::BTreeSet<Vec<String>> =
            chordalnet::queries::isolate_dim(&net, d)
                .iter()
                .map(|c| c.equations(&net).iter().map(|f| f.to_string()).collect())
                .collect();
        let top = chordalnet::queries::top_component(&net);
        let top_chains: std::collections::BTreeSet<Vec<String>> = chains(&top)
            .iter()
            .map(|c| c.equations(&top).iter().map(|f| f.to_string()).collect())
            .collect();
        assert_eq!(isolated, top_chains, "{file}");
    }
}

/// A one-solution network always samples the same point; a prime where a
/// root polynomial does not split raises the retry guidance error.
#[test]
fn sampling_edge_cases() {
    let ring = Ring::new(1, 13);
    let gens = vec![parse_poly(ring, "x0 - 3").unwrap()];
    let g = support_graph(1, &gens);
    let cs = complete_with_order(&g, &[0]);
    let net =
        chordal_triangularize(&gens, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET).unwrap();
    let mut rng = chordalnet::rng::Rng::new(9);
    for _ in 0..10 {
        assert_eq!(chordalnet::queries::sample(&net, &mut rng).unwrap(), vec![3]);
    }

    // x0^4 - 1 over p = 10007 (p = 3 mod 4) has only two rational roots.
    let ring = Ring::new(1, 10007);
    let gens = vec![parse_poly(ring, "x0^4 - 1").unwrap()];
    let g = support_graph(1, &gens);
    let cs = complete_with_order(&g, &[0]);
    let net =
        chordal_triangularize(&gens, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET).unwrap();
    assert!(matches!(
        chordalnet::queries::sample(&net, &mut rng),
        Err(chordalnet::queries::QueryError::NonSplittingSpecialization { rank: 0 })
    ));
}

/// Chains with quadratic members in non-final positions cannot be
/// certified prime, and minimal_primes reports that instead of skipping.
#[test]
fn minimal_primes_refuses_unknown_primality() {
    let path = format!("{}/fixtures/coloring9.sys", env!("CARGO_MANIFEST_DIR"));
    let problem =
        chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
    let g = support_graph(9, &problem.polys);
    let cs = complete_with_order(&g, &(0..9).collect::<Vec<_>>());
    let net = chordal_triangularize(
        &problem.polys,
        &cs,
        Mode::ZeroDim,
        true,
        false,
        DEFAULT_SPAIR_BUDGET,
    )
    .unwrap();
    assert!(matches!(
        chordalnet::queries::minimal_primes(&net, None, None, DEFAULT_SPAIR_BUDGET),
        Err(chordalnet::queries::QueryError::PrimalityUnknown { .. })
    ));
}

/// In-process smoke fuzzing of the three parsers: random garbage and
/// mutated valid inputs must never panic, and anything accepted must
/// reprint canonically. The cargo-fuzz targets run the same harnesses
/// under libFuzzer.
#[test]
fn parser_smoke_fuzz() {
    let ring = Ring::new(6, 13);
    let seeds_poly = ["x0^3 - x0 + 5*x1*x2", "3*x0^2*x3 - x1*x2 + 5", "-x5^4 + 12", "0"];
    let seeds_problem = [
        "p = 7\nn = 3\norder = 2 0 1\nx0*x1 - x2 # c\n",
        "x0^3 - 1\nx0^2 + x0*x1 + x1^2\n",
    ];
    let seeds_net = [
        "ranks=2 p=5\nnode 0 rank=0 eqs=x0 - 1 ineqs=\nnode 1 rank=1 eqs=x1 ineqs=\narc 0 1\n",
        "ranks=4 p=65521 mode=binomial squarefree=false\nnode 0 rank=0 eqs=x0*x3 - x1*x2 ineqs=x3\n",
    ];
    let alphabet: Vec<char> =
        "x0123456789^*+- =\n#pnorder;aqz().".chars().collect();
    let mut rng = chordalnet::rng::Rng::new(0xF022);
    let mutate = |seed: &str, rng: &mut chordalnet::rng::Rng| -> String {
        let mut s: Vec<char> = seed.chars().collect();
        for _ in 0..=rng.below(6) {
            let c = alphabet[rng.below(alphabet.len() as u64) as usize];
            match rng.below(3) {
                0 if !s.is_empty() => {
                    let i = rng.below(s.len() as u64) as usize;
                    s[i] = c;
                }
                1 => {
                    let i = rng.below(s.len() as u64 + 1) as usize;
                    s.insert(i, c);
                }
                _ if !s.is_empty() => {
                    let i = rng.below(s.len() as u64) as usize;
                    s.remove(i);
                }
                _ => {}
            }
        }
        s.into_iter().collect()
    };
    for round in 0..4000 {
        let poly_input = mutate(seeds_poly[round % seeds_poly.len()], &mut rng);
        if let Ok(f) = parse_poly(ring, &poly_input) {
            let back = parse_poly(ring, &f.to_string()).unwrap();
            assert_eq!(f, back);
        }
        let problem_input = mutate(seeds_problem[round % seeds_problem.len()], &mut rng);
        if let Ok(problem) = chordalnet::cli::parse_problem(&problem_input, None) {
            for f in &problem.polys {
                let back = parse_poly(problem.ring, &f.to_string()).unwrap();
                assert_eq!(*f, back);
            }
        }
        let net_input = mutate(seeds_net[round % seeds_net.len()], &mut rng);
        if let Ok(net) = chordalnet::network::parse_network(&net_input) {
            let text = print_network(&net);
            let back = chordalnet::network::parse_network(&text).unwrap();
            assert_eq!(print_network(&back), text);
        }
    }
}

/// The membership dynamic program agrees with exact per-chain reduction
/// on monic squarefree networks whose elimination trees have joins.
#[test]
fn membership_dp_matches_exact_reduction() {
    let p = 65521u64;
    let mut rng = chordalnet::rng::Rng::new(0x7E57);
    for round in 0..120u32 {
        let n = 3 + (round % 2) as usize;
        let ring = Ring::new(n, p);
        let npts = 2 + rng.below(3) as usize;
        let mut xs: Vec<u64> = Vec::new();
        while xs.len() < npts {
            let c = rng.field_element(p);
            if !xs.contains(&c) {
                xs.push(c);
            }
        }
        let last = n - 1;
        let points: Vec<Vec<u64>> = xs
            .iter()
            .map(|&c| {
                let mut pt: Vec<u64> = (0..last).map(|_| rng.field_element(p)).collect();
                pt.push(c);
                pt
            })
            .collect();
        // Vanishing ideal of the points, coordinates expressed in the
        // last variable: star support, joins in the elimination tree.
        let mut gens: Vec<Poly> = Vec::new();
        let mut u = Poly::one(ring);
        for pt in &points {
            u = &u * &(&Poly::var(ring, last) - &Poly::constant(ring, pt[last]));
        }
        gens.push(u);
        for coord in 0..last {
            let mut lagrange = Poly::zero(ring);
            for pt in &points {
                let mut basis = Poly::constant(ring, pt[coord]);
                for other in &points {
                    if other[last] == pt[last] {
                        continue;
                    }
                    let denom = chordalnet::gf::inv(
                        chordalnet::gf::sub(pt[last], other[last], p),
                        p,
                    );
                    basis = &basis
                        * &(&Poly::var(ring, last) - &Poly::constant(ring, other[last]))
                            .scale(denom);
                }
                lagrange = &lagrange + &basis;
            }
            gens.push(&Poly::var(ring, coord) - &lagrange);
        }
        let g = support_graph(n, &gens);
        let cs = complete_with_order(&g, &(0..n).collect::<Vec<_>>());
        let net =
            chordal_triangularize(&gens, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET)
                .unwrap();
        let mut h = Poly::zero(ring);
        if rng.below(2) == 0 {
            for f in &gens {
                let vars = f.vars();
                let mut coeff = Poly::zero(ring);
                for _ in 0..2 {
                    let mut e = vec![0u32; n];
                    for &v in &vars {
                        e[v] = rng.below(2) as u32;
                    }
                    coeff.add_term(Monomial(e), rng.field_element(p));
                }
                h = &h + &(&coeff * f);
            }
        } else {
            let l = rng.below(n as u64) as usize;
            let clique = cs.cliques[l].clone();
            for _ in 0..3 {
                let mut e = vec![0u32; n];
                for &v in &clique {
                    e[v] = rng.below(3) as u32;
                }
                h.add_term(Monomial(e), rng.field_element(p));
            }
        }
        let exact = chains(&net)
            .iter()
            .all(|c| normal_form(&h, &c.equations(&net)).is_zero());
        let dp = chordalnet::queries::radical_member(&net, &h, 20, &mut rng).unwrap();
        assert_eq!(dp, exact, "round {round}");
    }
}

/// The 10-vertex coloring system: the completion's elimination tree, a
/// known chain of the finished network, and run-to-run determinism.
#[test]
fn ten_vertex_network_structure() {
    let path = format!("{}/fixtures/coloring10.sys", env!("CARGO_MANIFEST_DIR"));
    let problem =
        chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
    let g = support_graph(10, &problem.polys);
    let cs = complete_with_order(&g, &(0..10).collect::<Vec<_>>());
    let parents: Vec<Option<usize>> = chordalnet::chordal::elim_tree(&cs).to_vec();
    assert_eq!(
        parents,
        vec![
            Some(6),
            Some(4),
            Some(3),
            Some(5),
            Some(5),
            Some(7),
            Some(7),
            Some(8),
            Some(9),
            None
        ]
    );
    assert_eq!(cs.clique_number(), 4);
    let build = || {
        chordal_triangularize(&problem.polys, &cs, Mode::ZeroDim, true, false, DEFAULT_SPAIR_BUDGET)
            .unwrap()
    };
    let net = build();
    assert_eq!(print_network(&net), print_network(&build()), "determinism");
    // One specific chain of the published network.
    let wanted: Vec<&str> = vec![
        "x0^2 + x0*x6 + x0*x7 + x6^2 + x6*x7 + x7^2",
        "x1^3 + x1^2*x9 + x1*x9^2 + x9^3",
        "x2^3 + x2^2*x5 + x2*x5^2 + x5^3",
        "x3 - x5",
        "x4 - x9",
        "x5^2 + x5*x8 + x5*x9 + x8^2 + x8*x9 + x9^2",
        "x6^2 + x6*x8 + x6*x9 + x8^2 + x8*x9 + x9^2",
        "x7 - x9",
        "x8^3 + x8^2*x9 + x8*x9^2 + x9^3",
        "x9^4 - 1",
    ];
    let found = chains(&net).iter().any(|c| {
        let eqs: Vec<String> = c.equations(&net).iter().map(|f| f.to_string()).collect();
        eqs == wanted
    });
    assert!(found, "published chain missing from the network");
}

/// The 6-variable monomial network has the published per-rank shape.
#[test]
fn monomial_network_shape() {
    let path = format!("{}/fixtures/monomial51.sys", env!("CARGO_MANIFEST_DIR"));
    let problem =
        chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
    let g = support_graph(6, &problem.polys);
    let cs = complete_with_order(&g, &(0..6).collect::<Vec<_>>());
    let net =
        chordal_triangularize(&problem.polys, &cs, Mode::Monomial, false, false, DEFAULT_SPAIR_BUDGET)
            .unwrap();
    let shape: Vec<Vec<String>> = (0..6)
        .map(|l| {
            let mut v: Vec<String> = net
                .node_ids(l)
                .iter()
                .map(|&id| {
                    let eqs = &net.node(id).content.eqs;
                    if eqs.is_empty() { "0".into() } else { eqs[0].to_string() }
                })
                .collect();
            v.sort();
            v
        })
        .collect();
    let expect: Vec<Vec<&str>> = vec![
        vec!["0", "x0"],
        vec!["0", "x1", "x1"],
        vec!["0", "x2", "x2", "x2"],
        vec!["0", "x3", "x3"],
        vec!["0", "x4", "x4"],
        vec!["0", "x5"],
    ];
    for (l, (got, want)) in shape.iter().zip(&expect).enumerate() {
        let want: Vec<String> = want.iter().map(|s| s.to_string()).collect();
        assert_eq!(*got, want, "rank {l}");
    }
}

/// Queries answer with errors, not panics, on hand-written networks
/// that break the triangularity conventions.
#[test]
fn queries_reject_malformed_networks_gracefully() {
    // Two equations in one node.
    let text = "ranks=2 p=5\nnode 0 rank=0 eqs=x0;x0 - 1 ineqs=\nnode 1 rank=1 eqs=x1 ineqs=\narc 0 1\n";
    let net = chordalnet::network::parse_network(text).unwrap();
    assert!(matches!(
        chordalnet::queries::zero_count(&net),
        Err(chordalnet::queries::QueryError::NotTriangularNetwork)
    ));
    // A wrong-main-variable node: counting refuses it, and the chain
    // walk of minimal_primes reports the duplicated main variable.
    let text = "ranks=2 p=5\nnode 0 rank=0 eqs=x1 - 1 ineqs=\nnode 1 rank=1 eqs=x1 ineqs=\narc 0 1\n";
    let net = chordalnet::network::parse_network(text).unwrap();
    assert!(matches!(
        chordalnet::queries::zero_count(&net),
        Err(chordalnet::queries::QueryError::NotTriangularNetwork)
    ));
    assert!(matches!(
        chordalnet::queries::minimal_primes(&net, None, None, 1000),
        Err(chordalnet::queries::QueryError::NotTriangularNetwork)
    ));
    // A node polynomial that specializes to zero stops the sampler.
    let text = "ranks=2 p=5\nnode 0 rank=0 eqs=x0*x1 - x0 ineqs=\nnode 1 rank=1 eqs=x1 - 1 ineqs=\narc 0 1\n";
    let net = chordalnet::network::parse_network(text).unwrap();
    let mut rng = chordalnet::rng::Rng::new(3);
    assert!(matches!(
        chordalnet::queries::sample(&net, &mut rng),
        Err(chordalnet::queries::QueryError::NonSplittingSpecialization { rank: 0 })
    ));
}

/// The elimination subnetwork at the root keeps just the projection.
#[test]
fn elimination_subnetwork_of_the_cycle() {
    let path = format!("{}/fixtures/coloring9.sys", env!("CARGO_MANIFEST_DIR"));
    let problem =
        chordalnet::cli::parse_problem(&std::fs::read_to_string(path).unwrap(), None).unwrap();
    let g = support_graph(problem.ring.n, &problem.polys);
    let cs = complete_with_order(&g, &(0..9).collect::<Vec<_>>());
    let net = chordal_triangularize(
        &problem.polys,
        &cs,
        Mode::ZeroDim,
        true,
        false,
        DEFAULT_SPAIR_BUDGET,
    )
    .unwrap();
    let sub = chordalnet::queries::eliminate_below(&net, 8);
    assert_eq!(sub.node_ids(8).len(), 1);
    let id = sub.node_ids(8)[0];
    assert_eq!(sub.node(id).content.eqs[0].to_string(), "x8^3 - 1");
    assert_eq!(zero_count(&sub).unwrap().value, 3);
    // Round-trip of a subnetwork keeps its answers too.
    let text = print_network(&sub);
    let back = chordalnet::network::parse_network(&text).unwrap();
    assert_eq!(zero_count(&back).unwrap().value, 3);
}
