mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qws::admittance::{hyperbola_param, parallel_add, AdmittanceTriple};
use qws::charpoly::{charpoly, charpoly_deleted, charpoly_schwenk, TerminalPolys, DEFAULT_ENUM_LIMIT};
use qws::json::{graph_to_string, parse_graph};
use qws::momentum::Momentum;
use qws::scattering::{sign_calibration, smatrix_closed2, smatrix_oracle};
use qws::{Adjacency, Edge, Mode, Quad, RationalFunction, Scalar, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64, max_n: usize) -> WeightedGraph {
    common::random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 2, max_n, 0.5)
}

fn hermitian_graph(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=5);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.6) {
                    let w = Scalar::new(common::small_rational(&mut rng), common::small_rational(&mut rng));
                    edges.push(Edge::new(u, v, w));
                }
            }
        }
        if let Ok(g) = WeightedGraph::new(n, edges, (0, n - 1), Mode::Hermitian) {
            return g;
        }
    }
}

fn momentum() -> impl Strategy<Value = Momentum> {
    (-3.1f64..-0.04).prop_map(|k| Momentum::new(k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schwenk_matches_berkowitz(seed in any::<u64>(), v in 0usize..6) {
        let g = graph(seed, 6);
        let v = v % g.n();
        prop_assert_eq!(charpoly_schwenk(&g, v, DEFAULT_ENUM_LIMIT).unwrap(), charpoly(&g));
    }

    #[test]
    fn charpoly_trace_and_degree(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let p = charpoly(&g);
        prop_assert_eq!(p.degree(), Some(g.n()));
        prop_assert!(p.is_monic());
        let trace = (0..g.n()).fold(Quad::from(0), |acc, v| acc + qws::graph::Adjacency::potential(&g, v));
        prop_assert_eq!(p.coeff(g.n() - 1), -trace);
    }

    #[test]
    fn deletion_order_is_irrelevant(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let (a, b) = g.terminals();
        let both = charpoly_deleted(&g, &[a, b]).unwrap();
        prop_assert_eq!(&both, &charpoly_deleted(&g, &[b, a]).unwrap());
        let once = g.delete_vertices(&[a]).unwrap();
        let b_new = once.index_map.iter().position(|&x| x == b).unwrap();
        prop_assert_eq!(both, charpoly_deleted(&once, &[b_new]).unwrap());
    }

    #[test]
    fn oracle_is_unitary_and_symmetric(seed in any::<u64>(), k in momentum()) {
        let g = graph(seed, 6);
        let s = smatrix_oracle(&g, &k).unwrap();
        prop_assert!(s.unitarity_defect() < 1e-9);
        prop_assert!(s.symmetry_defect() < 1e-9);
    }

    #[test]
    fn hermitian_oracle_is_unitary(seed in any::<u64>(), k in momentum()) {
        let g = hermitian_graph(seed);
        let s = smatrix_oracle(&g, &k).unwrap();
        prop_assert!(s.unitarity_defect() < 1e-9);
        let closed = smatrix_closed2(&g, &k, sign_calibration()).unwrap();
        prop_assert!((closed.s11() - s.s11()).norm() < 1e-9);
        prop_assert!((closed.s12().norm() - s.s12().norm()).abs() < 1e-9);
    }

    #[test]
    fn graph_json_round_trip(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let text = graph_to_string(&g);
        let back = parse_graph(text.as_bytes()).unwrap();
        prop_assert_eq!(graph_to_string(&back), text);
        prop_assert_eq!(back.graph_hash(), g.graph_hash());
        let h = hermitian_graph(seed);
        prop_assert_eq!(graph_to_string(&parse_graph(graph_to_string(&h).as_bytes()).unwrap()), graph_to_string(&h));
    }

    #[test]
    fn derivative_matches_finite_difference(seed in any::<u64>(), y in -1.9f64..1.9) {
        let t = AdmittanceTriple::of(&graph(seed, 5)).unwrap();
        for f in [&t.mu1, &t.nu] {
            let h = 1e-5;
            let d = f.den().eval_f64(y);
            prop_assume!(d.abs() > 1e-2 && f.den().eval_f64(y + h).signum() == d.signum() && f.den().eval_f64(y - h).signum() == d.signum());
            let fd = (f.eval_f64(y + h) - f.eval_f64(y - h)) / (2.0 * h);
            let exact = f.derivative().eval_f64(y);
            prop_assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "fd {} exact {}", fd, exact);
        }
    }

    #[test]
    fn admittance_determinant_identity(seed in any::<u64>()) {
        let g = graph(seed, 6);
        let t = AdmittanceTriple::of(&g).unwrap();
        let tp = TerminalPolys::of(&g).unwrap();
        prop_assert_eq!(t.determinant_ratio(), RationalFunction::new(tp.phi, tp.phi12).unwrap());
        prop_assert!(t.poles_are_simple());
    }

    #[test]
    fn laurent_reconstructs_near_pole(seed in any::<u64>()) {
        // y = 0 may or may not be a pole; the expansion covers both
        let g = graph(seed, 4);
        let t = AdmittanceTriple::of(&g).unwrap();
        let y0 = Quad::from(0);
        let e = t.nu.laurent(&y0, 2);
        let delta = 1e-4;
        let approx = e.coeff(-1).to_f64() / delta + e.coeff(0).to_f64() + e.coeff(1).to_f64() * delta;
        let actual = t.nu.eval_f64(delta);
        prop_assert!((approx - actual).abs() < 1e-5 * (1.0 + actual.abs()), "{} vs {}", approx, actual);
    }

    #[test]
    fn parallel_law(a in any::<u64>(), b in any::<u64>()) {
        let (ga, gb) = (graph(a, 4), graph(b, 4));
        if let Ok(p) = WeightedGraph::parallel_compose(&[ga.clone(), gb.clone()]) {
            let sum = parallel_add(&[AdmittanceTriple::of(&ga).unwrap(), AdmittanceTriple::of(&gb).unwrap()]).unwrap();
            let direct = AdmittanceTriple::of(&p).unwrap();
            prop_assert_eq!((direct.mu1, direct.mu2, direct.nu), (sum.mu1, sum.mu2, sum.nu));
        }
    }

    #[test]
    fn hyperbola_points_satisfy_the_identity(theta in -3.1f64..3.1, k in momentum()) {
        prop_assume!(theta.sin().abs() > 1e-3);
        let (mu, nu) = hyperbola_param(theta, &k).unwrap();
        let (s, c) = (k.sin(), k.cos());
        let r = (nu / s).powi(2) - ((mu - c) / s).powi(2) - 1.0;
        prop_assert!(r.abs() < 1e-9 * (1.0 + (nu / s).powi(2)));
        let back = qws::admittance::phase_from_point(mu, nu, &k);
        prop_assert!((Complex64::from_polar(1.0, back) - Complex64::from_polar(1.0, theta)).norm() < 1e-9);
    }

    #[test]
    fn momentum_relations(k in momentum()) {
        let z = k.z();
        prop_assert!(((z + 1.0 / z).re - k.y()).abs() < 1e-14);
        prop_assert!((z.norm() - 1.0).abs() < 1e-15);
    }
}
