mod common;

use common::*;
use polyfix::hermite::{
    build_table, closed_form_bridge, closed_form_even, divided_difference, newton_to_monomial, synthesize, Node,
    NodeSystem,
};
use polyfix::{Error, Polynomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn table_matches_naive_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let sys = random_system(&mut rng, n, 1e-2);
        let table = build_table(&sys);
        let doubled: Vec<usize> = even_indices(n);
        for len in 1..=2 * n {
            for start in 0..=2 * n - len {
                let want = naive_divided_difference(&sys, &doubled[start..start + len]);
                let got = table.entry(len - 1, start);
                assert!(rel_err(got, want) <= 1e-9, "len {len} start {start}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn closed_forms_match_naive_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let sys = random_system(&mut rng, n, 1e-2);
        for k in 2..=n {
            let want = naive_divided_difference(&sys, &even_indices(k));
            assert!(rel_err(closed_form_even(&sys, k).unwrap(), want) <= 1e-9);
        }
        for k in 2..n {
            let want = naive_divided_difference(&sys, &bridge_indices(k));
            assert!(rel_err(closed_form_bridge(&sys, k).unwrap(), want) <= 1e-9);
            assert!(rel_err(divided_difference(&sys, &bridge_indices(k)).unwrap(), want) <= 1e-9);
        }
    }
}

#[test]
fn synthesis_interpolates_and_is_order_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let sys = random_system(&mut rng, n, 0.05);
        let out = synthesize(&sys);
        assert!(out.achieved_degree < 2 * n);
        let res = out.residuals(&sys);
        assert!(res.value <= 1e-9 && res.derivative <= 1e-8, "{res:?}");

        let mut nodes = sys.nodes().to_vec();
        nodes.shuffle(&mut rng);
        let shuffled = synthesize(&NodeSystem::new(nodes).unwrap());
        let scale = out.h.max_coeff_norm().max(1.0);
        let diff = out.h.sub(&shuffled.h);
        assert!(diff.max_coeff_norm() <= 1e-9 * scale, "{:?} vs {:?}", out.h, shuffled.h);
    }
}

#[test]
fn newton_form_expands_correctly() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let m = rng.gen_range(1..=8);
        let coeffs: Vec<_> = (0..m).map(|_| unit_disk(&mut rng, 2.0)).collect();
        let nodes: Vec<_> = (0..m - 1).map(|_| unit_disk(&mut rng, 1.0)).collect();
        let p = newton_to_monomial(&coeffs, &nodes).unwrap();
        let z = unit_disk(&mut rng, 1.5);
        let mut want = c(0.0, 0.0);
        let mut basis = c(1.0, 0.0);
        for (k, &ck) in coeffs.iter().enumerate() {
            want += ck * basis;
            if k < nodes.len() {
                basis *= z - nodes[k];
            }
        }
        assert!(rel_err(p.eval(z), want) <= 1e-10 || (p.eval(z) - want).norm() <= 1e-12);
    }
    assert!(newton_to_monomial(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0)]).is_err());
}

#[test]
fn synthesis_of_constant_derivative_data() {
    // alpha = 1 everywhere with z_i fixed: the identity solves the problem
    let sys = NodeSystem::new(vec![
        Node::new(c(0.0, 0.0), c(1.0, 0.0)),
        Node::new(c(1.0, 1.0), c(1.0, 0.0)),
        Node::new(c(-0.5, 0.3), c(1.0, 0.0)),
    ])
    .unwrap();
    let out = synthesize(&sys);
    assert_eq!(out.achieved_degree, 1);
    assert!(out.h.sub(&Polynomial::identity()).max_coeff_norm() < 1e-14);
}

#[test]
fn invalid_inputs() {
    let close = NodeSystem::new(vec![Node::new(c(0.0, 0.0), c(0.0, 0.0)), Node::new(c(1e-13, 0.0), c(0.0, 0.0))]);
    assert!(matches!(close, Err(Error::NodesTooClose { .. })));
    assert!(matches!(NodeSystem::new(vec![]), Err(Error::NoNodes)));
    let nan = NodeSystem::new(vec![Node::new(c(f64::NAN, 0.0), c(0.0, 0.0))]);
    assert!(matches!(nan, Err(Error::NonFinite(_))));

    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let sys = random_system(&mut rng, 3, 0.1);
    assert!(matches!(closed_form_even(&sys, 1), Err(Error::InvalidSpan { .. })));
    assert!(matches!(closed_form_even(&sys, 4), Err(Error::InvalidSpan { .. })));
    assert!(matches!(closed_form_bridge(&sys, 3), Err(Error::InvalidSpan { .. })));
    assert!(matches!(divided_difference(&sys, &[]), Err(Error::InvalidIndexList(_))));
    assert!(matches!(divided_difference(&sys, &[0, 5]), Err(Error::InvalidIndexList(_))));
}
