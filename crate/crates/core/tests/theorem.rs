//! The biconditional between refinement of the kernel stratification and
//! chart-wise staticity, on random small presentations over the plane.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use statikit::groebner::{Poly, PolyMatrix, Q};
use statikit::polyhedral::{Fan, RationalCone};
use statikit::staticity::ModulePresentation;
use statikit::statify::{compute_statification, pullback_presentation, verify_theorem_instance, StatifyOptions, ToricModification};

fn random_poly(rng: &mut ChaCha8Rng, max_deg: i32) -> Poly {
    let terms = rng.gen_range(1..=2);
    let mut p = Poly::zero(2);
    for _ in 0..terms {
        let d = rng.gen_range(1..=max_deg);
        let a = rng.gen_range(0..=d);
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        p.add_term(vec![a, d - a], Q::from_integer(c.into()));
    }
    p
}

fn random_presentation(rng: &mut ChaCha8Rng) -> ModulePresentation {
    loop {
        let rows = if rng.gen_bool(0.8) { 1 } else { 2 };
        let cols = if rng.gen_bool(0.9) { 2 } else { 1 };
        let entries: Vec<Vec<Poly>> = (0..rows)
            .map(|_| (0..cols).map(|_| if rows * cols > 2 && rng.gen_bool(0.15) { Poly::zero(2) } else { random_poly(rng, 3) }).collect())
            .collect();
        if entries.iter().flatten().all(|p| p.is_zero()) {
            continue;
        }
        return ModulePresentation::on_affine_space(PolyMatrix::new(2, entries).unwrap()).unwrap();
    }
}

/// The computed fan, a strictly coarser smooth fan when one exists, and a
/// strictly finer one.
fn test_fans(computed: &Fan) -> Vec<Fan> {
    let quadrant = RationalCone::orthant(2);
    let mut fans = vec![computed.clone()];
    let coarse = Fan::of_cone(&quadrant);
    if &coarse != computed {
        fans.push(coarse);
    } else {
        fans.push(coarse.star_subdivision(&statikit::polyhedral::LatticePoint::from_i64(&[1, 1])).unwrap());
    }
    let sigma = &computed.maximal_cones()[0];
    let mid = sigma.rays()[0].add(&sigma.rays()[1]);
    fans.push(computed.star_subdivision(&mid).unwrap());
    fans
}

#[test]
fn refinement_and_staticity_agree_on_random_presentations() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5747);
    let mut checked = 0;
    let mut refining = 0;
    let mut failures = Vec::new();
    for _ in 0..100 {
        let m = random_presentation(&mut rng);
        let cert = compute_statification(&m, StatifyOptions::default()).unwrap();
        assert!(cert.is_valid(), "certificate invalid for {:?}", m.matrix);
        for f in test_fans(&cert.fan) {
            assert!(f.is_smooth());
            let t = verify_theorem_instance(&m, &f).unwrap();
            checked += 1;
            refining += t.refines as usize;
            if !t.agree() {
                failures.push(format!("{:?} on {:?}: refines={} charts={:?}", m.matrix, f.maximal_cones(), t.refines, t.charts));
            }
        }
    }
    assert!(checked >= 300);
    assert!(refining > 0 && refining < checked);
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn identity_pullback_and_chart_idempotence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..15 {
        let m = random_presentation(&mut rng);
        let identity = ToricModification::identity(m.chart.cone());
        assert_eq!(pullback_presentation(&m, &identity, m.chart.cone()).unwrap(), m);
        let cert = compute_statification(&m, StatifyOptions::default()).unwrap();
        for chart in &cert.charts {
            let again = compute_statification(&chart.pullback, StatifyOptions::default()).unwrap();
            assert!(again.identity);
        }
    }
}
