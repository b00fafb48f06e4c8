use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use statikit::groebner::{Poly, PolyMatrix, Q};
use statikit::staticity::{
    chart_faces, is_log_flat, is_regular_sequence_on, is_static, koszul_tor, log_tor_dim_at_most, verify_witness, ModulePresentation,
};

/// A random presentation graded by `Z^n`: entry `(i, j)` is a scalar multiple
/// of `x^(c_j − r_i)` for random row degrees `r` and column degrees `c`.
/// Without `units` every column has positive degree over some row.
fn multigraded(rng: &mut ChaCha8Rng, n: usize, units: bool) -> ModulePresentation {
    loop {
        let rows = if rng.gen_bool(0.7) { 1 } else { 2 };
        let cols = rng.gen_range(2..=3);
        let r: Vec<Vec<i32>> = (0..rows).map(|_| (0..n).map(|_| rng.gen_range(0..=1)).collect()).collect();
        let c: Vec<Vec<i32>> = (0..cols)
            .map(|_| {
                let base = &r[rng.gen_range(0..rows)];
                let mut e = vec![0; n];
                for _ in 0..rng.gen_range(if units { 0 } else { 1 }..=3) {
                    e[rng.gen_range(0..n)] += 1;
                }
                base.iter().zip(&e).map(|(a, b)| a + b).collect()
            })
            .collect();
        let mut entries = vec![vec![Poly::zero(n); cols]; rows];
        for (i, ri) in r.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                let e: Vec<i32> = cj.iter().zip(ri).map(|(a, b)| a - b).collect();
                if e.iter().all(|&x| x >= 0) && e.iter().sum::<i32>() <= 3 && rng.gen_bool(0.8) {
                    let k: i64 = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    entries[i][j] = Poly::monomial(e, Q::from_integer(k.into()));
                }
            }
        }
        if entries.iter().flatten().all(|p| p.is_zero()) {
            continue;
        }
        return ModulePresentation::on_affine_space(PolyMatrix::new(n, entries).unwrap()).unwrap();
    }
}

/// A random presentation with binomial and monomial entries, not graded in general.
fn general(rng: &mut ChaCha8Rng, n: usize) -> ModulePresentation {
    let rows = rng.gen_range(1..=2);
    let cols = rng.gen_range(1..=2);
    let entries = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let mut p = Poly::zero(n);
                    for _ in 0..rng.gen_range(1..=2) {
                        let e: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                        p.add_term(e, Q::from_integer(rng.gen_range(-2i64..=2).into()));
                    }
                    p
                })
                .collect()
        })
        .collect();
    ModulePresentation::on_affine_space(PolyMatrix::new(n, entries).unwrap()).unwrap()
}

fn image_presentation(m: &ModulePresentation) -> ModulePresentation {
    let k = m.kernel().unwrap();
    let matrix = PolyMatrix::from_columns(m.nvars(), m.matrix.cols(), k.generators());
    ModulePresentation::new(m.chart.clone(), matrix).unwrap()
}

#[test]
fn koszul_rigidity_on_multigraded_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut h1_vanishing = 0;
    for t in 0..120 {
        let n = 2 + t % 2;
        let m = multigraded(&mut rng, n, true);
        let all: Vec<usize> = (0..n).collect();
        if koszul_tor(&m, &all, 1).unwrap().vanishes {
            h1_vanishing += 1;
            for i in 1..=n {
                assert!(koszul_tor(&m, &all, i).unwrap().vanishes, "H_{i} survives for {:?}", m.matrix);
            }
        }
    }
    assert!(h1_vanishing > 10);
}

#[test]
fn dimension_shift_through_syzygies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for t in 0..110 {
        let n = 1 + t % 3;
        let m = if t % 2 == 0 { multigraded(&mut rng, n, true) } else { general(&mut rng, n) };
        let image = image_presentation(&m);
        for face in chart_faces(n) {
            for i in 1..face.len() {
                let upper = koszul_tor(&m, &face, i + 1).unwrap().vanishes;
                let lower = koszul_tor(&image, &face, i).unwrap().vanishes;
                assert_eq!(upper, lower, "face {face:?}, degree {i}, matrix {:?}", m.matrix);
                checked += 1;
            }
        }
    }
    assert!(checked >= 100);
}

#[test]
fn witnesses_are_genuine_and_dimension_bounds_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..60 {
        let n = 2 + t % 2;
        let m = if t % 2 == 0 { multigraded(&mut rng, n, true) } else { general(&mut rng, n) };
        let mut previous = false;
        for d in 0..=n {
            let r = log_tor_dim_at_most(&m, d).unwrap();
            assert_eq!(r.reports.len(), 1 << n);
            for report in &r.reports {
                assert_eq!(report.witness.is_some(), !report.vanishes);
                assert!(verify_witness(&m, report).unwrap());
            }
            assert!(!previous || r.holds, "log Tor dimension bound {d} fails after a smaller one held");
            previous = r.holds;
        }
        assert!(previous, "every module on A^{n} has log Tor dimension at most {n}");
        assert_eq!(is_static(&m).unwrap(), log_tor_dim_at_most(&m, 1).unwrap().holds);
        if is_log_flat(&m).unwrap() {
            assert!(is_static(&m).unwrap());
        }
    }
}

#[test]
fn chart_criterion_matches_regular_sequences_on_multigraded_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut disagreements = Vec::new();
    let mut statics = 0;
    for t in 0..120 {
        let n = 2 + t % 2;
        let m = multigraded(&mut rng, n, t % 3 == 0);
        let chart = is_static(&m).unwrap();
        let seq: Vec<usize> = (0..n).collect();
        let regular = is_regular_sequence_on(&m.kernel().unwrap(), &seq).unwrap();
        statics += chart as usize;
        if chart != regular {
            disagreements.push(format!("{:?}: chart criterion {chart}, regular sequence {regular}", m.matrix));
        }
    }
    assert!(statics > 10 && statics < 100);
    assert!(disagreements.is_empty(), "{}", disagreements.join("\n"));
}

