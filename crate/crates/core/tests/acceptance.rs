//! End-to-end acceptance suite: one test per criterion, each printing a
//! pass/fail line (run with `--nocapture` to see them).

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frame_forge::catalog::catalog;
use frame_forge::naimark::{
    check_projection_conditions, is_maximal, maximalize, project, semiorthogonalize,
    MaximalizationChoices,
};
use frame_forge::scaling::is_scaling;
use frame_forge::unimodular::{build_alpha, delta_periodic};
use frame_forge::wavelet::{
    calderon, d_psi, is_parseval, parseval_on_test, synthesize_default, telescoping, tq,
};
use frame_forge::{
    Cval, Dyadic, Interval, LineSet, PeriodicSet, PeriodicStepFunction, Piece, StepFunction,
    DEFAULT_WINDOW_EXP as W,
};

fn criterion(n: u32, name: &str, budget_ms: u128, f: impl FnOnce()) {
    use std::io::Write;
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let status = if result.is_ok() { "pass" } else { "FAIL" };
    // write straight to the descriptor so the line survives libtest capture
    let _ = writeln!(
        std::io::stdout(),
        "criterion {n:2} ({name}): {status} [{elapsed:.2?}]"
    );
    if let Err(e) = result {
        resume_unwind(e);
    }
    assert!(
        elapsed.as_millis() < budget_ms,
        "criterion {n} exceeded its {budget_ms} ms budget: {elapsed:?}"
    );
}

fn d(n: i64, e: u32) -> Dyadic {
    Dyadic::new(n, e)
}

fn chi(ivs: &[(Dyadic, Dyadic)]) -> StepFunction {
    StepFunction::indicator(
        &LineSet::from_intervals(W, ivs.iter().map(|&(a, b)| Interval { a, b }).collect())
            .unwrap(),
    )
}

/// Dense-grid Calderón oracle: Σ_{|j| ≤ depth} |ψ̂(2ʲξ)|² on midpoints of the
/// 2^{-12} grid over (−2, 2).
fn calderon_grid_oracle(psi_hat: &StepFunction, depth: i32) -> f64 {
    let mut max_dev = 0.0f64;
    let edge = 16.0f64;
    for i in -8192..8192i64 {
        let xi = d(2 * i + 1, 13);
        let x = xi.to_f64();
        let mut sum = 0.0;
        for j in -depth..=depth {
            if (x * 2f64.powi(j)).abs() >= edge {
                continue;
            }
            sum += psi_hat.step_at(xi.mul_pow2(j)).abs_sq();
        }
        max_dev = max_dev.max((sum - 1.0).abs());
    }
    max_dev
}

#[test]
fn criterion_01_calderon() {
    criterion(1, "Calderon identity", 2000, || {
        for name in ["psi0", "psi1"] {
            let psi = catalog(name).unwrap();
            assert_eq!(calderon(&psi).unwrap(), (0.0, None), "{name}");
            assert!(calderon_grid_oracle(&psi, 20) <= 1e-9, "{name} grid oracle");
        }
    });
}

#[test]
fn criterion_02_tq() {
    criterion(2, "t_q identity", 2000, || {
        for name in ["psi0", "psi1"] {
            let psi = catalog(name).unwrap();
            for q in (-9..=9i64).filter(|q| q.rem_euclid(2) == 1) {
                assert_eq!(tq(&psi, q).unwrap(), (0.0, None), "{name}, q = {q}");
            }
        }
        // χ_{[0,1)} touches 0: the dyadic sums are not finitely computable
        let half_line = chi(&[(d(0, 0), d(1, 0))]);
        assert!(tq(&half_line, 1).is_err());
        // annular negative control: t₁ = 1 on [1/2, 1)
        let control = chi(&[(d(1, 1), d(1, 0)), (d(3, 1), d(2, 0))]);
        let (max_dev, witness) = tq(&control, 1).unwrap();
        assert!(max_dev > 0.5);
        assert!(witness.is_some());
    });
}

#[test]
fn criterion_03_norms() {
    criterion(3, "norms", 1000, || {
        assert_eq!(catalog("psi0").unwrap().norm_sq(), 1.0);
        assert_eq!(catalog("psi1").unwrap().norm_sq(), 0.5);
    });
}

#[test]
fn criterion_04_synthesis_round_trip() {
    criterion(4, "synthesis round trip", 2000, || {
        for (scaling, annulus) in [
            ("shannon", (d(1, 1), d(1, 0))),
            ("phi_quarter", (d(1, 2), d(1, 1))),
        ] {
            let w = synthesize_default(&catalog(scaling).unwrap()).unwrap();
            let expected = chi(&[(-annulus.1, -annulus.0), (annulus.0, annulus.1)]);
            assert_eq!(w.psi_hat.modulus(), expected, "{scaling}");
            let report = is_parseval(&w, 9, 1e-12).unwrap();
            assert!(report.parseval_verdict, "{scaling}");
        }
    });
}

#[test]
fn criterion_05_telescoping() {
    criterion(5, "telescoping identity", 2000, || {
        for scaling in ["shannon", "phi_quarter"] {
            let phi = catalog(scaling).unwrap();
            let w = synthesize_default(&phi).unwrap();
            let (dev, _) = telescoping(&phi, &w.psi_hat).unwrap();
            assert_eq!(dev, 0.0, "{scaling}");
            let dpsi = d_psi(&w.psi_hat).unwrap();
            assert!(
                dpsi.approx_eq(&phi.weight().unwrap(), 1e-12),
                "{scaling}: D_psi != p_phi"
            );
        }
    });
}

/// Random step function supported on ±[1/4, 1) on the 2^{-3} grid.
fn random_annular(rng: &mut ChaCha8Rng) -> StepFunction {
    let mut pieces = Vec::new();
    for k in (-8..-2i64).chain(2..8) {
        pieces.push(Piece {
            iv: Interval {
                a: d(k, 3),
                b: d(k + 1, 3),
            },
            v: Cval::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        });
    }
    StepFunction::from_pieces(Dyadic::ZERO, W, pieces).unwrap()
}

#[test]
fn criterion_06_per_scale_parseval() {
    criterion(6, "per-scale Parseval accumulation", 5000, || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for name in ["psi0", "psi1"] {
            let psi = catalog(name).unwrap();
            for trial in 0..10 {
                let f = random_annular(&mut rng);
                let check = parseval_on_test(&f, &psi, None).unwrap();
                assert!(
                    check.deviation <= 1e-10 * check.norm_sq,
                    "{name} trial {trial}: deviation {}",
                    check.deviation
                );
            }
        }
    });
}

/// Random periodic set with breakpoints on the 2^{-5} grid.
fn random_set(rng: &mut ChaCha8Rng) -> PeriodicSet {
    let mut ivs = Vec::new();
    for k in 0..32i64 {
        if rng.gen::<bool>() {
            ivs.push(Interval {
                a: d(k, 5),
                b: d(k + 1, 5),
            });
        }
    }
    PeriodicSet::from_intervals(ivs).unwrap()
}

#[test]
fn criterion_07_projection_theorem_equivalence() {
    criterion(7, "projection theorem equivalence", 30000, || {
        let shannon_pair = is_scaling(&catalog("shannon").unwrap()).unwrap();
        let quarter_pair = is_scaling(&catalog("phi_quarter").unwrap()).unwrap();
        let m = maximalize(&quarter_pair, &MaximalizationChoices::default()).unwrap();
        let corpus = [
            (shannon_pair.phi_hat.clone(), shannon_pair.m0.clone()),
            (m.phi_star.clone(), m.m0_star.clone()),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut total = 0usize;
        let mut excluded = 0usize;
        for (phi_star, m0_star) in &corpus {
            let mut done = 0;
            while done < 60 {
                let e = random_set(&mut rng);
                if e.is_empty() {
                    continue;
                }
                done += 1;
                total += 1;
                let report = check_projection_conditions(phi_star, m0_star, &e, None).unwrap();
                if report.undecided > 0 {
                    excluded += 1;
                    continue;
                }
                let conditions = report.all_pass();
                let scaling_side = project(phi_star, &e)
                    .and_then(|p| is_scaling(&p))
                    .map(|pair| pair.is_scaling_function())
                    .unwrap_or(false);
                assert_eq!(
                    conditions, scaling_side,
                    "disagreement on E = {:?}",
                    e.intervals()
                );
            }
        }
        assert!(total >= 100);
        assert!((excluded as f64) < 0.05 * total as f64, "{excluded}/{total} undecided");
    });
}

#[test]
fn criterion_08_naimark_round_trip() {
    criterion(8, "Naimark round trip", 2000, || {
        let phi = catalog("phi_quarter").unwrap();
        let pair = is_scaling(&phi).unwrap();
        let m = maximalize(&pair, &MaximalizationChoices::default()).unwrap();

        // (a) Smith–Barnwell total on [0,1)
        let (defect, _) = frame_forge::naimark::sb_defect_full(&m.m0_star);
        assert!(defect <= 1e-12);

        // (b) restriction recovers φ piecewise-exactly
        let s = phi.support().periodize();
        assert_eq!(project(&m.phi_star, &s).unwrap(), phi);

        // (c) p_{φ*} > 0 on every piece of [0,1)
        assert_eq!(is_maximal(&m.phi_star).unwrap(), (true, None));

        // (d) the extension is itself a scaling function
        assert!(is_scaling(&m.phi_star).unwrap().is_scaling_function());

        // (e) |φ̂*| values against the truncated-product oracle
        let r = 0.5f64.sqrt();
        for (x, expected) in [
            (d(1, 3), 1.0),
            (d(-1, 3), 1.0),
            (d(3, 3), r),
            (d(-3, 3), r),
            (d(5, 3), 0.5),
            (d(-5, 3), 0.5),
        ] {
            assert!((m.phi_star.step_at(x).modulus() - expected).abs() <= 1e-12);
        }
        for i in -1024..1024i64 {
            let xi = d(2 * i + 1, 11);
            let mut prod = 1.0f64;
            for j in 1..=20 {
                prod *= m.m0_star.step_at(xi.mul_pow2(-j)).modulus();
            }
            assert!((m.phi_star.step_at(xi).modulus() - prod).abs() <= 1e-10);
        }
    });
}

#[test]
fn criterion_09_semiorthogonalization() {
    criterion(9, "semiorthogonalization corollary", 2000, || {
        let pair = is_scaling(&catalog("phi_quarter").unwrap()).unwrap();
        let m = maximalize(&pair, &MaximalizationChoices::default()).unwrap();
        let theta = semiorthogonalize(&m.phi_star, &m.phi_star.weight().unwrap()).unwrap();
        assert!(theta
            .weight()
            .unwrap()
            .approx_eq(&PeriodicStepFunction::one(), 1e-12));

        for name in ["psi0", "psi1"] {
            let dpsi = d_psi(&catalog(name).unwrap()).unwrap();
            for p in dpsi.pieces() {
                let v = p.v.to_complex();
                assert!(
                    v.im == 0.0 && (v.re == 0.0 || v.re == 1.0),
                    "{name}: D_psi value {v} not in {{0,1}}"
                );
            }
        }
    });
}

/// ±1-valued 1-periodic function on the 2^{-3} grid.
fn random_signs_periodic(rng: &mut ChaCha8Rng) -> PeriodicStepFunction {
    let pieces = (0..8i64)
        .map(|k| Piece {
            iv: Interval {
                a: d(k, 3),
                b: d(k + 1, 3),
            },
            v: if rng.gen::<bool>() { Cval::ONE } else { Cval::real(-1.0) },
        })
        .collect();
    PeriodicStepFunction::from_pieces(pieces).unwrap()
}

/// ±1-valued seed on ±[N/2, N) for build_alpha.
fn random_seed_block(rng: &mut ChaCha8Rng, n_log2: i32) -> StepFunction {
    let n = 1i64 << n_log2;
    let cells = |range: std::ops::Range<i64>| {
        range.map(|k| Piece {
            iv: Interval {
                a: d(k, 3),
                b: d(k + 1, 3),
            },
            v: Cval::real(1.0),
        })
    };
    let mut pieces: Vec<Piece> = cells(-8 * n..-4 * n).chain(cells(4 * n..8 * n)).collect();
    for p in &mut pieces {
        if rng.gen::<bool>() {
            p.v = Cval::real(-1.0);
        }
    }
    StepFunction::from_pieces(Dyadic::ZERO, W, pieces).unwrap()
}

#[test]
fn criterion_10_gauge_coherence() {
    criterion(10, "gauge coherence", 5000, || {
        let base = synthesize_default(&catalog("shannon").unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..25 {
            let mu = build_alpha(
                &random_signs_periodic(&mut rng),
                &random_seed_block(&mut rng, W as i32),
                W as i32,
                None,
            )
            .unwrap()
            .as_line()
            .unwrap()
            .clone();
            let nu = random_signs_periodic(&mut rng);
            let sigma = delta_periodic(&mu).unwrap();
            // gauge_wavelet recomputes the gauged-triple path internally and
            // rejects any pointwise disagreement above 1e-12
            let gauged = frame_forge::wavelet::gauge_wavelet(&base, &mu, &nu, &sigma)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert_eq!(
                gauged.psi_hat.modulus(),
                base.psi_hat.modulus(),
                "trial {trial}: |psi| not invariant"
            );
            assert!(is_parseval(&gauged, 9, 1e-12).unwrap().parseval_verdict);
        }
    });
}

#[test]
fn criterion_11_alpha_builder() {
    criterion(11, "Lemma-1.4 alpha builder", 5000, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..25 {
            let nu = random_signs_periodic(&mut rng);
            let seed = random_seed_block(&mut rng, 0);
            let alpha = build_alpha(&nu, &seed, 0, None).unwrap();
            let folded = delta_periodic(alpha.as_line().unwrap()).unwrap();
            assert!(folded.approx_eq(&nu, 1e-12), "trial {trial}");

            let again = build_alpha(&nu, &seed, 0, None).unwrap();
            assert_eq!(alpha, again, "trial {trial}: nondeterministic build");
            let b1 = serde_json::to_string(&frame_forge::json::FunctionDto::from(
                alpha.as_line().unwrap(),
            ))
            .unwrap();
            let b2 = serde_json::to_string(&frame_forge::json::FunctionDto::from(
                again.as_line().unwrap(),
            ))
            .unwrap();
            assert_eq!(b1, b2, "trial {trial}: serialization not byte-identical");
        }
    });
}
