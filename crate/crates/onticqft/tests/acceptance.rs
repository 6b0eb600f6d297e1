//! Acceptance gate: one criterion per numbered block, each printing a
//! single PASS/FAIL line. Tolerances are pinned here, independently of
//! the defaults baked into the suite runner.

use onticqft::verify::{run_suite, CheckResult, Report, RunConfig};

const TOL_ORTHO: f64 = 1e-12;
const TOL_SG_RESIDUAL: f64 = 1e-10;
const TOL_EVOLUTION: f64 = 1e-11;
const TOL_MULTIMODE: f64 = 1e-11;
const TOL_TRANSFORM: f64 = 1e-13;
const TOL_FERMION_BASIS: f64 = 1e-12;
const TOL_GAMMA: f64 = 1e-13;
const TOL_HELICITY: f64 = 1e-12;
const TOL_NILPOTENCY: f64 = 1e-15;

fn checks_matching<'a>(report: &'a Report, pattern: &str) -> Vec<&'a CheckResult> {
    report
        .checks
        .iter()
        .filter(|c| c.id.contains(pattern))
        .collect()
}

fn require(
    errors: &mut Vec<String>,
    report: &Report,
    pattern: &str,
    expected_count: usize,
    tol: f64,
) {
    let found = checks_matching(report, pattern);
    if found.len() != expected_count {
        errors.push(format!(
            "pattern `{pattern}`: expected {expected_count} checks, found {}",
            found.len()
        ));
        return;
    }
    for c in found {
        if c.measured > tol {
            errors.push(format!(
                "{}: measured {:.3e} exceeds pinned tolerance {tol:.0e}",
                c.id, c.measured
            ));
        }
    }
}

fn criterion_1(report: &Report) -> Result<(), Vec<String>> {
    // Single-mode ontic bases for every D in 2..=32: orthonormal and
    // complete, one-sided beable residual exactly D^{-1/2}, and the
    // three beable realizations mutually consistent.
    let mut errors = Vec::new();
    for d in 2..=32usize {
        let prefix = format!("cogwheel/D{d:02}");
        require(&mut errors, report, &format!("{prefix}/orthonormality"), 1, TOL_ORTHO);
        require(&mut errors, report, &format!("{prefix}/completeness"), 1, TOL_ORTHO);
        require(&mut errors, report, &format!("{prefix}/beable-cyclic-eigenrelation"), 1, TOL_ORTHO);
        require(&mut errors, report, &format!("{prefix}/beable-sg-residual"), 1, TOL_SG_RESIDUAL);
        require(&mut errors, report, &format!("{prefix}/beable-projector-vs-cyclic"), 1, TOL_ORTHO);
        require(
            &mut errors,
            report,
            &format!("{prefix}/beable-projector-vs-sg-plus-wrap"),
            1,
            TOL_ORTHO,
        );
    }
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_2(report: &Report) -> Result<(), Vec<String>> {
    // Cogwheel evolution: U(2 pi j / (omega D)) permutes the ontic basis
    // by +j teeth for D in {2, 4, 8}, and random off-lattice times
    // advance phase labels exactly.
    let mut errors = Vec::new();
    for d in [2usize, 4, 8] {
        for j in 0..d {
            require(
                &mut errors,
                report,
                &format!("cogwheel/evolution/D{d:02}/j{j:02}"),
                1,
                TOL_EVOLUTION,
            );
        }
        require(
            &mut errors,
            report,
            &format!("cogwheel/evolution/D{d:02}/off-lattice"),
            1,
            TOL_EVOLUTION,
        );
    }
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_3(report: &Report) -> Result<(), Vec<String>> {
    // Multimode bosonic theories at the pinned (F, M, D) grid: ontic
    // lattice orthonormal/complete, cyclic beables diagonal on it with
    // unit-modulus eigenvalues, and random-state expansions invertible.
    let mut errors = Vec::new();
    let grid = [
        ("scalar-real", 1usize, 2usize, 3usize),
        ("scalar-complex", 2, 1, 4),
        ("vector", 3, 1, 2),
        ("vector", 3, 2, 2),
        ("vector", 6, 1, 2),
    ];
    for (suite, f, m, d) in grid {
        let prefix = format!("{suite}/F{f}M{m}D{d}");
        require(&mut errors, report, &format!("{prefix}/orthonormality"), 1, TOL_MULTIMODE);
        require(&mut errors, report, &format!("{prefix}/completeness"), 1, TOL_MULTIMODE);
        require(
            &mut errors,
            report,
            &format!("{prefix}/beable-eigenrelations"),
            1,
            TOL_MULTIMODE,
        );
        require(
            &mut errors,
            report,
            &format!("{prefix}/expansion-round-trip"),
            1,
            TOL_MULTIMODE,
        );
        require(
            &mut errors,
            report,
            &format!("{prefix}/evolution-permutation"),
            1,
            TOL_MULTIMODE,
        );
        for c in checks_matching(report, &format!("{prefix}/expansion-round-trip")) {
            if c.metadata.get("samples").map(String::as_str) != Some("100") {
                errors.push(format!("{}: expected 100 random-state samples", c.id));
            }
        }
    }
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_4(report: &Report) -> Result<(), Vec<String>> {
    // Fermion ring for K in {1, 2, 3}, both propagation signs: unitary
    // site transform, canonical anticommutators, ontic basis joint with
    // the site number operators, and shift evolution for |m| <= 2K with
    // wrap-sign metadata recorded.
    let mut errors = Vec::new();
    for k in [1usize, 2, 3] {
        for tag in ["p", "m"] {
            let prefix = format!("fermion/K{k}s{tag}");
            require(
                &mut errors,
                report,
                &format!("{prefix}/transform-unitarity"),
                1,
                TOL_TRANSFORM,
            );
            require(
                &mut errors,
                report,
                &format!("{prefix}/anticommutator-table"),
                1,
                TOL_TRANSFORM,
            );
            require(
                &mut errors,
                report,
                &format!("{prefix}/ontic-orthonormality"),
                1,
                TOL_FERMION_BASIS,
            );
            require(
                &mut errors,
                report,
                &format!("{prefix}/ontic-completeness"),
                1,
                TOL_FERMION_BASIS,
            );
            require(
                &mut errors,
                report,
                &format!("{prefix}/n-op-eigenbasis"),
                1,
                TOL_FERMION_BASIS,
            );
            let evolution = checks_matching(report, &format!("{prefix}/evolution/"));
            if evolution.len() != 4 * k + 1 {
                errors.push(format!(
                    "{prefix}: expected {} evolution checks, found {}",
                    4 * k + 1,
                    evolution.len()
                ));
            }
            for c in evolution {
                if c.measured > TOL_EVOLUTION {
                    errors.push(format!(
                        "{}: measured {:.3e} exceeds {TOL_EVOLUTION:.0e}",
                        c.id, c.measured
                    ));
                }
                for key in ["wrap_count_total", "shift_per_step", "steps"] {
                    if !c.metadata.contains_key(key) {
                        errors.push(format!("{}: missing `{key}` metadata", c.id));
                    }
                }
            }
        }
    }
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_5(report: &Report) -> Result<(), Vec<String>> {
    // Chiral gamma matrices entrywise exact, Clifford algebra with
    // signature (+,-,-,-), helicity eigenspinors on random momenta, and
    // Weyl plane-wave residuals for both frequency signs.
    let mut errors = Vec::new();
    require(&mut errors, report, "fermion/gamma/table", 1, 0.0);
    require(&mut errors, report, "fermion/gamma/clifford", 1, TOL_GAMMA);
    require(&mut errors, report, "fermion/spinors/helicity", 1, TOL_HELICITY);
    require(&mut errors, report, "fermion/spinors/plane-wave", 1, TOL_HELICITY);
    for c in checks_matching(report, "fermion/gamma/clifford") {
        if c.metadata.get("signature").map(String::as_str) != Some("+1,-1,-1,-1") {
            errors.push(format!(
                "{}: signature metadata {:?} is not (+,-,-,-)",
                c.id,
                c.metadata.get("signature")
            ));
        }
    }
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_6(report: &Report) -> Result<(), Vec<String>> {
    // Counterexamples fail by their documented margins: coherent states
    // on the unit circle overlap at least exp(-2), the truncated
    // commutator misses I by exactly D-1 at the top level, fermionic
    // phase components with n >= 2 vanish, and bosonic Dirac-style
    // operators break the canonical anticommutators.
    let mut errors = Vec::new();
    let expect_fail = |errors: &mut Vec<String>, pattern: &str, margin: f64| {
        let found = checks_matching(report, pattern);
        if found.len() != 1 {
            errors.push(format!("pattern `{pattern}`: expected 1 check, found {}", found.len()));
            return;
        }
        let c = found[0];
        if !c.expected_fail {
            errors.push(format!("{}: not marked expected-fail", c.id));
        }
        if c.measured < margin {
            errors.push(format!(
                "{}: measured {:.3e} below required margin {margin:.6}",
                c.id, c.measured
            ));
        }
    };
    expect_fail(&mut errors, "coherent-circle-overlap", (-2.0f64).exp() - 1e-6);
    expect_fail(&mut errors, "bosonic-dirac-anticommutator", 0.5);
    // Truncated commutator: deviation at the top level is exactly D-1.
    let exact = checks_matching(report, "truncated-commutator-exact-value");
    if exact.len() != 1 || exact[0].measured > 1e-12 {
        errors.push("truncated-commutator top entry is not exactly -(D-1)".into());
    }
    let margin_check = checks_matching(report, "counterexamples/truncated-commutator");
    if !margin_check.iter().any(|c| c.expected_fail && c.measured >= 3.0 - 1e-9) {
        errors.push("truncated-commutator margin check missing or below D-1".into());
    }
    require(&mut errors, report, "fermion-nilpotency", 1, TOL_NILPOTENCY);
    require(&mut errors, report, "fermionic-control", 1, TOL_TRANSFORM);
    if errors.is_empty() { Ok(()) } else { Err(errors) }
}

fn criterion_7() -> Result<(), Vec<String>> {
    // Two runs with identical config and seed produce byte-identical
    // canonical JSON (wall-clock excluded).
    let cfg = RunConfig {
        cogwheel_dims: vec![2, 5, 8],
        evolution_dims: vec![4],
        fermion_k: vec![1, 2],
        random_states: 20,
        random_times: 10,
        ..RunConfig::default()
    };
    let a = run_suite(&cfg).map_err(|e| vec![e.to_string()])?;
    let b = run_suite(&cfg).map_err(|e| vec![e.to_string()])?;
    if a.to_canonical_json() != b.to_canonical_json() {
        return Err(vec!["canonical reports differ between identical runs".into()]);
    }
    let reseeded = RunConfig { seed: cfg.seed + 1, ..cfg };
    let c = run_suite(&reseeded).map_err(|e| vec![e.to_string()])?;
    if a.to_canonical_json() == c.to_canonical_json() {
        return Err(vec!["changing the seed did not change the report".into()]);
    }
    Ok(())
}

#[test]
fn acceptance() {
    let report = run_suite(&RunConfig::default()).expect("default suite runs");
    assert!(
        report.all_satisfied(),
        "unsatisfied checks: {:?}",
        report
            .failures()
            .iter()
            .map(|c| format!("{} measured={:.3e}", c.id, c.measured))
            .collect::<Vec<_>>()
    );

    let outcomes: Vec<(&str, Result<(), Vec<String>>)> = vec![
        ("criterion 1: single-mode ontic bases and beables", criterion_1(&report)),
        ("criterion 2: cogwheel evolution", criterion_2(&report)),
        ("criterion 3: multimode bosonic theories", criterion_3(&report)),
        ("criterion 4: fermion ring", criterion_4(&report)),
        ("criterion 5: gamma matrices and Weyl spinors", criterion_5(&report)),
        ("criterion 6: counterexamples", criterion_6(&report)),
        ("criterion 7: deterministic reports", criterion_7()),
    ];

    let mut failed = false;
    for (name, outcome) in &outcomes {
        match outcome {
            Ok(()) => println!("{name}: PASS"),
            Err(errors) => {
                failed = true;
                println!("{name}: FAIL");
                for e in errors {
                    println!("    {e}");
                }
            }
        }
    }
    assert!(!failed, "acceptance criteria failed");
}
