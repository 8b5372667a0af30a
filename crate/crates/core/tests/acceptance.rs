//! Acceptance suite. Runs every criterion at full size and prints one
//! PASS/FAIL line each; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mixer_core::distance::{bfs_distance, transposition_word, BfsLimits};
use mixer_core::experiments::{
    estimate_exponent, random_permutation, verify_claim, verify_conditional_law, verify_domination,
    verify_mirror, verify_sandwich, verify_words, ExperimentConfig, Report, Tolerances,
};
use mixer_core::sim::DEFAULT_RETURN_CAP;
use mixer_core::{MixerElement, SitePermutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn report_outcome(report: &Report, summary: String) -> Outcome {
    match report.failures().next() {
        None => Ok(summary),
        Some(c) => Err(format!(
            "{}: {} [{}]",
            c.name,
            c.detail,
            c.replay.as_deref().unwrap_or("-")
        )),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed <= limit {
        Ok(String::new())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn group_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random = |rng: &mut ChaCha8Rng| {
        MixerElement::new(rng.random_range(-20..=20), random_permutation(rng, 20))
    };
    let e = MixerElement::identity();
    for i in 0..10_000 {
        let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
        let inv = a.inverse();
        let ok = &(&a * &b) * &c == &a * &(&b * &c)
            && &e * &a == a
            && &a * &e == a
            && &a * &inv == e
            && &inv * &a == e;
        if !ok {
            return Err(format!("triple {i} fails: a = {a}, b = {b}, c = {c}"));
        }
    }
    Ok("10^4 triples".into())
}

fn word_synthesis() -> Outcome {
    for h in (-30..=30i64).filter(|&h| h != 0) {
        let w = transposition_word(h).map_err(|e| e.to_string())?;
        let target = MixerElement::new(0, SitePermutation::transposition(0, h));
        if w.evaluate().map_err(|e| e.to_string())? != target
            || w.len() as u64 != 4 * h.unsigned_abs() - 3
        {
            return Err(format!("transposition_word({h}) has length {}", w.len()));
        }
    }
    let rep = verify_words(10_000, 10, 7).map_err(|e| e.to_string())?;
    report_outcome(
        &rep.to_report(json!({})),
        format!(
            "60 transpositions, 10^4 random permutations, max length ratio {:.3}",
            rep.max_upper_ratio
        ),
    )
}

fn exhaustive_sandwich() -> Outcome {
    let limits = BfsLimits::default();
    let rep = verify_sandwich(8, &limits).map_err(|e| e.to_string())?;
    let spot = bfs_distance(
        &MixerElement::new(0, SitePermutation::transposition(0, 2)),
        8,
        &limits,
    )
    .map_err(|e| e.to_string())?
    .exact();
    if spot != Some(5) {
        return Err(format!("distance of (0, <0,2>) is {spot:?}, expected 5"));
    }
    report_outcome(
        &rep.to_report(json!({"radius": 8})),
        format!("{} elements, no violations", rep.ball_size),
    )
}

fn escape_exponent() -> Outcome {
    let cfg = ExperimentConfig::default();
    let rep = estimate_exponent(&cfg).map_err(|e| e.to_string())?;
    let slope = |f: &Option<mixer_core::stats::LinearFit>| f.as_ref().map_or(f64::NAN, |f| f.slope);
    report_outcome(
        &rep.to_report(&cfg),
        format!(
            "slopes X {:.3}, upper {:.3}, lower {:.3}, Cov {:.3}",
            slope(&rep.fit_x),
            slope(&rep.fit_d_upper),
            slope(&rep.fit_d_lower),
            slope(&rep.fit_cov)
        ),
    )
}

fn claim() -> Outcome {
    let tol = Tolerances::default();
    let rep = verify_claim(
        100_000,
        ExperimentConfig::default().seed,
        DEFAULT_RETURN_CAP,
        &tol,
    )
    .map_err(|e| e.to_string())?;
    report_outcome(
        &rep.to_report(json!({}), &tol),
        format!(
            "frequencies ({:.4}, {:.4}, {:.4}), censored {}",
            rep.frequency(-1),
            rep.frequency(0),
            rep.frequency(1),
            rep.censored
        ),
    )
}

fn domination() -> Outcome {
    let cfg = ExperimentConfig {
        trials: 10_000,
        t_grid: vec![1 << 10, 1 << 12],
        probe_sites: vec![0, 1, 4, 16],
        ..Default::default()
    };
    let rep = verify_domination(&cfg).map_err(|e| e.to_string())?;
    let report = rep.to_report(&cfg);
    let worst = rep
        .tails
        .iter()
        .filter(|r| r.k > 1)
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    let defect = rep.tails.iter().map(|r| r.exact_defect).fold(0.0, f64::max);
    report_outcome(
        &report,
        format!(
            "{} tail cells, smallest margin {worst:.5}, largest exact finite-t defect {defect:.5}",
            rep.tails.len()
        ),
    )
}

fn conditional_law() -> Outcome {
    let cfg = ExperimentConfig {
        trials: 20_000,
        t_grid: vec![16, 64, 256],
        probe_sites: vec![0, 1, 4, 16],
        ..Default::default()
    };
    let rep = verify_conditional_law(&cfg).map_err(|e| e.to_string())?;
    let checked = rep.bins.iter().filter(|b| b.checked).count();
    if checked == 0 {
        return Err("no bin reached the sample threshold".into());
    }
    report_outcome(
        &rep.to_report(&cfg),
        format!(
            "{checked} populated bins, fitted c = {:.3}, C = {:.3}",
            rep.c_lower, rep.c_upper
        ),
    )
}

fn mirror_symmetry() -> Outcome {
    let cfg = ExperimentConfig {
        trials: 100_000,
        t_grid: vec![256],
        ..Default::default()
    };
    let rep = verify_mirror(&cfg).map_err(|e| e.to_string())?;
    let p_min = rep.rows.iter().map(|r| r.test.p_value).fold(1.0, f64::min);
    report_outcome(&rep.to_report(&cfg), format!("smallest p-value {p_min:.4}"))
}

fn csv_rows(report: &Report) -> Vec<u8> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf).expect("in-memory CSV");
    buf
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig {
        trials: 200,
        t_grid: vec![64, 256, 1024],
        ..Default::default()
    };
    let tol = Tolerances::default();
    let runs: [&dyn Fn(&ExperimentConfig) -> Report; 5] = [
        &|c| estimate_exponent(c).unwrap().to_report(c),
        &|c| verify_domination(c).unwrap().to_report(c),
        &|c| verify_conditional_law(c).unwrap().to_report(c),
        &|c| verify_mirror(c).unwrap().to_report(c),
        &|c| {
            verify_claim(2_000, c.seed, DEFAULT_RETURN_CAP, &tol)
                .unwrap()
                .to_report(json!({}), &tol)
        },
    ];
    for run in runs {
        let a = run(&cfg);
        let b = run(&ExperimentConfig {
            workers: 2,
            ..cfg.clone()
        });
        if csv_rows(&a) != csv_rows(&b) || a.fitted != b.fitted {
            return Err(format!("{} differs between runs", a.experiment));
        }
    }
    let w1 = verify_words(500, 8, 3).unwrap().to_report(json!({}));
    let w2 = verify_words(500, 8, 3).unwrap().to_report(json!({}));
    if csv_rows(&w1) != csv_rows(&w2) {
        return Err("words differs between runs".into());
    }
    Ok("6 experiments reproduced byte for byte".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("group algebra", group_axioms, Duration::from_secs(10)),
        ("word synthesis", word_synthesis, Duration::from_secs(60)),
        (
            "exhaustive sandwich",
            exhaustive_sandwich,
            Duration::from_secs(300),
        ),
        ("escape exponent", escape_exponent, Duration::from_secs(900)),
        ("return offsets", claim, Duration::from_secs(120)),
        ("visit-count domination", domination, Duration::MAX),
        ("conditional law", conditional_law, Duration::MAX),
        ("mirror symmetry", mirror_symmetry, Duration::MAX),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run().and_then(|msg| within(start.elapsed(), limit).map(|_| msg));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS [{}] {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
