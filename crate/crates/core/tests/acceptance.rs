//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use cesaro::axioms::gen::{random_corpus, random_ep, trial_rng, GeneratorConfig};
use cesaro::axioms::{
    builtin_rule, replay_witness, search_counterexample, test_axiom, theorem1_suite, Axiom,
    HarnessConfig, Mode, SearchWitness, INDEPENDENCE_CLAIMS,
};
use cesaro::evaluators::{
    abel_identity_residual, abel_truncation, banach_bounds, cesaro_average, cesaro_estimate,
    default_delta_grid, discounted_value, sandwich_checks, ABEL_TRUNCATION_TOLERANCE,
    FLOAT_TOLERANCE,
};
use cesaro::orderings::{
    brute_force_compare, check_c_implies_fixc, compare_catching_up, compare_fixed_step,
    oracle_horizon, ComparisonResult, Criterion, Verdict, Witness,
};
use cesaro::rational::{frac, to_f64};
use cesaro::{BoundedStream, EpStream, Rational, Stream};
use num_traits::Zero;
use rand::Rng;

const SEED: u64 = 20_240_601;

fn verdict_line(id: &str, ok: bool, detail: String) {
    println!(
        "criterion {id}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn random_pairs(n: u64, seed: u64) -> Vec<(EpStream, EpStream)> {
    let g = GeneratorConfig::default();
    (0..n)
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            (random_ep(&mut rng, &g), random_ep(&mut rng, &g))
        })
        .collect()
}

fn random_streams(n: usize, seed: u64) -> Vec<EpStream> {
    random_corpus(n, seed, &GeneratorConfig::default()).unwrap()
}

/// Cycle mean by direct summation, independent of the library.
fn cycle_mean(s: &EpStream) -> Rational {
    let sum: Rational = s.cycle().iter().sum();
    sum / Rational::from_integer(s.cycle().len().into())
}

#[test]
fn criterion_01_separating_pair() {
    let u = EpStream::from_ints(&[], &[1, 0]).unwrap();
    let v = EpStream::from_ints(&[], &[0, 1]).unwrap();
    let c = compare_catching_up(&u, &v);
    let f = compare_fixed_step(&u, &v);
    let ok = c.verdict == Verdict::StrictlyBetter
        && f == ComparisonResult::with_witness(Verdict::Equivalent, Witness::Step { k: 2 });
    verdict_line(
        "1",
        ok,
        format!("C {:?}, fixC {:?} {:?}", c.verdict, f.verdict, f.witness),
    );
}

#[test]
fn criterion_02_c_implies_fixc() {
    let violations = random_pairs(1000, SEED)
        .iter()
        .filter(|(u, v)| !check_c_implies_fixc(u, v))
        .count();
    verdict_line(
        "2",
        violations == 0,
        format!("{violations} violations in 1000 pairs"),
    );
}

#[test]
fn criterion_03_oracle_equivalence() {
    let mut disagreements = 0;
    let mut unknown = 0;
    let mut total = 0;
    for (u, v) in random_pairs(1000, SEED + 3) {
        let horizon = oracle_horizon(&u, &v);
        let (su, sv) = (Stream::Ep(u.clone()), Stream::Ep(v.clone()));
        for (criterion, exact) in [
            (Criterion::CatchingUp, compare_catching_up(&u, &v)),
            (Criterion::FixedStep, compare_fixed_step(&u, &v)),
        ] {
            total += 1;
            let oracle = brute_force_compare(&su, &sv, criterion, horizon, 12).unwrap();
            if oracle.verdict == Verdict::Unknown {
                unknown += 1;
            } else if oracle.verdict != exact.verdict {
                disagreements += 1;
            }
        }
    }
    let rate = unknown as f64 / total as f64;
    verdict_line(
        "3",
        disagreements == 0 && rate < 0.05,
        format!("disagreements {disagreements}, unknown {unknown}/{total}"),
    );
}

#[test]
fn criterion_04_discounted_limit() {
    let delta = 1.0 - 2f64.powi(-20);
    let worst = random_streams(100, SEED + 4)
        .iter()
        .map(|s| (discounted_value(s, delta).unwrap() - to_f64(&cycle_mean(s))).abs())
        .fold(0.0, f64::max);
    verdict_line("4", worst <= 1e-4, format!("max gap {worst:.3e}"));
}

#[test]
fn criterion_05_sandwich_on_doubling_blocks() {
    let s = Stream::Bounded(BoundedStream::doubling_blocks(0.0, 1.0, 1.0).unwrap());
    let checks =
        sandwich_checks(&s, 4, 1 << 20, &default_delta_grid(), FLOAT_TOLERANCE, 0.05).unwrap();
    let ok = checks.iter().all(|c| c.holds);
    let first = &checks[0];
    verdict_line(
        "5",
        ok,
        format!(
            "k=1 mean range [{:.4}, {:.4}], discounted range [{:.4}, {:.4}]",
            first.kstep.lower, first.kstep.upper, first.discounted.lower, first.discounted.upper
        ),
    );
}

#[test]
fn criterion_06_harmonic_shift() {
    let s = Stream::Bounded(BoundedStream::harmonic_shift(1.0, 2.0).unwrap());
    let est = cesaro_estimate(&s, 1, 1_000_000).unwrap();
    let ok = est.brackets(1.0, 1e-3) && est.width() <= 1e-3;
    verdict_line(
        "6",
        ok,
        format!("estimate [{:.8}, {:.8}]", est.lower, est.upper),
    );
}

#[test]
fn criterion_07_abel_identity() {
    let mut worst: f64 = 0.0;
    for s in random_streams(50, SEED + 7) {
        let bound = to_f64(&s.sup_abs()).max(1.0);
        for delta in [0.5, 0.9, 0.99] {
            let n = abel_truncation(delta, bound, ABEL_TRUNCATION_TOLERANCE).unwrap();
            worst = worst.max(abel_identity_residual(&s, delta, n).unwrap());
        }
    }
    verdict_line("7", worst < 1e-9, format!("max residual {worst:.3e}"));
}

#[test]
fn criterion_08_positive_suite() {
    let rule = builtin_rule("cesaro").unwrap();
    let corpus = random_streams(500, SEED + 8);
    let reports = theorem1_suite(&rule, &corpus, 200, SEED, &HarnessConfig::default()).unwrap();
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}={}", r.axiom_id, r.failures))
        .collect();
    let bounded = reports
        .iter()
        .filter(|r| r.mode == Mode::BoundedHorizon)
        .count();
    verdict_line(
        "8",
        failing.is_empty() && reports.len() == Axiom::ALL.len(),
        format!(
            "{} axioms x 200 trials, {bounded} bounded-horizon, failing: [{}]",
            reports.len(),
            failing.join(", ")
        ),
    );
}

fn independence(rule_id: &str, label: &str) {
    let claim = INDEPENDENCE_CLAIMS
        .iter()
        .find(|c| c.rule_id == rule_id)
        .unwrap();
    let rule = builtin_rule(rule_id).unwrap();
    let config = HarnessConfig::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for &axiom in claim.drops {
        let property = format!("axiom:{axiom}:{rule_id}");
        let out =
            search_counterexample(&property, &GeneratorConfig::default(), SEED, 10_000).unwrap();
        match out.witness {
            Some(SearchWitness::Axiom { witness, .. }) => {
                let replayed = replay_witness(&rule, axiom, &witness, &config).unwrap();
                ok &= replayed;
                notes.push(format!(
                    "{axiom}: witness at trial {} (replay {replayed})",
                    witness.trial
                ));
            }
            _ => {
                ok = false;
                notes.push(format!("{axiom}: no witness in 10000 trials"));
            }
        }
    }
    let corpus = random_streams(500, SEED + 9);
    for &axiom in claim.keeps {
        let report = test_axiom(&rule, axiom, &corpus, 1000, SEED, &config).unwrap();
        if !report.passed() {
            ok = false;
            notes.push(format!("kept {axiom} failed {} times", report.failures));
        }
    }
    notes.push(format!("{} kept axioms checked", claim.keeps.len()));
    verdict_line(label, ok, notes.join("; "));
}

#[test]
fn criterion_09a_trivial_indifference() {
    independence("trivial_indifference", "9 (trivial_indifference)");
}

#[test]
fn criterion_09b_dictator_t1() {
    independence("dictator_t1", "9 (dictator_t1)");
}

#[test]
fn criterion_09c_inf_rule() {
    independence("inf_rule", "9 (inf_rule)");
}

#[test]
fn criterion_09d_liminf_value() {
    independence("liminf_value", "9 (liminf_value)");
}

#[test]
fn criterion_09e_liminf_mean() {
    independence("liminf_mean", "9 (liminf_mean)");
}

#[test]
fn criterion_10_banach_limit_properties() {
    let grid = default_delta_grid();
    let mut violations = 0;
    for s in random_streams(500, SEED + 10) {
        let w = banach_bounds(&Stream::Ep(s.clone()), 4, 1000, &grid, FLOAT_TOLERANCE).unwrap();
        let w_tail =
            banach_bounds(&Stream::Ep(s.tail(1)), 4, 1000, &grid, FLOAT_TOLERANCE).unwrap();
        let mu = cycle_mean(&s);
        let exact = [&w.w1, &w.w2, &w.w3, &w.w4]
            .iter()
            .all(|x| x.as_exact() == Some(&mu));
        let min = s.cycle().iter().min().unwrap();
        let max = s.cycle().iter().max().unwrap();
        let avg = cesaro_average(&s);
        if w != w_tail
            || !exact
            || !(min <= &avg && &avg <= max)
            || cesaro_average(&s.tail(1)) != avg
        {
            violations += 1;
        }
    }
    verdict_line(
        "10",
        violations == 0,
        format!("{violations} violations in 500 streams"),
    );
}

#[test]
fn criterion_11_linearity() {
    let mut violations = 0;
    let pairs = random_pairs(500, SEED + 11);
    let mut rng = trial_rng(SEED, 11);
    for (u, v) in &pairs {
        let alpha = frac(rng.random_range(-6..=6), rng.random_range(1..=4));
        let sum_ok = cesaro_average(&u.add(v)) == cycle_mean(u) + cycle_mean(v);
        let scale_ok = cesaro_average(&u.scale(&alpha)) == &alpha * cycle_mean(u);
        let zero_ok = cesaro_average(&u.sub(u)).is_zero();
        if !(sum_ok && scale_ok && zero_ok) {
            violations += 1;
        }
    }
    verdict_line(
        "11",
        violations == 0,
        format!("{violations} violations in 500 pairs"),
    );
}
