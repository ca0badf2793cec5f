//! One line per acceptance criterion. Run with
//! `cargo test -p wlp-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wlp_core::bounds::{is_stable, range_bound2, wlp_ranges, ResolutionShape};
use wlp_core::engine::{hilbert_by_product_formula, Analysis, Certification, EngineConfig};
use wlp_core::field::PrimeField;
use wlp_core::harness::{csv_string, sweep, ExperimentConfig, FieldKind, InstanceStatus};
use wlp_core::jacobian::{jacobian_report, Hypersurface};
use wlp_core::poly::{derive_seed, CiSpec};

const ROOT: u64 = 0x5eed_2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn analysis(spec: CiSpec) -> Analysis<PrimeField> {
    Analysis::new(spec, PrimeField::default(), EngineConfig::default()).expect("Artinian")
}

/// Instance `i` of the oracle family: cell `i % 12` picks the number of
/// variables and the degree; every third instance lowers some degrees.
fn oracle_spec(i: u64) -> CiSpec {
    let cell = i % 12;
    let vars = 3 + (cell / 4) as usize;
    let d = 2 + (cell % 4) as u32;
    let mut degrees = vec![d; vars];
    if i % 3 == 2 {
        for (j, e) in degrees.iter_mut().enumerate() {
            *e = (d - (j as u32 % 2)).max(1);
        }
    }
    CiSpec::random(&PrimeField::default(), vars, &degrees, derive_seed(ROOT, i))
}

fn oracle_instances() -> (Vec<(CiSpec, Vec<u64>)>, Vec<String>) {
    let mut out = Vec::new();
    let mut problems = Vec::new();
    for i in 0..100 {
        let spec = oracle_spec(i);
        let mut a = analysis(spec.clone());
        let cert = a.certify_complete_intersection().unwrap();
        if !cert.certified {
            problems.push(format!("instance {i} not certified as a CI"));
        }
        let observed = a.hilbert().values().to_vec();
        out.push((spec, observed));
    }
    (out, problems)
}

fn criterion_1_2() -> (Outcome, Outcome) {
    let (instances, mut problems) = oracle_instances();
    let mut asym = Vec::new();
    for (i, (spec, observed)) in instances.iter().enumerate() {
        let expected = hilbert_by_product_formula(spec.num_vars(), spec.degrees()).unwrap();
        if observed != expected.values() {
            problems.push(format!(
                "instance {i}: {observed:?} vs {:?}",
                expected.values()
            ));
        }
        let e = observed.iter().rposition(|&h| h != 0).unwrap();
        if (0..=e).any(|t| observed[t] != observed[e - t]) {
            asym.push(i);
        }
    }
    (
        outcome(
            problems.is_empty(),
            format!("100 instances, mismatches: {problems:?}"),
        ),
        outcome(
            asym.is_empty(),
            format!("100 instances, asymmetric: {asym:?}"),
        ),
    )
}

fn sweep_config() -> ExperimentConfig {
    ExperimentConfig {
        n_range: [3, 4],
        d_range: [2, 6],
        trials_per_cell: 10,
        ell_trials: 5,
        seed: ROOT,
        field: FieldKind::Prime,
        ..ExperimentConfig::default()
    }
}

fn criterion_3() -> (Outcome, String) {
    let result = sweep(&sweep_config()).unwrap();
    let mut problems = Vec::new();
    for r in &result.instances {
        if !r.ci_certified {
            problems.push(format!(
                "n={} d={} seed={} not a CI",
                r.n, r.d, r.instance_seed
            ));
            continue;
        }
        let last = range_bound2(r.n as i64, r.d as i64)
            .unwrap()
            .last()
            .unwrap() as usize;
        // Letter k is the map into degree k + 1.
        let in_range = &r.verdicts[..last.min(r.verdicts.len())];
        if in_range.chars().any(|c| c != 'H') || r.status != InstanceStatus::Agrees {
            problems.push(format!(
                "n={} d={} seed={} verdicts {}",
                r.n, r.d, r.instance_seed, r.verdicts
            ));
        }
    }
    let ok = problems.is_empty() && result.red_flags == 0 && result.instances.len() == 100;
    (
        outcome(
            ok,
            format!(
                "{} instances, red flags {}, problems: {problems:?}",
                result.instances.len(),
                result.red_flags
            ),
        ),
        csv_string(&result).unwrap(),
    )
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    for i in 0..20u64 {
        let d = 2 + (i % 3) as u32;
        let spec = CiSpec::random(&PrimeField::default(), 4, &[d; 4], derive_seed(ROOT ^ 4, i));
        let mut a = analysis(spec);
        if !a.certify_complete_intersection().unwrap().certified {
            problems.push(format!("instance {i} not a CI"));
            continue;
        }
        let short = a.full_wlp(true).unwrap();
        let full = a.full_wlp(false).unwrap();
        if short.overall != full.overall || short.status != full.status || !short.shortcut_used {
            problems.push(format!(
                "instance {i}: {:?} vs {:?}",
                short.status, full.status
            ));
        }
    }
    outcome(
        problems.is_empty(),
        format!("20 instances, disagreements: {problems:?}"),
    )
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    for i in 0..20u64 {
        let degrees = [1 + (i % 4) as u32, 2 + (i % 3) as u32, 2 + (i % 5) as u32];
        let spec = CiSpec::random(
            &PrimeField::default(),
            3,
            &degrees,
            derive_seed(ROOT ^ 5, i),
        );
        let mut a = analysis(spec);
        if !a.certify_complete_intersection().unwrap().certified {
            problems.push(format!("codim 3 instance {i} not a CI"));
        } else if !a.full_wlp(false).unwrap().overall {
            problems.push(format!("codim 3 instance {i} {degrees:?}"));
        }
    }
    for i in 0..20u64 {
        let count = 2 + (i % 3) as usize;
        let degrees: Vec<u32> = (0..count)
            .map(|j| 1 + ((i + 2 * j as u64) % 5) as u32)
            .collect();
        let spec = CiSpec::random(
            &PrimeField::default(),
            2,
            &degrees,
            derive_seed(ROOT ^ 2, i),
        );
        let report = analysis(spec).full_wlp(false).unwrap();
        if !report.overall {
            problems.push(format!("codim 2 instance {i} {degrees:?}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!("40 instances, failures: {problems:?}"),
    )
}

fn criterion_6() -> Outcome {
    let bad: Vec<(usize, i64)> = (3..=10usize)
        .flat_map(|n| (2..=20i64).map(move |d| (n, d)))
        .filter(|&(n, d)| !is_stable(&ResolutionShape::dual_ci(n, d)))
        .collect();
    outcome(bad.is_empty(), format!("152 shapes, unstable: {bad:?}"))
}

fn criterion_7() -> Outcome {
    let r = wlp_ranges(3, 7, None).unwrap();
    let s = wlp_ranges(4, 7, None).unwrap();
    let got = (
        (r.range_main.start, r.range_main.last()),
        r.range_bound2.last(),
        (r.splitting.lower_b1, r.splitting.upper_bn),
        s.range_bound2.last(),
    );
    let want = ((7, Some(7)), Some(10), (-4, -1), Some(9));
    outcome(got == want, format!("got {got:?}, want {want:?}"))
}

fn criterion_8() -> Outcome {
    let config = EngineConfig::default();
    let fp = PrimeField::default();
    let quintic = jacobian_report(&Hypersurface::fermat(5, 5).unwrap(), &fp, &config).unwrap();
    let start = Instant::now();
    let septic = jacobian_report(&Hypersurface::fermat(5, 7).unwrap(), &fp, &config).unwrap();
    let septic_time = start.elapsed();
    let holds = |v: &Option<wlp_core::engine::WlpVerdict>| {
        v.as_ref()
            .is_some_and(|v| v.maximal && v.certified == Certification::CertifiedHolds)
    };
    let ok = quintic.smooth_certified
        && holds(&quintic.beauville_degree_d)
        && septic.smooth_certified
        && septic.abstract_claim_covered
        && holds(&septic.beauville_degree_d)
        && septic_time < Duration::from_secs(300);
    outcome(
        ok,
        format!(
            "quintic smooth {} degree 5 {} (empirical, abstract claim covered {}); septic smooth {} abstract claim covered {} degree 7 {} in {:.1}s",
            quintic.smooth_certified,
            quintic.beauville_degree_d.as_ref().map_or("none".into(), |v| format!("{:?}", v.certified)),
            quintic.abstract_claim_covered,
            septic.smooth_certified,
            septic.abstract_claim_covered,
            septic.beauville_degree_d.as_ref().map_or("none".into(), |v| format!("{:?}", v.certified)),
            septic_time.as_secs_f64()
        ),
    )
}

fn criterion_9(first: &str) -> Outcome {
    let again = csv_string(&sweep(&sweep_config()).unwrap()).unwrap();
    outcome(
        again == first,
        format!("{} bytes, identical {}", first.len(), again == first),
    )
}

fn report(id: u32, name: &str, budget: Option<Duration>, elapsed: Duration, o: &Outcome) -> bool {
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let ok = o.ok && in_budget;
    let budget = budget.map_or(String::new(), |b| format!(" budget {}s", b.as_secs()));
    println!(
        "{} criterion {id} {name}: {} [{:.1}s{budget}]",
        if ok { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64()
    );
    ok
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

fn main() -> ExitCode {
    let mut all = true;

    let ((c1, c2), t) = timed(criterion_1_2);
    all &= report(
        1,
        "hilbert oracle equivalence",
        Some(Duration::from_secs(60)),
        t,
        &c1,
    );
    all &= report(2, "gorenstein symmetry", None, t, &c2);

    let ((c3, csv), t) = timed(criterion_3);
    all &= report(3, "bound2 sweep", Some(Duration::from_secs(600)), t, &c3);

    let (c, t) = timed(criterion_4);
    all &= report(4, "middle-map shortcut equivalence", None, t, &c);

    let (c, t) = timed(criterion_5);
    all &= report(5, "codimension 2 and 3", None, t, &c);

    let (c, t) = timed(criterion_6);
    all &= report(
        6,
        "dual shape stability",
        Some(Duration::from_secs(1)),
        t,
        &c,
    );

    let (c, t) = timed(criterion_7);
    all &= report(7, "bound arithmetic golden", None, t, &c);

    let (c, t) = timed(criterion_8);
    all &= report(8, "fermat jacobians in P^4", None, t, &c);

    let (c, t) = timed(|| criterion_9(&csv));
    all &= report(9, "sweep determinism", None, t, &c);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
