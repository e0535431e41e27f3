//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::HashSet;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use fibcat::io::render;
use fibcat::laws::{find_law, registry, run_law, run_laws, LawReport, Settings};
use fibcat::lke::verify_slice_extension;
use fibcat::model::Kind;
use fibcat::present::{
    check_certificate, localization_presentation, localize, Budget, PresentError, RewriteSystem,
};
use fibcat::shapes;
use fibcat::simplicial::generator_images;
use fibcat::{are_isomorphic, FinCat, Functor, ObjId, DEFAULT_SEARCH_NODES};

const SEED: u64 = 0;

type Criterion = (u32, &'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn law_run(name: &str, cases: u64) -> LawReport {
    let law = find_law(name).unwrap_or_else(|| panic!("unknown law {name}"));
    run_law(&law, SEED, cases, &Settings::default())
}

fn describe(r: &LawReport) -> String {
    let mut s = format!(
        "{} {}/{} passed, {} skipped, {} failed",
        r.law, r.passed, r.cases, r.skipped, r.failed
    );
    if let Some(f) = r.failures.first() {
        s.push_str(&format!(
            " (case {}, {} shrink steps, witness {})",
            f.case, f.shrink_steps, f.witness
        ));
    }
    s
}

fn laws_hold(runs: &[(&str, u64)]) -> Outcome {
    let reports: Vec<LawReport> = runs.iter().map(|&(n, c)| law_run(n, c)).collect();
    let pass = reports.iter().all(|r| r.failed == 0 && r.passed > 0);
    let detail = reports.iter().map(describe).collect::<Vec<_>>().join("; ");
    outcome(pass, detail)
}

/// Posets on at most `max` points, one per isomorphism class. Every class
/// has a labelling refining the natural order, so only those are built.
fn posets(max: usize) -> Vec<Arc<FinCat>> {
    let mut out: Vec<Arc<FinCat>> = Vec::new();
    for k in 1..=max {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        for bits in 0u32..(1 << pairs.len()) {
            let leq = |i: usize, j: usize| {
                i == j
                    || (i < j && bits >> pairs.iter().position(|&p| p == (i, j)).unwrap() & 1 == 1)
            };
            let transitive = (0..k)
                .all(|a| (0..k).all(|b| (0..k).all(|c| !(leq(a, b) && leq(b, c)) || leq(a, c))));
            if !transitive {
                continue;
            }
            let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
            let p = Arc::new(shapes::poset(&labels, leq));
            if !out.iter().any(|q| are_isomorphic(q, &p).unwrap()) {
                out.push(p);
            }
        }
    }
    out
}

/// Every functor `[n] -> P`, as weakly increasing chains.
fn chains_into(p: &Arc<FinCat>, n: usize) -> Vec<Functor> {
    let mut seqs: Vec<Vec<ObjId>> = p.objects().map(|o| vec![o]).collect();
    for _ in 0..n {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                let last = *s.last().unwrap();
                p.objects()
                    .filter(move |&o| !p.hom(last, o).is_empty())
                    .map(move |o| [s.clone(), vec![o]].concat())
            })
            .collect();
    }
    let ord = Arc::new(shapes::ordinal(n));
    seqs.into_iter()
        .map(|s| Functor::from_objects(ord.clone(), p.clone(), s).unwrap())
        .collect()
}

fn slice_extension_sweep() -> Outcome {
    let ps = posets(4);
    let (mut checked, mut failed) = (0usize, Vec::new());
    for p in &ps {
        for n in 0..=3 {
            for sigma in chains_into(p, n) {
                checked += 1;
                match verify_slice_extension(&sigma, Budget::default(), DEFAULT_SEARCH_NODES) {
                    Ok(r) if r.holds() => {}
                    other => failed.push(format!("{:?} -> {other:?}", sigma.obj_table())),
                }
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!(
            "{} posets up to isomorphism, {checked} functors, {} failures{}",
            ps.len(),
            failed.len(),
            failed
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

fn localization() -> Outcome {
    let mut notes = Vec::new();
    let m = shapes::standard("[1]^sharp").unwrap();
    let iso_ok = match localize(&m, Budget::default()) {
        Ok(loc) => are_isomorphic(loc.cat(), &Arc::new(shapes::walking_iso())).unwrap(),
        Err(_) => false,
    };
    notes.push(format!("[1] localized is the walking iso: {iso_ok}"));

    // Grow the case count until 100 convergent cases have been checked.
    let mut cases = 100;
    let up = loop {
        let r = law_run("localization-universal-property", cases);
        if r.passed >= 100 || r.failed > 0 || cases >= 1600 {
            break r;
        }
        cases *= 2;
    };
    let up_ok = up.failed == 0 && up.passed >= 100;
    notes.push(describe(&up));

    let m = shapes::standard("parallel{a}").unwrap();
    let cert_ok = match localize(&m, Budget::default()) {
        Err(PresentError::Divergent(cert)) => {
            let sys = RewriteSystem::complete(&localization_presentation(&m).0, 10_000).unwrap();
            let mut seen = HashSet::new();
            let mut word = cert.prefix_letters.clone();
            let distinct = (0..8).all(|_| {
                let fresh = seen.insert(sys.normalize(&word));
                word.extend_from_slice(&cert.cycle_letters);
                fresh
            });
            check_certificate(&sys, &cert, 8) && distinct
        }
        _ => false,
    };
    notes.push(format!(
        "parallel pair divergent with valid certificate: {cert_ok}"
    ));
    outcome(iso_ok && up_ok && cert_ok, notes.join("; "))
}

/// The case analyses expected for each simplicial generator.
fn expected_summary(kind: Kind) -> Vec<(String, Vec<String>)> {
    let rows: &[(&str, &str)] = match kind {
        Kind::Discrete => &[
            ("horn(1,1)", "generator endpoint"),
            ("horn(2,1)", "identity"),
            ("horn(2,2)", "pushouts of endpoint then horn-collapse"),
            ("horn(3,1)", "identity"),
            ("horn(3,2)", "identity"),
            ("horn(3,3)", "pushout of horn-collapse"),
        ],
        Kind::Marked => &[
            ("inner-horn(2,1)", "identity"),
            ("inner-horn(3,1)", "identity"),
            ("inner-horn(3,2)", "identity"),
            ("marked-horn(1)", "generator marked-endpoint"),
            ("marked-horn(2)", "generator marked-horn"),
            ("marked-horn(3)", "pushout of filler-merge"),
            ("spine-marking", "generator composite-marking"),
            ("iso-marking", "generator iso-marking"),
        ],
    };
    rows.iter()
        .map(|(s, c)| (s.to_string(), vec![c.to_string()]))
        .collect()
}

fn generator_tables() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut pass = true;
    let mut notes = Vec::new();
    for (kind, file) in [
        (Kind::Discrete, "generator_images_discrete.json"),
        (Kind::Marked, "generator_images_marked.json"),
    ] {
        let mut ok_here = true;
        for n in 0..=1 {
            let base = Arc::new(shapes::ordinal(n));
            match generator_images(kind, &base, Budget::default(), DEFAULT_SEARCH_NODES) {
                Ok(g) => {
                    ok_here &= g.summary == expected_summary(kind);
                    if n == 1 {
                        let want = std::fs::read_to_string(golden.join(file)).unwrap_or_default();
                        ok_here &= render(&g) == want;
                        notes.push(format!("{file}: {} rows", g.rows.len()));
                    }
                }
                Err(e) => {
                    ok_here = false;
                    notes.push(format!("{file}: {e}"));
                }
            }
        }
        pass &= ok_here;
    }
    outcome(pass, notes.join("; "))
}

fn determinism() -> Outcome {
    let laws = registry();
    let settings = Settings::default();
    let cases = 20;
    let run_in = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| render(&run_laws(&laws, SEED, cases, &settings)))
    };
    let a = render(&run_laws(&laws, SEED, cases, &settings));
    let b = render(&run_laws(&laws, SEED, cases, &settings));
    let one = run_in(1);
    let four = run_in(4);
    let same = a == b && a == one && a == four;
    outcome(
        same,
        format!(
            "{} laws x {cases} cases, {} bytes, default/repeat/1-thread/4-thread identical: {same}",
            laws.len(),
            a.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "discrete round trip",
            Box::new(|| laws_hold(&[("set-round-trip", 500)])),
        ),
        (
            2,
            "marked elements are cart-marked Grothendieck fibrations",
            Box::new(|| laws_hold(&[("marked-elements-fibrant", 500)])),
        ),
        (
            3,
            "fibration calculus",
            Box::new(|| {
                laws_hold(&[
                    ("cartesian-composition", 500),
                    ("cartesian-iso-lifts", 500),
                    ("cartesian-lift-uniqueness", 500),
                    ("discrete-fibration-cancellation", 500),
                ])
            }),
        ),
        (
            4,
            "comprehensive factorization",
            Box::new(|| laws_hold(&[("comprehensive-factorization", 500)])),
        ),
        (
            5,
            "coincidences between fibrant marked slices",
            Box::new(|| {
                laws_hold(&[
                    ("naive-fibration-isofibration", 200),
                    ("marked-trivial-fibration-equivalence", 200),
                    ("naive-fibrant-cart-marked", 200),
                ])
            }),
        ),
        (
            6,
            "path objects",
            Box::new(|| laws_hold(&[("path-object", 100)])),
        ),
        (
            7,
            "adjunction laws",
            Box::new(|| {
                laws_hold(&[
                    ("triangles-discrete", 200),
                    ("triangles-marked", 100),
                    ("unit-marked-equivalence", 100),
                ])
            }),
        ),
        (8, "slice extension sweep", Box::new(slice_extension_sweep)),
        (9, "localization", Box::new(localization)),
        (10, "generator image tables", Box::new(generator_tables)),
        (11, "determinism", Box::new(determinism)),
    ];
    let total = Instant::now();
    let mut all = true;
    for (n, name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {n}: {} {name} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "PASS" } else { "FAIL" },
        total.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
