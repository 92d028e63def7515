//! Acceptance suite: one line per criterion, `PASS`/`FAIL`, with timings.
//! Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use upv_core::checks::{run_check, Context, RunConfig, REGISTRY};
use upv_core::CheckReport;

struct Criterion {
    name: &'static str,
    ids: &'static [&'static str],
    budget: Duration,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        name: "ideal census and master pullback",
        ids: &["unproj.census", "cover.sigma", "cover.z2"],
        budget: Duration::from_secs(5),
    },
    Criterion { name: "plane incidence", ids: &["unproj.plane_incidence"], budget: Duration::from_secs(1) },
    Criterion { name: "jacobian minor", ids: &["unproj.jacobian_minor"], budget: Duration::from_secs(30) },
    Criterion {
        name: "group certification",
        ids: &["cover.lifts", "cover.group_structure"],
        budget: Duration::from_secs(1),
    },
    Criterion { name: "freeness and smoothness", ids: &["cover.free_action"], budget: Duration::from_secs(60) },
    Criterion {
        name: "hilbert functions and plurigenera",
        ids: &["invariants.hilbert_t", "invariants.hilbert_x"],
        budget: Duration::from_secs(120),
    },
    Criterion { name: "intersection numbers", ids: &["invariants.intersection"], budget: Duration::from_secs(1) },
    Criterion {
        name: "bicanonical cubic",
        ids: &["bicanon.s3_derivation", "bicanon.s3_point_images", "bicanon.nodes", "bicanon.plane_sections"],
        budget: Duration::from_secs(30),
    },
    Criterion { name: "branch loci", ids: &["bicanon.branch_loci"], budget: Duration::from_secs(30) },
    Criterion {
        name: "burniat pencil",
        ids: &["burniat.nodes", "burniat.charts", "burniat.f3", "burniat.lambda_identity", "burniat.parameter_map"],
        budget: Duration::from_secs(30),
    },
];

fn run_ids(ctx: &Context, ids: &[&str]) -> Vec<CheckReport> {
    ids.iter()
        .map(|id| {
            let spec = REGISTRY.iter().find(|s| s.id == *id).unwrap_or_else(|| panic!("unknown check {id}"));
            run_check(spec, ctx)
        })
        .collect()
}

/// Extra line for the normalization criterion: the measured ν4 against the printed one.
fn normalization_note(reports: &[CheckReport]) -> Option<String> {
    let r = reports.iter().find(|r| r.id == "burniat.parameter_map")?;
    let map = &r.witness.get(0)?.get("witness")?.get("map")?;
    Some(format!(
        "nu4 = {} (printed {}, squared discrepancy {})",
        map.get("nu4")?.as_str()?,
        map.get("printed_nu4")?.as_str()?,
        map.get("discrepancy_squared")?.as_str()?
    ))
}

fn main() {
    // Build the lifted group once so that its cost is not charged to one criterion.
    let ctx = Context::new(RunConfig::default()).expect("default config is valid");
    let _ = ctx.group();
    let mut failed = 0;
    for (k, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let reports = run_ids(&ctx, c.ids);
        let elapsed = start.elapsed();
        let bad: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.id.as_str()).collect();
        let in_budget = elapsed <= c.budget;
        let ok = bad.is_empty() && in_budget;
        if !ok {
            failed += 1;
        }
        let mut line = format!(
            "{} criterion {:>2} {:<36} {:>8.2}s (budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !bad.is_empty() {
            line.push_str(&format!(" failing: {}", bad.join(", ")));
        }
        if !in_budget {
            line.push_str(" over budget");
        }
        println!("{line}");
        if let Some(note) = normalization_note(&reports) {
            println!("     {note}");
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
