//! Acceptance criteria, one line each.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nestweight::Guards;
use nestweight_cli::checks::{self, Outcome};
use nestweight_cli::random;

fn binary(args: &[&str]) -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { data.join(a).display().to_string() } else { a.to_string() })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_nestweight")).args(&args).output().map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    if out.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    if stdout.trim() != r#"{"result":"1/64"}"# {
        return Err(format!("unexpected output {}", stdout.trim()));
    }
    Ok(1)
}

fn main() {
    let g = Guards::default();
    type Criterion<'a> = (u32, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (1, 1, Box::new(|| binary(&["eval-wnwa", "bar_procedure.wnwa.json", "bar_procedure.nw.json"]))),
        (2, 5, Box::new(|| checks::counting(5, &g))),
        (3, 30, Box::new(|| checks::depth(6, &g))),
        (4, 30, Box::new(|| checks::enumeration(10, 6, &g))),
        (5, 120, Box::new(|| checks::phi_coherence(&mut random::rng(5), 7, 200, &g))),
        (6, 120, Box::new(|| checks::wnwa_to_wpa_suite(&mut random::rng(6), 50, 3, 5, &g))),
        (7, 120, Box::new(|| checks::wpa_to_wnwa_suite(&mut random::rng(7), 50, 5, &g))),
        (8, 60, Box::new(|| checks::dp_vs_oracle(&mut random::rng(8), 100, 2, 6, &g))),
        (9, 60, Box::new(|| checks::disambiguation(&mut random::rng(9), 30, 4, &g))),
        (10, 60, Box::new(|| checks::gnf_suite(&mut random::rng(10), 20, 5, &g))),
        (11, 120, Box::new(|| checks::wnwa_system_suite(&mut random::rng(11), 20, 2, 5, &g))),
        (12, 120, Box::new(|| checks::wpa_system_suite(&mut random::rng(12), 10, 4, &g))),
        (13, 300, Box::new(|| checks::srfo_suite(5, &g))),
    ];
    let mut failures = 0;
    for (n, limit, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let slow = elapsed > Duration::from_secs(*limit);
        match (&outcome, slow) {
            (Ok(count), false) => println!("criterion {n}: PASS ({count} checks, {:.2}s)", elapsed.as_secs_f64()),
            (Ok(count), true) => {
                failures += 1;
                println!("criterion {n}: FAIL ({count} checks, {:.2}s exceeds {limit}s)", elapsed.as_secs_f64());
            }
            (Err(e), _) => {
                failures += 1;
                println!("criterion {n}: FAIL ({e}, {:.2}s)", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
