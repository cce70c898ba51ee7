//! Prints one PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_RED` fail for documented reasons and are reported, not asserted.
//! Runs without the libtest harness so the report is always visible.

use ddouble::acceptance::{run, Suite};
use ddouble::modrep::EngineConfig;

const KNOWN_RED: [u8; 3] = [3, 6, 9];

fn main() {
    let reports = run(Suite::Full, &EngineConfig::default(), &mut |msg| eprintln!("{msg}"));
    for r in &reports {
        println!("{}", r.line());
        for n in &r.notes {
            println!("      note: {n}");
        }
        for d in r.detail.iter().take(6) {
            println!("      {d}");
        }
        if r.detail.len() > 6 {
            println!("      … {} more", r.detail.len() - 6);
        }
    }
    let unexpected: Vec<u8> = reports.iter().filter(|r| !r.pass && !KNOWN_RED.contains(&r.id)).map(|r| r.id).collect();
    let red: Vec<u8> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    println!("acceptance: {} of {} criteria pass; known red {KNOWN_RED:?}; red now {red:?}", reports.len() - red.len(), reports.len());
    if !unexpected.is_empty() {
        eprintln!("criteria failing outside the known set: {unexpected:?}");
        std::process::exit(1);
    }
}
