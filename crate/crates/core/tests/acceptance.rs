use std::process::ExitCode;

use sphere_twobody::verify::run_criterion;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=9 {
        let report = run_criterion(id).expect("criterion exists");
        println!("{report}");
        if !report.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
