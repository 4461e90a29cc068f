//! One line per criterion. Run with `--nocapture` to see the report.

use cusptaylor::acceptance::*;
use cusptaylor::cmdata::registry;
use cusptaylor::exactalg::QuadElt;
use cusptaylor::periodicity::Budget;

#[test]
fn acceptance() {
    let cfg = AcceptanceConfig::default();
    let mut failed = Vec::new();
    for id in 1..=12 {
        let r = run_criterion(id, &cfg);
        println!("{r}");
        if r.status != Status::Pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "criteria not passing: {failed:?}");
}

#[test]
fn corrupted_registry_row_fails() {
    let mut spec = registry(-7).unwrap();
    spec.k2 = QuadElt::int(16, spec.field);
    assert_eq!(cm_table_status(&[registry(-8).unwrap()]), Status::Pass);
    assert_eq!(cm_table_status(&[spec]), Status::Fail);
}

#[test]
fn reduced_budgets_skip() {
    let cfg = AcceptanceConfig {
        petersson: None,
        budget: Budget { max_steps: 10, deadline: None },
        ..AcceptanceConfig::default()
    };
    assert_eq!(run_criterion(11, &cfg).status, Status::Skipped);
    assert_eq!(run_criterion(4, &cfg).status, Status::Skipped);
}
