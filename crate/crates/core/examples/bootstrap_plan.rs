//! Build a bootstrap plan, save its sidecar and regenerate it.

use gpc::bootstrap::{make_plan, BootstrapPlan};

fn main() -> gpc::Result<()> {
    let plan = make_plan(12, 4, 99)?;
    for r in 0..=plan.b() {
        let idx = plan.indices(r);
        let distinct = idx.iter().collect::<std::collections::BTreeSet<_>>().len();
        println!("replicate {r}: {idx:?} ({distinct} distinct rows)");
    }
    let json = plan.to_json()?;
    println!("sidecar: {json}");
    assert_eq!(BootstrapPlan::from_json(&json)?, plan);
    Ok(())
}
