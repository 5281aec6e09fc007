//! Lazified variants on the Birkhoff polytope: oracle calls versus cache
//! hits, through the benchmark harness.

use cgkit::harness::{execute, Preset, RunConfig, Variant};

fn main() -> Result<(), cgkit::harness::HarnessError> {
    let cfg = RunConfig {
        variants: vec![Variant::Fw, Variant::Lfw, Variant::Lafw, Variant::Bcg],
        n: Some(15),
        max_iterations: Some(2000),
        ..RunConfig::new(Preset::Birkhoff)
    };
    let report = execute(&cfg)?;
    print!("{}", report.table());
    for v in &report.variants {
        let s = &v.summary;
        println!(
            "{:>5}: {} oracle calls for {} iterations",
            s.variant, s.lmo_calls, s.iterations
        );
    }
    Ok(())
}
