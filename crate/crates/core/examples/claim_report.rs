//! Runs a claim driver, prints its report and rechecks the certificates.

use circuitkit::cli::{emit, run_claim, verify_report, Caps, ClaimId, Format, Params};

fn main() {
    let id: ClaimId = std::env::args().nth(1).as_deref().unwrap_or("eq1").parse().expect("known claim id");
    let report = run_claim(id, &Params::new(), &Caps::default()).expect("claim runs");
    let doc = serde_json::to_value(&report).unwrap();
    print!("{}", String::from_utf8(emit(&doc, Format::Json)).unwrap());
    let check = verify_report(&report).unwrap();
    println!("certificates consistent: {}, verified: {}", check.consistent, check.verified);
}
