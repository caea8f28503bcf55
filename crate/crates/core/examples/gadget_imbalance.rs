//! Builds each imbalance gadget, checks its forced relations and streams its
//! circuits for the imbalance, stopping once 2^k is reached.

use std::time::Instant;

use circuitkit::circuits::{exhaustive_imbalance, EnumerationOptions};
use circuitkit::gadgets::{gadget, verify_halving, GadgetKind};
use circuitkit::ratmat::Rational;

fn main() {
    let runs = [
        (GadgetKind::Thm21, 1),
        (GadgetKind::Thm21, 2),
        (GadgetKind::Thm22, 1),
        (GadgetKind::Thm22, 2),
        (GadgetKind::Thm22, 3),
        (GadgetKind::Thm23, 1),
        (GadgetKind::Thm23, 2),
        (GadgetKind::Thm24, 1),
        (GadgetKind::Thm24, 2),
        (GadgetKind::Thm24, 3),
    ];
    for (kind, k) in runs {
        let inst = gadget(kind, k).expect("valid size");
        let target = Rational::from_int(1 << k);
        let halving = verify_halving(&inst);
        let start = Instant::now();
        let (report, visited) =
            exhaustive_imbalance(&inst.system, &EnumerationOptions::default(), Some(&target)).expect("within caps");
        println!(
            "{kind:?} k={k}: {} edges, {} rows, halving {}, {visited} circuits visited, kappa {} (target {target}) ({:.2?})",
            inst.graph.edge_count(),
            inst.system.m_b(),
            if halving.is_ok() { "ok" } else { "FAILED" },
            report.kappa,
            start.elapsed()
        );
    }
}
