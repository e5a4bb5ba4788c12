//! Fixed inputs shared by the benchmarks.

use fundgpd::fieldgalois::{Fq, FqAlgebra};
use fundgpd::fincat::{FinCategory, FinGroup, FinGroupoid};

pub fn bgroupoid(name: &str) -> FinGroupoid {
    FinGroupoid::from_group(&FinGroup::by_name(name).expect("known group"))
}

pub fn groups() -> Vec<FinGroup> {
    ["Z2", "Z4", "S3", "D4", "Q8"].iter().map(|n| FinGroup::by_name(n).expect("known group")).collect()
}

/// `F_q³ × F_{q⁶}` over `F_4`: 4⁹ elements, too many to list, so idempotents come from splitting.
pub fn large_algebra() -> FqAlgebra {
    let k = Fq::of_order(4).expect("F4");
    FqAlgebra::split(&k, 3).product(&FqAlgebra::extension(&k, 6).expect("degree 6 extension")).expect("product")
}

pub fn walking_idempotent() -> FinCategory {
    FinCategory::walking_idempotent()
}
