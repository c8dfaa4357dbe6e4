//! Built-in examples: the Shannon scaling function and the two
//! characteristic-function wavelets used throughout the test suite.

use crate::dyadic::{Dyadic, Interval, LineSet, DEFAULT_WINDOW_EXP};
use crate::error::{FrameError, Result};
use crate::stepfn::StepFunction;

pub const NAMES: &[&str] = &["shannon", "psi0", "psi1", "phi_quarter"];

fn chi(ivs: &[(i64, u32, i64, u32)]) -> StepFunction {
    StepFunction::indicator(
        &LineSet::from_intervals(
            DEFAULT_WINDOW_EXP,
            ivs.iter()
                .map(|&(an, ae, bn, be)| Interval {
                    a: Dyadic::new(an, ae),
                    b: Dyadic::new(bn, be),
                })
                .collect(),
        )
        .expect("catalog intervals are well-formed"),
    )
}

/// Look up a built-in function by name.
pub fn catalog(name: &str) -> Result<StepFunction> {
    match name {
        // φ̂_S = χ_{[-1/2,1/2)}
        "shannon" => Ok(chi(&[(-1, 1, 1, 1)])),
        // ψ̂₀ = χ_{±[1/2,1)}
        "psi0" => Ok(chi(&[(-1, 0, -1, 1), (1, 1, 1, 0)])),
        // ψ̂₁ = χ_{±[1/4,1/2)}
        "psi1" => Ok(chi(&[(-1, 1, -1, 2), (1, 2, 1, 1)])),
        // φ̂ = χ_{[-1/4,1/4)}
        "phi_quarter" => Ok(chi(&[(-1, 2, 1, 2)])),
        _ => Err(FrameError::Invalid(format!(
            "unknown catalog entry '{name}'; available: {}",
            NAMES.join(", ")
        ))),
    }
}
