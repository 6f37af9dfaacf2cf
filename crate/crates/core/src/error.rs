use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The grid does not cover `[mean - 6W, mean + 6W]` or does not resolve `W`.
    #[error("grid too narrow for gaussian (width {width}, mean {mean}): {reason}")]
    GridTooNarrow {
        width: f64,
        mean: f64,
        reason: String,
    },

    #[error("wavefunctions live on different grids")]
    GridMismatch,

    #[error("state has zero norm (dark port)")]
    ZeroNorm,

    #[error("momentum shift {delta} violates the aliasing guard |delta| < {limit}")]
    Aliasing { delta: f64, limit: f64 },

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("wavepacket reached the grid boundary (edge fraction {fraction:e})")]
    BoundaryLeakage { fraction: f64 },

    #[error("kinetic energy {energy_ev} eV is not small against the electron rest energy")]
    Relativistic { energy_ev: f64 },

    #[error("empty search range")]
    EmptyRange,
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<f64> {
    if ok && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
