//! Closed-form port statistics for a Gaussian input.
//!
//! With `K = ∫Φ(p)Φ(p-δ)dp = exp(-δ²/(4W²))` and `∫pΦ(p)Φ(p-δ)dp = (δ/2)K`:
//!
//! ```text
//! P_C,D       = (1 ∓ 2 t r cos α K) / 2
//! P_C,D ⟨p⟩   = δ (r² ∓ t r cos α K) / 2
//! ```
//!
//! These are used as an independent check on the grid pipeline and to
//! generate dense `(t, δ)` surfaces cheaply. Everything is in units of `W`.

use crate::error::{check_range, Error, Result};
use crate::interferometer::DARK_PORT_THRESHOLD;

/// Interferometer parameters, with the kick in units of `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziParams {
    pub t: f64,
    pub delta_over_w: f64,
    pub alpha: f64,
}

impl MziParams {
    pub fn new(t: f64, delta_over_w: f64, alpha: f64) -> Result<Self> {
        check_range("t", t, (0.0..=1.0).contains(&t), "0 <= t <= 1")?;
        check_range("delta_over_w", delta_over_w, delta_over_w >= 0.0, "delta >= 0")?;
        check_range("alpha", alpha, true, "finite")?;
        Ok(Self {
            t,
            delta_over_w,
            alpha,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormStats {
    pub p_c: f64,
    pub p_d: f64,
    /// `None` when `p_c` is below the dark-port threshold.
    pub mean_c: Option<f64>,
    pub mean_d: Option<f64>,
    /// `P_C ⟨p⟩_C`, kept separately so the conservation sum stays exact at
    /// dark ports.
    pub first_moment_c: f64,
    pub first_moment_d: f64,
}

impl ClosedFormStats {
    /// `|P_C⟨p⟩_C + P_D⟨p⟩_D - r²δ|`.
    pub fn conservation_residual(&self, params: &MziParams) -> f64 {
        let r2 = 1.0 - params.t * params.t;
        (self.first_moment_c + self.first_moment_d - r2 * params.delta_over_w).abs()
    }
}

/// Overlap of two unit-width Gaussians displaced by `delta_over_w`.
pub fn gaussian_overlap(delta_over_w: f64) -> f64 {
    (-0.25 * delta_over_w * delta_over_w).exp()
}

pub fn closed_form_stats(params: &MziParams) -> ClosedFormStats {
    let MziParams {
        t,
        delta_over_w: delta,
        alpha,
    } = *params;
    let r = (1.0 - t * t).sqrt();
    let cross = t * r * alpha.cos() * gaussian_overlap(delta);
    let p_c = (0.5 * (1.0 - 2.0 * cross)).max(0.0);
    let p_d = (0.5 * (1.0 + 2.0 * cross)).max(0.0);
    let first_moment_c = 0.5 * delta * (r * r - cross);
    let first_moment_d = 0.5 * delta * (r * r + cross);
    let mean = |moment: f64, prob: f64| (prob >= DARK_PORT_THRESHOLD).then(|| moment / prob);
    ClosedFormStats {
        p_c,
        p_d,
        mean_c: mean(first_moment_c, p_c),
        mean_d: mean(first_moment_d, p_d),
        first_moment_c,
        first_moment_d,
    }
}

/// Location and value of the smallest `⟨p⟩_C` found by a dense grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMeanC {
    pub t: f64,
    pub delta_over_w: f64,
    pub value: f64,
}

/// `steps` evenly spaced points over `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> impl Iterator<Item = f64> {
    let h = if steps > 1 {
        (hi - lo) / (steps - 1) as f64
    } else {
        0.0
    };
    (0..steps).map(move |i| if i + 1 == steps && steps > 1 { hi } else { lo + i as f64 * h })
}

/// Dense `resolution × resolution` search of `⟨p⟩_C` over
/// `t ∈ t_range`, `δ ∈ delta_range` at fixed `alpha`. Dark cells are skipped.
pub fn find_min_mean_c(
    t_range: (f64, f64),
    delta_range: (f64, f64),
    alpha: f64,
    resolution: usize,
) -> Result<MinMeanC> {
    let (t_lo, t_hi) = t_range;
    let (d_lo, d_hi) = delta_range;
    if resolution == 0
        || !(t_lo <= t_hi && d_lo <= d_hi)
        || t_lo < 0.0
        || t_hi > 1.0
        || d_lo < 0.0
        || !d_hi.is_finite()
    {
        return Err(Error::EmptyRange);
    }
    let mut best: Option<MinMeanC> = None;
    for t in linspace(t_lo, t_hi, resolution) {
        for delta_over_w in linspace(d_lo, d_hi, resolution) {
            let stats = closed_form_stats(&MziParams {
                t,
                delta_over_w,
                alpha,
            });
            if let Some(value) = stats.mean_c {
                if best.is_none_or(|b| value < b.value) {
                    best = Some(MinMeanC {
                        t,
                        delta_over_w,
                        value,
                    });
                }
            }
        }
    }
    best.ok_or(Error::EmptyRange)
}
