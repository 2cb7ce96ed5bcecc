//! Per-bit collision-probability bound for individual attacks, the
//! five-parameter attack surface behind it, and a brute-force maximization
//! oracle that independently validates the analytic bound.
//!
//! Every attack on a transmitted bit reduces, after symmetrization, to five
//! scalars: probe weights `a`, `b`, `c` (normalized to `a + b + c = 1`) and
//! two interference angles `phi1`, `phi2`. The induced bit error rate and
//! Eve's per-bit collision probability are closed forms in those scalars;
//! maximizing the collision probability at fixed error rate yields the
//! analytic bound implemented by [`pc0_bound`].

use rayon::prelude::*;
use thiserror::Error;

/// Error rate at which the per-bit collision bound peaks. Beyond this point
/// the bound saturates: no attack gives Eve full information.
pub const SATURATION_ERROR_RATE: f64 = 3.0 / 19.0;

/// Collision probability of an untouched bit (error rate zero).
pub const PC0_FLOOR: f64 = 0.5;

/// Saturated value of the per-bit bound, attained at the peak error rate.
/// Equals `703/722`.
pub const PC0_CEILING: f64 = 703.0 / 722.0;

/// Default grid resolution per dimension for the brute-force oracle.
pub const ORACLE_DEFAULT_GRID_POINTS: usize = 60;

/// Default half-width of the error-rate bin for the brute-force oracle.
pub const ORACLE_DEFAULT_E_TOL: f64 = 0.002;

/// Normalization slack allowed on `a + b + c = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CollisionError {
    #[error("error rate out of range [0, 1/2]: {0}")]
    ErrorRateOutOfRange(f64),
    #[error("surface weight {name} must be finite and >= 0, got {value}")]
    NegativeWeight { name: &'static str, value: f64 },
    #[error("surface weights must satisfy a + b + c = 1, got sum {sum}")]
    NotNormalized { sum: f64 },
    #[error("phase {name} out of range [0, pi]: {value}")]
    PhaseOutOfRange { name: &'static str, value: f64 },
    #[error("oracle target error rate out of range [0, 3/19]: {0}")]
    TargetOutOfRange(f64),
    #[error("oracle bin half-width must be positive and finite, got {0}")]
    ToleranceOutOfRange(f64),
    #[error("oracle grid too coarse: need at least 20 points per dimension, got {0}")]
    GridTooCoarse(usize),
    #[error(
        "no grid point has error rate within {e_tol} of {e_target}; widen e_tol or refine the grid"
    )]
    EmptyBin { e_target: f64, e_tol: f64 },
    #[error("mean photon number must be in [0, 1/2) for a positive exponent, got {0}")]
    NbarTooLarge(f64),
}

/// Per-bit collision bound evaluated at an error rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionBoundResult {
    pub error_rate: f64,
    pub pc0: f64,
    /// True iff the error rate lies beyond the peak and the bound is clamped
    /// at [`PC0_CEILING`].
    pub saturated: bool,
}

/// Upper bound on Eve's per-bit collision probability at error rate `e`:
/// `1 - e^2 - (1 - 6e)^2 / 2` for `e <= 3/19`, clamped at its peak value
/// beyond. The quadratic is never extrapolated past its maximum.
pub fn pc0_bound(e: f64) -> Result<CollisionBoundResult, CollisionError> {
    if !(0.0..=0.5).contains(&e) {
        return Err(CollisionError::ErrorRateOutOfRange(e));
    }
    if e > SATURATION_ERROR_RATE {
        Ok(CollisionBoundResult {
            error_rate: e,
            pc0: PC0_CEILING,
            saturated: true,
        })
    } else {
        let one_minus_6e = 1.0 - 6.0 * e;
        Ok(CollisionBoundResult {
            error_rate: e,
            pc0: 1.0 - e * e - one_minus_6e * one_minus_6e / 2.0,
            saturated: false,
        })
    }
}

/// One point of the reduced attack surface: probe weights `a`, `b`, `c`
/// summing to 1 and interference angles in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackSurfacePoint {
    a: f64,
    b: f64,
    c: f64,
    phi1: f64,
    phi2: f64,
}

impl AttackSurfacePoint {
    pub fn new(a: f64, b: f64, c: f64, phi1: f64, phi2: f64) -> Result<Self, CollisionError> {
        for (name, value) in [("a", a), ("b", b), ("c", c)] {
            if !value.is_finite() || value < 0.0 {
                return Err(CollisionError::NegativeWeight { name, value });
            }
        }
        let sum = a + b + c;
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(CollisionError::NotNormalized { sum });
        }
        for (name, value) in [("phi1", phi1), ("phi2", phi2)] {
            if !(0.0..=std::f64::consts::PI).contains(&value) {
                return Err(CollisionError::PhaseOutOfRange { name, value });
            }
        }
        Ok(Self { a, b, c, phi1, phi2 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn phi1(&self) -> f64 {
        self.phi1
    }
    pub fn phi2(&self) -> f64 {
        self.phi2
    }
}

/// Error rate and collision probability of one surface point:
///
/// ```text
/// e  = (1 - b cos(phi1) - sqrt(ac) cos(phi2)) / 2
/// pc = 1 - [a^2 + c^2 + (b-c)^2 + (b-a)^2
///           + 2 (b cos(phi1) - sqrt(ac) cos(phi2))^2] / 8
/// ```
///
/// The interference cross term enters squared; on the `a = c`, `phi = 0`
/// family this reduces exactly to `1 - e^2 - (1 - 6e)^2 / 2`, the value of
/// [`pc0_bound`] (see `optimum_family_matches_bound` below).
pub fn pc0_parametric(p: &AttackSurfacePoint) -> (f64, f64) {
    surface_stats(p.a, p.b, p.c, p.phi1.cos(), p.phi2.cos())
}

#[inline]
fn surface_stats(a: f64, b: f64, c: f64, cos1: f64, cos2: f64) -> (f64, f64) {
    let s = (a * c).sqrt();
    let visibility = b * cos1 + s * cos2; // equals 1 - 2e
    let e = 0.5 * (1.0 - visibility);
    let cross = b * cos1 - s * cos2;
    let quad = a * a + c * c + (b - c) * (b - c) + (b - a) * (b - a) + 2.0 * cross * cross;
    (e, 1.0 - 0.125 * quad)
}

/// Exhaustive maximization of the collision probability over the attack
/// surface, restricted to points whose error rate lies within `e_tol` of
/// `e_target`. This is the independent oracle for [`pc0_bound`].
///
/// The grid is uniform in `(a, c, cos(phi1), cos(phi2))` with `grid_points`
/// values per dimension; `b = 1 - a - c` covers the simplex. The scan skips
/// `cos(phi2)` values that cannot place the error rate inside the bin, which
/// changes nothing about the returned maximum. Deterministic for fixed
/// inputs regardless of worker count (the reduction is a plain max).
pub fn pc0_bruteforce_max(
    e_target: f64,
    e_tol: f64,
    grid_points: usize,
) -> Result<f64, CollisionError> {
    if !(0.0..=SATURATION_ERROR_RATE).contains(&e_target) {
        return Err(CollisionError::TargetOutOfRange(e_target));
    }
    if !e_tol.is_finite() || e_tol <= 0.0 {
        return Err(CollisionError::ToleranceOutOfRange(e_tol));
    }
    if grid_points < 20 {
        return Err(CollisionError::GridTooCoarse(grid_points));
    }

    let g = (grid_points - 1) as f64;
    let cos_step = 2.0 / g;
    let (best, hits) = (0..grid_points)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 / g;
            let mut local_best = f64::NEG_INFINITY;
            let mut local_hits = 0u64;
            for j in 0..(grid_points - i) {
                let c = j as f64 / g;
                let b = (1.0 - a - c).max(0.0);
                let s = (a * c).sqrt();
                for k1 in 0..grid_points {
                    let cos1 = -1.0 + cos_step * k1 as f64;
                    let t1 = b * cos1;
                    // e in bin <=> s*cos2 in [1 - t1 - 2(e+tol), 1 - t1 - 2(e-tol)]
                    let (k2_lo, k2_hi) = if s > 0.0 {
                        let lo = (1.0 - t1 - 2.0 * (e_target + e_tol)) / s;
                        let hi = (1.0 - t1 - 2.0 * (e_target - e_tol)) / s;
                        if hi < -1.0 || lo > 1.0 {
                            continue;
                        }
                        let lo_idx = (((lo.max(-1.0) + 1.0) / cos_step).floor() as i64 - 1).max(0);
                        let hi_idx = (((hi.min(1.0) + 1.0) / cos_step).ceil() as i64 + 1)
                            .min(grid_points as i64 - 1);
                        (lo_idx as usize, hi_idx as usize)
                    } else {
                        // s = 0: e and pc are independent of cos(phi2).
                        (0usize, 0usize)
                    };
                    for k2 in k2_lo..=k2_hi {
                        let cos2 = -1.0 + cos_step * k2 as f64;
                        let (e, pc) = surface_stats(a, b, c, cos1, cos2);
                        if (e - e_target).abs() <= e_tol {
                            local_hits += 1;
                            if pc > local_best {
                                local_best = pc;
                            }
                        }
                    }
                }
            }
            (local_best, local_hits)
        })
        .reduce(
            || (f64::NEG_INFINITY, 0u64),
            |x, y| (x.0.max(y.0), x.1 + y.1),
        );

    if hits == 0 {
        Err(CollisionError::EmptyBin { e_target, e_tol })
    } else {
        Ok(best)
    }
}

/// Largest excess of a grid surface point's collision probability over the
/// analytic bound at that point's own error rate, over every grid point with
/// error rate at most 3/19. A dominant bound keeps this at or below zero up
/// to rounding.
pub fn pc0_surface_dominance_excess(grid_points: usize) -> Result<f64, CollisionError> {
    if grid_points < 20 {
        return Err(CollisionError::GridTooCoarse(grid_points));
    }
    let g = (grid_points - 1) as f64;
    let cos_step = 2.0 / g;
    let worst = (0..grid_points)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 / g;
            let mut local = f64::NEG_INFINITY;
            for j in 0..(grid_points - i) {
                let c = j as f64 / g;
                let b = (1.0 - a - c).max(0.0);
                for k1 in 0..grid_points {
                    let cos1 = -1.0 + cos_step * k1 as f64;
                    for k2 in 0..grid_points {
                        let cos2 = -1.0 + cos_step * k2 as f64;
                        let (e, pc) = surface_stats(a, b, c, cos1, cos2);
                        if e <= SATURATION_ERROR_RATE {
                            let one_minus_6e = 1.0 - 6.0 * e;
                            let bound = 1.0 - e * e - one_minus_6e * one_minus_6e / 2.0;
                            let excess = pc - bound;
                            if excess > local {
                                local = excess;
                            }
                        }
                    }
                }
            }
            local
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(worst)
}

/// Privacy-amplification shrink input in bits: `-log2` of the total
/// collision probability of a sifted string,
/// `n * (1 - 2 nbar) * (-log2 pc0(e))`. The `(1 - 2 nbar)` factor removes
/// the key fraction already revealed by photon splitting, so `nbar >= 1/2`
/// is rejected (splitting would reveal everything).
pub fn total_collision_exponent(
    n_sifted_bits: u64,
    nbar: f64,
    e: f64,
) -> Result<f64, CollisionError> {
    if !(0.0..0.5).contains(&nbar) {
        return Err(CollisionError::NbarTooLarge(nbar));
    }
    let pc0 = pc0_bound(e)?.pc0;
    Ok(n_sifted_bits as f64 * (1.0 - 2.0 * nbar) * (-pc0.log2()))
}
