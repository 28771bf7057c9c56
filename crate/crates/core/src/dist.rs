//! Reference distributions `F_Z` with log-concave densities.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard reference CDF of a transformation model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetDistribution {
    /// `F(z) = 1 / (1 + exp(-z))`
    Logistic,
    /// `F(z) = Phi(z)`
    StandardNormal,
    /// Minimum extreme value, `F(z) = 1 - exp(-exp(z))`.
    MinExtremeValue,
}

impl TargetDistribution {
    pub const ALL: [TargetDistribution; 3] = [
        TargetDistribution::Logistic,
        TargetDistribution::StandardNormal,
        TargetDistribution::MinExtremeValue,
    ];

    /// Short name used on the command line and in file headers.
    pub fn name(self) -> &'static str {
        match self {
            TargetDistribution::Logistic => "logistic",
            TargetDistribution::StandardNormal => "normal",
            TargetDistribution::MinExtremeValue => "mev",
        }
    }

    pub fn cdf(self, z: f64) -> Result<f64> {
        check_finite(z)?;
        Ok(self.cdf_unchecked(z))
    }

    /// Quantile function. `p` must lie strictly inside `(0, 1)`; callers that
    /// need boundary handling clamp first (see [`crate::clamp_prob`]).
    pub fn quantile(self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires p in (0, 1), got {p}"
            )));
        }
        Ok(self.quantile_unchecked(p))
    }

    pub fn log_density(self, z: f64) -> Result<f64> {
        check_finite(z)?;
        Ok(self.log_density_unchecked(z))
    }

    pub fn density(self, z: f64) -> Result<f64> {
        self.log_density(z).map(f64::exp)
    }

    /// Derivative of the log-density, `f'(z) / f(z)`.
    pub fn d_log_density(self, z: f64) -> Result<f64> {
        check_finite(z)?;
        Ok(match self {
            TargetDistribution::Logistic => 1.0 - 2.0 * logistic_cdf(z),
            TargetDistribution::StandardNormal => -z,
            TargetDistribution::MinExtremeValue => 1.0 - z.exp(),
        })
    }

    // Unchecked variants are used on hot paths where inputs are already
    // known to be finite / interior.

    pub(crate) fn cdf_unchecked(self, z: f64) -> f64 {
        match self {
            TargetDistribution::Logistic => logistic_cdf(z),
            TargetDistribution::StandardNormal => 0.5 * erfc(-z / SQRT_2),
            TargetDistribution::MinExtremeValue => -(-z.exp()).exp_m1(),
        }
    }

    /// `1 - F(z)` without cancellation in the upper tail.
    pub(crate) fn sf_unchecked(self, z: f64) -> f64 {
        match self {
            TargetDistribution::Logistic => logistic_cdf(-z),
            TargetDistribution::StandardNormal => 0.5 * erfc(z / SQRT_2),
            TargetDistribution::MinExtremeValue => (-z.exp()).exp(),
        }
    }

    pub(crate) fn density_unchecked(self, z: f64) -> f64 {
        self.log_density_unchecked(z).exp()
    }

    pub(crate) fn log_density_unchecked(self, z: f64) -> f64 {
        match self {
            TargetDistribution::Logistic => {
                let a = z.abs();
                -a - 2.0 * (-a).exp().ln_1p()
            }
            TargetDistribution::StandardNormal => -0.5 * z * z - LN_SQRT_2PI,
            TargetDistribution::MinExtremeValue => z - z.exp(),
        }
    }

    pub(crate) fn quantile_unchecked(self, p: f64) -> f64 {
        match self {
            TargetDistribution::Logistic => p.ln() - (-p).ln_1p(),
            TargetDistribution::StandardNormal => normal_quantile(p),
            TargetDistribution::MinExtremeValue => (-(-p).ln_1p()).ln(),
        }
    }
}

impl fmt::Display for TargetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(TargetDistribution::Logistic),
            "normal" => Ok(TargetDistribution::StandardNormal),
            "mev" => Ok(TargetDistribution::MinExtremeValue),
            other => Err(Error::Parse(format!(
                "unknown distribution '{other}' (expected logistic | normal | mev)"
            ))),
        }
    }
}

fn check_finite(z: f64) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("expected a finite value, got {z}")))
    }
}

#[inline]
pub(crate) fn logistic_cdf(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub(crate) fn logit(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}

// Acklam's rational approximation (relative error < 1.2e-9), polished by one
// Newton step against the erfc-based CDF.
fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (-p).ln_1p()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // In the upper tail, compare survival probabilities to keep precision.
    let err = if x > 0.0 {
        (1.0 - p) - 0.5 * erfc(x / SQRT_2)
    } else {
        p - 0.5 * erfc(-x / SQRT_2)
    };
    let pdf = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
    if x > 0.0 {
        x - err / pdf
    } else {
        x + err / pdf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    use TargetDistribution::*;

    #[test]
    fn cdf_at_zero() {
        assert_abs_diff_eq!(Logistic.cdf(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(StandardNormal.cdf(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            MinExtremeValue.cdf(0.0).unwrap(),
            1.0 - (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(MinExtremeValue.cdf(0.0).unwrap(), 0.632121, epsilon = 1e-6);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        for d in TargetDistribution::ALL {
            assert!(matches!(d.cdf(f64::NAN), Err(Error::Input(_))));
            assert!(matches!(d.cdf(f64::INFINITY), Err(Error::Input(_))));
            assert!(matches!(
                d.log_density(f64::NEG_INFINITY),
                Err(Error::Input(_))
            ));
        }
    }

    #[test]
    fn quantile_examples() {
        assert_abs_diff_eq!(Logistic.quantile(0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(Logistic.quantile(0.8).unwrap(), 4f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            MinExtremeValue.quantile(1.0 - (-1.0f64).exp()).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            StandardNormal.quantile(0.975).unwrap(),
            1.959963984540054,
            epsilon = 1e-12
        );
    }

    #[test]
    fn quantile_domain() {
        for d in TargetDistribution::ALL {
            for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
                assert!(matches!(d.quantile(p), Err(Error::Domain(_))), "{d} {p}");
            }
        }
    }

    #[test]
    fn log_density_examples() {
        assert_abs_diff_eq!(
            Logistic.log_density(0.0).unwrap(),
            0.25f64.ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            StandardNormal.log_density(0.0).unwrap(),
            -0.5 * (2.0 * PI).ln(),
            epsilon = 1e-15
        );
        // central finite difference of the CDF as oracle
        let h = 1e-5;
        let fd = (Logistic.cdf(3.0 + h).unwrap() - Logistic.cdf(3.0 - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(Logistic.log_density(3.0).unwrap().exp(), fd, epsilon = 1e-6);
    }

    #[test]
    fn round_trip_random_probabilities() {
        let mut rng = crate::rng::seeded(11);
        for d in TargetDistribution::ALL {
            for _ in 0..1000 {
                let p = rng.random_range(0.001..0.999);
                let z = d.quantile(p).unwrap();
                assert!((d.cdf(z).unwrap() - p).abs() < 1e-10, "{d} p={p}");
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf_on_grid() {
        // Where the CDF saturates to 1.0 in double precision the inverse is
        // not recoverable, so those points are skipped.
        for d in TargetDistribution::ALL {
            for i in 0..=400 {
                let z = -10.0 + i as f64 * 0.05;
                let p = d.cdf(z).unwrap();
                if 1.0 - p < 1e-7 {
                    continue;
                }
                let back = d.quantile(p).unwrap();
                assert!((back - z).abs() < 1e-9, "{d} z={z} back={back}");
            }
        }
    }

    #[test]
    fn tail_quantiles_are_accurate() {
        for d in TargetDistribution::ALL {
            for p in [1e-12, 1e-9, 1e-6, 0.01, 0.99, 1.0 - 1e-6, 1.0 - 1e-9] {
                let z = d.quantile(p).unwrap();
                let back = d.cdf(z).unwrap();
                assert!(
                    (back - p).abs() <= 1e-10 * p.max(1e-3),
                    "{d} p={p} back={back}"
                );
            }
        }
    }

    #[test]
    fn log_density_is_concave() {
        let step = 0.01;
        for d in TargetDistribution::ALL {
            let zs: Vec<f64> = (0..=1600).map(|i| -8.0 + i as f64 * step).collect();
            let l: Vec<f64> = zs.iter().map(|&z| d.log_density(z).unwrap()).collect();
            for w in l.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-8, "{d}");
            }
        }
    }

    #[test]
    fn density_matches_cdf_difference() {
        let h = 1e-5;
        for d in TargetDistribution::ALL {
            for i in 0..=120 {
                let z = -6.0 + i as f64 * 0.1;
                let fd = (d.cdf(z + h).unwrap() - d.cdf(z - h).unwrap()) / (2.0 * h);
                assert!((d.density(z).unwrap() - fd).abs() < 1e-6, "{d} z={z}");
            }
        }
    }

    #[test]
    fn d_log_density_matches_finite_difference() {
        let h = 1e-6;
        for d in TargetDistribution::ALL {
            for i in 0..=40 {
                let z = -4.0 + i as f64 * 0.2;
                let fd =
                    (d.log_density(z + h).unwrap() - d.log_density(z - h).unwrap()) / (2.0 * h);
                assert!((d.d_log_density(z).unwrap() - fd).abs() < 1e-6, "{d} z={z}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for d in TargetDistribution::ALL {
            assert_eq!(d.name().parse::<TargetDistribution>().unwrap(), d);
        }
        assert!("gumbel".parse::<TargetDistribution>().is_err());
    }
}
