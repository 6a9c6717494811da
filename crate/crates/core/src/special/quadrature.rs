//! Globally adaptive 21-point Gauss–Kronrod quadrature on a finite interval.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerances for the adaptive quadrature behind `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(Error::config(format!(
                "quadrature settings need rel_tol > 0, abs_tol > 0, max_subdivisions >= 1; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialValue {
    pub value: f64,
    pub est_error: f64,
}

impl std::ops::Add for SpecialValue {
    type Output = SpecialValue;
    fn add(self, rhs: SpecialValue) -> SpecialValue {
        SpecialValue {
            value: self.value + rhs.value,
            est_error: self.est_error + rhs.est_error,
        }
    }
}

// QUADPACK qk21 abscissae (descending, last is the centre) and weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_centre = f(centre);
    let mut kronrod = f_centre * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_centre - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Integrate `f` over the union of consecutive intervals given by `breaks`,
/// bisecting the panel with the largest error estimate until the total
/// error drops below `max(rel_tol·|I|, abs_tol)`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    settings: &QuadratureSettings,
) -> Result<SpecialValue> {
    debug_assert!(breaks.len() >= 2);
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tolerance = (settings.rel_tol * value.abs()).max(settings.abs_tol);
        if error <= tolerance {
            return Ok(SpecialValue {
                value,
                est_error: error,
            });
        }
        if panels.len() >= settings.max_subdivisions || !value.is_finite() {
            return Err(Error::Convergence {
                value,
                est_error: error,
                tolerance,
                subdivisions: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) {
            return Err(Error::Convergence {
                value,
                est_error: error,
                tolerance,
                subdivisions: panels.len(),
            });
        }
        panels[worst] = gk21(&f, a, mid);
        panels.insert(worst + 1, gk21(&f, mid, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| 3.0 * x * x - x + 2.0, &[-1.0, 2.0], &s).unwrap();
        assert!((r.value - 13.5).abs() < 1e-14);
    }

    #[test]
    fn gaussian_half_line() {
        let s = QuadratureSettings::default();
        let r = integrate(|x: f64| (-0.5 * x * x).exp(), &[0.0, 1.0, 14.0], &s).unwrap();
        let want = (std::f64::consts::PI / 2.0).sqrt();
        assert!((r.value - want).abs() < 1e-13);
        assert!(r.est_error <= 1e-12 * r.value);
    }

    #[test]
    fn sqrt_endpoint_singularity_converges() {
        let s = QuadratureSettings::default();
        let r = integrate(|x: f64| x.sqrt(), &[0.0, 1.0], &s).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exhausted_budget_reports_convergence_error() {
        let s = QuadratureSettings {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_subdivisions: 2,
        };
        let err = integrate(|x: f64| x.powf(-0.9), &[0.0, 1.0], &s).unwrap_err();
        assert!(matches!(err, Error::Convergence { est_error, .. } if est_error > 0.0));
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let bad = QuadratureSettings {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
