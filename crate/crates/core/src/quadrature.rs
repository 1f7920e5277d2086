//! Adaptive Gauss–Kronrod (7/15 point) quadrature with graded panels.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1); the odd entries are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_PANELS: usize = 2000;

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

const ROUNDING_FLOOR: f64 = 1e-14;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by bisecting the
/// panel with the largest error estimate. Tolerances tighter than about
/// `1e-14` relative to the integral are treated as met at that level.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    integrate_panels(&f, &[a, b], tol)
}

/// Like [`integrate`] but starts from the given breakpoints, which must be
/// sorted. Singular behaviour is expected to sit at a breakpoint.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64) -> Result<Estimate> {
    let mut panels: Vec<(f64, f64, Estimate)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1], kronrod(f, w[0], w[1])))
        .collect();
    if panels.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    loop {
        let total_err: f64 = panels.iter().map(|p| p.2.error).sum();
        let magnitude: f64 = panels.iter().map(|p| p.2.value.abs()).sum();
        // below this the error estimate is dominated by rounding
        if total_err <= tol.max(ROUNDING_FLOOR * magnitude) {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("non-empty");
        let (a, b, est) = panels[worst];
        let mid = 0.5 * (a + b);
        if panels.len() >= MAX_PANELS || !(mid > a && mid < b) {
            return Err(Error::Quadrature {
                a: breaks[0],
                b: *breaks.last().unwrap(),
                tol,
                err: total_err.max(est.error),
            });
        }
        panels[worst] = (a, mid, kronrod(f, a, mid));
        panels.push((mid, b, kronrod(f, mid, b)));
    }
    // sum small panels first
    let mut parts: Vec<Estimate> = panels.into_iter().map(|p| p.2).collect();
    parts.sort_by(|x, y| x.value.abs().total_cmp(&y.value.abs()));
    Ok(Estimate {
        value: parts.iter().map(|e| e.value).sum(),
        error: parts.iter().map(|e| e.error).sum(),
    })
}

/// Breakpoints for `[lo, hi]` graded geometrically toward `sing <= lo`:
/// `sing + (hi - sing) 2^-k` for `k = 1, 2, ...` down to relative size
/// `2^-depth`, keeping only those strictly inside `(lo, hi)`.
pub fn graded_breaks(sing: f64, lo: f64, hi: f64, depth: u32) -> Vec<f64> {
    let span = hi - sing;
    let mut pts = vec![lo];
    let mut inner: Vec<f64> = (1..=depth)
        .map(|k| sing + span * 0.5f64.powi(k as i32))
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.reverse();
    pts.extend(inner);
    pts.push(hi);
    pts
}
