//! Quadrature and bracketed root finding shared by the model, the L-moment
//! code and the samplers.

use std::cell::RefCell;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::SpecFunConfig;

/// Tolerances for quadrature and inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub quad_max_depth: u32,
    pub root_tol: f64,
    pub root_max_iter: usize,
    pub special: SpecFunConfig,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            quad_abs_tol: 1e-10,
            quad_rel_tol: 1e-8,
            quad_max_depth: 50,
            root_tol: 1e-12,
            root_max_iter: 200,
            special: SpecFunConfig::default(),
        }
    }
}

impl NumericConfig {
    /// A configuration with tighter quadrature, used for oracle comparisons.
    pub fn precise() -> Self {
        NumericConfig { quad_abs_tol: 1e-14, quad_rel_tol: 1e-12, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.quad_abs_tol > 0.0
            && self.quad_rel_tol > 0.0
            && self.root_tol > 0.0
            && self.quad_max_depth > 0
            && self.root_max_iter > 0;
        if !ok {
            return Err(Error::InvalidParameter(format!("bad numeric config {self:?}")));
        }
        self.special.validate()
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule.
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

const MAX_INTERVALS: usize = 4000;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::domain("quadrature", format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok((value, err))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &NumericConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, cfg).map(|v| -v);
    }
    let (value, err) = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err, depth: 0 });
    let mut total = value;
    let mut total_err = err;
    // segments that hit the depth limit stay out of the queue
    let mut frozen_err = 0.0;
    loop {
        let tol = cfg.quad_abs_tol.max(cfg.quad_rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        let Some(seg) = heap.pop() else { break };
        if seg.depth >= cfg.quad_max_depth || heap.len() + 2 > MAX_INTERVALS {
            frozen_err += seg.err;
            if frozen_err > tol {
                break;
            }
            continue;
        }
        let mid = 0.5 * (seg.a + seg.b);
        let (lv, le) = gk15(&f, seg.a, mid)?;
        let (rv, re) = gk15(&f, mid, seg.b)?;
        total += lv + rv - seg.value;
        total_err += le + re - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: lv, err: le, depth: seg.depth + 1 });
        heap.push(Segment { a: mid, b: seg.b, value: rv, err: re, depth: seg.depth + 1 });
    }
    // Recompute the error sum from scratch; the running total drifts.
    let live: f64 = heap.iter().map(|s| s.err).sum::<f64>() + frozen_err;
    let tol = cfg.quad_abs_tol.max(cfg.quad_rel_tol * total.abs());
    if live <= tol {
        Ok(total)
    } else {
        Err(Error::NonConvergence { what: "adaptive quadrature", iterations: MAX_INTERVALS })
    }
}

/// ∫₀¹ f(u, 1-u) du for integrands behaving like `u^p0` at 0 and
/// `(1-u)^p1` at 1 (both exponents > -1). Each half of the interval is mapped
/// with a power substitution that makes the integrand bounded at the
/// endpoint. The integrand receives `1-u` separately so that it keeps full
/// precision next to 1.
pub fn integrate_unit<F: Fn(f64, f64) -> f64>(f: F, p0: f64, p1: f64, cfg: &NumericConfig) -> Result<f64> {
    if !(p0 > -1.0) || !(p1 > -1.0) {
        return Err(Error::DivergentMoment(format!(
            "endpoint exponents {p0}, {p1} are not integrable"
        )));
    }
    let k0 = 1.0 / (p0 + 1.0).min(1.0);
    let k1 = 1.0 / (p1 + 1.0).min(1.0);
    // u = s^k / 2 on the left half, 1 - u = s^k / 2 on the right half
    let left = integrate(
        |s: f64| {
            let sk = s.powf(k0);
            if sk == 0.0 {
                return 0.0;
            }
            let u = 0.5 * sk;
            f(u, 1.0 - u) * 0.5 * k0 * sk / s
        },
        0.0,
        1.0,
        cfg,
    )?;
    let right = integrate(
        |s: f64| {
            let sk = s.powf(k1);
            if sk == 0.0 {
                return 0.0;
            }
            let v = 0.5 * sk;
            f(1.0 - v, v) * 0.5 * k1 * sk / s
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(left + right)
}

/// [`integrate`] for an integrand that can fail; the first failure wins.
pub fn try_integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, cfg: &NumericConfig) -> Result<f64> {
    let slot = RefCell::new(None);
    let v = integrate(|x| catch(&slot, f(x)), a, b, cfg);
    match slot.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}

/// [`integrate_unit`] for an integrand that can fail.
pub fn try_integrate_unit<F: Fn(f64, f64) -> Result<f64>>(
    f: F,
    p0: f64,
    p1: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let slot = RefCell::new(None);
    let v = integrate_unit(|u, w| catch(&slot, f(u, w)), p0, p1, cfg);
    match slot.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}

fn catch(slot: &RefCell<Option<Error>>, r: Result<f64>) -> f64 {
    r.unwrap_or_else(|e| {
        slot.borrow_mut().get_or_insert(e);
        0.0
    })
}

/// Brent's method for a root of `f` bracketed by `[lo, hi]`.
///
/// Stops when the bracket is narrower than `xtol + 4ε|x|` or the function
/// value is exactly zero.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket(format!("NaN at bracket ends [{a}, {b}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!("f({a}) = {fa} and f({b}) = {fb} share a sign")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::domain("brent", format!("NaN at x = {b}")));
        }
    }
    Err(Error::NonConvergence { what: "Brent root search", iterations: max_iter })
}
