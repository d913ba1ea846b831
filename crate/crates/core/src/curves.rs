//! Polylines in log-polar coordinates, continuation of `arg f` along them,
//! level sets `|f| = λ` on circles, and annulus sub-arcs.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::logpolar::{reduce_arg, LogComplex};
use crate::modulus::{log_max_modulus, log_min_modulus};
use crate::product::EntireProductFunction;

/// Largest accepted image-argument increment on one sub-segment.
pub const MAX_STEP_ARG: f64 = FRAC_PI_2;
/// Largest accepted image `log|f|` increment on one sub-segment.
pub const MAX_STEP_LOG_MOD: f64 = 1.0;
pub const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Curve {
    pub points: Vec<LogComplex>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindingResult {
    pub delta_arg: f64,
    pub refinement_depth: u32,
    pub max_step_arg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelTheta {
    FullCircle,
    Empty,
    Angle(f64),
}

impl Curve {
    pub fn open(points: Vec<LogComplex>) -> Self {
        Curve {
            points,
            closed: false,
        }
    }

    /// Circle `|z| = e^log_r` traversed once counter-clockwise from `θ = -π`.
    pub fn circle(log_r: f64, n: usize) -> Self {
        let n = n.max(3);
        let points = (0..=n)
            .map(|k| LogComplex::new(log_r, -PI + 2.0 * PI * k as f64 / n as f64))
            .collect();
        Curve {
            points,
            closed: true,
        }
    }

    /// Straight segment in `(log|z|, arg z)` coordinates.
    pub fn log_segment(from: LogComplex, to: LogComplex, n: usize) -> Self {
        let n = n.max(1);
        let points = (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                LogComplex::new(
                    from.log_mod + s * (to.log_mod - from.log_mod),
                    from.arg + s * (to.arg - from.arg),
                )
            })
            .collect();
        Curve::open(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn reversed(&self) -> Curve {
        let mut points = self.points.clone();
        points.reverse();
        Curve {
            points,
            closed: self.closed,
        }
    }

    /// Mirror image in the real axis, traversed in reverse.
    pub fn reflected(&self) -> Curve {
        let mut c = self.reversed();
        for p in &mut c.points {
            *p = p.conj();
        }
        c
    }

    /// Inserts the log-polar midpoint into every segment.
    pub fn refined(&self) -> Curve {
        let mut points = Vec::with_capacity(2 * self.points.len());
        for w in self.points.windows(2) {
            points.push(w[0]);
            points.push(midpoint(w[0], w[1]));
        }
        if let Some(&last) = self.points.last() {
            points.push(last);
        }
        Curve {
            points,
            closed: self.closed,
        }
    }

    /// Whether every point satisfies `Im z >= 0`.
    pub fn in_upper_half_plane(&self) -> bool {
        self.points.iter().all(|p| {
            let a = reduce_arg(p.arg);
            (0.0..=PI).contains(&a)
        })
    }

    /// Maps points below the real axis to their conjugates.
    pub fn folded_upper(&self) -> Curve {
        let points = self
            .points
            .iter()
            .map(|p| {
                let a = reduce_arg(p.arg);
                LogComplex::new(p.log_mod, a.abs())
            })
            .collect();
        Curve {
            points,
            closed: self.closed,
        }
    }

    pub fn log_mod_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.log_mod), hi.max(p.log_mod))
            })
    }
}

fn midpoint(a: LogComplex, b: LogComplex) -> LogComplex {
    LogComplex::new(0.5 * (a.log_mod + b.log_mod), 0.5 * (a.arg + b.arg))
}

struct Walker<'a> {
    f: &'a EntireProductFunction,
    depth: u32,
    max_step: f64,
}

impl Walker<'_> {
    /// Continuation increment of `arg f` from `za` to `zb`, with `fa`, `fb`
    /// the values at the ends.
    fn segment(
        &mut self,
        segment: usize,
        za: LogComplex,
        fa: LogComplex,
        zb: LogComplex,
        fb: LogComplex,
        depth: u32,
    ) -> Result<f64> {
        let step = reduce_arg(fb.arg - fa.arg);
        let dmod = (fb.log_mod - fa.log_mod).abs();
        if step.abs() < MAX_STEP_ARG && dmod < MAX_STEP_LOG_MOD {
            self.depth = self.depth.max(depth);
            self.max_step = self.max_step.max(step.abs());
            return Ok(step);
        }
        if depth >= MAX_DEPTH {
            return Err(Error::RefinementLimit { segment });
        }
        let zm = midpoint(za, zb);
        let fm = self.f.eval_log(zm)?;
        Ok(self.segment(segment, za, fa, zm, fm, depth + 1)?
            + self.segment(segment, zm, fm, zb, fb, depth + 1)?)
    }
}

/// Continuation `Δarg f` along the whole curve.
pub fn delta_arg(f: &EntireProductFunction, curve: &Curve) -> Result<WindingResult> {
    delta_arg_range(f, curve, 0, curve.len().saturating_sub(1))
}

/// Continuation `Δarg f` along the sub-polyline `index0 → index1`; negative
/// when `index1 < index0`.
pub fn delta_arg_between(
    f: &EntireProductFunction,
    curve: &Curve,
    index0: usize,
    index1: usize,
) -> Result<f64> {
    if index1 < index0 {
        return Ok(-delta_arg_range(f, curve, index1, index0)?.delta_arg);
    }
    Ok(delta_arg_range(f, curve, index0, index1)?.delta_arg)
}

fn delta_arg_range(
    f: &EntireProductFunction,
    curve: &Curve,
    i0: usize,
    i1: usize,
) -> Result<WindingResult> {
    if i1 >= curve.len().max(1) && !(curve.is_empty() && i1 == 0) {
        return Err(Error::InvalidArgument("curve index out of range".into()));
    }
    let mut w = Walker {
        f,
        depth: 0,
        max_step: 0.0,
    };
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    if i1 > i0 {
        let mut fa = f.eval_log(curve.points[i0])?;
        for i in i0..i1 {
            let (za, zb) = (curve.points[i], curve.points[i + 1]);
            let fb = f.eval_log(zb)?;
            let x = w.segment(i, za, fa, zb, fb, 0)?;
            let t = sum + x;
            comp += if sum.abs() >= x.abs() {
                (sum - t) + x
            } else {
                (x - t) + sum
            };
            sum = t;
            fa = fb;
        }
    }
    Ok(WindingResult {
        delta_arg: sum + comp,
        refinement_depth: w.depth,
        max_step_arg: w.max_step,
    })
}

/// `Im g(z_k) - Im g(z_0)` for every point of a curve in the closed upper
/// half plane, where `g` is the principal-factor branch of `log f`.
///
/// `g` is continuous on the closed upper half plane minus the zeros, so this
/// is the continuation `Δarg` to each point without any refinement; it is
/// the only feasible route once `|Δarg|` reaches millions of turns.
pub fn branch_arg_profile(f: &EntireProductFunction, curve: &Curve) -> Result<Vec<f64>> {
    if !curve.in_upper_half_plane() {
        return Err(Error::InvalidArgument(
            "curve leaves the upper half plane".into(),
        ));
    }
    let mut out = Vec::with_capacity(curve.len());
    let mut base = None;
    for p in &curve.points {
        let v = f.eval_log(p.principal())?.arg;
        let b = *base.get_or_insert(v);
        out.push(v - b);
    }
    Ok(out)
}

/// Where the level set `|f| = λ` meets the circle `|z| = r`.
pub fn level_theta(f: &EntireProductFunction, log_r: f64, log_lambda: f64) -> Result<LevelTheta> {
    let top = log_max_modulus(f, log_r)?;
    if top < log_lambda {
        return Ok(LevelTheta::Empty);
    }
    match log_min_modulus(f, log_r) {
        Ok(bottom) if bottom > log_lambda => return Ok(LevelTheta::FullCircle),
        Ok(_) | Err(Error::AtZero { .. }) => {}
        Err(e) => return Err(e),
    }
    if top == log_lambda {
        return Ok(LevelTheta::Angle(0.0));
    }
    let at = |th: f64| -> Result<f64> {
        match f.eval_log(LogComplex::new(log_r, th)) {
            Ok(v) => Ok(v.log_mod),
            Err(Error::ZeroFactor) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        }
    };
    // bisect to the resolution of f64 (well below 1e-12): at large radii
    // log|f| moves by ~√r per radian
    let (mut lo, mut hi) = (0.0f64, PI);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid)? > log_lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(LevelTheta::Angle(0.5 * (lo + hi)))
}

/// Uniform sampling of `C_λ(r) = {re^{iθ} : |f| > λ}`: the arc
/// `|θ| <= θ*` counter-clockwise, or the whole circle.
pub fn level_arc(
    f: &EntireProductFunction,
    log_r: f64,
    log_lambda: f64,
    n_samples: usize,
) -> Result<Curve> {
    let n = n_samples.max(64);
    match level_theta(f, log_r, log_lambda)? {
        LevelTheta::Empty => Err(Error::EmptyLevelSet),
        LevelTheta::FullCircle => Ok(Curve::circle(log_r, n - 1)),
        LevelTheta::Angle(th) => Ok(Curve::open(
            (0..n)
                .map(|k| LogComplex::new(log_r, -th + 2.0 * th * k as f64 / (n - 1) as f64))
                .collect(),
        )),
    }
}

/// The upper-half-plane level curve `|f| = λ`, parameterized by `log r`:
/// the points `r e^{iθ_λ(r)}` for `n` radii uniform in `[log_r1, log_r2]`.
/// Fails with `EmptyLevelSet` where the level set misses or covers a circle.
pub fn level_curve(
    f: &EntireProductFunction,
    log_r1: f64,
    log_r2: f64,
    log_lambda: f64,
    n: usize,
) -> Result<Curve> {
    let n = n.max(2);
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let x = log_r1 + (log_r2 - log_r1) * k as f64 / (n - 1) as f64;
        match level_theta(f, x, log_lambda)? {
            LevelTheta::Angle(th) => points.push(LogComplex::new(x, th)),
            _ => return Err(Error::EmptyLevelSet),
        }
    }
    Ok(Curve::open(points))
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Low,
    High,
}

/// A sub-arc inside the closed annulus `log_r1 <= log|z| <= log_r2` that
/// runs from one boundary circle to the other; the last such arc along the
/// curve. Crossing points are interpolated linearly in `(log|z|, arg z)`.
pub fn extract_annulus_subcurve(curve: &Curve, log_r1: f64, log_r2: f64) -> Result<Curve> {
    if !(log_r1 < log_r2) {
        return Err(Error::InvalidArgument("need log_r1 < log_r2".into()));
    }
    let side = |p: &LogComplex| {
        if p.log_mod <= log_r1 {
            Some(Side::Low)
        } else if p.log_mod >= log_r2 {
            Some(Side::High)
        } else {
            None
        }
    };
    let mut last: Option<(usize, Side)> = None;
    let mut found = None;
    for (i, p) in curve.points.iter().enumerate() {
        if let Some(s) = side(p) {
            if let Some((j, prev)) = last {
                if prev != s {
                    found = Some((j, i, prev));
                }
            }
            last = Some((i, s));
        }
    }
    let (j, i, start_side) = found.ok_or(Error::NotCrossing)?;
    let (start_level, end_level) = match start_side {
        Side::Low => (log_r1, log_r2),
        Side::High => (log_r2, log_r1),
    };
    let cross = |a: LogComplex, b: LogComplex, level: f64| -> LogComplex {
        if a.log_mod == level {
            return a;
        }
        if b.log_mod == level {
            return b;
        }
        let s = (level - a.log_mod) / (b.log_mod - a.log_mod);
        LogComplex::new(level, a.arg + s * (b.arg - a.arg))
    };
    let pts = &curve.points;
    let mut out = Vec::with_capacity(i - j + 2);
    out.push(cross(pts[j], pts[j + 1], start_level));
    out.extend_from_slice(&pts[j + 1..i]);
    let end = cross(pts[i - 1], pts[i], end_level);
    if out.last() != Some(&end) {
        out.push(end);
    }
    Ok(Curve::open(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Zero, ZeroFamily};
    use alloc::vec;
    use core::f64::consts::TAU;

    fn single() -> EntireProductFunction {
        EntireProductFunction::from_zeros(1.0, 0, vec![Zero { a: 1.0, p: 1 }]).unwrap()
    }

    fn cosh() -> EntireProductFunction {
        EntireProductFunction::truncate(&ZeroFamily::CoshSqrt, libm::log(64.0), 1e-10).unwrap()
    }

    #[test]
    fn winding_examples() {
        let z0 = LogComplex::new(0.3, 0.2);
        let still = Curve::open(vec![z0, LogComplex::new(0.3 + 1e-15, 0.2)]);
        assert!(delta_arg(&single(), &still).unwrap().delta_arg.abs() < 1e-12);

        let w = delta_arg(&single(), &Curve::circle(libm::log(2.0), 16)).unwrap();
        assert!((w.delta_arg - TAU).abs() < 1e-10);
        assert!(w.max_step_arg < FRAC_PI_2);

        let w = delta_arg(&cosh(), &Curve::circle(libm::log(30.0), 16)).unwrap();
        assert!((w.delta_arg - 2.0 * TAU).abs() < 1e-10, "{}", w.delta_arg);
    }

    #[test]
    fn near_zero_hits_refinement_limit() {
        // segment passing within 1e-300 of the zero at -1
        let c = Curve::open(vec![
            LogComplex::new(0.0, PI - 0.5),
            LogComplex::new(0.0, PI + 0.5),
        ]);
        match delta_arg(&single(), &c) {
            Err(Error::RefinementLimit { .. }) | Err(Error::ZeroFactor) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn between_is_additive_and_antisymmetric() {
        let f = cosh();
        let c = Curve::circle(libm::log(40.0), 40);
        let n = c.len() - 1;
        assert_eq!(delta_arg_between(&f, &c, 7, 7).unwrap(), 0.0);
        let a = delta_arg_between(&f, &c, 0, 13).unwrap();
        let b = delta_arg_between(&f, &c, 13, n).unwrap();
        let all = delta_arg_between(&f, &c, 0, n).unwrap();
        assert!((a + b - all).abs() < 1e-10);
        let back = delta_arg_between(&f, &c, 13, 0).unwrap();
        assert_eq!(back, -a);
        let rev = c.reversed();
        let r = delta_arg_between(&f, &rev, n - 13, n).unwrap();
        assert!((r + a).abs() < 1e-10);
    }

    #[test]
    fn reflection_preserves_winding() {
        let f = cosh();
        let c = Curve::log_segment(LogComplex::new(0.5, 0.3), LogComplex::new(3.9, 2.8), 20);
        let a = delta_arg(&f, &c).unwrap().delta_arg;
        let b = delta_arg(&f, &c.reflected()).unwrap().delta_arg;
        assert!((a - b).abs() < 1e-10);
        let r = delta_arg(&f, &c.refined()).unwrap().delta_arg;
        assert!((a - r).abs() < 1e-8);
    }

    #[test]
    fn branch_profile_matches_continuation() {
        let f = cosh();
        let c = Curve::log_segment(LogComplex::new(-1.0, 0.0), LogComplex::new(4.0, PI), 50);
        let prof = branch_arg_profile(&f, &c).unwrap();
        let w = delta_arg(&f, &c).unwrap().delta_arg;
        assert!((prof[prof.len() - 1] - w).abs() < 1e-9);
        assert!(branch_arg_profile(&f, &Curve::circle(1.0, 8)).is_err());
    }

    #[test]
    fn level_theta_examples() {
        let f = cosh();
        let lr = libm::log(4.0);
        let top = log_max_modulus(&f, lr).unwrap();
        assert_eq!(level_theta(&f, lr, top).unwrap(), LevelTheta::Angle(0.0));
        assert_eq!(level_theta(&f, lr, top + 1e-6).unwrap(), LevelTheta::Empty);

        let LevelTheta::Angle(th) = level_theta(&f, lr, 0.0).unwrap() else {
            panic!()
        };
        assert!(th > 0.0 && th < PI);
        let above = f.eval_log(LogComplex::new(lr, th - 1e-6)).unwrap().log_mod;
        let below = f.eval_log(LogComplex::new(lr, th + 1e-6)).unwrap().log_mod;
        assert!(above > 0.0 && below < 0.0);

        // between a_1 ≈ 2.47 and a_2 ≈ 22.2 the circle minimum is positive
        let lr = libm::log(9.0);
        let m = log_min_modulus(&f, lr).unwrap();
        assert_eq!(
            level_theta(&f, lr, m - 0.1).unwrap(),
            LevelTheta::FullCircle
        );

        // larger λ, smaller angle
        let mut prev = PI;
        for k in 0..10 {
            let LevelTheta::Angle(t) = level_theta(&f, libm::log(30.0), 0.5 * k as f64).unwrap()
            else {
                panic!()
            };
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn level_arc_endpoints() {
        let f = cosh();
        let lr = libm::log(30.0);
        let arc = level_arc(&f, lr, 0.5, 64).unwrap();
        assert!(!arc.closed && arc.len() == 64);
        for p in [arc.points[0], arc.points[63]] {
            assert!((f.eval_log(p).unwrap().log_mod - 0.5).abs() < 1e-9);
        }
        assert_eq!(arc.points[0].arg, -arc.points[63].arg);
        let m = log_min_modulus(&f, libm::log(9.0)).unwrap();
        assert!(level_arc(&f, libm::log(9.0), m - 1.0, 64).unwrap().closed);
        assert_eq!(level_arc(&f, lr, 100.0, 64), Err(Error::EmptyLevelSet));
    }

    #[test]
    fn annulus_extraction() {
        let seg = Curve::log_segment(LogComplex::new(-1.0, 0.4), LogComplex::new(3.0, 0.4), 8);
        let sub = extract_annulus_subcurve(&seg, 0.0, 2.0).unwrap();
        assert_eq!(sub.points[0].log_mod, 0.0);
        assert_eq!(sub.points[sub.len() - 1].log_mod, 2.0);
        assert!(sub.points.iter().all(|p| (0.0..=2.0).contains(&p.log_mod)));

        // enters, retreats below r1, then crosses fully
        let pts = vec![
            LogComplex::new(-1.0, 0.0),
            LogComplex::new(1.0, 0.1),
            LogComplex::new(-0.5, 0.2),
            LogComplex::new(1.5, 0.3),
            LogComplex::new(3.0, 0.4),
        ];
        let sub = extract_annulus_subcurve(&Curve::open(pts), 0.0, 2.0).unwrap();
        assert_eq!(sub.len(), 3);
        assert_eq!(sub.points[0], LogComplex::new(0.0, 0.2 + 0.25 * 0.1));
        assert_eq!(sub.points[1], LogComplex::new(1.5, 0.3));
        assert!((sub.points[2].log_mod - 2.0).abs() < 1e-15);
        assert!((sub.points[2].arg - (0.3 + 0.1 / 3.0)).abs() < 1e-15);

        let inside = Curve::log_segment(LogComplex::new(0.5, 0.0), LogComplex::new(1.5, 0.0), 4);
        assert_eq!(
            extract_annulus_subcurve(&inside, 0.0, 2.0),
            Err(Error::NotCrossing)
        );
    }
}
