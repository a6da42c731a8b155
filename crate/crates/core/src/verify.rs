//! Numeric certification of identities and derived expressions.
//!
//! The oracles here are deliberately independent of the code they check:
//! [`fd_derivative`] only evaluates `θ` itself, and [`check_fundamental`]
//! never touches the solver.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characteristic::{ratio, Characteristic, Phase, RealCharacteristic};
use crate::engine::{theta_zero_location, TauPoint, ThetaEngine};
use crate::error::EngineError;
use crate::expr::ThetaExpression;
use crate::scalar::Real;

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-3;
/// Both sides below this are reported as a trivial zero.
pub const TRIVIAL_ZERO: f64 = 1e-12;
/// Floor of the relative-residual scale.
pub const SCALE_FLOOR: f64 = 1e-30;
pub const EXPRESSION_TOL: f64 = 1e-9;
pub const FUNDAMENTAL_TOL: f64 = 1e-10;
pub const QUOTED_TOL: f64 = 1e-9;

/// `{i, 2i, 0.3+1.7i, −0.4+0.9i, 0.1+0.6i}`.
pub fn default_taus<T: Real>() -> Vec<TauPoint<T>> {
    [(0.0, 1.0), (0.0, 2.0), (0.3, 1.7), (-0.4, 0.9), (0.1, 0.6)]
        .iter()
        .map(|&(re, im)| TauPoint::from_parts(T::lit(re), T::lit(im)).expect("upper half-plane"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub identity: String,
    pub characteristic: String,
    pub tau: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Both sides vanish to `TRIVIAL_ZERO`.
    pub trivial: bool,
}

fn pair<T: Real>(z: Complex<T>) -> [f64; 2] {
    [
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    ]
}

impl ResidualReport {
    /// Relative residual `|lhs − rhs| / max(|lhs|, |rhs|, 1e-30)`.
    pub fn compare<T: Real>(
        identity: impl Into<String>,
        characteristic: impl Into<String>,
        tau: &TauPoint<T>,
        lhs: Complex<T>,
        rhs: Complex<T>,
        tolerance: f64,
    ) -> Self {
        let (l, r) = (pair(lhs), pair(rhs));
        let norm = |p: [f64; 2]| p[0].hypot(p[1]);
        let diff = norm([l[0] - r[0], l[1] - r[1]]);
        let scale = norm(l).max(norm(r)).max(SCALE_FLOOR);
        let trivial = norm(l) < TRIVIAL_ZERO && norm(r) < TRIVIAL_ZERO;
        let residual = if trivial { diff } else { diff / scale };
        ResidualReport {
            identity: identity.into(),
            characteristic: characteristic.into(),
            tau: tau.to_string(),
            lhs: l,
            rhs: r,
            residual,
            tolerance,
            pass: residual <= tolerance,
            trivial,
        }
    }

    /// `|value| / scale` against zero.
    pub fn vanishing<T: Real>(
        identity: impl Into<String>,
        characteristic: impl Into<String>,
        tau: &TauPoint<T>,
        value: Complex<T>,
        scale: T,
        tolerance: f64,
    ) -> Self {
        let v = pair(value);
        let s = scale.to_f64().unwrap_or(f64::NAN).max(SCALE_FLOOR);
        let residual = v[0].hypot(v[1]) / s;
        ResidualReport {
            identity: identity.into(),
            characteristic: characteristic.into(),
            tau: tau.to_string(),
            lhs: v,
            rhs: [0.0, 0.0],
            residual,
            tolerance,
            pass: residual <= tolerance,
            trivial: false,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} {:<22} {:<18} {:<18} {:>10.3e} {:>8.0e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            self.characteristic,
            self.tau,
            self.residual,
            self.tolerance,
            if self.trivial {
                "  degenerate-trivial"
            } else {
                ""
            }
        )
    }
}

/// Human-readable table with a header row.
pub fn render_table(reports: &[ResidualReport]) -> String {
    let mut out = format!(
        "{:<5} {:<22} {:<18} {:<18} {:>10} {:>8}\n",
        "", "identity", "characteristic", "tau", "residual", "tol"
    );
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

fn real_label<T: Real>(c: &RealCharacteristic<T>) -> String {
    format!("{},{}", c.top, c.bottom)
}

/// `(4 D(h/2) − D(h)) / 3` with `D(h) = (θ(h) − θ(−h)) / 2h`.
pub fn fd_derivative<T: Real>(
    engine: &ThetaEngine<T>,
    c: &RealCharacteristic<T>,
    tau: &TauPoint<T>,
    h: T,
) -> Result<Complex<T>, EngineError> {
    let d = |h: T| -> Result<Complex<T>, EngineError> {
        let plus = engine.theta(c, Complex::new(h, T::zero()), tau)?;
        let minus = engine.theta(c, Complex::new(-h, T::zero()), tau)?;
        Ok((plus - minus) / (h + h))
    };
    let two = T::lit(2.0);
    Ok((d(h / two)? * T::lit(4.0) - d(h)?) / T::lit(3.0))
}

/// Both sides of `θ²[c](3θ[3c]θ′[c] − θ′[3c]θ[c]) = e^{6πic′} θ′[1/2;1/2] θ³[1/2−2c]`.
pub fn fundamental_sides<T: Real>(
    engine: &ThetaEngine<T>,
    c: &RealCharacteristic<T>,
    tau: &TauPoint<T>,
) -> Result<(Complex<T>, Complex<T>), EngineError> {
    let zero = Complex::new(T::zero(), T::zero());
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let c3 = c.scale(three);
    let t = engine.theta(c, zero, tau)?;
    let dt = engine.theta_d1(c, zero, tau)?;
    let t3 = engine.theta(&c3, zero, tau)?;
    let dt3 = engine.theta_d1(&c3, zero, tau)?;
    let lhs = t * t * (t3 * dt * three - dt3 * t);
    let dhalf = engine.theta_d1(&RealCharacteristic::new(half, half), zero, tau)?;
    let other = RealCharacteristic::new(half - c.top * T::lit(2.0), half - c.bottom * T::lit(2.0));
    let angle = T::lit(6.0) * T::PI() * c.top;
    let rhs =
        Complex::new(angle.cos(), angle.sin()) * dhalf * engine.theta(&other, zero, tau)?.powi(3);
    Ok((lhs, rhs))
}

pub fn check_fundamental<T: Real>(
    engine: &ThetaEngine<T>,
    c: &RealCharacteristic<T>,
    tau: &TauPoint<T>,
    tolerance: f64,
) -> Result<ResidualReport, EngineError> {
    let (lhs, rhs) = fundamental_sides(engine, c, tau)?;
    Ok(ResidualReport::compare(
        "fundamental",
        real_label(c),
        tau,
        lhs,
        rhs,
        tolerance,
    ))
}

/// `evaluate(e, τ)` against the series value of `θ′[target](0, τ)`.
pub fn check_expression<T: Real>(
    engine: &ThetaEngine<T>,
    e: &ThetaExpression,
    tau: &TauPoint<T>,
    tolerance: f64,
) -> Result<ResidualReport, EngineError> {
    let lhs = e.evaluate(engine, tau)?;
    let rhs = engine.derivative(&e.target, tau)?;
    Ok(ResidualReport::compare(
        "expression",
        e.target.to_string(),
        tau,
        lhs,
        rhs,
        tolerance,
    ))
}

/// Same as [`check_expression`] but against [`fd_derivative`].
pub fn check_expression_fd<T: Real>(
    engine: &ThetaEngine<T>,
    e: &ThetaExpression,
    tau: &TauPoint<T>,
    tolerance: f64,
) -> Result<ResidualReport, EngineError> {
    let lhs = e.evaluate(engine, tau)?;
    let rhs = fd_derivative(engine, &e.target.to_real(), tau, T::lit(DEFAULT_FD_STEP))?;
    Ok(ResidualReport::compare(
        "expression-fd",
        e.target.to_string(),
        tau,
        lhs,
        rhs,
        tolerance,
    ))
}

/// Three classical expressions involving `θ′[1/2;1/6]`, all with the
/// derivative taken by finite differences.
pub fn cross_check_quoted_identities<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &TauPoint<T>,
    tolerance: f64,
) -> Result<Vec<ResidualReport>, EngineError> {
    let th = |a: i64, b: i64, c: i64, d: i64| {
        engine.constant(&Characteristic::from_ratios(a, b, c, d), tau)
    };
    let e = |num: i64, den: i64| Phase::new(ratio(num, den)).to_complex::<T>();
    let pi = T::PI();
    let target = Characteristic::from_ratios(1, 2, 1, 6);
    let d = fd_derivative(engine, &target.to_real(), tau, T::lit(DEFAULT_FD_STEP))?;
    let dhalf = fd_derivative(
        engine,
        &Characteristic::half_half().to_real(),
        tau,
        T::lit(DEFAULT_FD_STEP),
    )?;

    let (t00, t01, t10) = (th(0, 1, 0, 1)?, th(0, 1, 1, 2)?, th(1, 2, 0, 1)?);
    let (s11, s1h, s15) = (th(1, 6, 1, 6)?, th(1, 6, 1, 2)?, th(1, 6, 5, 6)?);
    let (h6, h3) = (th(1, 2, 1, 6)?, th(1, 2, 1, 3)?);
    let (z6, z3) = (th(0, 1, 1, 6)?, th(0, 1, 1, 3)?);

    let fk_lhs = d * s11 * s1h * s15 * T::lit(6.0);
    let fk_rhs = dhalf * (s1h.powi(3) + e(-1, 6) * s15.powi(3) + e(1, 6) * s11.powi(3));
    let m3 = t00 * t01 * h6.powi(4) * h3.powi(-3) * (pi / T::lit(3.0))
        - t10 * t10 * z6 * z3 * h3.powi(-1) * pi;
    let m2 = t00 * t01 * (h6.powi(4) * h3.powi(-3) - h3 * T::lit(3.0)) * (-pi / T::lit(6.0));

    let label = target.to_string();
    Ok(vec![
        ResidualReport::compare("quoted-fk", label.clone(), tau, fk_lhs, fk_rhs, tolerance),
        ResidualReport::compare("quoted-m2", label.clone(), tau, d, m2, tolerance),
        ResidualReport::compare("quoted-m3", label, tau, d, m3, tolerance),
    ])
}

/// Tolerances used by [`relation_suite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteTolerances {
    pub relation: f64,
    pub derivative_relation: f64,
    pub reduction: f64,
    pub zero_value: f64,
    pub winding: f64,
    pub doubling: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        SuiteTolerances {
            relation: 1e-10,
            derivative_relation: 1e-9,
            reduction: 1e-12,
            zero_value: 1e-12,
            winding: 1e-8,
            doubling: 1e-14,
        }
    }
}

/// Random characteristic `[a/p; b/q]` with `p, q ≤ max_den` and entries in `[−2, 2)`.
pub fn random_characteristic<R: Rng>(rng: &mut R, max_den: i64) -> Characteristic {
    let p = rng.gen_range(1..=max_den);
    let q = rng.gen_range(1..=max_den);
    let a = rng.gen_range(-2 * p..2 * p);
    let b = rng.gen_range(-2 * q..2 * q);
    Characteristic::from_ratios(a, p, b, q)
}

/// Random `τ` with `Re τ ∈ [−1/2, 1/2]`, `Im τ ∈ [im_lo, im_hi]`.
pub fn random_tau<T: Real, R: Rng>(rng: &mut R, im_lo: f64, im_hi: f64) -> TauPoint<T> {
    let re = rng.gen_range(-0.5..=0.5);
    let im = rng.gen_range(im_lo..=im_hi);
    TauPoint::from_parts(T::lit(re), T::lit(im)).expect("upper half-plane")
}

fn random_z<T: Real, R: Rng>(rng: &mut R) -> Complex<T> {
    Complex::new(
        T::lit(rng.gen_range(-0.5..=0.5)),
        T::lit(rng.gen_range(-0.5..=0.5)),
    )
}

fn cis<T: Real>(turns: T) -> Complex<T> {
    let a = (T::PI() + T::PI()) * turns;
    Complex::new(a.cos(), a.sin())
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `(1/2πi) ∮ θ′/θ dz` around the period parallelogram centred at `centre`.
pub fn winding_number<T: Real>(
    engine: &ThetaEngine<T>,
    c: &RealCharacteristic<T>,
    tau: &TauPoint<T>,
    centre: Complex<T>,
    segments: usize,
) -> Result<Complex<T>, EngineError> {
    let t = tau.value();
    let one = Complex::new(T::one(), T::zero());
    let half = T::lit(0.5);
    let start = centre - (one + t) * half;
    let corners = [start, start + one, start + one + t, start + t, start];
    let mut total = Complex::new(T::zero(), T::zero());
    for w in corners.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        for s in 0..segments {
            let s0 = T::from_usize(s).unwrap() / T::from_usize(segments).unwrap();
            let ds = T::one() / T::from_usize(segments).unwrap();
            for &(x, wt) in &GL5 {
                let u = s0 + ds * (T::lit(x) + T::one()) * half;
                let z = a + len * u;
                let v = engine.theta(c, z, tau)?;
                let dv = engine.theta_d1(c, z, tau)?;
                total += dv / v * len * (ds * half * T::lit(wt));
            }
        }
    }
    Ok(total / Complex::new(T::zero(), T::PI() + T::PI()))
}

/// Randomized checks of the classical theta relations, `samples` cases each.
///
/// Deterministic for a fixed `seed`. Characteristics have denominators at
/// most 12, `z` lies in `[−1/2,1/2]²` and `Im τ ∈ [1/2, 2]`.
pub fn relation_suite<T: Real>(
    engine: &ThetaEngine<T>,
    samples: usize,
    seed: u64,
    tol: &SuiteTolerances,
) -> Result<Vec<ResidualReport>, EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples * 12);
    let two_pi_i = Complex::new(T::zero(), T::PI() + T::PI());
    for _ in 0..samples {
        let c = random_characteristic(&mut rng, 12);
        let rc: RealCharacteristic<T> = c.to_real();
        let tau: TauPoint<T> = random_tau(&mut rng, 0.5, 2.0);
        let t = tau.value();
        let z = random_z::<T, _>(&mut rng);
        let m = rng.gen_range(-2i64..=2);
        let n = rng.gen_range(-2i64..=2);
        let (mf, nf) = (T::from_i64(m).unwrap(), T::from_i64(n).unwrap());
        let label = c.to_string();

        // Rel1
        let lhs = engine.theta(&rc, z + t * mf + Complex::new(nf, T::zero()), &tau)?;
        let expo = Complex::new(T::zero(), -T::PI()) * t * (mf * mf)
            - two_pi_i
                * ((z + Complex::new(rc.bottom, T::zero())) * mf
                    - Complex::new(nf * rc.top, T::zero()));
        let rhs = expo.exp() * engine.theta(&rc, z, &tau)?;
        out.push(ResidualReport::compare(
            "rel1",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.relation,
        ));

        // Rel2
        let lhs = engine.theta(&rc.neg(), -z, &tau)?;
        let rhs = engine.theta(&rc, z, &tau)?;
        out.push(ResidualReport::compare(
            "rel2",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.relation,
        ));

        // Rel3
        let np = T::from_i64(rng.gen_range(-2i64..=2)).unwrap();
        let lhs = engine.theta(&rc.shift(np, nf), z, &tau)?;
        let rhs = cis(nf * rc.top) * engine.theta(&rc, z, &tau)?;
        out.push(ResidualReport::compare(
            "rel3",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.relation,
        ));

        // Rel4 with real shifts
        let sp = T::lit(rng.gen_range(-1.0..=1.0));
        let s = T::lit(rng.gen_range(-1.0..=1.0));
        let zs = z + t * sp + Complex::new(s, T::zero());
        let pre = (Complex::new(T::zero(), -T::PI()) * t * (sp * sp)
            - two_pi_i * (z + Complex::new(s + rc.bottom, T::zero())) * sp)
            .exp();
        let shifted = rc.shift(sp, s);
        let lhs = engine.theta(&rc, zs, &tau)?;
        let rhs = pre * engine.theta(&shifted, z, &tau)?;
        out.push(ResidualReport::compare(
            "rel4",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.relation,
        ));

        // Rel5
        let lhs = engine.theta(&rc.neg().shift(np, nf), z, &tau)?;
        let rhs = cis(-nf * rc.top) * engine.theta(&rc, -z, &tau)?;
        out.push(ResidualReport::compare(
            "rel5",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.relation,
        ));

        // derivative relations
        let th = engine.theta(&shifted, z, &tau)?;
        let d1 = engine.theta_d1(&shifted, z, &tau)?;
        let d2 = engine.theta_d2(&shifted, z, &tau)?;
        let lhs = engine.theta_d1(&rc, zs, &tau)?;
        let rhs = pre * (d1 - two_pi_i * sp * th);
        out.push(ResidualReport::compare(
            "theta-der-d1",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.derivative_relation,
        ));
        let lhs = engine.theta_d2(&rc, zs, &tau)?;
        let rhs =
            pre * (d2 - two_pi_i * sp * d1 * T::lit(2.0) + two_pi_i * two_pi_i * sp * sp * th);
        out.push(ResidualReport::compare(
            "theta-der-d2",
            label.clone(),
            &tau,
            lhs,
            rhs,
            tol.derivative_relation,
        ));

        // exact reductions against direct evaluation, both branches
        for (name, r) in [
            ("tc-td-plus", c.reduce()),
            ("tc-td-mirror", c.reduce_mirror()),
        ] {
            let ph = r.phase.to_complex::<T>();
            let sign = T::from_i8(r.sign).unwrap();
            let lhs = engine.constant(&c, &tau)?;
            let rhs = ph * engine.constant(&r.canonical, &tau)?;
            out.push(ResidualReport::compare(
                name,
                label.clone(),
                &tau,
                lhs,
                rhs,
                tol.reduction,
            ));
            let lhs = engine.derivative(&c, &tau)?;
            let rhs = ph * engine.derivative(&r.canonical, &tau)? * sign;
            out.push(ResidualReport::compare(
                format!("{name}-d"),
                label.clone(),
                &tau,
                lhs,
                rhs,
                tol.reduction,
            ));
        }

        // unique zero: value at the predicted point and winding number one
        let z0 = theta_zero_location(&rc, &tau);
        let v = engine.series(&rc, z0, &tau, 0, None)?;
        out.push(ResidualReport::vanishing(
            "zero-value",
            label.clone(),
            &tau,
            v.value,
            v.max_term,
            tol.zero_value,
        ));
        let w = winding_number(engine, &rc, &tau, z0, 8)?;
        out.push(ResidualReport::compare(
            "zero-winding",
            label.clone(),
            &tau,
            w,
            Complex::new(T::one(), T::zero()),
            tol.winding,
        ));

        // truncation stability: doubling N changes nothing
        let a = engine.series(&rc, z, &tau, 1, None)?;
        let b = engine.series(&rc, z, &tau, 1, Some(2 * a.half_width))?;
        out.push(ResidualReport::vanishing(
            "doubling-n",
            label,
            &tau,
            a.value - b.value,
            a.max_term.max(T::one()),
            tol.doubling,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> ThetaEngine<f64> {
        ThetaEngine::default()
    }

    fn tau(re: f64, im: f64) -> TauPoint<f64> {
        TauPoint::from_parts(re, im).unwrap()
    }

    #[test]
    fn fd_matches_jacobi_and_even_zero() {
        let e = eng();
        let t = tau(0.0, 1.0);
        let d = fd_derivative(&e, &RealCharacteristic::new(0.5, 0.5), &t, 1e-3).unwrap();
        let j = e.jacobi_rhs(&t).unwrap();
        assert!((d - j).norm() < 1e-9 * j.norm());
        let d0 =
            fd_derivative(&e, &RealCharacteristic::new(0.0, 0.0), &tau(0.2, 1.3), 1e-3).unwrap();
        assert!(d0.norm() < 1e-10);
    }

    #[test]
    fn fundamental_cases() {
        let e = eng();
        let r = check_fundamental(
            &e,
            &RealCharacteristic::new(0.2, 0.4),
            &tau(0.0, 1.0),
            1e-10,
        )
        .unwrap();
        assert!(r.pass, "{r}");
        let r = check_fundamental(
            &e,
            &RealCharacteristic::new(0.0, 0.0),
            &tau(0.0, 1.0),
            1e-10,
        )
        .unwrap();
        assert!(r.pass && r.trivial, "{r}");
        let r = check_fundamental(
            &e,
            &RealCharacteristic::new(0.3, 0.7),
            &tau(0.0, 1.5),
            1e-10,
        )
        .unwrap();
        assert!(r.pass, "{r}");
        let r = check_fundamental(
            &e,
            &RealCharacteristic::new(0.5, 0.5),
            &tau(0.0, 1.0),
            1e-10,
        )
        .unwrap();
        assert!(r.pass && r.trivial, "{r}");
    }

    #[test]
    fn zero_expression_matches_even_characteristic() {
        let ex = ThetaExpression::zero(Characteristic::from_ratios(0, 1, 1, 2));
        let r = check_expression(&eng(), &ex, &tau(0.0, 1.0), EXPRESSION_TOL).unwrap();
        assert!(r.pass && r.trivial, "{r}");
    }

    #[test]
    fn quoted_identities() {
        let e = eng();
        for t in [tau(0.0, 1.0), tau(0.0, 2.0), tau(0.4, 1.3)] {
            for r in cross_check_quoted_identities(&e, &t, QUOTED_TOL).unwrap() {
                assert!(r.pass, "{r}");
            }
        }
    }

    #[test]
    fn rel1_classical_quasi_periodicity() {
        // c = 0, m = n = 1: θ(z+τ+1) = e^{−πiτ−2πiz} θ(z)
        let e = eng();
        let t = tau(0.1, 0.9);
        let z = Complex::new(0.2, -0.1);
        let c = RealCharacteristic::new(0.0, 0.0);
        let lhs = e.theta(&c, z + t.value() + 1.0, &t).unwrap();
        let rhs = (Complex::new(0.0, -std::f64::consts::PI) * (t.value() + z * 2.0)).exp()
            * e.theta(&c, z, &t).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn suite_is_deterministic_and_passes() {
        let e = eng();
        let tol = SuiteTolerances::default();
        let a = relation_suite(&e, 5, 42, &tol).unwrap();
        let b = relation_suite(&e, 5, 42, &tol).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.pass, "{r}");
        }
        let c = relation_suite(&e, 5, 43, &tol).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mirror_of_two_thirds_zero() {
        let e = eng();
        let t = tau(0.0, 1.0);
        let c = Characteristic::from_ratios(2, 3, 0, 1);
        let r = c.reduce_mirror();
        let lhs = e.constant(&c, &t).unwrap();
        let rhs = r.phase.to_complex::<f64>() * e.constant(&r.canonical, &t).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn report_rendering() {
        let t = tau(0.0, 1.0);
        let r = ResidualReport::compare(
            "x",
            "1/2,1/2",
            &t,
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 1e-12),
            1e-10,
        );
        assert!(r.pass);
        let line = r.to_json_line();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["identity"], "x");
        assert_eq!(v["tolerance"], 1e-10);
        assert!(render_table(&[r]).lines().count() == 2);
    }
}
