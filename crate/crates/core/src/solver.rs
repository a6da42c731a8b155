//! Symbolic derivation of `θ′[c](0,τ)` from the fundamental identity
//!
//! ```text
//! θ²[c] (3 θ[3c] θ′[c] − θ′[3c] θ[c]) = e^{6πi c′} θ′[1/2;1/2] θ³[1/2 − 2c].
//! ```
//!
//! Over a periodic core `c_0 → c_1 → … → c_{t−1} → c_0` of the map `c ↦ 3c`
//! (reduced into `[0,1)²`) this gives a cyclic bidiagonal system, solved in
//! closed form. Pre-periodic characteristics are handled by back-substitution.
//!
//! Derivatives of canonical characteristics are related to the original ones
//! by the plus-branch phase only (`θ′[c + n] = e^{2πi n₂ c′} θ′[c]` for the
//! integer shift `n`), so every derivative unknown carries that phase.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::characteristic::{Characteristic, Phase, Rational};
use crate::engine::{TauPoint, ThetaEngine};
use crate::error::{EngineError, SolverError};
use crate::expr::{FactorForm, ThetaExpression, ThetaMonomial};
use crate::orbit::{char_chain, CharacteristicChain};
use crate::scalar::Real;

pub const DEFAULT_MAX_PERIOD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolverOptions {
    pub max_period: usize,
    pub factor_form: FactorForm,
    /// Replace `θ′[1/2;1/2]` by `−π θ[0;0] θ[1/2;0] θ[0;1/2]` in the output.
    pub jacobi: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_period: DEFAULT_MAX_PERIOD,
            factor_form: FactorForm::Plain,
            jacobi: false,
        }
    }
}

/// The fundamental identity at `c`, written as
/// `coeff_target · θ′[target] + coeff_image · θ′[image] = rhs`
/// with `target`, `image` the canonical forms of `c` and `3c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalIdentity {
    pub c: Characteristic,
    pub target: Characteristic,
    pub image: Characteristic,
    pub coeff_target: ThetaMonomial,
    pub coeff_image: ThetaMonomial,
    pub rhs: ThetaMonomial,
}

pub fn fundamental_identity(c: &Characteristic, form: FactorForm) -> FundamentalIdentity {
    let three_c = c.scale(3);
    let rt = c.reduce();
    let ri = three_c.reduce();
    let th = |m: ThetaMonomial, x: &Characteristic, e: i32| {
        m.times_theta(x, e, form)
            .expect("positive exponents never fail")
    };
    let coeff_target = th(
        th(
            ThetaMonomial::constant(Rational::from_integer(3.into())),
            c,
            2,
        ),
        &three_c,
        1,
    )
    .scaled(&Rational::one(), &rt.phase);
    let coeff_image =
        th(ThetaMonomial::constant(-Rational::one()), c, 3).scaled(&Rational::one(), &ri.phase);
    let rhs = th(
        ThetaMonomial::dtheta_half().scaled(
            &Rational::one(),
            &Phase::new(&c.eps_prime * Rational::from_integer(3.into())),
        ),
        &c.half_minus(2),
        3,
    );
    FundamentalIdentity {
        c: c.clone(),
        target: rt.canonical,
        image: ri.canonical,
        coeff_target,
        coeff_image,
        rhs,
    }
}

/// `A x = B` over a periodic core, row `k`:
/// `3 a_{k+1} x_k − a_k x_{k+1} = b_k` with `a_k = θ[c_k]`, `x_k = θ′[c_k]`,
/// indices mod `t`. The determinant is `(3^t − 1) Π a_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivSystem {
    pub chars: Vec<Characteristic>,
    pub b: Vec<ThetaMonomial>,
}

impl DerivSystem {
    pub fn period(&self) -> usize {
        self.chars.len()
    }

    /// `3^t − 1`.
    pub fn det_prefactor(&self) -> BigInt {
        BigInt::from(3).pow(self.period() as u32) - 1
    }

    fn next(&self, k: usize) -> usize {
        (k + 1) % self.period()
    }

    /// `a_k` at `τ`.
    pub fn constants<T: Real>(
        &self,
        engine: &ThetaEngine<T>,
        tau: &TauPoint<T>,
    ) -> Result<Vec<Complex<T>>, EngineError> {
        self.chars.iter().map(|c| engine.constant(c, tau)).collect()
    }

    /// Dense `A` at `τ`, row-major.
    pub fn matrix<T: Real>(
        &self,
        engine: &ThetaEngine<T>,
        tau: &TauPoint<T>,
    ) -> Result<Vec<Vec<Complex<T>>>, EngineError> {
        let a = self.constants(engine, tau)?;
        let t = self.period();
        let three = T::lit(3.0);
        let mut m = vec![vec![Complex::new(T::zero(), T::zero()); t]; t];
        for k in 0..t {
            let n = self.next(k);
            m[k][k] += a[n] * three;
            m[k][n] -= a[k];
        }
        Ok(m)
    }

    /// `B` at `τ`.
    pub fn rhs<T: Real>(
        &self,
        engine: &ThetaEngine<T>,
        tau: &TauPoint<T>,
    ) -> Result<Vec<Complex<T>>, EngineError> {
        let dtheta = engine.derivative(&Characteristic::half_half(), tau)?;
        self.b
            .iter()
            .map(|m| m.evaluate_with(dtheta, |c| engine.constant(c, tau)))
            .collect()
    }

    /// `(3^t − 1) Π a_k` at `τ`.
    pub fn det_formula<T: Real>(
        &self,
        engine: &ThetaEngine<T>,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        let a = self.constants(engine, tau)?;
        let pref = T::lit(3.0).powi(self.period() as i32) - T::one();
        Ok(a.into_iter()
            .fold(Complex::new(pref, T::zero()), |acc, x| acc * x))
    }
}

/// Builds the system over the core of `chain`.
pub fn build_system(chain: &CharacteristicChain) -> Result<DerivSystem, SolverError> {
    let core = chain.core();
    if let Some(s) = core.iter().find(|c| c.is_singular()) {
        return Err(SolverError::DegenerateIdentity {
            target: Box::new(s.clone()),
            image: Box::new(s.clone()),
        });
    }
    let mut b = Vec::with_capacity(core.len());
    for c in core {
        // divide the identity by θ²[c_k] and by the phase of θ[3c_k]
        let fi = fundamental_identity(c, FactorForm::Plain);
        let phase = c.scale(3).reduce().phase;
        let bk = fi
            .rhs
            .times_theta(c, -2, FactorForm::Plain)?
            .scaled(&Rational::one(), &phase.inv());
        b.push(bk);
    }
    Ok(DerivSystem {
        chars: core.to_vec(),
        b,
    })
}

/// `x_k = a_k/(3^t−1) Σ_{j=k}^{k+t−1} 3^{t−1+k−j} b_j / (a_j a_{j+1})`, indices mod `t`.
pub fn solve_closed_form(system: &DerivSystem) -> Result<Vec<ThetaExpression>, SolverError> {
    (0..system.period())
        .map(|k| solve_closed_form_entry(system, k))
        .collect()
}

/// The `k`-th entry of [`solve_closed_form`].
pub fn solve_closed_form_entry(
    system: &DerivSystem,
    k: usize,
) -> Result<ThetaExpression, SolverError> {
    let t = system.period();
    let denom = Rational::from_integer(system.det_prefactor());
    let form = FactorForm::Plain;
    let mut monomials = Vec::with_capacity(t);
    for i in 0..t {
        let j = (k + i) % t;
        let jn = (j + 1) % t;
        let weight = Rational::from_integer(BigInt::from(3).pow((t - 1 - i) as u32)) / &denom;
        let m = system.b[j]
            .clone()
            .times_theta(&system.chars[k], 1, form)?
            .times_theta(&system.chars[j], -1, form)?
            .times_theta(&system.chars[jn], -1, form)?
            .scaled(&weight, &Phase::one());
        monomials.push(m);
    }
    let e = ThetaExpression::from_monomials(system.chars[k].clone(), monomials);
    Ok(e.normalize(form)?)
}

/// Expression for `θ′[c](0,τ)`.
pub fn solve_chain(
    c: &Characteristic,
    opts: &SolverOptions,
) -> Result<ThetaExpression, SolverError> {
    let reduced = c.reduce();
    let c0 = reduced.canonical.clone();
    let raw = if c0.has_even_half_integer_class() {
        ThetaExpression::zero(c0)
    } else if c0.is_singular() {
        ThetaExpression::from_monomials(c0, vec![ThetaMonomial::dtheta_half()])
    } else {
        let chain = char_chain(&c0)?;
        if chain.period > opts.max_period {
            return Err(SolverError::PeriodTooLarge {
                period: chain.period,
                cap: opts.max_period,
            });
        }
        for k in 0..chain.preperiod {
            let next = chain.successor(k);
            if next.is_singular() {
                return Err(SolverError::DegenerateIdentity {
                    target: Box::new(chain.chain[k].clone()),
                    image: Box::new(next.clone()),
                });
            }
        }
        let core = &chain.chain[chain.preperiod];
        let mut x = if core.has_even_half_integer_class() {
            ThetaExpression::zero(core.clone())
        } else {
            let system = build_system(&chain)?;
            solve_closed_form_entry(&system, 0)?
        };
        for k in (0..chain.preperiod).rev() {
            x = back_substitute(&chain.chain[k], &x)?;
        }
        x
    };
    finish(
        raw.mul_monomial(&ThetaMonomial::one().scaled(&Rational::one(), &reduced.phase))
            .with_target(c.clone()),
        opts,
    )
}

/// `θ′[c] = (rhs − coeff_image · θ′[3c]) / coeff_target` for canonical `c`.
fn back_substitute(
    c: &Characteristic,
    image: &ThetaExpression,
) -> Result<ThetaExpression, SolverError> {
    let fi = fundamental_identity(c, FactorForm::Plain);
    if fi.coeff_target.is_zero() {
        return Err(SolverError::DegenerateIdentity {
            target: Box::new(c.clone()),
            image: Box::new(fi.image),
        });
    }
    let inv = fi.coeff_target.inv()?;
    let minus_one = ThetaMonomial::constant(-Rational::one());
    let mut monomials = vec![fi.rhs.mul(&inv)];
    let carried = image.mul_monomial(&fi.coeff_image.mul(&inv).mul(&minus_one));
    monomials.extend(carried.monomials);
    Ok(ThetaExpression::from_monomials(c.clone(), monomials).normalize(FactorForm::Plain)?)
}

fn finish(e: ThetaExpression, opts: &SolverOptions) -> Result<ThetaExpression, SolverError> {
    let e = if opts.jacobi { e.apply_jacobi() } else { e };
    Ok(e.normalize(opts.factor_form)?)
}

pub fn apply_jacobi(e: &ThetaExpression) -> ThetaExpression {
    e.apply_jacobi()
}

/// Memoized `solve_chain`, safe to share between threads.
#[derive(Debug, Default)]
pub struct DerivationCache {
    map: RwLock<HashMap<(Characteristic, SolverOptions), ThetaExpression>>,
}

impl DerivationCache {
    pub fn new() -> Self {
        DerivationCache::default()
    }

    pub fn derive(
        &self,
        c: &Characteristic,
        opts: &SolverOptions,
    ) -> Result<ThetaExpression, SolverError> {
        let key = (c.clone(), *opts);
        if let Some(e) = self.map.read().expect("cache lock").get(&key) {
            return Ok(e.clone());
        }
        let e = solve_chain(c, opts)?;
        self.map.write().expect("cache lock").insert(key, e.clone());
        Ok(e)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Numerically evaluates both sides of a structured identity given derivative values.
pub fn identity_residual<T: Real>(
    fi: &FundamentalIdentity,
    engine: &ThetaEngine<T>,
    tau: &TauPoint<T>,
) -> Result<(Complex<T>, Complex<T>), EngineError> {
    let dtheta = engine.derivative(&Characteristic::half_half(), tau)?;
    let consts = |c: &Characteristic| engine.constant(c, tau);
    let lhs = fi.coeff_target.evaluate_with(dtheta, consts)?
        * engine.derivative(&fi.target, tau)?
        + fi.coeff_image.evaluate_with(dtheta, consts)? * engine.derivative(&fi.image, tau)?;
    let rhs = fi.rhs.evaluate_with(dtheta, consts)?;
    Ok((lhs, rhs))
}

impl DerivSystem {
    /// True when every `b_k` vanishes (cores made of even half-integer classes).
    pub fn is_homogeneous(&self) -> bool {
        self.b.iter().all(|m| m.scalar.is_zero())
    }
}
