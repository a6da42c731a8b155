//! Symbolic sums of theta-constant monomials with exact coefficients.
//!
//! A monomial is
//!
//! ```text
//! scalar · e^{2πi r} · π^a · θ′[1/2;1/2]^b · Π θ[c_j]^{e_j}
//! ```
//!
//! with every `c_j` a canonical characteristic (never `[1/2;1/2]`, whose theta
//! constant vanishes). Expressions are kept with negative exponents.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characteristic::{
    parse_rational, rational_to_real, rational_to_string, Characteristic, Phase, Rational,
};
use crate::cyclotomic::CyclotomicSum;
use crate::engine::{TauPoint, ThetaEngine};
use crate::error::{EngineError, ParseError};
use crate::scalar::Real;

/// Weight of `θ′[1/2;1/2]` in the homogeneity count.
pub const DTHETA_HALF_WEIGHT: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("division by the vanishing theta constant theta[1/2;1/2]")]
    SingularDenominator,
    #[error("division by a zero monomial")]
    DivisionByZero,
    #[error("inhomogeneous expression: weights {0:?}")]
    Inhomogeneous(Vec<i64>),
}

/// How characteristics inside theta-constant factors are represented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FactorForm {
    /// Plus-branch reduction into `[0,1)²`.
    #[default]
    Plain,
    /// One representative per class `{c, −c} mod 1` (the lexicographically
    /// smaller one; lands in `[0,1/2]²` whenever possible).
    Class,
}

impl FactorForm {
    fn reduce(self, c: &Characteristic) -> (Characteristic, Phase) {
        let r = match self {
            FactorForm::Plain => c.reduce(),
            FactorForm::Class => c.reduce_class(),
        };
        (r.canonical, r.phase)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaMonomial {
    pub scalar: Rational,
    pub phase: Phase,
    pub pi_power: i32,
    pub dtheta_half_power: u32,
    /// Sorted by characteristic, no repeats, no zero exponents.
    pub factors: Vec<(Characteristic, i32)>,
}

impl ThetaMonomial {
    pub fn constant(scalar: Rational) -> Self {
        ThetaMonomial {
            scalar,
            phase: Phase::one(),
            pi_power: 0,
            dtheta_half_power: 0,
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// `θ′[1/2;1/2]`.
    pub fn dtheta_half() -> Self {
        ThetaMonomial {
            dtheta_half_power: 1,
            ..Self::one()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// `θ[c]^exp` with `c` reduced per `form`.
    pub fn theta(c: &Characteristic, exp: i32, form: FactorForm) -> Result<Self, ExprError> {
        Self::one().times_theta(c, exp, form)
    }

    /// Multiplies by `θ[c]^exp`, reducing `c` and folding the phase in.
    pub fn times_theta(
        mut self,
        c: &Characteristic,
        exp: i32,
        form: FactorForm,
    ) -> Result<Self, ExprError> {
        if exp == 0 || self.is_zero() {
            return Ok(self);
        }
        if c.is_singular() {
            return if exp > 0 {
                Ok(Self::zero())
            } else {
                Err(ExprError::SingularDenominator)
            };
        }
        let (canonical, phase) = form.reduce(c);
        self.phase *= &phase.pow(exp as i64);
        self.push_factor(canonical, exp);
        Ok(self)
    }

    fn push_factor(&mut self, c: Characteristic, exp: i32) {
        match self.factors.binary_search_by(|(f, _)| f.cmp(&c)) {
            Ok(i) => {
                self.factors[i].1 += exp;
                if self.factors[i].1 == 0 {
                    self.factors.remove(i);
                }
            }
            Err(i) => self.factors.insert(i, (c, exp)),
        }
    }

    pub fn scaled(mut self, scalar: &Rational, phase: &Phase) -> Self {
        self.scalar *= scalar;
        self.phase *= phase;
        if self.is_zero() {
            return Self::zero();
        }
        self
    }

    pub fn mul(&self, other: &ThetaMonomial) -> ThetaMonomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        out.phase *= &other.phase;
        out.pi_power += other.pi_power;
        out.dtheta_half_power += other.dtheta_half_power;
        for (c, e) in &other.factors {
            out.push_factor(c.clone(), *e);
        }
        out
    }

    /// Multiplicative inverse; `θ′[1/2;1/2]` may not appear.
    pub fn inv(&self) -> Result<ThetaMonomial, ExprError> {
        if self.is_zero() || self.dtheta_half_power != 0 {
            return Err(ExprError::DivisionByZero);
        }
        Ok(ThetaMonomial {
            scalar: self.scalar.recip(),
            phase: self.phase.inv(),
            pi_power: -self.pi_power,
            dtheta_half_power: 0,
            factors: self.factors.iter().map(|(c, e)| (c.clone(), -e)).collect(),
        })
    }

    /// Re-expresses every factor in `form`.
    pub fn renormalized(&self, form: FactorForm) -> Result<ThetaMonomial, ExprError> {
        let mut out = ThetaMonomial {
            factors: Vec::new(),
            ..self.clone()
        };
        for (c, e) in &self.factors {
            out = out.times_theta(c, *e, form)?;
        }
        Ok(out)
    }

    /// `Σ exponents + 3 · dtheta_half_power`.
    pub fn weight(&self) -> i64 {
        self.factors.iter().map(|(_, e)| *e as i64).sum::<i64>()
            + DTHETA_HALF_WEIGHT * self.dtheta_half_power as i64
    }

    fn key(&self) -> MonomialKey {
        (self.pi_power, self.dtheta_half_power, self.factors.clone())
    }

    /// Numeric value given theta constants looked up through `constants`.
    pub fn evaluate_with<T: Real>(
        &self,
        dtheta_half: Complex<T>,
        mut constants: impl FnMut(&Characteristic) -> Result<Complex<T>, EngineError>,
    ) -> Result<Complex<T>, EngineError> {
        if self.is_zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let s: T = rational_to_real(&self.scalar);
        let mut v = self.phase.to_complex::<T>() * s * T::PI().powi(self.pi_power);
        v *= dtheta_half.powi(self.dtheta_half_power as i32);
        for (c, e) in &self.factors {
            v *= constants(c)?.powi(*e);
        }
        Ok(v)
    }
}

type MonomialKey = (i32, u32, Vec<(Characteristic, i32)>);

/// A sum of monomials equal to `θ′[target](0,τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpression {
    pub target: Characteristic,
    pub jacobi_applied: bool,
    pub monomials: Vec<ThetaMonomial>,
}

impl ThetaExpression {
    pub fn zero(target: Characteristic) -> Self {
        ThetaExpression {
            target,
            jacobi_applied: false,
            monomials: Vec::new(),
        }
    }

    pub fn from_monomials(target: Characteristic, monomials: Vec<ThetaMonomial>) -> Self {
        let monomials = monomials.into_iter().filter(|m| !m.is_zero()).collect();
        ThetaExpression {
            target,
            jacobi_applied: false,
            monomials,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn with_target(mut self, target: Characteristic) -> Self {
        self.target = target;
        self
    }

    pub fn mul_monomial(&self, m: &ThetaMonomial) -> Self {
        ThetaExpression {
            target: self.target.clone(),
            jacobi_applied: self.jacobi_applied,
            monomials: self
                .monomials
                .iter()
                .map(|x| x.mul(m))
                .filter(|x| !x.is_zero())
                .collect(),
        }
    }

    pub fn plus(mut self, other: &ThetaExpression) -> Self {
        self.monomials.extend(other.monomials.iter().cloned());
        self
    }

    pub fn negated(&self) -> Self {
        let minus = -Rational::one();
        self.mul_monomial(&ThetaMonomial::constant(minus))
    }

    /// Merges like monomials exactly and sorts; factors re-expressed in `form`.
    ///
    /// Coefficients of like monomials are added in the cyclotomic field, and
    /// the surviving coefficient is written with a phase in `[0, 1/2)`.
    pub fn normalize(&self, form: FactorForm) -> Result<ThetaExpression, ExprError> {
        let mut groups: BTreeMap<MonomialKey, CyclotomicSum> = BTreeMap::new();
        for m in &self.monomials {
            let m = m.renormalized(form)?;
            if m.is_zero() {
                continue;
            }
            groups.entry(m.key()).or_default().add(&m.scalar, &m.phase);
        }
        let mut monomials = Vec::new();
        for ((pi_power, dtheta_half_power, factors), sum) in groups {
            for (scalar, phase) in sum.canonical_terms() {
                monomials.push(ThetaMonomial {
                    scalar,
                    phase,
                    pi_power,
                    dtheta_half_power,
                    factors: factors.clone(),
                });
            }
        }
        Ok(ThetaExpression {
            target: self.target.clone(),
            jacobi_applied: self.jacobi_applied,
            monomials,
        })
    }

    /// Exact equality of values as formal expressions (targets are not compared).
    pub fn equivalent(&self, other: &ThetaExpression) -> Result<bool, ExprError> {
        let diff = self.clone().plus(&other.negated());
        Ok(diff.normalize(FactorForm::Class)?.is_zero())
    }

    /// Replaces `θ′[1/2;1/2]` by `−π θ[0;0] θ[1/2;0] θ[0;1/2]`.
    pub fn apply_jacobi(&self) -> ThetaExpression {
        let jac = jacobi_monomial();
        let monomials = self
            .monomials
            .iter()
            .map(|m| {
                let f = m.dtheta_half_power;
                let mut out = ThetaMonomial {
                    dtheta_half_power: 0,
                    ..m.clone()
                };
                for _ in 0..f {
                    out = out.mul(&jac);
                }
                out
            })
            .collect();
        ThetaExpression {
            target: self.target.clone(),
            jacobi_applied: true,
            monomials,
        }
    }

    /// Common weight of all monomials; 3 for the empty expression.
    pub fn homogeneity_degree(&self) -> Result<i64, ExprError> {
        let mut weights: Vec<i64> = self.monomials.iter().map(ThetaMonomial::weight).collect();
        weights.dedup();
        match weights.as_slice() {
            [] => Ok(3),
            [w] => Ok(*w),
            _ => {
                let mut all: Vec<i64> = self.monomials.iter().map(ThetaMonomial::weight).collect();
                all.sort_unstable();
                all.dedup();
                if all.len() == 1 {
                    Ok(all[0])
                } else {
                    Err(ExprError::Inhomogeneous(all))
                }
            }
        }
    }

    /// Distinct characteristics of theta-constant factors.
    pub fn characteristics(&self) -> Vec<Characteristic> {
        let mut out: Vec<Characteristic> = self
            .monomials
            .iter()
            .flat_map(|m| m.factors.iter().map(|(c, _)| c.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Numeric value at `τ`. `θ′[1/2;1/2]` is taken from the series directly.
    pub fn evaluate<T: Real>(
        &self,
        engine: &ThetaEngine<T>,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        let mut cache: HashMap<Characteristic, Complex<T>> = HashMap::new();
        let needs_dtheta = self.monomials.iter().any(|m| m.dtheta_half_power > 0);
        let dtheta = if needs_dtheta {
            engine.derivative(&Characteristic::half_half(), tau)?
        } else {
            Complex::new(T::zero(), T::zero())
        };
        let mut total = Complex::new(T::zero(), T::zero());
        for m in &self.monomials {
            total += m.evaluate_with(dtheta, |c| {
                if let Some(v) = cache.get(c) {
                    return Ok(*v);
                }
                let v = engine.constant(c, tau)?;
                cache.insert(c.clone(), v);
                Ok(v)
            })?;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(JsonExpression::from(self)).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&JsonExpression::from(self)).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<ThetaExpression, ParseError> {
        let j: JsonExpression =
            serde_json::from_str(s).map_err(|e| ParseError::Expression(e.to_string()))?;
        j.try_into()
    }

    /// Parses the text rendering (see [`fmt::Display`]) for the given target.
    pub fn parse_terms(target: Characteristic, text: &str) -> Result<ThetaExpression, ParseError> {
        let monomials = parse_terms(text)?;
        let jacobi_applied = monomials.iter().all(|m| m.dtheta_half_power == 0);
        Ok(ThetaExpression {
            target,
            jacobi_applied,
            monomials,
        })
    }

    pub fn to_latex(&self) -> String {
        let mut out = format!("\\theta'{} = ", latex_char(&self.target));
        if self.monomials.is_empty() {
            out.push('0');
            return out;
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let negative = m.scalar.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&latex_monomial(m));
        }
        out
    }
}

fn jacobi_monomial() -> ThetaMonomial {
    let form = FactorForm::Plain;
    let mut m = ThetaMonomial::constant(-Rational::one());
    m.pi_power = 1;
    for c in [
        Characteristic::zero(),
        Characteristic::from_ratios(1, 2, 0, 1),
        Characteristic::from_ratios(0, 1, 1, 2),
    ] {
        m = m.times_theta(&c, 1, form).expect("nonsingular");
    }
    m
}

fn bracket(c: &Characteristic) -> String {
    format!(
        "[{};{}]",
        rational_to_string(&c.eps_prime),
        rational_to_string(&c.eps)
    )
}

fn write_monomial_body(m: &ThetaMonomial, show_unit: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    let abs = m.scalar.abs();
    let trivial =
        m.phase.is_one() && m.pi_power == 0 && m.dtheta_half_power == 0 && m.factors.is_empty();
    if !abs.is_one() || trivial || show_unit {
        parts.push(rational_to_string(&abs));
    }
    if !m.phase.is_one() {
        parts.push(m.phase.to_string());
    }
    match m.pi_power {
        0 => {}
        1 => parts.push("π".into()),
        p => parts.push(format!("π^{p}")),
    }
    match m.dtheta_half_power {
        0 => {}
        1 => parts.push("θ'[1/2;1/2]".into()),
        p => parts.push(format!("θ'[1/2;1/2]^{p}")),
    }
    for (c, e) in &m.factors {
        if *e == 1 {
            parts.push(format!("θ{}", bracket(c)));
        } else {
            parts.push(format!("θ{}^{}", bracket(c), e));
        }
    }
    parts.join(" ")
}

impl fmt::Display for ThetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scalar.is_negative() {
            write!(f, "-")?;
        }
        write!(f, "{}", write_monomial_body(self, false))
    }
}

impl fmt::Display for ThetaExpression {
    /// `-1/3 π θ[1/2;0] θ[0;1/2] θ[1/2;1/6]^3 θ[0;1/3]^-2 + …`; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let negative = m.scalar.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", write_monomial_body(m, false))?;
        }
        Ok(())
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}{}/{}", r.numer().abs(), r.denom())
    }
}

fn latex_char(c: &Characteristic) -> String {
    format!(
        "\\big[{{}}^{{{}}}_{{{}}}\\big]",
        latex_rational(&c.eps_prime),
        latex_rational(&c.eps)
    )
}

fn latex_monomial(m: &ThetaMonomial) -> String {
    let mut parts: Vec<String> = Vec::new();
    let abs = m.scalar.abs();
    if !abs.is_one() {
        if abs.denom().is_one() {
            parts.push(abs.numer().to_string());
        } else {
            parts.push(format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom()));
        }
    }
    if !m.phase.is_one() {
        let r = m.phase.turns() * Rational::from_integer(BigInt::from(2));
        // e^{2πi r} = e^{π i (2r)}
        parts.push(format!(
            "\\mathrm{{e}}^{{{}\\pi \\imath/{}}}",
            r.numer(),
            r.denom()
        ));
    }
    match m.pi_power {
        0 => {}
        1 => parts.push("\\pi".into()),
        p => parts.push(format!("\\pi^{{{p}}}")),
    }
    if m.dtheta_half_power > 0 {
        let p = m.dtheta_half_power;
        let pow = if p == 1 {
            String::new()
        } else {
            format!("^{{{p}}}")
        };
        parts.push(format!(
            "\\theta'{pow}{}",
            latex_char(&Characteristic::half_half())
        ));
    }
    for (c, e) in &m.factors {
        let pow = if *e == 1 {
            String::new()
        } else {
            format!("^{{{e}}}")
        };
        parts.push(format!("\\theta{pow}{}", latex_char(c)));
    }
    if parts.is_empty() {
        parts.push("1".into());
    }
    parts.join(" ")
}

fn parse_exponent(token: &str, rest: &str) -> Result<i32, ParseError> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.trim_matches(|c| c == '{' || c == '}').parse().ok())
        .ok_or_else(|| ParseError::Expression(format!("bad exponent in `{token}`")))
}

fn parse_terms(text: &str) -> Result<Vec<ThetaMonomial>, ParseError> {
    let text = text.trim();
    if text == "0" || text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current: Option<ThetaMonomial> = None;
    let mut sign = Rational::one();
    let finish = |m: Option<ThetaMonomial>, sign: &Rational, out: &mut Vec<ThetaMonomial>| {
        if let Some(mut m) = m {
            m.scalar *= sign;
            out.push(m);
        }
    };
    for token in text.split_whitespace() {
        match token {
            "+" | "-" => {
                finish(current.take(), &sign, &mut out);
                sign = if token == "-" {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                continue;
            }
            _ => {}
        }
        let m = current.get_or_insert_with(ThetaMonomial::one);
        let mut tok = token;
        if let Some(t) = tok.strip_prefix('-') {
            if !t.is_empty() {
                m.scalar = -m.scalar.clone();
                tok = t;
            }
        }
        if tok.starts_with(|c: char| c.is_ascii_digit()) {
            m.scalar *= parse_rational(tok)?;
        } else if let Some(r) = tok.strip_prefix("e(").and_then(|t| t.strip_suffix(')')) {
            m.phase *= &Phase::new(parse_rational(r)?);
        } else if tok == "i" {
            m.phase *= &Phase::new(crate::characteristic::ratio(1, 4));
        } else if let Some(rest) = tok.strip_prefix("π").or_else(|| tok.strip_prefix("pi")) {
            m.pi_power += parse_exponent(token, rest)?;
        } else if let Some(rest) = tok
            .strip_prefix("θ'[1/2;1/2]")
            .or_else(|| tok.strip_prefix("dth"))
        {
            let e = parse_exponent(token, rest)?;
            m.dtheta_half_power = (m.dtheta_half_power as i32 + e)
                .try_into()
                .map_err(|_| ParseError::Expression(format!("negative power in `{token}`")))?;
        } else if let Some(t) = tok.strip_prefix("θ[").or_else(|| tok.strip_prefix("th[")) {
            let (inner, rest) = t
                .split_once(']')
                .ok_or_else(|| ParseError::Expression(format!("unclosed bracket in `{token}`")))?;
            let c: Characteristic = inner.parse()?;
            let e = parse_exponent(token, rest)?;
            let taken = std::mem::replace(m, ThetaMonomial::one());
            *m = taken
                .times_theta(&c, e, FactorForm::Plain)
                .map_err(|e| ParseError::Expression(e.to_string()))?;
        } else {
            return Err(ParseError::Expression(format!("unknown token `{token}`")));
        }
    }
    finish(current.take(), &sign, &mut out);
    Ok(out.into_iter().filter(|m| !m.is_zero()).collect())
}

impl FromStr for ThetaMonomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = parse_terms(s)?;
        match terms.len() {
            0 => Ok(ThetaMonomial::zero()),
            1 => Ok(terms.remove(0)),
            _ => Err(ParseError::Expression(format!("`{s}` has several terms"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonChar {
    ep: String,
    e: String,
}

#[derive(Serialize, Deserialize)]
struct JsonFactor {
    ep: String,
    e: String,
    exp: i32,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    scalar: String,
    phase_r: String,
    pi_power: i32,
    dtheta_half_power: u32,
    factors: Vec<JsonFactor>,
}

fn schema_v1() -> String {
    "v1".into()
}

#[derive(Serialize, Deserialize)]
struct JsonExpression {
    #[serde(default = "schema_v1")]
    version: String,
    target: JsonChar,
    jacobi_applied: bool,
    terms: Vec<JsonTerm>,
}

impl From<&ThetaExpression> for JsonExpression {
    fn from(e: &ThetaExpression) -> Self {
        JsonExpression {
            version: schema_v1(),
            target: JsonChar {
                ep: rational_to_string(&e.target.eps_prime),
                e: rational_to_string(&e.target.eps),
            },
            jacobi_applied: e.jacobi_applied,
            terms: e
                .monomials
                .iter()
                .map(|m| JsonTerm {
                    scalar: rational_to_string(&m.scalar),
                    phase_r: rational_to_string(m.phase.turns()),
                    pi_power: m.pi_power,
                    dtheta_half_power: m.dtheta_half_power,
                    factors: m
                        .factors
                        .iter()
                        .map(|(c, exp)| JsonFactor {
                            ep: rational_to_string(&c.eps_prime),
                            e: rational_to_string(&c.eps),
                            exp: *exp,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<JsonExpression> for ThetaExpression {
    type Error = ParseError;

    fn try_from(j: JsonExpression) -> Result<Self, Self::Error> {
        if j.version != "v1" {
            return Err(ParseError::Expression(format!(
                "unsupported schema version `{}`",
                j.version
            )));
        }
        let target =
            Characteristic::new(parse_rational(&j.target.ep)?, parse_rational(&j.target.e)?);
        let mut monomials = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let mut factors = Vec::with_capacity(t.factors.len());
            for f in t.factors {
                factors.push((
                    Characteristic::new(parse_rational(&f.ep)?, parse_rational(&f.e)?),
                    f.exp,
                ));
            }
            monomials.push(ThetaMonomial {
                scalar: parse_rational(&t.scalar)?,
                phase: Phase::new(parse_rational(&t.phase_r)?),
                pi_power: t.pi_power,
                dtheta_half_power: t.dtheta_half_power,
                factors,
            });
        }
        Ok(ThetaExpression {
            target,
            jacobi_applied: j.jacobi_applied,
            monomials,
        })
    }
}
