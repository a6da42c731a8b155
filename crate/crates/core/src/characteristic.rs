//! Rational characteristics, unit-root phases and canonical reduction.
//!
//! A characteristic `[ε′; ε]` is stored top entry first. Reduction moves both
//! entries into `[0, 1)` and records the root of unity (and, for the mirror
//! branch, the sign of the derivative) that relates the two theta values:
//!
//! ```text
//! θ[original](0)  = phase · θ[canonical](0)
//! θ′[original](0) = sign · phase · θ′[canonical](0)
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;
use crate::scalar::Real;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Fractional part `x - ⌊x⌋`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Parses `"a/b"` or `"a"`; decimals are rejected to keep characteristics exact.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_real<T: Real>(r: &Rational) -> T {
    // ratio of f64s is exact enough for denominators we meet; fall back for huge ones
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => T::from_f64(n / d).unwrap(),
        _ => T::from_f64(r.to_f64().unwrap_or(f64::NAN)).unwrap(),
    }
}

/// The root of unity `e^{2πi r}` with `r` kept exactly, reduced to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    r: Rational,
}

impl Phase {
    pub fn new(r: Rational) -> Self {
        Phase { r: frac(&r) }
    }

    pub fn one() -> Self {
        Phase {
            r: Rational::zero(),
        }
    }

    /// `-1 = e^{πi}`.
    pub fn minus_one() -> Self {
        Phase { r: ratio(1, 2) }
    }

    /// The exponent `r` of `e^{2πi r}`, in `[0, 1)`.
    pub fn turns(&self) -> &Rational {
        &self.r
    }

    pub fn is_one(&self) -> bool {
        self.r.is_zero()
    }

    pub fn pow(&self, k: i64) -> Self {
        Phase::new(&self.r * BigInt::from(k))
    }

    pub fn inv(&self) -> Self {
        Phase::new(-&self.r)
    }

    /// Numeric value `e^{2πi r}`.
    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let r: T = rational_to_real(&self.r);
        let angle = (T::PI() + T::PI()) * r;
        Complex::new(angle.cos(), angle.sin())
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::one()
    }
}

// Phases multiply by adding their turns.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::new(self.r + rhs.r)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Mul<&'a Phase> for &'a Phase {
    type Output = Phase;
    fn mul(self, rhs: &Phase) -> Phase {
        Phase::new(&self.r + &rhs.r)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl MulAssign<&Phase> for Phase {
    fn mul_assign(&mut self, rhs: &Phase) {
        self.r = frac(&(&self.r + &rhs.r));
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", rational_to_string(&self.r))
    }
}

/// A characteristic `[ε′; ε]` with arbitrary rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Characteristic {
    /// Top entry ε′ (the τ direction).
    pub eps_prime: Rational,
    /// Bottom entry ε.
    pub eps: Rational,
}

impl PartialOrd for Characteristic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Characteristic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eps_prime
            .cmp(&other.eps_prime)
            .then_with(|| self.eps.cmp(&other.eps))
    }
}

/// Which reduction produced a [`ReducedCharacteristic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `[ε′ + n′; ε + n]`: subtract integer parts.
    Plus,
    /// `[−ε′ + n′; −ε + n]`: negate, then subtract integer parts.
    Mirror,
}

/// Result of reducing a characteristic into `[0, 1)²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedCharacteristic {
    pub canonical: Characteristic,
    pub phase: Phase,
    /// `+1` or `-1`; multiplies derivatives only.
    pub sign: i8,
    pub branch: Branch,
}

impl Characteristic {
    pub fn new(eps_prime: Rational, eps: Rational) -> Self {
        Characteristic { eps_prime, eps }
    }

    /// Convenience constructor from small integers: `[tn/td; bn/bd]`.
    pub fn from_ratios(tn: i64, td: i64, bn: i64, bd: i64) -> Self {
        Characteristic::new(ratio(tn, td), ratio(bn, bd))
    }

    pub fn zero() -> Self {
        Characteristic::new(Rational::zero(), Rational::zero())
    }

    /// `[1/2; 1/2]`, the only characteristic (mod 1) with vanishing theta constant.
    pub fn half_half() -> Self {
        Characteristic::new(ratio(1, 2), ratio(1, 2))
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Characteristic::new(&self.eps_prime * &k, &self.eps * &k)
    }

    pub fn neg(&self) -> Self {
        Characteristic::new(-&self.eps_prime, -&self.eps)
    }

    /// `[1/2 - k ε′; 1/2 - k ε]`.
    pub fn half_minus(&self, k: i64) -> Self {
        let half = ratio(1, 2);
        let k = BigInt::from(k);
        Characteristic::new(&half - &self.eps_prime * &k, &half - &self.eps * &k)
    }

    /// Both entries already lie in `[0, 1)`.
    pub fn is_canonical(&self) -> bool {
        let in_unit = |x: &Rational| !x.is_negative() && x < &Rational::one();
        in_unit(&self.eps_prime) && in_unit(&self.eps)
    }

    /// Congruent to `[1/2; 1/2]` mod 1, i.e. the theta constant vanishes.
    pub fn is_singular(&self) -> bool {
        let half = ratio(1, 2);
        frac(&self.eps_prime) == half && frac(&self.eps) == half
    }

    /// Congruent to one of the even half-integer characteristics `[0;0]`, `[0;1/2]`,
    /// `[1/2;0]`, whose theta function is even so that `θ′(0) = 0`.
    pub fn has_even_half_integer_class(&self) -> bool {
        let two = BigInt::from(2);
        let halfint = |x: &Rational| (x * &two).is_integer();
        halfint(&self.eps_prime) && halfint(&self.eps) && !self.is_singular()
    }

    /// Lowest common denominator of both entries.
    pub fn denominator(&self) -> BigInt {
        self.eps_prime.denom().lcm(self.eps.denom())
    }

    /// Numeric entries as a [`RealCharacteristic`].
    pub fn to_real<T: Real>(&self) -> RealCharacteristic<T> {
        RealCharacteristic {
            top: rational_to_real(&self.eps_prime),
            bottom: rational_to_real(&self.eps),
        }
    }

    /// Plus-branch reduction (subtract integer parts).
    pub fn reduce(&self) -> ReducedCharacteristic {
        let n = self.eps.floor();
        let canonical = Characteristic::new(frac(&self.eps_prime), &self.eps - &n);
        // θ[ε′+n′; ε+n] = e^{2πi n ε′} θ[ε′; ε]
        let phase = Phase::new(n * &canonical.eps_prime);
        ReducedCharacteristic {
            canonical,
            phase,
            sign: 1,
            branch: Branch::Plus,
        }
    }

    /// Mirror-branch reduction: `θ[c](z) = θ[−c](−z)`, then reduce `−c`.
    pub fn reduce_mirror(&self) -> ReducedCharacteristic {
        let r = self.neg().reduce();
        ReducedCharacteristic {
            sign: -1,
            branch: Branch::Mirror,
            ..r
        }
    }

    /// Prefers whichever branch lands both entries in `[0, 1/2]`, the plus branch
    /// on ties; falls back to the plus branch.
    pub fn half_range(&self) -> ReducedCharacteristic {
        let plus = self.reduce();
        if plus.canonical.in_half_range() {
            return plus;
        }
        let mirror = self.reduce_mirror();
        if mirror.canonical.in_half_range() {
            return mirror;
        }
        plus
    }

    /// Canonical representative of the class `{c, −c} mod 1`: the lexicographically
    /// smaller of the two reduced forms. Agrees with [`half_range`](Self::half_range)
    /// whenever that lands in `[0, 1/2]²`. Used for theta constants, where the sign
    /// of the mirror branch does not matter.
    pub fn reduce_class(&self) -> ReducedCharacteristic {
        let plus = self.reduce();
        let mirror = self.reduce_mirror();
        if mirror.canonical < plus.canonical {
            mirror
        } else {
            plus
        }
    }

    fn in_half_range(&self) -> bool {
        let half = ratio(1, 2);
        self.eps_prime <= half && self.eps <= half
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}",
            rational_to_string(&self.eps_prime),
            rational_to_string(&self.eps)
        )
    }
}

impl FromStr for Characteristic {
    type Err = ParseError;

    /// Parses `"a/b,c/d"`, top entry first. `;` is accepted as separator too.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (top, bottom) = t
            .split_once(',')
            .or_else(|| t.split_once(';'))
            .ok_or_else(|| ParseError::Characteristic(s.to_string()))?;
        Ok(Characteristic::new(
            parse_rational(top)?,
            parse_rational(bottom)?,
        ))
    }
}

/// A characteristic with real (floating point) entries, accepted by the numeric
/// engine and verifier only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealCharacteristic<T> {
    pub top: T,
    pub bottom: T,
}

impl<T: Real> RealCharacteristic<T> {
    pub fn new(top: T, bottom: T) -> Self {
        RealCharacteristic { top, bottom }
    }

    pub fn scale(&self, k: T) -> Self {
        RealCharacteristic::new(self.top * k, self.bottom * k)
    }

    pub fn neg(&self) -> Self {
        RealCharacteristic::new(-self.top, -self.bottom)
    }

    pub fn shift(&self, top: T, bottom: T) -> Self {
        RealCharacteristic::new(self.top + top, self.bottom + bottom)
    }
}

impl<T: Real> From<&Characteristic> for RealCharacteristic<T> {
    fn from(c: &Characteristic) -> Self {
        c.to_real()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Characteristic {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_already_canonical() {
        let r = ch("1/3,2/3").reduce();
        assert_eq!(r.canonical, ch("1/3,2/3"));
        assert!(r.phase.is_one());
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn reduce_bottom_shift_gives_phase() {
        let r = ch("2/5,9/5").reduce();
        assert_eq!(r.canonical, ch("2/5,4/5"));
        assert_eq!(r.phase, Phase::new(ratio(2, 5)));
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn reduce_negative_entries() {
        // θ[−7/10; −19/10] = e^{−6πi/5} θ[3/10; 1/10]
        let r = ch("-7/10,-19/10").reduce();
        assert_eq!(r.canonical, ch("3/10,1/10"));
        assert_eq!(r.phase, Phase::new(ratio(-3, 5)));
        assert_eq!(r.phase.turns(), &ratio(2, 5));
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn mirror_examples() {
        let r = ch("3/4,1/2").reduce_mirror();
        assert_eq!(r.canonical, ch("1/4,1/2"));
        assert_eq!(r.phase, Phase::new(ratio(-1, 4)));
        assert_eq!(r.sign, -1);
        // θ′[3/4;1/2] = sign·phase·θ′[1/4;1/2] = i θ′[1/4;1/2]
        assert_eq!(r.phase.pow(1) * Phase::minus_one(), Phase::new(ratio(1, 4)));

        let r = ch("1/2,1/2").reduce_mirror();
        assert_eq!(r.canonical, ch("1/2,1/2"));
        assert_eq!(r.sign, -1);
        assert_eq!(r.phase, Phase::minus_one());

        let r = ch("2/3,0").reduce_mirror();
        assert_eq!(r.canonical, ch("1/3,0"));
        assert!(r.phase.is_one());
        assert_eq!(r.sign, -1);
    }

    #[test]
    fn half_range_examples() {
        // θ[4/5;3/5] = e^{−2πi/5} θ[1/5;2/5]
        let r = ch("4/5,3/5").half_range();
        assert_eq!(r.canonical, ch("1/5,2/5"));
        assert_eq!(r.phase, Phase::new(ratio(-1, 5)));
        assert_eq!(r.branch, Branch::Mirror);

        let r = ch("1/4,1/4").half_range();
        assert_eq!(r.canonical, ch("1/4,1/4"));
        assert_eq!(r.branch, Branch::Plus);

        // neither branch fits; falls back to the plus branch
        let r = ch("2/5,4/5").half_range();
        assert_eq!(r.canonical, ch("2/5,4/5"));
        assert_eq!(r.branch, Branch::Plus);
        // the mirror form used for this one: θ[2/5;4/5] = e^{4πi/5} θ[3/5;1/5]
        let m = ch("2/5,4/5").reduce_mirror();
        assert_eq!(m.canonical, ch("3/5,1/5"));
        assert_eq!(m.phase, Phase::new(ratio(2, 5)));
    }

    #[test]
    fn half_range_prefers_plus_on_ties() {
        let r = ch("0,1/2").half_range();
        assert_eq!(r.branch, Branch::Plus);
        assert_eq!(r.sign, 1);
    }

    #[test]
    fn reduce_class_picks_lexicographic_min() {
        assert_eq!(ch("3/4,1/2").reduce_class().canonical, ch("1/4,1/2"));
        assert_eq!(ch("1/4,1/2").reduce_class().canonical, ch("1/4,1/2"));
        assert_eq!(ch("9/13,4/13").reduce_class().canonical, ch("4/13,9/13"));
        assert_eq!(ch("0,5/6").reduce_class().canonical, ch("0,1/6"));
    }

    #[test]
    fn singular_detection() {
        assert!(ch("1/2,1/2").is_singular());
        assert!(ch("3/2,-1/2").is_singular());
        assert!(!ch("1/2,1/6").is_singular());
        assert!(!ch("0,0").is_singular());
    }

    #[test]
    fn even_half_integer_classes() {
        assert!(ch("0,0").has_even_half_integer_class());
        assert!(ch("1,1/2").has_even_half_integer_class());
        assert!(ch("-1/2,2").has_even_half_integer_class());
        assert!(!ch("1/2,1/2").has_even_half_integer_class());
        assert!(!ch("1/4,0").has_even_half_integer_class());
    }

    #[test]
    fn parse_and_print() {
        let c = ch("1/2,0");
        assert_eq!(c.to_string(), "1/2,0");
        assert_eq!(ch("[2/4;-3]").to_string(), "1/2,-3");
        assert!("1/2".parse::<Characteristic>().is_err());
        assert!("0.5,1".parse::<Characteristic>().is_err());
        assert!("1/0,1".parse::<Characteristic>().is_err());
    }

    #[test]
    fn phase_group_laws() {
        let a = Phase::new(ratio(3, 7));
        let b = Phase::new(ratio(5, 6));
        let c = Phase::new(ratio(-11, 4));
        assert_eq!(
            (a.clone() * b.clone()) * c.clone(),
            a.clone() * (b.clone() * c)
        );
        assert_eq!(a.clone() * a.inv(), Phase::one());
        assert_eq!(a.pow(7), Phase::one());
        assert_eq!(Phase::new(ratio(5, 2)), Phase::minus_one());
        let z = Phase::new(ratio(1, 4)).to_complex::<f64>();
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
    }
}
