//! Exact sums `Σ q_r e^{2πi r}` with rational `q_r` and `r`, reduced in `Q(ζ_N)`.
//!
//! Used when merging like monomials: coefficients with different phases are
//! added in the cyclotomic field, so cancellations such as `1 + ζ₃ + ζ₃² = 0`
//! are detected exactly.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::characteristic::{frac, ratio, Phase, Rational};

type Poly = Vec<Rational>;

#[derive(Clone, Debug, Default)]
pub struct CyclotomicSum {
    terms: BTreeMap<Phase, Rational>,
}

impl CyclotomicSum {
    pub fn new() -> Self {
        CyclotomicSum::default()
    }

    pub fn add(&mut self, scalar: &Rational, phase: &Phase) {
        if scalar.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(phase.clone())
            .or_insert_with(Rational::zero);
        *e += scalar;
    }

    fn conductor(&self) -> u64 {
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.turns().denom()))
            .try_into()
            .expect("phase denominator fits in u64")
    }

    /// Coefficients in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`.
    fn reduced(&self, n: u64) -> Poly {
        let mut coeffs = vec![Rational::zero(); n as usize];
        let nn = Rational::from_integer(BigInt::from(n));
        for (phase, q) in &self.terms {
            let j = (phase.turns() * &nn).to_integer();
            let j: usize = j.try_into().unwrap();
            coeffs[j] += q;
        }
        poly_rem(coeffs, &cyclotomic_poly(n))
    }

    pub fn is_zero(&self) -> bool {
        if let Some(t) = self.folded_single() {
            return t.is_empty();
        }
        let n = self.conductor();
        self.reduced(n).iter().all(Zero::is_zero)
    }

    /// Folds `e^{2πi(r+1/2)} = −e^{2πi r}`; `Some` when at most one phase survives.
    fn folded_single(&self) -> Option<Vec<(Rational, Phase)>> {
        let half = ratio(1, 2);
        let mut folded: BTreeMap<Phase, Rational> = BTreeMap::new();
        for (phase, q) in &self.terms {
            let (q, r) = if phase.turns() >= &half {
                (-q.clone(), phase.turns() - &half)
            } else {
                (q.clone(), phase.turns().clone())
            };
            *folded.entry(Phase::new(r)).or_insert_with(Rational::zero) += q;
        }
        folded.retain(|_, q| !q.is_zero());
        (folded.len() <= 1).then(|| folded.into_iter().map(|(p, q)| (q, p)).collect())
    }

    /// Canonical list of `(scalar, phase)` pairs with phases in `[0, 1/2)`.
    ///
    /// A single root-of-unity multiple `q e^{2πi r}` comes back as one pair;
    /// anything else is returned in the power basis of `Q(ζ_N)`.
    pub fn canonical_terms(&self) -> Vec<(Rational, Phase)> {
        if let Some(t) = self.folded_single() {
            return t;
        }
        let n = self.conductor();
        let rem = self.reduced(n);
        let nonzero: Vec<usize> = (0..rem.len()).filter(|&j| !rem[j].is_zero()).collect();
        let raw: Vec<(Rational, Rational)> = match nonzero.len() {
            0 => vec![],
            1 => {
                let j = nonzero[0];
                vec![(rem[j].clone(), ratio(j as i64, n as i64))]
            }
            _ => match single_root_multiple(&rem, n) {
                Some((q, r)) => vec![(q, r)],
                None => nonzero
                    .iter()
                    .map(|&j| (rem[j].clone(), ratio(j as i64, n as i64)))
                    .collect(),
            },
        };
        let half = ratio(1, 2);
        let mut out: Vec<(Rational, Phase)> = raw
            .into_iter()
            .map(|(q, r)| {
                let r = frac(&r);
                if r >= half {
                    (-q, Phase::new(r - &half))
                } else {
                    (q, Phase::new(r))
                }
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }
}

/// Finds `q, r` with `element = q ζ^r` by testing each candidate root in `Q(ζ_M)`,
/// `M = lcm(N, 2)`.
fn single_root_multiple(rem: &Poly, n: u64) -> Option<(Rational, Rational)> {
    let m = n.lcm(&2);
    let scale = (m / n) as usize;
    let phi_m = cyclotomic_poly(m);
    for j in 0..m as usize {
        // element · ζ_M^{-j}
        let mut coeffs = vec![Rational::zero(); m as usize];
        for (i, c) in rem.iter().enumerate() {
            if !c.is_zero() {
                let k = (i * scale + m as usize - j) % m as usize;
                coeffs[k] += c;
            }
        }
        let red = poly_rem(coeffs, &phi_m);
        if red.iter().skip(1).all(Zero::is_zero) && !red[0].is_zero() {
            return Some((red[0].clone(), ratio(j as i64, m as i64)));
        }
    }
    None
}

/// `Φ_n` as a monic polynomial, coefficients low to high.
pub fn cyclotomic_poly(n: u64) -> Poly {
    thread_local! {
        static CACHE: RefCell<HashMap<u64, Poly>> = RefCell::new(HashMap::new());
    }
    if let Some(p) = CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    let p = compute_cyclotomic_poly(n);
    CACHE.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

fn compute_cyclotomic_poly(n: u64) -> Poly {
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut known: Vec<(u64, Poly)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        // x^d - 1 divided by Φ_e for every proper divisor e of d
        let mut p: Poly = vec![Rational::zero(); d as usize + 1];
        p[0] = -Rational::one();
        p[d as usize] = Rational::one();
        for (e, phi_e) in &known {
            if d % e == 0 {
                p = poly_div_exact(p, phi_e);
            }
        }
        known.push((d, p));
    }
    known.pop().unwrap().1
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_div_exact(a: Poly, b: &Poly) -> Poly {
    let a = trim(a);
    let b = trim(b.clone());
    let db = b.len() - 1;
    if a.len() <= db {
        return vec![Rational::zero()];
    }
    let mut r = a;
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        for (k, bk) in b.iter().enumerate() {
            r[i + k] -= &c * bk;
        }
        q[i] = c;
    }
    trim(q)
}

/// Remainder of `a` modulo the monic polynomial `m`, padded to `deg m` entries.
fn poly_rem(a: Poly, m: &Poly) -> Poly {
    let dm = m.len() - 1;
    let mut r = a;
    if r.len() > dm {
        for i in (dm..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            for (k, mk) in m.iter().enumerate() {
                r[i - dm + k] -= &c * mk;
            }
        }
    }
    r.resize(dm.max(1), Rational::zero());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(n: i64, d: i64) -> Phase {
        Phase::new(ratio(n, d))
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn cyclotomic_polys() {
        let as_ints = |n| -> Vec<i64> {
            cyclotomic_poly(n)
                .iter()
                .map(|c| c.to_integer().try_into().unwrap())
                .collect()
        };
        assert_eq!(as_ints(1), vec![-1, 1]);
        assert_eq!(as_ints(2), vec![1, 1]);
        assert_eq!(as_ints(3), vec![1, 1, 1]);
        assert_eq!(as_ints(4), vec![1, 0, 1]);
        assert_eq!(as_ints(6), vec![1, -1, 1]);
        assert_eq!(as_ints(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let mut s = CyclotomicSum::new();
        for k in 0..3 {
            s.add(&q(1), &ph(k, 3));
        }
        assert!(s.is_zero());
        assert!(s.canonical_terms().is_empty());
    }

    #[test]
    fn opposite_phases_merge() {
        // 27 e^{-πi/5} + 3 e^{4πi/5} = 24 e^{-πi/5}
        let mut s = CyclotomicSum::new();
        s.add(&q(27), &ph(-1, 10));
        s.add(&q(3), &ph(2, 5));
        let t = s.canonical_terms();
        assert_eq!(t.len(), 1);
        // 24 e^{2πi·9/10} = −24 e^{2πi·2/5}
        assert_eq!(t[0], (q(-24), ph(2, 5)));
    }

    #[test]
    fn hidden_single_root() {
        // e^{πi/6} + e^{5πi/6} = i
        let mut s = CyclotomicSum::new();
        s.add(&q(1), &ph(1, 12));
        s.add(&q(1), &ph(5, 12));
        assert_eq!(s.canonical_terms(), vec![(q(1), ph(1, 4))]);
    }

    #[test]
    fn genuine_two_term_sum_is_stable() {
        let mut a = CyclotomicSum::new();
        a.add(&q(1), &Phase::one());
        a.add(&q(2), &ph(1, 5));
        let mut b = CyclotomicSum::new();
        b.add(&q(2), &ph(1, 5));
        b.add(&q(1), &Phase::one());
        assert_eq!(a.canonical_terms(), b.canonical_terms());
        assert_eq!(a.canonical_terms().len(), 2);
    }
}
