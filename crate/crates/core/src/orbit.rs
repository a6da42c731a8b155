//! The multiplication-by-3 operator on proper rationals and on characteristics.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::characteristic::{frac, ratio, rational_to_string, Characteristic, Rational};
use crate::error::OrbitError;

/// Hard cap on chain iterations; real periods are bounded by φ of the denominator.
pub const CHAIN_ITERATION_CAP: usize = 10_000;

/// `x ↦ 3x mod 1`.
pub fn t_step(x: &Rational) -> Rational {
    frac(&(x * Rational::from_integer(3.into())))
}

/// Euler's totient by trial division.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    /// The seed lies on the cycle (fixed points included).
    Periodic,
    /// A tail ending at one of the fixed points `0` or `1/2`.
    StationaryTerminated,
    /// A tail ending on a cycle of length > 1.
    MergesIntoPeriodic,
}

/// Orbit of a proper rational under `x ↦ 3x mod 1`, seed first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub elements: Vec<Rational>,
    pub kind: OrbitKind,
    /// Number of leading elements not on the terminal cycle.
    pub tail_length: usize,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The terminal cycle (the whole orbit when periodic).
    pub fn cycle(&self) -> &[Rational] {
        &self.elements[self.tail_length..]
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.contains(x)
    }

    /// Same set of elements, ignoring order.
    pub fn same_set(&self, other: &Orbit) -> bool {
        self.len() == other.len() && self.elements.iter().all(|x| other.contains(x))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "elements": self.elements.iter().map(rational_to_string).collect::<Vec<_>>(),
            "kind": self.kind,
            "tail_length": self.tail_length,
        })
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements.iter().map(rational_to_string).collect();
        write!(f, "{}", items.join(", "))
    }
}

/// Iterates `x ↦ 3x mod 1` from `x` (taken mod 1) until a value repeats.
pub fn orbit_of(x: &Rational) -> Orbit {
    let mut elements = vec![frac(x)];
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    seen.insert(elements[0].clone(), 0);
    // terminates: every iterate has a denominator dividing the seed's
    loop {
        let next = t_step(elements.last().unwrap());
        if let Some(&start) = seen.get(&next) {
            let cycle_len = elements.len() - start;
            let kind = if start == 0 {
                OrbitKind::Periodic
            } else if cycle_len == 1 && (next.is_zero() || next == ratio(1, 2)) {
                OrbitKind::StationaryTerminated
            } else {
                OrbitKind::MergesIntoPeriodic
            };
            return Orbit {
                elements,
                kind,
                tail_length: start,
            };
        }
        seen.insert(next.clone(), elements.len());
        elements.push(next);
    }
}

/// Splits `P(p) = {m/p : 1 ≤ m < p}` into disjoint orbits, seeded by the smallest
/// uncovered element.
pub fn partition(p: u64) -> Result<Vec<Orbit>, OrbitError> {
    if p < 2 {
        return Err(OrbitError::TooSmall(p));
    }
    if p.is_multiple_of(3) {
        return Err(OrbitError::DivisibleByThree(p));
    }
    let mut covered = vec![false; p as usize];
    let mut orbits = Vec::new();
    for m in 1..p {
        if covered[m as usize] {
            continue;
        }
        let orbit = orbit_of(&ratio(m as i64, p as i64));
        for x in &orbit.elements {
            let k = x * Rational::from_integer((p as i64).into());
            covered[k.to_integer().try_into().unwrap_or(0usize)] = true;
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Per-element orbits of `P(p)` for any `p ≥ 2`, including `3 | p` where chains
/// run into stationary values or merge into cycles.
pub fn element_orbits(p: u64) -> Vec<Orbit> {
    (1..p)
        .map(|m| orbit_of(&ratio(m as i64, p as i64)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointKind {
    PeriodicCore,
    /// The core is a single characteristic with entries in `{0, 1/2}`.
    Stationary,
}

/// `c, 3c, 9c, …` reduced into `[0,1)²`, split into a pre-periodic tail and the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicChain {
    /// All distinct iterates; the last `period` entries form the core.
    pub chain: Vec<Characteristic>,
    pub preperiod: usize,
    pub period: usize,
    pub endpoint_kind: EndpointKind,
}

impl CharacteristicChain {
    pub fn core(&self) -> &[Characteristic] {
        &self.chain[self.preperiod..]
    }

    pub fn tail(&self) -> &[Characteristic] {
        &self.chain[..self.preperiod]
    }

    /// Successor of `chain[k]`, wrapping from the last entry back into the core.
    pub fn successor(&self, k: usize) -> &Characteristic {
        if k + 1 < self.chain.len() {
            &self.chain[k + 1]
        } else {
            &self.chain[self.preperiod]
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chain": self.chain.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "preperiod": self.preperiod,
            "period": self.period,
            "endpoint_kind": self.endpoint_kind,
        })
    }
}

impl fmt::Display for CharacteristicChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.chain.iter().map(|c| format!("[{c}]")).collect();
        write!(
            f,
            "{} (preperiod {}, period {}, {})",
            items.join(" -> "),
            self.preperiod,
            self.period,
            match self.endpoint_kind {
                EndpointKind::PeriodicCore => "periodic core",
                EndpointKind::Stationary => "stationary",
            }
        )
    }
}

/// One step of the operator on a characteristic, reduced with the plus branch.
pub fn char_step(c: &Characteristic) -> Characteristic {
    c.scale(3).reduce().canonical
}

pub fn char_chain(c: &Characteristic) -> Result<CharacteristicChain, OrbitError> {
    let mut chain = vec![c.reduce().canonical];
    let mut seen: HashMap<Characteristic, usize> = HashMap::new();
    seen.insert(chain[0].clone(), 0);
    for _ in 0..CHAIN_ITERATION_CAP {
        let next = char_step(chain.last().unwrap());
        if let Some(&start) = seen.get(&next) {
            let period = chain.len() - start;
            let endpoint_kind = if period == 1 {
                EndpointKind::Stationary
            } else {
                EndpointKind::PeriodicCore
            };
            return Ok(CharacteristicChain {
                chain,
                preperiod: start,
                period,
                endpoint_kind,
            });
        }
        seen.insert(next.clone(), chain.len());
        chain.push(next);
    }
    Err(OrbitError::IterationCap(CHAIN_ITERATION_CAP))
}

/// Cardinality of the orbit of `x` when its denominator is coprime to 3.
pub fn orbit_cardinality(x: &Rational) -> usize {
    orbit_of(x).len()
}

/// `lcm(|O_ε′|, |O_ε|)`, the period for denominators coprime to 3.
pub fn lcm_period(c: &Characteristic) -> usize {
    let a = orbit_cardinality(&c.eps_prime);
    let b = orbit_cardinality(&c.eps);
    a.lcm(&b)
}

/// True when `3^k x ≡ x` for the given `k`.
pub fn t_power_fixes(x: &Rational, k: u64) -> bool {
    let mut y = frac(x);
    for _ in 0..k {
        y = t_step(&y);
    }
    y == frac(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn ch(s: &str) -> Characteristic {
        s.parse().unwrap()
    }

    #[test]
    fn t_step_examples() {
        assert_eq!(t_step(&q(1, 5)), q(3, 5));
        assert_eq!(t_step(&q(1, 2)), q(1, 2));
        assert_eq!(t_step(&q(2, 3)), q(0, 1));
    }

    #[test]
    fn orbit_examples() {
        let o = orbit_of(&q(1, 13));
        assert_eq!(o.elements, vec![q(1, 13), q(3, 13), q(9, 13)]);
        assert_eq!(o.kind, OrbitKind::Periodic);

        let o = orbit_of(&q(1, 6));
        assert_eq!(o.elements, vec![q(1, 6), q(1, 2)]);
        assert_eq!(o.kind, OrbitKind::StationaryTerminated);
        assert_eq!(o.tail_length, 1);

        let o = orbit_of(&q(1, 15));
        assert_eq!(
            o.elements,
            vec![q(1, 15), q(1, 5), q(3, 5), q(4, 5), q(2, 5)]
        );
        assert_eq!(o.kind, OrbitKind::MergesIntoPeriodic);
        assert_eq!(o.tail_length, 1);

        let o = orbit_of(&q(2, 3));
        assert_eq!(o.elements, vec![q(2, 3), q(0, 1)]);
        assert_eq!(o.kind, OrbitKind::StationaryTerminated);

        let o = orbit_of(&q(1, 2));
        assert_eq!(o.elements, vec![q(1, 2)]);
        assert_eq!(o.kind, OrbitKind::Periodic);
    }

    #[test]
    fn partition_examples() {
        let sizes = |p| -> Vec<usize> { partition(p).unwrap().iter().map(Orbit::len).collect() };
        assert_eq!(sizes(11), vec![5, 5]);
        assert_eq!(sizes(13), vec![3, 3, 3, 3]);
        let p8 = partition(8).unwrap();
        assert_eq!(p8.len(), 4);
        assert_eq!(p8[0].elements, vec![q(1, 8), q(3, 8)]);
        assert_eq!(p8[1].elements, vec![q(1, 4), q(3, 4)]);
        assert_eq!(p8[2].elements, vec![q(1, 2)]);
        assert_eq!(p8[3].elements, vec![q(5, 8), q(7, 8)]);
        assert_eq!(partition(9), Err(OrbitError::DivisibleByThree(9)));
        assert_eq!(partition(1), Err(OrbitError::TooSmall(1)));
    }

    #[test]
    fn totient() {
        let expect = [
            (1, 1),
            (2, 1),
            (4, 2),
            (8, 4),
            (12, 4),
            (13, 12),
            (36, 12),
            (97, 96),
        ];
        for (n, phi) in expect {
            assert_eq!(euler_phi(n), phi, "phi({n})");
        }
    }

    #[test]
    fn chain_examples() {
        let c = char_chain(&ch("1/13,12/13")).unwrap();
        assert_eq!(c.period, 3);
        assert_eq!(c.preperiod, 0);
        assert_eq!(
            c.chain,
            vec![ch("1/13,12/13"), ch("3/13,10/13"), ch("9/13,4/13")]
        );

        let c = char_chain(&ch("1/5,1/6")).unwrap();
        assert_eq!(
            c.chain,
            vec![
                ch("1/5,1/6"),
                ch("3/5,1/2"),
                ch("4/5,1/2"),
                ch("2/5,1/2"),
                ch("1/5,1/2")
            ]
        );
        assert_eq!(c.preperiod, 1);
        assert_eq!(c.period, 4);
        assert_eq!(c.successor(4), &ch("3/5,1/2"));
        assert_eq!(c.endpoint_kind, EndpointKind::PeriodicCore);

        let c = char_chain(&ch("0,0")).unwrap();
        assert_eq!(c.period, 1);
        assert_eq!(c.endpoint_kind, EndpointKind::Stationary);

        let c = char_chain(&ch("1/6,1/6")).unwrap();
        assert_eq!(c.chain, vec![ch("1/6,1/6"), ch("1/2,1/2")]);
        assert_eq!(c.endpoint_kind, EndpointKind::Stationary);
    }

    #[test]
    fn chain_reduces_input_first() {
        let c = char_chain(&ch("6/5,-3/5")).unwrap();
        assert_eq!(c.chain[0], ch("1/5,2/5"));
        assert_eq!(c.period, 4);
    }
}
