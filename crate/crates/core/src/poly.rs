//! Dense univariate polynomials over the exact rationals.
//!
//! Coefficients are stored in ascending order with no trailing zeros, so the
//! zero polynomial is the empty list and equality is structural. The text
//! format is the comma-separated ascending coefficient list used by the CLI:
//! `"0,0,0,0,1"` is t^4, entries are rationals (`"a/b"` or `"a"`).

use crate::rat::{parse_rat, rat_int, ParseError, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact polynomial division, remainder {remainder}")]
    NonExactDivision { remainder: Polynomial },
    #[error("the zero polynomial has every rational as a root")]
    ZeroPolynomial,
    #[error("evaluation at a pole: x = {at}")]
    PoleEvaluation { at: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    // ascending; invariant: empty or last entry nonzero
    coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself, t.
    pub fn variable() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(deg: usize, c: Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial (degree -infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// p(t + c).
    pub fn shift(&self, c: &Rat) -> Polynomial {
        let mut acc = Polynomial::zero();
        let base = Polynomial::from_coeffs(vec![c.clone(), Rat::one()]);
        let mut power = Polynomial::one();
        for (i, coef) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = &power * &base;
            }
            if !coef.is_zero() {
                acc = &acc + &power.scale(coef);
            }
        }
        acc
    }

    /// p(-t).
    pub fn negate_var(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// The unique (p0, p1) with p(t) = p0(t^2) + t*p1(t^2).
    pub fn even_odd_split(&self) -> (Polynomial, Polynomial) {
        let mut even = vec![];
        let mut odd = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                even.push(c.clone());
            } else {
                odd.push(c.clone());
            }
        }
        (Self::from_coeffs(even), Self::from_coeffs(odd))
    }

    /// True iff p(-t) = p(t), i.e. every odd coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&(Rat::one() / l)),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg d.
    pub fn divrem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial), ArithError> {
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - &c * dc;
                    rem[k + i] = v;
                }
                quot[k] = c;
            }
            rem.pop();
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, ArithError> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ArithError::NonExactDivision { remainder: r })
        }
    }

    /// Monic gcd (zero if both arguments are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.monic();
        }
        a
    }

    /// All rational roots, sorted, with set semantics (multiplicity collapsed).
    pub fn rational_roots(&self) -> Result<Vec<Rat>, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        let mut roots = BTreeSet::new();
        // integer-content-free version of the coefficient list
        let denom_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut low = 0;
        while ints[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.insert(Rat::zero());
            ints.drain(..low);
        }
        if ints.len() > 1 {
            let a0 = ints.first().unwrap().abs();
            let an = ints.last().unwrap().abs();
            for p in positive_divisors(&a0) {
                for qd in positive_divisors(&an) {
                    for cand in [
                        Rat::new(p.clone(), qd.clone()),
                        Rat::new(-p.clone(), qd.clone()),
                    ] {
                        if self.eval(&cand).is_zero() {
                            roots.insert(cand);
                        }
                    }
                }
            }
        }
        Ok(roots.into_iter().collect())
    }
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(n.is_positive(), "divisor enumeration needs a positive integer");
    let mut small = vec![];
    let mut large = vec![];
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let q = n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            let v = &coeffs[i] + c;
            coeffs[i] = v;
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &coeffs[i + j] + &(a * b);
                coeffs[i + j] = v;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseError("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(parse_rat)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn text_format_round_trip() {
        let q: Polynomial = "0,0,0,0,1".parse().unwrap();
        assert_eq!(q, Polynomial::monomial(4, rat_int(1)));
        assert_eq!(q.to_string(), "0,0,0,0,1");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("1/2, -3, 0").to_string(), "1/2,-3");
        assert!(Polynomial::from_str("").is_err());
        assert!(Polynomial::from_str("1,,2").is_err());
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(p("7").degree(), Some(0));
        assert_eq!(p("0,0,1").degree(), Some(2));
        assert_eq!(p("1,1,0,0").degree(), Some(1));
    }

    #[test]
    fn eval_derivative_shift() {
        let q = p("4,0,-5,0,1"); // t^4 - 5t^2 + 4
        assert_eq!(q.eval(&rat_int(1)), rat_int(0));
        assert_eq!(q.eval(&rat(-1, 2)), rat(45, 16));
        assert_eq!(q.derivative(), p("0,-10,0,4"));
        assert_eq!(q.derivative().eval(&rat_int(0)), rat_int(0));
        // p(t+1) at 0 equals p at 1
        assert_eq!(q.shift(&rat_int(1)).eval(&rat_int(0)), q.eval(&rat_int(1)));
        assert_eq!(q.shift(&rat(1, 2)).eval(&rat(1, 2)), q.eval(&rat_int(1)));
        assert_eq!(q.negate_var().eval(&rat_int(2)), q.eval(&rat_int(-2)));
    }

    #[test]
    fn even_odd_split_reconstructs() {
        let q = p("1,2,3,4,5,6");
        let (e, o) = q.even_odd_split();
        assert_eq!(e, p("1,3,5"));
        assert_eq!(o, p("2,4,6"));
        // p0(t^2) + t*p1(t^2) == p
        let t = Polynomial::variable();
        let sq = &t * &t;
        let recomposed = &compose(&e, &sq) + &(&t * &compose(&o, &sq));
        assert_eq!(recomposed, q);
        assert!(p("1,0,7,0,-2").is_even());
        assert!(!p("1,0,7,1").is_even());
    }

    fn compose(outer: &Polynomial, inner: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in outer.coeffs().iter().rev() {
            acc = &(&acc * inner) + &Polynomial::constant(c.clone());
        }
        acc
    }

    #[test]
    fn division_and_gcd() {
        let a = p("-1,0,1"); // t^2 - 1
        let b = p("1,1"); // t + 1
        assert_eq!(a.exact_div(&b).unwrap(), p("-1,1"));
        assert!(matches!(
            p("1,0,1").exact_div(&b),
            Err(ArithError::NonExactDivision { .. })
        ));
        assert!(matches!(
            a.divrem(&Polynomial::zero()),
            Err(ArithError::DivisionByZero)
        ));
        let g = (&a * &p("3,7")).gcd(&(&b * &p("3,7")));
        assert_eq!(g, (&b * &p("3/7,1")).monic());
        assert_eq!(Polynomial::zero().gcd(&Polynomial::zero()), Polynomial::zero());
        assert_eq!(Polynomial::zero().gcd(&p("0,2")), p("0,1"));
    }

    #[test]
    fn rational_roots_examples() {
        assert_eq!(
            p("4,0,-5,0,1").rational_roots().unwrap(),
            vec![rat_int(-2), rat_int(-1), rat_int(1), rat_int(2)]
        );
        // t^6 + t = t(t+1)(t^4 - t^3 + t^2 - t + 1)
        assert_eq!(
            p("0,1,0,0,0,0,1").rational_roots().unwrap(),
            vec![rat_int(-1), rat_int(0)]
        );
        // 2t^2 - t - 1 = (2t + 1)(t - 1)
        assert_eq!(
            p("-1,-1,2").rational_roots().unwrap(),
            vec![rat(-1, 2), rat_int(1)]
        );
        assert_eq!(p("1,0,1").rational_roots().unwrap(), vec![]);
        assert_eq!(p("5").rational_roots().unwrap(), vec![]);
        assert!(matches!(
            Polynomial::zero().rational_roots(),
            Err(ArithError::ZeroPolynomial)
        ));
        // multiplicity collapses: (t-1)^2
        assert_eq!(p("1,-2,1").rational_roots().unwrap(), vec![rat_int(1)]);
    }
}
