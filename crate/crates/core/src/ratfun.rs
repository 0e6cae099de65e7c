//! Rational functions in one variable, kept in canonical form:
//! numerator and denominator coprime, denominator monic. Equality is then
//! structural, which the identity checks rely on throughout.

use crate::poly::{ArithError, Polynomial};
use crate::rat::Rat;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial, // monic, coprime to num, never zero
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > Some(0) {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        } else {
            (num, den)
        };
        let lead = den.leading().unwrap().clone();
        let inv = Rat::new(lead.denom().clone(), lead.numer().clone());
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Some(p) iff the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat, ArithError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ArithError::PoleEvaluation { at: x.clone() });
        }
        Ok(self.num.eval(x) / d)
    }

    /// f(x + c). Shifting both parts cannot introduce a common factor.
    pub fn shift(&self, c: &Rat) -> Self {
        let den = self.den.shift(c);
        let lead = den.leading().unwrap().clone();
        debug_assert!(lead == Rat::from_integer(1.into()));
        RationalFunction {
            num: self.num.shift(c),
            den,
        }
    }

    /// f(-x).
    pub fn negate_var(&self) -> Self {
        Self::new(self.num.negate_var(), self.den.negate_var()).unwrap()
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl std::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl std::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl std::ops::Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
            .expect("division by the zero rational function")
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl std::ops::Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn rf(n: &str, d: &str) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn canonical_form() {
        // (t^2-1)/(2t+2) reduces to (t-1)/2 with monic denominator
        let f = rf("-1,0,1", "2,2");
        assert_eq!(f.numerator(), &p("-1/2,1/2"));
        assert_eq!(f.denominator(), &p("1"));
        assert_eq!(f, rf("-1/2,1/2", "1"));
        assert!(f.as_polynomial().is_some());
        assert!(rf("1", "0,1").as_polynomial().is_none());
        assert!(RationalFunction::new(p("1"), Polynomial::zero()).is_err());
    }

    #[test]
    fn arithmetic_cancels() {
        let f = rf("1", "0,1"); // 1/t
        let g = rf("0,1", "1"); // t
        assert_eq!(&f * &g, RationalFunction::one());
        assert_eq!(&f - &f, RationalFunction::zero());
        // 1/t + 1/(t+1) = (2t+1)/(t^2+t)
        assert_eq!(&f + &rf("1", "1,1"), rf("1,2", "0,1,1"));
        assert_eq!(f.inv().unwrap(), g);
        assert_eq!(&g / &f, rf("0,0,1", "1"));
    }

    #[test]
    fn eval_and_poles() {
        let f = rf("1", "-1,1"); // 1/(t-1)
        assert_eq!(f.eval(&rat_int(3)).unwrap(), rat(1, 2));
        assert!(matches!(
            f.eval(&rat_int(1)),
            Err(ArithError::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn shift_and_negate() {
        let f = rf("1", "0,1"); // 1/x
        assert_eq!(f.shift(&rat_int(2)), rf("1", "2,1"));
        assert_eq!(f.negate_var(), rf("-1", "0,1"));
        // canonicalization after negate keeps the denominator monic
        let g = rf("1", "1,2"); // 1/(2x+1) stored as (1/2)/(x+1/2)
        assert_eq!(g.denominator().leading().unwrap(), &rat_int(1));
        assert_eq!(g.negate_var().eval(&rat_int(-3)).unwrap(), g.eval(&rat_int(3)).unwrap());
    }
}
