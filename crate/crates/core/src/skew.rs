//! The skew group algebra ℚ(x)#(ℤ⋊S₂).
//!
//! The group is generated by the shift δ and the flip τ with ττ = 1 and
//! τδτ = δ⁻¹; a group element is normal-ordered as δᵏτ^ε. It acts on ℚ(x) by
//! (δᵏτ^ε)(f)(x) = f((−1)^ε(x − k)), and the algebra is the free ℚ(x)-module
//! on the group with multiplication twisted by that action.

use crate::poly::Polynomial;
use crate::rat::{rat_int, Rat};
use crate::ratfun::RationalFunction;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SkewError {
    #[error("element has a tau component; the check applies only to the shift subalgebra")]
    NotInLSharpM,
}

/// δᵏτ^eps in normal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub k: i64,
    pub eps: u8, // 0 or 1
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { k: 0, eps: 0 }
    }

    pub fn delta(k: i64) -> Self {
        GroupElement { k, eps: 0 }
    }

    pub fn tau() -> Self {
        GroupElement { k: 0, eps: 1 }
    }

    /// Normal-ordered product: δᵏτ^ε · δᵏ′τ^ε′ = δ^{k+(−1)^ε k′} τ^{ε⊕ε′}.
    pub fn compose(self, rhs: GroupElement) -> GroupElement {
        let sign = if self.eps == 1 { -1 } else { 1 };
        GroupElement {
            k: self.k + sign * rhs.k,
            eps: self.eps ^ rhs.eps,
        }
    }

    pub fn inverse(self) -> GroupElement {
        let sign = if self.eps == 1 { 1 } else { -1 };
        GroupElement {
            k: sign * self.k,
            eps: self.eps,
        }
    }

    /// The automorphism action on ℚ(x): f ↦ f((−1)^ε(x − k)).
    pub fn act(self, f: &RationalFunction) -> RationalFunction {
        let flipped = if self.eps == 1 { f.negate_var() } else { f.clone() };
        flipped.shift(&rat_int(-self.k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkewElement {
    // invariant: no zero coefficients stored
    terms: BTreeMap<GroupElement, RationalFunction>,
}

impl SkewElement {
    pub fn zero() -> Self {
        SkewElement::default()
    }

    pub fn one() -> Self {
        Self::from_function(RationalFunction::one())
    }

    pub fn term(g: GroupElement, f: RationalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(g, f);
        }
        SkewElement { terms }
    }

    pub fn from_function(f: RationalFunction) -> Self {
        Self::term(GroupElement::identity(), f)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::from_function(RationalFunction::from_poly(p))
    }

    pub fn scalar(c: Rat) -> Self {
        Self::from_function(RationalFunction::constant(c))
    }

    /// The generator x as an element of the algebra.
    pub fn x() -> Self {
        Self::from_poly(Polynomial::variable())
    }

    pub fn delta(k: i64) -> Self {
        Self::term(GroupElement::delta(k), RationalFunction::one())
    }

    pub fn tau() -> Self {
        Self::term(GroupElement::tau(), RationalFunction::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: GroupElement) -> RationalFunction {
        self.terms.get(&g).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SkewElement {
            terms: self
                .terms
                .iter()
                .map(|(g, f)| (*g, f.scale(c)))
                .collect(),
        }
    }

    fn add_term(&mut self, g: GroupElement, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &f;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// The natural action on ℚ(x): Σ f_g · g(p).
    pub fn act(&self, p: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (g, f) in &self.terms {
            acc = &acc + &(f * &g.act(p));
        }
        acc
    }

    /// Left-linear projection onto the τ-subring: f·δᵏτ^ε ↦ f·τ^ε.
    pub fn augment(&self) -> SkewElement {
        let mut out = SkewElement::zero();
        for (g, f) in &self.terms {
            out.add_term(GroupElement { k: 0, eps: g.eps }, f.clone());
        }
        out
    }

    /// τXτ⁻¹ = X for X in the shift subalgebra; equivalently the coefficient
    /// symmetry f_{−k}(x) = f_k(−x).
    pub fn is_tau_invariant(&self) -> Result<bool, SkewError> {
        if self.terms.keys().any(|g| g.eps != 0) {
            return Err(SkewError::NotInLSharpM);
        }
        Ok(self.terms.iter().all(|(g, f)| {
            self.coeff(GroupElement::delta(-g.k)) == f.negate_var()
        }))
    }

    /// Conjugate by the flip: τXτ⁻¹.
    pub fn tau_conjugate(&self) -> SkewElement {
        let t = Self::tau();
        &(&t * self) * &t
    }

    pub fn preserves_polys(&self, max_deg: usize) -> Preservation {
        self.preservation_check(max_deg, false)
    }

    pub fn preserves_even_polys(&self, max_deg: usize) -> Preservation {
        self.preservation_check(max_deg, true)
    }

    fn preservation_check(&self, max_deg: usize, even_only: bool) -> Preservation {
        for m in 0..=max_deg {
            let exponent = if even_only { 2 * m } else { m };
            let p = RationalFunction::from_poly(Polynomial::monomial(exponent, rat_int(1)));
            let image = self.act(&p);
            let ok = match image.as_polynomial() {
                Some(poly) => !even_only || poly.is_even(),
                None => false,
            };
            if !ok {
                return Preservation {
                    ok: false,
                    witness: Some((exponent, image)),
                };
            }
        }
        Preservation { ok: true, witness: None }
    }
}

/// Outcome of a bounded preservation check: on failure, the exponent m and
/// the image of x^m that escaped the target subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preservation {
    pub ok: bool,
    pub witness: Option<(usize, RationalFunction)>,
}

impl std::ops::Add for &SkewElement {
    type Output = SkewElement;
    fn add(self, rhs: &SkewElement) -> SkewElement {
        let mut out = self.clone();
        for (g, f) in &rhs.terms {
            out.add_term(*g, f.clone());
        }
        out
    }
}

impl std::ops::Sub for &SkewElement {
    type Output = SkewElement;
    fn sub(self, rhs: &SkewElement) -> SkewElement {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &SkewElement {
    type Output = SkewElement;
    fn neg(self) -> SkewElement {
        SkewElement {
            terms: self.terms.iter().map(|(g, f)| (*g, -f)).collect(),
        }
    }
}

impl std::ops::Mul for &SkewElement {
    type Output = SkewElement;
    fn mul(self, rhs: &SkewElement) -> SkewElement {
        let mut out = SkewElement::zero();
        for (g, f) in &self.terms {
            for (h, e) in &rhs.terms {
                out.add_term(g.compose(*h), f * &g.act(e));
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for SkewElement {
            type Output = SkewElement;
            fn $method(self, rhs: SkewElement) -> SkewElement {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&SkewElement> for SkewElement {
            type Output = SkewElement;
            fn $method(self, rhs: &SkewElement) -> SkewElement {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for SkewElement {
    type Output = SkewElement;
    fn neg(self) -> SkewElement {
        -&self
    }
}

impl fmt::Display for SkewElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}")?;
            if g.k != 0 {
                write!(f, "·δ^{}", g.k)?;
            }
            if g.eps == 1 {
                write!(f, "·τ")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    k: i64,
    eps: u8,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SkewDto {
    terms: Vec<TermDto>,
}

impl Serialize for SkewElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = SkewDto {
            terms: self
                .terms
                .iter()
                .map(|(g, f)| TermDto {
                    k: g.k,
                    eps: g.eps,
                    num: f.numerator().to_string(),
                    den: f.denominator().to_string(),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let dto = SkewDto::deserialize(d)?;
        let mut out = SkewElement::zero();
        for t in dto.terms {
            if t.eps > 1 {
                return Err(D::Error::custom("eps must be 0 or 1"));
            }
            let num: Polynomial = t.num.parse().map_err(D::Error::custom)?;
            let den: Polynomial = t.den.parse().map_err(D::Error::custom)?;
            let f = RationalFunction::new(num, den).map_err(D::Error::custom)?;
            out.add_term(GroupElement { k: t.k, eps: t.eps }, f);
        }
        Ok(out)
    }
}
