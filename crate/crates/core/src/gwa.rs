//! The generalized Weyl algebra T̃(s) over ℚ(h): relations ah = (h−1)a,
//! bh = (h+1)b, ba = s(h), ab = s(h−1). An element is uniquely
//! Σ fₙ(h)·xₙ with x₀ = 1, xₙ = aⁿ for n > 0 and b^{|n|} for n < 0.
//!
//! Also hosts the embedding data attached to a degree ≥ 4 polynomial q:
//! the generator images u ↦ h², v ↦ a + b + 2ρ/(1−4h²),
//! w ↦ (h−1)a − (h+1)b − ρ/(1−4h²), and the isomorphism ψ onto a skew
//! group subalgebra with ψ(h) = x, ψ(a) = f(x)δ, f(x) = q(−x)/(x(2x−1)).

use crate::poly::Polynomial;
use crate::rat::{rat, rat_int, Rat};
use crate::ratfun::RationalFunction;
use crate::skew::{GroupElement, SkewElement};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("q must be a polynomial of degree at least 4 (got {found:?})")]
pub struct DegreeTooSmall {
    pub found: Option<usize>,
}

pub(crate) fn require_degree(q: &Polynomial) -> Result<(), DegreeTooSmall> {
    if q.degree() < Some(4) {
        return Err(DegreeTooSmall { found: q.degree() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwaParams {
    s: RationalFunction,
}

impl GwaParams {
    pub fn new(s: RationalFunction) -> Self {
        assert!(!s.is_zero(), "the defining parameter s must be nonzero");
        GwaParams { s }
    }

    pub fn s(&self) -> &RationalFunction {
        &self.s
    }

    /// s attached to q: s(t) = q(t)q(−t−1) / (t(t+1)(1+2t)²).
    pub fn for_q(q: &Polynomial) -> Result<Self, DegreeTooSmall> {
        require_degree(q)?;
        let t = Polynomial::variable();
        let num = q * &q.negate_var().shift(&rat_int(1));
        let lin = Polynomial::from_ints(&[1, 2]);
        let den = &(&t * &t.shift(&rat_int(1))) * &(&lin * &lin);
        Ok(GwaParams::new(RationalFunction::new(num, den).unwrap()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GwaElement {
    // n ↦ fₙ(h); invariant: no zero coefficients stored
    coeffs: BTreeMap<i64, RationalFunction>,
}

impl GwaElement {
    pub fn zero() -> Self {
        GwaElement::default()
    }

    pub fn one() -> Self {
        Self::term(0, RationalFunction::one())
    }

    pub fn term(n: i64, f: RationalFunction) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(n, f);
        }
        GwaElement { coeffs }
    }

    pub fn scalar_fn(f: RationalFunction) -> Self {
        Self::term(0, f)
    }

    pub fn h() -> Self {
        Self::scalar_fn(RationalFunction::from_poly(Polynomial::variable()))
    }

    pub fn a() -> Self {
        Self::term(1, RationalFunction::one())
    }

    pub fn b() -> Self {
        Self::term(-1, RationalFunction::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, n: i64) -> RationalFunction {
        self.coeffs.get(&n).cloned().unwrap_or_else(RationalFunction::zero)
    }

    fn add_term(&mut self, n: i64, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.entry(n) {
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

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GwaElement {
            coeffs: self.coeffs.iter().map(|(n, f)| (*n, f.scale(c))).collect(),
        }
    }

    /// Normal-form product. Commuting xₘ past a coefficient shifts it,
    /// xₘ·g(h) = g(h−m)·xₘ, and an opposite-sign pair contracts through s.
    pub fn mul(&self, rhs: &GwaElement, params: &GwaParams) -> GwaElement {
        let mut out = GwaElement::zero();
        for (&m, f) in &self.coeffs {
            for (&k, g) in &rhs.coeffs {
                let mut coeff = f * &g.shift(&rat_int(-m));
                let contractions = if m > 0 && k < 0 {
                    let min = m.min(-k);
                    (0..min).map(|i| params.s.shift(&rat_int(-m + i))).collect()
                } else if m < 0 && k > 0 {
                    let min = (-m).min(k);
                    (0..min).map(|i| params.s.shift(&rat_int(-m - 1 - i))).collect()
                } else {
                    vec![]
                };
                for c in contractions {
                    coeff = &coeff * &c;
                }
                out.add_term(m + k, coeff);
            }
        }
        out
    }

    pub fn pow(&self, n: u32, params: &GwaParams) -> GwaElement {
        let mut acc = GwaElement::one();
        for _ in 0..n {
            acc = acc.mul(self, params);
        }
        acc
    }

    /// The anti-automorphism h ↦ h, a ↦ b, b ↦ a applied in normal form:
    /// star(f(h)·xₙ) = x₋ₙ·f(h) = f(h+n)·x₋ₙ.
    pub fn star(&self) -> GwaElement {
        let mut out = GwaElement::zero();
        for (&n, f) in &self.coeffs {
            out.add_term(-n, f.shift(&rat_int(n)));
        }
        out
    }
}

impl std::ops::Add for &GwaElement {
    type Output = GwaElement;
    fn add(self, rhs: &GwaElement) -> GwaElement {
        let mut out = self.clone();
        for (&n, f) in &rhs.coeffs {
            out.add_term(n, f.clone());
        }
        out
    }
}

impl std::ops::Sub for &GwaElement {
    type Output = GwaElement;
    fn sub(self, rhs: &GwaElement) -> GwaElement {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &GwaElement {
    type Output = GwaElement;
    fn neg(self) -> GwaElement {
        GwaElement {
            coeffs: self.coeffs.iter().map(|(n, f)| (*n, -f)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for GwaElement {
            type Output = GwaElement;
            fn $method(self, rhs: GwaElement) -> GwaElement {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&GwaElement> for GwaElement {
            type Output = GwaElement;
            fn $method(self, rhs: &GwaElement) -> GwaElement {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);

impl std::ops::Neg for GwaElement {
    type Output = GwaElement;
    fn neg(self) -> GwaElement {
        -&self
    }
}

impl fmt::Display for GwaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match n.cmp(&0) {
                std::cmp::Ordering::Greater => write!(f, "·a^{n}")?,
                std::cmp::Ordering::Less => write!(f, "·b^{}", -n)?,
                std::cmp::Ordering::Equal => {}
            }
        }
        Ok(())
    }
}

/// The isomorphism onto the shift-flip-free subalgebra of ℚ(x)#ℤ determined
/// by h ↦ x and a ↦ f(x)δ with f(x) = q(−x)/(x(2x−1)).
#[derive(Debug, Clone)]
pub struct Psi {
    f: RationalFunction,
}

impl Psi {
    pub fn new(q: &Polynomial) -> Result<Self, DegreeTooSmall> {
        require_degree(q)?;
        let num = q.negate_var();
        let den: Polynomial = "0,-1,2".parse().unwrap(); // x(2x−1)
        Ok(Psi {
            f: RationalFunction::new(num, den).unwrap(),
        })
    }

    pub fn f(&self) -> &RationalFunction {
        &self.f
    }

    /// Image of xₙ: products of shifted f along the orbit, on δⁿ.
    fn x_n_image(&self, n: i64) -> SkewElement {
        let mut coeff = RationalFunction::one();
        if n > 0 {
            for i in 0..n {
                coeff = &coeff * &self.f.shift(&rat_int(-i));
            }
        } else {
            for i in 0..-n {
                coeff = &coeff * &self.f.negate_var().shift(&rat_int(i));
            }
        }
        SkewElement::term(GroupElement::delta(n), coeff)
    }

    pub fn apply(&self, x: &GwaElement) -> SkewElement {
        let mut out = SkewElement::zero();
        for (&n, g) in &x.coeffs {
            // g(h) ↦ g(x), multiplied onto the xₙ image
            let g_img = SkewElement::from_function(g.clone());
            out = &out + &(&g_img * &self.x_n_image(n));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    U,
    V,
    W,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::U, Gen::V, Gen::W];

    pub fn symbol(self) -> char {
        match self {
            Gen::U => 'u',
            Gen::V => 'v',
            Gen::W => 'w',
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Generator images of the embedding into T̃(s): u ↦ h²,
/// v ↦ a + b + 2ρ/(1−4h²), w ↦ (h−1)a − (h+1)b − ρ/(1−4h²), ρ = 2q(−½).
pub fn beta(gen: Gen, q: &Polynomial) -> Result<GwaElement, DegreeTooSmall> {
    require_degree(q)?;
    let rho = q.eval(&rat(-1, 2)) * rat_int(2);
    let one_minus_4h2: Polynomial = "1,0,-4".parse().unwrap();
    let rho_part = |c: Rat| {
        RationalFunction::new(Polynomial::constant(c), one_minus_4h2.clone()).unwrap()
    };
    Ok(match gen {
        Gen::U => GwaElement::scalar_fn(RationalFunction::from_poly("0,0,1".parse().unwrap())),
        Gen::V => {
            let mut el = &GwaElement::a() + &GwaElement::b();
            el.add_term(0, rho_part(rho * rat_int(2)));
            el
        }
        Gen::W => {
            let mut el = GwaElement::term(
                1,
                RationalFunction::from_poly("-1,1".parse().unwrap()),
            );
            el.add_term(-1, RationalFunction::from_poly("-1,-1".parse().unwrap()));
            el.add_term(0, rho_part(-rho));
            el
        }
    })
}
