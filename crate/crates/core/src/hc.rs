//! Harish-Chandra modules of local distributions on an orbit: canonical
//! tableaux T₀(λ) (evaluation) and T₁(λ) (derivative evaluation), exact
//! distributions, the dual action of the algebra through the embedding, a
//! closed-form action table, and an independent interpolation oracle that
//! recovers the action coefficients from dual evaluations alone.
//!
//! The oracle is the ground truth: the closed forms are tested against it.

use crate::dq::{DqParams, FreeExpression, Gen, Phi};
use crate::poly::Polynomial;
use crate::rat::{rat, rat_int, Rat};
use crate::ratfun::RationalFunction;
use crate::skew::SkewElement;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HcError {
    #[error("distributions evaluate only on polynomials in x^2")]
    OddPolynomial,
    #[error("oracle support hypothesis failed its verification rows")]
    OracleInconsistent,
    #[error("window too small; the minimal admissible window is {required}")]
    WindowTooSmall { required: i64 },
}

/// A canonical tableau: order 0 evaluates p ↦ p(λ), order 1 evaluates
/// p ↦ p′(λ). Canonical form keeps λ ≥ 0 via T₀(−λ) = T₀(λ) and
/// T₁(−λ) = −T₁(λ); T₁(0) is zero and is never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tableau {
    order: u8,
    point: Rat,
}

impl Tableau {
    /// Canonical representative together with the sign the normalization
    /// contributes to a coefficient; None for the zero tableau T₁(0).
    pub fn canonical(order: u8, point: Rat) -> Option<(Tableau, Rat)> {
        assert!(order <= 1, "order must be 0 or 1");
        if order == 1 && point.is_zero() {
            return None;
        }
        if point.is_negative() {
            let sign = if order == 1 { rat_int(-1) } else { rat_int(1) };
            Some((Tableau { order, point: -point }, sign))
        } else {
            Some((Tableau { order, point }, rat_int(1)))
        }
    }

    pub fn t0(point: Rat) -> Tableau {
        Self::canonical(0, point).unwrap().0
    }

    pub fn t1(point: Rat) -> Option<Tableau> {
        Self::canonical(1, point).map(|(t, _)| t)
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn point(&self) -> &Rat {
        &self.point
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}({})", self.order, self.point)
    }
}

/// A finite exact combination of canonical tableaux.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Distribution {
    // invariant: no zero coefficients, keys canonical
    terms: BTreeMap<Tableau, Rat>,
}

impl Distribution {
    pub fn zero() -> Self {
        Distribution::default()
    }

    pub fn singleton(t: Tableau) -> Self {
        let mut d = Self::zero();
        d.terms.insert(t, Rat::one());
        d
    }

    /// Add c·T_order(point), canonicalizing the tableau first.
    pub fn add_term(&mut self, order: u8, point: Rat, c: Rat) {
        if c.is_zero() {
            return;
        }
        let Some((tab, sign)) = Tableau::canonical(order, point) else {
            return; // T₁(0) = 0
        };
        let contrib = c * sign;
        match self.terms.entry(tab) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(contrib);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &contrib;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tableau, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &Tableau) -> Rat {
        self.terms.get(t).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Distribution {
            terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect(),
        }
    }

    /// Dual evaluation on an even polynomial: Σ c₀·p(λ) + Σ c₁·p′(λ).
    pub fn eval(&self, p: &Polynomial) -> Result<Rat, HcError> {
        if !p.is_even() {
            return Err(HcError::OddPolynomial);
        }
        let dp = p.derivative();
        let mut acc = Rat::zero();
        for (t, c) in &self.terms {
            let value = match t.order {
                0 => p.eval(&t.point),
                _ => dp.eval(&t.point),
            };
            acc += c * value;
        }
        Ok(acc)
    }
}

impl std::ops::Add for &Distribution {
    type Output = Distribution;
    fn add(self, rhs: &Distribution) -> Distribution {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.order, t.point.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Distribution {
    type Output = Distribution;
    fn sub(self, rhs: &Distribution) -> Distribution {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Distribution {
    type Output = Distribution;
    fn neg(self) -> Distribution {
        Distribution {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Distribution {
            type Output = Distribution;
            fn $method(self, rhs: Distribution) -> Distribution {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Distribution> for Distribution {
            type Output = Distribution;
            fn $method(self, rhs: &Distribution) -> Distribution {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);

impl std::ops::Neg for Distribution {
    type Output = Distribution;
    fn neg(self) -> Distribution {
        -&self
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{mag}*{t}")?;
            }
        }
        Ok(())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct DistTermDto {
    order: u8,
    point: String,
    coeff: String,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct DistDto {
    terms: Vec<DistTermDto>,
}

impl serde::Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = DistDto {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| DistTermDto {
                    order: t.order,
                    point: t.point.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let dto = DistDto::deserialize(d)?;
        let mut out = Distribution::zero();
        for t in dto.terms {
            if t.order > 1 {
                return Err(D::Error::custom("order must be 0 or 1"));
            }
            let point = crate::rat::parse_rat(&t.point).map_err(D::Error::custom)?;
            let coeff = crate::rat::parse_rat(&t.coeff).map_err(D::Error::custom)?;
            out.add_term(t.order, point, coeff);
        }
        Ok(out)
    }
}

/// The four generators whose module action is tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActGen {
    U,
    V,
    W,
    HalfVPlusW,
}

impl ActGen {
    pub const ALL: [ActGen; 4] = [ActGen::U, ActGen::V, ActGen::W, ActGen::HalfVPlusW];

    pub fn to_free(self) -> FreeExpression {
        match self {
            ActGen::U => FreeExpression::gen(Gen::U),
            ActGen::V => FreeExpression::gen(Gen::V),
            ActGen::W => FreeExpression::gen(Gen::W),
            ActGen::HalfVPlusW => {
                &FreeExpression::gen(Gen::V).scale(&rat(1, 2)) + &FreeExpression::gen(Gen::W)
            }
        }
    }

    fn idx(self) -> u8 {
        match self {
            ActGen::U => 0,
            ActGen::V => 1,
            ActGen::W => 2,
            ActGen::HalfVPlusW => 3,
        }
    }
}

impl fmt::Display for ActGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ActGen::U => "u",
            ActGen::V => "v",
            ActGen::W => "w",
            ActGen::HalfVPlusW => "half_v_plus_w",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ActGen {
    type Err = crate::rat::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "u" => Ok(ActGen::U),
            "v" => Ok(ActGen::V),
            "w" => Ok(ActGen::W),
            "half_v_plus_w" => Ok(ActGen::HalfVPlusW),
            other => Err(crate::rat::ParseError(format!(
                "unknown generator {other:?}; expected u, v, w, or half_v_plus_w"
            ))),
        }
    }
}

/// Closed-form action of a generator on a canonical tableau.
///
/// The u-action and the generic rows follow the structure-constant table;
/// the singular points λ = 0 (for ½v+w) and λ = ½ (for w) carry their own
/// limits, where the derivative tableaux appear. The v-action is derived by
/// linearity from v = 2(½v+w) − 2w.
pub fn act_closed_form(g: ActGen, t: &Tableau, params: &DqParams) -> Distribution {
    let q = params.q();
    let qp = q.derivative();
    let lam = t.point.clone();
    let neg = |x: &Rat| -x.clone();
    let q_at = |x: &Rat| q.eval(x);
    let qp_at = |x: &Rat| qp.eval(x);
    let one = rat_int(1);
    let two = rat_int(2);
    let mut out = Distribution::zero();
    match g {
        ActGen::U => {
            let lam2 = &lam * &lam;
            match t.order {
                0 => out.add_term(0, lam, lam2),
                _ => {
                    out.add_term(1, lam.clone(), lam2);
                    out.add_term(0, lam.clone(), &two * &lam);
                }
            }
        }
        ActGen::HalfVPlusW => {
            if lam.is_zero() {
                // lim of (q(x)p(x+1) − q(−x)p(x−1))/2x at 0, p even
                out.add_term(1, one.clone(), q_at(&Rat::zero()));
                out.add_term(0, one, qp_at(&Rat::zero()));
            } else {
                let two_lam = &two * &lam;
                let fwd = q_at(&lam) / &two_lam;
                let bwd = -(q_at(&neg(&lam)) / &two_lam);
                match t.order {
                    0 => {
                        out.add_term(0, &lam + &one, fwd);
                        out.add_term(0, &lam - &one, bwd);
                    }
                    _ => {
                        out.add_term(1, &lam + &one, fwd);
                        out.add_term(1, &lam - &one, bwd);
                        let two_lam2 = &two * &(&lam * &lam);
                        out.add_term(
                            0,
                            &lam + &one,
                            (&lam * &qp_at(&lam) - &q_at(&lam)) / &two_lam2,
                        );
                        out.add_term(
                            0,
                            &lam - &one,
                            (&lam * &qp_at(&neg(&lam)) + &q_at(&neg(&lam))) / &two_lam2,
                        );
                    }
                }
            }
        }
        ActGen::W => {
            let half = rat(1, 2);
            let q_mh = q_at(&rat(-1, 2));
            if lam == half {
                let q_h = q_at(&half);
                let qp_h = qp_at(&half);
                let qp_mh = qp_at(&rat(-1, 2));
                let three_halves = rat(3, 2);
                match t.order {
                    0 => {
                        out.add_term(1, half.clone(), q_mh.clone());
                        out.add_term(0, three_halves, &q_h / &two);
                        out.add_term(0, half, (&qp_mh - &q_mh) / &two);
                    }
                    _ => {
                        let qpp = qp.derivative();
                        out.add_term(1, three_halves.clone(), &q_h / &two);
                        out.add_term(0, three_halves, (&qp_h - &q_h) / &two);
                        out.add_term(1, half.clone(), -(&(&q_mh + &qp_mh) / &two));
                        out.add_term(
                            0,
                            half,
                            &q_mh / &two - qpp.eval(&rat(-1, 2)) / rat_int(4),
                        );
                    }
                }
            } else {
                let a = &one + &(&two * &lam); // 1 + 2λ
                let b = &one - &(&two * &lam); // 1 − 2λ, nonzero since λ ≠ ½
                let diag = -(&(&two * &q_mh) / &(&a * &b));
                match t.order {
                    0 => {
                        out.add_term(0, &lam + &one, q_at(&lam) / &a);
                        out.add_term(0, &lam - &one, q_at(&neg(&lam)) / &b);
                        out.add_term(0, lam, diag);
                    }
                    _ => {
                        out.add_term(1, &lam + &one, q_at(&lam) / &a);
                        out.add_term(1, &lam - &one, q_at(&neg(&lam)) / &b);
                        out.add_term(
                            0,
                            &lam + &one,
                            qp_at(&lam) / &a - &two * &q_at(&lam) / &(&a * &a),
                        );
                        out.add_term(
                            0,
                            &lam - &one,
                            -(qp_at(&neg(&lam)) / &b) + &two * &q_at(&neg(&lam)) / &(&b * &b),
                        );
                        out.add_term(1, lam.clone(), diag);
                        let ab2 = {
                            let prod = &a * &b;
                            &prod * &prod
                        };
                        out.add_term(0, lam.clone(), -(&(&(&rat_int(16) * &lam) * &q_mh) / &ab2));
                    }
                }
            }
        }
        ActGen::V => {
            let half_part = act_closed_form(ActGen::HalfVPlusW, t, params);
            let w_part = act_closed_form(ActGen::W, t, params);
            out = (&half_part - &w_part).scale(&two);
        }
    }
    out
}

/// Linear extension of the closed-form action to distributions.
pub fn act_closed_form_dist(g: ActGen, d: &Distribution, params: &DqParams) -> Distribution {
    let mut out = Distribution::zero();
    for (t, c) in d.terms() {
        out = &out + &act_closed_form(g, t, params).scale(c);
    }
    out
}

/// Shared state for the dual-action oracle: the embedding images of the
/// starred generators and a result cache keyed by (generator, tableau).
pub struct ActionContext {
    phi: Phi,
    star_ops: [SkewElement; 4],
    cache: BTreeMap<(u8, Tableau), Distribution>,
}

impl ActionContext {
    pub fn new(params: &DqParams) -> Self {
        let phi = Phi::new(params.q()).expect("params are already degree-validated");
        let star_ops = ActGen::ALL.map(|g| phi.apply(&g.to_free().star()));
        ActionContext { phi, star_ops, cache: BTreeMap::new() }
    }

    pub fn params(&self) -> &DqParams {
        self.phi.params()
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    /// The operator that realizes the dual action of g on distributions.
    pub fn star_op(&self, g: ActGen) -> &SkewElement {
        &self.star_ops[g.idx() as usize]
    }

    /// Brute-force dual action: evaluate (g.ξ)(x^{2m}) = ξ(φ(g*).x^{2m})
    /// for enough m and reconstruct the tableau coefficients on the
    /// candidate support {λ−1, λ, λ+1} by Hermite interpolation.
    pub fn oracle(&mut self, g: ActGen, t: &Tableau) -> Result<Distribution, HcError> {
        let key = (g.idx(), t.clone());
        if let Some(d) = self.cache.get(&key) {
            return Ok(d.clone());
        }
        let op = self.star_ops[g.idx() as usize].clone();
        let d = oracle_solve(&op, t, 1)?;
        self.cache.insert(key, d.clone());
        Ok(d)
    }

    /// Oracle for an arbitrary expression in u, v, w with candidate support
    /// widened to the given radius (products of length r move at most r).
    pub fn oracle_expr(
        &self,
        e: &FreeExpression,
        t: &Tableau,
        radius: i64,
    ) -> Result<Distribution, HcError> {
        let op = self.phi.apply(&e.star());
        oracle_solve(&op, t, radius)
    }

    /// True iff dst lies in the span ℂ[u]·src + ℂ[u]·(v.src) + ℂ[u]·(w.src).
    ///
    /// Within the generalized eigenspace at a point μ, ℂ[u] acts through
    /// f(u)(c₀T₀ + c₁T₁) = f(μ²)(c₀T₀ + c₁T₁) + 2μf′(μ²)c₁T₀, so a
    /// component with c₁ ≠ 0 yields both tableaux and a component with
    /// c₁ = 0, c₀ ≠ 0 yields exactly T₀(μ).
    pub fn reaches(&mut self, src: &Tableau, dst: &Tableau) -> Result<bool, HcError> {
        if src == dst {
            return Ok(true);
        }
        let dv = self.oracle(ActGen::V, src)?;
        let dw = self.oracle(ActGen::W, src)?;
        let d_self = Distribution::singleton(src.clone());
        Ok(span_reaches(&[&d_self, &dv, &dw], dst))
    }
}

/// Membership of dst in the ℂ[u]-span of the given distributions; see
/// [`ActionContext::reaches`] for the eigenspace argument.
pub(crate) fn span_reaches(span: &[&Distribution], dst: &Tableau) -> bool {
    if dst.order == 1 {
        span.iter().any(|d| !d.coeff(dst).is_zero())
    } else {
        let t1_at = Tableau::t1(dst.point.clone());
        span.iter().any(|d| {
            !d.coeff(dst).is_zero() || t1_at.as_ref().is_some_and(|t1| !d.coeff(t1).is_zero())
        })
    }
}

fn rat_pow(x: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Tableau functional applied to x^{2m}.
fn tableau_on_even_power(t: &Tableau, m: usize) -> Rat {
    match t.order {
        0 => rat_pow(&t.point, 2 * m),
        _ => {
            if m == 0 {
                Rat::zero()
            } else {
                rat_int(2 * m as i64) * rat_pow(&t.point, 2 * m - 1)
            }
        }
    }
}

/// Source functional applied to the (necessarily even polynomial) image of
/// x^{2m} under the dual operator.
fn dual_value(op: &SkewElement, src: &Tableau, m: usize) -> Rat {
    let p = RationalFunction::from_poly(Polynomial::monomial(2 * m, rat_int(1)));
    let image = op.act(&p);
    let poly = image
        .as_polynomial()
        .expect("dual operators preserve polynomials in x^2")
        .clone();
    assert!(poly.is_even(), "dual operators preserve polynomials in x^2");
    match src.order {
        0 => poly.eval(&src.point),
        _ => poly.derivative().eval(&src.point),
    }
}

fn oracle_solve(op: &SkewElement, src: &Tableau, radius: i64) -> Result<Distribution, HcError> {
    // candidate canonical support: both orders at every point of the
    // shifted orbit window, with ±μ merged and T₁(0) dropped
    let mut unknowns: Vec<Tableau> = vec![];
    for d in -radius..=radius {
        let pt = &src.point + rat_int(d);
        for order in [0u8, 1u8] {
            if let Some((tab, _)) = Tableau::canonical(order, pt.clone()) {
                if !unknowns.contains(&tab) {
                    unknowns.push(tab);
                }
            }
        }
    }
    unknowns.sort();
    let k = unknowns.len();
    // Hermite system on p = x^{2m}, m = 0..k: the nodes μ² are distinct and
    // every derivative functional carries a nonzero factor 2μ, so the
    // confluent Vandermonde matrix is nonsingular.
    let mut aug: Vec<Vec<Rat>> = (0..k)
        .map(|m| {
            let mut row: Vec<Rat> = unknowns
                .iter()
                .map(|t| tableau_on_even_power(t, m))
                .collect();
            row.push(dual_value(op, src, m));
            row
        })
        .collect();
    let coeffs = gauss_solve(&mut aug);
    // consistency rows: the support hypothesis must explain 4 more moments
    for m in k..k + 4 {
        let lhs: Rat = unknowns
            .iter()
            .zip(&coeffs)
            .map(|(t, c)| c * tableau_on_even_power(t, m))
            .sum();
        if lhs != dual_value(op, src, m) {
            return Err(HcError::OracleInconsistent);
        }
    }
    let mut out = Distribution::zero();
    for (t, c) in unknowns.into_iter().zip(coeffs) {
        out.add_term(t.order, t.point, c);
    }
    Ok(out)
}

/// Exact Gaussian elimination on an augmented k×(k+1) system.
fn gauss_solve(aug: &mut [Vec<Rat>]) -> Vec<Rat> {
    let k = aug.len();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !aug[r][col].is_zero())
            .expect("interpolation matrix is nonsingular");
        aug.swap(col, pivot);
        let inv = Rat::one() / aug[col][col].clone();
        for entry in aug[col][col..].iter_mut() {
            *entry *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry -= &factor * p;
                }
            }
        }
    }
    (0..k).map(|r| aug[r][k].clone()).collect()
}
