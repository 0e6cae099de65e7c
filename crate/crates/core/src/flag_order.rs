//! Nil-Hecke operators of affine type A₁ acting on ℚ(x), and the named
//! generators of the principal flag order: exact skew elements, divided
//! differences, and the identity suites pinning down their relations.
//!
//! The flag order itself is represented only through these generators and
//! the verified identities; no membership test is attempted.

use crate::dq::{phi, FreeExpression, Gen};
use crate::gwa::{require_degree, DegreeTooSmall};
use crate::poly::Polynomial;
use crate::rat::{rat, rat_int};
use crate::ratfun::RationalFunction;
use crate::skew::{GroupElement, SkewElement};
use crate::verify::IdentityCheck;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementName {
    Tau,
    Delta,
    E,
    S0,
    S1,
    X,
    D,
    AImg,
    BImg,
    QS0,
}

impl ElementName {
    pub const ALL: [ElementName; 10] = [
        ElementName::Tau,
        ElementName::Delta,
        ElementName::E,
        ElementName::S0,
        ElementName::S1,
        ElementName::X,
        ElementName::D,
        ElementName::AImg,
        ElementName::BImg,
        ElementName::QS0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementName::Tau => "tau",
            ElementName::Delta => "delta",
            ElementName::E => "e",
            ElementName::S0 => "s0",
            ElementName::S1 => "s1",
            ElementName::X => "x",
            ElementName::D => "D",
            ElementName::AImg => "a_img",
            ElementName::BImg => "b_img",
            ElementName::QS0 => "q_s0",
        }
    }

    /// Whether the defining formula mentions q.
    pub fn depends_on_q(self) -> bool {
        matches!(
            self,
            ElementName::D | ElementName::AImg | ElementName::BImg | ElementName::QS0
        )
    }
}

impl fmt::Display for ElementName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl FromStr for ElementName {
    type Err = crate::rat::ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementName::ALL
            .into_iter()
            .find(|n| n.as_str() == s.trim())
            .ok_or_else(|| crate::rat::ParseError(format!("unknown element name {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedElement {
    pub name: ElementName,
    pub value: SkewElement,
}

fn over(num: Polynomial, den: &str) -> RationalFunction {
    RationalFunction::new(num, den.parse().unwrap()).unwrap()
}

fn delta_inv_tau() -> GroupElement {
    GroupElement::delta(-1).compose(GroupElement::tau())
}

/// Build a named generator; q is consulted only for the q-dependent names.
pub fn build(name: ElementName, q: &Polynomial) -> Result<NamedElement, DegreeTooSmall> {
    if name.depends_on_q() {
        require_degree(q)?;
    }
    let one = Polynomial::one();
    let value = match name {
        ElementName::Tau => SkewElement::tau(),
        ElementName::Delta => SkewElement::delta(1),
        ElementName::X => SkewElement::x(),
        ElementName::E => {
            // e = ½(1 + τ)
            &SkewElement::scalar(rat(1, 2)) + &SkewElement::tau().scale(&rat(1, 2))
        }
        ElementName::S1 => {
            // s₁ = (1/2x)(1 − τ)
            let f = over(one, "0,2");
            &SkewElement::from_function(f.clone())
                - &SkewElement::term(GroupElement::tau(), f)
        }
        ElementName::S0 => {
            // s₀ = (1/(2x+1))(1 − δ⁻¹τ)
            let f = over(one, "1/2,1").scale(&rat(1, 2));
            &SkewElement::from_function(f.clone()) - &SkewElement::term(delta_inv_tau(), f)
        }
        ElementName::D => {
            // D = (1/(½+x))(q(x)δ⁻¹ − q(−½)τ)
            let q_mh = q.eval(&rat(-1, 2));
            &SkewElement::term(GroupElement::delta(-1), over(q.clone(), "1/2,1"))
                - &SkewElement::term(
                    GroupElement::tau(),
                    over(Polynomial::constant(q_mh), "1/2,1"),
                )
        }
        ElementName::AImg => {
            let expr = &FreeExpression::gen(Gen::V).scale(&rat(-1, 2)) - &FreeExpression::gen(Gen::W);
            phi(&expr, q)?
        }
        ElementName::BImg => {
            let expr = -&(&FreeExpression::gen(Gen::V) + &FreeExpression::gen(Gen::W));
            phi(&expr, q)?
        }
        ElementName::QS0 => {
            let s0 = build(ElementName::S0, q)?.value;
            &SkewElement::from_poly(q.clone()) * &s0
        }
    };
    Ok(NamedElement { name, value })
}

/// Exact divided difference: i = 1 gives (p(x) − p(−x))/2x, i = 0 gives
/// (p(x) − p(−1−x))/(2x+1); both divisions are exact.
pub fn divided_difference(i: u8, p: &Polynomial) -> Polynomial {
    assert!(i <= 1, "i must be 0 or 1");
    if i == 1 {
        let num = p - &p.negate_var();
        num.exact_div(&"0,2".parse().unwrap()).unwrap()
    } else {
        let reflected = p.negate_var().shift(&rat_int(1));
        let num = p - &reflected;
        num.exact_div(&"1,2".parse().unwrap()).unwrap()
    }
}

fn zero_check(name: &str, residual: SkewElement) -> IdentityCheck {
    if residual.is_zero() {
        IdentityCheck::pass(name)
    } else {
        IdentityCheck::fail(name, residual.to_string())
    }
}

fn preservation_check(name: &str, element: &SkewElement, max_deg: usize) -> IdentityCheck {
    let report = element.preserves_polys(max_deg);
    if report.ok {
        IdentityCheck::pass(name)
    } else {
        let (deg, image) = report.witness.unwrap();
        IdentityCheck::fail(name, format!("x^{deg} maps to {image}"))
    }
}

/// The q-independent nil-Hecke identity suite.
pub fn nil_hecke_identities() -> Vec<IdentityCheck> {
    nil_hecke_identities_to_degree(40)
}

/// Same suite with the polynomial-preservation sweep bounded by max_deg.
pub fn nil_hecke_identities_to_degree(max_deg: usize) -> Vec<IdentityCheck> {
    let q = Polynomial::one(); // ignored by q-independent builds
    let e = build(ElementName::E, &q).unwrap().value;
    let s0 = build(ElementName::S0, &q).unwrap().value;
    let s1 = build(ElementName::S1, &q).unwrap().value;
    let x = SkewElement::x();
    let tau = SkewElement::tau();
    let one = SkewElement::one();
    let inv_x = SkewElement::from_function(over(Polynomial::one(), "0,1"));
    vec![
        zero_check(
            "e_plus_x_e_inv_x_is_one",
            &(&e + &(&(&x * &e) * &inv_x)) - &one,
        ),
        zero_check("s1_x_plus_x_s1_is_one", &(&(&s1 * &x) + &(&x * &s1)) - &one),
        zero_check("s1_x_minus_x_s1_is_tau", &(&(&s1 * &x) - &(&x * &s1)) - &tau),
        zero_check("s1_x_is_e", &(&s1 * &x) - &e),
        zero_check("e_s1_is_s1", &(&e * &s1) - &s1),
        zero_check("s0_squared_is_zero", &s0 * &s0),
        zero_check("s1_squared_is_zero", &s1 * &s1),
        // s0 and s1 generate the nil-Coxeter algebra of the infinite
        // dihedral group: beyond the squares there are no relations, and in
        // particular no braid relation. The two length-4 alternating words
        // are distinct basis elements, separated here by their divided
        // difference actions on x^7 (which evaluate to 6 and -6).
        alternating_word_check(&s0, &s1),
        preservation_check("s1_preserves_polynomials", &s1, max_deg),
    ]
}

fn alternating_word_check(s0: &SkewElement, s1: &SkewElement) -> IdentityCheck {
    let name = "alternating_words_satisfy_no_braid_relation";
    let s0101 = &(&(s0 * s1) * s0) * s1;
    let s1010 = &(&(s1 * s0) * s1) * s0;
    let x7 = RationalFunction::from_poly(Polynomial::monomial(7, rat_int(1)));
    let lhs = s0101.act(&x7);
    let rhs = s1010.act(&x7);
    let six = RationalFunction::from_poly(Polynomial::constant(rat_int(6)));
    if (&s0101 - &s1010).is_zero() {
        IdentityCheck::fail(name, "the two alternating words coincide")
    } else if lhs != six || rhs != -&six {
        IdentityCheck::fail(name, format!("actions on x^7: {lhs} and {rhs}"))
    } else {
        IdentityCheck::pass(name)
    }
}

/// The q-dependent flag-order identity suite.
pub fn flag_identities(q: &Polynomial) -> Result<Vec<IdentityCheck>, DegreeTooSmall> {
    flag_identities_to_degree(q, 40)
}

/// Same suite with the polynomial-preservation sweep bounded by max_deg.
pub fn flag_identities_to_degree(
    q: &Polynomial,
    max_deg: usize,
) -> Result<Vec<IdentityCheck>, DegreeTooSmall> {
    require_degree(q)?;
    let e = build(ElementName::E, q).unwrap().value;
    let s0 = build(ElementName::S0, q).unwrap().value;
    let s1 = build(ElementName::S1, q).unwrap().value;
    let d = build(ElementName::D, q).unwrap().value;
    let a = build(ElementName::AImg, q).unwrap().value;
    let b = build(ElementName::BImg, q).unwrap().value;
    let qs0 = build(ElementName::QS0, q).unwrap().value;
    let x2 = SkewElement::from_poly("0,0,1".parse().unwrap());
    let q_neg = q.negate_var();
    let q_delta_inv = SkewElement::term(GroupElement::delta(-1), RationalFunction::from_poly(q.clone()));
    let q_delta = SkewElement::term(GroupElement::delta(1), RationalFunction::from_poly(q_neg.clone()));

    let mut checks = vec![
        zero_check(
            "e_a_e_is_s1_q_deltainv_e",
            &(&(&e * &a) * &e) - &(&(&s1 * &q_delta_inv) * &e),
        ),
        zero_check("e_b_e_is_e_D_e", &(&(&e * &b) * &e) - &(&(&e * &d) * &e)),
        zero_check(
            "commutator_D_x2_is_2q_deltainv",
            &(&(&d * &x2) - &(&x2 * &d)) - &q_delta_inv.scale(&rat_int(2)),
        ),
        zero_check(
            "commutator_b_x2_is_q_delta_pair",
            &(&(&b * &x2) - &(&x2 * &b)) - &(&q_delta_inv + &q_delta),
        ),
        {
            // q(x)s₀ = −½Dτ − (q(−½) − q(x))/(2x+1)
            let q_mh = q.eval(&rat(-1, 2));
            let corr_num = &Polynomial::constant(q_mh) - q;
            let corr = SkewElement::from_function(over(corr_num, "1/2,1").scale(&rat(1, 2)));
            let rhs = &(&d * &SkewElement::tau()).scale(&rat(-1, 2)) - &corr;
            zero_check("q_s0_is_minus_half_D_tau_minus_correction", &qs0 - &rhs)
        },
        {
            // the four symmetrized summands recombine to q(x)δ⁻¹
            let x = SkewElement::x();
            let inv_x = SkewElement::from_function(over(Polynomial::one(), "0,1"));
            let half = rat(1, 2);
            let xp1: Polynomial = "1,1".parse().unwrap();
            let one_minus_x: Polynomial = "1,-1".parse().unwrap();
            let pair = |fwd: RationalFunction, bwd: RationalFunction| {
                (&SkewElement::term(GroupElement::delta(-1), fwd)
                    + &SkewElement::term(GroupElement::delta(1), bwd))
                    .scale(&half)
            };
            let g1 = pair(
                RationalFunction::from_poly(q.clone()),
                RationalFunction::from_poly(q_neg.clone()),
            );
            let g2 = pair(over(q.clone(), "0,1"), over(q_neg.clone(), "0,-1"));
            let g3 = pair(
                RationalFunction::from_poly(q * &xp1),
                RationalFunction::from_poly(&q_neg * &one_minus_x),
            );
            let g4 = pair(over(q * &xp1, "0,1"), over(&q_neg * &one_minus_x, "0,-1"));
            let s1_sum = &(&e * &g1) * &e;
            let s2_sum = &(&x * &(&e * &g2)) * &e;
            let s3_sum = &(&(&e * &g3) * &e) * &inv_x;
            let s4_sum = &(&(&x * &(&e * &g4)) * &e) * &inv_x;
            let total = &(&s1_sum + &s2_sum) + &(&s3_sum + &s4_sum);
            zero_check("four_summand_recombination_is_q_deltainv", &total - &q_delta_inv)
        },
        preservation_check("q_s0_preserves_polynomials", &qs0, max_deg),
    ];
    // operator/divided-difference agreement on a deterministic sample
    let mut agree = true;
    let mut residual = None;
    for k in 0..=8usize {
        let p = Polynomial::monomial(k, rat_int(1)) + Polynomial::constant(rat_int(3));
        let image1 = s1.act(&RationalFunction::from_poly(p.clone()));
        let image0 = s0.act(&RationalFunction::from_poly(p.clone()));
        let d1 = RationalFunction::from_poly(divided_difference(1, &p));
        let d0 = RationalFunction::from_poly(divided_difference(0, &p));
        if image1 != d1 || image0 != d0 {
            agree = false;
            residual = Some(format!("disagreement at x^{k}+3"));
            break;
        }
    }
    checks.push(match residual {
        None if agree => IdentityCheck::pass("operators_match_divided_differences"),
        _ => IdentityCheck::fail(
            "operators_match_divided_differences",
            residual.unwrap_or_default(),
        ),
    });
    Ok(checks)
}

/// Full report: the nil-Hecke suite followed by the flag-order suite.
pub fn verify_identities(q: &Polynomial) -> Result<Vec<IdentityCheck>, DegreeTooSmall> {
    verify_identities_to_degree(q, 40)
}

/// Full report with the preservation sweeps bounded by max_deg.
pub fn verify_identities_to_degree(
    q: &Polynomial,
    max_deg: usize,
) -> Result<Vec<IdentityCheck>, DegreeTooSmall> {
    let mut checks = nil_hecke_identities_to_degree(max_deg);
    checks.extend(flag_identities_to_degree(q, max_deg)?);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn named_builds_match_their_formulas() {
        let q = poly("0,0,0,0,1");
        let e = build(ElementName::E, &q).unwrap().value;
        let expected = &SkewElement::scalar(rat(1, 2)) + &SkewElement::tau().scale(&rat(1, 2));
        assert_eq!(e, expected);

        // D for q = t⁴: (1/(½+x))x⁴δ⁻¹ − (1/(½+x))(1/16)τ
        let d = build(ElementName::D, &q).unwrap().value;
        let expected = &SkewElement::term(GroupElement::delta(-1), over(poly("0,0,0,0,1"), "1/2,1"))
            - &SkewElement::term(GroupElement::tau(), over(poly("1/16"), "1/2,1"));
        assert_eq!(d, expected);

        // s₁ applied through the skew action is the divided difference
        let s1 = build(ElementName::S1, &q).unwrap().value;
        let p = poly("0,0,0,1");
        assert_eq!(
            s1.act(&RationalFunction::from_poly(p.clone())),
            RationalFunction::from_poly(divided_difference(1, &p))
        );
    }

    #[test]
    fn degree_gate_only_for_q_dependent_names() {
        let small = poly("0,1");
        assert!(build(ElementName::E, &small).is_ok());
        assert!(build(ElementName::S0, &small).is_ok());
        assert_eq!(
            build(ElementName::D, &small).unwrap_err(),
            DegreeTooSmall { found: Some(1) }
        );
        assert_eq!(
            build(ElementName::QS0, &small).unwrap_err(),
            DegreeTooSmall { found: Some(1) }
        );
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(divided_difference(1, &poly("0,0,0,1")), poly("0,0,1"));
        assert!(divided_difference(1, &poly("0,0,1")).is_zero());
        assert_eq!(divided_difference(0, &poly("0,0,1")), poly("-1"));
        // s₀ + s₁ difference on a generic cubic stays polynomial
        let p = poly("1,2,3,4");
        let d0 = divided_difference(0, &p);
        assert_eq!(d0.degree(), Some(2));
    }

    #[test]
    fn nil_hecke_suite_passes() {
        for check in nil_hecke_identities() {
            assert!(check.pass, "{} failed: {:?}", check.name, check.residual);
        }
    }

    #[test]
    fn flag_suite_passes_for_battery() {
        for q in ["0,0,0,0,1", "1,1,0,0,1", "4,0,-5,0,1"] {
            for check in flag_identities(&poly(q)).unwrap() {
                assert!(check.pass, "{} failed for q={q}: {:?}", check.name, check.residual);
            }
        }
    }

    #[test]
    fn element_names_round_trip() {
        for name in ElementName::ALL {
            let parsed: ElementName = name.as_str().parse().unwrap();
            assert_eq!(parsed, name);
        }
        assert!("bogus".parse::<ElementName>().is_err());
    }
}
