//! Exact symbolic computation in the type-D noncommutative Kleinian
//! singularity D(q) and its realization inside the skew group algebra
//! ℚ(x)#(ℤ⋊S₂).
//!
//! The layers, bottom up:
//!
//! - [`rat`], [`poly`], [`ratfun`]: exact big-rational scalars, dense
//!   univariate polynomials, and reduced rational functions.
//! - [`skew`]: the skew group algebra ℚ(x)#(ℤ⋊S₂) of shifts and the flip,
//!   with its action on ℚ(x) and bounded preservation checks.
//! - [`gwa`]: the generalized Weyl algebra T̃(s), its star anti-involution,
//!   the generator images attached to a parameter polynomial q, and the
//!   isomorphism ψ onto a skew subalgebra.
//! - [`dq`]: the presented algebra D(q) as free expressions, rewriting onto
//!   the PBW basis u^i v^j w^k (k ≤ 1), and the embedding φ.
//! - [`flag_order`]: nil-Hecke divided-difference operators and the named
//!   elements of the principal flag order, with identity suites.
//! - [`hc`]: Harish-Chandra theory on evaluation and derivative tableaux:
//!   closed-form structure constants, an independent interpolation oracle,
//!   and span reachability.
//! - [`graph`]: finite-window module graphs over an orbit, their edge
//!   labels, submodule closures, and DOT/JSON output.
//! - [`verify`]: the aggregated identity suites with exact pass/fail
//!   reports.
//!
//! Everything is exact; no floating point appears anywhere in the crate.

pub mod dq;
pub mod flag_order;
pub mod graph;
pub mod gwa;
pub mod hc;
pub mod poly;
pub mod rat;
pub mod ratfun;
pub mod skew;
pub mod verify;

pub use dq::{pbw_normal_form, DqParams, FreeExpression, Gen, NonTermination, PbwForm, Phi};
pub use graph::{module_graph, submodule_closures, ModuleGraph, OrbitClass};
pub use gwa::{beta, DegreeTooSmall, GwaElement, GwaParams, Psi};
pub use hc::{
    act_closed_form, ActGen, ActionContext, Distribution, HcError, Tableau,
};
pub use poly::Polynomial;
pub use rat::Rat;
pub use ratfun::RationalFunction;
pub use skew::{GroupElement, SkewElement};
pub use verify::{IdentityCheck, SuiteReport};
