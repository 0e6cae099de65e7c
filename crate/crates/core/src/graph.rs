//! Module-structure graphs over a finite window: vertices are canonical
//! tableaux on an orbit, edges are the nonzero action transitions, labels
//! follow the structure-constant conventions (q(r), q'(r), 1), and the
//! submodule closures are reachability closures under the stored edges.
//!
//! Edge presence is decided by the oracle through span membership, not by
//! the conventional label: a slot whose conventional label degenerates to
//! zero while the transition is still realized (for even q the apex label
//! q'(0) does this) is stored with the first nonzero witness coefficient
//! instead, and keeps its conventional string in the symbolic field.

use crate::dq::DqParams;
use crate::hc::{span_reaches, ActGen, ActionContext, Distribution, HcError, Tableau};
use crate::rat::{parse_rat, rat, rat_int, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    Generic,
    Integral,
    HalfIntegral,
}

impl OrbitClass {
    /// Class of the orbit through λ₀, decided by 2λ₀ mod 2.
    pub fn classify(lambda0: &Rat) -> OrbitClass {
        if lambda0.is_integer() {
            OrbitClass::Integral
        } else if (lambda0 * rat_int(2)).is_integer() {
            OrbitClass::HalfIntegral
        } else {
            OrbitClass::Generic
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitClass::Generic => "generic",
            OrbitClass::Integral => "integral",
            OrbitClass::HalfIntegral => "half_integral",
        }
    }

    fn parse(s: &str) -> Result<OrbitClass, String> {
        match s {
            "generic" => Ok(OrbitClass::Generic),
            "integral" => Ok(OrbitClass::Integral),
            "half_integral" => Ok(OrbitClass::HalfIntegral),
            other => Err(format!("unknown orbit class {other:?}")),
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Horizontal,
    Diagonal,
    Vertical,
    Back,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Horizontal => "horizontal",
            EdgeKind::Diagonal => "diagonal",
            EdgeKind::Vertical => "vertical",
            EdgeKind::Back => "back",
        }
    }

    fn parse(s: &str) -> Result<EdgeKind, String> {
        match s {
            "horizontal" => Ok(EdgeKind::Horizontal),
            "diagonal" => Ok(EdgeKind::Diagonal),
            "vertical" => Ok(EdgeKind::Vertical),
            "back" => Ok(EdgeKind::Back),
            other => Err(format!("unknown edge kind {other:?}")),
        }
    }
}

/// Conventional figure label of an edge slot.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LabelExpr {
    Q(Rat),
    QPrime(Rat),
    One,
}

impl LabelExpr {
    fn value(&self, params: &DqParams) -> Rat {
        match self {
            LabelExpr::Q(r) => params.q().eval(r),
            LabelExpr::QPrime(r) => params.q().derivative().eval(r),
            LabelExpr::One => rat_int(1),
        }
    }

    fn symbol(&self) -> String {
        match self {
            LabelExpr::Q(r) => format!("q({r})"),
            LabelExpr::QPrime(r) => format!("q'({r})"),
            LabelExpr::One => "1".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Stored coefficient: the conventional label when nonzero, otherwise
    /// the first nonzero witness coefficient proving the transition.
    pub label: Rat,
    pub kind: EdgeKind,
    /// Conventional figure string for this slot, e.g. "q(-1/2)".
    pub symbolic: String,
    /// Nonzero action coefficients landing on the target point, keyed
    /// "v.T0", "v.T1", "w.T0", "w.T1"; inspection data only.
    pub components: Vec<(String, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub vertices: Vec<usize>,
    /// True when the closure touches the window boundary: the genuine
    /// submodule continues as an infinite ray beyond the truncation.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleGraph {
    pub orbit_class: OrbitClass,
    pub lambda0: Rat,
    pub window: i64,
    pub vertices: Vec<Tableau>,
    pub edges: Vec<Edge>,
    pub boundary: Vec<usize>,
    pub closures: Vec<Closure>,
}

struct Slot {
    src: usize,
    dst: usize,
    expr: LabelExpr,
    kind: EdgeKind,
}

/// Smallest admissible window for (q, λ₀): beyond it every slot label is
/// guaranteed nonzero, so truncation hides no structure.
pub fn minimal_window(params: &DqParams, lambda0: &Rat) -> i64 {
    let mut bound = Rat::zero();
    let q = params.q();
    let roots = |p: &crate::poly::Polynomial| p.rational_roots().expect("q is nonzero");
    for r in roots(q).into_iter().chain(roots(&q.derivative())) {
        let a = r.abs();
        if a > bound {
            bound = a;
        }
    }
    let b = bound + lambda0.abs() + rat_int(2);
    b.floor().to_integer().to_i64().expect("window bound fits in i64") + 1
}

fn generic_vertices(lambda0: &Rat, n: i64, full: bool) -> (Vec<Tableau>, Vec<Slot>, Vec<usize>) {
    let count = (2 * n + 1) as usize;
    let xs: Vec<Rat> = (-n..=n).map(|k| lambda0 + rat_int(k)).collect();
    let mut vertices: Vec<Tableau> = xs.iter().map(|x| Tableau::t0(x.clone())).collect();
    if full {
        // λ₀ + k ≠ 0 on a generic orbit, so every derivative tableau exists
        vertices.extend(xs.iter().map(|x| Tableau::t1(x.clone()).unwrap()));
    }
    let t0 = |i: usize| i;
    let t1 = |i: usize| count + i;
    let mut slots = vec![];
    for i in 0..count - 1 {
        let fwd = xs[i].clone();
        let bwd = -&xs[i + 1];
        slots.push(Slot { src: t0(i), dst: t0(i + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t0(i + 1), dst: t0(i), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
        if full {
            slots.push(Slot { src: t1(i), dst: t1(i + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
            slots.push(Slot { src: t1(i + 1), dst: t1(i), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
            slots.push(Slot { src: t1(i), dst: t0(i + 1), expr: LabelExpr::QPrime(fwd), kind: EdgeKind::Diagonal });
            slots.push(Slot { src: t1(i + 1), dst: t0(i), expr: LabelExpr::QPrime(bwd), kind: EdgeKind::Diagonal });
        }
    }
    if full {
        for i in 0..count {
            slots.push(Slot { src: t1(i), dst: t0(i), expr: LabelExpr::One, kind: EdgeKind::Vertical });
        }
    }
    let mut boundary = vec![t0(0), t0(count - 1)];
    if full {
        boundary.extend([t1(0), t1(count - 1)]);
    }
    (vertices, slots, boundary)
}

fn integral_vertices(n: i64) -> (Vec<Tableau>, Vec<Slot>, Vec<usize>) {
    let n = n as usize;
    let mut vertices: Vec<Tableau> = (0..=n).map(|m| Tableau::t0(rat_int(m as i64))).collect();
    vertices.extend((1..=n).map(|m| Tableau::t1(rat_int(m as i64)).unwrap()));
    let t0 = |m: usize| m;
    let t1 = |m: usize| n + m; // T₁(m) sits at index n + m for m ≥ 1
    let mut slots = vec![
        Slot { src: t0(0), dst: t1(1), expr: LabelExpr::Q(rat_int(0)), kind: EdgeKind::Diagonal },
        Slot { src: t1(1), dst: t0(0), expr: LabelExpr::QPrime(rat_int(-1)), kind: EdgeKind::Diagonal },
        Slot { src: t0(0), dst: t0(1), expr: LabelExpr::QPrime(rat_int(0)), kind: EdgeKind::Horizontal },
        Slot { src: t0(1), dst: t0(0), expr: LabelExpr::Q(rat_int(-1)), kind: EdgeKind::Horizontal },
    ];
    for m in 1..n {
        let fwd = rat_int(m as i64);
        let bwd = rat_int(-(m as i64) - 1);
        slots.push(Slot { src: t0(m), dst: t0(m + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t0(m + 1), dst: t0(m), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(m), dst: t1(m + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(m + 1), dst: t1(m), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(m), dst: t0(m + 1), expr: LabelExpr::QPrime(fwd), kind: EdgeKind::Diagonal });
        slots.push(Slot { src: t1(m + 1), dst: t0(m), expr: LabelExpr::QPrime(bwd), kind: EdgeKind::Diagonal });
    }
    for m in 1..=n {
        slots.push(Slot { src: t1(m), dst: t0(m), expr: LabelExpr::One, kind: EdgeKind::Vertical });
    }
    let boundary = vec![t0(n), t1(n)];
    (vertices, slots, boundary)
}

fn half_integral_vertices(n: i64) -> (Vec<Tableau>, Vec<Slot>, Vec<usize>) {
    let n = n as usize;
    let point = |k: usize| rat(1, 2) + rat_int(k as i64);
    let mut vertices: Vec<Tableau> = (0..=n).map(|k| Tableau::t0(point(k))).collect();
    vertices.extend((0..=n).map(|k| Tableau::t1(point(k)).unwrap()));
    let t0 = |k: usize| k;
    let t1 = |k: usize| n + 1 + k;
    let mut slots = vec![Slot {
        src: t0(0),
        dst: t1(0),
        expr: LabelExpr::Q(rat(-1, 2)),
        kind: EdgeKind::Back,
    }];
    for k in 0..n {
        let fwd = point(k);
        let bwd = -point(k + 1);
        slots.push(Slot { src: t0(k), dst: t0(k + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t0(k + 1), dst: t0(k), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(k), dst: t1(k + 1), expr: LabelExpr::Q(fwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(k + 1), dst: t1(k), expr: LabelExpr::Q(bwd.clone()), kind: EdgeKind::Horizontal });
        slots.push(Slot { src: t1(k), dst: t0(k + 1), expr: LabelExpr::QPrime(fwd), kind: EdgeKind::Diagonal });
        slots.push(Slot { src: t1(k + 1), dst: t0(k), expr: LabelExpr::QPrime(bwd), kind: EdgeKind::Diagonal });
    }
    for k in 0..=n {
        slots.push(Slot { src: t1(k), dst: t0(k), expr: LabelExpr::One, kind: EdgeKind::Vertical });
    }
    let boundary = vec![t0(n), t1(n)];
    (vertices, slots, boundary)
}

fn shape(
    class: OrbitClass,
    lambda0: &Rat,
    n: i64,
    full: bool,
) -> (Vec<Tableau>, Vec<Slot>, Vec<usize>) {
    match class {
        OrbitClass::Generic => generic_vertices(lambda0, n, full),
        OrbitClass::Integral => integral_vertices(n),
        OrbitClass::HalfIntegral => half_integral_vertices(n),
    }
}

fn witness(dv: &Distribution, dw: &Distribution, dst: &Tableau) -> Rat {
    let t0 = Tableau::t0(dst.point().clone());
    let t1 = Tableau::t1(dst.point().clone());
    let mut candidates: Vec<Rat> = vec![];
    if dst.order() == 0 {
        candidates.push(dv.coeff(&t0));
        candidates.push(dw.coeff(&t0));
    }
    if let Some(t1) = t1 {
        candidates.push(dv.coeff(&t1));
        candidates.push(dw.coeff(&t1));
    }
    candidates
        .into_iter()
        .find(|c| !c.is_zero())
        .expect("a realized transition has a witness coefficient")
}

fn components(dv: &Distribution, dw: &Distribution, dst: &Tableau) -> Vec<(String, Rat)> {
    let t0 = Tableau::t0(dst.point().clone());
    let t1 = Tableau::t1(dst.point().clone());
    let mut out = vec![];
    let mut push = |name: &str, c: Rat| {
        if !c.is_zero() {
            out.push((name.to_string(), c));
        }
    };
    push("v.T0", dv.coeff(&t0));
    if let Some(ref t1) = t1 {
        push("v.T1", dv.coeff(t1));
    }
    push("w.T0", dw.coeff(&t0));
    if let Some(ref t1) = t1 {
        push("w.T1", dw.coeff(t1));
    }
    out
}

/// Build the module-structure graph of the orbit through λ₀ over the
/// window [−N, N] (generic) or [0, N] / [½, ½+N] (integral / half).
pub fn module_graph(
    params: &DqParams,
    lambda0: &Rat,
    window: i64,
    full: bool,
) -> Result<ModuleGraph, HcError> {
    let required = minimal_window(params, lambda0);
    if window < required {
        return Err(HcError::WindowTooSmall { required });
    }
    let class = OrbitClass::classify(lambda0);
    let (vertices, slots, boundary) = shape(class, lambda0, window, full);
    let mut ctx = ActionContext::new(params);
    let mut edges = vec![];
    for slot in &slots {
        let src_tab = &vertices[slot.src];
        let dst_tab = &vertices[slot.dst];
        let dv = ctx.oracle(ActGen::V, src_tab)?;
        let dw = ctx.oracle(ActGen::W, src_tab)?;
        let d_self = Distribution::singleton(src_tab.clone());
        if !span_reaches(&[&d_self, &dv, &dw], dst_tab) {
            continue;
        }
        let conventional = slot.expr.value(params);
        let label = if conventional.is_zero() {
            witness(&dv, &dw, dst_tab)
        } else {
            conventional
        };
        edges.push(Edge {
            src: slot.src,
            dst: slot.dst,
            label,
            kind: slot.kind,
            symbolic: slot.expr.symbol(),
            components: components(&dv, &dw, dst_tab),
        });
    }
    let mut graph = ModuleGraph {
        orbit_class: class,
        lambda0: lambda0.clone(),
        window,
        vertices,
        edges,
        boundary,
        closures: vec![],
    };
    graph.closures = submodule_closures(&graph);
    Ok(graph)
}

/// Distinct per-vertex reachability closures under the stored edges,
/// ordered by inclusion (subsets first), boundary-touching rays marked
/// as truncations.
pub fn submodule_closures(graph: &ModuleGraph) -> Vec<Closure> {
    let n = graph.vertices.len();
    let mut out_edges: Vec<Vec<usize>> = vec![vec![]; n];
    for e in &graph.edges {
        out_edges[e.src].push(e.dst);
    }
    let boundary: BTreeSet<usize> = graph.boundary.iter().copied().collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for start in 0..n {
        let mut closed = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if closed.insert(v) {
                stack.extend(out_edges[v].iter().copied());
            }
        }
        seen.insert(closed.into_iter().collect());
    }
    let mut sets: Vec<Vec<usize>> = seen.into_iter().collect();
    sets.sort_by_key(|s| (s.len(), s.clone()));
    sets.into_iter()
        .map(|vertices| {
            let truncated = vertices.iter().any(|v| boundary.contains(v));
            Closure { vertices, truncated }
        })
        .collect()
}

impl ModuleGraph {
    pub fn to_dot(&self, symbolic: bool) -> String {
        let mut s = String::from("digraph module_graph {\n  rankdir=LR;\n  node [shape=ellipse];\n");
        for order in [0u8, 1u8] {
            let row: Vec<String> = self
                .vertices
                .iter()
                .filter(|t| t.order() == order)
                .map(|t| format!("\"{t}\""))
                .collect();
            if !row.is_empty() {
                s.push_str(&format!("  {{ rank=same; {}; }}\n", row.join("; ")));
            }
        }
        for t in self.vertices.iter().filter(|t| t.order() == 1) {
            s.push_str(&format!("  \"{t}\" [style=dashed];\n"));
        }
        for e in &self.edges {
            let src = &self.vertices[e.src];
            let dst = &self.vertices[e.dst];
            let label = if symbolic {
                e.symbolic.clone()
            } else {
                e.label.to_string()
            };
            let style = if src.order() == 1 || dst.order() == 1 {
                ", style=dashed"
            } else {
                ""
            };
            s.push_str(&format!("  \"{src}\" -> \"{dst}\" [label=\"{label}\"{style}];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "orbit_class": self.orbit_class.as_str(),
            "lambda0": self.lambda0.to_string(),
            "window": self.window,
            "vertices": self.vertices.iter().map(|t| serde_json::json!({
                "order": t.order(),
                "point": t.point().to_string(),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "src": e.src,
                "dst": e.dst,
                "label": e.label.to_string(),
                "kind": e.kind.as_str(),
                "symbolic": e.symbolic,
                "components": e.components.iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.to_string())))
                    .collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
            "closures": self.closures.iter().map(|c| c.vertices.clone()).collect::<Vec<_>>(),
            "truncated": self.closures.iter().map(|c| c.truncated).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ModuleGraph, String> {
        let obj = v.as_object().ok_or("graph JSON must be an object")?;
        let field = |name: &str| obj.get(name).ok_or_else(|| format!("missing field {name:?}"));
        let str_of = |v: &serde_json::Value| {
            v.as_str().map(str::to_string).ok_or_else(|| "expected a string".to_string())
        };
        let rat_of = |v: &serde_json::Value| -> Result<Rat, String> {
            parse_rat(&str_of(v)?).map_err(|e| e.to_string())
        };
        let usize_of = |v: &serde_json::Value| -> Result<usize, String> {
            v.as_u64().map(|x| x as usize).ok_or_else(|| "expected an index".to_string())
        };
        let orbit_class = OrbitClass::parse(&str_of(field("orbit_class")?)?)?;
        let lambda0 = rat_of(field("lambda0")?)?;
        let window = field("window")?
            .as_i64()
            .ok_or("window must be an integer")?;
        let mut vertices = vec![];
        for vv in field("vertices")?.as_array().ok_or("vertices must be an array")? {
            let vo = vv.as_object().ok_or("vertex must be an object")?;
            let order = vo.get("order").and_then(|o| o.as_u64()).ok_or("bad order")? as u8;
            let point = rat_of(vo.get("point").ok_or("missing point")?)?;
            let (tab, _) = Tableau::canonical(order, point).ok_or("zero tableau in vertices")?;
            vertices.push(tab);
        }
        let mut edges = vec![];
        for ev in field("edges")?.as_array().ok_or("edges must be an array")? {
            let eo = ev.as_object().ok_or("edge must be an object")?;
            let mut comps = vec![];
            if let Some(cv) = eo.get("components") {
                for (k, val) in cv.as_object().ok_or("components must be an object")? {
                    comps.push((k.clone(), rat_of(val)?));
                }
            }
            edges.push(Edge {
                src: usize_of(eo.get("src").ok_or("missing src")?)?,
                dst: usize_of(eo.get("dst").ok_or("missing dst")?)?,
                label: rat_of(eo.get("label").ok_or("missing label")?)?,
                kind: EdgeKind::parse(&str_of(eo.get("kind").ok_or("missing kind")?)?)?,
                symbolic: str_of(eo.get("symbolic").ok_or("missing symbolic")?)?,
                components: comps,
            });
        }
        let closure_sets = field("closures")?.as_array().ok_or("closures must be an array")?;
        let truncated = field("truncated")?.as_array().ok_or("truncated must be an array")?;
        if closure_sets.len() != truncated.len() {
            return Err("closures and truncated disagree in length".to_string());
        }
        let mut closures = vec![];
        for (cs, tr) in closure_sets.iter().zip(truncated) {
            let vs = cs
                .as_array()
                .ok_or("closure must be an array")?
                .iter()
                .map(usize_of)
                .collect::<Result<Vec<_>, _>>()?;
            closures.push(Closure {
                vertices: vs,
                truncated: tr.as_bool().ok_or("truncated entries must be booleans")?,
            });
        }
        let mut graph = ModuleGraph {
            orbit_class,
            lambda0: lambda0.clone(),
            window,
            vertices,
            edges,
            boundary: vec![],
            closures,
        };
        let full = graph.vertices.iter().any(|t| t.order() == 1);
        let (_, _, boundary) = shape(orbit_class, &lambda0, window, full);
        graph.boundary = boundary;
        Ok(graph)
    }
}
