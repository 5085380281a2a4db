//! Affine schedules: dependences, the Farkas causality cone, reuse-vector
//! compatibility, and a concrete multidimensional witness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use crate::geometry::constraint::{Constraint, ConstraintKind};
use crate::geometry::{fm, lp, project_cone, Cone, Polyhedron, Rat};
use crate::ir::{AffineMap, EquationSystem, Role};
use crate::oracle::{self, EvalError, Point};

/// Producer instances read by consumer instances: for every `x` in `domain`
/// (over iteration dims and the parameter), `consumer[consumer_map(x)]` reads
/// `producer[producer_map(x)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dependence {
    pub consumer: String,
    pub producer: String,
    pub domain: Polyhedron,
    pub consumer_map: AffineMap,
    pub producer_map: AffineMap,
}

impl Dependence {
    /// `v` when the relation is exactly `{(y, y - v)}`.
    pub fn uniform_vector(&self) -> Option<Vec<BigInt>> {
        let c = &self.consumer_map;
        let p = &self.producer_map;
        let n = self.domain.n_index;
        let identity = AffineMap::identity(n, self.domain.n_param);
        if c.matrix != identity.matrix || p.matrix != identity.matrix || c.param_matrix != p.param_matrix {
            return None;
        }
        Some(c.constant.iter().zip(&p.constant).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Dependence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.domain.n_index).map(|k| format!("x{}", k)).collect();
        let params = vec!["N".to_string()];
        write!(
            f,
            "{}[{}] <- {}[{}] : {}",
            self.consumer,
            self.consumer_map.display_outputs(&names, &params).join(", "),
            self.producer,
            self.producer_map.display_outputs(&names, &params).join(", "),
            self.domain.display_with(&[names.clone(), params].concat())
        )
    }
}

/// Dependences among non-input variables, from direct reads and reduction bodies.
pub fn extract_dependences(sys: &EquationSystem) -> Vec<Dependence> {
    extract_among(sys, &|_| true)
}

/// Dependences whose consumer and producer both satisfy `keep`.
fn extract_among(sys: &EquationSystem, keep: &dyn Fn(&str) -> bool) -> Vec<Dependence> {
    let mut out: Vec<Dependence> = Vec::new();
    let is_computed = |v: &str| keep(v) && sys.var(v).is_some_and(|d| d.role != Role::Input);
    for eq in sys.equations.iter().filter(|eq| keep(&eq.target)) {
        let n = eq.names.len();
        for case in &eq.cases {
            let region = sys.case_region(eq, case);
            let mut push = |d: Dependence| {
                if !d.domain.is_empty() && !out.contains(&d) {
                    out.push(d);
                }
            };
            for (var, access) in case.expr.direct_reads() {
                if is_computed(var) {
                    push(Dependence {
                        consumer: eq.target.clone(),
                        producer: var.to_string(),
                        domain: region.clone(),
                        consumer_map: AffineMap::identity(n, 1),
                        producer_map: access.clone(),
                    });
                }
            }
            for red in case.expr.reductions() {
                let dom = sys.effective_domain(red, &region);
                for (var, access) in red.body.direct_reads() {
                    if is_computed(var) {
                        push(Dependence {
                            consumer: eq.target.clone(),
                            producer: var.to_string(),
                            domain: dom.clone(),
                            consumer_map: red.projection.clone(),
                            producer_map: access.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The self-dependence `Y[y] <- Y[y - r]` over `D_Y ∩ (D_Y + r)`.
pub fn uniform_dependence(sys: &EquationSystem, var: &str, r: &[BigInt]) -> Option<Dependence> {
    let decl = sys.var(var)?;
    let dom = sys.with_context(&decl.domain);
    let domain = dom.intersect(&dom.translate(r));
    let n = decl.dims();
    let back: Vec<BigInt> = r.iter().map(|v| -v).collect();
    Some(Dependence {
        consumer: var.to_string(),
        producer: var.to_string(),
        domain,
        consumer_map: AffineMap::identity(n, 1),
        producer_map: AffineMap::identity(n, 1).shifted(&back),
    })
}

/// Position of one variable's coefficients `[θ..., η, κ]` in the global vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub var: String,
    pub dims: usize,
    pub offset: usize,
}

/// One block per computed variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub blocks: Vec<Block>,
    pub total: usize,
}

impl Layout {
    pub fn new(sys: &EquationSystem) -> Layout {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for v in sys.vars.iter().filter(|v| v.role != Role::Input) {
            blocks.push(Block { var: v.name.clone(), dims: v.dims(), offset });
            offset += v.dims() + 2;
        }
        Layout { blocks, total: offset }
    }

    pub fn block(&self, var: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.var == var)
    }

    /// Coordinates of the linear (index) part of `var`'s schedule.
    pub fn theta(&self, var: &str) -> Vec<usize> {
        self.block(var).map_or(Vec::new(), |b| (b.offset..b.offset + b.dims).collect())
    }
}

/// Rows of `ψ(x, N) = Θ_consumer(..) − Θ_producer(..)` as linear forms in the
/// global coefficient vector: one per iteration dim, one for `N`, one constant.
fn difference_forms(dep: &Dependence, layout: &Layout) -> Vec<Vec<BigInt>> {
    let nx = dep.domain.n_index;
    let mut rows = vec![vec![BigInt::zero(); layout.total]; nx + 2];
    for (var, map, sign) in [(&dep.consumer, &dep.consumer_map, 1i64), (&dep.producer, &dep.producer_map, -1i64)] {
        let b = layout.block(var).expect("computed variable");
        let s = BigInt::from(sign);
        for r in 0..b.dims {
            let col = b.offset + r;
            for t in 0..nx {
                rows[t][col] += &s * &map.matrix[r][t];
            }
            rows[nx][col] += &s * &map.param_matrix[r][0];
            rows[nx + 1][col] += &s * &map.constant[r];
        }
        rows[nx][b.offset + b.dims] += &s;
        rows[nx + 1][b.offset + b.dims + 1] += &s;
    }
    rows
}

/// Farkas conditions for `ψ ≥ slack` over the dependence domain, as
/// constraints over `[Θ (layout.total), λ (domain constraints)]`, placed at
/// `lambda_offset` within a space of `width` columns.
fn farkas(dep: &Dependence, layout: &Layout, slack: i64, lambda_offset: usize, width: usize) -> Vec<Constraint> {
    let forms = difference_forms(dep, layout);
    let cons = &dep.domain.constraints;
    let nx = dep.domain.n_index;
    let mut out = Vec::new();
    for (t, form) in forms.iter().enumerate() {
        let mut coeffs = vec![BigInt::zero(); width];
        coeffs[..layout.total].clone_from_slice(form);
        for (k, c) in cons.iter().enumerate() {
            let a = if t <= nx { &c.coeffs[t] } else { &c.constant };
            coeffs[lambda_offset + k] = -a;
        }
        // Constant row: ψ_0 − slack − Σλ b ≥ 0 (the remainder is λ_0 ≥ 0).
        let kind = if t <= nx { ConstraintKind::Equality } else { ConstraintKind::Inequality };
        let constant = if t <= nx { BigInt::zero() } else { BigInt::from(-slack) };
        out.push(Constraint::new(coeffs, constant, kind));
    }
    for (k, c) in cons.iter().enumerate() {
        if !c.is_equality() {
            let mut coeffs = vec![BigInt::zero(); width];
            coeffs[lambda_offset + k] = BigInt::one();
            out.push(Constraint::new(coeffs, BigInt::zero(), ConstraintKind::Inequality));
        }
    }
    out
}

/// Homogeneous constraints on Θ under which `ψ ≥ 0` on the whole dependence domain.
pub fn weak_constraints(dep: &Dependence, layout: &Layout) -> Vec<Constraint> {
    let k = dep.domain.constraints.len();
    let width = layout.total + k;
    let sys = farkas(dep, layout, 0, layout.total, width);
    let drop: Vec<usize> = (layout.total..width).collect();
    fm::eliminate_all(&sys, &drop)
        .into_iter()
        .map(|c| Constraint::new(c.coeffs[..layout.total].to_vec(), c.constant.clone(), c.kind))
        .filter(|c| !c.is_constant())
        .collect()
}

/// The cone of schedule rows that weakly respect every dependence.
pub fn causality_cone(deps: &[Dependence], layout: &Layout) -> Cone {
    let mut cons = Vec::new();
    for d in deps {
        cons.extend(weak_constraints(d, layout));
    }
    let cons = fm::prune(cons);
    Cone::new(layout.total, cons).canonical()
}

/// Projection onto the linear part of `var`'s schedule, with generators.
pub fn project_on_variable(cone: &Cone, layout: &Layout, var: &str) -> Cone {
    project_cone(cone, &layout.theta(var)).with_generators()
}

/// Some generator `g` with `g · r > 0`; lines count in both directions.
pub fn is_compatible(projected: &Cone, r: &[BigInt]) -> bool {
    compatible_generator(projected, r).is_some()
}

/// Index into [`legality_disjuncts`] order of the first generator certifying `r`.
pub fn compatible_generator(projected: &Cone, r: &[BigInt]) -> Option<usize> {
    if r.iter().all(Zero::is_zero) {
        return None;
    }
    let gens = projected.generators.clone().unwrap_or_else(|| crate::geometry::dual_generators(projected));
    gens.as_rays().iter().position(|g| g.iter().zip(r).map(|(a, b)| a * b).sum::<BigInt>().is_positive())
}

/// One disjunct `(gB)·ρ > 0` per generator `g`, returned as the row `gB`.
pub fn legality_disjuncts(projected: &Cone, b_linear: &[Vec<BigInt>], n_index: usize) -> Vec<Vec<BigInt>> {
    let gens = projected.generators.clone().unwrap_or_else(|| crate::geometry::dual_generators(projected));
    gens.as_rays()
        .iter()
        .map(|g| {
            (0..n_index)
                .map(|t| g.iter().zip(b_linear).map(|(gi, row)| gi * &row[t]).sum())
                .collect()
        })
        .collect()
}

/// Whether the row `theta` makes `ψ ≥ 1` over the whole dependence domain.
pub fn strictly_satisfies(dep: &Dependence, layout: &Layout, theta: &[BigInt]) -> bool {
    psi_min(dep, layout, theta).is_some_and(|m| m >= Rat::one())
}

/// Whether the row `theta` makes `ψ ≥ 0` over the whole dependence domain.
pub fn weakly_satisfies(dep: &Dependence, layout: &Layout, theta: &[BigInt]) -> bool {
    psi_min(dep, layout, theta).is_some_and(|m| !m.is_negative())
}

fn psi_min(dep: &Dependence, layout: &Layout, theta: &[BigInt]) -> Option<Rat> {
    let forms = difference_forms(dep, layout);
    let coeffs: Vec<BigInt> = forms[..forms.len() - 1]
        .iter()
        .map(|f| f.iter().zip(theta).map(|(a, b)| a * b).sum())
        .collect();
    let constant: BigInt = forms[forms.len() - 1].iter().zip(theta).map(|(a, b)| a * b).sum();
    let form = Constraint { coeffs, constant, kind: ConstraintKind::Inequality };
    match lp::inf_of(dep.domain.dim_total(), &dep.domain.constraints, &form) {
        None => None,
        Some(None) => Some(Rat::from_integer(BigInt::from(i64::MAX))),
        Some(Some(v)) => Some(v),
    }
}

/// Rows of a multidimensional schedule, per variable `[θ..., η, κ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub rows: BTreeMap<String, Vec<Vec<BigInt>>>,
}

impl Witness {
    fn from_global(layout: &Layout, global: &[Vec<BigInt>]) -> Witness {
        let mut rows = BTreeMap::new();
        for b in &layout.blocks {
            let r = global.iter().map(|g| g[b.offset..b.offset + b.dims + 2].to_vec()).collect();
            rows.insert(b.var.clone(), r);
        }
        Witness { rows }
    }

    /// Timestamp vector of `var[point]` at parameter `n`.
    pub fn timestamp(&self, var: &str, point: &[i64], n: i64) -> Vec<BigInt> {
        self.rows[var]
            .iter()
            .map(|row| {
                let d = point.len();
                let lin: BigInt = row[..d].iter().zip(point).map(|(a, &b)| a * BigInt::from(b)).sum();
                lin + &row[d] * BigInt::from(n) + &row[d + 1]
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("no schedule within {budget} rows; unsatisfied: {}", .unsatisfied.join("; "))]
    NoSchedule { budget: usize, unsatisfied: Vec<String> },
    #[error("{0}")]
    Cycle(EvalError),
    #[error("witness violates {dependence} at {}", oracle::fmt_point(.point))]
    Violated { dependence: String, point: Point },
}

/// Greedy multidimensional search: each row strictly satisfies every
/// remaining dependence that can be, while weakly respecting the rest.
pub fn find_schedule(deps: &[Dependence], layout: &Layout, budget: usize) -> Result<Witness, ScheduleError> {
    let mut remaining: Vec<&Dependence> = deps.iter().collect();
    let mut global: Vec<Vec<BigInt>> = Vec::new();
    while !remaining.is_empty() {
        if global.len() == budget {
            return Err(ScheduleError::NoSchedule {
                budget,
                unsatisfied: remaining.iter().map(|d| d.to_string()).collect(),
            });
        }
        let mut row = vec![BigInt::zero(); layout.total];
        let mut satisfied = vec![false; remaining.len()];
        for (e, _) in remaining.iter().enumerate() {
            if let Some(theta) = strong_row(&remaining, e, layout) {
                for (a, b) in row.iter_mut().zip(theta) {
                    *a += b;
                }
                satisfied[e] = true;
            }
        }
        if !satisfied.iter().any(|&s| s) {
            return Err(ScheduleError::NoSchedule {
                budget,
                unsatisfied: remaining.iter().map(|d| d.to_string()).collect(),
            });
        }
        global.push(row);
        remaining = remaining.into_iter().zip(satisfied).filter(|(_, s)| !s).map(|(d, _)| d).collect();
    }
    if global.is_empty() {
        global.push(vec![BigInt::zero(); layout.total]);
    }
    Ok(Witness::from_global(layout, &global))
}

/// Strongly connected components of the dependence graph, each tagged with
/// its rank: producers' components come strictly before their consumers'.
fn ranked_components(deps: &[Dependence], layout: &Layout) -> Vec<(usize, Vec<String>)> {
    let blocks = layout.blocks.iter().map(|b| b.var.as_str());
    let graph = read_graph(blocks.clone(), dep_edges(deps));
    // Tarjan emits producers' components before their consumers'.
    let mut rank: BTreeMap<&str, usize> = BTreeMap::new();
    for comp in tarjan_scc(&graph) {
        let r = comp
            .iter()
            .flat_map(|&v| graph.neighbors(v))
            .filter(|p| !comp.contains(p))
            .map(|p| rank[p] + 1)
            .max()
            .unwrap_or(0);
        rank.extend(comp.into_iter().map(|v| (v, r)));
    }
    let mut out: Vec<(usize, Vec<String>)> = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for b in blocks {
        if seen.contains(b) {
            continue;
        }
        let scc = scc_of(&graph, b);
        let members: Vec<String> =
            layout.blocks.iter().filter(|x| scc.contains(x.var.as_str())).map(|x| x.var.clone()).collect();
        seen.extend(scc);
        out.push((rank[b], members));
    }
    out
}

/// [`find_schedule`] per strongly connected component, behind one constant
/// row that orders the components. Dependences inside a component only touch
/// its own blocks, so the component schedules can share rows.
pub fn find_schedule_by_components(deps: &[Dependence], layout: &Layout) -> Result<Witness, ScheduleError> {
    let comps = ranked_components(deps, layout);
    let crossing = deps.iter().any(|d| {
        let c = comps.iter().position(|(_, m)| m.contains(&d.consumer));
        c != comps.iter().position(|(_, m)| m.contains(&d.producer))
    });
    let mut global: Vec<Vec<BigInt>> = Vec::new();
    if crossing {
        let mut row = vec![BigInt::zero(); layout.total];
        for (rank, members) in &comps {
            for m in members {
                let b = layout.block(m).expect("block");
                row[b.offset + b.dims + 1] = BigInt::from(*rank);
            }
        }
        global.push(row);
    }
    let lead = global.len();
    for (_, members) in &comps {
        let inner: Vec<Dependence> =
            deps.iter().filter(|d| members.contains(&d.consumer) && members.contains(&d.producer)).cloned().collect();
        if inner.is_empty() {
            continue;
        }
        let mut blocks = Vec::new();
        let mut offset = 0;
        for m in members {
            let b = layout.block(m).expect("block");
            blocks.push(Block { var: m.clone(), dims: b.dims, offset });
            offset += b.dims + 2;
        }
        let sub = Layout { blocks, total: offset };
        let w = find_schedule(&inner, &sub, row_budget(&inner, &sub))?;
        for m in members {
            let b = layout.block(m).expect("block");
            for (k, r) in w.rows[m].iter().enumerate() {
                if global.len() <= lead + k {
                    global.push(vec![BigInt::zero(); layout.total]);
                }
                global[lead + k][b.offset..b.offset + b.dims + 2].clone_from_slice(r);
            }
        }
    }
    if global.is_empty() {
        global.push(vec![BigInt::zero(); layout.total]);
    }
    Ok(Witness::from_global(layout, &global))
}

/// An integer row with `ψ_e ≥ 1` and `ψ ≥ 0` for every other remaining dependence.
fn strong_row(remaining: &[&Dependence], e: usize, layout: &Layout) -> Option<Vec<BigInt>> {
    let width = layout.total + remaining.iter().map(|d| d.domain.constraints.len()).sum::<usize>();
    let mut cons = Vec::new();
    let mut off = layout.total;
    for (k, d) in remaining.iter().enumerate() {
        cons.extend(farkas(d, layout, (k == e) as i64, off, width));
        off += d.domain.constraints.len();
    }
    let point = lp::feasible_point(width, &cons)?;
    let theta = &point[..layout.total];
    let mut lcm = BigInt::one();
    for v in theta {
        lcm = lcm.lcm(v.denom());
    }
    Some(theta.iter().map(|v| v.numer() * &lcm / v.denom()).collect())
}

/// Checks the witness on every dependence instance at parameter `n`.
pub fn verify_witness(deps: &[Dependence], witness: &Witness, n: i64) -> Result<(), ScheduleError> {
    for d in deps {
        let pts = d.domain.points(&[n]).map_err(|_| ScheduleError::NoSchedule {
            budget: 0,
            unsatisfied: vec![d.to_string()],
        })?;
        for x in pts {
            let c = witness.timestamp(&d.consumer, &d.consumer_map.apply(&x, &[n]), n);
            let p = witness.timestamp(&d.producer, &d.producer_map.apply(&x, &[n]), n);
            let diff = c.iter().zip(&p).map(|(a, b)| a - b).find(|v| !v.is_zero());
            if !diff.is_some_and(|v| v.is_positive()) {
                return Err(ScheduleError::Violated { dependence: d.to_string(), point: x });
            }
        }
    }
    Ok(())
}

/// Row budget: the largest variable or iteration dimension, plus one.
pub fn row_budget(deps: &[Dependence], layout: &Layout) -> usize {
    let vars = layout.blocks.iter().map(|b| b.dims).max().unwrap_or(0);
    let iters = deps.iter().map(|d| d.domain.n_index).max().unwrap_or(0);
    vars.max(iters) + 1
}

/// Parameter value at which witnesses are checked exhaustively.
pub const CHECK_N: i64 = 6;

/// A verified schedule for the whole system, or a diagnostic naming an
/// instance-level cycle when one exists at [`CHECK_N`].
pub fn schedule_witness(sys: &EquationSystem) -> Result<Witness, ScheduleError> {
    let deps: Vec<Dependence> = extract_dependences(sys).into_iter().map(|d| with_context(sys, d)).collect();
    let layout = Layout::new(sys);
    match find_schedule_by_components(&deps, &layout) {
        Ok(w) => {
            let n = CHECK_N.max(sys.param.min);
            verify_witness(&deps, &w, n)?;
            Ok(w)
        }
        Err(e) => Err(instance_cycle(sys).map(ScheduleError::Cycle).unwrap_or(e)),
    }
}

fn with_context(sys: &EquationSystem, mut d: Dependence) -> Dependence {
    d.domain = sys.with_context(&d.domain);
    d
}

/// The first instance-level cycle met by evaluating at [`CHECK_N`], if any.
pub fn instance_cycle(sys: &EquationSystem) -> Option<EvalError> {
    let n = CHECK_N.max(sys.param.min);
    let inputs = oracle::random_inputs(sys, n, 0).ok()?;
    match oracle::evaluate(sys, n, &inputs) {
        Err(e @ EvalError::Cycle(_)) => Some(e),
        _ => None,
    }
}

/// Dependences of `sys` plus `extra`, with the context applied.
pub fn context_dependences(sys: &EquationSystem, extra: &[Dependence]) -> Vec<Dependence> {
    extract_dependences(sys)
        .into_iter()
        .chain(extra.iter().cloned())
        .map(|d| with_context(sys, d))
        .filter(|d| !d.domain.is_empty())
        .collect()
}

/// `(consumer, producer)` per dependence.
fn dep_edges(deps: &[Dependence]) -> Vec<(&str, &str)> {
    deps.iter().map(|d| (d.consumer.as_str(), d.producer.as_str())).collect()
}

/// Read graph over `nodes`: an edge from each consumer to what it reads.
fn read_graph<'a>(
    nodes: impl IntoIterator<Item = &'a str>,
    edges: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> DiGraphMap<&'a str, ()> {
    let mut g = DiGraphMap::new();
    for v in nodes {
        g.add_node(v);
    }
    for (c, p) in edges {
        g.add_edge(c, p, ());
    }
    g
}

/// The strongly connected component holding `var`; empty if `var` is absent.
fn scc_of<'a>(graph: &DiGraphMap<&'a str, ()>, var: &str) -> BTreeSet<&'a str> {
    tarjan_scc(graph).into_iter().find(|c| c.contains(&var)).map(|c| c.into_iter().collect()).unwrap_or_default()
}

/// Dependences on a cycle through `var`: both endpoints lie in its strongly
/// connected component. Dependences between components can always be met by
/// an outer constant row ordering the components, so only these constrain
/// the self-reuse directions of `var`.
pub fn cyclic_dependences(deps: &[Dependence], var: &str) -> Vec<Dependence> {
    let scc = scc_of(&read_graph([], dep_edges(deps)), var);
    deps.iter()
        .filter(|d| scc.contains(d.consumer.as_str()) && scc.contains(d.producer.as_str()))
        .cloned()
        .collect()
}

/// Variables on a cycle through `var` in the read graph, `var` included;
/// empty when `var` lies on no cycle.
pub fn cyclic_variables(sys: &EquationSystem, var: &str) -> BTreeSet<String> {
    let mut edges: Vec<(&str, &str)> = Vec::new();
    for eq in &sys.equations {
        for case in &eq.cases {
            let mut reads = case.expr.direct_reads();
            for red in case.expr.reductions() {
                reads.extend(red.body.direct_reads());
            }
            edges.extend(reads.into_iter().map(|(v, _)| (eq.target.as_str(), v)));
        }
    }
    let graph = read_graph([], edges);
    let scc = scc_of(&graph, var);
    if scc.len() == 1 && !graph.contains_edge(var, var) {
        return BTreeSet::new();
    }
    scc.into_iter().map(str::to_string).collect()
}

/// [`cyclic_dependences`] of `var` with the context applied, extracting only
/// the equations of its strongly connected component.
pub fn cyclic_context_dependences(sys: &EquationSystem, var: &str) -> Vec<Dependence> {
    let scc = cyclic_variables(sys, var);
    if scc.is_empty() {
        return Vec::new();
    }
    let deps: Vec<Dependence> = extract_among(sys, &|v| scc.contains(v))
        .into_iter()
        .map(|d| with_context(sys, d))
        .filter(|d| !d.domain.is_empty())
        .collect();
    cyclic_dependences(&deps, var)
}
