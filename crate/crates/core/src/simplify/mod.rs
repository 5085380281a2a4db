//! Reduction simplification: recursive reuse exploitation over the thick
//! face lattice, with schedule-compatibility filtering of reuse vectors.

pub mod apply;
pub mod candidates;
pub mod region;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::geometry::{intersect_spaces, LinearSpace, Polyhedron};
use crate::ir::{reuse_space, validate, Equation, EquationSystem, Reduction, Role, ValidationError};
use crate::schedule::{self, ScheduleError};
use apply::{apply_reuse, Reject};
use candidates::{enumerate_sign_classes, facet_normals, has_invariant_boundary, label_facet, Direction};
use region::{dot, to_i64s};

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Disables the schedule-compatibility filter on reuse vectors.
    pub no_schedule_check: bool,
    /// Treats `*` as invertible (no operand is zero).
    pub assume_nonzero: bool,
    /// Test hook: the reuse vector to use for a variable's top-level reductions.
    pub forced: BTreeMap<String, Vec<BigInt>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelReport {
    pub constraint: String,
    pub boundary: bool,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedRho {
    pub rho: Vec<i64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub variable: String,
    pub case: usize,
    pub depth: usize,
    pub domain_degree: usize,
    pub share_dim: usize,
    pub classes: usize,
    pub rho: Option<Vec<i64>>,
    pub r: Option<Vec<i64>>,
    pub disjunct: Option<usize>,
    pub labels: Vec<LabelReport>,
    pub introduced: Vec<String>,
    pub rejected: Vec<RejectedRho>,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub target: String,
    pub operators: Vec<String>,
    pub original_degree: usize,
    pub final_degree: usize,
    pub bound: usize,
    pub bound_met: bool,
    pub rho_chain: Vec<Vec<i64>>,
    pub derived: Vec<String>,
    pub steps: Vec<StepReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcedRejection {
    pub variable: String,
    pub rho: Vec<i64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleReport {
    /// Generators of the causality cone projected on each variable's index coefficients.
    pub generators: BTreeMap<String, Vec<Vec<i64>>>,
    /// Rows `[θ..., η, κ]` of a verified schedule of the output system.
    pub witness: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub schedule_check: bool,
    pub equations: Vec<EquationReport>,
    pub forced_rho_rejected: Vec<ForcedRejection>,
    pub schedule: ScheduleReport,
    pub search_nodes: u64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub system: EquationSystem,
    pub report: Report,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SimplifyError {
    #[error("schedule witness failed: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("internal: transformed system is invalid: {0}")]
    Invalid(#[from] ValidationError),
}

/// Cost degree of one equation: the largest dimension of a case region or of
/// a reduction domain it enumerates.
pub fn equation_degree(sys: &EquationSystem, eq: &Equation) -> usize {
    let mut d = 0;
    for case in &eq.cases {
        let region = sys.case_region(eq, case);
        if region.is_empty() {
            continue;
        }
        d = d.max(region.dimension().unwrap_or(0));
        for red in case.expr.reductions() {
            let e = sys.effective_domain(red, &region);
            if !e.is_empty() {
                d = d.max(e.dimension().unwrap_or(0));
            }
        }
    }
    d
}

fn group_degree(sys: &EquationSystem, vars: &[String]) -> usize {
    vars.iter().filter_map(|v| sys.equation(v)).map(|e| equation_degree(sys, e)).max().unwrap_or(0)
}

/// Share space of a reduction over its effective domain.
pub fn reduction_share(red: &Reduction, e: &Polyhedron) -> LinearSpace {
    let n = red.names.len();
    let mut s = e.lineality().unwrap_or_else(|_| LinearSpace::zero(n));
    for (_, access) in red.body.direct_reads() {
        s = intersect_spaces(&s, &reuse_space(access));
    }
    s
}

/// `dimension(D) − dim(S)` per reduction case (the region dimension otherwise), maximized.
pub fn equation_bound(sys: &EquationSystem, eq: &Equation) -> usize {
    let mut b = 0;
    for case in &eq.cases {
        let region = sys.case_region(eq, case);
        if region.is_empty() {
            continue;
        }
        let reds = case.expr.reductions();
        let mut d = region.dimension().unwrap_or(0);
        for red in reds {
            let e = sys.effective_domain(red, &region);
            if !e.is_empty() {
                let share = reduction_share(red, &e);
                d = d.max(e.dimension().unwrap_or(0).saturating_sub(share.dim()));
            }
        }
        b = b.max(d);
    }
    b
}

/// Equations ordered so that producers come before consumers where possible.
pub fn dependence_order(sys: &EquationSystem) -> Vec<String> {
    let targets: Vec<&str> = sys.equations.iter().map(|e| e.target.as_str()).collect();
    let reads = |e: &Equation| -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &e.cases {
            for (v, _) in c.expr.direct_reads() {
                out.push(v.to_string());
            }
            for r in c.expr.reductions() {
                for (v, _) in r.body.direct_reads() {
                    out.push(v.to_string());
                }
            }
        }
        out.retain(|v| *v != e.target && targets.contains(&v.as_str()));
        out
    };
    let mut done: Vec<String> = Vec::new();
    let mut pending: Vec<&Equation> = sys.equations.iter().collect();
    while !pending.is_empty() {
        let pos = pending.iter().position(|e| reads(e).iter().all(|v| done.contains(v))).unwrap_or(0);
        done.push(pending.remove(pos).target.clone());
    }
    done
}

struct Search<'a> {
    opts: &'a Options,
    nodes: u64,
    forced_rejected: Vec<ForcedRejection>,
}

struct SiteResult {
    system: EquationSystem,
    steps: Vec<StepReport>,
    derived: Vec<String>,
}

impl Search<'_> {
    fn disjuncts(&self, sys: &EquationSystem, var: &str, red: &Reduction) -> Vec<Vec<BigInt>> {
        let b = &red.projection.matrix;
        let n = red.names.len();
        let deps = schedule::cyclic_context_dependences(sys, var);
        if self.opts.no_schedule_check || deps.is_empty() {
            // Any ρ with Bρ ≠ 0.
            return b.iter().flat_map(|row| [row.clone(), row.iter().map(|v| -v).collect()]).collect();
        }
        let layout = schedule::Layout::new(sys);
        let cone = schedule::causality_cone(&deps, &layout);
        let projected = schedule::project_on_variable(&cone, &layout, var);
        schedule::legality_disjuncts(&projected, b, n)
    }

    fn site(&mut self, sys: EquationSystem, var: &str, case_idx: usize, depth: usize) -> SiteResult {
        let eq = sys.equation(var).expect("site equation").clone();
        let case = &eq.cases[case_idx];
        let red = case.expr.reductions()[0].clone();
        let region = sys.case_region(&eq, case);
        let e = sys.effective_domain(&red, &region);
        let mut step = StepReport {
            variable: var.to_string(),
            case: case_idx,
            depth,
            domain_degree: e.dimension().unwrap_or(0),
            share_dim: 0,
            classes: 0,
            rho: None,
            r: None,
            disjunct: None,
            labels: Vec::new(),
            introduced: Vec::new(),
            rejected: Vec::new(),
            forced: false,
        };
        let unchanged = |sys: EquationSystem, step: StepReport| SiteResult { system: sys, steps: vec![step], derived: Vec::new() };
        if e.is_empty() {
            return unchanged(sys, step);
        }
        let share = reduction_share(&red, &e);
        step.share_dim = share.dim();
        let facets = facet_normals(&e);
        let b = red.projection.matrix.clone();
        let invertible = red.op.has_inverse(self.opts.assume_nonzero);
        let disjuncts = self.disjuncts(&sys, var, &red);
        let mut names = red.names.clone();
        names.push(sys.param.name.clone());
        let labels_for = |rho: &[BigInt]| -> Vec<LabelReport> {
            facets
                .iter()
                .map(|(k, c)| {
                    let l = label_facet(c, rho, &b);
                    LabelReport { constraint: e.constraints[*k].display_with(&names), boundary: l.boundary, direction: l.direction }
                })
                .collect()
        };

        let candidates: Vec<(Vec<BigInt>, Option<usize>)> = match self.opts.forced.get(var).filter(|_| depth == 0) {
            Some(rho) => {
                step.forced = true;
                let reason = if rho.len() != red.names.len() {
                    Some("rho has the wrong length")
                } else if !share.contains(rho) {
                    Some("rho is outside the share space")
                } else if region::is_zero_vec(&crate::geometry::space::mat_vec(&b, rho)) {
                    Some("projection of rho is zero")
                } else if !disjuncts.iter().any(|d| dot(d, rho) > BigInt::from(0)) {
                    Some("incompatible with every schedule of the system")
                } else {
                    None
                };
                if let Some(reason) = reason {
                    let rej = RejectedRho { rho: to_i64s(rho), reason: reason.to_string() };
                    self.forced_rejected.push(ForcedRejection {
                        variable: var.to_string(),
                        rho: rej.rho.clone(),
                        reason: rej.reason.clone(),
                    });
                    step.rejected.push(rej);
                    return unchanged(sys, step);
                }
                let di = disjuncts.iter().position(|d| dot(d, rho) > BigInt::from(0));
                vec![(rho.clone(), di)]
            }
            None => {
                let (classes, nodes) = enumerate_sign_classes(&share, &facets, &disjuncts, &b, invertible);
                self.nodes += nodes;
                step.classes = classes.len();
                let mut out = Vec::new();
                for c in classes {
                    if has_invariant_boundary(&facets, &c.rho, &b) {
                        step.rejected.push(RejectedRho { rho: to_i64s(&c.rho), reason: "invariant boundary facet".into() });
                    } else {
                        out.push((c.rho, Some(c.disjunct)));
                    }
                }
                out
            }
        };

        let mut best: Option<SiteResult> = None;
        // Only the exhaustive (non-invertible) search compares degrees.
        let mut best_degree = if invertible { 0 } else { group_degree(&sys, &[var.to_string()]) };
        for (rho, disjunct) in candidates {
            self.nodes += 1;
            let applied = match apply_reuse(&sys, var, case_idx, &rho, invertible) {
                Ok(a) => a,
                Err(rej) => {
                    step.rejected.push(RejectedRho { rho: to_i64s(&rho), reason: rej.reason().to_string() });
                    if rej == Reject::NeedsInverse && step.forced {
                        self.forced_rejected.push(ForcedRejection {
                            variable: var.to_string(),
                            rho: to_i64s(&rho),
                            reason: rej.reason().to_string(),
                        });
                    }
                    continue;
                }
            };
            let mut chosen = step.clone();
            chosen.rho = Some(to_i64s(&rho));
            chosen.r = Some(to_i64s(&applied.r));
            chosen.disjunct = if self.opts.no_schedule_check { None } else { disjunct };
            chosen.labels = labels_for(&rho);
            chosen.introduced = applied.introduced.clone();
            let mut result = SiteResult { system: applied.system, steps: vec![chosen], derived: applied.introduced.clone() };
            for rv in &applied.reductions {
                let sub = self.site(result.system, rv, 0, depth + 1);
                result.system = sub.system;
                result.steps.extend(sub.steps);
                result.derived.extend(sub.derived);
            }
            if invertible {
                return result;
            }
            let mut group = vec![var.to_string()];
            group.extend(result.derived.iter().cloned());
            let d = group_degree(&result.system, &group);
            if d < best_degree {
                best_degree = d;
                best = Some(result);
            }
        }
        match best {
            Some(b) => b,
            None => unchanged(sys, step),
        }
    }
}

fn rows_i64(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| to_i64s(r)).collect()
}

/// Simplifies every reduction of the system and certifies the result with a schedule.
pub fn simplify_system(sys: &EquationSystem, opts: &Options) -> Result<Outcome, SimplifyError> {
    let mut search = Search { opts, nodes: 0, forced_rejected: Vec::new() };
    let mut work = sys.clone();
    let mut reports = Vec::new();
    for target in dependence_order(sys) {
        let eq = sys.equation(&target).expect("ordered target").clone();
        // Later cases first: a rewrite splices cases and shifts the indices after it.
        let mut groups: Vec<(Vec<StepReport>, Vec<String>)> = Vec::new();
        let sites: Vec<usize> = (0..eq.cases.len()).filter(|&c| eq.cases[c].expr.reductions().len() == 1).collect();
        for &c in sites.iter().rev() {
            let r = search.site(work, &target, c, 0);
            work = r.system;
            groups.push((r.steps, r.derived));
        }
        groups.reverse();
        let steps: Vec<StepReport> = groups.iter().flat_map(|g| g.0.iter().cloned()).collect();
        let mut derived: Vec<String> = groups.into_iter().flat_map(|g| g.1).collect();
        derived.sort();
        let mut group = vec![target.clone()];
        group.extend(derived.iter().cloned());
        let original_degree = equation_degree(sys, &eq);
        let final_degree = group_degree(&work, &group);
        let bound = equation_bound(sys, &eq);
        let mut operators: Vec<String> = eq
            .cases
            .iter()
            .flat_map(|c| c.expr.reductions())
            .map(|r| r.op.name().to_string())
            .collect();
        operators.dedup();
        reports.push(EquationReport {
            target: target.clone(),
            operators,
            original_degree,
            final_degree,
            bound,
            bound_met: final_degree <= bound,
            rho_chain: steps.iter().filter_map(|s| s.rho.clone()).collect(),
            derived,
            steps,
        });
    }
    validate(&work)?;

    let mut generators = BTreeMap::new();
    if !opts.no_schedule_check {
        let deps = schedule::context_dependences(sys, &[]);
        let layout = schedule::Layout::new(sys);
        let cone = schedule::causality_cone(&deps, &layout);
        for v in sys.vars.iter().filter(|v| v.role != Role::Input) {
            let p = schedule::project_on_variable(&cone, &layout, &v.name);
            let g = p.generators.clone().unwrap_or_default();
            generators.insert(v.name.clone(), rows_i64(&g.as_rays()));
        }
    }
    let witness = schedule::schedule_witness(&work)?;
    let witness = witness.rows.iter().map(|(k, rows)| (k.clone(), rows_i64(rows))).collect();
    let report = Report {
        schema: 1,
        schedule_check: !opts.no_schedule_check,
        equations: reports,
        forced_rho_rejected: search.forced_rejected,
        schedule: ScheduleReport { generators, witness },
        search_nodes: search.nodes,
    };
    Ok(Outcome { system: work, report })
}
