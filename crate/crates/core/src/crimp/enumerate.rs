//! Exhaustive enumeration of crimps over a finite field.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::linalg::{echelon_shapes, gaussian_binomial, Subspace};
use crate::series::Valuation;

use super::engine::Ambient;
use super::{CrimpProblem, CrimpSubalgebra};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Which of the two defining conditions is imposed first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterOrder {
    #[default]
    SubalgebraFirst,
    BranchFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Maximum number of candidate subspaces.
    pub budget: u128,
    pub order: FilterOrder,
    /// Restrict to subspaces containing `t^δ O~`. Every R-lattice of
    /// colength δ contains it, so the result is unchanged.
    pub conductor_pruning: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: DEFAULT_BUDGET,
            order: FilterOrder::SubalgebraFirst,
            conductor_pruning: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrimpEnumeration {
    /// Sorted by basis matrix.
    pub crimps: Vec<CrimpSubalgebra>,
    /// Number of candidate subspaces walked.
    pub search_space: u128,
}

/// Every crimp of `problem`, in lexicographic order of echelon bases.
pub fn enumerate_crimps(problem: &CrimpProblem, options: EnumerationOptions) -> Result<CrimpEnumeration> {
    let Field::Prime(q) = problem.field() else {
        return Err(Error::InfiniteField("crimp enumeration needs a finite field"));
    };
    let ops = PrimeField::new(q);
    let ambient = problem.ambient(ops)?;
    let delta = problem.delta();
    let n = ambient.dim();

    let mut fixed = ambient.base_image();
    if options.conductor_pruning {
        fixed.extend(ambient.deep_monomials(delta));
    }
    let base = Subspace::spanned_by(&ops, n, fixed);
    let target = n - delta;
    if base.dim() > target {
        // t^δ O~ and R already exceed the allowed dimension: nothing to walk
        return Ok(CrimpEnumeration {
            crimps: Vec::new(),
            search_space: 0,
        });
    }
    let complement = base.non_pivots();
    let free_dim = target - base.dim();
    let search_space = gaussian_binomial(complement.len(), free_dim, q);
    if search_space > options.budget {
        return Err(Error::BudgetExceeded {
            search_space,
            budget: options.budget,
        });
    }

    let b = problem.b();
    let d = problem.degree();
    let shapes = echelon_shapes(complement.len(), free_dim);
    let mut crimps: Vec<CrimpSubalgebra> = shapes
        .par_iter()
        .flat_map_iter(|shape| {
            let mut found = Vec::new();
            shape.for_each_matrix(complement.len(), q, |rows| {
                let extra: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|r| {
                        let mut v = vec![0u64; n];
                        for (j, &x) in r.iter().enumerate() {
                            v[complement[j]] = x;
                        }
                        v
                    })
                    .collect();
                let mut s = base.clone();
                for v in &extra {
                    s.insert(&ops, v.clone());
                }
                if passes(&ambient, &s, &extra, b, options.order) {
                    debug_assert!(ambient.check(&s, delta).is_none());
                    found.push(CrimpSubalgebra::from_subspace(&ops, d, b, &s));
                }
                true
            });
            found
        })
        .collect();
    crimps.sort();
    crimps.dedup();
    Ok(CrimpEnumeration { crimps, search_space })
}

/// `s = base + span(extra)` where `base` is spanned by the image of R and
/// possibly by an ideal of O~; only products involving `extra` need checking.
fn is_closed(ambient: &Ambient<PrimeField>, s: &Subspace<u64>, extra: &[Vec<u64>]) -> bool {
    let ops = &ambient.ops;
    extra.iter().all(|v| s.contains(ops, &ambient.times_t(v)))
        && extra
            .iter()
            .enumerate()
            .all(|(i, x)| extra[i..].iter().all(|y| s.contains(ops, &ambient.product(x, y))))
}

fn has_branch(ambient: &Ambient<PrimeField>, s: &Subspace<u64>, b: usize) -> bool {
    ambient.lift_valuation(s) == Some(Valuation::Finite(b))
}

fn passes(ambient: &Ambient<PrimeField>, s: &Subspace<u64>, extra: &[Vec<u64>], b: usize, order: FilterOrder) -> bool {
    match order {
        FilterOrder::SubalgebraFirst => is_closed(ambient, s, extra) && has_branch(ambient, s, b),
        FilterOrder::BranchFirst => has_branch(ambient, s, b) && is_closed(ambient, s, extra),
    }
}
