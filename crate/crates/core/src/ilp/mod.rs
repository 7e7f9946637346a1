//! Optimization models for A_2(v,d;T): construction, reduction, LP export
//! and an exact packing solver.

pub(crate) mod bits;
pub mod build;
pub mod cuts;
pub mod hyperplane;
pub mod km;
pub mod lp;
pub mod model;
pub mod relax;
mod search;
pub mod solve;

pub use build::build_base_model;
pub use cuts::{add_even_d_cuts, add_incidence_cuts, auto_incidence_set};
pub use hyperplane::{build_hyperplane_model, HyperplaneMode};
pub use km::reduce_kramer_mesner;
pub use lp::{export_lp, format_lp, parse_lp, read_lp};
pub use model::{Constraint, IlpModel, ModelMeta, Sense, VarKind, Variable};
pub use relax::relax;
pub use solve::{max_clique, solve_exact, SolveResult, SolveStatus};
