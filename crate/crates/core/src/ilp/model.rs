use std::collections::BTreeSet;

use crate::linalg2::Subspace;

/// What a model variable stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// Indicator of one subspace.
    Subspace(Subspace),
    /// Indicator shared by all members of a group orbit; `members[0]` is the
    /// canonical representative.
    Orbit(Vec<Subspace>),
    /// Number of chosen codewords of the given dimension.
    DimCount(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub objective: i64,
    pub lower: i64,
    pub upper: i64,
}

impl Variable {
    /// Subspace and orbit indicators are binary; counters are general integers.
    pub fn is_binary(&self) -> bool {
        !matches!(self.kind, VarKind::DimCount(_))
    }

    /// Subspaces represented by the variable (empty for counters).
    pub fn subspaces(&self) -> &[Subspace] {
        match &self.kind {
            VarKind::Subspace(s) => std::slice::from_ref(s),
            VarKind::Orbit(m) => m,
            VarKind::DimCount(_) => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// (variable index, coefficient), sorted by variable index.
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelMeta {
    pub v: usize,
    pub d: usize,
    pub dims: BTreeSet<usize>,
    /// Order of the prescribed group, if the model was orbit-reduced.
    pub group_order: Option<usize>,
    /// True while the feasible set is invariant under all of GL(v,2).
    pub gl_invariant: bool,
    /// Names of the cut families added, in order.
    pub cuts: Vec<String>,
}

/// A maximization model with integer variables and linear rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IlpModel {
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective_offset: i64,
    pub meta: ModelMeta,
}

impl IlpModel {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn binary_count(&self) -> usize {
        self.vars.iter().filter(|v| v.is_binary()).count()
    }

    /// Number of constraints whose name starts with `prefix`.
    pub fn count_prefixed(&self, prefix: &str) -> usize {
        self.constraints.iter().filter(|c| c.name.starts_with(prefix)).count()
    }

    /// Objective value of an assignment, including the constant offset.
    pub fn objective_value(&self, x: &[i64]) -> i64 {
        self.objective_offset
            + self
                .vars
                .iter()
                .zip(x)
                .map(|(v, &xi)| v.objective * xi)
                .sum::<i64>()
    }

    /// Whether an assignment satisfies bounds and every row.
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        if x.len() != self.vars.len() {
            return false;
        }
        let bounds = self
            .vars
            .iter()
            .zip(x)
            .all(|(v, &xi)| v.lower <= xi && xi <= v.upper);
        bounds
            && self.constraints.iter().all(|c| {
                let lhs: i64 = c.terms.iter().map(|&(i, a)| a * x[i]).sum();
                match c.sense {
                    Sense::Le => lhs <= c.rhs,
                    Sense::Eq => lhs == c.rhs,
                    Sense::Ge => lhs >= c.rhs,
                }
            })
    }
}
