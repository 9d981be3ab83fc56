use serde::Serialize;

use crate::bounds::BoundTable;
use crate::forcing::Mode;
use crate::graph::CanonicalForm;
use crate::mlist::MultiplicityList;

/// A bound on multiplicities, recorded with enough data to recompute both
/// sides. Indices are 1-based positions in the list; vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    /// Sum of the `r` largest parts is at most the radius-`r` power parameter.
    LargestParts {
        r: usize,
    },
    /// Sum of the `sum(radii)` largest parts is at most the sum of power parameters.
    Partition {
        radii: Vec<usize>,
    },
    /// Sum over `indices` is at most the PSD power parameter of radius `order`.
    EvenlyConsecutive {
        indices: Vec<usize>,
        order: usize,
    },
    /// Two multiplicities against the K2,3-restricted bound.
    K23 {
        positions: [usize; 2],
        x: [usize; 2],
        y: [usize; 3],
    },
    /// Every alternative of a certified case-split disjunction fails.
    Disjunction {
        radius: usize,
        split: Vec<(usize, usize)>,
        claims: Vec<(Pattern, usize)>,
    },
    NonCentre {
        index: usize,
    },
    Boundary {
        index: usize,
    },
    Centre {
        index: usize,
    },
    MirrorSum {
        indices: [usize; 2],
    },
    OddWalk {
        indices: Vec<usize>,
    },
    Bowtie {
        indices: Vec<usize>,
        vertices: [usize; 5],
    },
    Matching,
}

impl Constraint {
    pub fn rule_id(&self) -> &'static str {
        match self {
            Constraint::LargestParts { .. } => "largest-parts",
            Constraint::Partition { .. } => "partition",
            Constraint::EvenlyConsecutive { .. } => "evenly-consecutive",
            Constraint::K23 { .. } => "k23",
            Constraint::Disjunction { .. } => "disjunction",
            Constraint::NonCentre { .. } => "non-centre",
            Constraint::Boundary { .. } => "boundary",
            Constraint::Centre { .. } => "centre",
            Constraint::MirrorSum { .. } => "mirror-sum",
            Constraint::OddWalk { .. } => "odd-walk",
            Constraint::Bowtie { .. } => "bowtie",
            Constraint::Matching => "matching",
        }
    }
}

/// Alternative of a disjunction: a bound on the sum of any `t` parts, or on
/// any `t` consecutive parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pattern {
    AnyParts(usize),
    ConsecutiveParts(usize),
}

impl Pattern {
    /// The largest sum the pattern constrains, or `None` when the list has
    /// too few parts for the pattern to say anything.
    pub fn worst_sum(self, list: &MultiplicityList) -> Option<usize> {
        match self {
            Pattern::AnyParts(t) => (t >= 1 && t <= list.q()).then(|| list.largest_sum(t)),
            Pattern::ConsecutiveParts(t) => list.max_window_sum(t),
        }
    }

    pub fn violated(self, list: &MultiplicityList, bound: usize) -> bool {
        self.worst_sum(list).is_some_and(|s| s > bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub constraint: Constraint,
    pub lhs: usize,
    pub rhs: usize,
    /// Name of the parameter on the right-hand side.
    pub parameter: String,
    pub rhs_mode: Mode,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictStatus {
    Eliminated { certificate: Certificate },
    Surviving,
    KnownExceptionInfeasible { source: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintVerdict {
    pub list: MultiplicityList,
    pub status: VerdictStatus,
}

impl ConstraintVerdict {
    pub fn is_surviving(&self) -> bool {
        matches!(self.status, VerdictStatus::Surviving)
    }

    pub fn status_name(&self) -> &'static str {
        match self.status {
            VerdictStatus::Eliminated { .. } => "eliminated",
            VerdictStatus::Surviving => "surviving",
            VerdictStatus::KnownExceptionInfeasible { .. } => "exception",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.status {
            VerdictStatus::Eliminated { certificate } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub graph6: String,
    pub key: CanonicalForm,
    pub atlas_id: Option<u32>,
    pub params: BoundTable,
    pub verdicts: Vec<ConstraintVerdict>,
    /// Known-infeasibility note for lists that survive, if any.
    pub annotation: Option<String>,
}

impl FeasibilityReport {
    pub fn survivors(&self) -> Vec<&MultiplicityList> {
        self.verdicts
            .iter()
            .filter(|v| v.is_surviving())
            .map(|v| &v.list)
            .collect()
    }

    pub fn eliminated(&self) -> Vec<&ConstraintVerdict> {
        self.verdicts.iter().filter(|v| !v.is_surviving()).collect()
    }

    /// Fewest parts among surviving lists.
    pub fn q_lower_bound(&self) -> Option<usize> {
        self.survivors().iter().map(|l| l.q()).min()
    }
}
