//! Synthesis of verified contraction sequences.
//!
//! Every operation in this module emits a [`ContractionSequence`] that has
//! already been replayed by the independent verifier in [`crate::trigraph`]
//! before it is returned; a sequence that fails verification is a bug, never
//! a value.  On the negative side the top-level entry point returns an
//! explicit minor witness instead of a sequence.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::graph::{F3Name, GraphError};
use crate::minor::MinorModel;
use crate::trigraph::{ContractionSequence, Trigraph, TrigraphError, VerificationReport};

mod base;
mod drive;
mod ops;
mod recursion;
mod small;
mod theta;
mod twotree;

pub use base::{base_sequence, BaseSynthesis, BaseTarget};
pub use drive::synthesize;
pub use recursion::stronger_recursion;
pub use small::{girth_criterion, small_constructions, SmallConstruction};
pub use twotree::{complete_to_2tree, is_2tree, two_tree_sequence};
pub use ops::{
    cor_protection1, gadget_host, protection1, protection2, routine_k33, y_operation_reduce,
    GadgetRoles, Protection1Plan, PsiRoles,
};
pub use theta::{lemma_theta_reduce, EdgeParts, ThetaReduction};

/// Errors from sequence synthesis.
#[derive(Clone, Debug)]
pub enum SynthError {
    /// A stated precondition does not hold; the message names it.
    PreconditionViolated(&'static str),
    /// The input trigraph is not a subdivision of the claimed base.
    NotASubdivision,
    /// The input does not have the gadget structure the operation expects.
    StructureMismatch(&'static str),
    /// A color side-condition required by an operation fails.
    ColorPreconditionFailed,
    /// The given triangle family is not addable to the bag.
    NotAddable,
    /// `X` is not a member of the family / an edge of the bag.
    BadX,
    /// The graph handed to the 2-tree routine is not a 2-tree.
    NotA2Tree,
    /// A `K₄` minor rules out the requested width-2 completion.
    HasK4Minor(MinorModel),
    /// Invalid numeric parameter (grid/wall dimensions, lengths, ...).
    BadParameter,
    /// The underlying graph is not a subdivision of `K₄`.
    NotK4Subdivision,
    /// A synthesized sequence failed independent verification.  Always a
    /// bug in this module; surfaced instead of being silently accepted.
    VerificationFailed(VerificationReport),
    Trigraph(TrigraphError),
    Graph(GraphError),
    /// The minor engine could not finish (budget, invalid pattern).
    Minor(crate::minor::MinorError),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::PreconditionViolated(m) => write!(f, "precondition violated: {m}"),
            SynthError::NotASubdivision => write!(f, "not a subdivision of the claimed base"),
            SynthError::StructureMismatch(m) => write!(f, "structure mismatch: {m}"),
            SynthError::ColorPreconditionFailed => write!(f, "color side-condition failed"),
            SynthError::NotAddable => write!(f, "triangle family is not addable"),
            SynthError::BadX => write!(f, "invalid target set X"),
            SynthError::NotA2Tree => write!(f, "not a 2-tree"),
            SynthError::HasK4Minor(_) => write!(f, "input has a K4 minor"),
            SynthError::BadParameter => write!(f, "bad parameter"),
            SynthError::NotK4Subdivision => write!(f, "not a subdivision of K4"),
            SynthError::VerificationFailed(r) => {
                write!(f, "internal error: synthesized sequence failed verification")?;
                if let Some(i) = r.failing_step {
                    write!(f, " at step {i}")?;
                }
                Ok(())
            }
            SynthError::Trigraph(e) => write!(f, "{e}"),
            SynthError::Graph(e) => write!(f, "{e}"),
            SynthError::Minor(e) => write!(f, "{e}"),
        }
    }
}

impl From<crate::minor::MinorError> for SynthError {
    fn from(e: crate::minor::MinorError) -> Self {
        SynthError::Minor(e)
    }
}

impl From<TrigraphError> for SynthError {
    fn from(e: TrigraphError) -> Self {
        SynthError::Trigraph(e)
    }
}

impl From<GraphError> for SynthError {
    fn from(e: GraphError) -> Self {
        SynthError::Graph(e)
    }
}

/// Which minor the negative side of the dichotomy produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ObstructionKind {
    /// One of the six width-3 obstructions.
    F3(F3Name),
    /// `K₄` (width-2 obstruction).
    K4,
    /// The claw (width-1 obstruction at girth ≥ 5).
    K13,
    /// A loop, i.e. the base has a cycle (width-1 obstruction).
    C1,
    /// A single edge (width-0 obstruction).
    K2,
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstructionKind::F3(n) => write!(f, "{n:?}"),
            ObstructionKind::K4 => write!(f, "K4"),
            ObstructionKind::K13 => write!(f, "K1,3"),
            ObstructionKind::C1 => write!(f, "C1"),
            ObstructionKind::K2 => write!(f, "K2"),
        }
    }
}

/// Outcome of the top-level dichotomy: a verified sequence or a minor
/// witness in the base graph, never both.
#[derive(Clone, Debug)]
pub enum SynthesisResult {
    Sequence {
        seq: ContractionSequence,
        report: VerificationReport,
    },
    Obstruction {
        kind: ObstructionKind,
        model: MinorModel,
    },
}

impl SynthesisResult {
    pub fn sequence(&self) -> Option<&ContractionSequence> {
        match self {
            SynthesisResult::Sequence { seq, .. } => Some(seq),
            SynthesisResult::Obstruction { .. } => None,
        }
    }

    pub fn obstruction(&self) -> Option<ObstructionKind> {
        match self {
            SynthesisResult::Sequence { .. } => None,
            SynthesisResult::Obstruction { kind, .. } => Some(*kind),
        }
    }
}

/// Replay `seq` on `start` at width `d` and demand success; used by every
/// generator before returning a sequence.
pub(crate) fn demand_verified(
    start: &Trigraph,
    seq: &ContractionSequence,
    d: usize,
    partial: bool,
) -> Result<VerificationReport, SynthError> {
    let report = crate::trigraph::verify_sequence(start, seq, d, partial)?;
    if !report.ok {
        return Err(SynthError::VerificationFailed(report));
    }
    Ok(report)
}

/// Replay a sequence without any degree bound and return the final trigraph.
pub(crate) fn replay(start: &Trigraph, seq: &ContractionSequence) -> Result<Trigraph, SynthError> {
    let mut cur = start.clone();
    for step in &seq.steps {
        cur = cur.contract(step.u, step.v, step.target)?;
    }
    Ok(cur)
}

/// The union of the two vertex sets named by the steps of a sequence.
#[allow(dead_code)]
pub(crate) fn touched_vertices(seq: &ContractionSequence) -> BTreeSet<crate::VertexId> {
    let mut out = BTreeSet::new();
    for s in &seq.steps {
        out.insert(s.u);
        out.insert(s.v);
    }
    out
}
