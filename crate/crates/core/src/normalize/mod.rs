//! Normal forms and the equality decision procedure.

pub mod aq;
pub mod c1;
pub mod forms;
pub mod scalar;

pub use c1::{c1_classes, c1_normalize, word_diagram, Branch, C1Gen, C1NormalForm};
pub use forms::{
    eliminate_internal, is_graph_like, simplify_pair, to_gs_lc, to_graph_like, to_rgs_lc, to_rgs_lc_traced, GsLc,
    PairOutcome, RGsLc,
};
pub use scalar::{scalar_normal_form, with_scalar, ScalarNf};
pub use crate::rules::zero_form;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::rules::TraceEntry;

/// Outcome of [`decide_equal`].
#[derive(Clone, Debug)]
pub struct Decision {
    pub equal: bool,
    pub reason: String,
    /// Rewrite traces of the two normalizations.
    pub trace: (Vec<TraceEntry>, Vec<TraceEntry>),
    /// Final forms (open diagrams).
    pub forms: Option<(RGsLc, RGsLc)>,
    /// Scalar normal forms (closed diagrams).
    pub scalars: Option<(ScalarNf, ScalarNf)>,
}

/// Decide `⟦a⟧ = ⟦b⟧` by normalizing both sides.
pub fn decide_equal(a: &Diagram, b: &Diagram) -> Result<Decision> {
    if a.p != b.p {
        return Err(Error::Modulus(a.p.get(), b.p.get()));
    }
    if a.arity() != b.arity() {
        return Err(Error::Shape(format!("types {:?} and {:?} differ", a.arity(), b.arity())));
    }
    let (ra, ta) = to_rgs_lc_traced(a)?;
    let (rb, tb) = to_rgs_lc_traced(b)?;
    let trace = (ta.trace, tb.trace);
    let verdict = |equal: bool, reason: &str, trace, forms, scalars| Decision {
        equal,
        reason: reason.to_string(),
        trace,
        forms,
        scalars,
    };
    if a.is_closed() {
        let sa = scalar_normal_form(&if ra.zero { crate::Cyclo::zero(a.p) } else { ra.scalar.clone() })?;
        let sb = scalar_normal_form(&if rb.zero { crate::Cyclo::zero(a.p) } else { rb.scalar.clone() })?;
        let eq = sa == sb;
        let why = if eq { "scalar normal forms agree" } else { "scalar normal forms differ" };
        return Ok(verdict(eq, why, trace, None, Some((sa, sb))));
    }
    if ra.zero || rb.zero {
        let eq = ra.zero && rb.zero;
        let why = if eq { "both sides are zero" } else { "exactly one side is zero" };
        return Ok(verdict(eq, why, trace, Some((ra, rb)), None));
    }
    match simplify_pair(&ra, &rb)? {
        PairOutcome::Irreconcilable { q } => {
            let why = format!("vertex {q} is marked on one side only and cannot be exchanged");
            Ok(verdict(false, &why, trace, Some((ra, rb)), None))
        }
        PairOutcome::Simplified(x, y) => {
            let why = if x.marked != y.marked {
                "marked vertices differ"
            } else if x.graph != y.graph {
                "edges differ"
            } else if x.phases != y.phases {
                "vertex phases differ"
            } else if x.scalar != y.scalar {
                "scalars differ"
            } else {
                "forms agree"
            };
            Ok(verdict(x.same_form(&y), why, trace, Some((x, y)), None))
        }
    }
}
