//! The decision procedure.
//!
//! Practical mode searches frames up to a number of worlds and can only
//! refute. Exact mode computes the maximal consistent sets of the
//! adequate closure of the formula: if none contains its negation it is a
//! theorem; otherwise a countermodel is found by a short search or read
//! off the audited canonical model.

use super::canonical::{canonical_model, Construction};
use super::mcs::{check_budget, ClosureIndex, ExactLimits, Kl};
use super::{bounded_refute, Refutation};
use crate::kernel::Logic;
use crate::syntax::{adequate_closure, closure_box_count, predicted_rhd_operands, Formula};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("the sets come from different adequate sets")]
    ContextMismatch,
    #[error("{0} is not a ▷-operand of the adequate set")]
    NotAnOperand(String),
    #[error("{0} is not in the adequate set")]
    NotInClosure(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no witness: {0}")]
    WitnessNotFound(String),
    #[error("{0} is proved: no maximal consistent set contains its negation")]
    Proved(String),
    #[error("{construction} does not apply to {logic}")]
    Unsupported { logic: String, construction: String },
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("exact mode is infeasible: {reason}{}", .bound.as_ref().map(|b| format!("; model bound {b}")).unwrap_or_default())]
    Infeasible { reason: String, bound: Option<FmpBound> },
    #[error("world budget must be between 1 and {}, not {0}", super::MAX_SEARCH_WORLDS)]
    BadBudget(usize),
}

/// The size bound the canonical construction gives for a countermodel:
/// `2^|Φ|·|Φ▷|` worlds for the tagged constructions, `2^|Φ|·Σ_{j≤b} |Φ▷|^j`
/// for the sequenced ones, with `b` the number of boxes in `Φ` (which
/// bounds ranks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmpBound {
    pub construction: Construction,
    /// `|Φ|`, or a lower bound on it when the closure was too large to
    /// build.
    pub closure_size: u128,
    pub exact_size: bool,
    pub operands: usize,
    pub boxes: u128,
}

impl FmpBound {
    /// `log₂` of the bound.
    pub fn log2_worlds(&self) -> f64 {
        let k = self.operands as f64;
        let tags = if self.construction.uses_sequences() {
            // Σ_{j≤b} k^j ≤ (b + 1)·k^b
            (self.boxes as f64 + 1.0).log2() + self.boxes as f64 * k.log2()
        } else {
            k.log2()
        };
        self.closure_size as f64 + tags
    }

    /// The bound itself when it fits.
    pub fn worlds(&self) -> Option<u128> {
        let sets = 1u128.checked_shl(u32::try_from(self.closure_size).ok()?).filter(|&s| s != 0)?;
        let k = self.operands as u128;
        let tags = if self.construction.uses_sequences() {
            let mut sum = 0u128;
            let mut term = 1u128;
            for _ in 0..=self.boxes {
                sum = sum.checked_add(term)?;
                term = term.checked_mul(k)?;
            }
            sum
        } else {
            k
        };
        sets.checked_mul(tags)
    }
}

impl fmt::Display for FmpBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at_least = if self.exact_size { "" } else { "≥" };
        if self.construction.uses_sequences() {
            write!(
                f,
                "{}: 2^{at_least}{}·Σ_{{j≤{}}} {}^j",
                self.construction, self.closure_size, self.boxes, self.operands
            )?;
        } else {
            write!(f, "{}: 2^{at_least}{}·{}", self.construction, self.closure_size, self.operands)?;
        }
        match self.worlds() {
            Some(w) if self.exact_size => write!(f, " = {w} worlds"),
            _ => write!(f, " ≈ 2^{:.1} worlds", self.log2_worlds()),
        }
    }
}

/// Most box-disjunctions the closure may need before exact mode gives up
/// without building it.
pub const MAX_CLOSURE_BOXES: u128 = 4096;

/// The bound for `a` in `logic`, computing the closure only when it is
/// small enough to build.
pub fn fmp_bound(logic: &Logic, a: &Formula) -> FmpBound {
    let construction = Construction::for_logic(logic);
    let ops = predicted_rhd_operands(std::slice::from_ref(a)).len();
    let added = closure_box_count(ops);
    if added > MAX_CLOSURE_BOXES {
        return FmpBound { construction, closure_size: added, exact_size: false, operands: ops, boxes: added };
    }
    bound_of(construction, &adequate_closure(std::slice::from_ref(a)))
}

fn bound_of(construction: Construction, ctx: &crate::syntax::AdequateContext) -> FmpBound {
    let boxes = ctx.formulas().iter().filter(|f| matches!(f, Formula::Box(_))).count();
    FmpBound {
        construction,
        closure_size: ctx.len() as u128,
        exact_size: true,
        operands: ctx.rhd_operands().len(),
        boxes: boxes as u128,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Countermodel search up to the given number of worlds.
    Practical(usize),
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Practical(n) => write!(f, "practical:{n}"),
            Mode::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    /// `exact` or `practical:<n>`.
    fn from_str(s: &str) -> Result<Mode, String> {
        if s == "exact" {
            return Ok(Mode::Exact);
        }
        s.strip_prefix("practical:")
            .and_then(|n| n.parse().ok())
            .map(Mode::Practical)
            .ok_or_else(|| format!("expected `exact` or `practical:<n>`, got `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Theorem,
    NonTheorem(Box<Refutation>),
    Unknown,
}

/// Worlds tried by the search exact mode runs before falling back on the
/// canonical model.
const EXACT_SEARCH_WORLDS: usize = 3;

/// Worlds tried when the closure is too large for the exact computation.
const FALLBACK_SEARCH_WORLDS: usize = 4;

/// Decides `⊢_L a`.
///
/// Practical mode never answers `Theorem`. Exact mode answers `Theorem`
/// or `NonTheorem`, or fails with `Infeasible` (reporting the model bound)
/// when the closure, the candidate sets or the canonical model exceed the
/// built-in limits and a search up to four worlds finds no countermodel.
pub fn decide(logic: &Logic, a: &Formula, mode: Mode) -> Result<Verdict, DecideError> {
    match mode {
        Mode::Practical(n) => {
            check_budget(n)?;
            Ok(match bounded_refute(logic, a, n) {
                Some(r) => Verdict::NonTheorem(Box::new(r)),
                None => Verdict::Unknown,
            })
        }
        Mode::Exact => decide_exact(logic, a),
    }
}

fn decide_exact(logic: &Logic, a: &Formula) -> Result<Verdict, DecideError> {
    let bound = fmp_bound(logic, a);
    let with_bound = |e: DecideError| match e {
        DecideError::Infeasible { reason, .. } => DecideError::Infeasible { reason, bound: Some(bound.clone()) },
        e => e,
    };
    // A verified countermodel settles the question whatever the size of
    // the closure.
    let search_instead = |e: DecideError| match bounded_refute(logic, a, FALLBACK_SEARCH_WORLDS) {
        Some(r) => Ok(Verdict::NonTheorem(Box::new(r))),
        None => Err(with_bound(e)),
    };
    if !bound.exact_size {
        let reason = format!("the adequate closure adds {} box formulas", bound.closure_size);
        return search_instead(DecideError::Infeasible { reason, bound: None });
    }
    let index = ClosureIndex::new(adequate_closure(std::slice::from_ref(a)));
    let candidates = match index.candidates(logic, ExactLimits::default()) {
        Ok(c) => c,
        Err(e) => return search_instead(e),
    };
    let survivors: Vec<_> = index.fixpoint(logic, &candidates).into_iter().map(|i| candidates[i].clone()).collect();
    let na = index.neg(index.ctx().index_of(a).expect("the closure contains its seed"));
    if survivors.iter().all(|s| !s.contains(na)) {
        return Ok(Verdict::Theorem);
    }
    if let Some(r) = bounded_refute(logic, a, EXACT_SEARCH_WORLDS) {
        return Ok(Verdict::NonTheorem(Box::new(r)));
    }
    let kl = Kl::new(logic.clone(), index, survivors, Vec::new());
    let m = match canonical_model(&kl, a) {
        Ok(m) => m,
        Err(e @ DecideError::Infeasible { .. }) => return search_instead(e),
        Err(e) => return Err(e),
    };
    let r = Refutation { model: m.model, world: m.root };
    debug_assert!(r.verify(logic, a));
    Ok(Verdict::NonTheorem(Box::new(r)))
}
