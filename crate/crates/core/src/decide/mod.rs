//! Deciding the registered logics.
//!
//! * [`search`] — bounded countermodel search over finite frames;
//! * [`mcs`] — `Φ`-maximal consistent sets, the relations `≺`, `≺_C`,
//!   `≺*_C` and the witness lemmas;
//! * [`canonical`] — the four canonical-model constructions, each audited;
//! * [`decide`] — the decision procedure combining them.

pub mod canonical;
pub mod mcs;
pub mod posets;
mod procedure;
pub mod search;

pub use canonical::{
    audit, canonical_gen_sequenced, canonical_gen_tagged, canonical_model, canonical_veltman_sequenced,
    canonical_veltman_tagged, CanonicalModel, CanonicalWorld, Construction,
};
pub use mcs::{
    enumerate_kl, prec, prec_c, prec_c_star, BoundedOracle, ClosureIndex, ExactLimits, ExactOracle, Filtered, Kl,
    MCSet, Oracle, OracleAnswer,
};
pub use procedure::{decide, fmp_bound, DecideError, FmpBound, Mode, Verdict, MAX_CLOSURE_BOXES};
pub use search::{bounded_refute, bounded_refute_with, SearchOptions, GEN_EXTRA_GENERATORS, MAX_SEARCH_WORLDS};

use crate::correspondence::FrameConditions;
use crate::genveltman::GenModel;
use crate::kernel::{FrameClass, Logic};
use crate::semantics::Skeleton;
use crate::syntax::Formula;
use crate::veltman::VeltmanModel;
use serde_json::json;

/// A finite model of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Countermodel {
    Veltman(VeltmanModel),
    Generalized(GenModel),
}

impl Countermodel {
    pub fn class(&self) -> FrameClass {
        match self {
            Countermodel::Veltman(_) => FrameClass::Veltman,
            Countermodel::Generalized(_) => FrameClass::Generalized,
        }
    }

    pub fn skeleton(&self) -> &Skeleton {
        match self {
            Countermodel::Veltman(m) => m.frame.skeleton(),
            Countermodel::Generalized(m) => m.frame.skeleton(),
        }
    }

    pub fn len(&self) -> usize {
        self.skeleton().len()
    }

    pub fn is_empty(&self) -> bool {
        self.skeleton().is_empty()
    }

    pub fn eval(&self, world: usize, f: &Formula) -> bool {
        match self {
            Countermodel::Veltman(m) => m.eval(world, f),
            Countermodel::Generalized(m) => m.eval(world, f),
        }
    }

    /// Whether the frame meets the conditions of every principle of the
    /// logic, read in the model's own class.
    pub fn is_frame_for(&self, logic: &Logic) -> bool {
        match self {
            Countermodel::Veltman(m) => m.frame.is_frame_for(logic),
            Countermodel::Generalized(m) => m.frame.is_frame_for(logic),
        }
    }

    /// The model in the JSON frame format of its class.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Countermodel::Veltman(m) => m.to_json(),
            Countermodel::Generalized(m) => m.to_json(),
        }
    }
}

/// A model together with a world where some formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub model: Countermodel,
    pub world: usize,
}

impl Refutation {
    pub fn world_name(&self) -> &str {
        self.model.skeleton().name(self.world)
    }

    /// Re-checks from scratch: the frame satisfies the logic's conditions
    /// and `a` is false at the world.
    pub fn verify(&self, logic: &Logic, a: &Formula) -> bool {
        self.model.is_frame_for(logic) && !self.model.eval(self.world, a)
    }

    /// `{"class": …, "model": …, "world": …}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "class": self.model.class().to_string(),
            "model": self.model.to_json(),
            "world": self.world_name(),
        })
    }
}
