//! Exact verification of a four-ququart all-versus-nothing nonlocality proof.

pub mod catalogue;
pub mod error;
pub mod factory;
pub mod fixtures;
pub mod gauss;
pub mod lhv;
pub mod pauli;
pub mod postselect;
pub mod sample;
pub mod state;

pub use catalogue::Family;
pub use error::{DavnError, Result};
pub use gauss::{ArithmeticError, GaussScalar, PhaseExp};
pub use lhv::{Assignment, Constraint, DavnReport, ParadoxReport, Verdict};
pub use pauli::{BasisKet, PauliWord, QUDIT_LEVELS};
pub use postselect::{ConstraintRow, EigenRelation, PairSelection, ResidualState};
pub use state::{DensityMatrix, OutcomeTuple, StateVector};
