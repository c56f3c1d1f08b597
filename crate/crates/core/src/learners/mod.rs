//! Learners over finite classes and the predictors they output.

mod erm;
mod posterior;
mod predictor;
mod sample;
mod single_bit;

pub(crate) use erm::set_bits;
pub use erm::{cover_learner, empirical_error, erm, mistakes};
pub(crate) use posterior::decision_threshold;
pub use posterior::{bayes_posterior_predict, posterior_expectation, posterior_over_index, predicts_one, PosteriorState};
pub use predictor::{consistent_memorizer, LearnerKind, Predictor};
pub use sample::LabeledSample;
pub use single_bit::{bayes_bit_predictor, predictor_error, JointTable, SingleBitBayes};
