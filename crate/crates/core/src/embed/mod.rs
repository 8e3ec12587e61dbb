//! Label-regularised second-order proximity embedding.
//!
//! Every node owns a node vector `u`, an input-context vector `u'` and an
//! output-context vector `u''`. Anchor pairs can share all three. Training
//! ascends the sum of a cosine label objective over cross-network pairs and
//! a negative-sampling context objective over arcs, using sparse Adam.

mod adam;
mod export;
mod grad;
mod objective;
mod sampler;
mod store;
mod trainer;

pub use adam::{AdamConfig, AdamState};
pub use export::{write_embeddings, write_trace_csv};
pub use grad::GradAccumulator;
pub use objective::{context_objective_grad, cosine_objective_grad, label_objective_grad, log_sigmoid, sigmoid, ContextGrad, LabelGrad};
pub use sampler::{BatchSampler, ContextPair, LabelPair, NegativeSampling, SamplerConfig, TrainingBatch};
pub use store::{EmbeddingStore, Slot, Table};
pub use trainer::{batch_objective, derive_seed, train, Schedule, TraceRow, TrainConfig, TrainOutcome};
