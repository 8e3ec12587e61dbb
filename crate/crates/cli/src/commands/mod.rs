pub mod align;
pub mod relabel;
pub mod synth;
