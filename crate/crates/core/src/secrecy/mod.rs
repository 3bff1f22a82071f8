//! Classical secrecy monotones: multipartite conditional mutual information,
//! the `S_N` telescoping sum, their intrinsic (channel-minimized) versions,
//! and continuity envelopes.
//!
//! Channel searches cover deterministic channels exhaustively (output
//! alphabet at most `|E|`) plus an optional local refinement over stochastic
//! channels. Reported intrinsic values are therefore upper bounds on the
//! true infimum.

mod channel;
mod distribution;
mod measures;
mod search;

pub use channel::{apply_channel, ClassicalChannel};
pub use distribution::JointDistribution;
pub use measures::{
    continuity_envelope, continuity_g, permutations, s_n, s_n_ordered, s_n_symmetrized, shannon_cmi,
    shannon_cmi_unconditioned, sum_party_rest_mutual_information, ContinuityFlavor,
};
pub use search::{dual_intrinsic, intrinsic_information, ChannelSearch, SearchConfig};
