//! Variational optimization: the NFT coordinate optimizer and the
//! target-guided VQE loop built on it.

mod guided;
mod nft;

pub use guided::{
    compute_relative_error, guided_vqe, guided_vqe_with, Callback, GuidedVqeConfig, TracePoint,
    VqeResult, WarmStart,
};
pub use nft::{nft_minimize, sinusoid_step, NftOptions, NftResult, Objective};
