//! Line-recognizer training and evaluation toolkit for historical OCR.
//!
//! The crate covers the whole desk-scale pipeline:
//!
//! - [`corpus`]: PAGE XML ingestion, artificial page assembly, balanced
//!   selection and fold splitting, manifest I/O.
//! - [`textnorm`]: transcription normalization rules and codec construction.
//! - [`imgproc`]: grayscale conversion, Sauvola/Wolf/nlbin binarization,
//!   height normalization and degradation-style augmentation.
//! - [`synth`]: synthetic text-line rendering from built-in bitmap styles.
//! - [`net`]: the conv/pool/BLSTM/softmax recognizer with Adam and EMA
//!   shadow weights, plus the checkpoint file format.
//! - [`ctc`]: CTC loss with exact gradients, a brute-force oracle, and
//!   greedy decoding.
//! - [`vote`]: confidence averaging across fold-trained voters.
//! - [`train`]: training orchestration (early stopping, cross-fold voters,
//!   two-stage balanced training, checkpoint finetuning).
//! - [`eval`]: Levenshtein CER, edit alignments and confusion tables.
//!
//! Every source of randomness is keyed by an explicit seed; repeated runs
//! with the same inputs produce bit-identical results on one platform.

pub mod codec;
pub mod corpus;
pub mod ctc;
pub mod eval;
pub mod imgproc;
pub mod net;
pub mod raster;
pub mod rng;
pub mod synth;
pub mod textnorm;
pub mod train;
pub mod vote;

mod error;

pub use codec::Codec;
pub use error::{Error, Result};
pub use raster::Raster;

/// Toolkit version reported by the CLI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Checkpoint file format identifier (also the file magic).
pub const CHECKPOINT_FORMAT: &str = "LSHOCR1";
