//! Synthetic typological variants of English dependency treebanks, and a
//! small bidirectional recurrent classifier for verb-argument plurality
//! prediction over them.
//!
//! The pipeline: parse a CoNLL-U treebank ([`treebank`]), collect each verb's
//! subject/object heads and pluralities ([`arguments`]), rewrite clause order
//! ([`reorder`]), attach synthetic case/agreement suffixes ([`morph`]), and
//! emit prediction instances with attractor metadata ([`dataset`]). The
//! [`net`] module trains and evaluates the classifier; [`corpusgen`] produces
//! small synthetic treebanks so experiments run without licensed corpora.

pub mod arguments;
pub mod corpusgen;
pub mod dataset;
pub mod fixtures;
pub mod morph;
pub mod net;
pub mod pipeline;
pub mod reorder;
pub mod rng;
pub mod treebank;

pub use arguments::{ArgumentRecord, Plurality};
pub use dataset::{CorpusStats, PovStimSplit, PredictionInstance};
pub use morph::{CaseSystem, MarkingConfig};
pub use net::{Hyper, Metrics, ModelParams};
pub use reorder::CoreOrder;
pub use treebank::{SentenceTree, Token, Treebank};
