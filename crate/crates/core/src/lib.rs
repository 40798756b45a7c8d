//! Exact 2-domination and 2-independence on trees, the constructive family
//! of trees on which the two parameters agree, and a certificate-producing
//! recognizer for that family.

pub mod canon;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod graph6;
pub mod patterns;
pub mod recognize;
pub mod solvers;
pub mod tree;

pub use canon::canonical_code;
pub use construct::{apply_o, apply_r, random_member, Certificate, GenConfig, OpStep, RStep};
pub use enumerate::enumerate_free_trees;
pub use error::{ConstructError, Graph6Error, PatternError, RecognizeError, SolveError, TreeError};
pub use patterns::{find_pdi_embeddings, registry, Embedding, OpId, Pattern, PatternId, Role};
pub use recognize::{
    recognize, recognize_with, reduce_once, verify_certificate, CertificateFault, RecognizeOptions,
    Verdict,
};
pub use solvers::{alpha2, gamma2};
pub use tree::{boundary, Acyclic, Forest, RootedView, Tree, Vertex, VertexSet};
