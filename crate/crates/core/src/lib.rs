//! Toolkit for comparing word-vector representations built from text,
//! behavior, and brain data: similarity-structure analysis (RSA), nested
//! cross-validated linear probing of word norms (RCA), ensemble probing,
//! training of count- and similarity-based embeddings, and deterministic
//! SVG reporting.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod ensemble;
pub mod error;
pub mod kernels;
pub mod rca;
pub mod report;
pub mod rsa;
pub mod store;
pub mod train;
pub mod vocab;

pub use ensemble::{
    concatenate, ensemble_rca, paired_difference_report, BlockScaling, DiffReport, DiffRow,
    EnsembleSpec,
};
pub use error::{Error, Result};
pub use kernels::{
    classical_mds, logistic_fit, mcfadden_pseudo_r2, r2_score, rank_transform, ridge_fit,
    spearman, truncated_svd, wilcoxon_signed_rank, LinearModel, ModelKind, TestResult,
};
pub use rca::{
    aggregate_by_category, content_profile, default_alpha_grid, max_gap, probe_norm,
    profiles_to_csv, CategoryTable, ContentProfile, ProbeConfig, ProbeResult,
};
pub use report::{render_diff_table, render_mds, render_rca, render_rsa, RenderSpec};
pub use rsa::{
    mds_projection, pairwise_rsa, representational_similarity_matrix, rsa_correlation,
    same_type_neighbor_affinity, within_between_summary, Rsm, RsaMatrix,
};
pub use store::{
    load_embeddings, load_norm_manifest, load_norm_table, load_norm_tables, write_embeddings,
    DataType, EmbeddingFormat, ManifestEntry, NormKind, NormTable, NormValue, Representation,
};
pub use train::{
    aggregate_similarity, ppmi, ppmi_svd_embed, sg_softmax_gradient, sg_softmax_loss,
    sg_softmax_train, similarity_svd_embed, AggregatedSimilarity, CueResponseCounts,
    SgPairs, SgTrainOutcome, SimilarityJudgments,
};
pub use vocab::{
    build_base_vocabulary, common_vocabulary, coverage, subset_representation, FrequencyTable,
    VocabSet,
};
