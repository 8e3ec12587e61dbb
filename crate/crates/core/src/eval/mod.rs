//! Ranking held-out pairs and scoring the result.

mod precision;
mod ranking;
mod report;
mod rsa;

pub use precision::{precision_at_n, precision_curve};
pub use ranking::{candidate_pool, rank_by_score, rank_candidates, AlignmentRanking, Direction};
pub use report::{write_precision_csv, EvalReport, PrecisionPoint, RunMetadata};
pub use rsa::{bfs_shells, rsa, rsa_bucket_report, rsa_scores, RsaBucket, RsaReport, RSA_HOPS};
