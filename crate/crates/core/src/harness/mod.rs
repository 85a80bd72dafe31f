//! Workload generation, adaptive adversaries, differential verification
//! against the oracle, benchmarking and query replay.

mod adversary;
mod bench;
mod run;
mod verify;
mod workload;

pub use adversary::Attacker;
pub use bench::{bench_stream, write_csv, BenchRecord, CSV_HEADER};
pub use run::run_stream;
pub use verify::{check_engine, path_weight, verify_adaptive, verify_stream, Mismatch, MismatchKind, VerifyReport};
pub use workload::{generate_graph, generate_stream, Adversary, WorkloadSpec};
