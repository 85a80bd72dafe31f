use crate::graph::NodeId;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at line {line}, column {column}: {message}")]
    MalformedInput {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("weights too large: {nodes} nodes with max |w| = {max_abs} leave no overflow headroom")]
    OverflowRisk { nodes: usize, max_abs: i64 },
    #[error("edge endpoint {node} out of range at line {line}")]
    DanglingEndpoint { line: usize, node: u64 },

    #[error("node {0} is not alive")]
    DeleteMissing(NodeId),
    #[error("node id {0} was already used")]
    InsertDuplicate(NodeId),
    #[error("inserted node declares an edge to dead node {0}")]
    EdgeToDeadNode(NodeId),

    #[error("root {0} is excluded")]
    RootExcluded(NodeId),
    #[error("root {0} is not alive")]
    RootDead(NodeId),
    #[error("negative edge weight {weight} on ({from}, {to})")]
    NegativeEdge { from: NodeId, to: NodeId, weight: i64 },
    #[error("graph is not unweighted: edge ({from}, {to}) has weight {weight}")]
    WeightedInput { from: NodeId, to: NodeId, weight: i64 },
    #[error("node {0} is unreachable")]
    Unreachable(NodeId),

    #[error("hitting-set family {0} is empty")]
    EmptyFamily(usize),

    #[error("preprocessing requires non-negative weights")]
    NegativeWeight,
    #[error("node {0} was already visited at this level")]
    AlreadyVisited(NodeId),
    #[error("node {0} is not part of the decremental snapshot")]
    DeletingUnknownNode(NodeId),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("graph contains a negative cycle")]
    NegativeCycle,
    #[error("inserting node {0} would create a negative cycle")]
    NegativeCycleIntroduced(NodeId),
    #[error("endpoint {0} is not alive")]
    DeadEndpoint(NodeId),
    #[error("no path from {0} to {1}")]
    PathUnavailable(NodeId, NodeId),

    #[error("invalid workload: {0}")]
    SpecInvalid(String),
    #[error("snapshot of {0} nodes exceeds the supported size")]
    TooLarge(usize),
}
