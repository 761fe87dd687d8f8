use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("element {element} references node {node}, which does not exist")]
    InvalidNodeRef { element: usize, node: usize },
    #[error("node {node} is not used by any element")]
    DanglingNode { node: usize },
    #[error("node {node} has non-finite coordinates")]
    NonFiniteCoordinate { node: usize },
    #[error("element {element} repeats node {node}")]
    RepeatedNode { element: usize, node: usize },
    #[error("element {element} is degenerate (mid-surface Jacobian {jacobian:e})")]
    DegenerateElement { element: usize, jacobian: f64 },
    #[error("edge {node1}-{node2} is shared by {count} elements")]
    NonManifoldCrease { node1: usize, node2: usize, count: usize },
    #[error("crease {crease}: {reason}")]
    InvalidCrease { crease: usize, reason: &'static str },
    #[error("panel {panel} is not edge-connected")]
    DisconnectedPanel { panel: usize },
    #[error("panel {panel} is not flat (normal deviation {deviation:e} rad)")]
    NonFlatPanel { panel: usize, deviation: f64 },
    #[error("invalid material: {0}")]
    InvalidMaterial(&'static str),
    #[error("element {element}: strain transformation is singular")]
    SingularTransform { element: usize },
    #[error("crease {crease}: director has vanished")]
    ZeroDirector { crease: usize },
    #[error("crease {crease}: fold angle {theta} reached the self-intersection barrier")]
    BarrierOverflow { crease: usize, theta: f64 },
    #[error("degree of freedom {dof} is both fixed and prescribed")]
    OverlappingBcs { dof: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("recovery attempts exhausted at load parameter {lambda}")]
    RecoveryExhausted { lambda: f64 },
    #[error("unknown scene `{0}`")]
    UnknownScene(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
}
