//! Error type shared by all modules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Only ambient dimensions 2 and 3 carry quadrature grids.
    UnsupportedDimension(usize),
    /// Grid resolution below the supported minimum.
    ResolutionTooSmall { resolution: usize, min: usize },
    /// A value list does not match the grid node count.
    LengthMismatch { expected: usize, got: usize },
    /// Two radial functions live on different grids.
    GridMismatch { expected: usize, got: usize },
    /// Input vector is not a unit vector.
    NotUnitVector { norm: f64 },
    /// Matrix fails the rotation invariants (orthogonality, det = +1).
    NotARotation(String),
    /// The node set is not closed under the rotation; carries the first
    /// unmatched node index.
    GridNotClosed { node: usize },
    /// A shape parameter violates its constraints.
    InvalidSpec(String),
    /// HPolytope has no facet facing the queried direction.
    UnboundedPolytope,
    /// Scaling factor must be nonnegative.
    NegativeScale(f64),
    /// Wrong number of arguments for a multilinear operation.
    ArityMismatch { expected: usize, got: usize },
    /// Atom index outside the partition.
    AtomOutOfRange { index: usize, atoms: usize },
    /// Partition atoms must be disjoint, nonempty, and cover all nodes.
    InvalidPartition(String),
    /// A function passed as simple is not constant on some atom.
    NotAtomwiseConstant { atom: usize },
    /// Exact semivariation requested beyond the m·k size cap.
    SemivariationTooLarge { order: usize, atoms: usize, cap: usize },
    /// Operation requires a diagonal polymeasure; carries an off-diagonal
    /// witness index tuple.
    NotDiagonal { witness: Vec<usize> },
    /// Polymeasure backing must use the node-level partition.
    NotNodeLevel { atoms: usize, nodes: usize },
    /// A probed property (additivity, homogeneity, orthogonal additivity)
    /// failed; carries a description of the violating input.
    ProbeFailed { property: &'static str, witness: String },
    /// The rotation set does not act transitively on the grid nodes.
    NotTransitive { orbit_size: usize, nodes: usize },
    /// The measure is not invariant under the rotation set.
    NotInvariant { node: usize, residual: f64 },
    /// Violation witness requires a non-diagonal polymeasure.
    AlreadyDiagonal,
    /// Witness atoms cannot be separated by bump bodies at this resolution.
    NotSeparable,
    /// Entries must be finite.
    NonFiniteEntry { index: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedDimension(d) => {
                write!(f, "unsupported ambient dimension {d} (only 2 and 3)")
            }
            Error::ResolutionTooSmall { resolution, min } => {
                write!(f, "resolution {resolution} below minimum {min}")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::GridMismatch { expected, got } => {
                write!(f, "grid mismatch: {expected} vs {got} nodes")
            }
            Error::NotUnitVector { norm } => write!(f, "not a unit vector (norm {norm})"),
            Error::NotARotation(msg) => write!(f, "not a rotation: {msg}"),
            Error::GridNotClosed { node } => {
                write!(f, "grid not closed under rotation: node {node} has no image")
            }
            Error::InvalidSpec(msg) => write!(f, "invalid body spec: {msg}"),
            Error::UnboundedPolytope => write!(f, "polytope unbounded in queried direction"),
            Error::NegativeScale(l) => write!(f, "negative scale {l}"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} arguments, got {got}")
            }
            Error::AtomOutOfRange { index, atoms } => {
                write!(f, "atom index {index} out of range (partition has {atoms})")
            }
            Error::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::NotAtomwiseConstant { atom } => {
                write!(f, "function not constant on atom {atom}")
            }
            Error::SemivariationTooLarge { order, atoms, cap } => write!(
                f,
                "exact semivariation needs order*atoms = {} <= {cap}",
                order * atoms
            ),
            Error::NotDiagonal { witness } => {
                write!(f, "polymeasure not diagonal, witness {witness:?}")
            }
            Error::NotNodeLevel { atoms, nodes } => write!(
                f,
                "polymeasure has {atoms} atoms but grid has {nodes} nodes (node-level required)"
            ),
            Error::ProbeFailed { property, witness } => {
                write!(f, "{property} probe failed: {witness}")
            }
            Error::NotTransitive { orbit_size, nodes } => write!(
                f,
                "rotation set not transitive: orbit of node 0 has {orbit_size} of {nodes} nodes"
            ),
            Error::NotInvariant { node, residual } => write!(
                f,
                "measure not rotation invariant: node {node}, residual {residual:e}"
            ),
            Error::AlreadyDiagonal => write!(f, "polymeasure is diagonal, no witness exists"),
            Error::NotSeparable => {
                write!(f, "witness atoms not angularly separable at this resolution")
            }
            Error::NonFiniteEntry { index } => write!(f, "non-finite entry at index {index}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
