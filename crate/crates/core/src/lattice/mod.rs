//! Periodic planar lattices: built-in specifications, stored potential
//! kernels, lattice-limit looping rates, `alpha(beta)` for the tetrakis
//! square lattice, and wired finite patches.

mod alpha;
mod kernel;
mod patch;
mod spec;
mod table;

pub use alpha::{
    alpha_algebraic, alpha_closed, alpha_quadrature, alpha_torus, tetrakis_p, AlphaPoly, SpectralLaplacian,
    QUADRATURE_FLOOR,
};
pub use kernel::{kernel_closed, primal_dual_defects, unit_flow_defects, KernelEntry, KernelTable, KernelValue};
pub use patch::{limit_check, wired_patch, LimitEntry, LimitReport, WiredPatch, MAX_LIMIT_N};
pub use spec::{builtin, parse_lattice, EdgeClass, LatticeSpec, VertexType, WeightTag, BUILTIN_NAMES};
pub use table::{
    edge_in_tree_symbolic, table_row, table_row_symbolic, tau_symbolic, SymbolicRow, TableRow,
};

impl LatticeSpec {
    /// Fourier-space Laplacian with weights at `beta`.
    pub fn spectral_laplacian(&self, beta: f64) -> SpectralLaplacian {
        SpectralLaplacian::new(
            self.vertex_count(),
            self.edges.iter().map(|c| (c.from, c.to, c.offset, c.weight.at_f64(beta))).collect(),
        )
    }
}
