//! Deflation, matrix assembly, dense eigensolving and mesh scans.

mod combo;
mod eigen;
mod scan;

pub use combo::{
    accumulate_deflated, combo_matrix, deflate, deflate_matrix, ConvexCombo, DeflatedMatrix,
    WEIGHT_SUM_TOL,
};
pub use eigen::{eigenvalues, DenseMatrix, EigenSolver, MAX_EIGEN_DIM};
pub use scan::{
    composition_count, compositions, scan_pair, scan_tuple, Compositions, EigenPoint,
    PointFilter, ScanConfig, Scanner, SourceId, REAL_AXIS_TOL,
};
