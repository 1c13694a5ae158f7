use nalgebra::DMatrix;

use super::SpectralError;
use crate::graph::Graph;

/// Above this order the dense path is refused.
pub const DENSE_MAX_ORDER: usize = 4096;

pub fn adjacency_matrix(g: &Graph) -> Result<DMatrix<f64>, SpectralError> {
    let n = g.n();
    if n > DENSE_MAX_ORDER {
        return Err(SpectralError::DenseTooLarge(n));
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u as usize, v as usize)] = 1.0;
        a[(v as usize, u as usize)] = 1.0;
    }
    Ok(a)
}

/// Full adjacency spectrum in decreasing order.
pub fn dense_spectrum(g: &Graph) -> Result<Vec<f64>, SpectralError> {
    let a = adjacency_matrix(g)?;
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}
