//! Bilinear shape functions on the reference square and 2x2 Gauss rule.

/// Natural coordinates of the four corner nodes, counterclockwise.
pub const CORNERS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

const G: f64 = 0.577_350_269_189_625_8;

/// `(xi, eta, weight)` of the 2x2 Gauss-Legendre rule.
pub const GAUSS_2X2: [(f64, f64, f64); 4] = [(-G, -G, 1.0), (G, -G, 1.0), (G, G, 1.0), (-G, G, 1.0)];

/// Abscissae of the two-point rule on `[-1, 1]`; both weights are one.
pub const GAUSS_2: [f64; 2] = [-G, G];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeValues {
    pub n: [f64; 4],
    pub dxi: [f64; 4],
    pub deta: [f64; 4],
}

pub fn shape_functions(xi: f64, eta: f64) -> ShapeValues {
    let mut s = ShapeValues {
        n: [0.0; 4],
        dxi: [0.0; 4],
        deta: [0.0; 4],
    };
    for (i, &(xi_i, eta_i)) in CORNERS.iter().enumerate() {
        let a = 1.0 + xi_i * xi;
        let b = 1.0 + eta_i * eta;
        s.n[i] = 0.25 * a * b;
        s.dxi[i] = 0.25 * xi_i * b;
        s.deta[i] = 0.25 * a * eta_i;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_and_corner_values() {
        assert_eq!(shape_functions(0.0, 0.0).n, [0.25; 4]);
        assert_eq!(shape_functions(1.0, 1.0).n, [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn partition_of_unity() {
        for &(xi, eta) in &[(0.3, -0.7), (-1.0, 0.2), (0.9, 0.9)] {
            let s = shape_functions(xi, eta);
            assert!((s.n.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(s.dxi.iter().sum::<f64>().abs() < 1e-15);
            assert!(s.deta.iter().sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let (xi, eta, h) = (0.31, -0.42, 1e-6);
        let s = shape_functions(xi, eta);
        let px = shape_functions(xi + h, eta).n;
        let mx = shape_functions(xi - h, eta).n;
        let pe = shape_functions(xi, eta + h).n;
        let me = shape_functions(xi, eta - h).n;
        for i in 0..4 {
            assert!(((px[i] - mx[i]) / (2.0 * h) - s.dxi[i]).abs() < 1e-9);
            assert!(((pe[i] - me[i]) / (2.0 * h) - s.deta[i]).abs() < 1e-9);
        }
    }
}
