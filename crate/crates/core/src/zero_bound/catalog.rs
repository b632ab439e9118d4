use crate::observable::HermitianOperator;
use crate::{CMatrix, Complex64};

/// Pauli matrices and the Gell-Mann matrices `λ_3, λ_4, λ_5`.
///
/// `λ_5` carries `+i` at entry (1,3) and `−i` at (3,1), the negative of the
/// common convention. With this sign `[λ_3, λ_4] = −iλ_5`.
#[derive(Debug, Clone)]
pub struct GeneratorCatalog {
    pub sigma_x: HermitianOperator,
    pub sigma_y: HermitianOperator,
    pub sigma_z: HermitianOperator,
    pub lambda_3: HermitianOperator,
    pub lambda_4: HermitianOperator,
    pub lambda_5: HermitianOperator,
}

impl Default for GeneratorCatalog {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorCatalog {
    pub fn new() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let op = |n: usize, entries: &[Complex64]| {
            HermitianOperator::new(CMatrix::from_row_slice(n, n, entries))
                .expect("catalog matrices are Hermitian")
        };
        Self {
            sigma_x: op(2, &[z, one, one, z]),
            sigma_y: op(2, &[z, -i, i, z]),
            sigma_z: op(2, &[one, z, z, -one]),
            lambda_3: op(3, &[one, z, z, z, -one, z, z, z, z]),
            lambda_4: op(3, &[z, z, one, z, z, z, one, z, z]),
            lambda_5: op(3, &[z, z, i, z, z, z, -i, z, z]),
        }
    }

    /// Looks an operator up by name (`sigma_x`, `lambda_4`, ...).
    pub fn by_name(&self, name: &str) -> Option<&HermitianOperator> {
        match name {
            "sigma_x" => Some(&self.sigma_x),
            "sigma_y" => Some(&self.sigma_y),
            "sigma_z" => Some(&self.sigma_z),
            "lambda_3" => Some(&self.lambda_3),
            "lambda_4" => Some(&self.lambda_4),
            "lambda_5" => Some(&self.lambda_5),
            _ => None,
        }
    }

    pub const NAMES: [&'static str; 6] = [
        "sigma_x", "sigma_y", "sigma_z", "lambda_3", "lambda_4", "lambda_5",
    ];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::observable::commutator;

    #[test]
    fn pauli_square_to_identity() {
        let g = GeneratorCatalog::new();
        for s in [&g.sigma_x, &g.sigma_y, &g.sigma_z] {
            let sq = s.matrix() * s.matrix();
            assert!(max_abs(&(sq - CMatrix::identity(2, 2))) < 1e-15);
        }
        let xy = commutator(&g.sigma_x, &g.sigma_y).unwrap();
        assert!(max_abs(&(xy - g.sigma_z.matrix() * Complex64::new(0.0, 2.0))) < 1e-15);
    }

    #[test]
    fn lambda_5_sign() {
        let g = GeneratorCatalog::new();
        let m = g.lambda_5.matrix();
        assert_eq!(m[(0, 2)], Complex64::new(0.0, 1.0));
        assert_eq!(m[(2, 0)], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn lookup() {
        let g = GeneratorCatalog::new();
        for name in GeneratorCatalog::NAMES {
            assert!(g.by_name(name).is_some());
        }
        assert!(g.by_name("lambda_8").is_none());
    }
}
