//! Dense complex matrix exponential: degree-13 Padé approximant with
//! scaling and squaring (Higham 2005).

use super::OperatorMatrix;
use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(gen)`. Fails on non-finite input.
pub fn matrix_exp(gen: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !gen.is_finite() {
        return Err(Error::NonFinite);
    }
    let out = expm_array(gen.entries())?;
    OperatorMatrix::new(out)
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn expm_array(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let norm = one_norm(a);
    if norm == 0.0 {
        return Ok(Array2::eye(n));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.mapv(|c| c * 0.5f64.powi(squarings));

    let id: Array2<Complex64> = Array2::eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u_poly = a6.dot(&u_inner) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = a.dot(&u_poly);
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let mut r = lu_solve(&v - &u, &v + &u)?;
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    if r.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

/// Solves `lhs X = rhs` by LU factorization with partial pivoting.
fn lu_solve(mut lhs: Array2<Complex64>, mut rhs: Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = lhs.nrows();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lhs[(i, col)].norm().total_cmp(&lhs[(j, col)].norm()))
            .expect("non-empty range");
        if lhs[(pivot, col)].norm() == 0.0 {
            return Err(Error::NonFinite);
        }
        if pivot != col {
            for k in 0..n {
                lhs.swap((pivot, k), (col, k));
                rhs.swap((pivot, k), (col, k));
            }
        }
        let inv = lhs[(col, col)].inv();
        for row in col + 1..n {
            let f = lhs[(row, col)] * inv;
            if f.norm() == 0.0 {
                continue;
            }
            lhs[(row, col)] = f;
            for k in col + 1..n {
                let t = lhs[(col, k)];
                lhs[(row, k)] -= f * t;
            }
            for k in 0..n {
                let t = rhs[(col, k)];
                rhs[(row, k)] -= f * t;
            }
        }
    }
    for row in (0..n).rev() {
        let inv = lhs[(row, row)].inv();
        for k in 0..n {
            let mut acc = rhs[(row, k)];
            for j in row + 1..n {
                acc -= lhs[(row, j)] * rhs[(j, k)];
            }
            rhs[(row, k)] = acc * inv;
        }
    }
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation_op, number_op, rotation_op};

    #[test]
    fn zero_gives_identity() {
        let out = matrix_exp(&OperatorMatrix::zeros(5)).unwrap();
        assert_eq!(out, OperatorMatrix::identity(5));
    }

    #[test]
    fn diagonal_generator_matches_rotation() {
        let phi = 2.3;
        let gen = number_op(40).scaled(Complex64::new(0.0, -phi));
        let out = matrix_exp(&gen).unwrap();
        assert!(out.max_abs_diff(&rotation_op(phi, 40), 41).unwrap() < 1e-12);
    }

    #[test]
    fn nilpotent_generator_is_exact_series() {
        // exp of the 3x3 shift sqrt-weighted ladder: a^3 = 0 on n_max = 2.
        let a = annihilation_op(2).unwrap();
        let out = matrix_exp(&a).unwrap();
        let a2 = a.matmul(&a).unwrap();
        let series = OperatorMatrix::identity(2)
            .add(&a)
            .unwrap()
            .add(&a2.scaled(Complex64::new(0.5, 0.0)))
            .unwrap();
        assert!(out.max_abs_diff(&series, 3).unwrap() < 1e-15);
    }

    #[test]
    fn anti_hermitian_gives_unitary() {
        let a = annihilation_op(60).unwrap();
        let alpha = Complex64::new(1.3, -0.4);
        let gen = a.adjoint().scaled(alpha).add(&a.scaled(-alpha.conj())).unwrap();
        let u = matrix_exp(&gen).unwrap();
        let full = u.adjoint().matmul(&u).unwrap();
        assert!(full.max_abs_diff(&OperatorMatrix::identity(60), 61).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = Array2::zeros((2, 2));
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        let op = OperatorMatrix::new(m).unwrap();
        assert_eq!(matrix_exp(&op), Err(Error::NonFinite));
    }
}
