use super::eig::{eig_hermitian, lu_solve};
use super::matrix::{CMatrix, CScalar};
use crate::error::{Error, Result};

/// Padé-13 numerator coefficients (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Matrix exponential.
///
/// Hermitian and anti-Hermitian inputs (to `1e-10` relative) go through the
/// eigendecomposition; everything else uses scaling and squaring with a
/// degree-13 Padé approximant.
pub fn expm(t: &CMatrix) -> Result<CMatrix> {
    if !t.is_square() {
        return Err(Error::dim("expm needs a square matrix"));
    }
    let n = t.rows();
    let scale = t.norm();
    if scale == 0.0 {
        return Ok(CMatrix::identity(n));
    }
    if t.hermitian_defect() <= 1e-10 * scale {
        let e = eig_hermitian(&t.hermitian_part())?;
        return Ok(e.reconstruct_with(|x| CScalar::new(x.exp(), 0.0)));
    }
    // t = iH with H Hermitian
    let h = t.scale(CScalar::new(0.0, -1.0));
    if h.hermitian_defect() <= 1e-10 * scale {
        let e = eig_hermitian(&h.hermitian_part())?;
        return Ok(e.reconstruct_with(|x| CScalar::new(0.0, x).exp()));
    }
    expm_pade13(t)
}

pub(crate) fn expm_pade13(t: &CMatrix) -> Result<CMatrix> {
    let n = t.rows();
    let norm1 = t.norm_one();
    let s = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil() as i32 } else { 0 };
    let a = t.scale_real(0.5f64.powi(s));
    let b = &PADE13;
    let id = CMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let lincomb = |terms: &[(f64, &CMatrix)]| {
        let mut out = CMatrix::zeros(n, n);
        for &(c, m) in terms {
            out.axpy(CScalar::new(c, 0.0), m);
        }
        out
    };

    let u_inner = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u_tail = lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);
    let v_inner = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v_tail = lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let mut r = lu_solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
