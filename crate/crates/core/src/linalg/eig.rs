use super::matrix::{CMatrix, CScalar, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `m = V diag(λ) V*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> CScalar) -> CMatrix {
        let n = self.values.len();
        let fl: Vec<_> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum())
    }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::dim("eig_hermitian needs a square matrix"));
    }
    let scale = m.norm();
    let defect = m.hermitian_defect();
    if defect > 1e-10 * scale {
        return Err(Error::Hermiticity { residual: if scale > 0.0 { defect / scale } else { defect } });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-17 * scale {
                    continue;
                }
                let phase = apq / g;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                let gpp = CScalar::new(c, 0.0);
                let gpq = CScalar::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                rotate_cols(&mut a, p, q, gpp, gpq, gqp, gqq);
                rotate_rows(&mut a, p, q, gpp, gpq, gqp, gqq);
                rotate_cols(&mut v, p, q, gpp, gpq, gqp, gqq);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// `M <- M G` restricted to columns p, q.
fn rotate_cols(m: &mut CMatrix, p: usize, q: usize, gpp: CScalar, gpq: CScalar, gqp: CScalar, gqq: CScalar) {
    for k in 0..m.rows() {
        let (mp, mq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mp * gpp + mq * gqp;
        m[(k, q)] = mp * gpq + mq * gqq;
    }
}

/// `M <- G* M` restricted to rows p, q.
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, gpp: CScalar, gpq: CScalar, gqp: CScalar, gqq: CScalar) {
    for k in 0..m.cols() {
        let (mp, mq) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = gpp.conj() * mp + gqp.conj() * mq;
        m[(q, k)] = gpq.conj() * mp + gqq.conj() * mq;
    }
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi orthogonalization
/// of the columns.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    // Work on whichever orientation has fewer columns.
    let work = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = (work.rows(), work.cols());
    let mut colv: Vec<Vec<CScalar>> = (0..cols).map(|j| work.column(j)).collect();
    let total: f64 = colv.iter().flatten().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return vec![0.0; cols];
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: CScalar = colv[p].iter().zip(&colv[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g <= 1e-300 * total {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let ap = colv[p][k];
                    let aq = colv[q][k] * phase.conj();
                    colv[p][k] = ap * c - aq * s;
                    colv[q][k] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = colv.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Solves `a X = b` by LU factorization with partial pivoting.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::dim("lu_solve needs square a and matching b"));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm())).unwrap_or(k);
        if lu[(piv, k)].norm() == 0.0 {
            return Err(Error::Input("singular matrix in lu_solve".into()));
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            for j in 0..x.cols() {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = tmp;
            }
        }
        let inv = ONE / lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] * inv;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
            for j in 0..x.cols() {
                let xk = x[(k, j)];
                x[(i, j)] -= f * xk;
            }
        }
    }
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}
