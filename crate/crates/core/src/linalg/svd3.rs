use super::mat3::{cross, dot, norm, Mat3, Vec3};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// `m = U diag(σ) Vᵀ` with orthogonal `U`, `V` and `σ` sorted descending.
#[derive(Debug, Clone, Copy)]
pub struct Svd3 {
    pub u: Mat3,
    pub sigma: Vec3,
    pub v: Mat3,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Mat3 {
        self.u * Mat3::diag(self.sigma) * self.v.transpose()
    }
}

/// Singular value decomposition of a real 3×3 matrix by one-sided
/// (Hestenes) Jacobi: column pairs are rotated until mutually orthogonal,
/// the column norms are the singular values and the accumulated rotations
/// form `V`.
pub fn svd_real3(m: &Mat3) -> Result<Svd3> {
    let mut cols = [m.col(0), m.col(1), m.col(2)];
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    // columns below this squared norm are rounding noise of a rank deficiency
    let negligible = 1e-30 * m.frobenius_norm().powi(2);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = dot(cols[p], cols[p]);
            let beta = dot(cols[q], cols[q]);
            let gamma = dot(cols[p], cols[q]);
            if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            for i in 0..3 {
                let (xp, xq) = (cols[p][i], cols[q][i]);
                cols[p][i] = c * xp - s * xq;
                cols[q][i] = s * xp + c * xq;
                let (vp, vq) = (v[p][i], v[q][i]);
                v[p][i] = c * vp - s * vq;
                v[q][i] = s * vp + c * vq;
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
    }

    let mut order = [0usize, 1, 2];
    let norms = [norm(cols[0]), norm(cols[1]), norm(cols[2])];
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma = [norms[order[0]], norms[order[1]], norms[order[2]]];
    let v_cols = [v[order[0]], v[order[1]], v[order[2]]];

    // Columns with negligible singular value carry no direction; they are
    // completed to an orthonormal basis instead.
    let cutoff = 1e-14 * sigma[0].max(f64::MIN_POSITIVE);
    let mut u_cols: Vec<Vec3> = Vec::with_capacity(3);
    for k in 0..3 {
        if sigma[k] > cutoff {
            let c = cols[order[k]];
            u_cols.push(orthonormalize(c.map(|x| x / sigma[k]), &u_cols));
        }
    }
    complete_basis(&mut u_cols);

    Ok(Svd3 {
        u: Mat3::from_cols(u_cols[0], u_cols[1], u_cols[2]),
        sigma,
        v: Mat3::from_cols(v_cols[0], v_cols[1], v_cols[2]),
    })
}

/// One Gram–Schmidt pass against `basis`, then normalization.
fn orthonormalize(mut x: Vec3, basis: &[Vec3]) -> Vec3 {
    for b in basis {
        let d = dot(x, *b);
        for i in 0..3 {
            x[i] -= d * b[i];
        }
    }
    let n = norm(x);
    x.map(|c| c / n)
}

fn complete_basis(basis: &mut Vec<Vec3>) {
    match basis.len() {
        0 => basis.extend([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
        1 => {
            let u = basis[0];
            // axis least aligned with u
            let k = (0..3).min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs())).unwrap();
            let mut e = [0.0; 3];
            e[k] = 1.0;
            let w = orthonormalize(e, basis);
            basis.push(w);
            basis.push(cross(u, w));
        }
        2 => {
            let w = cross(basis[0], basis[1]);
            basis.push(w);
        }
        _ => {}
    }
}
