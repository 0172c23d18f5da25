//! Brute-force oracles over SO(3), independent of the Procrustes reduction.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use qdist_core::linalg::{dot3, Mat3, Vec3};
use qdist_core::purification::Rotation3;

/// `Tr(P Q)` for two purifications written in Pauli coefficients:
/// `1/4 (1 + r·r' + γ·γ' + ⟨A, A'⟩)`.
pub fn pauli_overlap_sq(r: Vec3, a: &Mat3, r2: Vec3, a2: &Mat3) -> f64 {
    let g = a.transpose().mul_vec(r);
    let g2 = a2.transpose().mul_vec(r2);
    0.25 * (1.0 + dot3(r, r2) + dot3(g, g2) + a.frobenius_dot(a2))
}

#[derive(Debug, Clone, Copy)]
pub struct GridBest {
    /// Largest `Tr(P_ρ P_σ(S))` on the grid.
    pub overlap_sq: f64,
    pub angles: (f64, f64, f64),
}

fn grid(step: f64, upper: f64, inclusive: bool) -> Vec<f64> {
    let n = (upper / step).floor() as usize;
    (0..=n).map(|k| k as f64 * step).filter(|&x| if inclusive { x <= upper } else { x < upper }).collect()
}

/// Exhaustive Z-Y-Z Euler grid maximizing `Tr(P_ρ P_σ(S))` with
/// `A_σ = Ã' S`, `S = R_z(α) R_y(β) R_z(γ)`.
///
/// For fixed `(α, β)` the objective is `a cos γ + b sin γ + c`; every `γ` on
/// the grid is still evaluated.
pub fn euler_grid_max_overlap(r: Vec3, a: &Mat3, r2: Vec3, a2_base: &Mat3, step: f64) -> GridBest {
    let alphas = grid(step, TAU, false);
    let betas = grid(step, PI, true);
    let gammas = alphas.clone();
    let cos: Vec<f64> = gammas.iter().map(|g| g.cos()).collect();
    let sin: Vec<f64> = gammas.iter().map(|g| g.sin()).collect();
    let g_rho = a.transpose().mul_vec(r);
    let fixed = 1.0 + dot3(r, r2);

    let mut best = GridBest { overlap_sq: f64::NEG_INFINITY, angles: (0.0, 0.0, 0.0) };
    for &alpha in &alphas {
        for &beta in &betas {
            let rot = *Rotation3::from_euler_zyz(alpha, beta, 0.0).matrix();
            let b = *a2_base * rot;
            let g = rot.transpose().mul_vec(a2_base.transpose().mul_vec(r2));
            // ⟨A, B R_z(γ)⟩ + γ_ρ · R_z(γ)ᵀ g
            let mut cc = g_rho[0] * g[0] + g_rho[1] * g[1];
            let mut ss = g_rho[0] * g[1] - g_rho[1] * g[0];
            let mut k = fixed + g_rho[2] * g[2];
            for i in 0..3 {
                cc += a[(i, 0)] * b[(i, 0)] + a[(i, 1)] * b[(i, 1)];
                ss += a[(i, 0)] * b[(i, 1)] - a[(i, 1)] * b[(i, 0)];
                k += a[(i, 2)] * b[(i, 2)];
            }
            let top = max_combination(&cos, &sin, cc, ss);
            let val = 0.25 * (k + top);
            if val > best.overlap_sq {
                let arg = cos.iter().zip(&sin).position(|(c, s)| cc * c + ss * s == top).unwrap_or(0);
                best = GridBest { overlap_sq: val, angles: (alpha, beta, gammas[arg]) };
            }
        }
    }
    best
}

/// `max_k (a cos_k + b sin_k)`, four independent lanes.
fn max_combination(cos: &[f64], sin: &[f64], a: f64, b: f64) -> f64 {
    let mut lanes = [f64::NEG_INFINITY; 4];
    let (cc, cr) = (cos.chunks_exact(4), cos.chunks_exact(4).remainder());
    let sr = sin.chunks_exact(4).remainder();
    for (c, s) in cc.zip(sin.chunks_exact(4)) {
        for l in 0..4 {
            let v = a * c[l] + b * s[l];
            lanes[l] = if v > lanes[l] { v } else { lanes[l] };
        }
    }
    let mut top = lanes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (c, s) in cr.iter().zip(sr) {
        top = top.max(a * c + b * s);
    }
    top
}

/// `min_S ‖B S - C‖_F` by a coarse Euler grid followed by pattern-search
/// refinement from the best grid points.
pub fn procrustes_grid_min(b: &Mat3, c: &Mat3, step: f64) -> f64 {
    let obj = |x: [f64; 3]| (*b * *Rotation3::from_euler_zyz(x[0], x[1], x[2]).matrix() - *c).frobenius_norm();
    let mut seeds: Vec<(f64, [f64; 3])> = Vec::new();
    for &al in &grid(step, TAU, false) {
        for &be in &grid(step, PI, true) {
            for &ga in &grid(step, TAU, false) {
                let x = [al, be, ga];
                seeds.push((obj(x), x));
            }
        }
    }
    seeds.sort_by(|p, q| p.0.total_cmp(&q.0));
    seeds.truncate(8);
    let mut best = f64::INFINITY;
    for (mut fx, mut x) in seeds {
        let mut h = step;
        while h > 1e-9 {
            let mut improved = false;
            for i in 0..3 {
                for sgn in [-1.0, 1.0] {
                    let mut y = x;
                    y[i] += sgn * h;
                    let fy = obj(y);
                    if fy < fx {
                        (x, fx, improved) = (y, fy, true);
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        best = best.min(fx);
    }
    best
}
