#![allow(dead_code)]

use std::f64::consts::TAU;

use maslov_core::random::{CurveRecipe, RandomLagrangianCurve};
use maslov_core::CMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues from the diagonal of a complex Schur form.
fn schur_eigenvalues(w: &CMatrix) -> Vec<Complex64> {
    let (_, t) = w.clone().schur().unpack();
    (0..t.nrows()).map(|k| t[(k, k)]).collect()
}

/// Net count of eigenvalues of the unitary path w(s), s ∈ [0, 1], moving
/// counterclockwise through 1, by lifting each eigenphase along a fine grid.
///
/// An eigenvalue that starts at 1 and leaves downward counts −1; one that
/// arrives at 1 from below counts +1; arriving from above or leaving upward counts 0.
pub fn winding_oracle(w: impl Fn(f64) -> CMatrix, steps: usize) -> i64 {
    let mut prev = schur_eigenvalues(&w(0.0));
    let mut theta: Vec<f64> = prev.iter().map(|z| z.arg()).collect();
    let start = theta.clone();
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        let next = schur_eigenvalues(&w(s));
        let mut used = vec![false; next.len()];
        for (i, z) in prev.iter_mut().enumerate() {
            let (j, _) = next
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (y - *z).norm()))
                .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            used[j] = true;
            theta[i] += (next[j] / *z).arg();
            *z = next[j];
        }
    }
    let level = |t: f64| (t / TAU + 1e-9).floor() as i64;
    theta.iter().zip(&start).map(|(t1, t0)| level(*t1) - level(*t0)).sum()
}

/// The oracle for a random curve, from its canonical generators U_s V_s⁻¹.
pub fn curve_oracle(curve: &RandomLagrangianCurve) -> i64 {
    winding_oracle(|s| &curve.u0 * curve.hu.at(s) * (&curve.v0 * curve.hv.at(s)).adjoint(), 4000)
}

/// The shared random corpus of Lagrangian curves in C^2 … C^8.
pub fn corpus(n: usize, seed: u64) -> Vec<RandomLagrangianCurve> {
    (0..n)
        .map(|i| {
            let p = 1 + i % 4;
            let recipe = CurveRecipe {
                p,
                vary_form: i % 2 == 0,
                start_intersection: [0, 1, 0, 2, 1][i % 5].min(p),
                speed: 2.0 + (i % 7) as f64 * 1.5,
                move_mu: i % 3 != 0,
                closed: i % 6 == 5,
            };
            RandomLagrangianCurve::new(recipe, &mut rng(seed + i as u64))
        })
        .collect()
}
