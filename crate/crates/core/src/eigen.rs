//! Cyclic Jacobi eigenvalues for small complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Stop once the Frobenius norm of the off-diagonal part falls below this.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian `N×N` matrix, sorted ascending.
///
/// Only the Hermitian part is meaningful; the caller guarantees
/// `h[i][j] = conj(h[j][i])`.
pub fn hermitian_eigenvalues<const N: usize>(h: &[[Complex64; N]; N]) -> Result<[f64; N]> {
    hermitian_eigenvalues_with(h, OFF_DIAGONAL_TOL, MAX_SWEEPS)
}

pub fn hermitian_eigenvalues_with<const N: usize>(
    h: &[[Complex64; N]; N],
    tol: f64,
    max_sweeps: usize,
) -> Result<[f64; N]> {
    let mut a = *h;
    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off >= tol {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }
    let mut eigenvalues = [0.0; N];
    for (i, e) in eigenvalues.iter_mut().enumerate() {
        *e = a[i][i].re;
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(eigenvalues)
}

fn off_diagonal_norm<const N: usize>(a: &[[Complex64; N]; N]) -> f64 {
    let mut sum = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                sum += x.norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with `a ← U† a U`, where `U` first removes the
/// phase of `a[p][q]` and then applies a real Givens rotation in the
/// `(p, q)` plane.
#[allow(clippy::needless_range_loop)]
fn rotate<const N: usize>(a: &mut [[Complex64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b; // e^{iθ}
    let zeta = (a[q][q].re - a[p][p].re) / (2.0 * b);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns p and q of U; all other columns are unit vectors.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    // a ← a U
    for row in a.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * u_pp + xq * u_qp;
        row[q] = xp * u_pq + xq * u_qq;
    }
    // a ← U† a
    for k in 0..N {
        let (xp, xq) = (a[p][k], a[q][k]);
        a[p][k] = u_pp.conj() * xp + u_qp.conj() * xq;
        a[q][k] = u_pq.conj() * xp + u_qq.conj() * xq;
    }
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;
}
