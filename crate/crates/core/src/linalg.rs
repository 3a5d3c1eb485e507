//! Dense complex matrix helpers for the 2- and 4-dimensional spaces used
//! throughout the crate.

use nalgebra::{Complex, SMatrix, SymmetricEigen};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type Mat<const N: usize> = SMatrix<C64, N, N>;
pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Default tolerance for Hermiticity checks, relative to `max(1, ‖H‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Frobenius norm of `H - H†`.
pub fn hermitian_defect<const N: usize>(h: &Mat<N>) -> f64 {
    (h - h.adjoint()).norm()
}

pub fn is_hermitian<const N: usize>(h: &Mat<N>, tol: f64) -> bool {
    hermitian_defect(h) <= tol * h.norm().max(1.0)
}

/// Frobenius norm of `U†U - I`.
pub fn unitarity_defect<const N: usize>(u: &Mat<N>) -> f64 {
    (u.adjoint() * u - Mat::<N>::identity()).norm()
}

/// Hermitian eigendecomposition for the supported dimensions.
pub trait HermitianEigen<const N: usize> {
    /// Eigenvalues and a unitary matrix whose columns are the eigenvectors.
    fn eigh(&self) -> ([f64; N], Mat<N>);
}

macro_rules! impl_eigh {
    ($n:literal) => {
        impl HermitianEigen<$n> for Mat<$n> {
            fn eigh(&self) -> ([f64; $n], Mat<$n>) {
                // symmetrise so round-off never breaks the solver's assumptions
                let sym = (self + self.adjoint()) * c(0.5, 0.0);
                let e = SymmetricEigen::new(sym);
                let mut vals = [0.0; $n];
                vals.copy_from_slice(e.eigenvalues.as_slice());
                (vals, e.eigenvectors)
            }
        }
    };
}
impl_eigh!(2);
impl_eigh!(4);

/// `exp(-i H t)` for a Hermitian generator of the supported dimensions.
pub trait ExpHermitian<const N: usize> {
    /// Assumes `self` is Hermitian; see [`mat_exp`] for the checked form.
    fn exp_neg_i(&self, t: f64) -> Mat<N>;
}

impl ExpHermitian<2> for Mat2 {
    fn exp_neg_i(&self, t: f64) -> Mat2 {
        // H = a0 I + ax σx + ay σy + az σz
        let a0 = 0.5 * (self[(0, 0)].re + self[(1, 1)].re);
        let az = 0.5 * (self[(0, 0)].re - self[(1, 1)].re);
        let off = 0.5 * (self[(0, 1)] + self[(1, 0)].conj());
        let (ax, ay) = (off.re, -off.im);
        let n = (ax * ax + ay * ay + az * az).sqrt();
        let co = (n * t).cos();
        let s = if n * t.abs() > 1e-300 { (n * t).sin() / n } else { t };
        let m = Mat2::new(c(co, -s * az), c(-s * ay, -s * ax), c(s * ay, -s * ax), c(co, s * az));
        m * cis(-a0 * t)
    }
}

impl ExpHermitian<4> for Mat4 {
    fn exp_neg_i(&self, t: f64) -> Mat4 {
        let (vals, v) = self.eigh();
        let mut scaled = v;
        for (j, lam) in vals.iter().enumerate() {
            let phase = cis(-lam * t);
            for i in 0..4 {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * v.adjoint()
    }
}

/// `exp(-i H t)` for Hermitian `H`; 2×2 in closed form, 4×4 via
/// `V diag(e^{-iλt}) V†`.
pub fn mat_exp<const N: usize>(h: &Mat<N>, t: f64) -> Result<Mat<N>>
where
    Mat<N>: ExpHermitian<N>,
{
    let defect = hermitian_defect(h);
    if !(defect <= HERMITIAN_TOL * h.norm().max(1.0)) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(h.exp_neg_i(t))
}

/// Average gate fidelity `[Tr(UU†) + |Tr(V†U)|²] / (d(d+1))`, clamped to `[0, 1]`.
pub fn fidelity<const N: usize>(u: &Mat<N>, ideal: &Mat<N>) -> f64 {
    let d = N as f64;
    let tr_uu = (u * u.adjoint()).trace().re;
    let overlap = (ideal.adjoint() * u).trace().norm_sqr();
    ((tr_uu + overlap) / (d * (d + 1.0))).clamp(0.0, 1.0)
}

/// Phase `θ` maximising `Re Tr(B† A e^{-iθ})`, i.e. the best global phase
/// such that `A ≈ e^{iθ} B`.
pub fn optimal_phase<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
    let t = (b.adjoint() * a).trace();
    if t.norm() == 0.0 {
        0.0
    } else {
        t.arg()
    }
}

/// `min_θ ‖A − e^{iθ} B‖_F`.
pub fn phase_distance<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> f64 {
    let theta = optimal_phase(a, b);
    (a - b * cis(theta)).norm()
}

pub fn equal_up_to_global_phase<const N: usize>(a: &Mat<N>, b: &Mat<N>, tol: f64) -> bool {
    phase_distance(a, b) <= tol
}

/// Permutation exchanging the middle two basis states of a two-spin space.
pub fn swap_middle() -> Mat4 {
    let mut p = Mat4::zeros();
    p[(0, 0)] = c(1., 0.);
    p[(1, 2)] = c(1., 0.);
    p[(2, 1)] = c(1., 0.);
    p[(3, 3)] = c(1., 0.);
    p
}

/// Embeds a 2×2 block into rows/columns `(i, j)` of an otherwise identity 4×4.
pub fn embed_block(block: &Mat2, i: usize, j: usize, rest: &Mat4) -> Mat4 {
    let mut out = *rest;
    out[(i, i)] = block[(0, 0)];
    out[(i, j)] = block[(0, 1)];
    out[(j, i)] = block[(1, 0)];
    out[(j, j)] = block[(1, 1)];
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: scaling-and-squaring Taylor series.
    fn taylor_exp<const N: usize>(h: &Mat<N>, t: f64) -> Mat<N> {
        let a = h * c(0.0, -t);
        let norm = a.norm();
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let a = a / c(2f64.powi(s), 0.0);
        let mut term = Mat::<N>::identity();
        let mut sum = Mat::<N>::identity();
        for k in 1..30 {
            term = term * a / c(k as f64, 0.0);
            sum += term;
        }
        for _ in 0..s {
            sum = sum * sum;
        }
        sum
    }

    fn random_hermitian4(v: &[f64]) -> Mat4 {
        let mut h = Mat4::zeros();
        let mut k = 0;
        for i in 0..4 {
            h[(i, i)] = c(v[k], 0.0);
            k += 1;
            for j in i + 1..4 {
                h[(i, j)] = c(v[k], v[k + 1]);
                h[(j, i)] = h[(i, j)].conj();
                k += 2;
            }
        }
        h
    }

    #[test]
    fn exp_of_pauli_x() {
        let u = mat_exp(&pauli_x(), std::f64::consts::FRAC_PI_2).unwrap();
        let expected = pauli_x() * c(0., -1.);
        assert!((u - expected).norm() < 1e-14);
    }

    #[test]
    fn closed_form_matches_eigensolver() {
        let h = Mat2::new(c(0.3, 0.), c(0.2, -0.7), c(0.2, 0.7), c(-1.1, 0.));
        let (vals, v) = h.eigh();
        let mut d = Mat2::zeros();
        d[(0, 0)] = cis(-vals[0] * 1.7);
        d[(1, 1)] = cis(-vals[1] * 1.7);
        assert!((mat_exp(&h, 1.7).unwrap() - v * d * v.adjoint()).norm() < 1e-14);
        assert_eq!(mat_exp(&Mat2::zeros(), 3.0).unwrap(), Mat2::identity());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = pauli_x();
        h[(0, 1)] = c(1.0, 1e-3);
        assert!(matches!(mat_exp(&h, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn fidelity_bounds() {
        let u = kron(&pauli_x(), &pauli_z());
        assert!((fidelity(&u, &u) - 1.0).abs() < 1e-15);
        // orthogonal unitaries: Tr(V†U) = 0
        let f = fidelity(&u, &Mat4::identity());
        assert!((f - 4.0 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn global_phase_is_ignored() {
        let u = kron(&pauli_y(), &pauli_x());
        let v = u * cis(1.234);
        assert!(equal_up_to_global_phase(&u, &v, 1e-13));
        assert!(!equal_up_to_global_phase(&u, &Mat4::identity(), 1e-3));
        assert!((fidelity(&v, &u) - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn exp2_matches_taylor_oracle(v in prop::collection::vec(-3.0f64..3.0, 4), t in -4.0f64..4.0) {
            let h = Mat2::new(c(v[0], 0.), c(v[1], v[2]), c(v[1], -v[2]), c(v[3], 0.));
            prop_assert!((mat_exp(&h, t).unwrap() - taylor_exp(&h, t)).norm() < 1e-10);
        }

        #[test]
        fn exp_matches_taylor_oracle(v in prop::collection::vec(-3.0f64..3.0, 16), t in -4.0f64..4.0) {
            let h = random_hermitian4(&v);
            let u = mat_exp(&h, t).unwrap();
            let oracle = taylor_exp(&h, t);
            prop_assert!((u - oracle).norm() < 1e-10);
            prop_assert!(unitarity_defect(&u) < 1e-12);
        }

        #[test]
        fn exp_group_property(v in prop::collection::vec(-2.0f64..2.0, 16), s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let h = random_hermitian4(&v);
            let lhs = mat_exp(&h, s + t).unwrap();
            let rhs = mat_exp(&h, s).unwrap() * mat_exp(&h, t).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-11);
        }
    }
}
