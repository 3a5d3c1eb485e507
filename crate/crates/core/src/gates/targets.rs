use serde::{Deserialize, Serialize};

use crate::linalg::{c, cis, Mat2, Mat4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    Cz,
    Cnot,
    SqrtCnot,
    Iswap,
    Swap,
    Identity,
    /// Single-qubit `diag(−i, i)`; see [`z_pi`].
    ZPi,
}

impl GateKind {
    pub const TWO_QUBIT: [GateKind; 6] = [GateKind::Cz, GateKind::Cnot, GateKind::SqrtCnot, GateKind::Iswap, GateKind::Swap, GateKind::Identity];

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Cz => "CZ",
            GateKind::Cnot => "CNOT",
            GateKind::SqrtCnot => "SQRT_CNOT",
            GateKind::Iswap => "ISWAP",
            GateKind::Swap => "SWAP",
            GateKind::Identity => "IDENTITY",
            GateKind::ZPi => "Z_PI",
        }
    }

    /// Matrix in the order `{↑↑, ↑↓, ↓↑, ↓↓}`; `None` for [`GateKind::ZPi`].
    pub fn matrix(&self) -> Option<Mat4> {
        let o = c(0., 0.);
        let l = c(1., 0.);
        let i = c(0., 1.);
        let m = match self {
            GateKind::Cz => Mat4::new(l, o, o, o, o, l, o, o, o, o, l, o, o, o, o, -l),
            GateKind::Cnot => Mat4::new(l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o),
            GateKind::SqrtCnot => {
                let (p, q) = (c(0.5, 0.5), c(0.5, -0.5));
                Mat4::new(l, o, o, o, o, l, o, o, o, o, p, q, o, o, q, p)
            }
            GateKind::Iswap => Mat4::new(l, o, o, o, o, o, i, o, o, i, o, o, o, o, o, l),
            GateKind::Swap => Mat4::new(l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l),
            GateKind::Identity => Mat4::identity(),
            GateKind::ZPi => return None,
        };
        Some(m)
    }
}

/// `Z(π) = diag(−i, i)`.
pub fn z_pi() -> Mat2 {
    Mat2::new(c(0., -1.), c(0., 0.), c(0., 0.), c(0., 1.))
}

/// `diag(1, e^{iη}·u, 1)`: a unitary on `{↑↓, ↓↑}` with local phase `η`.
pub fn s3_embedded(u: &Mat2, eta: f64) -> Mat4 {
    let mut m = Mat4::identity();
    let ph = cis(eta);
    for a in 0..2 {
        for b in 0..2 {
            m[(1 + a, 1 + b)] = u[(a, b)] * ph;
        }
    }
    m
}
