use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Isotropic material constants. `zeta` and `c0` are derived once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PhysParams {
    g: f64,
    nu: f64,
    b: f64,
    d: f64,
    zeta: f64,
    c0: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "G")]
    g: f64,
    nu: f64,
    b: f64,
    d: f64,
}

impl TryFrom<RawParams> for PhysParams {
    type Error = crate::PnError;
    fn try_from(r: RawParams) -> Result<Self> {
        PhysParams::new(r.g, r.nu, r.b, r.d)
    }
}

impl From<PhysParams> for RawParams {
    fn from(p: PhysParams) -> Self {
        RawParams { g: p.g, nu: p.nu, b: p.b, d: p.d }
    }
}

impl PhysParams {
    pub fn new(g: f64, nu: f64, b: f64, d: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(invalid("G", format!("must be positive, got {g}")));
        }
        if !(nu > 0.0 && nu < 0.5) {
            return Err(invalid("nu", format!("must lie in (0, 1/2), got {nu}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(invalid("b", format!("must be positive, got {b}")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(invalid("d", format!("must be positive, got {d}")));
        }
        Ok(Self {
            g,
            nu,
            b,
            d,
            zeta: d / (2.0 * (1.0 - nu)),
            c0: 2.0 * g / (1.0 - nu),
        })
    }

    /// G = b = d = 1, nu = 1/4.
    pub fn desk() -> Self {
        Self::new(1.0, 0.25, 1.0, 1.0).unwrap()
    }

    /// Shear modulus chosen so that G/(1-nu) = 1, i.e. c0 = 2.
    pub fn normalized(nu: f64, b: f64, d: f64) -> Result<Self> {
        Self::new(1.0 - nu, nu, b, d)
    }

    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    /// Core half-width d / (2(1-nu)).
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    /// Coefficient of the half-Laplacian in the slip-plane equation, 2G/(1-nu).
    pub fn c0(&self) -> f64 {
        self.c0
    }
    /// G/(1-nu): the prefactor of the reduced elastic energy and of the traction map.
    pub fn kappa(&self) -> f64 {
        self.g / (1.0 - self.nu)
    }
    /// First Lame constant for plane strain.
    pub fn lame_lambda(&self) -> f64 {
        2.0 * self.nu * self.g / (1.0 - 2.0 * self.nu)
    }
    /// Natural energy unit G b^2 / d.
    pub fn energy_unit(&self) -> f64 {
        self.g * self.b * self.b / self.d
    }
    /// Natural stress unit G b / d.
    pub fn stress_unit(&self) -> f64 {
        self.g * self.b / self.d
    }
}
