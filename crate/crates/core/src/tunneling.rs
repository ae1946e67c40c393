//! Decay factor, the length scale `z₀ = ħ/(mc)`, and barrier transmittance,
//! with bookkeeping between SI and natural units.

use crate::algebra::{Complex, I};
use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Electron mass in kg as used for the `z₀` fixture.
pub const ELECTRON_MASS: f64 = 9.109e-31;
/// Proton mass in kg.
pub const PROTON_MASS: f64 = 1.6726e-27;

/// `k = m√(1 − (E − V₀)²/m²)` inside the barrier.
pub fn decay_factor(energy: f64, barrier_height: f64, mass: f64) -> Result<f64> {
    let offset = energy - barrier_height;
    if !(mass > 0.0) || !offset.is_finite() {
        return Err(Error::invalid("mass", "must be positive"));
    }
    if offset.abs() >= mass {
        return Err(Error::NotEvanescent { offset, mass });
    }
    let r = offset / mass;
    Ok(mass * ((1.0 - r) * (1.0 + r)).sqrt())
}

/// `z₀ = ħ/(mc)` in meters for a mass in kg.
pub fn length_scale(mass_kg: f64) -> f64 {
    HBAR / (mass_kg * C)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Units {
    Si,
    /// `ħ = c = 1`, with masses and energies in units of `reference_mass·c²`
    /// and lengths in units of `ħ/(reference_mass·c)`.
    Natural {
        reference_mass: f64,
    },
}

/// Values of `ħ` and `c` in a unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
    pub units: Units,
}

impl UnitSystem {
    pub fn si() -> Self {
        UnitSystem {
            hbar: HBAR,
            c: C,
            units: Units::Si,
        }
    }

    pub fn natural(reference_mass: f64) -> Self {
        UnitSystem {
            hbar: 1.0,
            c: 1.0,
            units: Units::Natural { reference_mass },
        }
    }

    pub fn of(units: Units) -> Self {
        match units {
            Units::Si => UnitSystem::si(),
            Units::Natural { reference_mass } => UnitSystem::natural(reference_mass),
        }
    }

    /// `ħ/(mc)` in this system's length unit.
    pub fn length_scale(&self, mass: f64) -> f64 {
        self.hbar / (mass * self.c)
    }
}

fn check_barrier(l: f64, z0: f64) -> Result<()> {
    if !(l >= 0.0) || !l.is_finite() {
        return Err(Error::invalid("width", "barrier width must be non-negative"));
    }
    if !(z0 > 0.0) {
        return Err(Error::invalid("z0", "length scale must be positive"));
    }
    Ok(())
}

/// `T_c = e^{−ipl/ħ} / [cosh(l/z₀) + i(mc/p) sinh(l/z₀)]`.
pub fn transmission_coeff(p: f64, m: f64, l: f64, z0: f64, units: &UnitSystem) -> Result<Complex> {
    check_barrier(l, z0)?;
    if !(p > 0.0) {
        return Err(Error::invalid(
            "momentum",
            "p must be positive for the transmission phase",
        ));
    }
    let ratio = m * units.c / p;
    let x = l / z0;
    let phase = Complex::from_polar(1.0, -p * l / units.hbar);
    // divided through by cosh so large barriers underflow instead of overflowing
    let sech = 1.0 / x.cosh();
    Ok(phase * sech / (1.0 + I * (ratio * x.tanh())))
}

/// Transmittance with the `p → 0` limit flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmittance {
    pub value: f64,
    /// Set when `p = 0` and `value` is the exact limit 0.
    pub zero_momentum: bool,
}

/// `T = 1 / [cosh²(l/z₀) + (mc/p)² sinh²(l/z₀)]`.
pub fn transmittance(p: f64, m: f64, l: f64, z0: f64, units: &UnitSystem) -> Result<Transmittance> {
    check_barrier(l, z0)?;
    if p == 0.0 {
        let value = if l == 0.0 { 1.0 } else { 0.0 };
        return Ok(Transmittance {
            value,
            zero_momentum: true,
        });
    }
    if !(p > 0.0) {
        return Err(Error::invalid("momentum", "p must be non-negative"));
    }
    let x = l / z0;
    let ratio = m * units.c / p;
    let sech = 1.0 / x.cosh();
    let th = ratio * x.tanh();
    Ok(Transmittance {
        value: sech * sech / (1.0 + th * th),
        zero_momentum: false,
    })
}

/// Extreme relativistic limit `sech²(l/z₀)`.
pub fn max_transmittance(l: f64, z0: f64) -> Result<f64> {
    check_barrier(l, z0)?;
    let sech = 1.0 / (l / z0).cosh();
    Ok(sech * sech)
}

/// Barrier problem in a tagged unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingParams {
    pub energy: f64,
    pub barrier_height: f64,
    pub mass: f64,
    pub width: f64,
    pub momentum: f64,
    pub units: Units,
}

impl TunnelingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::invalid("mass", "must be positive"));
        }
        if !(self.width >= 0.0) {
            return Err(Error::invalid("width", "must be non-negative"));
        }
        if !(self.momentum >= 0.0) {
            return Err(Error::invalid("momentum", "must be non-negative"));
        }
        if let Units::Natural { reference_mass } = self.units {
            if !(reference_mass > 0.0) {
                return Err(Error::invalid("reference_mass", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn system(&self) -> UnitSystem {
        UnitSystem::of(self.units)
    }

    pub fn length_scale(&self) -> f64 {
        self.system().length_scale(self.mass)
    }

    /// Real exponent `z/z₀` of the barrier solutions at distance `z`.
    pub fn exponent(&self, z: f64) -> f64 {
        z / self.length_scale()
    }

    /// `k` in this system's energy unit.
    pub fn decay_factor(&self) -> Result<f64> {
        let c2 = self.system().c.powi(2);
        Ok(decay_factor(self.energy, self.barrier_height, self.mass * c2)? / c2)
    }

    pub fn transmission_coeff(&self) -> Result<Complex> {
        let u = self.system();
        transmission_coeff(self.momentum, self.mass, self.width, self.length_scale(), &u)
    }

    pub fn transmittance(&self) -> Result<Transmittance> {
        let u = self.system();
        transmittance(self.momentum, self.mass, self.width, self.length_scale(), &u)
    }

    /// Re-express every quantity in `to`; natural targets carry their
    /// reference mass.
    pub fn convert(&self, to: Units) -> TunnelingParams {
        let si = self.into_si();
        match to {
            Units::Si => si,
            Units::Natural { reference_mass: mr } => {
                let energy_unit = mr * C * C;
                let length_unit = HBAR / (mr * C);
                let momentum_unit = mr * C;
                TunnelingParams {
                    energy: si.energy / energy_unit,
                    barrier_height: si.barrier_height / energy_unit,
                    mass: si.mass / mr,
                    width: si.width / length_unit,
                    momentum: si.momentum / momentum_unit,
                    units: to,
                }
            }
        }
    }

    fn into_si(self) -> TunnelingParams {
        match self.units {
            Units::Si => self,
            Units::Natural { reference_mass: mr } => TunnelingParams {
                energy: self.energy * mr * C * C,
                barrier_height: self.barrier_height * mr * C * C,
                mass: self.mass * mr,
                width: self.width * HBAR / (mr * C),
                momentum: self.momentum * mr * C,
                units: Units::Si,
            },
        }
    }
}
