//! Physical constants, exciton parameters and the conversions between SI
//! units and the dimensionless units of the disorder length `L0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values; the single source for every module.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Boltzmann constant, J/K (exact).
    pub const K_B: f64 = 1.380_649e-23;
    /// Electron rest mass, kg.
    pub const M0: f64 = 9.109_383_701_5e-31;
    /// Elementary charge, C (exact); converts eV to J.
    pub const E_CHARGE: f64 = 1.602_176_634e-19;
}

use constants::{E_CHARGE, HBAR, M0};

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be non-negative and finite, got {v}")))
    }
}

/// An exciton species in a quantum well: carrier masses (units of `m0`),
/// two-dimensional Bohr radius and binding energy, and the optical data the
/// emission model needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitonMaterial {
    pub name: String,
    pub m_e: f64,
    pub m_h: f64,
    /// Bohr radius of the 2D exciton, m.
    pub a0_m: f64,
    /// Binding energy of the 2D exciton, meV.
    pub e0_mev: f64,
    /// Emission wavelength inside the material, m.
    pub wavelength_m: f64,
    /// Radiative rate of an isolated exciton, 1/s.
    pub gamma0_per_s: f64,
}

impl ExcitonMaterial {
    /// GaAs quantum well. The masses and the in-material wavelength are the
    /// usual literature values; `a0 = 6.04 nm` and `E0 = 18.5 meV` are the
    /// ideal 2D hydrogenic values for GaAs (half the bulk radius, four
    /// times the bulk Rydberg), and `γ0 = 1/ns` is an order-of-magnitude
    /// placeholder. Override them for quantitative work.
    pub fn gaas() -> Self {
        Self {
            name: "GaAs".into(),
            m_e: 0.0665,
            m_h: 0.377,
            a0_m: 6.04e-9,
            e0_mev: 18.5,
            wavelength_m: 228e-9,
            gamma0_per_s: 1e9,
        }
    }

    /// A shipped preset by (case-insensitive) name.
    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gaas" => Ok(Self::gaas()),
            other => Err(Error::precondition(format!("unknown material preset '{other}'"))),
        }
    }

    /// Parses a material from TOML `key = value` pairs; all fields required.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::precondition(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        positive("m_e", self.m_e)?;
        positive("m_h", self.m_h)?;
        positive("a0_m", self.a0_m)?;
        positive("e0_mev", self.e0_mev)?;
        positive("wavelength_m", self.wavelength_m)?;
        positive("gamma0_per_s", self.gamma0_per_s)
    }

    /// `M = m_e + m_h`, units of `m0`.
    pub fn total_mass(&self) -> f64 {
        self.m_e + self.m_h
    }

    /// `m_r = m_e m_h / M`, units of `m0`.
    pub fn reduced_mass(&self) -> f64 {
        self.m_e * self.m_h / self.total_mass()
    }

    /// `M` in kg.
    pub fn mass_kg(&self) -> f64 {
        self.total_mass() * M0
    }

    pub fn binding_energy_j(&self) -> f64 {
        self.e0_mev * 1e-3 * E_CHARGE
    }

    /// Exchange integral in J m².
    pub fn exchange_integral(&self) -> f64 {
        exchange_integral(self.a0_m, self.binding_energy_j())
    }

    /// Dimensionless interaction strength.
    pub fn u(&self) -> f64 {
        6.06 * self.total_mass() / self.reduced_mass()
    }
}

/// Coulomb exchange integral of two 2D excitons,
/// `I = 4π a0² (1 - 315π²/4096) E0`; units of `a0² E0`.
pub fn exchange_integral(a0: f64, e0: f64) -> f64 {
    4.0 * std::f64::consts::PI * a0 * a0 * (1.0 - 315.0 * std::f64::consts::PI.powi(2) / 4096.0) * e0
}

/// `u = 4MI/ħ² ≈ 6.06 M/m_r = 6.06 (m_e + m_h)² / (m_e m_h)`.
pub fn u_from_masses(m_e: f64, m_h: f64) -> Result<f64> {
    positive("m_e", m_e)?;
    positive("m_h", m_h)?;
    Ok(6.06 * (m_e + m_h).powi(2) / (m_e * m_h))
}

/// `L0 = ħ²/(2Mξ)` for disorder strength `xi` (J m) and mass `mass_kg`.
pub fn length_scale_from_disorder(xi: f64, mass_kg: f64) -> Result<f64> {
    positive("xi", xi)?;
    positive("mass", mass_kg)?;
    Ok(HBAR * HBAR / (2.0 * mass_kg * xi))
}

/// Inverse of [`length_scale_from_disorder`]: `ξ = ħ²/(2M L0)`.
pub fn xi_from_length_scale(l0: f64, mass_kg: f64) -> Result<f64> {
    positive("L0", l0)?;
    positive("mass", mass_kg)?;
    Ok(HBAR * HBAR / (2.0 * mass_kg * l0))
}

/// `n = n_SI L0²` for an areal density in 1/m².
pub fn density_to_dimensionless(n_si: f64, l0: f64) -> Result<f64> {
    non_negative("density", n_si)?;
    positive("L0", l0)?;
    Ok(n_si * l0 * l0)
}

/// `n_SI = n / L0²`, in 1/m².
pub fn density_from_dimensionless(n: f64, l0: f64) -> Result<f64> {
    non_negative("density", n)?;
    positive("L0", l0)?;
    Ok(n / (l0 * l0))
}

/// Areal density in 1/cm² to 1/m².
pub fn per_cm2_to_per_m2(n: f64) -> f64 {
    n * 1e4
}

/// Healing length `l_h = 2/sqrt(u n_c)` in units of `L0`.
pub fn healing_length(u: f64, n_c: f64) -> Result<f64> {
    positive("u", u)?;
    positive("n_c", n_c)?;
    Ok(2.0 / (u * n_c).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_lookup() {
        assert_eq!(ExcitonMaterial::preset("GAAS").unwrap(), ExcitonMaterial::gaas());
        assert!(ExcitonMaterial::preset("InAs").is_err());
    }

    #[test]
    fn invalid_inputs_are_domain_errors() {
        assert!(u_from_masses(0.0, 1.0).is_err());
        assert!(length_scale_from_disorder(-1.0, 1.0).is_err());
        assert!(density_to_dimensionless(-1.0, 1e-8).is_err());
        assert!(healing_length(0.0, 1.0).is_err());
    }
}
