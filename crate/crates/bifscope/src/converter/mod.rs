//! Domain model of the exact two-stage switching system and builders for the
//! example converter configurations.
//!
//! Within each clock period the dynamics runs stage S1 on `[0, d)` and stage
//! S2 on `[d, T)`; the switch between them happens where the compensator
//! output `y = Cx + Du` meets the ramp `h(t)`. Which physical switch state
//! (conducting or freewheeling) plays the role of S1 varies per example and
//! is recorded in [`ControlScheme`].

mod examples;
mod modelfile;
mod tf;

pub use examples::{build_example, build_example_with, example_name, example_parameters};
pub use modelfile::{model_from_json, model_to_json, ModelFile};
pub use tf::{compose_plant_compensator, tf_to_state_space, Realization, TransferFunction};

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{RealMatrix, RealVector};

/// The exact two-stage switched-linear model.
///
/// `xdot = A_i x + B_i u + g_i` in stage i, compensator output
/// `y = c x + d u`, converter output voltage `v_o = e_i x + e_offset`.
///
/// `g1`/`g2` carry state-independent drifts (a constant-current load folds
/// into them); they are zero for plain topologies. `e_offset` plays the same
/// role for the output row.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchedSystem {
    pub a1: RealMatrix,
    pub a2: RealMatrix,
    pub b1: RealMatrix,
    pub b2: RealMatrix,
    pub g1: RealVector,
    pub g2: RealVector,
    pub c: RowDVector<f64>,
    pub d: RowDVector<f64>,
    pub e1: RowDVector<f64>,
    pub e2: RowDVector<f64>,
    pub e_offset: f64,
}

impl SwitchedSystem {
    /// Builds a system with zero drifts and `e1 = e2`.
    pub fn new(
        a1: RealMatrix,
        a2: RealMatrix,
        b1: RealMatrix,
        b2: RealMatrix,
        c: RowDVector<f64>,
        d: RowDVector<f64>,
        e: RowDVector<f64>,
    ) -> Result<Self> {
        let n = a1.nrows();
        let sys = Self {
            a1,
            a2,
            b1,
            b2,
            g1: DVector::zeros(n),
            g2: DVector::zeros(n),
            c,
            d,
            e1: e.clone(),
            e2: e,
            e_offset: 0.0,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn dim(&self) -> usize {
        self.a1.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 || n > crate::numerics::MAX_DIM {
            return Err(Error::Dimension(format!("system dimension {n} out of range")));
        }
        let square = |m: &RealMatrix, name: &str| -> Result<()> {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Dimension(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            Ok(())
        };
        square(&self.a1, "A1")?;
        square(&self.a2, "A2")?;
        for (m, name) in [(&self.b1, "B1"), (&self.b2, "B2")] {
            if m.nrows() != n || m.ncols() != 2 {
                return Err(Error::Dimension(format!(
                    "{name} must be {n}x2, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        for (v, name) in [(&self.g1, "g1"), (&self.g2, "g2")] {
            if v.len() != n {
                return Err(Error::Dimension(format!("{name} must have length {n}")));
            }
        }
        for (r, name) in [(&self.c, "C"), (&self.e1, "E1"), (&self.e2, "E2")] {
            if r.len() != n {
                return Err(Error::Dimension(format!("{name} must be 1x{n}")));
            }
        }
        if self.d.len() != 2 {
            return Err(Error::Dimension("D must be 1x2".into()));
        }
        let finite = self.a1.iter().all(|x| x.is_finite())
            && self.a2.iter().all(|x| x.is_finite())
            && self.b1.iter().all(|x| x.is_finite())
            && self.b2.iter().all(|x| x.is_finite())
            && self.g1.iter().all(|x| x.is_finite())
            && self.g2.iter().all(|x| x.is_finite())
            && self.c.iter().all(|x| x.is_finite())
            && self.d.iter().all(|x| x.is_finite())
            && self.e1.iter().all(|x| x.is_finite())
            && self.e2.iter().all(|x| x.is_finite())
            && self.e_offset.is_finite();
        if !finite {
            return Err(Error::InvalidModel("non-finite matrix entry".into()));
        }
        Ok(())
    }

    /// Constant forcing term `B_i u + g_i` for the given stage.
    pub fn forcing(&self, stage: Stage, u: &InputVector) -> RealVector {
        let uv = u.as_vector();
        match stage {
            Stage::S1 => &self.b1 * &uv + &self.g1,
            Stage::S2 => &self.b2 * &uv + &self.g2,
        }
    }

    pub fn a(&self, stage: Stage) -> &RealMatrix {
        match stage {
            Stage::S1 => &self.a1,
            Stage::S2 => &self.a2,
        }
    }

    /// State derivative in the given stage.
    pub fn xdot(&self, stage: Stage, x: &RealVector, u: &InputVector) -> RealVector {
        self.a(stage) * x + self.forcing(stage, u)
    }

    /// Compensator output `y = Cx + Du`.
    pub fn y(&self, x: &RealVector, u: &InputVector) -> f64 {
        (&self.c * x)[0] + (&self.d * u.as_vector())[0]
    }

    /// Converter output voltage `v_o`.
    pub fn v_out(&self, stage: Stage, x: &RealVector) -> f64 {
        let row = match stage {
            Stage::S1 => &self.e1,
            Stage::S2 => &self.e2,
        };
        (row * x)[0] + self.e_offset
    }
}

/// Which of the two affine stages is active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    S1,
    S2,
}

/// Periodic sawtooth `h(t) = V_l + (V_h - V_l) (t/T mod 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampSpec {
    pub v_low: f64,
    pub v_high: f64,
    pub period: f64,
}

impl RampSpec {
    pub fn new(v_low: f64, v_high: f64, period: f64) -> Result<Self> {
        let r = Self { v_low, v_high, period };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0) {
            return Err(Error::InvalidModel("ramp period must be positive".into()));
        }
        if self.v_high < self.v_low {
            return Err(Error::InvalidModel("ramp requires V_h >= V_l".into()));
        }
        Ok(())
    }

    /// Ramp amplitude `V_m = V_h - V_l`.
    pub fn amplitude(&self) -> f64 {
        self.v_high - self.v_low
    }

    /// Ramp slope `m_a = V_m / T`.
    pub fn slope(&self) -> f64 {
        self.amplitude() / self.period
    }

    pub fn switching_freq(&self) -> f64 {
        1.0 / self.period
    }

    pub fn omega_s(&self) -> f64 {
        std::f64::consts::TAU / self.period
    }

    /// Ramp value at `t` (periodically extended).
    pub fn value(&self, t: f64) -> f64 {
        let frac = (t / self.period).rem_euclid(1.0);
        self.v_low + self.amplitude() * frac
    }

    /// Ramp value at duty fraction `dc` within one period.
    pub fn value_at_duty(&self, dc: f64) -> f64 {
        self.v_low + self.amplitude() * dc
    }
}

/// The two exogenous inputs of Fig. 1: source voltage and the reference
/// (voltage command `v_r` or current command `i_c`, per scheme).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputVector {
    pub source: f64,
    pub command: f64,
}

impl InputVector {
    pub fn new(source: f64, command: f64) -> Self {
        Self { source, command }
    }

    pub fn as_vector(&self) -> RealVector {
        DVector::from_column_slice(&[self.source, self.command])
    }
}

/// PWM scheme descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlScheme {
    pub kind: SchemeKind,
    /// Stage S1 is the one active while `y > h` (all catalog entries use this
    /// orientation; kept configurable for model files).
    pub stage1_while_y_above: bool,
    /// Whether stage S1 is the conducting (switch-on) interval. Only affects
    /// how duty cycles are reported, not the analysis.
    pub stage1_conducts: bool,
    /// Fixed on-time `d` for constant on-time control, seconds.
    pub on_time: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeKind {
    FixedFrequencyTrailingEdge,
    ConstantOnTime,
}

impl ControlScheme {
    pub fn fixed_frequency() -> Self {
        Self {
            kind: SchemeKind::FixedFrequencyTrailingEdge,
            stage1_while_y_above: true,
            stage1_conducts: true,
            on_time: None,
        }
    }

    /// Fixed-frequency scheme whose S1 interval is the freewheeling stage
    /// (switch conducts during S2); duty reports are flipped accordingly.
    pub fn fixed_frequency_stage1_off() -> Self {
        Self {
            stage1_conducts: false,
            ..Self::fixed_frequency()
        }
    }

    pub fn constant_on_time(on_time: f64) -> Self {
        Self {
            kind: SchemeKind::ConstantOnTime,
            stage1_while_y_above: true,
            stage1_conducts: true,
            on_time: Some(on_time),
        }
    }

    pub fn is_cotc(&self) -> bool {
        self.kind == SchemeKind::ConstantOnTime
    }

    /// Maps a stage-S1 duty fraction to the conventional switch duty cycle.
    pub fn reported_duty(&self, stage1_fraction: f64) -> f64 {
        if self.stage1_conducts {
            stage1_fraction
        } else {
            1.0 - stage1_fraction
        }
    }

    pub fn validate(&self, ramp: &RampSpec) -> Result<()> {
        match self.kind {
            SchemeKind::FixedFrequencyTrailingEdge => Ok(()),
            SchemeKind::ConstantOnTime => {
                let d = self
                    .on_time
                    .ok_or_else(|| Error::InvalidModel("COTC requires on_time".into()))?;
                if d <= 0.0 || d >= ramp.period {
                    return Err(Error::InvalidModel(format!(
                        "COTC on-time {d} must satisfy 0 < d < T = {}",
                        ramp.period
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A complete analyzable converter description.
#[derive(Clone, Debug)]
pub struct Model {
    pub system: SwitchedSystem,
    pub ramp: RampSpec,
    pub input: InputVector,
    pub scheme: ControlScheme,
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.ramp.validate()?;
        self.scheme.validate(&self.ramp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ramp_derived_quantities() {
        let r = RampSpec::new(3.8, 8.2, 400e-6).unwrap();
        assert_relative_eq!(r.amplitude(), 4.4);
        assert_relative_eq!(r.slope(), 11000.0);
        assert_relative_eq!(r.switching_freq(), 2500.0);
        assert_relative_eq!(r.value(0.0), 3.8);
        assert_relative_eq!(r.value(200e-6), 6.0);
        assert_relative_eq!(r.value(400e-6), 3.8); // wraps
        assert_relative_eq!(r.value_at_duty(0.5), 6.0);
    }

    #[test]
    fn zero_amplitude_ramp_is_allowed() {
        // CMC / COTC entries use a constant comparator level, m_a = 0.
        let r = RampSpec::new(0.0, 0.0, 1e-6).unwrap();
        assert_relative_eq!(r.slope(), 0.0);
    }

    #[test]
    fn ramp_rejects_bad_period() {
        assert!(RampSpec::new(0.0, 1.0, 0.0).is_err());
        assert!(RampSpec::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn duty_reporting_follows_conducting_stage() {
        let s = ControlScheme::fixed_frequency();
        assert_relative_eq!(s.reported_duty(0.3), 0.3);
        let s = ControlScheme::fixed_frequency_stage1_off();
        assert_relative_eq!(s.reported_duty(0.3), 0.7);
    }

    #[test]
    fn cotc_on_time_must_be_interior() {
        let ramp = RampSpec::new(0.0, 0.0, 3e-6).unwrap();
        assert!(ControlScheme::constant_on_time(1.2e-6).validate(&ramp).is_ok());
        assert!(ControlScheme::constant_on_time(3e-6).validate(&ramp).is_err());
        assert!(ControlScheme::constant_on_time(0.0).validate(&ramp).is_err());
    }
}
