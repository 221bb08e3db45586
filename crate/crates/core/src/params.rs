//! Simulation constants.

use core::fmt;

/// Side of the square the flock starts in, in grid units.
pub const SQUARE_SIDE: f64 = 768.0;

/// All constants of one simulation.
///
/// Lengths are in grid units (1/768 of the initial square's side), the
/// perception angle is in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Lateral size of each upwash region.
    pub upwash_width: f64,
    /// Longitudinal size of the wash regions trailing a bird.
    pub wash_depth: f64,
    pub wingspan: f64,
    /// Lateral displacement per time step.
    pub lateral_step: f64,
    /// Longitudinal displacement per time step.
    pub longitudinal_step: f64,
    /// Longitudinal margin under which laterally overlapping birds collide.
    pub collision_margin: f64,
    /// Full opening angle of the perception cone, in degrees.
    pub perception_angle: f64,
    pub birds: usize,
    /// Maximum number of time steps.
    pub steps: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            upwash_width: 30.0,
            wash_depth: 50.0,
            wingspan: 50.0,
            lateral_step: 3.0,
            longitudinal_step: 3.0,
            collision_margin: 9.0,
            perception_angle: 180.0,
            birds: 15,
            steps: 2000,
        }
    }
}

impl Params {
    pub fn with_flock(mut self, birds: usize, perception_angle: f64) -> Self {
        self.birds = birds;
        self.perception_angle = perception_angle;
        self
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let lengths = [
            ("upwash_width", self.upwash_width),
            ("wash_depth", self.wash_depth),
            ("wingspan", self.wingspan),
            ("lateral_step", self.lateral_step),
            ("longitudinal_step", self.longitudinal_step),
            ("collision_margin", self.collision_margin),
        ];
        for (name, value) in lengths {
            // also rejects NaN
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamsError::NonPositiveLength { name, value });
            }
        }
        if !(self.perception_angle > 0.0 && self.perception_angle <= 180.0) {
            return Err(ParamsError::PerceptionAngle(self.perception_angle));
        }
        if self.birds == 0 {
            return Err(ParamsError::NoBirds);
        }
        if self.steps == 0 {
            return Err(ParamsError::NoSteps);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamsError {
    NonPositiveLength { name: &'static str, value: f64 },
    PerceptionAngle(f64),
    NoBirds,
    NoSteps,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamsError::NonPositiveLength { name, value } => {
                write!(f, "{name} must be a positive length, got {value}")
            }
            ParamsError::PerceptionAngle(a) => {
                write!(f, "perception angle must lie in (0, 180] degrees, got {a}")
            }
            ParamsError::NoBirds => f.write_str("a flock needs at least one bird"),
            ParamsError::NoSteps => f.write_str("a simulation needs at least one time step"),
        }
    }
}

impl core::error::Error for ParamsError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = Params::default();
        assert_eq!(p.validate(), Ok(()));
        assert_eq!(p.wingspan, 50.0);
        assert_eq!(p.collision_margin, 9.0);
    }

    #[test]
    fn rejects_bad_values() {
        let p = Params {
            wash_depth: 0.0,
            ..Params::default()
        };
        assert!(matches!(
            p.validate(),
            Err(ParamsError::NonPositiveLength {
                name: "wash_depth",
                ..
            })
        ));
        let p = Params {
            lateral_step: f64::NAN,
            ..Params::default()
        };
        assert!(p.validate().is_err());
        let p = Params::default().with_flock(15, 181.0);
        assert_eq!(p.validate(), Err(ParamsError::PerceptionAngle(181.0)));
        let p = Params::default().with_flock(15, 0.0);
        assert!(p.validate().is_err());
        assert_eq!(
            Params::default().with_flock(0, 180.0).validate(),
            Err(ParamsError::NoBirds)
        );
        let p = Params {
            steps: 0,
            ..Params::default()
        };
        assert_eq!(p.validate(), Err(ParamsError::NoSteps));
    }
}
