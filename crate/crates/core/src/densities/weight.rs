use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// exp(−1/(1−u²)) bumps centred on each support interval.
    #[default]
    Bump,
    /// Smooth plateaus equal to 1 away from the support edges; pointwise monotone in δ₀.
    Plateau,
}

/// Width of the smooth transition layer of the plateau profile, relative to the box scale.
pub const PLATEAU_EDGE: f64 = 0.25;

/// W(x, y) = ∏ u(x_i / R) ∏ v(y_i / R), with supp v = {δ₀ ≤ |y| ≤ 1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub delta0: f64,
    pub scale: f64,
    pub profile: Profile,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { delta0: 0.25, scale: 1.0, profile: Profile::Bump }
    }
}

fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1.
fn step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

impl WeightSpec {
    pub fn new(delta0: f64, scale: f64, profile: Profile) -> Result<Self> {
        let w = WeightSpec { delta0, scale, profile };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta0 > 0.0 && self.delta0 < 1.0) || !(self.scale > 0.0 && self.scale.is_finite()) {
            return invalid("weight needs 0 < delta0 < 1 and scale > 0");
        }
        if self.profile == Profile::Plateau && self.delta0 + 2.0 * PLATEAU_EDGE > 1.0 {
            return invalid("plateau profile needs delta0 <= 0.5");
        }
        Ok(())
    }

    /// Profile in an x-coordinate, already divided by the scale.
    #[inline]
    pub fn u(&self, x: f64) -> f64 {
        match self.profile {
            Profile::Bump => bump(x),
            Profile::Plateau => step((1.0 - x.abs()) / PLATEAU_EDGE),
        }
    }

    /// Profile in a y-coordinate, already divided by the scale.
    #[inline]
    pub fn v(&self, y: f64) -> f64 {
        let a = y.abs();
        match self.profile {
            Profile::Bump => bump((2.0 * a - (1.0 + self.delta0)) / (1.0 - self.delta0)),
            Profile::Plateau => step((a - self.delta0) / PLATEAU_EDGE) * step((1.0 - a) / PLATEAU_EDGE),
        }
    }

    pub fn eval(&self, z: [f64; 6]) -> f64 {
        let s = self.scale;
        let mut w = 1.0;
        for i in 0..3 {
            w *= self.u(z[i] / s) * self.v(z[i + 3] / s);
            if w == 0.0 {
                return 0.0;
            }
        }
        w
    }

    /// Centre of the y-profile, where v is maximal.
    pub fn y_centre(&self) -> f64 {
        0.5 * (1.0 + self.delta0) * self.scale
    }
}

pub fn weight_eval(w: &WeightSpec, z: [f64; 6]) -> f64 {
    w.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_and_maximum() {
        for w in [WeightSpec::default(), WeightSpec::new(0.25, 1.0, Profile::Plateau).unwrap()] {
            assert_eq!(w.eval([0.0, 0.0, 0.0, 0.2, 0.5, 0.5]), 0.0);
            assert_eq!(w.eval([1.01, 0.0, 0.0, 0.5, 0.5, 0.5]), 0.0);
            let c = w.y_centre();
            let top = w.eval([0.0, 0.0, 0.0, c, c, c]);
            assert!(top > 0.0);
            for k in 1..50 {
                let y = 0.25 + 0.75 * k as f64 / 50.0;
                assert!(w.v(y) <= w.v(c) + 1e-15);
            }
            assert_eq!(w.eval([0.3, -0.2, 0.1, -c, c, -c]), w.eval([-0.3, 0.2, -0.1, c, -c, c]));
        }
    }

    #[test]
    fn plateau_monotone_in_delta0() {
        let a = WeightSpec::new(0.25, 1.0, Profile::Plateau).unwrap();
        let b = WeightSpec::new(0.125, 1.0, Profile::Plateau).unwrap();
        for k in 0..=200 {
            let y = k as f64 / 200.0;
            assert!(b.v(y) >= a.v(y));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(WeightSpec::new(0.0, 1.0, Profile::Bump).is_err());
        assert!(WeightSpec::new(0.9, 1.0, Profile::Plateau).is_err());
        assert!(WeightSpec::new(0.5, -1.0, Profile::Bump).is_err());
    }
}
