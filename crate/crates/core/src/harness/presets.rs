//! The four canned W-class states.

use serde::{Deserialize, Serialize};

use crate::states::{build_gwv, GwvSpec, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Example1,
    Example2,
    Example3,
    Example4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Example1, Preset::Example2, Preset::Example3, Preset::Example4];

    pub fn from_index(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Preset::Example1),
            2 => Ok(Preset::Example2),
            3 => Ok(Preset::Example3),
            4 => Ok(Preset::Example4),
            _ => Err(Error::Argument(format!("no example {n}; expected 1-4"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Example1 => "example1",
            Preset::Example2 => "example2",
            Preset::Example3 => "example3",
            Preset::Example4 => "example4",
        }
    }

    /// Real amplitudes of `|10…0⟩, |01…0⟩, …`; examples 2 and 4 share a state.
    pub fn amplitudes(self) -> Vec<f64> {
        let s6 = 6f64.sqrt();
        match self {
            Preset::Example1 => vec![1.0 / s6, 1.0 / s6, 2.0 / s6],
            Preset::Example2 | Preset::Example4 => vec![0.5f64.sqrt(), 0.5, 0.4, 0.3],
            Preset::Example3 => vec![1.0 / s6, 2.0 / s6, 1.0 / s6],
        }
    }

    pub fn spec(self) -> GwvSpec {
        GwvSpec::w_class(&self.amplitudes()).expect("preset amplitudes are normalized")
    }

    pub fn state(self) -> StateVector {
        build_gwv(&self.spec()).expect("preset spec is valid")
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown preset '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn preset_amplitudes_are_exact() {
        let s = 1.0 / 6f64.sqrt();
        assert_eq!(Preset::Example1.amplitudes(), vec![s, s, 2.0 * s]);
        assert_eq!(Preset::Example3.amplitudes(), vec![s, 2.0 * s, s]);
        let mut a2 = Preset::Example2.amplitudes();
        a2.reverse();
        assert_eq!(a2, vec![0.3, 0.4, 0.5, 0.5f64.sqrt()]);
        assert_eq!(Preset::Example4.spec(), Preset::Example2.spec());
    }

    #[test]
    fn preset_states() {
        let psi = Preset::Example1.state();
        assert!((psi.amplitude(&[0, 0, 1]) - C64::new(2.0 / 6f64.sqrt(), 0.0)).norm() < 1e-15);
        let psi = Preset::Example2.state();
        assert_eq!(psi.dims().as_slice(), &[2, 2, 2, 2]);
        assert!((psi.amplitude(&[0, 0, 0, 1]).re - 0.3).abs() < 1e-15);
        assert_eq!("example3".parse::<Preset>().unwrap(), Preset::Example3);
        assert!(Preset::from_index(5).is_err());
    }
}
