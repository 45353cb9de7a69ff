//! Bundled fixture knots.

use crate::laurent::{Laurent, LaurentMatrix};
use crate::words::{parse_presentation, Presentation};
use crate::Result;

/// A fixture knot given as a braid closure and as a two-generator
/// presentation, with a Seifert matrix for the untwisted oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    /// `"<strands>; <letters>"`.
    pub braid: &'static str,
    /// Two-generator presentation used by the Riley family.
    pub two_bridge: &'static str,
    /// Row-major 2×2 Seifert matrix.
    pub seifert: [[i64; 2]; 2],
    /// Normalized Alexander polynomial as `(min_degree, coeffs)`.
    pub delta: (i64, &'static [i64]),
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "trefoil",
        braid: "2; 1 1 1",
        two_bridge: "gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2\n",
        seifert: [[-1, 1], [0, -1]],
        delta: (-1, &[1, -1, 1]),
    },
    Preset {
        name: "figure-eight",
        braid: "3; 1 -2 1 -2",
        two_bridge: "gens: x1 x2\nrel: x1*X2*X1*x2*x1*X2*x1*x2*X1*X2\n",
        seifert: [[1, 1], [0, -1]],
        delta: (-1, &[-1, 3, -1]),
    },
    Preset {
        name: "5_2",
        braid: "3; 1 1 1 2 -1 2",
        two_bridge: "gens: x1 x2\nrel: x1*x2*X1*X2*x1*x2*x1*X2*X1*x2*x1*X2*X1*X2\n",
        seifert: [[1, 1], [0, 2]],
        delta: (-1, &[2, -3, 2]),
    },
];

pub const PRESET_NAMES: &[&str] = &["trefoil", "figure-eight", "5_2"];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    pub fn braid_presentation(&self) -> Result<Presentation> {
        parse_presentation(&format!("braid: {}", self.braid))
    }

    pub fn two_bridge_presentation(&self) -> Result<Presentation> {
        parse_presentation(self.two_bridge)
    }

    pub fn expected_delta(&self) -> Laurent<i64> {
        Laurent::new(self.delta.0, self.delta.1.to_vec())
    }
}

/// `det(V - t Vᵀ)` normalized to be symmetric with value 1 at `t = 1`.
pub fn seifert_alexander(v: &[Vec<i64>]) -> Result<Laurent<i64>> {
    let n = v.len();
    let m = LaurentMatrix::from_fn(n, n, |i, j| Laurent::new(0, vec![v[i][j], -v[j][i]]));
    Ok(m.det()?.normalize_symmetric(0.0)?.polynomial)
}
