//! Computational companion for the coadjoint orbit method on SU(2,1).
//!
//! The crate covers the exact structure of su(2,1), coadjoint orbits of the
//! Borel subgroup `B` and its exponential part `B1`, the restriction maps
//! `g* -> b*` and `g* -> b1*`, discrete-series branching tables, and a
//! numerical pipeline that counts L2 solutions of the first-order systems
//! `D±_m` attached to the non-holomorphic discrete series.
//!
//! Exact arithmetic (big rationals) is used wherever a statement is
//! arithmetic; complex floating point is confined to the ODE and sampling
//! modules.

pub mod checks;
pub mod cli;
pub mod coadjoint_orbits;
pub mod discrete_series;
pub mod error;
pub mod integrate;
pub mod irregular_connection;
pub mod lie_su21;
pub mod linalg;
pub mod moment_projection;
pub mod ode_builder;
pub mod regular_singular;
pub mod symplectic_reduction;

pub use error::{Error, Result};

/// Exact rational scalar.
pub type Q = num_rational::BigRational;
/// Complex double.
pub type C64 = num_complex::Complex64;

/// A sign `+` or `-`, used for orbit labels, representations and systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_i64() as f64
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!("unknown sign '{other}'"))),
        }
    }
}

/// Build an exact rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
