//! Discrete-series parameters of SU(2,1) and their branching to `B` and `B1`.

use serde::{Deserialize, Serialize, Serializer};

use crate::{Error, Result, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DsClass {
    Holo,
    AntiHolo,
    Neither,
}

impl std::fmt::Display for DsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DsClass::Holo => "Holo",
            DsClass::AntiHolo => "AntiHolo",
            DsClass::Neither => "Neither",
        })
    }
}

/// Weyl chambers of Harish-Chandra parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chamber {
    /// `(n1, n3) = (lambda(H12), lambda(H31))`, holomorphic.
    D1,
    /// `(n1, n23) = (lambda(H12), lambda(H23))`, anti-holomorphic.
    D2,
    /// `(n1, n2) = (lambda(H12), lambda(H13))` with `n1 > n2 > 0`.
    D3,
}

impl std::str::FromStr for Chamber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Chamber> {
        match s {
            "D1" | "d1" | "1" | "Δ1" => Ok(Chamber::D1),
            "D2" | "d2" | "2" | "Δ2" => Ok(Chamber::D2),
            "D3" | "d3" | "3" | "Δ3" => Ok(Chamber::D3),
            other => Err(Error::InvalidParameter(format!("unknown chamber '{other}'"))),
        }
    }
}

/// A discrete series through its compact-Cartan form `f0 = f0H H* + f0Z Z*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiscreteSeriesParam {
    pub f0h: i64,
    pub f0z: i64,
    pub class: DsClass,
}

impl DiscreteSeriesParam {
    pub fn new(f0h: i64, f0z: i64) -> Result<Self> {
        let class = classify(f0h, f0z)
            .ok_or_else(|| Error::InvalidParameter(format!("(f0H, f0Z) = ({f0h}, {f0z}) is not a discrete-series parameter")))?;
        Ok(DiscreteSeriesParam { f0h, f0z, class })
    }

    /// Degree of the cohomology carrying the representation.
    pub fn q_lambda(&self) -> u32 {
        match self.class {
            DsClass::Holo => 0,
            DsClass::Neither => 1,
            DsClass::AntiHolo => 2,
        }
    }

    pub fn n1(&self) -> i64 {
        self.f0h
    }

    /// The second Harish-Chandra coordinate in the natural chamber.
    pub fn second(&self) -> (Chamber, i64) {
        match self.class {
            DsClass::Holo => (Chamber::D1, -(self.f0h + self.f0z) / 2),
            DsClass::AntiHolo => (Chamber::D2, (self.f0z - self.f0h) / 2),
            DsClass::Neither => (Chamber::D3, (self.f0z + self.f0h) / 2),
        }
    }

    /// `(f0H, -f0Z)`: exchanges holomorphic and anti-holomorphic.
    pub fn mirror(&self) -> Self {
        DiscreteSeriesParam::new(self.f0h, -self.f0z).expect("mirror of a valid parameter is valid")
    }

    /// `(3 f0H - f0Z) / 2`.
    pub fn plus_start(&self) -> i64 {
        (3 * self.f0h - self.f0z) / 2
    }

    /// `(3 f0H + f0Z) / 2`.
    pub fn minus_start(&self) -> i64 {
        (3 * self.f0h + self.f0z) / 2
    }
}

fn classify(f0h: i64, f0z: i64) -> Option<DsClass> {
    if f0h <= 0 {
        return None;
    }
    let s = f0h + f0z;
    if s % 2 != 0 {
        return None;
    }
    if s < 0 {
        Some(DsClass::Holo)
    } else if f0z - f0h > 0 {
        Some(DsClass::AntiHolo)
    } else if s > 0 && f0h > f0z.abs() {
        Some(DsClass::Neither)
    } else {
        None
    }
}

/// Translate Harish-Chandra coordinates into `(f0H, f0Z)`.
pub fn from_harish_chandra(n1: i64, second: i64, chamber: Chamber) -> Result<DiscreteSeriesParam> {
    let bad = |why: &str| Err(Error::InvalidParameter(format!("({n1}, {second}) in {chamber:?}: {why}")));
    if n1 <= 0 {
        return bad("n1 must be a positive integer");
    }
    if second <= 0 {
        return bad("second coordinate must be a positive integer");
    }
    let f0z = match chamber {
        Chamber::D1 => -(n1 + 2 * second),
        Chamber::D2 => n1 + 2 * second,
        Chamber::D3 => {
            if second >= n1 {
                return bad("need n1 > n2");
            }
            2 * second - n1
        }
    };
    DiscreteSeriesParam::new(n1, f0z)
}

/// Multiplicity, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mult {
    Finite(u64),
    Infinite,
}

impl Serialize for Mult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mult::Finite(n) => s.serialize_u64(*n),
            Mult::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::fmt::Display for Mult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mult::Finite(n) => write!(f, "{n}"),
            Mult::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    B,
    B1,
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Target> {
        match s {
            "B" | "b" => Ok(Target::B),
            "B1" | "b1" => Ok(Target::B1),
            other => Err(Error::InvalidParameter(format!("unknown target '{other}'"))),
        }
    }
}

/// One summand `mult . T_{m,sign}` (`m` absent for `B1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BranchEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    pub sign: Sign,
    pub mult: Mult,
}

/// Arithmetic progression `start, start + step, ...` of labels `T_{m,sign}`,
/// each with multiplicity one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Family {
    pub start: i64,
    pub step: i64,
    pub sign: Sign,
}

impl Family {
    pub fn iter(&self) -> impl Iterator<Item = i64> {
        let f = *self;
        (0i64..).map(move |n| f.start + n * f.step)
    }

    /// `m` lies in the progression.
    pub fn contains(&self, m: i64) -> bool {
        let d = m - self.start;
        d % self.step == 0 && d / self.step >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingDecomposition {
    pub class: DsClass,
    #[serde(rename = "f0H")]
    pub f0h: i64,
    #[serde(rename = "f0Z")]
    pub f0z: i64,
    pub target: Target,
    pub entries: Vec<BranchEntry>,
    pub infinite_families: Vec<Family>,
    /// Every multiplicity is finite.
    pub admissible: bool,
    /// Obtained from the holomorphic case through `(f0H, f0Z) -> (f0H, -f0Z)`.
    pub derived_by_symmetry: bool,
}

impl BranchingDecomposition {
    /// Labels `(m, sign)` appearing with positive multiplicity among the listed entries.
    pub fn labels(&self) -> Vec<(i64, Sign)> {
        self.entries.iter().filter(|e| e.mult != Mult::Finite(0)).filter_map(|e| e.m.map(|m| (m, e.sign))).collect()
    }

    /// Multiplicity of `T_{m,sign}`, using the families beyond the listed window.
    pub fn multiplicity(&self, m: i64, sign: Sign) -> u64 {
        if self.entries.iter().any(|e| e.m == Some(m) && e.sign == sign) {
            return 1;
        }
        self.infinite_families.iter().filter(|f| f.sign == sign && f.contains(m)).count() as u64
    }
}

/// Restriction to `B`. Infinite decompositions list the first `n_max` terms of each family.
pub fn branch_to_b(ds: &DiscreteSeriesParam, n_max: usize) -> BranchingDecomposition {
    let (entries, families, derived) = match ds.class {
        DsClass::Holo => {
            let e = (0..ds.f0h)
                .map(|j| BranchEntry { m: Some(ds.plus_start() - 3 * j), sign: Sign::Minus, mult: Mult::Finite(1) })
                .collect();
            (e, Vec::new(), false)
        }
        DsClass::AntiHolo => {
            let h = branch_to_b(&ds.mirror(), n_max);
            let e = h.entries.iter().map(|e| BranchEntry { m: e.m.map(|m| -m), sign: e.sign.flip(), mult: e.mult }).collect();
            (e, Vec::new(), true)
        }
        DsClass::Neither => {
            let fam = vec![
                Family { start: ds.plus_start(), step: 3, sign: Sign::Plus },
                Family { start: -ds.minus_start(), step: -3, sign: Sign::Minus },
            ];
            let e = fam
                .iter()
                .flat_map(|f| f.iter().take(n_max).map(move |m| BranchEntry { m: Some(m), sign: f.sign, mult: Mult::Finite(1) }))
                .collect();
            (e, fam, false)
        }
    };
    BranchingDecomposition {
        class: ds.class,
        f0h: ds.f0h,
        f0z: ds.f0z,
        target: Target::B,
        entries,
        infinite_families: families,
        // Every T_{m,sign} occurs at most once, also for the infinite sums.
        admissible: true,
        derived_by_symmetry: derived,
    }
}

/// Restriction to `B1`.
pub fn branch_to_b1(ds: &DiscreteSeriesParam) -> BranchingDecomposition {
    let n = ds.f0h as u64;
    let entries = match ds.class {
        DsClass::Holo => vec![BranchEntry { m: None, sign: Sign::Minus, mult: Mult::Finite(n) }],
        DsClass::AntiHolo => vec![BranchEntry { m: None, sign: Sign::Plus, mult: Mult::Finite(n) }],
        DsClass::Neither => vec![
            BranchEntry { m: None, sign: Sign::Plus, mult: Mult::Infinite },
            BranchEntry { m: None, sign: Sign::Minus, mult: Mult::Infinite },
        ],
    };
    BranchingDecomposition {
        class: ds.class,
        f0h: ds.f0h,
        f0z: ds.f0z,
        target: Target::B1,
        entries,
        infinite_families: Vec::new(),
        admissible: ds.class != DsClass::Neither,
        derived_by_symmetry: ds.class == DsClass::AntiHolo,
    }
}

/// Central-character rule: `m + (3 f0H + f0Z)/2` is divisible by 3.
pub fn central_character_selects(ds: &DiscreteSeriesParam, m: i64) -> bool {
    (m + ds.minus_start()).rem_euclid(3) == 0
}

/// Dimension of the minimal `K`-type.
pub fn weyl_dimension(ds: &DiscreteSeriesParam) -> i64 {
    ds.f0h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(classify(2, -6), Some(DsClass::Holo));
        assert_eq!(classify(3, 1), Some(DsClass::Neither));
        assert_eq!(classify(2, 0), Some(DsClass::Neither));
        assert_eq!(classify(2, 6), Some(DsClass::AntiHolo));
        assert_eq!(classify(3, 0), None);
        assert_eq!(classify(2, 2), None);
        assert_eq!(classify(0, -4), None);
    }

    #[test]
    fn family_membership() {
        let f = Family { start: -5, step: -3, sign: Sign::Minus };
        assert!(f.contains(-11));
        assert!(!f.contains(-2));
        assert!(!f.contains(-6));
    }
}
