//! Sparse linear array geometries on an integer grid and their difference coarray.
//!
//! Sensor positions are integer multiples of a fundamental spacing `d`; the
//! physical spacing is attached separately (see [`crate::synth::ArrayManifold`])
//! so that all coarray arithmetic stays exact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sensor positions of a linear array in units of the fundamental spacing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayGeometry {
    positions: Vec<i64>,
}

impl ArrayGeometry {
    /// Positions must be non-negative, strictly increasing and at least two.
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::Geometry(format!(
                "need at least 2 sensors, got {}",
                positions.len()
            )));
        }
        if positions.iter().any(|&p| p < 0) {
            return Err(Error::Geometry("positions must be non-negative".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Geometry(format!(
                "positions must be strictly increasing: {positions:?}"
            )));
        }
        Ok(Self { positions })
    }

    /// The 6-sensor minimum redundancy array at `[1, 2, 5, 6, 12, 14]`.
    pub fn mra6() -> Self {
        Self {
            positions: vec![1, 2, 5, 6, 12, 14],
        }
    }

    /// Two-level nested array: a dense ULA `{1..n1}` followed by a sparse ULA
    /// `{(n1+1) j : j = 1..n2}`.
    pub fn nested(n1: usize, n2: usize) -> Result<Self> {
        if n1 < 1 || n2 < 1 {
            return Err(Error::Geometry(format!(
                "nested array levels must be >= 1, got ({n1}, {n2})"
            )));
        }
        let inner = (1..=n1 as i64).collect::<Vec<_>>();
        let step = n1 as i64 + 1;
        let mut positions = inner;
        positions.extend((1..=n2 as i64).map(|j| step * j));
        positions.dedup();
        Self::new(positions)
    }

    /// Extended coprime array: `{a i : i < b} ∪ {b j : j < 2a}`.
    pub fn coprime(a: usize, b: usize) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::Geometry(format!(
                "coprime factors must be >= 2, got ({a}, {b})"
            )));
        }
        if gcd(a, b) != 1 {
            return Err(Error::Geometry(format!("{a} and {b} are not coprime")));
        }
        let (a, b) = (a as i64, b as i64);
        let mut positions: Vec<i64> = (0..b).map(|i| a * i).chain((0..2 * a).map(|j| b * j)).collect();
        positions.sort_unstable();
        positions.dedup();
        Self::new(positions)
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn sensor_count(&self) -> usize {
        self.positions.len()
    }

    /// Largest pairwise separation.
    pub fn aperture(&self) -> i64 {
        self.positions[self.positions.len() - 1] - self.positions[0]
    }

    pub fn coarray(&self) -> Coarray {
        difference_coarray(self)
    }
}

impl fmt::Display for ArrayGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Parses `mra6`, `nested:n1,n2`, `coprime:a,b`, or an explicit list such as
/// `1,2,5` / `[1, 2, 5]`.
impl FromStr for ArrayGeometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let pair = |args: &str| -> Result<(usize, usize)> {
            let parts: Vec<_> = args.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Geometry(format!("expected two parameters in '{s}'")));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::Geometry(format!("bad integer '{t}' in '{s}'")))
            };
            Ok((parse(parts[0])?, parse(parts[1])?))
        };
        if s.eq_ignore_ascii_case("mra6") {
            return Ok(Self::mra6());
        }
        if let Some(args) = s.strip_prefix("nested:") {
            let (n1, n2) = pair(args)?;
            return Self::nested(n1, n2);
        }
        if let Some(args) = s.strip_prefix("coprime:") {
            let (a, b) = pair(args)?;
            return Self::coprime(a, b);
        }
        let body = s.trim_start_matches('[').trim_end_matches(']');
        let positions = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Geometry(format!("unknown geometry '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(positions)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Ordered sensor-index pair `(n1, n2)` contributing lag `pos[n1] - pos[n2]`.
pub type SensorPair = (usize, usize);

/// Difference coarray of a geometry: every realizable lag with the sensor
/// pairs producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coarray {
    sensor_count: usize,
    pairs: BTreeMap<i64, Vec<SensorPair>>,
    contiguous_p: usize,
}

impl Coarray {
    /// Sensor pairs at lag `k`; empty for holes and lags outside the aperture.
    pub fn pairs(&self, lag: i64) -> &[SensorPair] {
        self.pairs.get(&lag).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Coarray weight: number of ordered pairs at lag `k`.
    pub fn weight(&self, lag: i64) -> usize {
        self.pairs(lag).len()
    }

    /// Largest `P` such that every lag in `[1-P, P-1]` is present.
    pub fn contiguous_p(&self) -> usize {
        self.contiguous_p
    }

    pub fn sensor_count(&self) -> usize {
        self.sensor_count
    }

    /// Largest realized lag.
    pub fn max_lag(&self) -> i64 {
        self.pairs.keys().next_back().copied().unwrap_or(0)
    }

    /// All realized lags in increasing order with their weights.
    pub fn weights(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.pairs.iter().map(|(&k, v)| (k, v.len()))
    }

    /// Lags of the contiguous segment `1-P ..= P-1`.
    pub fn contiguous_lags(&self) -> std::ops::RangeInclusive<i64> {
        let h = self.contiguous_p as i64 - 1;
        -h..=h
    }
}

/// Enumerates all ordered sensor pairs and groups them by lag.
pub fn difference_coarray(geometry: &ArrayGeometry) -> Coarray {
    let pos = geometry.positions();
    let mut pairs: BTreeMap<i64, Vec<SensorPair>> = BTreeMap::new();
    for (n1, &p1) in pos.iter().enumerate() {
        for (n2, &p2) in pos.iter().enumerate() {
            pairs.entry(p1 - p2).or_default().push((n1, n2));
        }
    }
    let mut contiguous_p = 1;
    while pairs.contains_key(&(contiguous_p as i64)) {
        contiguous_p += 1;
    }
    Coarray {
        sensor_count: pos.len(),
        pairs,
        contiguous_p,
    }
}
