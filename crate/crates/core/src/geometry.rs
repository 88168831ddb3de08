//! Molecular configurations: nuclear repulsion, Voronoi half-distances,
//! cell membership, and the cell potentials Φ and W.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vec3 = [f64; 3];

pub fn distance(x: &Vec3, y: &Vec3) -> f64 {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nucleus {
    /// Charge; need not be integral.
    pub z: f64,
    pub position: Vec3,
}

/// Point nuclei at pairwise distinct positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Nucleus>", into = "Vec<Nucleus>")]
pub struct MoleculeConfig {
    nuclei: Vec<Nucleus>,
}

impl TryFrom<Vec<Nucleus>> for MoleculeConfig {
    type Error = Error;

    fn try_from(nuclei: Vec<Nucleus>) -> Result<Self> {
        Self::new(nuclei)
    }
}

impl From<MoleculeConfig> for Vec<Nucleus> {
    fn from(config: MoleculeConfig) -> Self {
        config.nuclei
    }
}

impl MoleculeConfig {
    pub fn new(nuclei: Vec<Nucleus>) -> Result<Self> {
        if nuclei.is_empty() {
            return Err(Error::EmptyConfig);
        }
        for (index, n) in nuclei.iter().enumerate() {
            if !(n.z >= 0.0 && n.z.is_finite()) {
                return Err(Error::NegativeCharge {
                    index,
                    value: n.z,
                });
            }
            if let Some(&value) = n.position.iter().find(|c| !c.is_finite()) {
                return Err(Error::NotFinite {
                    name: "position",
                    value,
                });
            }
        }
        for i in 0..nuclei.len() {
            for j in i + 1..nuclei.len() {
                if distance(&nuclei[i].position, &nuclei[j].position) == 0.0 {
                    return Err(Error::CoincidentNuclei {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { nuclei })
    }

    pub fn nuclei(&self) -> &[Nucleus] {
        &self.nuclei
    }

    pub fn len(&self) -> usize {
        self.nuclei.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nuclei.is_empty()
    }

    pub fn max_charge(&self) -> f64 {
        self.nuclei.iter().map(|n| n.z).fold(0.0, f64::max)
    }

    pub fn total_charge(&self) -> f64 {
        self.nuclei.iter().map(|n| n.z).sum()
    }

    /// Copy with every position mapped through `f`.
    pub fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        Self::new(
            self.nuclei
                .iter()
                .map(|n| Nucleus {
                    z: n.z,
                    position: f(n.position),
                })
                .collect(),
        )
    }
}

/// `U = α Σ_{i<j} z_i z_j / |R_i − R_j|`.
pub fn nuclear_repulsion(config: &MoleculeConfig, alpha: f64) -> f64 {
    let n = config.nuclei();
    let mut sum = 0.0;
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            sum += n[i].z * n[j].z / distance(&n[i].position, &n[j].position);
        }
    }
    alpha * sum
}

/// Distances `D_j` from each nucleus to the boundary of its Voronoi cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoronoiInfo {
    /// A lone nucleus: its cell is all of space.
    Unbounded,
    Bounded(Vec<f64>),
}

impl VoronoiInfo {
    pub fn get(&self, j: usize) -> Option<f64> {
        match self {
            Self::Unbounded => None,
            Self::Bounded(d) => d.get(j).copied(),
        }
    }

    pub fn inverse_sum(&self) -> f64 {
        match self {
            Self::Unbounded => 0.0,
            Self::Bounded(d) => d.iter().map(|d| 1.0 / d).sum(),
        }
    }
}

/// `D_j = (1/2)·min_{k≠j} |R_k − R_j|`.
pub fn half_distances(config: &MoleculeConfig) -> VoronoiInfo {
    let n = config.nuclei();
    if n.len() == 1 {
        return VoronoiInfo::Unbounded;
    }
    VoronoiInfo::Bounded(
        (0..n.len())
            .map(|j| {
                0.5 * (0..n.len())
                    .filter(|&k| k != j)
                    .map(|k| distance(&n[j].position, &n[k].position))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    )
}

/// Index of the nearest nucleus; the lowest index wins ties.
pub fn cell_index(x: &Vec3, config: &MoleculeConfig) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, n) in config.nuclei().iter().enumerate() {
        let d = distance(x, &n.position);
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

/// Potential of every nucleus except the one owning the cell of `x`:
/// `Φ(x) = Σ_{i≠j} z_i/|x − R_i|`.
pub fn phi_at(x: &Vec3, config: &MoleculeConfig) -> Result<f64> {
    let owner = cell_index(x, config);
    phi_in_cell(x, owner, config)
}

fn phi_in_cell(x: &Vec3, owner: usize, config: &MoleculeConfig) -> Result<f64> {
    let mut sum = 0.0;
    for (i, n) in config.nuclei().iter().enumerate() {
        if i == owner {
            continue;
        }
        let d = distance(x, &n.position);
        if d == 0.0 {
            return Err(Error::SingularPoint { nucleus: i });
        }
        sum += n.z / d;
    }
    Ok(sum)
}

/// Φ plus the owner's Coulomb potential outside the inscribed ball, or plus
/// the constant `2ab₂/D_j` inside it.
pub fn w_at(x: &Vec3, config: &MoleculeConfig, a: f64, b2: f64) -> Result<f64> {
    let owner = cell_index(x, config);
    let phi = phi_in_cell(x, owner, config)?;
    let d_j = half_distances(config).get(owner).ok_or(Error::UnboundedCell)?;
    let n = config.nuclei()[owner];
    let r = distance(x, &n.position);
    Ok(if r >= d_j {
        phi + n.z / r
    } else {
        phi + 2.0 * a * b2 / d_j
    })
}
