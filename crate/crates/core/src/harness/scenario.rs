use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::closed_form::{AsymptoticMode, Geometry, PairOptions};
use crate::lattice::{
    build_adjacency, AdjacencyKind, AdjacencyMatrix, Boundary, Lattice2D, PairSpec, Region,
    RegionSpec,
};
use crate::linalg::{self, CMat};
use crate::model::{CouplingTemplate, LatticeCouplings};
use crate::symplectic::LogBase;
use crate::weak::{CountertermForm, WeakOptions};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub model: ModelSpec,
    pub partitions: Vec<PartitionSpec>,
    /// lambda / lambda_c grid
    pub sweep: Vec<f64>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub lambda_c: LambdaCMode,
    #[serde(default)]
    pub log_base: LogBase,
    /// defaults to the environment counterterm form on lattices and the
    /// definition form otherwise
    #[serde(default)]
    pub weak: Option<WeakOptions>,
    #[serde(default)]
    pub pairs: PairOptions,
    #[serde(default)]
    pub asymptotic: AsymptoticMode,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Lattice {
        nx: usize,
        ny: usize,
        #[serde(default)]
        boundary: Boundary,
        couplings: CouplingSpec,
    },
    /// D+- = (D_x +- D_y) / 2, spread uniformly over all pairs
    FullyConnected {
        n: usize,
        delta_x: f64,
        delta_y: f64,
    },
    /// dense real coupling matrices
    Explicit {
        delta_plus: Vec<Vec<f64>>,
        delta_minus: Vec<Vec<f64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CouplingSpec {
    /// isotropic, D- = ratio * D+
    Ratio {
        delta_plus: f64,
        ratio: f64,
    },
    Axes(LatticeCouplings),
}

impl CouplingSpec {
    pub fn couplings(&self) -> LatticeCouplings {
        match *self {
            CouplingSpec::Ratio { delta_plus, ratio } => {
                LatticeCouplings::isotropic(delta_plus, ratio * delta_plus)
            }
            CouplingSpec::Axes(c) => c,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaCMode {
    /// sum of coupling magnitudes
    #[default]
    Estimate,
    /// bisection on positive definiteness
    Exact,
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Weak,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Weak => "weak",
            Method::ClosedForm => "closed_form",
        }
    }
}

/// Either a region (cut against its complement) or a pair of disjoint regions.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
}

/// A partition resolved against the index space.
#[derive(Clone, Debug)]
pub enum Partition {
    Region {
        id: String,
        spec: RegionSpec,
        region: Region,
    },
    Pair {
        id: String,
        spec: PairSpec,
        b: Region,
        c: Region,
    },
}

impl Partition {
    pub fn id(&self) -> &str {
        match self {
            Partition::Region { id, .. } | Partition::Pair { id, .. } => id,
        }
    }
}

/// Everything a run needs, derived once from the scenario.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub lattice: Lattice2D,
    pub template: CouplingTemplate,
    pub adjacency: AdjacencyMatrix,
    pub partitions: Vec<Partition>,
    pub weak: WeakOptions,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.sweep.is_empty() {
            return Err(Error::Config("sweep is empty".into()));
        }
        if let Some(x) = self.sweep.iter().find(|&&x| !(x > 1.0) || !x.is_finite()) {
            return Err(Error::Config(format!(
                "sweep values must be finite and > 1, got {x}"
            )));
        }
        if let LambdaCMode::Fixed(l) = self.lambda_c {
            if !(l > 0.0) {
                return Err(Error::Config(format!(
                    "fixed lambda_c must be > 0, got {l}"
                )));
            }
        }
        let mut ids = std::collections::BTreeSet::new();
        for p in &self.partitions {
            if !ids.insert(p.id.as_str()) {
                return Err(Error::Config(format!("duplicate partition id {}", p.id)));
            }
            if p.region.is_some() == p.pair.is_some() {
                return Err(Error::Config(format!(
                    "partition {} needs exactly one of region, pair",
                    p.id
                )));
            }
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        match &self.model {
            ModelSpec::Lattice { nx, ny, .. } => nx * ny,
            ModelSpec::FullyConnected { n, .. } => *n,
            ModelSpec::Explicit { delta_plus, .. } => delta_plus.len(),
        }
    }

    pub fn prepare(&self) -> Result<Prepared> {
        let (lattice, template, adjacency) = match &self.model {
            ModelSpec::Lattice {
                nx,
                ny,
                boundary,
                couplings,
            } => {
                let lat = Lattice2D::new(*nx, *ny, *boundary)?;
                let adj = build_adjacency(&lat, AdjacencyKind::FirstNeighbor);
                let template = CouplingTemplate::Lattice {
                    lattice: lat,
                    couplings: couplings.couplings(),
                };
                (lat, template, adj)
            }
            ModelSpec::FullyConnected {
                n,
                delta_x,
                delta_y,
            } => {
                let lat = Lattice2D::new(*n, 1, Boundary::Open)?;
                let adj = build_adjacency(&lat, AdjacencyKind::FullyConnected);
                let template = CouplingTemplate::FullyConnected {
                    n: *n,
                    delta_plus: 0.5 * (delta_x + delta_y),
                    delta_minus: 0.5 * (delta_x - delta_y),
                };
                (lat, template, adj)
            }
            ModelSpec::Explicit {
                delta_plus,
                delta_minus,
            } => {
                let dp = dense(delta_plus, "delta_plus")?;
                let dm = dense(delta_minus, "delta_minus")?;
                linalg::check_square(&dm, dp.nrows(), "delta_minus")?;
                let n = dp.nrows();
                let lat = Lattice2D::new(n, 1, Boundary::Open)?;
                let adj = AdjacencyMatrix::from_fn(n, |i, j| {
                    dp[(i, j)].norm() > 0.0 || dm[(i, j)].norm() > 0.0
                });
                let template = CouplingTemplate::Explicit {
                    delta_plus: dp,
                    delta_minus: dm,
                };
                (lat, template, adj)
            }
        };
        let mut partitions = Vec::with_capacity(self.partitions.len());
        for p in &self.partitions {
            let part = match (&p.region, &p.pair) {
                (Some(spec), None) => Partition::Region {
                    id: p.id.clone(),
                    spec: spec.clone(),
                    region: spec.build(&lattice)?,
                },
                (None, Some(spec)) => {
                    let (b, c) = spec.build(&lattice)?;
                    Partition::Pair {
                        id: p.id.clone(),
                        spec: spec.clone(),
                        b,
                        c,
                    }
                }
                _ => unreachable!("checked in validate"),
            };
            partitions.push(part);
        }
        let weak = self.weak.unwrap_or_else(|| WeakOptions {
            form: match self.model {
                ModelSpec::Lattice { .. } => CountertermForm::Environment,
                _ => CountertermForm::Definition,
            },
            ..WeakOptions::default()
        });
        Ok(Prepared {
            lattice,
            template,
            adjacency,
            partitions,
            weak,
        })
    }
}

fn dense(rows: &[Vec<f64>], what: &str) -> Result<CMat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Config(format!(
            "{what} must be a non-empty square matrix"
        )));
    }
    let m = faer::Mat::from_fn(n, n, |i, j| rows[i][j]);
    Ok(linalg::from_real(&m))
}

/// Shape known to the closed-form module, if any.
pub fn region_geometry(spec: &RegionSpec, lat: &Lattice2D) -> Option<Geometry> {
    match *spec {
        RegionSpec::SingleSite { .. } => Some(Geometry::SingleSite),
        RegionSpec::RectBlock { width, height, .. } => Some(Geometry::RectBlock {
            nx: width,
            ny: height,
        }),
        RegionSpec::TiltedBlock { n, .. } => Some(Geometry::TiltedBlock { n }),
        RegionSpec::Checkerboard { .. } => Some(Geometry::Checkerboard {
            nx: lat.nx,
            ny: lat.ny,
        }),
        _ => None,
    }
}
