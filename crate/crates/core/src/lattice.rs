//! Square lattices, subsystem regions and boundary measures.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Open,
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice2D {
    pub nx: usize,
    pub ny: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Lattice2D {
    pub fn new(nx: usize, ny: usize, boundary: Boundary) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument(format!("empty lattice {nx}x{ny}")));
        }
        Ok(Lattice2D { nx, ny, boundary })
    }

    pub fn n_sites(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x + self.nx * y
    }

    pub fn coords(&self, i: usize) -> (usize, usize) {
        (i % self.nx, i / self.nx)
    }

    fn checked_index(&self, x: i64, y: i64) -> Result<usize> {
        if x < 0 || y < 0 || x >= self.nx as i64 || y >= self.ny as i64 {
            return Err(Error::OutOfBounds(format!(
                "site ({x}, {y}) outside {}x{} lattice",
                self.nx, self.ny
            )));
        }
        Ok(self.index(x as usize, y as usize))
    }

    /// Site one step along `axis` (step = +1 or -1), wrapping on cyclic lattices.
    pub fn neighbor(&self, i: usize, axis: Axis, step: i64) -> Option<usize> {
        let (x, y) = self.coords(i);
        let (len, c) = match axis {
            Axis::X => (self.nx as i64, x as i64),
            Axis::Y => (self.ny as i64, y as i64),
        };
        let mut t = c + step;
        if t < 0 || t >= len {
            match self.boundary {
                Boundary::Open => return None,
                Boundary::Cyclic => t = t.rem_euclid(len),
            }
        }
        Some(match axis {
            Axis::X => self.index(t as usize, y),
            Axis::Y => self.index(x, t as usize),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacencyKind {
    FirstNeighbor,
    FullyConnected,
}

/// Binary symmetric coupling graph with zero diagonal.
#[derive(Clone, Debug)]
pub struct AdjacencyMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl AdjacencyMatrix {
    /// Symmetrized pattern of `linked(i, j)`; the diagonal is dropped.
    pub fn from_fn(n: usize, linked: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j && linked(i, j) {
                    bits[i * n + j] = true;
                    bits[j * n + i] = true;
                }
            }
        }
        AdjacencyMatrix { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j)).count()
    }

    pub fn to_mat(&self) -> Mat<f64> {
        Mat::from_fn(
            self.n,
            self.n,
            |i, j| if self.get(i, j) { 1.0 } else { 0.0 },
        )
    }

    /// The block M_{rows, cols}.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Mat<f64> {
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            if self.get(rows[i], cols[j]) {
                1.0
            } else {
                0.0
            }
        })
    }
}

pub fn build_adjacency(lat: &Lattice2D, kind: AdjacencyKind) -> AdjacencyMatrix {
    let n = lat.n_sites();
    let mut bits = vec![false; n * n];
    match kind {
        AdjacencyKind::FullyConnected => {
            for i in 0..n {
                for j in 0..n {
                    bits[i * n + j] = i != j;
                }
            }
        }
        AdjacencyKind::FirstNeighbor => {
            for i in 0..n {
                for axis in [Axis::X, Axis::Y] {
                    for step in [-1, 1] {
                        if let Some(j) = lat.neighbor(i, axis, step) {
                            if j != i {
                                bits[i * n + j] = true;
                                bits[j * n + i] = true;
                            }
                        }
                    }
                }
            }
        }
    }
    AdjacencyMatrix { n, bits }
}

/// An ordered list of distinct sites of a parent lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    sites: Vec<usize>,
    n_total: usize,
}

impl Region {
    pub fn new(n_total: usize, sites: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n_total];
        for &s in &sites {
            if s >= n_total {
                return Err(Error::OutOfBounds(format!("site {s} not in 0..{n_total}")));
            }
            if seen[s] {
                return Err(Error::InvalidArgument(format!("site {s} listed twice")));
            }
            seen[s] = true;
        }
        Ok(Region { sites, n_total })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n_total];
        for &s in &self.sites {
            m[s] = true;
        }
        m
    }

    /// Remaining sites in ascending order.
    pub fn complement(&self) -> Region {
        let m = self.mask();
        Region {
            sites: (0..self.n_total).filter(|&i| !m[i]).collect(),
            n_total: self.n_total,
        }
    }

    /// Sites in neither region, ascending.
    pub fn environment(b: &Region, c: &Region) -> Region {
        let (mb, mc) = (b.mask(), c.mask());
        Region {
            sites: (0..b.n_total).filter(|&i| !mb[i] && !mc[i]).collect(),
            n_total: b.n_total,
        }
    }

    pub fn check_disjoint(&self, other: &Region) -> Result<()> {
        let m = self.mask();
        match other.sites.iter().find(|&&s| m[s]) {
            Some(&s) => Err(Error::Overlap(s)),
            None => Ok(()),
        }
    }

    pub fn single_site(lat: &Lattice2D, x: usize, y: usize) -> Result<Region> {
        let i = lat.checked_index(x as i64, y as i64)?;
        Region::new(lat.n_sites(), vec![i])
    }

    pub fn rect_block(
        lat: &Lattice2D,
        x0: usize,
        y0: usize,
        width: usize,
        height: usize,
    ) -> Result<Region> {
        if width == 0 || height == 0 || x0 + width > lat.nx || y0 + height > lat.ny {
            return Err(Error::OutOfBounds(format!(
                "block {width}x{height} at ({x0}, {y0}) does not fit {}x{}",
                lat.nx, lat.ny
            )));
        }
        let sites = (y0..y0 + height)
            .flat_map(|y| (x0..x0 + width).map(move |x| (x, y)))
            .map(|(x, y)| lat.index(x, y))
            .collect();
        Region::new(lat.n_sites(), sites)
    }

    /// Diamond |x - cx| + |y - cy| <= n - 1 (4n - 4 border sites).
    pub fn tilted_block(lat: &Lattice2D, cx: usize, cy: usize, n: usize) -> Result<Region> {
        if n == 0 {
            return Err(Error::InvalidArgument("tilted block needs n >= 1".into()));
        }
        let r = n as i64 - 1;
        let (cx, cy) = (cx as i64, cy as i64);
        let mut sites = Vec::new();
        for y in cy - r..=cy + r {
            let w = r - (y - cy).abs();
            for x in cx - w..=cx + w {
                sites.push(lat.checked_index(x, y)?);
            }
        }
        Region::new(lat.n_sites(), sites)
    }

    /// Sites with (x + y) % 2 == parity.
    pub fn checkerboard(lat: &Lattice2D, parity: usize) -> Result<Region> {
        if parity > 1 {
            return Err(Error::InvalidArgument(format!(
                "parity must be 0 or 1, got {parity}"
            )));
        }
        let sites = (0..lat.n_sites())
            .filter(|&i| {
                let (x, y) = lat.coords(i);
                (x + y) % 2 == parity
            })
            .collect();
        Region::new(lat.n_sites(), sites)
    }

    /// First `len` sites starting at `start`, in index order.
    pub fn range(n_total: usize, start: usize, len: usize) -> Result<Region> {
        if start + len > n_total {
            return Err(Error::OutOfBounds(format!(
                "range {start}+{len} exceeds {n_total}"
            )));
        }
        Region::new(n_total, (start..start + len).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Parallel,
    Tilted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairGeometry {
    ParallelContiguous,
    TiltedContiguous,
    ParallelSeparated(usize),
    TiltedSeparated(usize),
}

impl PairGeometry {
    pub fn new(orientation: Orientation, separation: usize) -> Self {
        match (orientation, separation) {
            (Orientation::Parallel, 0) => PairGeometry::ParallelContiguous,
            (Orientation::Tilted, 0) => PairGeometry::TiltedContiguous,
            (Orientation::Parallel, s) => PairGeometry::ParallelSeparated(s),
            (Orientation::Tilted, s) => PairGeometry::TiltedSeparated(s),
        }
    }

    pub fn orientation(self) -> Orientation {
        match self {
            PairGeometry::ParallelContiguous | PairGeometry::ParallelSeparated(_) => {
                Orientation::Parallel
            }
            _ => Orientation::Tilted,
        }
    }

    pub fn separation(self) -> usize {
        match self {
            PairGeometry::ParallelContiguous | PairGeometry::TiltedContiguous => 0,
            PairGeometry::ParallelSeparated(s) | PairGeometry::TiltedSeparated(s) => s,
        }
    }
}

/// Two blocks of `depth` layers with `n` sites each, centred in the lattice,
/// facing each other across `separation` empty layers. Sites are ordered
/// contact layer first, each layer walked along the contact surface.
///
/// Parallel layers are columns; tilted layers are anti-diagonals x + y = u.
pub fn block_pair(
    lat: &Lattice2D,
    geometry: PairGeometry,
    n: usize,
    depth: usize,
) -> Result<(Region, Region)> {
    if n == 0 || depth == 0 {
        return Err(Error::InvalidArgument(
            "pair needs n >= 1 and depth >= 1".into(),
        ));
    }
    let s = geometry.separation() as i64;
    let (n, d) = (n as i64, depth as i64);
    let (nx, ny) = (lat.nx as i64, lat.ny as i64);
    let layer: Box<dyn Fn(i64) -> Result<Vec<usize>>> = match geometry.orientation() {
        Orientation::Parallel => {
            let w = 2 * d + s;
            let x0 = (nx - w).div_euclid(2);
            let y0 = (ny - n).div_euclid(2);
            // layer k: k < 0 is B (k = -1 at contact), k >= 0 is C
            Box::new(move |k| {
                let x = if k < 0 { x0 + d + k } else { x0 + d + s + k };
                (y0..y0 + n).map(|y| lat.checked_index(x, y)).collect()
            })
        }
        Orientation::Tilted => {
            let cu = (nx - 1 + ny - 1) / 2 - s / 2;
            let cv = (nx - ny).div_euclid(2);
            Box::new(move |k| {
                let u = if k < 0 { cu + 1 + k } else { cu + 1 + s + k };
                (cv - n..cv + n)
                    .filter(|v| (u + v).rem_euclid(2) == 0)
                    .map(|v| lat.checked_index((u + v) / 2, (u - v) / 2))
                    .collect()
            })
        }
    };
    let mut b = Vec::new();
    let mut c = Vec::new();
    for k in 0..d {
        b.extend(layer(-1 - k)?);
        c.extend(layer(k)?);
    }
    let b = Region::new(lat.n_sites(), b)?;
    let c = Region::new(lat.n_sites(), c)?;
    b.check_disjoint(&c)?;
    Ok((b, c))
}

/// Two single-layer lines; same placement as `block_pair` with depth 1.
pub fn line_pair(
    lat: &Lattice2D,
    orientation: Orientation,
    n: usize,
    separation: usize,
) -> Result<(Region, Region)> {
    block_pair(lat, PairGeometry::new(orientation, separation), n, 1)
}

/// |dA|_2 = Tr[M_{A,Ac} M_{Ac,A}], the number of cut links.
pub fn boundary_measure_2(m: &AdjacencyMatrix, a: &Region) -> f64 {
    let mask = a.mask();
    let mut count = 0usize;
    for &i in a.sites() {
        count += (0..m.n()).filter(|&j| !mask[j] && m.get(i, j)).count();
    }
    count as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryMeasure1 {
    /// trace norm of M_{A,Ac}
    pub trace_norm: f64,
    /// sum over border sites of sqrt(number of outside neighbours)
    pub sqrt_degree: f64,
}

pub fn boundary_measure_1(m: &AdjacencyMatrix, a: &Region) -> Result<BoundaryMeasure1> {
    let ac = a.complement();
    let block = m.block(a.sites(), ac.sites());
    let sqrt_degree = (0..block.nrows())
        .map(|i| {
            (0..block.ncols())
                .map(|j| block[(i, j)])
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    Ok(BoundaryMeasure1 {
        trace_norm: trace_norm(&block)?,
        sqrt_degree,
    })
}

/// |dB ∩ dC|_1 = ||M_{B,C}||_1
pub fn pair_boundary_measure_1(m: &AdjacencyMatrix, b: &Region, c: &Region) -> Result<f64> {
    b.check_disjoint(c)?;
    trace_norm(&m.block(b.sites(), c.sites()))
}

/// |dB ∩ dC|_2 = ||M_{B,C}||_2^2, the number of links between B and C.
pub fn pair_boundary_measure_2(m: &AdjacencyMatrix, b: &Region, c: &Region) -> Result<f64> {
    b.check_disjoint(c)?;
    let blk = m.block(b.sites(), c.sites());
    Ok((0..blk.ncols())
        .map(|j| (0..blk.nrows()).map(|i| blk[(i, j)]).sum::<f64>())
        .sum())
}

fn trace_norm(block: &Mat<f64>) -> Result<f64> {
    if block.nrows() == 0 || block.ncols() == 0 {
        return Ok(0.0);
    }
    let s = block
        .singular_values()
        .map_err(|e| Error::NumericalFailure(format!("svd: {e:?}")))?;
    Ok(s.iter().sum())
}

/// JSON description of a single region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    SingleSite {
        x: usize,
        y: usize,
    },
    RectBlock {
        x0: usize,
        y0: usize,
        width: usize,
        height: usize,
    },
    TiltedBlock {
        cx: usize,
        cy: usize,
        n: usize,
    },
    Checkerboard {
        parity: usize,
    },
    Range {
        start: usize,
        len: usize,
    },
    Sites {
        sites: Vec<usize>,
    },
    Complement {
        of: Box<RegionSpec>,
    },
}

impl RegionSpec {
    pub fn build(&self, lat: &Lattice2D) -> Result<Region> {
        match self {
            RegionSpec::SingleSite { x, y } => Region::single_site(lat, *x, *y),
            RegionSpec::RectBlock {
                x0,
                y0,
                width,
                height,
            } => Region::rect_block(lat, *x0, *y0, *width, *height),
            RegionSpec::TiltedBlock { cx, cy, n } => Region::tilted_block(lat, *cx, *cy, *n),
            RegionSpec::Checkerboard { parity } => Region::checkerboard(lat, *parity),
            RegionSpec::Range { start, len } => Region::range(lat.n_sites(), *start, *len),
            RegionSpec::Sites { sites } => Region::new(lat.n_sites(), sites.clone()),
            RegionSpec::Complement { of } => Ok(of.build(lat)?.complement()),
        }
    }
}

/// JSON description of a pair of disjoint regions (B, C).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    BlockPair {
        orientation: Orientation,
        separation: usize,
        n: usize,
        depth: usize,
    },
    LinePair {
        orientation: Orientation,
        separation: usize,
        n: usize,
    },
    Regions {
        b: RegionSpec,
        c: RegionSpec,
    },
}

impl PairSpec {
    pub fn build(&self, lat: &Lattice2D) -> Result<(Region, Region)> {
        match self {
            PairSpec::BlockPair {
                orientation,
                separation,
                n,
                depth,
            } => block_pair(
                lat,
                PairGeometry::new(*orientation, *separation),
                *n,
                *depth,
            ),
            PairSpec::LinePair {
                orientation,
                separation,
                n,
            } => line_pair(lat, *orientation, *n, *separation),
            PairSpec::Regions { b, c } => {
                let (b, c) = (b.build(lat)?, c.build(lat)?);
                b.check_disjoint(&c)?;
                Ok((b, c))
            }
        }
    }
}
