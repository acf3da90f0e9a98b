//! Vertex subsets of the honeycomb torus used as entanglement bipartitions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{axial_distance, Color, HoneycombTorus, HEX_DIRECTIONS};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub name: String,
    /// Sorted, duplicate-free vertex indices.
    pub vertices: Vec<usize>,
    /// Number of plaquettes cut by the region boundary.
    pub boundary_honeycomb: usize,
    /// Number of cut red plaquettes, present only for commensurate regions.
    pub boundary_triangular: Option<usize>,
    pub commensurate: bool,
}

impl Region {
    /// Builds a region from arbitrary vertices, computing both boundary measures.
    ///
    /// A region is commensurate with the red triangular lattice when every cut
    /// green or blue plaquette touches exactly two cut red plaquettes and the
    /// cut count is twice the red cut count.
    pub fn from_vertices(
        t: &HoneycombTorus,
        name: impl Into<String>,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        if let Some(&v) = set.iter().next_back() {
            if v >= t.n_vertices() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: t.n_vertices(),
                });
            }
        }
        let mut inside = vec![false; t.n_vertices()];
        for &v in &set {
            inside[v] = true;
        }
        let cut: Vec<usize> = (0..t.n_plaquettes())
            .filter(|&p| {
                let n = t.plaquettes()[p]
                    .vertices
                    .iter()
                    .filter(|&&v| inside[v])
                    .count();
                n > 0 && n < 6
            })
            .collect();
        let mut is_cut = vec![false; t.n_plaquettes()];
        for &p in &cut {
            is_cut[p] = true;
        }
        let red_cut = cut
            .iter()
            .filter(|&&p| t.plaquettes()[p].color == Color::Red)
            .count();
        let commensurate = !cut.is_empty()
            && cut.len() == 2 * red_cut
            && cut
                .iter()
                .filter(|&&p| t.plaquettes()[p].color != Color::Red)
                .all(|&p| {
                    t.neighbors(p)
                        .iter()
                        .filter(|&&n| is_cut[n] && t.plaquettes()[n].color == Color::Red)
                        .count()
                        == 2
                });
        Ok(Region {
            name: name.into(),
            vertices: set.into_iter().collect(),
            boundary_honeycomb: cut.len(),
            boundary_triangular: commensurate.then_some(red_cut),
            commensurate,
        })
    }

    /// Union of the vertices of the given plaquettes.
    pub fn from_plaquettes(
        t: &HoneycombTorus,
        name: impl Into<String>,
        plaquettes: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut vs = Vec::new();
        for p in plaquettes {
            vs.extend_from_slice(&t.plaquette(p)?.vertices);
        }
        Region::from_vertices(t, name, vs)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn union(
        &self,
        other: &Region,
        t: &HoneycombTorus,
        name: impl Into<String>,
    ) -> Result<Region> {
        Region::from_vertices(
            t,
            name,
            self.vertices.iter().chain(&other.vertices).copied(),
        )
    }

    pub fn complement(&self, t: &HoneycombTorus) -> Result<Region> {
        let vs = (0..t.n_vertices()).filter(|v| !self.contains(*v));
        Region::from_vertices(t, format!("{}^c", self.name), vs)
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        !self.vertices.iter().any(|v| other.contains(*v))
    }

    /// Plaquettes all of whose vertices lie in the region.
    pub fn contained_plaquettes(&self, t: &HoneycombTorus) -> Vec<usize> {
        (0..t.n_plaquettes())
            .filter(|&p| t.plaquettes()[p].vertices.iter().all(|v| self.contains(*v)))
            .collect()
    }

    /// Shifts every vertex by the lattice vector `(dq, dr)`.
    pub fn translated(&self, t: &HoneycombTorus, dq: i64, dr: i64) -> Result<Region> {
        let vs = self.vertices.iter().map(|&v| {
            let (q, r) = t.coords(v / 2);
            2 * t.plaquette_index(q + dq, r + dr) + v % 2
        });
        Region::from_vertices(t, self.name.clone(), vs)
    }
}

fn require_fit(t: &HoneycombTorus, span_q: usize, span_r: usize, what: &str) -> Result<()> {
    // Three extra rows keep the region and the plaquettes it cuts from meeting
    // themselves around the torus.
    if span_q + 3 > t.lx() || span_r + 3 > t.ly() {
        return Err(Error::RegionTooLarge(format!(
            "{what} spans {span_q}x{span_r} plaquettes, torus is {}x{}",
            t.lx(),
            t.ly()
        )));
    }
    Ok(())
}

/// Vertices of the `extent.0` by `extent.1` parallelogram of plaquettes whose
/// lowest corner is `anchor`.
pub fn region_parallelogram(
    t: &HoneycombTorus,
    anchor: (i64, i64),
    extent: (usize, usize),
) -> Result<Region> {
    if extent.0 == 0 || extent.1 == 0 {
        return Err(Error::InvalidArgument(
            "parallelogram extent must be positive".into(),
        ));
    }
    require_fit(t, extent.0, extent.1, "parallelogram")?;
    let (q0, r0) = anchor;
    let ps = (0..extent.1 as i64)
        .flat_map(|j| (0..extent.0 as i64).map(move |i| (q0 + i, r0 + j)))
        .map(|(q, r)| t.plaquette_index(q, r));
    Region::from_plaquettes(t, format!("parallelogram-{}x{}", extent.0, extent.1), ps)
}

/// Regions commensurate with the red triangular lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TriangularShape {
    A1,
    A2,
    A3,
    A4,
}

impl TriangularShape {
    pub const ALL: [TriangularShape; 4] = [Self::A1, Self::A2, Self::A3, Self::A4];

    /// Side lengths in units of the red-lattice spacing.
    pub fn sides(self) -> (i64, i64) {
        match self {
            Self::A1 => (1, 2),
            Self::A2 => (2, 2),
            Self::A3 => (2, 3),
            Self::A4 => (3, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::A3 => "A3",
            Self::A4 => "A4",
        }
    }
}

/// Plaquettes strictly inside the red-lattice parallelogram spanned by
/// `a * (1, 1)` and `b * (2, -1)` from a central red plaquette.
pub fn region_triangular_commensurate(
    t: &HoneycombTorus,
    shape: TriangularShape,
) -> Result<Region> {
    let (a, b) = shape.sides();
    require_fit(t, (a + 2 * b) as usize, (a + b) as usize, shape.name())?;
    let (q0, r0) = t.coords(t.central_plaquette(Color::Red));
    // keep the shape roughly centred
    let (q0, r0) = (q0 - (a + 2 * b) / 2, r0 - (a - b) / 2);
    let (q0, r0) = snap_to_red(t, q0, r0);
    let mut ps = Vec::new();
    for dq in 0..=(a + 2 * b) {
        for dr in -b..=a {
            let u = dq + 2 * dr;
            let w = dq - dr;
            if 0 < u && u < 3 * a && 0 < w && w < 3 * b {
                ps.push(t.plaquette_index(q0 + dq, r0 + dr));
            }
        }
    }
    Region::from_plaquettes(t, shape.name(), ps)
}

fn snap_to_red(t: &HoneycombTorus, q: i64, r: i64) -> (i64, i64) {
    (0..3)
        .map(|k| (q + k, r))
        .find(|&(q, r)| t.color_at(q, r) == Color::Red)
        .expect("one of three consecutive plaquettes is red")
}

/// Three adjacent regions around a hexagonal disk, used for topological negativity.
#[derive(Clone, Debug, Serialize)]
pub struct TenComplex {
    pub name: String,
    pub a: Region,
    pub b: Region,
    pub c: Region,
    pub ab: Region,
    pub bc: Region,
    pub ac: Region,
    pub abc: Region,
}

impl TenComplex {
    /// The seven regions in the order A, B, C, AB, BC, AC, ABC.
    pub fn regions(&self) -> [&Region; 7] {
        [
            &self.a, &self.b, &self.c, &self.ab, &self.bc, &self.ac, &self.abc,
        ]
    }
}

/// Disk radius for the supported A sizes (7, 19, 37 plaquettes).
pub fn ten_radius(size: usize) -> Result<i64> {
    match size {
        7 => Ok(1),
        19 => Ok(2),
        37 => Ok(3),
        _ => Err(Error::InvalidArgument(format!(
            "TEN complex size must be 7, 19 or 37 plaquettes, got {size}"
        ))),
    }
}

/// Builds the complex whose region A is the hexagonal disk of `size`
/// plaquettes centred on the central plaquette of `center`.
///
/// B and C are consecutive arcs of the plaquette ring at distance `R + 2`,
/// each `2(R + 2)` plaquettes long; the ring at distance `R + 1` is shared
/// between A and the arcs, so A touches both. The last third of the ring is
/// left out, which keeps B and C adjacent along one edge only.
pub fn ten_complex(t: &HoneycombTorus, size: usize, center: Color) -> Result<TenComplex> {
    let radius = ten_radius(size)?;
    let k = radius + 2;
    let span = (2 * k + 1) as usize;
    require_fit(t, span, span, "TEN complex")?;
    let c = t.central_plaquette(center);
    let (cq, cr) = t.coords(c);

    let mut disk = Vec::new();
    for dq in -radius..=radius {
        for dr in -radius..=radius {
            if axial_distance(dq, dr) <= radius {
                disk.push(t.plaquette_index(cq + dq, cr + dr));
            }
        }
    }
    let ring = hex_ring(cq, cr, k);
    let arc = (2 * k) as usize;
    let b_ps: Vec<usize> = ring[..arc]
        .iter()
        .map(|&(q, r)| t.plaquette_index(q, r))
        .collect();
    let c_ps: Vec<usize> = ring[arc..2 * arc]
        .iter()
        .map(|&(q, r)| t.plaquette_index(q, r))
        .collect();

    let suffix = format!("ten-{size}-{center}");
    let a = Region::from_plaquettes(t, format!("{suffix}:A"), disk)?;
    let b_all = Region::from_plaquettes(t, "", b_ps)?;
    let b = Region::from_vertices(
        t,
        format!("{suffix}:B"),
        b_all.vertices.iter().copied().filter(|v| !a.contains(*v)),
    )?;
    let c_all = Region::from_plaquettes(t, "", c_ps)?;
    let c = Region::from_vertices(
        t,
        format!("{suffix}:C"),
        c_all
            .vertices
            .iter()
            .copied()
            .filter(|v| !a.contains(*v) && !b.contains(*v)),
    )?;
    let ab = a.union(&b, t, format!("{suffix}:AB"))?;
    let bc = b.union(&c, t, format!("{suffix}:BC"))?;
    let ac = a.union(&c, t, format!("{suffix}:AC"))?;
    let abc = ab.union(&c, t, format!("{suffix}:ABC"))?;
    Ok(TenComplex {
        name: suffix,
        a,
        b,
        c,
        ab,
        bc,
        ac,
        abc,
    })
}

/// Plaquettes at hex distance `k` from `(q, r)`, walked counter-clockwise.
fn hex_ring(q: i64, r: i64, k: i64) -> Vec<(i64, i64)> {
    let (sq, sr) = HEX_DIRECTIONS[4];
    let (mut q, mut r) = (q + sq * k, r + sr * k);
    let mut out = Vec::with_capacity(6 * k as usize);
    for (dq, dr) in HEX_DIRECTIONS {
        for _ in 0..k {
            out.push((q, r));
            q += dq;
            r += dr;
        }
    }
    out
}

/// Named region presets accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionPreset {
    /// 2x2 plaquette parallelogram anchored on a central red plaquette.
    Fig2Parallelogram,
    /// Same region as `Fig2Parallelogram`, conventionally evaluated after decoherence.
    Fig3Parallelogram,
    Triangular(TriangularShape),
}

impl RegionPreset {
    pub fn build(self, t: &HoneycombTorus) -> Result<Region> {
        match self {
            RegionPreset::Fig2Parallelogram | RegionPreset::Fig3Parallelogram => {
                let anchor = t.coords(t.central_plaquette(Color::Red));
                let mut r = region_parallelogram(t, anchor, (2, 2))?;
                r.name = self.to_string();
                Ok(r)
            }
            RegionPreset::Triangular(s) => region_triangular_commensurate(t, s),
        }
    }
}

impl fmt::Display for RegionPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionPreset::Fig2Parallelogram => f.write_str("fig2-parallelogram"),
            RegionPreset::Fig3Parallelogram => f.write_str("fig3-parallelogram"),
            RegionPreset::Triangular(s) => f.write_str(s.name()),
        }
    }
}

impl FromStr for RegionPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2-parallelogram" => Ok(Self::Fig2Parallelogram),
            "fig3-parallelogram" => Ok(Self::Fig3Parallelogram),
            "A1" | "a1" => Ok(Self::Triangular(TriangularShape::A1)),
            "A2" | "a2" => Ok(Self::Triangular(TriangularShape::A2)),
            "A3" | "a3" => Ok(Self::Triangular(TriangularShape::A3)),
            "A4" | "a4" => Ok(Self::Triangular(TriangularShape::A4)),
            other => Err(Error::Parse(format!("unknown region preset {other:?}"))),
        }
    }
}

/// A TEN complex selector such as `ten-19` or `ten-7-green`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexSpec {
    pub size: usize,
    pub center: Color,
}

impl ComplexSpec {
    pub fn build(self, t: &HoneycombTorus) -> Result<TenComplex> {
        ten_complex(t, self.size, self.center)
    }
}

impl fmt::Display for ComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ten-{}-{}", self.size, self.center)
    }
}

impl FromStr for ComplexSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected ten-<7|19|37>[-<colour>], got {s:?}"));
        let rest = s.strip_prefix("ten-").ok_or_else(bad)?;
        let (size, center) = match rest.split_once('-') {
            Some((n, c)) => (n, c.parse()?),
            None => (rest, Color::Red),
        };
        let size: usize = size.parse().map_err(|_| bad())?;
        ten_radius(size)?;
        Ok(ComplexSpec { size, center })
    }
}

macro_rules! serde_via_str {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                String::deserialize(d)?
                    .parse()
                    .map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_str!(RegionPreset);
serde_via_str!(ComplexSpec);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_parallelogram_boundary() {
        let t = HoneycombTorus::new(12, 12).unwrap();
        let r = RegionPreset::Fig2Parallelogram.build(&t).unwrap();
        assert_eq!(r.boundary_honeycomb, 10);
        assert!(!r.commensurate);
        assert_eq!(r.boundary_triangular, None);
        assert_eq!(r.contained_plaquettes(&t).len(), 4);
    }

    #[test]
    fn unit_parallelogram_is_legal() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let r = region_parallelogram(&t, (0, 0), (1, 1)).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(r.boundary_honeycomb, 6);
        assert!(r.vertices.windows(2).all(|w| w[0] < w[1]));
        assert!(r.vertices.iter().all(|&v| v < t.n_vertices()));
    }

    #[test]
    fn wrapping_parallelogram_rejected() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let err = region_parallelogram(&t, (0, 0), (4, 1)).unwrap_err();
        assert!(matches!(err, Error::RegionTooLarge(_)));
    }

    #[test]
    fn triangular_shapes_have_expected_boundaries() {
        let t = HoneycombTorus::new(18, 18).unwrap();
        let expect = [(12, 6), (16, 8), (20, 10), (24, 12)];
        for (shape, (bh, bt)) in TriangularShape::ALL.into_iter().zip(expect) {
            let r = region_triangular_commensurate(&t, shape).unwrap();
            assert_eq!(r.boundary_honeycomb, bh, "{shape:?}");
            assert_eq!(r.boundary_triangular, Some(bt), "{shape:?}");
            assert!(r.commensurate);
            assert_eq!(r.boundary_honeycomb, 2 * r.boundary_triangular.unwrap());
        }
    }

    #[test]
    fn triangular_shape_needs_room() {
        let t = HoneycombTorus::new(9, 9).unwrap();
        assert!(region_triangular_commensurate(&t, TriangularShape::A4).is_err());
    }

    #[test]
    fn ten_complex_parts_are_disjoint() {
        let t = HoneycombTorus::new(24, 24).unwrap();
        for size in [7, 19, 37] {
            for color in Color::ALL {
                let c = ten_complex(&t, size, color).unwrap();
                assert!(c.a.is_disjoint(&c.b));
                assert!(c.b.is_disjoint(&c.c));
                assert!(c.a.is_disjoint(&c.c));
                assert_eq!(c.abc.len(), c.a.len() + c.b.len() + c.c.len());
                assert_eq!(c.a.contained_plaquettes(&t).len(), size);
            }
        }
    }

    #[test]
    fn ten_7_plaquette_counts() {
        let t = HoneycombTorus::new(24, 24).unwrap();
        let c = ten_complex(&t, 7, Color::Red).unwrap();
        assert_eq!(c.a.contained_plaquettes(&t).len(), 7);
        assert_eq!(c.b.contained_plaquettes(&t).len(), 6);
        assert_eq!(c.c.contained_plaquettes(&t).len(), 5);
    }

    #[test]
    fn ten_complex_errors() {
        let t = HoneycombTorus::new(12, 12).unwrap();
        assert!(matches!(
            ten_complex(&t, 8, Color::Red),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            ten_complex(&t, 37, Color::Red),
            Err(Error::RegionTooLarge(_))
        ));
        let big = HoneycombTorus::new(48, 48).unwrap();
        let c = ten_complex(&big, 37, Color::Red).unwrap();
        assert!(c.a.is_disjoint(&c.b) && c.b.is_disjoint(&c.c) && c.a.is_disjoint(&c.c));
    }

    #[test]
    fn boundaries_are_translation_invariant() {
        let t = HoneycombTorus::new(18, 18).unwrap();
        let regions = [
            RegionPreset::Fig2Parallelogram.build(&t).unwrap(),
            region_triangular_commensurate(&t, TriangularShape::A2).unwrap(),
            ten_complex(&t, 7, Color::Green).unwrap().b,
        ];
        for r in &regions {
            for (dq, dr) in [(1, 0), (0, 1), (3, -3), (-5, 2)] {
                let s = r.translated(&t, dq, dr).unwrap();
                assert_eq!(s.boundary_honeycomb, r.boundary_honeycomb);
                assert_eq!(s.len(), r.len());
                // commensurability depends on colour, which only period-3 shifts preserve
                if (dq + 2 * dr).rem_euclid(3) == 0 {
                    assert_eq!(s.boundary_triangular, r.boundary_triangular);
                }
            }
        }
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            "A3".parse::<RegionPreset>().unwrap(),
            RegionPreset::Triangular(TriangularShape::A3)
        );
        assert!("fig9".parse::<RegionPreset>().is_err());
        let c: ComplexSpec = "ten-19-blue".parse().unwrap();
        assert_eq!((c.size, c.center), (19, Color::Blue));
        assert_eq!("ten-7".parse::<ComplexSpec>().unwrap().center, Color::Red);
        assert!("ten-8".parse::<ComplexSpec>().is_err());
        assert_eq!(c.to_string().parse::<ComplexSpec>().unwrap(), c);
    }
}
