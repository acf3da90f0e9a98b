//! Three-coloured honeycomb lattice on a torus.
//!
//! Plaquettes (hexagons) sit on a triangular lattice of centers with axial
//! coordinates `(q, r)`, `q in [0, lx)`, `r in [0, ly)`. The six neighbours of
//! a plaquette are at offsets `(±1, 0)`, `(0, ±1)`, `(1, -1)`, `(-1, 1)`, and
//! its colour is `(q + 2r) mod 3`, red = 0.
//!
//! Qubits live on honeycomb vertices, i.e. on triangles of plaquette centers.
//! Every plaquette `(q, r)` owns two of them:
//!
//! * the up vertex `U(q, r)`, shared by `(q, r)`, `(q+1, r)`, `(q, r+1)`;
//! * the down vertex `D(q, r)`, shared by `(q+1, r)`, `(q, r+1)`, `(q+1, r+1)`.
//!
//! `U(q, r)` has index `2 * plaquette_index(q, r)` and `D(q, r)` the next one.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axial plaquette offsets of the six neighbours, in counter-clockwise order.
pub const HEX_DIRECTIONS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Steps between nearest plaquettes of the same colour.
pub const SAME_COLOR_STEPS: [(i64, i64); 6] =
    [(1, 1), (2, -1), (1, -2), (-1, -1), (-2, 1), (-1, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn from_index(i: i64) -> Color {
        match i.rem_euclid(3) {
            0 => Color::Red,
            1 => Color::Green,
            _ => Color::Blue,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

impl std::str::FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "r" => Ok(Color::Red),
            "green" | "g" => Ok(Color::Green),
            "blue" | "b" => Ok(Color::Blue),
            other => Err(Error::Parse(format!("unknown colour {other:?}"))),
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Plaquette {
    pub q: usize,
    pub r: usize,
    pub color: Color,
    /// Vertex cycle in counter-clockwise order, starting at `U(q, r)`.
    pub vertices: [usize; 6],
}

#[derive(Clone, Debug, Serialize)]
pub struct Link {
    pub endpoints: [usize; 2],
    pub color: Color,
    /// The two plaquettes whose boundary contains this link.
    pub sides: [usize; 2],
    /// The two same-coloured plaquettes this link connects, one per endpoint.
    pub joins: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    X,
    Y,
}

/// A closed non-contractible string through links of one colour.
#[derive(Clone, Debug, Serialize)]
pub struct LoopPath {
    pub color: Color,
    pub direction: Direction,
    /// Same-coloured plaquettes visited, in order (the start is not repeated).
    pub plaquettes: Vec<usize>,
    pub links: Vec<usize>,
    /// Union of link endpoints; each vertex appears once.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HoneycombTorus {
    lx: usize,
    ly: usize,
    plaquettes: Vec<Plaquette>,
    links: Vec<Link>,
    vertex_plaquettes: Vec<[usize; 3]>,
    vertex_links: Vec<[usize; 3]>,
    link_index: HashMap<(usize, usize), usize>,
}

impl HoneycombTorus {
    /// Builds the `lx` by `ly` torus. Both sizes must be positive multiples of 3.
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx == 0 || ly == 0 || !lx.is_multiple_of(3) || !ly.is_multiple_of(3) {
            return Err(Error::ColoringObstruction { lx, ly });
        }
        let mut t = HoneycombTorus {
            lx,
            ly,
            plaquettes: Vec::with_capacity(lx * ly),
            links: Vec::with_capacity(3 * lx * ly),
            vertex_plaquettes: vec![[0; 3]; 2 * lx * ly],
            vertex_links: vec![[usize::MAX; 3]; 2 * lx * ly],
            link_index: HashMap::with_capacity(3 * lx * ly),
        };
        for r in 0..ly as i64 {
            for q in 0..lx as i64 {
                let vertices = [
                    t.up(q, r),
                    t.down(q - 1, r),
                    t.up(q - 1, r),
                    t.down(q - 1, r - 1),
                    t.up(q, r - 1),
                    t.down(q, r - 1),
                ];
                t.plaquettes.push(Plaquette {
                    q: q as usize,
                    r: r as usize,
                    color: Color::from_index(q + 2 * r),
                    vertices,
                });
                let p = t.plaquette_index(q, r);
                let up = [p, t.plaquette_index(q + 1, r), t.plaquette_index(q, r + 1)];
                let down = [
                    t.plaquette_index(q + 1, r),
                    t.plaquette_index(q, r + 1),
                    t.plaquette_index(q + 1, r + 1),
                ];
                let (u, d) = (t.up(q, r), t.down(q, r));
                t.vertex_plaquettes[u] = sort_by_color(&t, up);
                t.vertex_plaquettes[d] = sort_by_color(&t, down);
            }
        }
        // Each up vertex has exactly three links, one per down neighbour.
        for r in 0..ly as i64 {
            for q in 0..lx as i64 {
                let u = t.up(q, r);
                for d in [t.down(q, r - 1), t.down(q - 1, r), t.down(q, r)] {
                    t.add_link(u, d);
                }
            }
        }
        Ok(t)
    }

    fn add_link(&mut self, a: usize, b: usize) {
        let pa = self.vertex_plaquettes[a];
        let pb = self.vertex_plaquettes[b];
        let mut sides = pa.iter().copied().filter(|p| pb.contains(p));
        let sides = [
            sides.next().expect("link side"),
            sides.next().expect("link side"),
        ];
        let end_a = *pa.iter().find(|p| !sides.contains(p)).expect("link end");
        let end_b = *pb.iter().find(|p| !sides.contains(p)).expect("link end");
        let color = self.plaquettes[end_a].color;
        debug_assert_eq!(color, self.plaquettes[end_b].color);
        let idx = self.links.len();
        self.links.push(Link {
            endpoints: [a, b],
            color,
            sides,
            joins: [end_a, end_b],
        });
        self.link_index.insert((a.min(b), a.max(b)), idx);
        for v in [a, b] {
            let slot = self.vertex_links[v]
                .iter()
                .position(|l| *l == usize::MAX)
                .expect("vertex degree exceeds 3");
            self.vertex_links[v][slot] = idx;
        }
    }

    #[inline]
    pub fn lx(&self) -> usize {
        self.lx
    }

    #[inline]
    pub fn ly(&self) -> usize {
        self.ly
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        2 * self.lx * self.ly
    }

    #[inline]
    pub fn n_plaquettes(&self) -> usize {
        self.lx * self.ly
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn plaquette(&self, index: usize) -> Result<&Plaquette> {
        self.plaquettes.get(index).ok_or(Error::IndexOutOfRange {
            index,
            size: self.plaquettes.len(),
        })
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Plaquettes containing vertex `v`, ordered red, green, blue.
    pub fn vertex_plaquettes(&self, v: usize) -> [usize; 3] {
        self.vertex_plaquettes[v]
    }

    pub fn vertex_links(&self, v: usize) -> [usize; 3] {
        self.vertex_links[v]
    }

    /// Index of the plaquette at axial `(q, r)`, wrapped onto the torus.
    #[inline]
    pub fn plaquette_index(&self, q: i64, r: i64) -> usize {
        let q = q.rem_euclid(self.lx as i64) as usize;
        let r = r.rem_euclid(self.ly as i64) as usize;
        r * self.lx + q
    }

    #[inline]
    pub fn color_at(&self, q: i64, r: i64) -> Color {
        Color::from_index(q + 2 * r)
    }

    #[inline]
    pub fn up(&self, q: i64, r: i64) -> usize {
        2 * self.plaquette_index(q, r)
    }

    #[inline]
    pub fn down(&self, q: i64, r: i64) -> usize {
        2 * self.plaquette_index(q, r) + 1
    }

    pub fn link_between(&self, a: usize, b: usize) -> Option<usize> {
        self.link_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn links_of_color(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.color == color)
            .map(|(i, _)| i)
    }

    pub fn plaquettes_of_color(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.plaquettes
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.color == color)
            .map(|(i, _)| i)
    }

    pub fn neighbors(&self, p: usize) -> [usize; 6] {
        let (q, r) = self.coords(p);
        HEX_DIRECTIONS.map(|(dq, dr)| self.plaquette_index(q + dq, r + dr))
    }

    pub fn coords(&self, p: usize) -> (i64, i64) {
        ((p % self.lx) as i64, (p / self.lx) as i64)
    }

    /// Hexagonal distance between two plaquettes, minimised over torus images.
    pub fn hex_distance(&self, a: usize, b: usize) -> usize {
        let (qa, ra) = self.coords(a);
        let (qb, rb) = self.coords(b);
        let (lx, ly) = (self.lx as i64, self.ly as i64);
        let mut best = i64::MAX;
        for kx in -1..=1 {
            for ky in -1..=1 {
                best = best.min(axial_distance(qb - qa + kx * lx, rb - ra + ky * ly));
            }
        }
        best as usize
    }

    /// Vertex shared by three mutually adjacent plaquettes given in unwrapped
    /// axial coordinates.
    pub fn vertex_of_triangle(&self, tri: [(i64, i64); 3]) -> Option<usize> {
        let qmin = tri.iter().map(|t| t.0).min()?;
        let rmin = tri.iter().map(|t| t.1).min()?;
        let mut rel: Vec<(i64, i64)> = tri.iter().map(|&(q, r)| (q - qmin, r - rmin)).collect();
        rel.sort_unstable();
        match rel.as_slice() {
            [(0, 0), (0, 1), (1, 0)] => Some(self.up(qmin, rmin)),
            [(0, 1), (1, 0), (1, 1)] => Some(self.down(qmin, rmin)),
            _ => None,
        }
    }

    /// The link joining same-coloured plaquettes `(q, r)` and `(q, r) + step`.
    pub fn link_for_step(&self, q: i64, r: i64, step: (i64, i64)) -> Result<usize> {
        let (sq, sr) = step;
        let mids: Vec<(i64, i64)> = HEX_DIRECTIONS
            .iter()
            .copied()
            .filter(|&(dq, dr)| HEX_DIRECTIONS.contains(&(sq - dq, sr - dr)))
            .collect();
        let [m1, m2] = mids[..] else {
            return Err(Error::InvalidArgument(format!(
                "step {step:?} does not join nearest same-coloured plaquettes"
            )));
        };
        let m1 = (q + m1.0, r + m1.1);
        let m2 = (q + m2.0, r + m2.1);
        let a = self.vertex_of_triangle([(q, r), m1, m2]);
        let b = self.vertex_of_triangle([(q + sq, r + sr), m1, m2]);
        match (a, b) {
            (Some(a), Some(b)) => self.link_between(a, b).ok_or_else(|| {
                Error::InvalidArgument(format!("no link between vertices {a} and {b}"))
            }),
            _ => Err(Error::InvalidArgument(format!("degenerate step {step:?}"))),
        }
    }

    /// Non-contractible string of `color` links winding once in `direction`.
    ///
    /// x-loops zigzag with steps `(1,1)`, `(2,-1)`; y-loops with `(1,1)`, `(-1,2)`.
    /// The start is the first plaquette of that colour in row 0 (x) or column 0 (y).
    pub fn loop_path(&self, color: Color, direction: Direction) -> LoopPath {
        let (start, steps, repeats) = match direction {
            Direction::X => {
                let q0 = (0..3)
                    .find(|&q| self.color_at(q, 0) == color)
                    .expect("colour");
                ((q0, 0), [(1, 1), (2, -1)], self.lx / 3)
            }
            Direction::Y => {
                let r0 = (0..3)
                    .find(|&r| self.color_at(0, r) == color)
                    .expect("colour");
                ((0, r0), [(1, 1), (-1, 2)], self.ly / 3)
            }
        };
        let (mut q, mut r) = start;
        let mut plaquettes = Vec::new();
        let mut links = Vec::new();
        for _ in 0..repeats {
            for step in steps {
                plaquettes.push(self.plaquette_index(q, r));
                links.push(self.link_for_step(q, r, step).expect("same-colour step"));
                q += step.0;
                r += step.1;
            }
        }
        let mut vertices: Vec<usize> = links
            .iter()
            .flat_map(|&l| self.links[l].endpoints)
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        LoopPath {
            color,
            direction,
            plaquettes,
            links,
            vertices,
        }
    }

    /// Plaquette of `color` closest to the middle of the torus (lowest index on ties).
    pub fn central_plaquette(&self, color: Color) -> usize {
        let mid = self.plaquette_index(self.lx as i64 / 2, self.ly as i64 / 2);
        self.plaquettes_of_color(color)
            .min_by_key(|&p| (self.hex_distance(p, mid), p))
            .expect("every colour class is non-empty")
    }

    pub fn triangular_embedding(&self) -> TriangularEmbedding {
        TriangularEmbedding::new(self)
    }
}

fn sort_by_color(t: &HoneycombTorus, ps: [usize; 3]) -> [usize; 3] {
    let mut out = [usize::MAX; 3];
    for p in ps {
        let (pq, pr) = t.coords(p);
        out[t.color_at(pq, pr).index()] = p;
    }
    debug_assert!(
        out.iter().all(|p| *p != usize::MAX),
        "vertex lacks a colour"
    );
    out
}

#[inline]
pub fn axial_distance(dq: i64, dr: i64) -> i64 {
    (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
}

/// The triangular lattice formed by red-plaquette centres; its edges are the red links.
#[derive(Clone, Debug, Serialize)]
pub struct TriangularEmbedding {
    /// Red plaquette index for each site.
    pub sites: Vec<usize>,
    /// `(site_a, site_b, red link)` for every triangular edge.
    pub edges: Vec<(usize, usize, usize)>,
    /// True when two sites are joined by more than one edge (tiny tori only).
    pub has_multi_edges: bool,
}

impl TriangularEmbedding {
    fn new(t: &HoneycombTorus) -> Self {
        let sites: Vec<usize> = t.plaquettes_of_color(Color::Red).collect();
        let site_of: HashMap<usize, usize> =
            sites.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let edges: Vec<(usize, usize, usize)> = t
            .links_of_color(Color::Red)
            .map(|l| {
                let [a, b] = t.links()[l].joins;
                (site_of[&a], site_of[&b], l)
            })
            .collect();
        let mut seen = HashMap::new();
        for &(a, b, _) in &edges {
            *seen.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
        }
        let has_multi_edges = seen.values().any(|&n| n > 1);
        TriangularEmbedding {
            sites,
            edges,
            has_multi_edges,
        }
    }

    pub fn degree(&self, site: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b, _)| usize::from(a == site) + usize::from(b == site))
            .sum()
    }
}
