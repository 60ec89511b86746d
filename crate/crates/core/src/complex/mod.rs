//! Combinatorial 3-complexes given by their facets.
//!
//! Vertex ids are 1-based externally, as in published triangulation lists.
//! Internally every vertex that appears in some facet gets a dense index in
//! increasing id order, and all skeletons are stored sorted so iteration
//! order is deterministic.

mod parse;
pub mod triangulations;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_facet_list, parse_facet_list_declared, write_facet_list};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("malformed facet list (line {line}): {detail}")]
    Malformed { line: usize, detail: String },
    #[error("facet {facet:?} repeats a vertex")]
    RepeatedVertex { facet: [usize; 4] },
    #[error("vertex id {id} out of range{}", .n_vertices.map(|n| format!(" [1, {n}]")).unwrap_or_default())]
    IdOutOfRange { id: i64, n_vertices: Option<usize> },
    #[error("duplicate facet {facet:?}")]
    DuplicateFacet { facet: [usize; 4] },
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("facet list is empty")]
    Empty,
}

/// Validated list of tetrahedra, vertex ids 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetList {
    n_vertices: usize,
    facets: Vec<[usize; 4]>,
}

impl FacetList {
    pub fn new(n_vertices: usize, facets: Vec<[usize; 4]>) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut seen = HashMap::with_capacity(facets.len());
        for (idx, f) in facets.iter().enumerate() {
            for &id in f {
                if id < 1 || id > n_vertices {
                    return Err(ComplexError::IdOutOfRange { id: id as i64, n_vertices: Some(n_vertices) });
                }
            }
            let key = sorted4(*f);
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex { facet: *f });
            }
            if seen.insert(key, idx).is_some() {
                return Err(ComplexError::DuplicateFacet { facet: *f });
            }
        }
        Ok(Self { n_vertices, facets })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn facets(&self) -> &[[usize; 4]] {
        &self.facets
    }
}

/// Skeletons S0..S3 of a 3-complex with star (incidence) maps.
///
/// Simplices are stored as sorted tuples of dense vertex indices. A built
/// complex is immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    n_declared: usize,
    vertex_ids: Vec<usize>,
    dense: HashMap<usize, usize>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    tets: Vec<[usize; 4]>,
    vertex_star: Vec<Vec<usize>>,
    edge_star: Vec<Vec<usize>>,
    triangle_star: Vec<Vec<usize>>,
    edge_index: HashMap<[usize; 2], usize>,
    triangle_index: HashMap<[usize; 3], usize>,
}

pub fn build_complex(fl: &FacetList) -> Complex {
    Complex::new(fl)
}

impl Complex {
    pub fn new(fl: &FacetList) -> Self {
        let mut vertex_ids: Vec<usize> = fl.facets().iter().flatten().copied().collect();
        vertex_ids.sort_unstable();
        vertex_ids.dedup();
        let dense: HashMap<usize, usize> = vertex_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut tets: Vec<[usize; 4]> = fl
            .facets()
            .iter()
            .map(|f| sorted4([dense[&f[0]], dense[&f[1]], dense[&f[2]], dense[&f[3]]]))
            .collect();
        tets.sort_unstable();

        let mut edge_map: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        let mut tri_map: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
        let mut vertex_star = vec![Vec::new(); vertex_ids.len()];
        for (t, tet) in tets.iter().enumerate() {
            for &v in tet {
                vertex_star[v].push(t);
            }
            for a in 0..4 {
                for b in a + 1..4 {
                    edge_map.entry([tet[a], tet[b]]).or_default().push(t);
                }
                let tri: Vec<usize> = (0..4).filter(|&x| x != a).map(|x| tet[x]).collect();
                tri_map.entry([tri[0], tri[1], tri[2]]).or_default().push(t);
            }
        }

        let (edges, edge_star): (Vec<_>, Vec<_>) = edge_map.into_iter().unzip();
        let (triangles, triangle_star): (Vec<_>, Vec<_>) = tri_map.into_iter().unzip();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let triangle_index = triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        Self {
            n_declared: fl.n_vertices(),
            vertex_ids,
            dense,
            edges,
            triangles,
            tets,
            vertex_star,
            edge_star,
            triangle_star,
            edge_index,
            triangle_index,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    /// External (1-based) id of a dense vertex index.
    pub fn vertex_id(&self, v: usize) -> usize {
        self.vertex_ids[v]
    }

    /// Dense index of an external vertex id.
    pub fn index_of(&self, id: usize) -> Result<usize, ComplexError> {
        self.dense.get(&id).copied().ok_or(ComplexError::UnknownVertex(id))
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn tet_ids(&self, t: usize) -> [usize; 4] {
        self.tets[t].map(|v| self.vertex_ids[v])
    }

    /// Tets incident on dense vertex `v`.
    pub fn vertex_star(&self, v: usize) -> &[usize] {
        &self.vertex_star[v]
    }

    pub fn edge_star(&self, e: usize) -> &[usize] {
        &self.edge_star[e]
    }

    pub fn triangle_star(&self, t: usize) -> &[usize] {
        &self.triangle_star[t]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.edge_index.get(&key).copied()
    }

    pub fn triangle_index(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.triangle_index.get(&key).copied()
    }

    /// Number of tets containing dense vertex `v` (d_v).
    pub fn degree(&self, v: usize) -> usize {
        self.vertex_star[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertex_star.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.vertex_star.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertex degree by external id.
    pub fn vertex_degree(&self, id: usize) -> Result<usize, ComplexError> {
        Ok(self.degree(self.index_of(id)?))
    }

    /// The facet list this complex was built from, in canonical order.
    pub fn facet_list(&self) -> FacetList {
        let facets = (0..self.tets.len()).map(|t| self.tet_ids(t)).collect();
        FacetList::new(self.n_declared, facets).expect("complex facets are valid by construction")
    }

    /// Reports every triangle whose incidence differs from 2.
    pub fn validate_closed(&self) -> Diagnostics {
        let boundary = self
            .triangles
            .iter()
            .zip(&self.triangle_star)
            .filter(|(_, star)| star.len() != 2)
            .map(|(tri, star)| TriangleIncidence {
                triangle: tri.map(|v| self.vertex_ids[v]),
                incidence: star.len(),
            })
            .collect();
        Diagnostics { boundary }
    }
}

pub fn validate_closed(c: &Complex) -> Diagnostics {
    c.validate_closed()
}

pub fn vertex_degree(c: &Complex, id: usize) -> Result<usize, ComplexError> {
    c.vertex_degree(id)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleIncidence {
    /// External ids, sorted.
    pub triangle: [usize; 3],
    pub incidence: usize,
}

/// Result of the closedness check. Empty means every triangle lies in
/// exactly two tets (closed pseudomanifold).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub boundary: Vec<TriangleIncidence>,
}

impl Diagnostics {
    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_closed() {
            return write!(f, "closed pseudomanifold");
        }
        write!(f, "{} triangle(s) not in exactly 2 tets:", self.boundary.len())?;
        for b in &self.boundary {
            write!(f, " {:?}x{}", b.triangle, b.incidence)?;
        }
        Ok(())
    }
}

fn sorted4(mut f: [usize; 4]) -> [usize; 4] {
    f.sort_unstable();
    f
}
