//! Small closed triangulations built in code.

use super::FacetList;

/// Boundary of the 4-simplex on vertices `1..=5`.
pub fn five_cell() -> FacetList {
    FacetList::new(5, vec![[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5], [1, 3, 4, 5], [2, 3, 4, 5]])
        .expect("fixed facets are valid")
}

/// Boundary of the cyclic 4-polytope on `n ≥ 5` vertices `1..=n`, by Gale's
/// evenness condition: a 4-set is a facet when every pair of non-members
/// separates an even number of members. Neighborly, so every pair of vertices
/// spans an edge.
pub fn cyclic_polytope_boundary(n: usize) -> FacetList {
    assert!(n >= 5, "cyclic 4-polytope needs at least 5 vertices");
    let mut facets = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let s = [a, b, c, d];
                    if gale_even(&s, n) {
                        facets.push(s);
                    }
                }
            }
        }
    }
    FacetList::new(n, facets).expect("generated facets are valid")
}

fn gale_even(s: &[usize; 4], n: usize) -> bool {
    let outside: Vec<usize> = (1..=n).filter(|v| !s.contains(v)).collect();
    outside.windows(2).all(|w| s.iter().filter(|&&x| w[0] < x && x < w[1]).count() % 2 == 0)
}
