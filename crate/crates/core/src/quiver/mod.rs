//! Finite acyclic quivers and the ladder construction `A_l x Q` with its
//! commutativity ideal.

mod ladder;
pub mod path;

pub use ladder::{LadderArrow, LadderArrowKind, LadderQuiver, LadderVertex, Relation};
pub use path::{normal_paths, NormalPath, PathElement, PathWord};

pub use crate::rep::projective::indecomposable_projective;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite quiver without oriented cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    topo: Vec<usize>,
}

impl Quiver {
    /// Validates unique ids, endpoint references and acyclicity.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate vertex id '{v}'")));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            if !seen.insert(id.clone()) {
                return Err(Error::validation(format!("duplicate arrow id '{id}'")));
            }
            let lookup = |name: &str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| Error::validation(format!("arrow '{id}' references unknown vertex '{name}'")))
            };
            let src = lookup(&s)?;
            let tgt = lookup(&t)?;
            out.push(Arrow { id, src, tgt });
        }
        Self::from_parts(vertices, out)
    }

    fn from_parts(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let topo = topological_order(vertices.len(), arrows.iter().map(|a| (a.src, a.tgt)))
            .ok_or_else(|| Error::validation("quiver has an oriented cycle"))?;
        Ok(Quiver { vertices, arrows, topo })
    }

    /// One vertex, no arrows.
    pub fn trivial() -> Self {
        Self::linear(1)
    }

    /// `A_n`: `q1 -> q2 -> ... -> qn`.
    pub fn linear(n: usize) -> Self {
        let vertices = (1..=n).map(|i| format!("q{i}")).collect();
        let arrows = (1..n)
            .map(|i| Arrow {
                id: format!("a{i}"),
                src: i - 1,
                tgt: i,
            })
            .collect();
        Self::from_parts(vertices, arrows).expect("linear quiver is acyclic")
    }

    /// The commutative-square shape `v1 -> v2, v1 -> v3, v2 -> v4, v3 -> v4`.
    pub fn square() -> Self {
        let v = |s: &str| s.to_string();
        Quiver::new(
            vec![v("v1"), v("v2"), v("v3"), v("v4")],
            vec![
                (v("a"), v("v1"), v("v2")),
                (v("b"), v("v1"), v("v3")),
                (v("c"), v("v2"), v("v4")),
                (v("d"), v("v3"), v("v4")),
            ],
        )
        .expect("square quiver is valid")
    }

    /// Random acyclic quiver: arrows only go forward along a shuffled vertex order.
    pub fn random_acyclic<R: Rng + ?Sized>(rng: &mut R, n_vertices: usize, n_arrows: usize) -> Self {
        let n = n_vertices.max(1);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let vertices = (0..n).map(|i| format!("v{i}")).collect();
        let mut arrows = Vec::new();
        if n > 1 {
            for k in 0..n_arrows {
                let i = rng.gen_range(0..n - 1);
                let j = rng.gen_range(i + 1..n);
                arrows.push(Arrow {
                    id: format!("x{k}"),
                    src: order[i],
                    tgt: order[j],
                });
            }
        }
        Self::from_parts(vertices, arrows).expect("forward arrows are acyclic")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// All paths `from -> to`, as arrow index sequences in traversal order.
    /// The trivial path is the empty sequence when `from == to`.
    pub fn paths(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.paths_rec(from, to, &mut cur, &mut out);
        out.sort();
        out
    }

    fn paths_rec(&self, at: usize, to: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == to {
            out.push(cur.clone());
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if a.src == at {
                cur.push(i);
                self.paths_rec(a.tgt, to, cur, out);
                cur.pop();
            }
        }
    }

    pub fn count_paths(&self, from: usize, to: usize) -> usize {
        // dynamic programming over the topological order
        let mut count = vec![0usize; self.num_vertices()];
        count[from] = 1;
        for &v in &self.topo {
            if count[v] == 0 {
                continue;
            }
            for a in self.arrows.iter().filter(|a| a.src == v) {
                count[a.tgt] += count[v];
            }
        }
        count[to]
    }
}

/// Kahn's algorithm; `None` when a cycle exists. Ties break by smallest index.
pub(crate) fn topological_order(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for (s, t) in edges {
        indeg[t] += 1;
        succ[s].push(t);
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        out.push(v);
        for &t in &succ[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.insert(t);
            }
        }
    }
    (out.len() == n).then_some(out)
}

/// Build `A_levels x q` with its commutativity relations.
pub fn build_ladder(q: &Quiver, levels: usize) -> Result<Arc<LadderQuiver>> {
    LadderQuiver::new(q.clone(), levels).map(Arc::new)
}
