use crate::error::{Error, Result};
use crate::quiver::{topological_order, Quiver};

/// A ladder vertex `(level, v)` with `1 <= level <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderVertex {
    pub level: usize,
    pub base: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderArrowKind {
    /// `alpha_level^a`, a copy of a base arrow inside one level.
    Vertical { level: usize, base_arrow: usize },
    /// `beta_level^v : (level, v) -> (level + 1, v)`.
    Horizontal { level: usize, base_vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LadderArrow {
    pub id: String,
    pub kind: LadderArrowKind,
    pub src: usize,
    pub tgt: usize,
}

impl LadderArrow {
    pub fn is_horizontal(&self) -> bool {
        matches!(self.kind, LadderArrowKind::Horizontal { .. })
    }
}

/// `beta_k^{t(a)} alpha_k^a = alpha_{k+1}^a beta_k^{s(a)}`, by arrow indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    pub base_arrow: usize,
    pub level: usize,
    /// `(first, second)` in traversal order: `alpha_k^a` then `beta_k^{t(a)}`.
    pub vertical_first: (usize, usize),
    /// `beta_k^{s(a)}` then `alpha_{k+1}^a`.
    pub horizontal_first: (usize, usize),
}

/// The ladder quiver `A_l x Q`.
///
/// Vertices are ordered level-major, then by base vertex order. Arrows list
/// every `alpha_j^a` (level-major, then base arrow order) followed by every
/// `beta_j^v` (level-major, then base vertex order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LadderQuiver {
    base: Quiver,
    levels: usize,
    arrows: Vec<LadderArrow>,
    relations: Vec<Relation>,
    topo: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl LadderQuiver {
    pub fn new(base: Quiver, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::validation("ladder needs at least one level"));
        }
        let n = base.num_vertices();
        let idx = |level: usize, v: usize| (level - 1) * n + v;
        let mut arrows = Vec::new();
        for j in 1..=levels {
            for (ai, a) in base.arrows().iter().enumerate() {
                arrows.push(LadderArrow {
                    id: format!("alpha_{j}^{}", a.id),
                    kind: LadderArrowKind::Vertical { level: j, base_arrow: ai },
                    src: idx(j, a.src),
                    tgt: idx(j, a.tgt),
                });
            }
        }
        for j in 1..levels {
            for (v, name) in base.vertices().iter().enumerate() {
                arrows.push(LadderArrow {
                    id: format!("beta_{j}^{name}"),
                    kind: LadderArrowKind::Horizontal { level: j, base_vertex: v },
                    src: idx(j, v),
                    tgt: idx(j + 1, v),
                });
            }
        }
        let m = base.num_arrows();
        let alpha = |j: usize, a: usize| (j - 1) * m + a;
        let beta = |j: usize, v: usize| levels * m + (j - 1) * n + v;
        let mut relations = Vec::new();
        for k in 1..levels {
            for (ai, a) in base.arrows().iter().enumerate() {
                relations.push(Relation {
                    base_arrow: ai,
                    level: k,
                    vertical_first: (alpha(k, ai), beta(k, a.tgt)),
                    horizontal_first: (beta(k, a.src), alpha(k + 1, ai)),
                });
            }
        }
        let nv = levels * n;
        let topo = topological_order(nv, arrows.iter().map(|a| (a.src, a.tgt)))
            .ok_or_else(|| Error::validation("ladder has an oriented cycle"))?;
        let mut incoming = vec![Vec::new(); nv];
        let mut outgoing = vec![Vec::new(); nv];
        for (i, a) in arrows.iter().enumerate() {
            incoming[a.tgt].push(i);
            outgoing[a.src].push(i);
        }
        Ok(LadderQuiver {
            base,
            levels,
            arrows,
            relations,
            topo,
            incoming,
            outgoing,
        })
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }
    pub fn levels(&self) -> usize {
        self.levels
    }
    pub fn num_vertices(&self) -> usize {
        self.levels * self.base.num_vertices()
    }
    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }
    pub fn arrows(&self) -> &[LadderArrow] {
        &self.arrows
    }
    pub fn arrow(&self, i: usize) -> &LadderArrow {
        &self.arrows[i]
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    /// Sources first.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }
    pub fn incoming(&self, w: usize) -> &[usize] {
        &self.incoming[w]
    }
    pub fn outgoing(&self, w: usize) -> &[usize] {
        &self.outgoing[w]
    }

    pub fn vertex_index(&self, level: usize, base: usize) -> usize {
        debug_assert!(level >= 1 && level <= self.levels);
        (level - 1) * self.base.num_vertices() + base
    }

    pub fn vertex(&self, w: usize) -> LadderVertex {
        let n = self.base.num_vertices();
        LadderVertex {
            level: w / n + 1,
            base: w % n,
        }
    }

    pub fn vertex_name(&self, w: usize) -> String {
        let v = self.vertex(w);
        format!("({},{})", v.level, self.base.vertices()[v.base])
    }

    pub fn vertex_names(&self) -> Vec<String> {
        (0..self.num_vertices()).map(|w| self.vertex_name(w)).collect()
    }

    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        (0..self.num_vertices()).find(|&w| self.vertex_name(w) == name)
    }

    pub fn find_arrow(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn alpha(&self, level: usize, base_arrow: usize) -> usize {
        (level - 1) * self.base.num_arrows() + base_arrow
    }

    pub fn beta(&self, level: usize, base_vertex: usize) -> usize {
        debug_assert!(level >= 1 && level < self.levels);
        self.levels * self.base.num_arrows() + (level - 1) * self.base.num_vertices() + base_vertex
    }

    /// Indices of all horizontal arrows.
    pub fn betas(&self) -> impl Iterator<Item = usize> + '_ {
        let start = self.levels * self.base.num_arrows();
        start..self.arrows.len()
    }

    pub fn is_sink_level(&self, w: usize) -> bool {
        self.vertex(w).level == self.levels
    }

    pub fn validate_vertex(&self, w: usize) -> Result<()> {
        if w < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "vertex index {w} out of range for a ladder with {} vertices",
                self.num_vertices()
            )))
        }
    }

    /// Number of normal-form paths `from -> to`.
    pub fn count_normal_paths(&self, from: usize, to: usize) -> usize {
        let (a, b) = (self.vertex(from), self.vertex(to));
        if b.level < a.level {
            0
        } else {
            self.base.count_paths(a.base, b.base)
        }
    }
}
