use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::quiver::{LadderArrowKind, LadderQuiver};

/// A sequence of ladder arrows in traversal order (first arrow first).
pub type PathWord = Vec<usize>;

/// Canonical representative of a path modulo the commutativity ideal:
/// all horizontal steps at `base_src` first, then the base path `qpath`
/// at level `to_level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalPath {
    pub from_level: usize,
    pub to_level: usize,
    pub base_src: usize,
    /// Base arrows in traversal order.
    pub qpath: Vec<usize>,
}

impl NormalPath {
    pub fn trivial(ladder: &LadderQuiver, w: usize) -> Self {
        let v = ladder.vertex(w);
        NormalPath {
            from_level: v.level,
            to_level: v.level,
            base_src: v.base,
            qpath: Vec::new(),
        }
    }

    pub fn source(&self, ladder: &LadderQuiver) -> usize {
        ladder.vertex_index(self.from_level, self.base_src)
    }

    pub fn target(&self, ladder: &LadderQuiver) -> usize {
        let base_tgt = self
            .qpath
            .last()
            .map_or(self.base_src, |&a| ladder.base().arrows()[a].tgt);
        ladder.vertex_index(self.to_level, base_tgt)
    }

    pub fn length(&self) -> usize {
        (self.to_level - self.from_level) + self.qpath.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.length() == 0
    }

    /// `next ∘ self`; `None` when the endpoints do not meet.
    pub fn then(&self, ladder: &LadderQuiver, next: &NormalPath) -> Option<NormalPath> {
        if self.target(ladder) != next.source(ladder) {
            return None;
        }
        let mut qpath = self.qpath.clone();
        qpath.extend_from_slice(&next.qpath);
        Some(NormalPath {
            from_level: self.from_level,
            to_level: next.to_level,
            base_src: self.base_src,
            qpath,
        })
    }

    /// The horizontal-first arrow word of this path.
    pub fn to_word(&self, ladder: &LadderQuiver) -> PathWord {
        let mut word: PathWord = (self.from_level..self.to_level)
            .map(|j| ladder.beta(j, self.base_src))
            .collect();
        word.extend(self.qpath.iter().map(|&a| ladder.alpha(self.to_level, a)));
        word
    }

    /// Normal form of an arbitrary composable word starting at `source`.
    pub fn from_word(ladder: &LadderQuiver, source: usize, word: &[usize]) -> Result<Self> {
        ladder.validate_vertex(source)?;
        let start = ladder.vertex(source);
        let mut at = source;
        let mut to_level = start.level;
        let mut qpath = Vec::new();
        for &x in word {
            let arrow = ladder
                .arrows()
                .get(x)
                .ok_or_else(|| Error::shape(format!("unknown ladder arrow index {x}")))?;
            if arrow.src != at {
                return Err(Error::shape(format!(
                    "arrow {} does not start at {}",
                    arrow.id,
                    ladder.vertex_name(at)
                )));
            }
            match arrow.kind {
                LadderArrowKind::Vertical { base_arrow, .. } => qpath.push(base_arrow),
                LadderArrowKind::Horizontal { .. } => to_level += 1,
            }
            at = arrow.tgt;
        }
        Ok(NormalPath {
            from_level: start.level,
            to_level,
            base_src: start.base,
            qpath,
        })
    }

    pub fn describe(&self, ladder: &LadderQuiver) -> String {
        let word = self.to_word(ladder);
        if word.is_empty() {
            return format!("e_{}", ladder.vertex_name(self.source(ladder)));
        }
        word.iter()
            .map(|&x| ladder.arrow(x).id.clone())
            .collect::<Vec<_>>()
            .join(" ; ")
    }
}

/// All normal-form paths `from -> to`, sorted.
pub fn normal_paths(ladder: &LadderQuiver, from: usize, to: usize) -> Vec<NormalPath> {
    let (a, b) = (ladder.vertex(from), ladder.vertex(to));
    if b.level < a.level {
        return Vec::new();
    }
    ladder
        .base()
        .paths(a.base, b.base)
        .into_iter()
        .map(|qpath| NormalPath {
            from_level: a.level,
            to_level: b.level,
            base_src: a.base,
            qpath,
        })
        .collect()
}

/// A linear combination of parallel paths, stored in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElement<F: Field> {
    field: F,
    source: usize,
    target: usize,
    terms: BTreeMap<NormalPath, F::Elem>,
}

impl<F: Field> PathElement<F> {
    pub fn zero(field: &F, source: usize, target: usize) -> Self {
        PathElement {
            field: field.clone(),
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(field: &F, ladder: &LadderQuiver, w: usize) -> Self {
        Self::from_path(field, ladder, NormalPath::trivial(ladder, w), field.one())
    }

    pub fn from_path(field: &F, ladder: &LadderQuiver, path: NormalPath, coeff: F::Elem) -> Self {
        let mut e = Self::zero(field, path.source(ladder), path.target(ladder));
        if !field.is_zero(&coeff) {
            e.terms.insert(path, coeff);
        }
        e
    }

    /// Reduce a formal sum of arrow words to normal form. Every word must
    /// run `source -> target`.
    pub fn from_words(
        field: &F,
        ladder: &LadderQuiver,
        source: usize,
        target: usize,
        words: &[(F::Elem, PathWord)],
    ) -> Result<Self> {
        let mut e = Self::zero(field, source, target);
        for (c, w) in words {
            let p = NormalPath::from_word(ladder, source, w)?;
            if p.target(ladder) != target {
                return Err(Error::shape(format!(
                    "word ends at {}, expected {}",
                    ladder.vertex_name(p.target(ladder)),
                    ladder.vertex_name(target)
                )));
            }
            e.add_term(p, c.clone());
        }
        Ok(e)
    }

    fn add_term(&mut self, p: NormalPath, c: F::Elem) {
        let f = &self.field;
        let entry = self.terms.entry(p).or_insert_with(|| f.zero());
        *entry = f.add(entry, &c);
        self.terms.retain(|_, v| !f.is_zero(v));
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn source(&self) -> usize {
        self.source
    }
    pub fn target(&self) -> usize {
        self.target
    }
    pub fn terms(&self) -> impl Iterator<Item = (&NormalPath, &F::Elem)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms are kept reduced, so this is the identity map; it exists to
    /// make the idempotence law explicit.
    pub fn normal_form(&self) -> Self {
        self.clone()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::shape("adding path elements with different endpoints"));
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.source, self.target);
        for (p, v) in &self.terms {
            out.add_term(p.clone(), f.mul(v, c));
        }
        out
    }

    /// `next ∘ self`.
    pub fn then(&self, ladder: &LadderQuiver, next: &Self) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::shape(format!(
                "cannot compose: {} -> {} followed by {} -> {}",
                ladder.vertex_name(self.source),
                ladder.vertex_name(self.target),
                ladder.vertex_name(next.source),
                ladder.vertex_name(next.target)
            )));
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.source, next.target);
        for (p, a) in &self.terms {
            for (q, b) in &next.terms {
                let pq = p.then(ladder, q).expect("endpoints checked");
                out.add_term(pq, f.mul(a, b));
            }
        }
        Ok(out)
    }
}
