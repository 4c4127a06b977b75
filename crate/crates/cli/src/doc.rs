//! JSON documents: an envelope `{kind, version, payload}` and one payload
//! type per kind. Scalars are exact strings (`"3/7"`, `"2 mod 5"`); vectors
//! indexed by ladder vertices follow the ladder's level-major order, which
//! every document echoes as `vertex_order`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use filquiv::exactla::{Field, FieldSpec, Matrix};
use filquiv::quiver::{build_ladder, LadderArrowKind, LadderQuiver, NormalPath, PathElement, Quiver};
use filquiv::rep::Representation;
use filquiv::semiinv::Presentation;
use filquiv::stability::{Convention, RankWeights, StabilityParams, SubMode};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Bumped on any payload change; matches `schemas/v<major>/`.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Quiver,
    Ladder,
    Representation,
    Stability,
    Presentation,
    Report,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("kind serializes");
        f.write_str(s.as_str().expect("kind is a string"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub kind: Kind,
    pub version: String,
    pub payload: Value,
}

impl Document {
    pub fn new<T: Serialize>(kind: Kind, payload: &T) -> Self {
        Document {
            kind,
            version: SCHEMA_VERSION.to_string(),
            payload: serde_json::to_value(payload).expect("payloads serialize"),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Document = serde_json::from_str(text).map_err(|e| CliError::parse(format!("document: {e}")))?;
        let major = |v: &str| v.split('.').next().map(str::to_string);
        if major(&doc.version) != major(SCHEMA_VERSION) {
            return Err(CliError::validation(format!(
                "document version {} is not compatible with {SCHEMA_VERSION}",
                doc.version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn expect<T: for<'de> Deserialize<'de>>(&self, kind: Kind) -> Result<T, CliError> {
        if self.kind != kind {
            return Err(CliError::validation(format!("expected a {kind} document, got {}", self.kind)));
        }
        serde_json::from_value(self.payload.clone()).map_err(|e| CliError::parse(format!("{kind} payload: {e}")))
    }
}

// quiver -------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowPayload {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverPayload {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowPayload>,
}

impl QuiverPayload {
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverPayload {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowPayload {
                    id: a.id.clone(),
                    src: q.vertices()[a.src].clone(),
                    tgt: q.vertices()[a.tgt].clone(),
                })
                .collect(),
        }
    }

    pub fn to_quiver(&self) -> Result<Quiver, CliError> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.src.clone(), a.tgt.clone()))
            .collect();
        Ok(Quiver::new(self.vertices.clone(), arrows)?)
    }
}

// ladder -------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderArrowPayload {
    pub id: String,
    pub kind: String,
    pub src: String,
    pub tgt: String,
}

/// The base quiver and level count determine the ladder; the remaining
/// fields are derived and, when present on input, must agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderPayload {
    pub base: QuiverPayload,
    pub levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_order: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<LadderArrowPayload>>,
    /// Pairs of arrow words `[[a, b], [c, d]]` meaning `b∘a = d∘c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<[[String; 2]; 2]>>,
}

impl LadderPayload {
    pub fn full(l: &LadderQuiver) -> Self {
        let names = l.vertex_names();
        let id = |i: usize| l.arrow(i).id.clone();
        LadderPayload {
            base: QuiverPayload::from_quiver(l.base()),
            levels: l.levels(),
            vertex_order: Some(names.clone()),
            arrows: Some(
                l.arrows()
                    .iter()
                    .map(|a| LadderArrowPayload {
                        id: a.id.clone(),
                        kind: match a.kind {
                            LadderArrowKind::Vertical { .. } => "alpha".into(),
                            LadderArrowKind::Horizontal { .. } => "beta".into(),
                        },
                        src: names[a.src].clone(),
                        tgt: names[a.tgt].clone(),
                    })
                    .collect(),
            ),
            relations: Some(
                l.relations()
                    .iter()
                    .map(|r| {
                        [
                            [id(r.vertical_first.0), id(r.vertical_first.1)],
                            [id(r.horizontal_first.0), id(r.horizontal_first.1)],
                        ]
                    })
                    .collect(),
            ),
        }
    }

    /// Only the defining data, as embedded in other documents.
    pub fn compact(l: &LadderQuiver) -> Self {
        LadderPayload {
            base: QuiverPayload::from_quiver(l.base()),
            levels: l.levels(),
            vertex_order: None,
            arrows: None,
            relations: None,
        }
    }

    pub fn to_ladder(&self) -> Result<Arc<LadderQuiver>, CliError> {
        let l = build_ladder(&self.base.to_quiver()?, self.levels)?;
        let full = Self::full(&l);
        if self.vertex_order.is_some() && self.vertex_order != full.vertex_order {
            return Err(CliError::validation("ladder vertex_order does not match the base quiver"));
        }
        if self.arrows.is_some() && self.arrows != full.arrows {
            return Err(CliError::validation("ladder arrows do not match the base quiver"));
        }
        if self.relations.is_some() && self.relations != full.relations {
            return Err(CliError::validation("ladder relations do not match the base quiver"));
        }
        Ok(l)
    }
}

fn check_vertex_order(l: &LadderQuiver, order: &[String]) -> Result<(), CliError> {
    if order != l.vertex_names().as_slice() {
        return Err(CliError::validation(format!(
            "vertex_order {order:?} differs from the ladder order {:?}",
            l.vertex_names()
        )));
    }
    Ok(())
}

// scalars and matrices -----------------------------------------------------

pub fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    Ok(FieldSpec::from_str(s)?)
}

pub fn matrix_rows<F: Field>(m: &Matrix<F>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| m.field().format(x)).collect())
        .collect()
}

pub fn parse_matrix<F: Field>(field: &F, rows: usize, cols: usize, data: &[Vec<String>]) -> Result<Matrix<F>, CliError> {
    // a matrix without columns may be written as `[]`
    let empty_ok = cols == 0 && data.is_empty();
    if !empty_ok && (data.len() != rows || data.iter().any(|r| r.len() != cols)) {
        return Err(CliError::validation(format!("expected a {rows}x{cols} matrix")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for s in data.iter().flatten() {
        entries.push(field.parse(s)?);
    }
    Ok(Matrix::from_vec(field, rows, cols, entries)?)
}

// representation -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationPayload {
    pub ladder: LadderPayload,
    pub field: String,
    pub vertex_order: Vec<String>,
    pub dims: Vec<usize>,
    /// Keyed by ladder arrow id; each matrix is `dims(tgt) x dims(src)`.
    pub maps: BTreeMap<String, Vec<Vec<String>>>,
}

impl RepresentationPayload {
    pub fn from_rep<F: Field>(m: &Representation<F>) -> Self {
        let l = m.ladder();
        RepresentationPayload {
            ladder: LadderPayload::compact(l),
            field: m.field().spec().to_string(),
            vertex_order: l.vertex_names(),
            dims: m.dims().to_vec(),
            maps: l
                .arrows()
                .iter()
                .zip(m.mats())
                .map(|(a, x)| (a.id.clone(), matrix_rows(x)))
                .collect(),
        }
    }

    pub fn field_spec(&self) -> Result<FieldSpec, CliError> {
        parse_field(&self.field)
    }

    pub fn to_rep<F: Field>(&self, field: &F) -> Result<Representation<F>, CliError> {
        if self.field_spec()? != field.spec() {
            return Err(CliError::validation(format!("representation is over {}, expected {}", self.field, field.spec())));
        }
        let l = self.ladder.to_ladder()?;
        check_vertex_order(&l, &self.vertex_order)?;
        if self.dims.len() != l.num_vertices() {
            return Err(CliError::validation(format!(
                "{} dimensions for {} vertices",
                self.dims.len(),
                l.num_vertices()
            )));
        }
        if let Some(extra) = self.maps.keys().find(|k| l.find_arrow(k).is_none()) {
            return Err(CliError::validation(format!("unknown arrow '{extra}'")));
        }
        let mut mats = Vec::with_capacity(l.num_arrows());
        for a in l.arrows() {
            let data = self
                .maps
                .get(&a.id)
                .ok_or_else(|| CliError::validation(format!("missing matrix for arrow '{}'", a.id)))?;
            let m = parse_matrix(field, self.dims[a.tgt], self.dims[a.src], data)
                .map_err(|e| e.context(&format!("arrow '{}'", a.id)))?;
            mats.push(m);
        }
        Ok(Representation::new(l, field.clone(), self.dims.clone(), mats)?)
    }
}

// stability ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RankSpec {
    /// `"ones"` or `"sink"`.
    Preset(String),
    Weights(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityPayload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_order: Option<Vec<String>>,
    pub degree: Vec<i64>,
    pub rank: RankSpec,
    #[serde(default = "default_convention")]
    pub convention: String,
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_convention() -> String {
    Convention::default().to_string()
}

fn default_mode() -> String {
    SubMode::default().as_str().to_string()
}

pub fn parse_mode(s: &str) -> Result<SubMode, CliError> {
    match s {
        "all" => Ok(SubMode::All),
        "strict" => Ok(SubMode::Strict),
        _ => Err(CliError::parse(format!("unknown subobject mode '{s}', expected 'all' or 'strict'"))),
    }
}

impl StabilityPayload {
    pub fn from_params(l: &LadderQuiver, p: &StabilityParams) -> Self {
        StabilityPayload {
            vertex_order: Some(l.vertex_names()),
            degree: p.degree.clone(),
            rank: RankSpec::Weights(p.rank.as_slice().to_vec()),
            convention: p.convention.to_string(),
            mode: p.mode.as_str().to_string(),
        }
    }

    /// The cap is not part of the document; it comes from `--cap`.
    pub fn to_params(&self, l: &LadderQuiver) -> Result<StabilityParams, CliError> {
        if let Some(order) = &self.vertex_order {
            check_vertex_order(l, order)?;
        }
        if self.degree.len() != l.num_vertices() {
            return Err(CliError::validation(format!(
                "{} degree entries for {} vertices",
                self.degree.len(),
                l.num_vertices()
            )));
        }
        let rank = match &self.rank {
            RankSpec::Preset(s) if s == "ones" => RankWeights::ones(l),
            RankSpec::Preset(s) if s == "sink" => RankWeights::sink(l),
            RankSpec::Preset(s) => {
                return Err(CliError::parse(format!("unknown rank preset '{s}', expected 'ones' or 'sink'")))
            }
            RankSpec::Weights(r) => RankWeights::new(l, r.clone())?,
        };
        Ok(StabilityParams::new(self.degree.clone(), rank)
            .with_convention(self.convention.parse()?)
            .with_mode(parse_mode(&self.mode)?))
    }
}

// presentation -------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermPayload {
    pub coeff: String,
    /// Arrow ids in traversal order; empty for the trivial path.
    pub word: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationPayload {
    pub ladder: LadderPayload,
    pub field: String,
    pub vertex_order: Vec<String>,
    pub u0: Vec<usize>,
    pub u1: Vec<usize>,
    /// Rows follow the `u1` slots, columns the `u0` slots; each entry is a
    /// sum of paths from the column vertex to the row vertex.
    pub gamma: Vec<Vec<Vec<TermPayload>>>,
}

fn slots(u: &[usize]) -> Vec<usize> {
    u.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect()
}

impl PresentationPayload {
    pub fn from_presentation<F: Field>(p: &Presentation<F>) -> Self {
        let l = p.ladder();
        let f = p.field();
        let entry = |e: &PathElement<F>| {
            e.terms()
                .map(|(path, c): (&NormalPath, &F::Elem)| TermPayload {
                    coeff: f.format(c),
                    word: path.to_word(l).into_iter().map(|x| l.arrow(x).id.clone()).collect(),
                })
                .collect()
        };
        PresentationPayload {
            ladder: LadderPayload::compact(l),
            field: f.spec().to_string(),
            vertex_order: l.vertex_names(),
            u0: p.u0().to_vec(),
            u1: p.u1().to_vec(),
            gamma: p.gamma().iter().map(|row| row.iter().map(entry).collect()).collect(),
        }
    }

    pub fn field_spec(&self) -> Result<FieldSpec, CliError> {
        parse_field(&self.field)
    }

    pub fn to_presentation<F: Field>(&self, field: &F) -> Result<Presentation<F>, CliError> {
        if self.field_spec()? != field.spec() {
            return Err(CliError::validation(format!("presentation is over {}, expected {}", self.field, field.spec())));
        }
        let l = self.ladder.to_ladder()?;
        check_vertex_order(&l, &self.vertex_order)?;
        if self.u0.len() != l.num_vertices() || self.u1.len() != l.num_vertices() {
            return Err(CliError::validation("multiplicities need one entry per vertex"));
        }
        let (rows, cols) = (slots(&self.u1), slots(&self.u0));
        if self.gamma.len() != rows.len() || self.gamma.iter().any(|r| r.len() != cols.len()) {
            return Err(CliError::validation(format!("gamma must be {}x{}", rows.len(), cols.len())));
        }
        let mut gamma = Vec::with_capacity(rows.len());
        for (r, row) in self.gamma.iter().enumerate() {
            let mut out = Vec::with_capacity(cols.len());
            for (c, terms) in row.iter().enumerate() {
                let mut words = Vec::with_capacity(terms.len());
                for t in terms {
                    let word = t
                        .word
                        .iter()
                        .map(|id| l.find_arrow(id).ok_or_else(|| CliError::validation(format!("unknown arrow '{id}'"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    words.push((field.parse(&t.coeff)?, word));
                }
                let e = PathElement::from_words(field, &l, cols[c], rows[r], &words)
                    .map_err(|e| CliError::from(e).context(&format!("gamma entry ({r},{c})")))?;
                out.push(e);
            }
            gamma.push(out);
        }
        Ok(Presentation::new(l, field.clone(), self.u0.clone(), self.u1.clone(), gamma)?)
    }
}

// report -------------------------------------------------------------------

/// Everything needed to rerun a command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub field: Option<String>,
    pub convention: String,
    pub criterion: String,
    pub cap: u64,
    pub seed: u64,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportPayload {
    pub command: String,
    pub settings: Settings,
    /// Input documents, verbatim.
    pub inputs: BTreeMap<String, Document>,
    pub result: Value,
}
