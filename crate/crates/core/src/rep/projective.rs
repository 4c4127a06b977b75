use std::sync::Arc;

use crate::error::Result;
use crate::exactla::{Field, Matrix};
use crate::quiver::path::normal_paths;
use crate::quiver::{LadderQuiver, NormalPath};
use crate::rep::Representation;

/// `P'_w`: at `u` the space spanned by normal-form paths `w -> u`, with each
/// arrow acting by post-composition.
pub fn indecomposable_projective<F: Field>(ladder: &Arc<LadderQuiver>, field: &F, w: usize) -> Result<Representation<F>> {
    ladder.validate_vertex(w)?;
    let bases: Vec<Vec<NormalPath>> = (0..ladder.num_vertices()).map(|u| normal_paths(ladder, w, u)).collect();
    let dims = bases.iter().map(|b| b.len()).collect();
    let mats = ladder
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut m = Matrix::zeros(field, bases[a.tgt].len(), bases[a.src].len());
            let step = NormalPath::from_word(ladder, a.src, &[i]).expect("single arrow is a path");
            for (c, p) in bases[a.src].iter().enumerate() {
                let q = p.then(ladder, &step).expect("path ends at the arrow source");
                let r = bases[a.tgt].binary_search(&q).expect("extended path is a normal path");
                m.set(r, c, field.one());
            }
            m
        })
        .collect();
    Representation::new(ladder.clone(), field.clone(), dims, mats)
}
