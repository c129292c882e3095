use serde::Serialize;

use super::{kernel, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::{snf, solve_with, IntVector};

/// Outcome at the junction between `maps[index]` and `maps[index + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JunctionReport {
    pub index: usize,
    pub exact: bool,
    /// Element of the middle group breaking exactness: either a nonzero
    /// image of the composite, or a kernel element outside the image.
    pub witness: Option<IntVector>,
}

/// Checks exactness of `A_0 → A_1 → ... → A_k` at each interior group.
pub fn check_exact(maps: &[GroupHom]) -> Result<Vec<JunctionReport>> {
    for (i, w) in maps.windows(2).enumerate() {
        if !w[0].target().same_presentation(w[1].source()) {
            return Err(Error::NotComposable(i));
        }
    }
    let mut out = Vec::with_capacity(maps.len().saturating_sub(1));
    for (index, w) in maps.windows(2).enumerate() {
        let (f, g) = (&w[0], &w[1]);
        let bad_image = (0..f.source().generators())
            .map(|j| f.matrix().column(j))
            .find(|x| !g.target().is_zero(&g.apply(x)));
        if let Some(x) = bad_image {
            out.push(JunctionReport { index, exact: false, witness: Some(x) });
            continue;
        }
        let (_, incl) = kernel(g);
        let s = snf(&f.matrix().hconcat(f.target().relations()));
        let missing = incl
            .matrix()
            .columns()
            .into_iter()
            .find(|c| solve_with(&s, c).is_none());
        out.push(JunctionReport { index, exact: missing.is_none(), witness: missing });
    }
    Ok(out)
}

/// Whether every junction is exact.
pub fn is_exact(maps: &[GroupHom]) -> Result<bool> {
    Ok(check_exact(maps)?.iter().all(|r| r.exact))
}
