//! Commuting `N x N` grids of finitely generated abelian groups and the
//! comparison map `colim_α lim_β → lim_β colim_α`.
//!
//! Arrows: `G_{α,β} → G_{α+1,β}` (the α-maps, towards the colimit) and
//! `G_{α,β+1} → G_{α,β}` (the β-maps, towards the limit).

mod json;
mod periodic;
mod report;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};

pub use json::BiSystemJson;
pub use periodic::{endo_colim, preimage, EndoColim, PeriodicThread};
pub use report::{tau, tau_with_upper, BiValue, Certified, Slot, SlotValue, TauReport, Verdict};

/// Truncation window `A x B`: `α < A`, `β < B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub alpha: usize,
    pub beta: usize,
}

impl Window {
    pub fn new(alpha: usize, beta: usize) -> Window {
        Window { alpha, beta }
    }

    pub fn grow(&self, by: usize) -> Window {
        Window { alpha: self.alpha + by, beta: self.beta + by }
    }
}

impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Window> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Invalid(format!("window {s:?} is not of the form A,B")))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad window size {t:?}")));
        let w = Window { alpha: parse(a)?, beta: parse(b)? };
        if w.alpha == 0 || w.beta == 0 {
            return Err(Error::Invalid("window sizes must be positive".into()));
        }
        Ok(w)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.alpha, self.beta)
    }
}

/// Finite grid, continued by identity maps past its last row and column.
#[derive(Clone, Debug)]
pub struct ExplicitGrid {
    groups: Vec<Vec<FgAbGroup>>,
    alpha_maps: Vec<Vec<GroupHom>>,
    beta_maps: Vec<Vec<GroupHom>>,
}

impl ExplicitGrid {
    /// `groups[α][β]`; `alpha_maps[α][β] : G_{α,β} → G_{α+1,β}`;
    /// `beta_maps[α][β] : G_{α,β+1} → G_{α,β}`.
    pub fn new(groups: Vec<Vec<FgAbGroup>>, alpha_maps: Vec<Vec<GroupHom>>, beta_maps: Vec<Vec<GroupHom>>) -> Result<Self> {
        let a = groups.len();
        let b = groups.first().map_or(0, Vec::len);
        if a == 0 || b == 0 || groups.iter().any(|r| r.len() != b) {
            return Err(Error::DimensionMismatch("grid groups must form a nonempty rectangle".into()));
        }
        if alpha_maps.len() != a - 1 || alpha_maps.iter().any(|r| r.len() != b) {
            return Err(Error::DimensionMismatch(format!("expected {} x {b} alpha maps", a - 1)));
        }
        if beta_maps.len() != a || beta_maps.iter().any(|r| r.len() != b - 1) {
            return Err(Error::DimensionMismatch(format!("expected {a} x {} beta maps", b - 1)));
        }
        for (i, row) in alpha_maps.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if !f.source().same_presentation(&groups[i][j]) || !f.target().same_presentation(&groups[i + 1][j]) {
                    return Err(Error::DimensionMismatch(format!("alpha map at ({i}, {j}) has the wrong endpoints")));
                }
            }
        }
        for (i, row) in beta_maps.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if !f.source().same_presentation(&groups[i][j + 1]) || !f.target().same_presentation(&groups[i][j]) {
                    return Err(Error::DimensionMismatch(format!("beta map at ({i}, {j}) has the wrong endpoints")));
                }
            }
        }
        let g = ExplicitGrid { groups, alpha_maps, beta_maps };
        check_squares(&BiSystem::Explicit(g.clone()), Window::new(a, b))?;
        Ok(g)
    }

    pub fn size(&self) -> Window {
        Window::new(self.groups.len(), self.groups[0].len())
    }

    fn group(&self, a: usize, b: usize) -> &FgAbGroup {
        let s = self.size();
        &self.groups[a.min(s.alpha - 1)][b.min(s.beta - 1)]
    }

    fn alpha_map(&self, a: usize, b: usize) -> GroupHom {
        let s = self.size();
        if a + 1 < s.alpha {
            self.alpha_maps[a][b.min(s.beta - 1)].clone()
        } else {
            GroupHom::identity(self.group(a, b))
        }
    }

    fn beta_map(&self, a: usize, b: usize) -> GroupHom {
        let s = self.size();
        if b + 1 < s.beta {
            self.beta_maps[a.min(s.alpha - 1)][b].clone()
        } else {
            GroupHom::identity(self.group(a, b))
        }
    }
}

/// Grid whose entries depend only on `d = β − α`, constant for `d ≤ low`
/// and for `d ≥ high`.
#[derive(Clone, Debug)]
pub struct ToeplitzGrid {
    low: i64,
    groups: Vec<FgAbGroup>,
    /// `alpha[i] : H_{low+i+1} → H_{low+i}`.
    alpha: Vec<GroupHom>,
    /// `beta[i] : H_{low+i+1} → H_{low+i}`.
    beta: Vec<GroupHom>,
}

impl ToeplitzGrid {
    pub fn new(low: i64, groups: Vec<FgAbGroup>, alpha: Vec<GroupHom>, beta: Vec<GroupHom>) -> Result<Self> {
        let n = groups.len();
        if n == 0 || alpha.len() + 1 != n || beta.len() + 1 != n {
            return Err(Error::DimensionMismatch("need one group per diagonal and one map per step".into()));
        }
        for i in 0..n - 1 {
            for f in [&alpha[i], &beta[i]] {
                if !f.source().same_presentation(&groups[i + 1]) || !f.target().same_presentation(&groups[i]) {
                    return Err(Error::DimensionMismatch(format!("map at diagonal {} has the wrong endpoints", low + i as i64 + 1)));
                }
            }
        }
        let t = ToeplitzGrid { low, groups, alpha, beta };
        for d in t.low - 1..=t.high() + 1 {
            let lhs = t.bmap(d).then(&t.amap(d))?;
            let rhs = t.amap(d + 1).then(&t.bmap(d - 1))?;
            if !lhs.equals(&rhs) {
                return Err(Error::Invalid(format!("diagonal grid squares do not commute at d = {d}")));
            }
        }
        Ok(t)
    }

    /// Reads a diagonal grid off an explicit window, checking that entries
    /// and maps only depend on `β − α`.
    pub fn from_explicit(g: &ExplicitGrid) -> Result<Self> {
        let s = g.size();
        if s.alpha < 2 || s.beta < 2 {
            return Err(Error::Invalid("need at least a 2 x 2 window".into()));
        }
        let low = -(s.alpha as i64 - 1);
        let high = s.beta as i64 - 1;
        let cells = |d: i64| (0..s.alpha).filter_map(move |a| usize::try_from(a as i64 + d).ok().filter(|&b| b < s.beta).map(|b| (a, b)));
        let mut groups = Vec::new();
        for d in low..=high {
            let (a0, b0) = cells(d).next().expect("every diagonal meets the window");
            let h = g.groups[a0][b0].clone();
            if let Some((a, b)) = cells(d).find(|&(a, b)| !g.groups[a][b].same_presentation(&h)) {
                return Err(Error::Invalid(format!("entry ({a}, {b}) differs from its diagonal")));
            }
            groups.push(h);
        }
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for d in low + 1..=high {
            let mut maps = cells(d).filter(|&(a, _)| a + 1 < s.alpha).map(|(a, b)| (a, b, &g.alpha_maps[a][b]));
            let (_, _, f) = maps.next().expect("diagonal has an alpha step");
            if let Some((a, b, _)) = maps.find(|(_, _, h)| !h.equals(f)) {
                return Err(Error::Invalid(format!("alpha map at ({a}, {b}) differs from its diagonal")));
            }
            alpha.push(f.clone());
        }
        for d in low..high {
            let mut maps = cells(d).filter(|&(_, b)| b + 1 < s.beta).map(|(a, b)| (a, b, &g.beta_maps[a][b]));
            let (_, _, f) = maps.next().expect("diagonal has a beta step");
            if let Some((a, b, _)) = maps.find(|(_, _, h)| !h.equals(f)) {
                return Err(Error::Invalid(format!("beta map at ({a}, {b}) differs from its diagonal")));
            }
            beta.push(f.clone());
        }
        ToeplitzGrid::new(low, groups, alpha, beta)
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.groups.len() as i64 - 1
    }

    pub fn diagonal(&self, d: i64) -> &FgAbGroup {
        &self.groups[(d.clamp(self.low, self.high()) - self.low) as usize]
    }

    /// α-map out of diagonal `d`, into diagonal `d − 1`.
    pub fn amap(&self, d: i64) -> GroupHom {
        if d > self.low && d <= self.high() {
            self.alpha[(d - self.low - 1) as usize].clone()
        } else {
            GroupHom::identity(self.diagonal(d))
        }
    }

    /// β-map from diagonal `d + 1` into diagonal `d`.
    pub fn bmap(&self, d: i64) -> GroupHom {
        if d >= self.low && d < self.high() {
            self.beta[(d - self.low) as usize].clone()
        } else {
            GroupHom::identity(self.diagonal(d + 1))
        }
    }
}

#[derive(Clone, Debug)]
pub enum BiSystem {
    Explicit(ExplicitGrid),
    /// `G_{α,β} = G`, α-maps `u`, β-maps `v`, with `uv = vu`.
    BiPeriodic { group: FgAbGroup, u: GroupHom, v: GroupHom },
    Toeplitz(ToeplitzGrid),
}

impl BiSystem {
    pub fn bi_periodic(u: GroupHom, v: GroupHom) -> Result<BiSystem> {
        let g = u.source().clone();
        for f in [&u, &v] {
            if !f.source().same_presentation(&g) || !f.target().same_presentation(&g) {
                return Err(Error::DimensionMismatch("u and v must be endomorphisms of one group".into()));
            }
        }
        if !u.then(&v)?.equals(&v.then(&u)?) {
            return Err(Error::NotCommutative { alpha: 0, beta: 0 });
        }
        Ok(BiSystem::BiPeriodic { group: g, u, v })
    }

    /// Every entry `Z`, every map the identity.
    pub fn constant(g: &FgAbGroup) -> BiSystem {
        BiSystem::BiPeriodic { group: g.clone(), u: GroupHom::identity(g), v: GroupHom::identity(g) }
    }

    pub fn group(&self, a: usize, b: usize) -> FgAbGroup {
        match self {
            BiSystem::Explicit(g) => g.group(a, b).clone(),
            BiSystem::BiPeriodic { group, .. } => group.clone(),
            BiSystem::Toeplitz(t) => t.diagonal(b as i64 - a as i64).clone(),
        }
    }

    /// `G_{α,β} → G_{α+1,β}`.
    pub fn alpha_map(&self, a: usize, b: usize) -> GroupHom {
        match self {
            BiSystem::Explicit(g) => g.alpha_map(a, b),
            BiSystem::BiPeriodic { u, .. } => u.clone(),
            BiSystem::Toeplitz(t) => t.amap(b as i64 - a as i64),
        }
    }

    /// `G_{α,β+1} → G_{α,β}`.
    pub fn beta_map(&self, a: usize, b: usize) -> GroupHom {
        match self {
            BiSystem::Explicit(g) => g.beta_map(a, b),
            BiSystem::BiPeriodic { v, .. } => v.clone(),
            BiSystem::Toeplitz(t) => t.bmap(b as i64 - a as i64),
        }
    }

    /// Restriction of the grid to a window, as an explicit grid.
    pub fn window(&self, w: Window) -> Result<ExplicitGrid> {
        let groups = (0..w.alpha).map(|a| (0..w.beta).map(|b| self.group(a, b)).collect()).collect();
        let alpha = (0..w.alpha - 1).map(|a| (0..w.beta).map(|b| self.alpha_map(a, b)).collect()).collect();
        let beta = (0..w.alpha).map(|a| (0..w.beta - 1).map(|b| self.beta_map(a, b)).collect()).collect();
        ExplicitGrid::new(groups, alpha, beta)
    }
}

/// Checks every square inside the window on generators.
pub fn check_squares(s: &BiSystem, w: Window) -> Result<()> {
    for a in 0..w.alpha.saturating_sub(1) {
        for b in 0..w.beta.saturating_sub(1) {
            let lhs = s.beta_map(a, b).then(&s.alpha_map(a, b))?;
            let rhs = s.alpha_map(a, b + 1).then(&s.beta_map(a + 1, b))?;
            if !lhs.equals(&rhs) {
                return Err(Error::NotCommutative { alpha: a, beta: b });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
