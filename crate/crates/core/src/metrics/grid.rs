use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PlanarDomain, Point2, Rect};

/// A lattice window. Earlier patches own the points they cover.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchSpec {
    pub window: Rect,
    pub h: f64,
}

#[derive(Clone, Debug)]
struct Patch {
    spec: PatchSpec,
    lookup: FxHashMap<(i32, i32), u32>,
}

impl Patch {
    fn index_of(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.spec.window.min.x) / self.spec.h, (p.y - self.spec.window.min.y) / self.spec.h)
    }

    fn point(&self, i: i32, j: i32) -> Point2 {
        let w = self.spec.window;
        Point2::new(w.min.x + i as f64 * self.spec.h, w.min.y + j as f64 * self.spec.h)
    }
}

/// King and knight moves, one of each opposite pair.
const HALF_MOVES: [(i32, i32); 8] = [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-1, 2), (-2, 1)];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridStats {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub patches: Vec<PatchSpec>,
}

/// Visibility graph on lattice points of one or more windows.
#[derive(Clone, Debug)]
pub struct GridGraph {
    patches: Vec<Patch>,
    pos: Vec<Point2>,
    delta: Vec<f64>,
    patch_of: Vec<u16>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    comp: Vec<u32>,
    n_comp: usize,
}

impl GridGraph {
    pub fn build(domain: &PlanarDomain, patches: &[PatchSpec]) -> Result<GridGraph> {
        check_resolution(domain, patches)?;
        let g = Self::build_unchecked(domain, patches)?;
        g.check_midlines(domain)?;
        Ok(g)
    }

    /// Builds without the corridor resolution checks.
    pub fn build_unchecked(domain: &PlanarDomain, patches: &[PatchSpec]) -> Result<GridGraph> {
        if patches.is_empty() || patches.len() > u16::MAX as usize {
            return Err(Error::SpecInvalid("grid needs between 1 and 65535 patches".into()));
        }
        for p in patches {
            if !(p.h > 0.0 && p.h.is_finite()) {
                return Err(Error::SpecInvalid(format!("grid spacing {} must be positive", p.h)));
            }
            let cells = (p.window.width() / p.h + 1.0) * (p.window.height() / p.h + 1.0);
            if !(cells < 4e9) {
                return Err(Error::SpecInvalid(format!("window {:?} at spacing {} has too many lattice points", p.window, p.h)));
            }
        }
        let mut g = GridGraph {
            patches: Vec::with_capacity(patches.len()),
            pos: Vec::new(),
            delta: Vec::new(),
            patch_of: Vec::new(),
            offsets: Vec::new(),
            targets: Vec::new(),
            comp: Vec::new(),
            n_comp: 0,
        };
        for (k, &spec) in patches.iter().enumerate() {
            let mut patch = Patch { spec, lookup: FxHashMap::default() };
            let w = spec.window;
            let ny = (w.height() / spec.h).floor() as i32;
            for j in 0..=ny {
                let y = w.min.y + j as f64 * spec.h;
                for (xa, xb) in domain.row_intervals(y) {
                    let lo = xa.max(w.min.x);
                    let hi = xb.min(w.max.x);
                    if lo > hi {
                        continue;
                    }
                    let i0 = ((lo - w.min.x) / spec.h).ceil() as i32;
                    let i1 = ((hi - w.min.x) / spec.h).floor() as i32;
                    for i in i0..=i1 {
                        let p = patch.point(i, j);
                        if patches[..k].iter().any(|q| q.window.contains(p)) {
                            continue;
                        }
                        let d = domain.raw_delta(p);
                        if d >= 0.5 * spec.h && d > 0.0 {
                            patch.lookup.insert((i, j), g.pos.len() as u32);
                            g.pos.push(p);
                            g.delta.push(d);
                            g.patch_of.push(k as u16);
                        }
                    }
                }
            }
            g.patches.push(patch);
        }
        if g.pos.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let edges = g.collect_edges(domain);
        g.install_edges(edges);
        g.label_components();
        Ok(g)
    }

    fn unblocked(&self, domain: &PlanarDomain, a: u32, b: u32) -> bool {
        let (pa, pb) = (self.pos[a as usize], self.pos[b as usize]);
        pa.dist(pb) < self.delta[a as usize] + self.delta[b as usize] || !domain.segment_hits_boundary(pa, pb)
    }

    fn lattice_edges(&self, domain: &PlanarDomain, n: u32, out: &mut Vec<(u32, u32)>) {
        let patch = &self.patches[self.patch_of[n as usize] as usize];
        let (fi, fj) = patch.index_of(self.pos[n as usize]);
        let (i, j) = (fi.round() as i32, fj.round() as i32);
        for (di, dj) in HALF_MOVES {
            if let Some(&m) = patch.lookup.get(&(i + di, j + dj)) {
                if self.unblocked(domain, n, m) {
                    out.push((n, m));
                }
            }
        }
    }

    fn collect_edges(&self, domain: &PlanarDomain) -> Vec<(u32, u32)> {
        let n = self.pos.len() as u32;
        #[cfg(feature = "parallel")]
        let mut edges: Vec<(u32, u32)> = {
            use rayon::prelude::*;
            let chunk = 4096u32;
            let chunks: Vec<u32> = (0..n.div_ceil(chunk)).collect();
            chunks
                .par_iter()
                .map(|&c| {
                    let mut out = Vec::new();
                    for v in c * chunk..((c + 1) * chunk).min(n) {
                        self.lattice_edges(domain, v, &mut out);
                    }
                    out
                })
                .collect::<Vec<_>>()
                .concat()
        };
        #[cfg(not(feature = "parallel"))]
        let mut edges: Vec<(u32, u32)> = {
            let mut out = Vec::new();
            for v in 0..n {
                self.lattice_edges(domain, v, &mut out);
            }
            out
        };
        for a in 0..self.patches.len() {
            for b in a + 1..self.patches.len() {
                self.stitch(domain, a, b, &mut edges);
            }
        }
        edges
    }

    /// Edges between nodes of two patches closer than 1.5 times the coarser spacing.
    fn stitch(&self, domain: &PlanarDomain, a: usize, b: usize, out: &mut Vec<(u32, u32)>) {
        let pa = &self.patches[a];
        let pb = &self.patches[b];
        let rho = 1.5 * pa.spec.h.max(pb.spec.h);
        let wb = pb.spec.window;
        if !pa.spec.window.expand(rho).intersects(&wb) {
            return;
        }
        for n in 0..self.pos.len() as u32 {
            if self.patch_of[n as usize] as usize != a {
                continue;
            }
            let p = self.pos[n as usize];
            if wb.dist(p) > rho {
                continue;
            }
            let (fi, fj) = pb.index_of(p);
            let r = rho / pb.spec.h;
            for j in (fj - r).ceil() as i32..=(fj + r).floor() as i32 {
                for i in (fi - r).ceil() as i32..=(fi + r).floor() as i32 {
                    if let Some(&m) = pb.lookup.get(&(i, j)) {
                        if p.dist(self.pos[m as usize]) <= rho && self.unblocked(domain, n, m) {
                            out.push((n, m));
                        }
                    }
                }
            }
        }
    }

    fn install_edges(&mut self, edges: Vec<(u32, u32)>) {
        let n = self.pos.len();
        let mut deg = vec![0u32; n + 1];
        for &(a, b) in &edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n] as usize];
        for &(a, b) in &edges {
            targets[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i] as usize..offsets[i + 1] as usize].sort_unstable();
        }
        self.offsets = offsets;
        self.targets = targets;
    }

    fn label_components(&mut self) {
        let n = self.pos.len();
        let mut comp = vec![u32::MAX; n];
        let mut stack = Vec::new();
        let mut c = 0u32;
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = c;
            stack.push(s as u32);
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if comp[u as usize] == u32::MAX {
                        comp[u as usize] = c;
                        stack.push(u);
                    }
                }
            }
            c += 1;
        }
        self.comp = comp;
        self.n_comp = c as usize;
    }

    fn check_midlines(&self, domain: &PlanarDomain) -> Result<()> {
        for d in domain.decorations() {
            for c in 1..=4u8 {
                let mid = d.midline(c)?;
                let len = mid.length();
                let mut comp: Option<u32> = None;
                let mut s = 0.0;
                let mut last_in = false;
                loop {
                    let p = mid.point_at(s);
                    let (x, _) = d.local(p);
                    let covered = self.patches.iter().any(|q| q.spec.window.contains(p));
                    if covered {
                        let node = self.snap(p).map_err(|_| {
                            Error::ResolutionTooCoarse(format!("no node near corridor {c} of decoration {} at {p:?}", d.j()))
                        })?;
                        let k = self.comp[node as usize];
                        match comp {
                            Some(k0) if k0 != k && last_in => {
                                return Err(Error::ResolutionTooCoarse(format!(
                                    "corridor {c} of decoration {} is disconnected in the grid",
                                    d.j()
                                )))
                            }
                            _ => comp = Some(k),
                        }
                    }
                    last_in = covered;
                    if s >= len {
                        break;
                    }
                    s = (s + 0.5 * d.w_at(x)).min(len);
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn component_count(&self) -> usize {
        self.n_comp
    }

    pub fn component(&self, n: u32) -> u32 {
        self.comp[n as usize]
    }

    pub fn pos(&self, n: u32) -> Point2 {
        self.pos[n as usize]
    }

    pub fn positions(&self) -> &[Point2] {
        &self.pos
    }

    pub fn delta(&self, n: u32) -> f64 {
        self.delta[n as usize]
    }

    pub fn deltas(&self) -> &[f64] {
        &self.delta
    }

    pub fn neighbors(&self, n: u32) -> &[u32] {
        &self.targets[self.offsets[n as usize] as usize..self.offsets[n as usize + 1] as usize]
    }

    pub fn patches(&self) -> Vec<PatchSpec> {
        self.patches.iter().map(|p| p.spec).collect()
    }

    pub fn h_of(&self, n: u32) -> f64 {
        self.patches[self.patch_of[n as usize] as usize].spec.h
    }

    pub fn h_max(&self) -> f64 {
        self.patches.iter().map(|p| p.spec.h).fold(0.0, f64::max)
    }

    /// Spacing of the finest patch covering `p` (coarsest overall if none does).
    pub fn h_at(&self, p: Point2) -> f64 {
        self.patches
            .iter()
            .find(|q| q.spec.window.contains(p))
            .map(|q| q.spec.h)
            .unwrap_or_else(|| self.h_max())
    }

    pub fn covers(&self, p: Point2) -> bool {
        self.patches.iter().any(|q| q.spec.window.contains(p))
    }

    pub fn covers_rect(&self, r: &Rect) -> bool {
        let corners = [r.min, r.max, Point2::new(r.min.x, r.max.y), Point2::new(r.max.x, r.min.y)];
        // windows overlap freely, so sample the rectangle instead of reasoning about unions
        let steps = 16;
        corners.iter().all(|&c| self.covers(c))
            && (0..=steps).all(|a| {
                (0..=steps).all(|b| {
                    let p = Point2::new(
                        r.min.x + r.width() * a as f64 / steps as f64,
                        r.min.y + r.height() * b as f64 / steps as f64,
                    );
                    self.covers(p)
                })
            })
    }

    /// Nearest node within twice the local spacing; ties go to the smaller `(x, y)`.
    pub fn snap(&self, p: Point2) -> Result<u32> {
        let mut best: Option<(f64, Point2, u32)> = None;
        for patch in &self.patches {
            let h = patch.spec.h;
            let reach = 2.0 * h;
            if patch.spec.window.dist(p) > reach {
                continue;
            }
            let (fi, fj) = patch.index_of(p);
            for j in (fj - 2.0).ceil() as i32..=(fj + 2.0).floor() as i32 {
                for i in (fi - 2.0).ceil() as i32..=(fi + 2.0).floor() as i32 {
                    if let Some(&n) = patch.lookup.get(&(i, j)) {
                        let q = self.pos[n as usize];
                        let d = q.dist(p);
                        if d > reach {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some((bd, bq, _)) => d < bd || (d == bd && (q.x, q.y) < (bq.x, bq.y)),
                        };
                        if better {
                            best = Some((d, q, n));
                        }
                    }
                }
            }
        }
        best.map(|b| b.2).ok_or(Error::SnapFailed(p))
    }

    pub fn stats(&self) -> GridStats {
        GridStats { nodes: self.len(), edges: self.edge_count(), components: self.n_comp, patches: self.patches() }
    }
}

/// Minimum corridor width of every decoration a patch overlaps must be at least six spacings.
fn check_resolution(domain: &PlanarDomain, patches: &[PatchSpec]) -> Result<()> {
    for p in patches {
        let w = p.window;
        for d in domain.decorations() {
            let bb = d.bbox();
            let lx0 = (w.min.x - 1.0).max(0.0);
            let lx1 = (w.max.x - 1.0).min(d.total());
            let y_overlap = w.max.y.min(bb.max.y) - w.min.y.max(bb.min.y);
            if !(lx1 > lx0) || !(y_overlap > 0.0) {
                continue;
            }
            let mut wmin = d.w_at(lx0).min(d.w_at(lx1));
            for &x in d.breakpoints() {
                if x > lx0 && x < lx1 {
                    wmin = wmin.min(d.w_at(x));
                }
            }
            if p.h > wmin / 6.0 {
                return Err(Error::ResolutionTooCoarse(format!(
                    "spacing {} exceeds one sixth of the corridor width {} in decoration {}",
                    p.h,
                    wmin,
                    d.j()
                )));
            }
        }
    }
    Ok(())
}

pub fn build_grid(domain: &PlanarDomain, window: Rect, h: f64) -> Result<GridGraph> {
    GridGraph::build(domain, &[PatchSpec { window, h }])
}

/// Patches resolving decoration `j` at an eighth of the local corridor width.
///
/// The decoration is cut at its breakpoints and each run of pieces sharing a
/// spacing becomes one window over the full decoration height; a strip of the
/// square next to the attachment is added at the finest spacing.
pub fn decoration_patches(domain: &PlanarDomain, j: u32) -> Result<Vec<PatchSpec>> {
    let d = domain.decoration(j)?;
    let r_m = d.r_outer();
    let mut cuts: Vec<f64> = vec![0.0];
    cuts.extend(d.breakpoints().iter().copied().filter(|&x| x > 0.0 && x < d.total()));
    cuts.push(d.total());
    cuts.dedup();
    let mut runs: Vec<(f64, f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let wmin = d.w_at(x0).min(d.w_at(x1));
        let h = wmin / 8.0;
        match runs.last_mut() {
            Some(last) if last.2 == h => last.1 = x1,
            _ => runs.push((x0, x1, h)),
        }
    }
    // a coarse run must not see the narrow end of a neighbouring pinch
    for k in 0..runs.len() {
        let h_nb = [k.checked_sub(1), Some(k + 1)]
            .into_iter()
            .flatten()
            .filter_map(|i| runs.get(i).map(|r| r.2))
            .fold(f64::INFINITY, f64::min);
        if h_nb < runs[k].2 {
            let pad = 8.0 * runs[k].2;
            if k > 0 && runs[k - 1].2 < runs[k].2 {
                runs[k].0 = (runs[k].0 + pad).min(runs[k].1);
                runs[k - 1].1 = runs[k].0;
            }
            if k + 1 < runs.len() && runs[k + 1].2 < runs[k].2 {
                runs[k].1 = (runs[k].1 - pad).max(runs[k].0);
                runs[k + 1].0 = runs[k].1;
            }
        }
    }
    runs.retain(|r| r.1 > r.0);
    let h_fine = runs.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let hh = d.half_height();
    let a = d.a();
    let mut out = vec![PatchSpec {
        window: Rect::new(1.0 - 4.0 * r_m, a - 3.0 * r_m, 1.0, a + 3.0 * r_m),
        h: h_fine,
    }];
    let nr = runs.len();
    for (k, &(x0, x1, h)) in runs.iter().enumerate() {
        let m = 2.0 * h;
        let x1 = if k + 1 == nr { x1 + m } else { x1 };
        out.push(PatchSpec { window: Rect::new(1.0 + x0, a - hh - m, 1.0 + x1, a + hh + m), h });
    }
    out.sort_by(|p, q| p.h.total_cmp(&q.h));
    Ok(out)
}

pub fn decoration_grid(domain: &PlanarDomain, j: u32) -> Result<GridGraph> {
    GridGraph::build(domain, &decoration_patches(domain, j)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rectangle;

    #[test]
    fn unit_square_nine_by_nine() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let g = build_grid(&d, Rect::new(0.0, 0.0, 1.0, 1.0), 0.1).unwrap();
        // oracle: lattice points with δ ≥ h/2
        let mut expect = 0;
        for i in 0..=10 {
            for j in 0..=10 {
                let p = Point2::new(i as f64 * 0.1, j as f64 * 0.1);
                let dl = p.x.min(p.y).min(1.0 - p.x).min(1.0 - p.y);
                if dl >= 0.05 {
                    expect += 1;
                }
            }
        }
        assert_eq!(expect, 81);
        assert_eq!(g.len(), 81);
        assert_eq!(g.component_count(), 1);
    }

    #[test]
    fn disjoint_window_is_empty() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert!(matches!(build_grid(&d, Rect::new(2.0, 2.0, 3.0, 3.0), 0.1), Err(Error::EmptyGrid)));
    }

    #[test]
    fn snap_prefers_lexicographic_tie() {
        let d = rectangle(Rect::new(0.0, 0.0, 1.0, 1.0)).unwrap();
        let g = build_grid(&d, Rect::new(0.0, 0.0, 1.0, 1.0), 0.25).unwrap();
        let n = g.snap(Point2::new(0.375, 0.5)).unwrap();
        assert_eq!(g.pos(n), Point2::new(0.25, 0.5));
        assert!(matches!(g.snap(Point2::new(5.0, 5.0)), Err(Error::SnapFailed(_))));
    }

    #[test]
    fn two_patches_are_stitched() {
        let d = rectangle(Rect::new(0.0, 0.0, 2.0, 1.0)).unwrap();
        let g = GridGraph::build(
            &d,
            &[
                PatchSpec { window: Rect::new(1.0, 0.0, 2.0, 1.0), h: 0.05 },
                PatchSpec { window: Rect::new(0.0, 0.0, 2.0, 1.0), h: 0.1 },
            ],
        )
        .unwrap();
        assert_eq!(g.component_count(), 1);
    }
}
