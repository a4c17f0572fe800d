//! Zeros of the mode secular functions by the argument principle, the
//! resonance sets they make up, and the counting functions `N_P`, `N_0`.
//!
//! Boxes are bisected until each piece winds at most once; a lone zero is
//! then polished by Newton's method with a Cauchy-circle derivative. For
//! the real models only the upper half of the master box (plus a thin strip
//! below the axis) is searched and the lower half is filled in by
//! conjugation, which makes the returned sets exactly symmetric.

use crate::error::{Error, Result};
use crate::models::{mode_weight, secular, ModelKind, ModelSpec};
use crate::scaled::Scaled;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchRegion {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl SearchRegion {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        SearchRegion { re_lo, re_hi, im_lo, im_hi }
    }

    /// The default box `[n/2-(t+2), n/2+0.5] x [-(t+2), t+2]`.
    pub fn master(n: u32, t_max: f64) -> Self {
        let h = 0.5 * n as f64;
        let m = t_max + 2.0;
        SearchRegion::new(h - m, h + 0.5, -m, m)
    }

    pub fn contains(&self, s: C64) -> bool {
        s.re >= self.re_lo && s.re <= self.re_hi && s.im >= self.im_lo && s.im <= self.im_hi
    }

    fn grown(&self, d: f64) -> Self {
        SearchRegion::new(self.re_lo - d, self.re_hi + d, self.im_lo - d, self.im_hi + d)
    }

    fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }

    fn height(&self) -> f64 {
        self.im_hi - self.im_lo
    }

    fn center(&self) -> C64 {
        C64::new(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))
    }

    fn check(&self) -> Result<()> {
        let ok = [self.re_lo, self.re_hi, self.im_lo, self.im_hi].iter().all(|v| v.is_finite())
            && self.re_lo < self.re_hi
            && self.im_lo < self.im_hi;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("degenerate search region {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchTolerances {
    /// Newton stops once the step is below this.
    pub newton_tol: f64,
    /// Accepted `|f/f'|` at a polished zero.
    pub residual_tol: f64,
    /// A box smaller than this that still winds more than once is reported
    /// as a multiple zero.
    pub min_box: f64,
    /// Zeros with `|Im s|` below this are put on the real axis.
    pub snap_tol: f64,
    /// Largest mode index scanned by `build_set`.
    pub l_cap: u32,
}

impl Default for SearchTolerances {
    fn default() -> Self {
        SearchTolerances { newton_tol: 1e-10, residual_tol: 1e-8, min_box: 1e-7, snap_tol: 1e-7, l_cap: 2000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resonance {
    pub s: C64,
    pub l: u32,
    pub local_order: u32,
    /// `mode_weight(n, l) * local_order`
    pub weight: u64,
    /// Set when a box on the real axis could not separate the winding
    /// below `min_box`; the order then comes from the winding alone.
    pub multiple_on_axis: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceSet {
    pub model: ModelSpec,
    /// Sorted by `|s - n/2|`.
    pub entries: Vec<Resonance>,
    pub search_radius: f64,
    /// Largest mode that was scanned.
    pub l_max: u32,
    pub tolerances: SearchTolerances,
}

// Offsets tried when a zero sits on a box edge or a split line.
const JITTER: [f64; 6] = [0.0, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2];
// Fractions used to split a box; never exactly one half, so symmetric
// boxes are not cut along their axis of symmetry.
const SPLITS: [f64; 5] = [0.5123, 0.4711, 0.5437, 0.4389, 0.5859];
const MAX_PHASE_STEP: f64 = PI / 4.0;

struct Secular<'a> {
    model: &'a ModelSpec,
    l: u32,
}

fn is_boundary_zero(e: &Error) -> bool {
    matches!(e, Error::RootFinding(m) if m.starts_with("boundary"))
}

impl Secular<'_> {
    fn eval(&self, s: C64) -> Result<Scaled> {
        let v = secular(self.model, self.l, s)?;
        if v.is_zero() || !v.is_finite() {
            return Err(Error::RootFinding(format!("boundary zero at s = {s}")));
        }
        Ok(v)
    }

    fn segment(&self, a: C64, fa: Scaled, b: C64, fb: Scaled, depth: u32) -> Result<f64> {
        let d = (fb.m / fa.m).arg();
        let m = 0.5 * (a + b);
        let fm = self.eval(m)?;
        let d1 = (fm.m / fa.m).arg();
        let d2 = (fb.m / fm.m).arg();
        if d1.abs() < MAX_PHASE_STEP && d2.abs() < MAX_PHASE_STEP && (d1 + d2 - d).abs() < 1e-9 {
            return Ok(d1 + d2);
        }
        if depth > 60 || (b - a).norm() < 1e-11 * (1.0 + a.norm()) {
            return Err(Error::RootFinding(format!("boundary zero near s = {m}")));
        }
        Ok(self.segment(a, fa, m, fm, depth + 1)? + self.segment(m, fm, b, fb, depth + 1)?)
    }

    /// Phase change along the straight edge from a to b.
    fn edge(&self, a: C64, b: C64) -> Result<f64> {
        let pieces = ((b - a).norm() / 0.5).ceil().max(1.0) as usize;
        let mut total = 0.0;
        let mut prev = a;
        let mut fprev = self.eval(a)?;
        for i in 1..=pieces {
            let next = a + (b - a) * (i as f64 / pieces as f64);
            let fnext = self.eval(next)?;
            total += self.segment(prev, fprev, next, fnext, 0)?;
            prev = next;
            fprev = fnext;
        }
        Ok(total)
    }

    fn winding_exact(&self, r: &SearchRegion) -> Result<i64> {
        let c = [
            C64::new(r.re_lo, r.im_lo),
            C64::new(r.re_hi, r.im_lo),
            C64::new(r.re_hi, r.im_hi),
            C64::new(r.re_lo, r.im_hi),
        ];
        let mut total = 0.0;
        for i in 0..4 {
            total += self.edge(c[i], c[(i + 1) % 4])?;
        }
        let w = total / (2.0 * PI);
        let wr = w.round();
        if (w - wr).abs() > 0.05 {
            return Err(Error::RootFinding(format!("phase change {total} is not a multiple of 2 pi")));
        }
        Ok(wr as i64)
    }

    /// Winding of `r`, growing it through the jitter sequence if a zero
    /// lies on the boundary. Returns the region actually used.
    fn winding_jittered(&self, r: &SearchRegion) -> Result<(i64, SearchRegion)> {
        let scale = r.width().max(r.height()).max(1.0);
        let mut last = None;
        for j in JITTER {
            let g = r.grown(j * scale);
            match self.winding_exact(&g) {
                Ok(w) => return Ok((w, g)),
                Err(e) if is_boundary_zero(&e) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    /// `f(s)/f'(s)` with the derivative from an 8-point Cauchy circle.
    fn newton_step(&self, s: C64, scale: f64) -> Result<C64> {
        let fs = self.eval(s).or_else(|e| if is_boundary_zero(&e) { Ok(Scaled::ZERO) } else { Err(e) })?;
        if fs.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let rho = 1e-3 * scale;
        let mut d = Scaled::ZERO;
        for j in 0..8 {
            let w = C64::from_polar(1.0, PI * j as f64 / 4.0);
            d = d + secular(self.model, self.l, s + rho * w)? * w.conj();
        }
        let d = d * (1.0 / (8.0 * rho));
        if d.is_zero() {
            return Err(Error::RootFinding(format!("vanishing derivative at s = {s}")));
        }
        Ok(fs.ratio(d))
    }

    fn newton(&self, start: C64, bx: &SearchRegion, tol: &SearchTolerances) -> Result<Option<C64>> {
        let scale = bx.width().max(bx.height()).min(1.0);
        let inside = bx.grown(1e-9);
        let mut s = start;
        let mut prev = f64::INFINITY;
        for _ in 0..60 {
            let mut step = self.newton_step(s, scale)?;
            let len = step.norm();
            if !len.is_finite() {
                return Ok(None);
            }
            let cap = bx.width().max(bx.height());
            if len > cap {
                step *= cap / len;
            }
            s -= step;
            if !inside.contains(s) {
                return Ok(None);
            }
            let stalled = len < 1e3 * tol.newton_tol && len >= 0.5 * prev;
            if len <= tol.newton_tol || stalled {
                let res = self.newton_step(s, scale)?.norm();
                return Ok(if res <= tol.residual_tol { Some(s) } else { None });
            }
            prev = len;
        }
        Ok(None)
    }

    fn isolate(&self, bx: SearchRegion, w: i64, tol: &SearchTolerances, out: &mut Vec<(C64, u32, bool)>) -> Result<()> {
        if w <= 0 {
            if w < 0 {
                return Err(Error::RootFinding(format!("negative winding {w} in box {bx:?}")));
            }
            return Ok(());
        }
        if w == 1 {
            if let Some(s) = self.newton(bx.center(), &bx, tol)? {
                out.push((s, 1, false));
                return Ok(());
            }
        }
        if bx.width().max(bx.height()) < tol.min_box {
            if w == 1 {
                return Err(Error::RootFinding(format!("Newton failed in isolating box {bx:?}")));
            }
            out.push((bx.center(), w as u32, true));
            return Ok(());
        }
        let mut last = None;
        for f in SPLITS {
            let (a, b) = if bx.width() >= bx.height() {
                let x = bx.re_lo + f * bx.width();
                (SearchRegion { re_hi: x, ..bx }, SearchRegion { re_lo: x, ..bx })
            } else {
                let y = bx.im_lo + f * bx.height();
                (SearchRegion { im_hi: y, ..bx }, SearchRegion { im_lo: y, ..bx })
            };
            let wa = match self.winding_exact(&a) {
                Ok(v) => v,
                Err(e) if is_boundary_zero(&e) => {
                    last = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let wb = match self.winding_exact(&b) {
                Ok(v) => v,
                Err(e) if is_boundary_zero(&e) => {
                    last = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            if wa + wb != w {
                return Err(Error::RootFinding(format!(
                    "winding not additive in box {bx:?}: {wa} + {wb} != {w}"
                )));
            }
            self.isolate(a, wa, tol, out)?;
            return self.isolate(b, wb, tol, out);
        }
        Err(last.unwrap())
    }
}

/// Number of zeros of the mode-l secular function inside `region`.
pub fn winding(model: &ModelSpec, l: u32, region: &SearchRegion) -> Result<i64> {
    region.check()?;
    Ok(Secular { model, l }.winding_jittered(region)?.0)
}

/// Zeros in `region` with their orders.
pub fn find_zeros(model: &ModelSpec, l: u32, region: &SearchRegion) -> Result<Vec<(C64, u32)>> {
    let z = find_zeros_with(model, l, region, &SearchTolerances::default())?;
    Ok(z.into_iter().map(|(s, m, _)| (s, m)).collect())
}

fn find_zeros_with(
    model: &ModelSpec,
    l: u32,
    region: &SearchRegion,
    tol: &SearchTolerances,
) -> Result<Vec<(C64, u32, bool)>> {
    region.check()?;
    let f = Secular { model, l };
    let (w, used) = f.winding_jittered(region)?;
    let mut out = Vec::new();
    f.isolate(used, w, tol, &mut out)?;
    Ok(out)
}

fn cmp_c(a: C64, b: C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Zeros of mode l with `|s - n/2| <= t_max`, symmetric under conjugation.
pub fn mode_resonances(model: &ModelSpec, l: u32, t_max: f64, tol: &SearchTolerances) -> Result<Vec<Resonance>> {
    model.validate()?;
    if model.kind == ModelKind::Background {
        return Err(Error::Config("resonance search needs a perturbed model".into()));
    }
    let m = SearchRegion::master(model.n, t_max);
    let upper = SearchRegion { im_lo: -0.0523, ..m };
    let raw = find_zeros_with(model, l, &upper, tol)?;
    let h = model.half_n();
    let weight = mode_weight(model.n, l);
    let mut out = Vec::new();
    let mut lower = Vec::new();
    for (s, ord, flag) in raw {
        if s.im < -tol.snap_tol {
            lower.push(s);
            continue;
        }
        let on_axis = s.im.abs() <= tol.snap_tol;
        let s = if on_axis { C64::new(s.re, 0.0) } else { s };
        if (s - h).norm() > t_max {
            continue;
        }
        let r = Resonance { s, l, local_order: ord, weight: weight * ord as u64, multiple_on_axis: flag };
        out.push(r);
        if !on_axis {
            out.push(Resonance { s: s.conj(), ..r });
        }
    }
    // every zero found just below the axis must be the mirror of one above it
    for s in lower {
        let ok = out.iter().any(|r| (r.s - s).norm() < 1e-6);
        if !ok && (s - h).norm() <= t_max {
            return Err(Error::RootFinding(format!("unpaired zero {s} below the real axis")));
        }
    }
    out.sort_by(|a, b| cmp_c(a.s, b.s));
    Ok(out)
}

pub fn build_set(model: &ModelSpec, t_max: f64) -> Result<ResonanceSet> {
    build_set_with(model, t_max, &SearchTolerances::default())
}

/// Scans l = 0, 1, ... until two consecutive modes contribute nothing
/// inside the disk of radius `t_max`.
pub fn build_set_with(model: &ModelSpec, t_max: f64, tol: &SearchTolerances) -> Result<ResonanceSet> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Config(format!("t_max = {t_max} must be positive")));
    }
    let chunk = rayon::current_num_threads().clamp(2, 8) as u32;
    let mut entries = Vec::new();
    let mut empty_run = 0;
    let mut l0 = 0u32;
    loop {
        let ls: Vec<u32> = (l0..l0 + chunk).collect();
        let found: Vec<Result<Vec<Resonance>>> =
            ls.par_iter().map(|&l| mode_resonances(model, l, t_max, tol)).collect();
        for (l, r) in ls.iter().zip(found) {
            let r = r?;
            empty_run = if r.is_empty() { empty_run + 1 } else { 0 };
            entries.extend(r);
            if empty_run == 2 {
                let h = model.half_n();
                entries.sort_by(|a: &Resonance, b: &Resonance| {
                    (a.s - h)
                        .norm()
                        .total_cmp(&(b.s - h).norm())
                        .then(a.l.cmp(&b.l))
                        .then(cmp_c(a.s, b.s))
                });
                return Ok(ResonanceSet { model: *model, entries, search_radius: t_max, l_max: *l, tolerances: *tol });
            }
            if *l >= tol.l_cap {
                return Err(Error::RootFinding(format!("mode scan reached l_cap = {}", tol.l_cap)));
            }
        }
        l0 += chunk;
    }
}

/// `N_P(t)`: resonances with `|s - n/2| <= t`, counted with weight.
pub fn count_np(set: &ResonanceSet, t: f64) -> Result<u64> {
    if t > set.search_radius {
        return Err(Error::Domain(format!("t = {t} beyond the search radius {}", set.search_radius)));
    }
    let h = set.model.half_n();
    Ok(set.entries.iter().filter(|r| (r.s - h).norm() <= t).map(|r| r.weight).sum())
}

/// Multiplicity of the background resonance at `s = -k` (n odd): the
/// dimension of degree-k spherical harmonics on `S^{n+1}`.
pub fn background_multiplicity(n: u32, k: u64) -> u64 {
    if n % 2 == 0 {
        return 0;
    }
    let n = n as u64;
    // (2k+n)(k+1)...(k+n-1)/n!
    let mut num: u128 = (2 * k + n) as u128;
    let mut den: u128 = 1;
    for j in 1..n {
        num *= (k + j) as u128;
    }
    for j in 1..=n {
        den *= j as u128;
    }
    (num / den) as u64
}

/// `N_0(t)` for `H^{n+1}`; zero for even n.
pub fn count_n0(n: u32, t: f64) -> u64 {
    if n % 2 == 0 || t < 0.0 {
        return 0;
    }
    let h = 0.5 * n as f64;
    let kmax = (t - h).floor();
    if kmax < 0.0 {
        return 0;
    }
    (0..=kmax as u64).map(|k| background_multiplicity(n, k)).sum()
}

/// Entries of the set with the background resonances taken out where they
/// coincide: at each `s = -k` up to `m0(k)` units of weight are removed.
/// Empty for the unperturbed limits; the identity for the obstacle.
pub fn net_of_background(set: &ResonanceSet) -> Vec<Resonance> {
    let n = set.model.n;
    let mut left: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    let mut out = Vec::with_capacity(set.entries.len());
    for r in &set.entries {
        let k = -r.s.re.round();
        let on_pole = n % 2 == 1 && r.s.im == 0.0 && k >= 0.0 && (r.s.re + k).abs() < set.tolerances.snap_tol;
        if !on_pole {
            out.push(*r);
            continue;
        }
        let rem = left.entry(k as u64).or_insert_with(|| background_multiplicity(n, k as u64));
        let take = (*rem).min(r.weight);
        *rem -= take;
        if take < r.weight {
            let w = r.weight - take;
            let per = mode_weight(n, r.l);
            out.push(Resonance { weight: w, local_order: (w / per) as u32, ..*r });
        }
    }
    out
}
