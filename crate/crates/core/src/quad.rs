//! Globally adaptive Gauss-Legendre quadrature along the real line and along
//! polyline contours, pole sequences of `G`-type integrands and the
//! indented-contour builder.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::handle::FunctionHandle;
use crate::params::I;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the integration window. Integrands with a declared decay
    /// rate may widen it so that the tail bound stays below `abs_tol / 10`.
    #[serde(rename = "T")]
    pub truncation: f64,
    pub max_depth: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    #[serde(rename = "nodes")]
    pub nodes_per_panel: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            truncation: 8.0,
            max_depth: 40,
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            nodes_per_panel: 15,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0) {
            return Err(Error::Config("truncation must be positive".into()));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.nodes_per_panel < 4 {
            return Err(Error::Config("at least 4 nodes per panel".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        Ok(())
    }

    /// Window half-width for an integrand decaying like `e^{-rate |x|}` past `extent`.
    pub fn truncation_for(&self, rate: f64, extent: f64, scale: f64) -> f64 {
        let need = extent + ((10.0 * scale.max(1e-300)) / (self.abs_tol * rate)).ln().max(1.0) / rate;
        self.truncation.max(need)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascending,
    Descending,
}

/// Points `anchor + Λ₊` (ascending) or `anchor − Λ₊` (descending), where
/// `Λ₊ = iw + iw1·ℤ≥0 + iw2·ℤ≥0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleSequence {
    pub anchor: Complex64,
    pub direction: Direction,
    pub w1: f64,
    pub w2: f64,
}

impl PoleSequence {
    pub fn ascending(anchor: Complex64, w1: f64, w2: f64) -> Self {
        PoleSequence {
            anchor,
            direction: Direction::Ascending,
            w1,
            w2,
        }
    }

    pub fn descending(anchor: Complex64, w1: f64, w2: f64) -> Self {
        PoleSequence {
            anchor,
            direction: Direction::Descending,
            w1,
            w2,
        }
    }

    fn sign(&self) -> f64 {
        match self.direction {
            Direction::Ascending => 1.0,
            Direction::Descending => -1.0,
        }
    }

    /// The point of the sequence closest to the anchor.
    pub fn extreme(&self) -> Complex64 {
        self.anchor + I * (self.sign() * 0.5 * (self.w1 + self.w2))
    }

    /// Lattice points with `|Im(p − extreme)| <= reach`, at most `max_count`,
    /// ordered by distance from the extreme point.
    pub fn points(&self, reach: f64, max_count: usize) -> Vec<Complex64> {
        let mut offs = Vec::new();
        let mut m = 0.0;
        while m * self.w1 <= reach {
            let mut n = 0.0;
            while m * self.w1 + n * self.w2 <= reach {
                offs.push(m * self.w1 + n * self.w2);
                n += 1.0;
                if offs.len() > 4 * max_count {
                    break;
                }
            }
            m += 1.0;
            if offs.len() > 4 * max_count {
                break;
            }
        }
        offs.sort_by(f64::total_cmp);
        offs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        offs.truncate(max_count);
        let e = self.extreme();
        offs.into_iter()
            .map(|o| e + I * (self.sign() * o))
            .collect()
    }

    /// The first `count` points.
    pub fn first(&self, count: usize) -> Vec<Complex64> {
        let reach = (count as f64) * self.w1.max(self.w2);
        self.points(reach, count)
    }

    pub fn conjugated(&self) -> PoleSequence {
        PoleSequence {
            anchor: self.anchor.conj(),
            direction: match self.direction {
                Direction::Ascending => Direction::Descending,
                Direction::Descending => Direction::Ascending,
            },
            w1: self.w1,
            w2: self.w2,
        }
    }

    pub fn shifted(&self, by: Complex64) -> PoleSequence {
        PoleSequence {
            anchor: self.anchor + by,
            ..*self
        }
    }

    fn safety(&self) -> f64 {
        1e-8 * 0.5 * (self.w1 + self.w2)
    }
}

/// Left-to-right polyline from `−T` to `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub vertices: Vec<Complex64>,
}

impl Contour {
    pub fn line(t: f64) -> Contour {
        Contour {
            vertices: vec![Complex64::new(-t, 0.0), Complex64::new(t, 0.0)],
        }
    }

    pub fn new(vertices: Vec<Complex64>) -> Result<Contour> {
        let c = Contour { vertices };
        c.validate()?;
        Ok(c)
    }

    pub fn truncation(&self) -> f64 {
        self.vertices.last().map(|v| v.re).unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let v = &self.vertices;
        if v.len() < 2 {
            return Err(Error::Config("a contour needs two vertices".into()));
        }
        let t = v[v.len() - 1].re;
        if v[0] != Complex64::new(-t, 0.0) || v[v.len() - 1].im != 0.0 || t <= 0.0 {
            return Err(Error::Config("a contour must run from -T to T".into()));
        }
        if v.windows(2).any(|w| w[1].re <= w[0].re) {
            return Err(Error::Config("contour abscissae must increase".into()));
        }
        Ok(())
    }

    /// Height of the contour above abscissa `t`.
    pub fn height_at(&self, t: f64) -> f64 {
        let v = &self.vertices;
        if t <= v[0].re || t >= v[v.len() - 1].re {
            return 0.0;
        }
        let k = v.partition_point(|p| p.re <= t);
        let (a, b) = (v[k - 1], v[k]);
        a.im + (b.im - a.im) * (t - a.re) / (b.re - a.re)
    }

    /// Refine by inserting the midpoint of every segment.
    pub fn refined(&self) -> Contour {
        let mut out = Vec::with_capacity(2 * self.vertices.len());
        for w in self.vertices.windows(2) {
            out.push(w[0]);
            out.push(0.5 * (w[0] + w[1]));
        }
        out.push(*self.vertices.last().unwrap());
        Contour { vertices: out }
    }
}

pub fn tail_bound(decay_rate: f64, prefactor: f64, t: f64) -> Result<f64> {
    if !(decay_rate > 0.0) {
        return Err(Error::Domain(format!(
            "tail bound needs a positive decay rate, got {decay_rate}"
        )));
    }
    Ok(prefactor * (-decay_rate * t).exp() / decay_rate)
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn gauss_legendre(n: usize) -> Rule {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    Rule { x, w }
}

/// Parametrised piece of an integration path, `t ∈ [0, 1]`.
#[derive(Clone, Copy)]
enum Piece {
    Segment { a: Complex64, d: Complex64 },
    /// The whole real line through `z = s/(1 − s²)`, `s = 2t − 1`.
    Mapped,
}

impl Piece {
    #[inline]
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Segment { a, d } => (a + d * t, d),
            Piece::Mapped => {
                let s = 2.0 * t - 1.0;
                let den = 1.0 - s * s;
                let z = s / den;
                let dz = 2.0 * (1.0 + s * s) / (den * den);
                (Complex64::new(z, 0.0), Complex64::new(dz, 0.0))
            }
        }
    }
}

struct Panel {
    piece: usize,
    t0: f64,
    t1: f64,
    depth: u32,
    left: Complex64,
    right: Complex64,
    labs: f64,
    rabs: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> Complex64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.piece.cmp(&self.piece))
            .then(other.t0.total_cmp(&self.t0))
    }
}

struct Engine<'a, F: Fn(Complex64) -> Result<Complex64>> {
    f: &'a F,
    rule: Rule,
    pieces: Vec<Piece>,
    evals: usize,
}

const MAX_EVALS: usize = 2_000_000;

impl<'a, F: Fn(Complex64) -> Result<Complex64>> Engine<'a, F> {
    fn gl(&mut self, piece: usize, t0: f64, t1: f64) -> Result<(Complex64, f64)> {
        let p = self.pieces[piece];
        let h = 0.5 * (t1 - t0);
        let c = 0.5 * (t1 + t0);
        let mut s = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for (x, w) in self.rule.x.iter().zip(&self.rule.w) {
            let (z, dz) = p.at(c + h * x);
            let v = (self.f)(z)? * dz;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Divergence(format!("non-finite integrand at {z}")));
            }
            s += w * v;
            a += w * v.norm();
        }
        self.evals += self.rule.x.len();
        Ok((s * h, a * h))
    }

    fn panel(&mut self, piece: usize, t0: f64, t1: f64, whole: Complex64, depth: u32) -> Result<Panel> {
        let m = 0.5 * (t0 + t1);
        let (left, labs) = self.gl(piece, t0, m)?;
        let (right, rabs) = self.gl(piece, m, t1)?;
        Ok(Panel {
            piece,
            t0,
            t1,
            depth,
            left,
            right,
            labs,
            rabs,
            err: (left + right - whole).norm(),
        })
    }

    fn run(&mut self, init: &[(usize, f64, f64)], spec: &QuadratureSpec, extra_err: f64) -> Result<IntegralResult> {
        let mut heap = BinaryHeap::new();
        let mut frozen: Vec<Panel> = Vec::new();
        for &(piece, t0, t1) in init {
            let (whole, _) = self.gl(piece, t0, t1)?;
            heap.push(self.panel(piece, t0, t1, whole, 0)?);
        }
        loop {
            let (mut value, mut err, mut abs) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
            for p in heap.iter().chain(frozen.iter()) {
                value += p.value();
                err += p.err;
                abs += p.labs + p.rabs;
            }
            let tol = spec.abs_tol.max(spec.rel_tol * value.norm()).max(50.0 * f64::EPSILON * abs);
            let done = err + extra_err <= tol || heap.is_empty();
            if done || self.evals > MAX_EVALS {
                let n = heap.len() + frozen.len();
                let mut all: Vec<Panel> = heap.into_vec();
                all.extend(frozen);
                all.sort_by(|a, b| a.piece.cmp(&b.piece).then(a.t0.total_cmp(&b.t0)));
                let value: Complex64 = all.iter().map(|p| p.value()).sum();
                let floor = 50.0 * f64::EPSILON * abs;
                let error_estimate = err.max(floor) + extra_err;
                if err + extra_err > tol {
                    return Err(Error::Accuracy {
                        value,
                        error_estimate,
                    });
                }
                return Ok(IntegralResult {
                    value,
                    error_estimate,
                    panels_used: n,
                    tail_bound: extra_err,
                });
            }
            let p = heap.pop().unwrap();
            if p.depth >= spec.max_depth {
                frozen.push(p);
                continue;
            }
            let m = 0.5 * (p.t0 + p.t1);
            heap.push(self.panel(p.piece, p.t0, m, p.left, p.depth + 1)?);
            heap.push(self.panel(p.piece, m, p.t1, p.right, p.depth + 1)?);
        }
    }
}

fn check_poles(poles: &[PoleSequence], vertices: &[Complex64]) -> Result<()> {
    if poles.is_empty() {
        return Ok(());
    }
    let (lo, hi) = vertices
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v.im), h.max(v.im)));
    for seq in poles {
        let e = seq.extreme();
        let reach = match seq.direction {
            Direction::Ascending => hi - e.im,
            Direction::Descending => e.im - lo,
        };
        if reach < -seq.safety() {
            continue;
        }
        for p in seq.points(reach.max(0.0) + seq.safety(), 400) {
            for w in vertices.windows(2) {
                let d = segment_distance(p, w[0], w[1]);
                if d < seq.safety() {
                    return Err(Error::ContourCollision { pole: p, distance: d });
                }
            }
        }
    }
    Ok(())
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn split_segments(vertices: &[Complex64], panels: usize) -> (Vec<Piece>, Vec<(usize, f64, f64)>) {
    let total: f64 = vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let mut pieces = Vec::new();
    let mut init = Vec::new();
    for w in vertices.windows(2) {
        let len = (w[1] - w[0]).norm();
        if len == 0.0 {
            continue;
        }
        let k = ((panels as f64) * len / total).ceil().max(1.0) as usize;
        let idx = pieces.len();
        pieces.push(Piece::Segment { a: w[0], d: w[1] - w[0] });
        for j in 0..k {
            init.push((idx, j as f64 / k as f64, (j + 1) as f64 / k as f64));
        }
    }
    (pieces, init)
}

/// Tail estimate for `∫_{|x| > T}` from samples of `|f|` near `±T`.
fn exp_tail(f: &FunctionHandle, rate: f64, t: f64) -> Result<f64> {
    let mut total = 0.0;
    for sgn in [-1.0, 1.0] {
        let mut pref: f64 = 0.0;
        for k in 0..3 {
            let x = t - k as f64 * 0.5 / rate;
            let v = f.eval(Complex64::new(sgn * x, 0.0))?.norm();
            pref = pref.max(v * (rate * x).exp());
        }
        total += tail_bound(rate, pref, t)?;
    }
    Ok(total)
}

/// Integral of `f` over the real line.
pub fn integrate_line(f: &FunctionHandle, spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    let t = spec.truncation;
    let line = [Complex64::new(-t, 0.0), Complex64::new(t, 0.0)];
    check_poles(&f.poles, &line)?;
    let eval = f.evaluator();
    let g = |z: Complex64| eval(z);
    if f.growth_rate < 0.0 {
        let rate = -f.growth_rate;
        let tail = exp_tail(f, rate, t)?;
        let (pieces, init) = split_segments(&line, 16);
        Engine { f: &g, rule: gauss_legendre(spec.nodes_per_panel), pieces, evals: 0 }.run(&init, spec, tail)
    } else if f.algebraic_decay.is_some_and(|p| p > 1.0) {
        let init: Vec<_> = (0..16).map(|j| (0, j as f64 / 16.0, (j + 1) as f64 / 16.0)).collect();
        Engine { f: &g, rule: gauss_legendre(spec.nodes_per_panel), pieces: vec![Piece::Mapped], evals: 0 }
            .run(&init, spec, 0.0)
    } else {
        Err(Error::Divergence(format!(
            "integrand grows like exp({} |x|) along the real line",
            f.growth_rate
        )))
    }
}

/// Integral of `f` along a left-to-right contour plus the real tails beyond `±T`.
pub fn integrate_contour(f: &FunctionHandle, contour: &Contour, spec: &QuadratureSpec) -> Result<IntegralResult> {
    spec.validate()?;
    contour.validate()?;
    check_poles(&f.poles, &contour.vertices)?;
    let t = contour.truncation();
    let tail = if f.growth_rate < 0.0 {
        exp_tail(f, -f.growth_rate, t)?
    } else {
        return Err(Error::Divergence(
            "contour integrals need exponential decay".into(),
        ));
    };
    let eval = f.evaluator();
    let g = |z: Complex64| eval(z);
    let (pieces, init) = split_segments(&contour.vertices, 24);
    Engine { f: &g, rule: gauss_legendre(spec.nodes_per_panel), pieces, evals: 0 }.run(&init, spec, tail)
}

/// Integral along an arbitrary polyline (open or closed), no tails.
pub fn integrate_path<F>(f: F, vertices: &[Complex64], spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    spec.validate()?;
    let (pieces, init) = split_segments(vertices, 4 * vertices.len().max(2));
    Engine { f: &f, rule: gauss_legendre(spec.nodes_per_panel), pieces, evals: 0 }.run(&init, spec, 0.0)
}

/// `(1/2πi) ∮ f` over the square of half-side `radius` centred at `center`.
pub fn residue_by_contour<F>(f: F, center: Complex64, radius: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let r = radius;
    let square = [
        center + Complex64::new(r, -r),
        center + Complex64::new(r, r),
        center + Complex64::new(-r, r),
        center + Complex64::new(-r, -r),
        center + Complex64::new(r, -r),
    ];
    let res = integrate_path(f, &square, spec)?;
    Ok(res.value / (2.0 * PI * I))
}

struct Column {
    t: f64,
    /// Lowest ascending point.
    up: f64,
    /// Highest descending point.
    down: f64,
}

/// Left-to-right contour keeping the ascending sequences above and the
/// descending ones below. All points of a sequence share one abscissa, so the
/// contour is the graph of a piecewise linear height function with a notch
/// under (or bump over) every column whose extreme point is on the wrong side
/// of the real axis or too close to it.
pub fn build_indented_contour(descending: &[PoleSequence], ascending: &[PoleSequence], t: f64) -> Result<Contour> {
    let mut cols: Vec<Column> = Vec::new();
    let mut cap = f64::INFINITY;
    let add = |x: Complex64, asc: bool, cols: &mut Vec<Column>| {
        let c = match cols.iter_mut().find(|c| (c.t - x.re).abs() <= 1e-12 * (1.0 + x.re.abs())) {
            Some(c) => c,
            None => {
                cols.push(Column { t: x.re, up: f64::INFINITY, down: f64::NEG_INFINITY });
                cols.last_mut().unwrap()
            }
        };
        if asc {
            c.up = c.up.min(x.im);
        } else {
            c.down = c.down.max(x.im);
        }
    };
    for s in ascending {
        cap = cap.min(s.w1.min(s.w2) / 4.0);
        add(s.extreme(), true, &mut cols);
    }
    for s in descending {
        cap = cap.min(s.w1.min(s.w2) / 4.0);
        add(s.extreme(), false, &mut cols);
    }
    if cols.is_empty() {
        return Ok(Contour::line(t));
    }
    let wmax = ascending
        .iter()
        .chain(descending)
        .map(|s| 0.5 * (s.w1 + s.w2))
        .fold(0.0, f64::max);
    cols.sort_by(|a, b| a.t.total_cmp(&b.t));

    let mut knots: Vec<(f64, f64, f64)> = Vec::new();
    for (k, c) in cols.iter().enumerate() {
        if c.up <= c.down {
            return Err(Error::NoContour(format!(
                "at Re z = {} the ascending point {}i lies below the descending point {}i",
                c.t, c.up, c.down
            )));
        }
        let delta = cap.min(0.5 * (c.up - c.down));
        let clear = 0.25 * delta;
        let h = if c.up - clear <= 0.0 {
            c.up - delta
        } else if c.down + clear >= 0.0 {
            c.down + delta
        } else {
            continue;
        };
        if h.abs() > wmax + cap {
            return Err(Error::NoContour(format!(
                "separating path at Re z = {} would leave |Im z| <= w",
                c.t
            )));
        }
        if c.t.abs() >= t {
            return Err(Error::NoContour(format!(
                "column at Re z = {} lies outside the window",
                c.t
            )));
        }
        let gl = if k > 0 { c.t - cols[k - 1].t } else { f64::INFINITY };
        let gr = if k + 1 < cols.len() { cols[k + 1].t - c.t } else { f64::INFINITY };
        let s = h.abs().max(delta).min(0.45 * gl).min(0.45 * gr).min(0.5 * (t - c.t.abs()));
        knots.push((c.t, h, s));
    }

    let mut v = vec![Complex64::new(-t, 0.0)];
    for (tk, h, s) in knots {
        v.push(Complex64::new(tk - s, 0.0));
        v.push(Complex64::new(tk, h));
        v.push(Complex64::new(tk + s, 0.0));
    }
    v.push(Complex64::new(t, 0.0));
    v.dedup_by(|a, b| (a.re - b.re).abs() < 1e-15 && a.im == b.im);
    Contour::new(v)
}

/// True when every listed point lies strictly on its required side of the contour.
pub fn separates(contour: &Contour, descending: &[PoleSequence], ascending: &[PoleSequence], count: usize) -> bool {
    ascending
        .iter()
        .flat_map(|s| s.first(count))
        .all(|p| p.im > contour.height_at(p.re))
        && descending
            .iter()
            .flat_map(|s| s.first(count))
            .all(|p| p.im < contour.height_at(p.re))
}
