//! Spatial network realizations on a square window.
//!
//! Base stations and users are homogeneous PPPs. The typical user sits at the
//! window center as user 0 and is the user its home BS serves. Distances use the
//! toroidal metric by default, which removes edge effects.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// The square `[-side/2, side/2]²`, optionally with wrap-around distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    side: f64,
    toroidal: bool,
}

impl Window {
    /// Toroidal window.
    pub fn new(side: f64) -> Result<Self> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::InvalidConfig(format!("window side > 0 (got {side})")));
        }
        Ok(Self { side, toroidal: true })
    }

    /// Plain Euclidean window, for guard-band validation runs.
    pub fn euclidean(side: f64) -> Result<Self> {
        Ok(Self { toroidal: false, ..Self::new(side)? })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn is_toroidal(&self) -> bool {
        self.toroidal
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    /// Vector from `from` to `to`, taking the shortest wrap when toroidal.
    #[inline]
    pub fn displacement(&self, from: Point, to: Point) -> [f64; 2] {
        let mut d = [to[0] - from[0], to[1] - from[1]];
        if self.toroidal {
            let half = 0.5 * self.side;
            for c in &mut d {
                if *c > half {
                    *c -= self.side;
                } else if *c < -half {
                    *c += self.side;
                }
            }
        }
        d
    }

    #[inline]
    pub fn dist2(&self, a: Point, b: Point) -> f64 {
        let d = self.displacement(a, b);
        d[0] * d[0] + d[1] * d[1]
    }

    /// Largest possible distance between two points of the window.
    pub fn diameter(&self) -> f64 {
        if self.toroidal {
            self.side * std::f64::consts::FRAC_1_SQRT_2
        } else {
            self.side * std::f64::consts::SQRT_2
        }
    }
}

/// Homogeneous PPP of the given intensity on the window.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, window: &Window, rng: &mut R) -> Result<Vec<Point>> {
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::Domain(format!("intensity must be >= 0, got {intensity}")));
    }
    let mean = intensity * window.area();
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(mean).map_err(|e| Error::Domain(e.to_string()))?.sample(rng) as usize;
    let half = 0.5 * window.side;
    Ok((0..count)
        .map(|_| [rng.random_range(-half..half), rng.random_range(-half..half)])
        .collect())
}

/// Uniform bucket grid over the window for range and nearest-neighbour queries.
#[derive(Debug, Clone, Default)]
pub struct CellGrid {
    n: usize,
    cell: f64,
    half: f64,
    toroidal: bool,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl CellGrid {
    /// Buckets `points` with roughly `per_cell` points per cell.
    pub fn new(points: &[Point], window: &Window, per_cell: f64) -> Self {
        let n = ((points.len() as f64 / per_cell).sqrt().floor() as usize).clamp(1, 4096);
        let cell = window.side / n as f64;
        let mut grid = Self { n, cell, half: 0.5 * window.side, toroidal: window.toroidal, starts: vec![0; n * n + 1], items: Vec::new() };
        let ids: Vec<usize> = points.iter().map(|&p| grid.cell_id(p)).collect();
        for &c in &ids {
            grid.starts[c + 1] += 1;
        }
        for c in 0..n * n {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        grid.items = vec![0; points.len()];
        for (i, &c) in ids.iter().enumerate() {
            grid.items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn coord(&self, x: f64) -> usize {
        floor_isize((x + self.half) / self.cell).clamp(0, self.n as isize - 1) as usize
    }

    fn cell_id(&self, p: Point) -> usize {
        self.coord(p[1]) * self.n + self.coord(p[0])
    }

    #[inline]
    /// Cell coordinates covering `[x - r, x + r]` along one axis, each at most once.
    fn axis_range(&self, x: f64, r: f64) -> AxisRange {
        let lo = floor_isize((x + self.half - r) / self.cell);
        let hi = floor_isize((x + self.half + r) / self.cell);
        let n = self.n as isize;
        if self.toroidal {
            if hi - lo + 1 >= n {
                AxisRange { next: 0, end: n, n: None }
            } else {
                AxisRange { next: lo, end: hi + 1, n: Some(n) }
            }
        } else {
            AxisRange { next: lo.max(0), end: hi.min(n - 1) + 1, n: None }
        }
    }

    /// Calls `f(index, dist²)` for every point within distance `r` of `p`.
    pub fn for_each_within<F: FnMut(usize, f64)>(&self, points: &[Point], window: &Window, p: Point, r: f64, mut f: F) {
        if self.items.is_empty() {
            return;
        }
        let r2 = r * r;
        for cy in self.axis_range(p[1], r) {
            for cx in self.axis_range(p[0], r) {
                let c = cy * self.n + cx;
                for &i in &self.items[self.starts[c] as usize..self.starts[c + 1] as usize] {
                    let d2 = window.dist2(p, points[i as usize]);
                    if d2 <= r2 {
                        f(i as usize, d2);
                    }
                }
            }
        }
    }

    /// Nearest point passing `keep`; distance ties go to the lower index.
    pub fn nearest<K: Fn(usize) -> bool>(&self, points: &[Point], window: &Window, p: Point, keep: K) -> Option<(usize, f64)> {
        let mut r = 0.5 * self.cell;
        loop {
            let mut best: Option<(usize, f64)> = None;
            self.for_each_within(points, window, p, r, |i, d2| {
                if keep(i) && best.is_none_or(|(bi, bd)| d2 < bd || (d2 == bd && i < bi)) {
                    best = Some((i, d2));
                }
            });
            if best.is_some() || r > window.diameter() {
                return best;
            }
            r *= 2.0;
        }
    }

    /// Up to `k` nearest points passing `keep`, ordered by (distance, index).
    pub fn k_nearest<K: Fn(usize) -> bool>(&self, points: &[Point], window: &Window, p: Point, k: usize, keep: K) -> Vec<(usize, f64)> {
        if k == 0 {
            return Vec::new();
        }
        let mut r = self.cell;
        loop {
            let mut found = Vec::new();
            self.for_each_within(points, window, p, r, |i, d2| {
                if keep(i) {
                    found.push((i, d2));
                }
            });
            if found.len() >= k || r > window.diameter() {
                found.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                found.truncate(k);
                return found;
            }
            r *= 2.0;
        }
    }
}

/// `floor` for values well inside the `isize` range, without a libm call.
#[inline]
fn floor_isize(v: f64) -> isize {
    let t = v as isize;
    if (t as f64) > v {
        t - 1
    } else {
        t
    }
}

struct AxisRange {
    next: isize,
    end: isize,
    /// Wrap modulus for toroidal ranges.
    n: Option<isize>,
}

impl Iterator for AxisRange {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.next >= self.end {
            return None;
        }
        let c = self.next;
        self.next += 1;
        Some(match self.n {
            Some(n) if c < 0 => (c + n) as usize,
            Some(n) if c >= n => (c - n) as usize,
            _ => c as usize,
        })
    }
}

const BS_PER_CELL: f64 = 1.0;

/// One sampled network with its coordination state.
///
/// `requests` and `nulling_targets` describe the most recently applied
/// coordination strategy; they are empty right after scheduling.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "RealizationData")]
pub struct NetworkRealization {
    pub window: Window,
    pub bs_points: Vec<Point>,
    /// User 0 is the typical user at the window center.
    pub user_points: Vec<Point>,
    pub home_bs: Vec<usize>,
    /// Squared distance from each user to its home BS.
    pub home_dist2: Vec<f64>,
    /// Served user per BS; `None` marks an inactive BS.
    pub scheduled_user: Vec<Option<usize>>,
    /// Per BS, the scheduled users requesting nulling, in increasing index order.
    pub requests: Vec<Vec<usize>>,
    /// Per BS, the scheduled users it nulls toward, in increasing index order.
    pub nulling_targets: Vec<Vec<usize>>,
    #[serde(skip)]
    index: CellGrid,
}

#[derive(Deserialize)]
struct RealizationData {
    window: Window,
    bs_points: Vec<Point>,
    user_points: Vec<Point>,
    home_bs: Vec<usize>,
    home_dist2: Vec<f64>,
    scheduled_user: Vec<Option<usize>>,
    requests: Vec<Vec<usize>>,
    nulling_targets: Vec<Vec<usize>>,
}

impl From<RealizationData> for NetworkRealization {
    fn from(d: RealizationData) -> Self {
        let index = CellGrid::new(&d.bs_points, &d.window, BS_PER_CELL);
        Self {
            window: d.window,
            bs_points: d.bs_points,
            user_points: d.user_points,
            home_bs: d.home_bs,
            home_dist2: d.home_dist2,
            scheduled_user: d.scheduled_user,
            requests: d.requests,
            nulling_targets: d.nulling_targets,
            index,
        }
    }
}

impl NetworkRealization {
    pub fn n_bs(&self) -> usize {
        self.bs_points.len()
    }

    pub fn is_active(&self, b: usize) -> bool {
        self.scheduled_user[b].is_some()
    }

    pub fn active_bs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_bs()).filter(|&b| self.is_active(b))
    }

    pub fn typical_home(&self) -> usize {
        self.home_bs[0]
    }

    /// Distance from the typical user to its home BS.
    pub fn r0(&self) -> f64 {
        self.home_dist2[0].sqrt()
    }

    pub fn bs_index(&self) -> &CellGrid {
        &self.index
    }

    /// Number of BSs user `u` currently requests.
    pub fn requests_sent_by(&self, u: usize) -> usize {
        self.requests.iter().filter(|r| r.binary_search(&u).is_ok()).count()
    }

    /// Whether BS `b` nulls toward user `u` under the current assignment.
    pub fn nulls_toward(&self, b: usize, u: usize) -> bool {
        self.nulling_targets[b].binary_search(&u).is_ok()
    }

    /// The `n` nearest active BSs other than the home BS of scheduled user `u`.
    pub fn nearest_active_interferers(&self, u: usize, n: usize) -> Vec<usize> {
        let home = self.home_bs[u];
        self.index
            .k_nearest(&self.bs_points, &self.window, self.user_points[u], n, |b| b != home && self.is_active(b))
            .into_iter()
            .map(|(b, _)| b)
            .collect()
    }

    pub fn clear_coordination(&mut self) {
        for r in &mut self.requests {
            r.clear();
        }
        for t in &mut self.nulling_targets {
            t.clear();
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Nearest-BS association and one-user-per-cell scheduling.
///
/// Each BS with at least one associated user serves one of them chosen uniformly,
/// except the typical user's home BS, which serves user 0.
pub fn associate_and_schedule<R: Rng + ?Sized>(
    bs: Vec<Point>,
    users: Vec<Point>,
    window: Window,
    rng: &mut R,
) -> Result<NetworkRealization> {
    if bs.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if users.is_empty() {
        return Err(Error::Domain("the typical user (index 0) is required".into()));
    }
    let index = CellGrid::new(&bs, &window, BS_PER_CELL);
    let mut home_bs = Vec::with_capacity(users.len());
    let mut home_dist2 = Vec::with_capacity(users.len());
    for &u in &users {
        let (b, d2) = index.nearest(&bs, &window, u, |_| true).ok_or(Error::EmptyNetwork)?;
        home_bs.push(b);
        home_dist2.push(d2);
    }
    let mut counts = vec![0u32; bs.len()];
    let mut scheduled_user = vec![None; bs.len()];
    for (u, &b) in home_bs.iter().enumerate() {
        counts[b] += 1;
        if rng.random_range(0..counts[b]) == 0 {
            scheduled_user[b] = Some(u);
        }
    }
    scheduled_user[home_bs[0]] = Some(0);
    let n = bs.len();
    Ok(NetworkRealization {
        window,
        bs_points: bs,
        user_points: users,
        home_bs,
        home_dist2,
        scheduled_user,
        requests: vec![Vec::new(); n],
        nulling_targets: vec![Vec::new(); n],
        index,
    })
}

/// Samples both PPPs, plants the typical user at the center and schedules.
pub fn sample_realization<R: Rng + ?Sized>(
    lambda_b: f64,
    lambda_u: f64,
    window: Window,
    rng: &mut R,
) -> Result<NetworkRealization> {
    let bs = sample_ppp(lambda_b, &window, rng)?;
    let mut users = vec![[0.0, 0.0]];
    users.extend(sample_ppp(lambda_u, &window, rng)?);
    associate_and_schedule(bs, users, window, rng)
}

/// User-centric requests: each scheduled user `u` requests every active BS at
/// distance in `(r_u, μ r_u]`. Replaces any previous coordination state.
pub fn build_request_graph(real: &mut NetworkRealization, mu: f64) {
    real.clear_coordination();
    if mu <= 1.0 {
        return;
    }
    for b in 0..real.n_bs() {
        let Some(u) = real.scheduled_user[b] else { continue };
        let r2 = real.home_dist2[u];
        let reach = mu * r2.sqrt();
        let (points, window, index) = (&real.bs_points, &real.window, &real.index);
        let sched = &real.scheduled_user;
        let requests = &mut real.requests;
        index.for_each_within(points, window, real.user_points[u], reach, |x, d2| {
            if x != b && d2 > r2 && sched[x].is_some() {
                requests[x].push(u);
            }
        });
    }
    for r in &mut real.requests {
        r.sort_unstable();
    }
}

/// Fixed-number requests: each scheduled user requests its `n` nearest active
/// interfering BSs, or all of them when fewer exist. Replaces coordination state.
pub fn build_fixed_number_requests(real: &mut NetworkRealization, n: usize) {
    real.clear_coordination();
    if n == 0 {
        return;
    }
    for b in 0..real.n_bs() {
        let Some(u) = real.scheduled_user[b] else { continue };
        for x in real.nearest_active_interferers(u, n) {
            real.requests[x].push(u);
        }
    }
    for r in &mut real.requests {
        r.sort_unstable();
    }
}

/// Uniform `cap`-subset of `requests` (all of them when they fit), sorted.
pub fn grant_subset<R: Rng + ?Sized>(requests: &[usize], cap: usize, rng: &mut R) -> Vec<usize> {
    if requests.len() <= cap {
        return requests.to_vec();
    }
    let mut granted: Vec<usize> = sample_indices(rng, requests.len(), cap).into_iter().map(|i| requests[i]).collect();
    granted.sort_unstable();
    granted
}

/// Grants at most `M - 1` requests per BS, drawing overloaded subsets from `rng`.
pub fn resolve_requests<R: Rng + ?Sized>(real: &mut NetworkRealization, m_antennas: usize, rng: &mut R) {
    let cap = m_antennas.saturating_sub(1);
    for b in 0..real.n_bs() {
        real.nulling_targets[b] = grant_subset(&real.requests[b], cap, rng);
    }
}

/// As [`resolve_requests`], drawing BS `b`'s subset from its own stream `rng_for(b)`,
/// which is only requested for overloaded BSs.
pub fn resolve_requests_with<R: Rng, G: FnMut(usize) -> R>(real: &mut NetworkRealization, m_antennas: usize, mut rng_for: G) {
    let cap = m_antennas.saturating_sub(1);
    for b in 0..real.n_bs() {
        let req = &real.requests[b];
        real.nulling_targets[b] = if req.len() <= cap { req.clone() } else { grant_subset(req, cap, &mut rng_for(b)) };
    }
}
