//! Ring-site configurations, translation orbits, droplets, and windows.
//!
//! A configuration is the set of occupied sites (down-spins) of the ring
//! `{0, ..., L-1}`; it is the basis label for every sector computation.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Model parameters of one sector: ring size `L`, particle number `N`, and
/// anisotropy `Δ > 1` (Ising phase).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub ring: usize,
    pub particles: usize,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(ring: usize, particles: usize, delta: f64) -> Result<Self> {
        if ring < 2 {
            return Err(Error::domain(format!("ring size must be ≥ 2, got {ring}")));
        }
        if particles > ring {
            return Err(Error::domain(format!(
                "particle number {particles} exceeds ring size {ring}"
            )));
        }
        if !(delta > 1.0) {
            return Err(Error::domain(format!(
                "anisotropy must satisfy Δ > 1, got {delta}"
            )));
        }
        Ok(ModelParams {
            ring,
            particles,
            delta,
        })
    }

    /// Sector dimension C(L, N).
    pub fn dimension(&self) -> usize {
        binomial(self.ring, self.particles)
    }
}

/// Binomial coefficient C(n, k) in exact integer arithmetic.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A set of occupied ring sites, stored sorted; equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    sites: Vec<usize>,
    ring: usize,
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.sites, self.ring)
    }
}

impl Configuration {
    pub fn new(mut sites: Vec<usize>, ring: usize) -> Result<Self> {
        sites.sort_unstable();
        if let Some(&max) = sites.last() {
            if max >= ring {
                return Err(Error::domain(format!("site {max} outside ring of size {ring}")));
            }
        }
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate site in configuration".to_string()));
        }
        Ok(Configuration { sites, ring })
    }

    pub fn empty(ring: usize) -> Self {
        Configuration { sites: Vec::new(), ring }
    }

    pub fn full(ring: usize) -> Self {
        Configuration {
            sites: (0..ring).collect(),
            ring,
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn ring(&self) -> usize {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    /// Shift every site by `gamma` (mod L). Group law:
    /// `x.translate(a).translate(b) == x.translate(a + b)`.
    pub fn translate(&self, gamma: i64) -> Configuration {
        let l = self.ring as i64;
        let mut sites: Vec<usize> = self
            .sites
            .iter()
            .map(|&j| (j as i64 + gamma).rem_euclid(l) as usize)
            .collect();
        sites.sort_unstable();
        Configuration { sites, ring: self.ring }
    }

    /// Cluster count W(x): half the number of ring edges with exactly one
    /// occupied endpoint, counting the edge leaving each site once. Equals
    /// the number of circular runs of occupied sites for 0 < |x| < L and
    /// vanishes on the empty and full configurations.
    pub fn cluster_count(&self) -> usize {
        let n = self.sites.len();
        if n == 0 || n == self.ring {
            return 0;
        }
        // run starts: occupied sites whose predecessor is free
        self.sites
            .iter()
            .filter(|&&j| !self.contains((j + self.ring - 1) % self.ring))
            .count()
    }

    /// Whether `self` and `other` differ by one particle hop, i.e. their
    /// symmetric difference is a ring edge.
    pub fn is_adjacent(&self, other: &Configuration) -> bool {
        if self.ring != other.ring || self.sites.len() != other.sites.len() {
            return false;
        }
        let mut only_self = Vec::with_capacity(2);
        let mut only_other = Vec::with_capacity(2);
        let (mut i, mut j) = (0, 0);
        while i < self.sites.len() && j < other.sites.len() {
            match self.sites[i].cmp(&other.sites[j]) {
                std::cmp::Ordering::Less => {
                    only_self.push(self.sites[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    only_other.push(other.sites[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
            if only_self.len() > 1 && only_other.len() > 1 {
                return false;
            }
        }
        only_self.extend_from_slice(&self.sites[i..]);
        only_other.extend_from_slice(&other.sites[j..]);
        if only_self.len() != 1 || only_other.len() != 1 {
            return false;
        }
        let (a, b) = (only_self[0], only_other[0]);
        let d = a.abs_diff(b);
        d.min(self.ring - d) == 1
    }

    /// Union with disjoint `other` on the same ring.
    pub fn union(&self, other: &Configuration) -> Result<Configuration> {
        if self.ring != other.ring {
            return Err(Error::domain("union across different ring sizes".to_string()));
        }
        let mut sites = self.sites.clone();
        sites.extend_from_slice(&other.sites);
        Configuration::new(sites, self.ring)
    }

    /// Union with one extra site.
    pub fn with_site(&self, site: usize) -> Result<Configuration> {
        let mut sites = self.sites.clone();
        sites.push(site);
        Configuration::new(sites, self.ring)
    }

    /// Serialize as the sorted JSON array of occupied sites.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, s) in self.sites.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&s.to_string());
        }
        out.push(']');
        out
    }
}

/// All C(L, N) configurations in lexicographic order of their site lists.
pub fn all_configs(ring: usize, particles: usize) -> Vec<Configuration> {
    let mut out = Vec::with_capacity(binomial(ring, particles));
    if particles > ring {
        return out;
    }
    if particles == 0 {
        out.push(Configuration::empty(ring));
        return out;
    }
    let mut comb: Vec<usize> = (0..particles).collect();
    loop {
        out.push(Configuration {
            sites: comb.clone(),
            ring,
        });
        // next combination in lex order
        let mut i = particles;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] != i + ring - particles {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        comb[i] += 1;
        for j in i + 1..particles {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// The canonical sector basis: all configurations in lexicographic order with
/// an index for O(1) lookup.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    ring: usize,
    particles: usize,
    configs: Vec<Configuration>,
    index: HashMap<Configuration, usize>,
}

impl SectorBasis {
    pub fn new(ring: usize, particles: usize) -> Self {
        let configs = all_configs(ring, particles);
        let index = configs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        SectorBasis {
            ring,
            particles,
            configs,
            index,
        }
    }

    pub fn ring(&self) -> usize {
        self.ring
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn config(&self, i: usize) -> &Configuration {
        &self.configs[i]
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.index.get(c).copied()
    }
}

/// Translation-orbit bookkeeping for one sector: canonical representatives
/// (lexicographically smallest rotation), orbit sizes, and the total map
/// from configurations to (representative, shift).
#[derive(Debug, Clone)]
pub struct OrbitTable {
    ring: usize,
    particles: usize,
    reps: Vec<Configuration>,
    orbit_sizes: Vec<usize>,
    class_of: HashMap<Configuration, (usize, usize)>,
}

/// Build the orbit table for the sector (L, N).
pub fn orbit_table(ring: usize, particles: usize) -> Result<OrbitTable> {
    if ring < 2 {
        return Err(Error::domain(format!("ring size must be ≥ 2, got {ring}")));
    }
    if particles > ring {
        return Err(Error::domain(format!(
            "particle number {particles} exceeds ring size {ring}"
        )));
    }
    let mut reps = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut class_of: HashMap<Configuration, (usize, usize)> = HashMap::new();
    // lexicographic enumeration meets each orbit first at its canonical
    // (lex-smallest) rotation
    for x in all_configs(ring, particles) {
        if class_of.contains_key(&x) {
            continue;
        }
        let size = (1..=ring)
            .find(|&g| x.translate(g as i64) == x)
            .expect("T^L is the identity");
        let idx = reps.len();
        for z in 0..size {
            class_of.insert(x.translate(z as i64), (idx, z));
        }
        reps.push(x);
        orbit_sizes.push(size);
    }
    Ok(OrbitTable {
        ring,
        particles,
        reps,
        orbit_sizes,
        class_of,
    })
}

impl OrbitTable {
    pub fn ring(&self) -> usize {
        self.ring
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn representatives(&self) -> &[Configuration] {
        &self.reps
    }

    pub fn representative(&self, idx: usize) -> &Configuration {
        &self.reps[idx]
    }

    pub fn orbit_size(&self, idx: usize) -> usize {
        self.orbit_sizes[idx]
    }

    pub fn orbit_sizes(&self) -> &[usize] {
        &self.orbit_sizes
    }

    /// The (representative index, shift z) with `x = T^z rep`, `0 ≤ z < n`.
    pub fn class_of(&self, x: &Configuration) -> Option<(usize, usize)> {
        self.class_of.get(x).copied()
    }

    pub fn rep_count(&self) -> usize {
        self.reps.len()
    }

    /// Total sector dimension C(L, N) = Σ orbit sizes.
    pub fn sector_dimension(&self) -> usize {
        binomial(self.ring, self.particles)
    }

    /// Serialize as newline-delimited JSON rows
    /// `{"representative": [sites], "orbit_size": n}`.
    pub fn to_json_rows(&self) -> Vec<String> {
        self.reps
            .iter()
            .zip(&self.orbit_sizes)
            .map(|(r, n)| format!("{{\"representative\":{},\"orbit_size\":{}}}", r.to_json(), n))
            .collect()
    }
}

/// The droplet with center `m`: the cyclic interval
/// `m + {-⌊(N-1)/2⌋, ..., ⌈(N-1)/2⌉}` (mod L).
pub fn droplet_centered(ring: usize, center: usize, particles: usize) -> Result<Configuration> {
    if particles == 0 || particles >= ring {
        return Err(Error::domain(format!(
            "droplets need 0 < N < L, got N={particles}, L={ring}"
        )));
    }
    let lo = -(((particles - 1) / 2) as i64);
    let hi = (particles as i64 - 1).div_euclid(2) + (particles as i64 - 1).rem_euclid(2);
    let l = ring as i64;
    let sites = (lo..=hi)
        .map(|d| (center as i64 + d).rem_euclid(l) as usize)
        .collect();
    Configuration::new(sites, ring)
}

/// All L droplets (cyclic intervals of length N), indexed by center.
pub fn droplets(ring: usize, particles: usize) -> Result<Vec<Configuration>> {
    (0..ring)
        .map(|m| droplet_centered(ring, m, particles))
        .collect()
}

/// All configurations with cluster count ≤ `max_clusters`; for
/// `max_clusters == 1` this is exactly the droplet set.
pub fn cluster_configs(ring: usize, particles: usize, max_clusters: usize) -> Result<Vec<Configuration>> {
    if max_clusters < 1 {
        return Err(Error::domain("cluster bound must be ≥ 1".to_string()));
    }
    Ok(all_configs(ring, particles)
        .into_iter()
        .filter(|x| x.cluster_count() <= max_clusters)
        .collect())
}

/// A connected, non-wrapping interval `{lo, ..., hi}` of ring sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
    pub ring: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize, ring: usize) -> Result<Self> {
        if lo > hi || hi >= ring {
            return Err(Error::domain(format!(
                "invalid interval [{lo}, {hi}] on ring of size {ring}"
            )));
        }
        Ok(Interval { lo, hi, ring })
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// λ₊ − λ₋.
    pub fn span(&self) -> usize {
        self.hi - self.lo
    }

    pub fn contains(&self, site: usize) -> bool {
        site >= self.lo && site <= self.hi
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.lo..=self.hi
    }

    pub fn complement_sites(&self) -> Vec<usize> {
        (0..self.ring).filter(|&k| !self.contains(k)).collect()
    }
}

/// The sector window `S_{L,m}(θ) = {k : d_L(k, m) < θL}` around a center.
#[derive(Debug, Clone)]
pub struct SectorWindow {
    pub center: usize,
    pub theta: f64,
    pub members: Vec<usize>,
    ring: usize,
}

impl SectorWindow {
    pub fn new(ring: usize, center: usize, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 0.5) {
            return Err(Error::domain(format!("θ must lie in (0, 1/2), got {theta}")));
        }
        if center >= ring {
            return Err(Error::domain(format!("center {center} outside ring {ring}")));
        }
        let members = (0..ring)
            .filter(|&k| (crate::metric::ring_distance(k, center, ring) as f64) < theta * ring as f64)
            .collect();
        Ok(SectorWindow {
            center,
            theta,
            members,
            ring,
        })
    }

    /// Largest offset δ with δ < θL; the window is `center ± δ` (mod L).
    pub fn radius(&self) -> usize {
        let t = self.theta * self.ring as f64;
        let r = t.ceil() as usize;
        r.saturating_sub(1)
    }

    /// The window as a non-wrapping interval; errors when it wraps around
    /// site 0 or covers the whole ring.
    pub fn to_interval(&self) -> Result<Interval> {
        let r = self.radius();
        if 2 * r + 1 >= self.ring {
            return Err(Error::domain("sector window covers the whole ring".to_string()));
        }
        if self.center < r || self.center + r >= self.ring {
            return Err(Error::domain(
                "sector window wraps around the origin; choose a centered window".to_string(),
            ));
        }
        Interval::new(self.center - r, self.center + r, self.ring)
    }
}

/// The window `S_{L,M}(θ)` around the midpoint `M = ⌊(L-1)/2⌋`, as used by
/// the entropy scans.
pub fn centered_window(ring: usize, theta: f64) -> Result<Interval> {
    let m = (ring - 1) / 2;
    SectorWindow::new(ring, m, theta)?.to_interval()
}

/// The named boundary configurations of a window: the boundary-packed
/// interior configurations `y_±`, the attachment sites just outside, the
/// two-cluster family `b_{ℓ,r}`, and the fully packed outside clusters `z_±`.
#[derive(Debug, Clone)]
pub struct BoundaryFamily {
    pub window: Interval,
    pub inside: usize,
    pub total: usize,
    /// `y_+ = λ₊ − {0, ..., n-1}`.
    pub y_plus: Configuration,
    /// `y_- = λ₋ + {0, ..., n-1}`.
    pub y_minus: Configuration,
    /// `a_{-,j} = λ₋ − j` (mod L) for j = 1..=N−n.
    pub left_sites: Vec<usize>,
    /// `a_{+,j} = λ₊ + j` (mod L) for j = 1..=N−n.
    pub right_sites: Vec<usize>,
    /// `z_- = b_{N-n,0}`: all outside particles packed left.
    pub packed_left: Configuration,
    /// `z_+ = b_{0,N-n}`: all outside particles packed right.
    pub packed_right: Configuration,
}

/// Construct the boundary configurations for a window holding `inside`
/// of the `total` particles.
pub fn boundary_configs(window: Interval, inside: usize, total: usize) -> Result<BoundaryFamily> {
    if inside == 0 || inside >= total {
        return Err(Error::domain(format!(
            "need 0 < n < N, got n={inside}, N={total}"
        )));
    }
    if window.len() < inside {
        return Err(Error::domain("window too small for the interior particles".to_string()));
    }
    let l = window.ring;
    let outside = total - inside;
    let y_plus = Configuration::new(
        (0..inside).map(|j| window.hi - j).collect(),
        l,
    )?;
    let y_minus = Configuration::new(
        (0..inside).map(|j| window.lo + j).collect(),
        l,
    )?;
    let a_minus = |j: usize| (window.lo + l - (j % l)) % l;
    let a_plus = |j: usize| (window.hi + j) % l;
    let left_sites: Vec<usize> = (1..=outside).map(a_minus).collect();
    let right_sites: Vec<usize> = (1..=outside).map(a_plus).collect();
    let family = BoundaryFamily {
        window,
        inside,
        total,
        y_plus,
        y_minus,
        packed_left: cluster_pair_impl(&window, &left_sites, &right_sites, outside, 0)?,
        packed_right: cluster_pair_impl(&window, &left_sites, &right_sites, 0, outside)?,
        left_sites,
        right_sites,
    };
    Ok(family)
}

impl BoundaryFamily {
    /// The two-cluster configuration `b_{ℓ,r}` hugging the window from
    /// outside; errors when a cluster would re-enter the window.
    pub fn cluster_pair(&self, ell: usize, r: usize) -> Result<Configuration> {
        if ell + r != self.total - self.inside {
            return Err(Error::domain(format!(
                "ℓ + r must equal N − n = {}, got {} + {}",
                self.total - self.inside,
                ell,
                r
            )));
        }
        cluster_pair_impl(&self.window, &self.left_sites, &self.right_sites, ell, r)
    }
}

fn cluster_pair_impl(
    window: &Interval,
    left_sites: &[usize],
    right_sites: &[usize],
    ell: usize,
    r: usize,
) -> Result<Configuration> {
    let mut sites: Vec<usize> = Vec::with_capacity(ell + r);
    sites.extend_from_slice(&left_sites[..ell]);
    sites.extend_from_slice(&right_sites[..r]);
    for &s in &sites {
        if window.contains(s) {
            return Err(Error::domain(
                "boundary cluster leaves the complement of the window".to_string(),
            ));
        }
    }
    let c = Configuration::new(sites, window.ring)?;
    if c.len() != ell + r {
        return Err(Error::domain(
            "boundary clusters overlap; window complement too small".to_string(),
        ));
    }
    Ok(c)
}

/// All configurations of `particles` sites drawn from a fixed site pool,
/// in lexicographic order, embedded in the ambient ring.
pub fn configs_in_sites(pool: &[usize], particles: usize, ring: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    if particles > pool.len() {
        return out;
    }
    if particles == 0 {
        out.push(Configuration::empty(ring));
        return out;
    }
    let mut comb: Vec<usize> = (0..particles).collect();
    loop {
        let sites: Vec<usize> = comb.iter().map(|&i| pool[i]).collect();
        out.push(Configuration::new(sites, ring).expect("pool sites are valid"));
        let n = pool.len();
        let k = particles;
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        comb[i] += 1;
        for j in i + 1..k {
            comb[j] = comb[j - 1] + 1;
        }
    }
}
