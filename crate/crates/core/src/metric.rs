//! Graph distances on the ring and its N-particle symmetric product.
//!
//! The closed-form distance (minimum over cyclic matchings of sorted site
//! lists) is the production path; a naive breadth-first search over the full
//! product graph lives alongside it as the independent ground truth for
//! every metric test and verification suite.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::config::{droplet_centered, Configuration, Interval};
use crate::error::{Error, Result};

/// Graph distance on the ring: `min(|j-k|, L-|j-k|)`.
pub fn ring_distance(j: usize, k: usize, ring: usize) -> usize {
    let d = j.abs_diff(k);
    d.min(ring - d)
}

/// Distance on the N-particle symmetric product of the ring, evaluated as
/// the minimum over the N cyclic matchings of the sorted site lists.
pub fn config_distance(x: &Configuration, y: &Configuration) -> Result<usize> {
    if x.ring() != y.ring() {
        return Err(Error::domain("configurations on different rings".to_string()));
    }
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "particle numbers differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n == 0 {
        return Ok(0);
    }
    let l = x.ring();
    let xs = x.sites();
    let ys = y.sites();
    let mut best = usize::MAX;
    for shift in 0..n {
        let mut cost = 0usize;
        for j in 0..n {
            cost += ring_distance(xs[j], ys[(j + shift) % n], l);
            if cost >= best {
                break;
            }
        }
        best = best.min(cost);
    }
    Ok(best)
}

/// Distance between translation orbits: `min_γ d(x, T^γ y)`.
pub fn orbit_distance(x: &Configuration, y: &Configuration) -> Result<usize> {
    let l = x.ring();
    let mut best = usize::MAX;
    for g in 0..l {
        best = best.min(config_distance(x, &y.translate(g as i64))?);
    }
    Ok(best)
}

/// Distance from `x` to the droplet set (all cyclic intervals of length N).
pub fn distance_to_droplets(x: &Configuration) -> Result<usize> {
    let l = x.ring();
    let n = x.len();
    if n == 0 || n == l {
        return Err(Error::domain("droplet distance needs 0 < N < L".to_string()));
    }
    let mut best = usize::MAX;
    for m in 0..l {
        let c = droplet_centered(l, m, n)?;
        best = best.min(config_distance(x, &c)?);
    }
    Ok(best)
}

/// The set of droplet centers realizing the droplet distance of `x`.
///
/// Requires `N < L/2`; the center set always intersects `x`, and for
/// configurations confined to a quarter-ring window the intersection is the
/// single middle particle `x_κ`, `κ = ⌊(N+1)/2⌋`.
pub fn nearest_droplet_centers(x: &Configuration) -> Result<BTreeSet<usize>> {
    let l = x.ring();
    let n = x.len();
    if 2 * n >= l {
        return Err(Error::domain(format!(
            "droplet centers need N < L/2, got N={n}, L={l}"
        )));
    }
    let best = distance_to_droplets(x)?;
    let mut centers = BTreeSet::new();
    for m in 0..l {
        if config_distance(x, &droplet_centered(l, m, n)?)? == best {
            centers.insert(m);
        }
    }
    Ok(centers)
}

/// Product-graph neighbors of `x`: one particle hops to an adjacent free
/// site. Part of the BFS oracle path.
pub fn neighbors(x: &Configuration) -> Vec<Configuration> {
    let l = x.ring();
    let mut out = Vec::new();
    for &s in x.sites() {
        for t in [(s + 1) % l, (s + l - 1) % l] {
            if !x.contains(t) {
                let mut sites: Vec<usize> =
                    x.sites().iter().copied().filter(|&u| u != s).collect();
                sites.push(t);
                out.push(Configuration::new(sites, l).expect("hop stays on the ring"));
            }
        }
    }
    out
}

/// BFS distances from `x` to every configuration of its sector.
pub fn bfs_distances_from(x: &Configuration) -> HashMap<Configuration, usize> {
    let mut dist = HashMap::new();
    dist.insert(x.clone(), 0usize);
    let mut queue = VecDeque::new();
    queue.push_back(x.clone());
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for v in neighbors(&u) {
            if !dist.contains_key(&v) {
                dist.insert(v.clone(), du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// BFS distance between two configurations: the ground-truth oracle for
/// [`config_distance`].
pub fn bfs_distance(x: &Configuration, y: &Configuration) -> Result<usize> {
    if x.ring() != y.ring() || x.len() != y.len() {
        return Err(Error::domain("BFS endpoints live in different sectors".to_string()));
    }
    if x == y {
        return Ok(0);
    }
    let mut dist = HashMap::new();
    dist.insert(x.clone(), 0usize);
    let mut queue = VecDeque::new();
    queue.push_back(x.clone());
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for v in neighbors(&u) {
            if v == *y {
                return Ok(du + 1);
            }
            if !dist.contains_key(&v) {
                dist.insert(v.clone(), du + 1);
                queue.push_back(v);
            }
        }
    }
    Err(Error::domain("target unreachable (different sectors?)".to_string()))
}

/// Enumerate shortest paths from `x` to `y`, capped at `cap` paths.
/// Returns the paths and whether the cap was hit.
pub fn shortest_paths(
    x: &Configuration,
    y: &Configuration,
    cap: usize,
) -> Result<(Vec<Vec<Configuration>>, bool)> {
    let dist = bfs_distances_from(x);
    let target = *dist
        .get(y)
        .ok_or_else(|| Error::domain("target unreachable".to_string()))?;
    let mut paths = Vec::new();
    let mut capped = false;
    // walk backwards from y along strictly decreasing BFS levels
    let mut stack: Vec<Vec<Configuration>> = vec![vec![y.clone()]];
    while let Some(partial) = stack.pop() {
        if paths.len() >= cap {
            capped = true;
            break;
        }
        let head = partial.last().unwrap();
        let d = dist[head];
        if d == 0 {
            let mut p = partial.clone();
            p.reverse();
            paths.push(p);
            continue;
        }
        for v in neighbors(head) {
            if dist.get(&v) == Some(&(d - 1)) {
                let mut p = partial.clone();
                p.push(v);
                stack.push(p);
            }
        }
    }
    let _ = target;
    Ok((paths, capped))
}

/// Per-particle record of a path in the product graph.
#[derive(Debug, Clone)]
pub struct PathRecord {
    pub steps: Vec<Configuration>,
    /// `tracks[j][l]`: site of the j-th particle (initial sorted order)
    /// after l steps.
    pub tracks: Vec<Vec<usize>>,
    /// Total ring distance traveled by each particle.
    pub travel: Vec<usize>,
    /// Particles whose first move was counter-clockwise (+1).
    pub moved_up: Vec<usize>,
    /// Particles whose first move was clockwise (−1).
    pub moved_down: Vec<usize>,
    /// Particles that never move.
    pub stationary: Vec<usize>,
}

impl PathRecord {
    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }
}

/// Track individual hard-core particles along a path: each step moves
/// exactly one particle to an adjacent free site, so particle identities
/// propagate uniquely.
pub fn track_particles(path: &[Configuration]) -> Result<PathRecord> {
    if path.is_empty() {
        return Err(Error::domain("empty path".to_string()));
    }
    let n = path[0].len();
    let l = path[0].ring();
    let mut tracks: Vec<Vec<usize>> = path[0].sites().iter().map(|&s| vec![s]).collect();
    let mut positions: Vec<usize> = path[0].sites().to_vec();
    let mut travel = vec![0usize; n];
    let mut first_dir: Vec<Option<i8>> = vec![None; n];
    for (step, pair) in path.windows(2).enumerate() {
        let (prev, cur) = (&pair[0], &pair[1]);
        if cur.len() != n || cur.ring() != l {
            return Err(Error::domain(format!("sector changes at step {}", step + 1)));
        }
        let from: Vec<usize> = prev
            .sites()
            .iter()
            .copied()
            .filter(|&s| !cur.contains(s))
            .collect();
        let to: Vec<usize> = cur
            .sites()
            .iter()
            .copied()
            .filter(|&s| !prev.contains(s))
            .collect();
        if from.len() != 1 || to.len() != 1 || ring_distance(from[0], to[0], l) != 1 {
            return Err(Error::domain(format!(
                "steps {} and {} are not adjacent in the product graph",
                step,
                step + 1
            )));
        }
        let (s, t) = (from[0], to[0]);
        let j = positions
            .iter()
            .position(|&p| p == s)
            .expect("moving site is occupied");
        positions[j] = t;
        travel[j] += 1;
        if first_dir[j].is_none() {
            let up = t == (s + 1) % l;
            first_dir[j] = Some(if up { 1 } else { -1 });
        }
        for (jj, tr) in tracks.iter_mut().enumerate() {
            tr.push(positions[jj]);
        }
    }
    let mut moved_up = Vec::new();
    let mut moved_down = Vec::new();
    let mut stationary = Vec::new();
    for j in 0..n {
        match (travel[j], first_dir[j]) {
            (0, _) => stationary.push(j),
            (_, Some(1)) => moved_up.push(j),
            _ => moved_down.push(j),
        }
    }
    Ok(PathRecord {
        steps: path.to_vec(),
        tracks,
        travel,
        moved_up,
        moved_down,
        stationary,
    })
}

/// The unique cyclic relabeling splitting a configuration into window
/// interior and left/right boundary families, with the per-particle
/// displacement tuples off the packed boundary clusters.
#[derive(Debug, Clone)]
pub struct BoundaryProfile {
    pub ell: usize,
    pub r: usize,
    /// The cyclic permutation as `sigma[j] = σ(j)` (0-based positions into
    /// the sorted site list).
    pub sigma: Vec<usize>,
    /// Displacements of the ℓ left particles, weakly increasing.
    pub chi_minus: Vec<usize>,
    /// Displacements of the r right particles, weakly increasing.
    pub chi_plus: Vec<usize>,
}

/// Compute the boundary profile of `x` relative to a window, for the split
/// (ℓ, r) of its outside particles.
pub fn boundary_profile(
    x: &Configuration,
    window: Interval,
    ell: usize,
    r: usize,
) -> Result<BoundaryProfile> {
    let l = x.ring();
    if window.ring != l {
        return Err(Error::domain("window ring mismatch".to_string()));
    }
    let n_total = x.len();
    let inside: Vec<usize> = x.sites().iter().copied().filter(|&s| window.contains(s)).collect();
    let n_in = inside.len();
    if n_in == 0 {
        return Err(Error::domain("no particles inside the window".to_string()));
    }
    if ell + r + n_in != n_total {
        return Err(Error::domain(format!(
            "infeasible split: ℓ + r = {} but N − |x ∩ Λ| = {}",
            ell + r,
            n_total - n_in
        )));
    }
    // sorted x splits as [below window | inside | above window]
    let p = x.sites().iter().filter(|&&s| s < window.lo).count();
    let shift = (p + n_total - ell) % n_total;
    let sigma: Vec<usize> = (0..n_total).map(|j| (j + shift) % n_total).collect();
    let xs = x.sites();
    let mut chi_minus = vec![0usize; ell];
    for m in 1..=ell {
        // χ⁻ index m belongs to σ-position ℓ − m (0-based)
        let site = xs[sigma[ell - m]];
        let a = (window.lo + l - (m % l)) % l;
        chi_minus[m - 1] = (a + l - site) % l;
    }
    let mut chi_plus = vec![0usize; r];
    for m in 1..=r {
        let site = xs[sigma[n_total - r + m - 1]];
        let a = (window.hi + m) % l;
        chi_plus[m - 1] = (site + l - a) % l;
    }
    Ok(BoundaryProfile {
        ell,
        r,
        sigma,
        chi_minus,
        chi_plus,
    })
}

impl BoundaryProfile {
    /// Rebuild the outside sites from the attachment sites and the χ
    /// displacements; the round trip through [`boundary_profile`] is exact.
    pub fn reconstruct_outside(&self, window: Interval) -> Result<Configuration> {
        let l = window.ring;
        let mut sites = Vec::with_capacity(self.ell + self.r);
        for m in 1..=self.ell {
            let a = (window.lo + l - (m % l)) % l;
            sites.push((a + l - (self.chi_minus[m - 1] % l)) % l);
        }
        for m in 1..=self.r {
            let a = (window.hi + m) % l;
            sites.push((a + self.chi_plus[m - 1]) % l);
        }
        Configuration::new(sites, l)
    }
}

/// The boundary-distance value `h` of a window configuration, with the two
/// per-side attachment distances it is the minimum of.
#[derive(Debug, Clone, Copy)]
pub struct GapValue {
    /// `h(y)`: 0 on the boundary-packed configurations, otherwise
    /// `min(d₋, d₊, ⌊L^{5/4}⌋) − 1` where `d_±` is the droplet distance of
    /// `y ∪ {a_{±,1}}` in the (n+1)-particle graph.
    pub value: usize,
    /// `[d₋, d₊]` (meaningless for the packed configurations, stored as 0).
    pub side: [usize; 2],
    /// Whether the clamp `⌊L^{5/4}⌋` was the minimizer (ties included).
    pub clamped: bool,
}

/// Boundary-distance function for window configurations: attaches one site
/// just outside each window edge and measures the droplet distance in the
/// enlarged sector, clamped at `L^{5/4}`.
///
/// The minimum is taken over both attachment sides; `side` exposes the two
/// one-sided distances separately.
pub fn boundary_gap(y: &Configuration, window: Interval, total: usize) -> Result<GapValue> {
    let l = y.ring();
    if window.ring != l {
        return Err(Error::domain("window ring mismatch".to_string()));
    }
    let n = y.len();
    if !(2 * n > total && n < total) {
        return Err(Error::domain(format!(
            "boundary gap needs N/2 < n < N, got n={n}, N={total}"
        )));
    }
    if y.sites().iter().any(|&s| !window.contains(s)) {
        return Err(Error::domain("configuration leaves the window".to_string()));
    }
    if n + 1 >= l {
        return Err(Error::domain("ring too small for the attached particle".to_string()));
    }
    let fam = crate::config::boundary_configs(window, n, total)?;
    if *y == fam.y_plus || *y == fam.y_minus {
        return Ok(GapValue {
            value: 0,
            side: [0, 0],
            clamped: false,
        });
    }
    let a_minus = fam.left_sites[0];
    let a_plus = fam.right_sites[0];
    let d_minus = distance_to_droplets(&y.with_site(a_minus)?)?;
    let d_plus = distance_to_droplets(&y.with_site(a_plus)?)?;
    let clamp = (l as f64).powf(1.25).floor() as usize;
    let d_min = d_minus.min(d_plus);
    let clamped = clamp <= d_min;
    let value = d_min.min(clamp) - 1;
    Ok(GapValue {
        value,
        side: [d_minus, d_plus],
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{all_configs, boundary_configs, configs_in_sites, droplets};
    use proptest::prelude::*;

    #[test]
    fn ring_distance_examples() {
        assert_eq!(ring_distance(1, 6, 8), 3);
        assert_eq!(ring_distance(4, 4, 9), 0);
        assert_eq!(ring_distance(0, 5, 10), 5);
        // closed form L/2 - ||j-k| - L/2| agrees
        for l in 2..=12usize {
            for j in 0..l {
                for k in 0..l {
                    let lhs = ring_distance(j, k, l) as f64;
                    let rhs = l as f64 / 2.0 - ((j as f64 - k as f64).abs() - l as f64 / 2.0).abs();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn config_distance_examples() {
        let x = Configuration::new(vec![0, 1], 6).unwrap();
        let y = Configuration::new(vec![3, 4], 6).unwrap();
        assert_eq!(config_distance(&x, &y).unwrap(), 4);
        assert_eq!(config_distance(&x, &x).unwrap(), 0);
        for g in 0..6 {
            assert_eq!(
                config_distance(&x.translate(g), &y.translate(g)).unwrap(),
                4
            );
        }
        let z = Configuration::new(vec![0], 6).unwrap();
        assert!(config_distance(&x, &z).is_err());
    }

    #[test]
    fn orbit_distance_is_metric_on_small_sector() {
        let t = crate::config::orbit_table(6, 2).unwrap();
        let reps = t.representatives();
        for a in reps {
            assert_eq!(orbit_distance(a, a).unwrap(), 0);
            for b in reps {
                let dab = orbit_distance(a, b).unwrap();
                assert_eq!(dab, orbit_distance(b, a).unwrap());
                if a != b {
                    assert!(dab > 0);
                }
                for c in reps {
                    assert!(
                        orbit_distance(a, c).unwrap() <= dab + orbit_distance(b, c).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn droplet_distance_examples() {
        let x = Configuration::new(vec![0, 2], 6).unwrap();
        assert_eq!(distance_to_droplets(&x).unwrap(), 1);
        assert_eq!(bfs_distance_to_droplets(&x), 1);
        for c in droplets(8, 3).unwrap() {
            assert_eq!(distance_to_droplets(&c).unwrap(), 0);
        }
    }

    /// Independent droplet-distance oracle through BFS.
    fn bfs_distance_to_droplets(x: &Configuration) -> usize {
        let dist = bfs_distances_from(x);
        droplets(x.ring(), x.len())
            .unwrap()
            .iter()
            .map(|c| dist[c])
            .min()
            .unwrap()
    }

    #[test]
    fn nearest_centers_examples() {
        let x = Configuration::new(vec![4, 5, 7], 10).unwrap();
        let centers = nearest_droplet_centers(&x).unwrap();
        let inter: Vec<usize> = centers
            .iter()
            .copied()
            .filter(|&m| x.contains(m))
            .collect();
        assert_eq!(inter, vec![5]); // x_κ with κ = 2 (1-based)
        // droplets sit at distance 0 from their own center
        let c = droplet_centered(10, 3, 3).unwrap();
        assert!(nearest_droplet_centers(&c).unwrap().contains(&3));
        // center set always meets x at L=8, N=3
        for x in all_configs(8, 3) {
            let centers = nearest_droplet_centers(&x).unwrap();
            assert!(
                centers.iter().any(|&m| x.contains(m)),
                "center set misses {x:?}"
            );
        }
        let too_big = Configuration::new(vec![0, 1, 2], 6).unwrap();
        assert!(nearest_droplet_centers(&too_big).is_err());
    }

    #[test]
    fn track_particles_single_mover() {
        let path: Vec<Configuration> = [vec![0, 1], vec![0, 2], vec![0, 3]]
            .iter()
            .map(|s| Configuration::new(s.clone(), 8).unwrap())
            .collect();
        let rec = track_particles(&path).unwrap();
        assert_eq!(rec.travel, vec![0, 2]);
        assert_eq!(rec.moved_up, vec![1]);
        assert_eq!(rec.stationary, vec![0]);
        assert!(rec.moved_down.is_empty());
        assert_eq!(rec.tracks[1], vec![1, 2, 3]);
    }

    #[test]
    fn track_particles_rejects_teleport() {
        let path: Vec<Configuration> = [vec![0, 1], vec![0, 3]]
            .iter()
            .map(|s| Configuration::new(s.clone(), 8).unwrap())
            .collect();
        assert!(track_particles(&path).is_err());
    }

    #[test]
    fn boundary_profile_round_trip_small() {
        let window = Interval::new(4, 8, 12).unwrap();
        for x in all_configs(12, 3) {
            let n_in = x.sites().iter().filter(|&&s| window.contains(s)).count();
            if n_in != 2 {
                continue;
            }
            for ell in 0..=1usize {
                let r = 1 - ell;
                let prof = boundary_profile(&x, window, ell, r).unwrap();
                let rebuilt = prof.reconstruct_outside(window).unwrap();
                let outside: Vec<usize> = x
                    .sites()
                    .iter()
                    .copied()
                    .filter(|&s| !window.contains(s))
                    .collect();
                assert_eq!(rebuilt.sites(), &outside[..]);
                assert!(prof.chi_minus.windows(2).all(|w| w[0] <= w[1]));
                assert!(prof.chi_plus.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn boundary_profile_packed_is_zero() {
        let window = Interval::new(4, 9, 14).unwrap();
        let fam = boundary_configs(window, 2, 4).unwrap();
        let inside = Configuration::new(vec![5, 6], 14).unwrap();
        let x = inside.union(&fam.cluster_pair(1, 1).unwrap()).unwrap();
        let prof = boundary_profile(&x, window, 1, 1).unwrap();
        assert_eq!(prof.chi_minus, vec![0]);
        assert_eq!(prof.chi_plus, vec![0]);
    }

    #[test]
    fn boundary_gap_examples() {
        let window = Interval::new(4, 8, 14).unwrap();
        let fam = boundary_configs(window, 3, 4).unwrap();
        assert_eq!(boundary_gap(&fam.y_plus, window, 4).unwrap().value, 0);
        assert_eq!(boundary_gap(&fam.y_minus, window, 4).unwrap().value, 0);
        let clamp = (14f64).powf(1.25).floor() as usize;
        for y in configs_in_sites(&window.sites().collect::<Vec<_>>(), 3, 14) {
            let gap = boundary_gap(&y, window, 4).unwrap();
            assert!(gap.value < clamp);
            if y != fam.y_plus && y != fam.y_minus {
                // cross-check against the BFS droplet distance in the
                // enlarged sector
                let d_minus = bfs_distance_to_droplets(&y.with_site(fam.left_sites[0]).unwrap());
                let d_plus = bfs_distance_to_droplets(&y.with_site(fam.right_sites[0]).unwrap());
                assert_eq!(gap.side, [d_minus, d_plus]);
                assert_eq!(gap.value, d_minus.min(d_plus).min(clamp) - 1);
            }
        }
        let bad = Configuration::new(vec![4, 5], 14).unwrap();
        assert!(boundary_gap(&bad, window, 4).is_err()); // n = N/2 rejected
    }

    proptest! {
        #[test]
        fn config_distance_matches_bfs(seed in 0u64..400) {
            let l = 5 + (seed % 3) as usize; // 5..=7
            let n = 2 + (seed % 2) as usize; // 2..=3
            let configs = all_configs(l, n);
            let x = &configs[(seed as usize * 7) % configs.len()];
            let y = &configs[(seed as usize * 13) % configs.len()];
            prop_assert_eq!(
                config_distance(x, y).unwrap(),
                bfs_distance(x, y).unwrap()
            );
        }
    }
}
