//! Monotone-tuple enumeration and exhaustive geometric-sum bound checks.

use crate::config::{all_configs, boundary_configs, configs_in_sites, Interval};
use crate::error::{Error, Result};
use crate::metric::{boundary_gap, distance_to_droplets};
use crate::report::BoundCheck;

const LN_2: f64 = std::f64::consts::LN_2;

/// A weakly increasing tuple of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneTuple(Vec<u64>);

impl MonotoneTuple {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("tuple is not weakly increasing".to_string()));
        }
        Ok(MonotoneTuple(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    /// ℓ¹ norm Σ χ_j.
    pub fn l1(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// The prefix-sum bijection from free tuples onto monotone tuples:
/// `chi_j = x_1 + ... + x_j`.
pub fn prefix_sums(x: &[u64]) -> MonotoneTuple {
    let mut acc = 0u64;
    MonotoneTuple(
        x.iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect(),
    )
}

/// Inverse of [`prefix_sums`]: consecutive differences.
pub fn prefix_sums_inverse(chi: &MonotoneTuple) -> Vec<u64> {
    let mut prev = 0u64;
    chi.0
        .iter()
        .map(|&v| {
            let d = v - prev;
            prev = v;
            d
        })
        .collect()
}

/// Number of weakly increasing tuples of length `len` with ℓ¹ norm `sum`
/// (partitions of `sum` into at most `len` parts), as f64.
fn monotone_count(len: usize, sum: usize) -> f64 {
    // p[s] after pass k: partitions of s into parts of size at most k,
    // equivalently into at most k parts
    let mut p = vec![0f64; sum + 1];
    p[0] = 1.0;
    for k in 1..=len {
        for s in k..=sum {
            p[s] += p[s - k];
        }
    }
    p[sum]
}

/// Truncated sum over nonzero monotone tuples with a certified tail bound.
#[derive(Debug, Clone, Copy)]
pub struct GeomSumReport {
    /// Σ over χ ≠ 0 with |χ|₁ ≤ cutoff of e^{−μ|χ|₁}.
    pub truncated: f64,
    /// Rigorous bound on the discarded tail.
    pub tail_bound: f64,
    /// Closed form Π_{k=1}^N (1 − e^{−μk})^{−1} − 1 for the full sum.
    pub product_form: f64,
    /// The claimed bound 30 e^{−μ}.
    pub bound: f64,
    /// truncated + tail_bound ≤ bound.
    pub holds: bool,
}

/// Evaluate `Σ_{χ ∈ X^N \ {0}} e^{−μ|χ|₁}` by enumeration up to `cutoff`
/// with a certified geometric tail, and compare against both the product
/// closed form and the bound `30 e^{−μ}`.
///
/// The tail uses the partition-count bound `p_N(s) ≤ (s+1)^{N-1}`: term
/// ratios beyond the cutoff are below `e^{−μ}((c+2)/(c+1))^{N-1} < 1`, so the
/// tail is dominated by a geometric series summed in closed form.
pub fn truncated_geom_sum(n: usize, mu: f64, cutoff: usize) -> Result<GeomSumReport> {
    if n == 0 {
        return Err(Error::domain("tuple length must be positive".to_string()));
    }
    if mu < LN_2 {
        return Err(Error::domain(format!("μ ≥ ln 2 required, got {mu}")));
    }
    let mut truncated = 0.0;
    for s in 1..=cutoff {
        truncated += monotone_count(n, s) * (-mu * s as f64).exp();
    }
    let c1 = (cutoff + 1) as f64;
    let ratio = (-mu).exp() * ((c1 + 1.0) / c1).powi(n as i32 - 1);
    if ratio >= 1.0 {
        return Err(Error::domain("cutoff too small to certify the tail".to_string()));
    }
    let first = (c1 + 1.0).powi(n as i32 - 1) * (-mu * c1).exp();
    let tail_bound = first / (1.0 - ratio);
    if tail_bound >= 1e-12 {
        return Err(Error::domain(format!(
            "cutoff {cutoff} leaves tail bound {tail_bound:.3e} ≥ 1e-12"
        )));
    }
    let product_form = (1..=n)
        .map(|k| 1.0 / (1.0 - (-mu * k as f64).exp()))
        .product::<f64>()
        - 1.0;
    let bound = 30.0 * (-mu).exp();
    Ok(GeomSumReport {
        truncated,
        tail_bound,
        product_form,
        bound,
        holds: truncated + tail_bound <= bound,
    })
}

impl GeomSumReport {
    pub fn to_bound_check(&self, n: usize, mu: f64) -> BoundCheck {
        BoundCheck::bound("monotone_tuple_sum", self.truncated + self.tail_bound, self.bound)
            .labeled_lemma()
            .with_param("n", n)
            .with_param("mu", mu)
            .with_param("product_form", self.product_form)
            .with_param("tail_bound", self.tail_bound)
    }
}

/// Exhaustively check `Σ_x e^{−μ d(x, droplets)} ≤ L (1 + 2⁹ e^{−μ})` over
/// the whole sector.
pub fn verify_sum_over_configs(ring: usize, particles: usize, mu: f64) -> Result<BoundCheck> {
    if 2 * particles >= ring {
        return Err(Error::domain(format!(
            "need N < L/2, got N={particles}, L={ring}"
        )));
    }
    if particles == 0 {
        return Err(Error::domain("need N ≥ 1".to_string()));
    }
    if mu < LN_2 {
        return Err(Error::domain(format!("μ ≥ ln 2 required, got {mu}")));
    }
    let mut sum = 0.0;
    for x in all_configs(ring, particles) {
        sum += (-mu * distance_to_droplets(&x)? as f64).exp();
    }
    let rhs = ring as f64 * (1.0 + 512.0 * (-mu).exp());
    Ok(BoundCheck::bound("config_droplet_sum", sum, rhs)
        .labeled_lemma()
        .with_param("l", ring)
        .with_param("n", particles)
        .with_param("mu", mu))
}

/// Exhaustively check the two window sums:
/// for every interior configuration `y`, the attachment sum
/// `Σ_z e^{−μ d(y∪z, droplets)} ≤ 333 e^{−μ} e^{−μ h(y)}` over outside
/// configurations `z` not completing a droplet, and the profile sum
/// `Σ_{y ∉ {y_±}} e^{−μ h(y)} ≤ 2¹¹ e^{−μ}`.
///
/// No lower bound on `L` is imposed; small-ring behavior is reported as-is.
pub fn verify_boundary_sums(
    ring: usize,
    total: usize,
    inside: usize,
    window: Interval,
    mu: f64,
) -> Result<Vec<BoundCheck>> {
    if window.ring != ring {
        return Err(Error::domain("window ring mismatch".to_string()));
    }
    if !(2 * inside > total && inside < total) {
        return Err(Error::domain(format!(
            "need N/2 < n < N, got n={inside}, N={total}"
        )));
    }
    if mu < LN_2 {
        return Err(Error::domain(format!("μ ≥ ln 2 required, got {mu}")));
    }
    let fam = match boundary_configs(window, inside, total) {
        Ok(f) => f,
        Err(_) => {
            // window too small for the interior particles or clusters that
            // cannot fit outside: report the empty sums rather than failing
            return Ok(vec![BoundCheck::bound(
                "window_profile_sum",
                0.0,
                2048.0 * (-mu).exp(),
            )
            .labeled_lemma()
            .with_param("l", ring)
            .with_param("n_total", total)
            .with_param("n_inside", inside)
            .with_param("mu", mu)
            .with_param("infeasible_geometry", true)]);
        }
    };
    let window_sites: Vec<usize> = window.sites().collect();
    let outside_sites = window.complement_sites();
    let ys = configs_in_sites(&window_sites, inside, ring);
    let zs = configs_in_sites(&outside_sites, total - inside, ring);
    let mut rows = Vec::new();
    let mut profile_sum = 0.0;
    for y in &ys {
        let gap = boundary_gap(y, window, total)?;
        let mut attach_sum = 0.0;
        for z in &zs {
            let u = y.union(z)?;
            if u.cluster_count() == 1 {
                continue; // droplet completions are excluded from the sum
            }
            attach_sum += (-mu * distance_to_droplets(&u)? as f64).exp();
        }
        let rhs = 333.0 * (-mu).exp() * (-mu * gap.value as f64).exp();
        rows.push(
            BoundCheck::bound("window_attachment_sum", attach_sum, rhs)
                .labeled_lemma()
                .with_param("l", ring)
                .with_param("n_total", total)
                .with_param("n_inside", inside)
                .with_param("mu", mu)
                .with_param("y", y.to_json())
                .with_param("h", gap.value),
        );
        if *y != fam.y_plus && *y != fam.y_minus {
            profile_sum += (-mu * gap.value as f64).exp();
        }
    }
    rows.push(
        BoundCheck::bound("window_profile_sum", profile_sum, 2048.0 * (-mu).exp())
            .labeled_lemma()
            .with_param("l", ring)
            .with_param("n_total", total)
            .with_param("n_inside", inside)
            .with_param("mu", mu),
    );
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn prefix_sums_examples() {
        assert_eq!(prefix_sums(&[0, 0, 0]).values(), &[0, 0, 0]);
        assert_eq!(prefix_sums(&[1, 0, 2]).values(), &[1, 1, 3]);
        // |Ψ(x)|₁ = Σ (N−k+1) x_k
        let x = [3u64, 1, 4, 1];
        let n = x.len() as u64;
        let weighted: u64 = x
            .iter()
            .enumerate()
            .map(|(k, &v)| (n - k as u64) * v)
            .sum();
        assert_eq!(prefix_sums(&x).l1(), weighted);
    }

    #[test]
    fn prefix_sums_round_trip_exhaustive() {
        for n in 1..=4usize {
            let mut stack = vec![Vec::new()];
            while let Some(x) = stack.pop() {
                if x.len() == n {
                    let chi = prefix_sums(&x);
                    assert_eq!(prefix_sums_inverse(&chi), x);
                    continue;
                }
                for v in 0..=3u64 {
                    let mut y = x.clone();
                    y.push(v);
                    stack.push(y);
                }
            }
        }
    }

    #[test]
    fn monotone_tuple_validation() {
        assert!(MonotoneTuple::new(vec![0, 1, 1, 4]).is_ok());
        assert!(MonotoneTuple::new(vec![2, 1]).is_err());
    }

    #[test]
    fn monotone_count_matches_enumeration() {
        // tuples of length len, weakly increasing, entries ≥ min, sum s:
        // pick the first entry v, recurse with entries ≥ v
        fn count(len: usize, s: usize, min: usize) -> usize {
            if len == 0 {
                return usize::from(s == 0);
            }
            (min..=s).map(|v| count(len - 1, s - v, v)).sum()
        }
        for n in 1..=5usize {
            for s in 0..=12usize {
                assert_eq!(monotone_count(n, s) as usize, count(n, s, 0), "n={n}, s={s}");
            }
        }
    }

    #[test]
    fn geom_sum_closed_form_n3() {
        let rep = truncated_geom_sum(3, LN_2, 60).unwrap();
        assert_abs_diff_eq!(rep.product_form, 43.0 / 21.0, epsilon = 1e-13);
        assert!((rep.truncated - rep.product_form).abs() <= rep.tail_bound + 1e-13);
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.bound, 15.0, epsilon = 1e-12);
    }

    #[test]
    fn geom_sum_single_particle() {
        let rep = truncated_geom_sum(1, 1.0, 60).unwrap();
        let exact = (-1f64).exp() / (1.0 - (-1f64).exp());
        assert_abs_diff_eq!(rep.truncated, exact, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.product_form, exact, epsilon = 1e-12);
    }

    #[test]
    fn geom_sum_monotone_in_mu() {
        let mut last = f64::INFINITY;
        for mu in [LN_2, 0.8, 1.0, 1.5, 2.0] {
            let rep = truncated_geom_sum(4, mu, 60).unwrap();
            assert!(rep.truncated < last);
            last = rep.truncated;
        }
    }

    #[test]
    fn geom_sum_rejects_small_mu() {
        assert!(truncated_geom_sum(3, 0.5, 60).is_err());
    }

    #[test]
    fn config_sum_bound_examples() {
        let row = verify_sum_over_configs(10, 3, LN_2).unwrap();
        assert!(row.holds);
        assert!(row.rhs <= 2570.0 + 1e-9);
        // large μ: only the L droplets contribute ≈ 1 each
        let row = verify_sum_over_configs(10, 3, 30.0).unwrap();
        assert_abs_diff_eq!(row.lhs, 10.0, epsilon = 1e-9);
        assert!(verify_sum_over_configs(10, 5, 1.0).is_err());
    }

    #[test]
    fn boundary_sum_rejects_bad_split() {
        let w = Interval::new(5, 7, 14).unwrap();
        assert!(verify_boundary_sums(14, 4, 4, w, 1.0).is_err());
        assert!(verify_boundary_sums(14, 4, 2, w, 1.0).is_err());
    }

    #[test]
    fn boundary_sums_hold_on_window() {
        let w = Interval::new(5, 7, 14).unwrap();
        let rows = verify_boundary_sums(14, 4, 3, w, LN_2).unwrap();
        assert!(rows.iter().all(|r| r.holds));
        // slack grows with μ on the profile row
        let slack_small = rows.last().unwrap().slack();
        let rows_large = verify_boundary_sums(14, 4, 3, w, 2.0).unwrap();
        assert!(rows_large.iter().all(|r| r.holds));
        assert!(rows_large.last().unwrap().lhs <= rows.last().unwrap().lhs);
        let _ = slack_small;
    }
}
