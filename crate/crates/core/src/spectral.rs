//! Droplet-band structure and decay-estimate verification.
//!
//! For Δ > 2 every fiber carries exactly one eigenvalue in `[1-1/Δ, 1]` and
//! none in the gap `(1, 2-2/Δ)`; those eigenpairs, pulled back to the sector
//! through the adjoint transform and phase-fixed, are the droplet-band
//! states. The verification routines check the Combes–Thomas-type bounds:
//! exponential decay of band eigenfunctions away from low-cluster
//! configurations, and off-diagonal decay of shifted fiber resolvents.

use std::io::{self, Write};

use crate::config::{cluster_configs, droplets, ModelParams, OrbitTable, SectorBasis};
use crate::error::{Error, Result};
use crate::fourier::{fiber_operator, fourier_adjoint, FiberVector};
use crate::metric::{config_distance, orbit_distance};
use crate::report::BoundCheck;
use crate::{C64, CMatrix, CVector, RMatrix};

/// Tolerance for counting an eigenvalue as inside a closed interval.
pub const BAND_TOL: f64 = 1e-9;

/// The energy window of states built from at most `K` clusters:
/// `[1-1/Δ, (K+1-δ)(1-1/Δ)]`.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBand {
    pub clusters: usize,
    pub delta_param: f64,
    pub delta: f64,
}

impl EnergyBand {
    pub fn new(clusters: usize, delta_param: f64, delta: f64) -> Result<Self> {
        if clusters == 0 {
            return Err(Error::domain("cluster count K must be ≥ 1".to_string()));
        }
        if !(delta_param > 0.0 && delta_param < 1.0) {
            return Err(Error::domain(format!("δ must lie in (0,1), got {delta_param}")));
        }
        if !(delta > 1.0) {
            return Err(Error::domain(format!("Δ > 1 required, got {delta}")));
        }
        Ok(EnergyBand {
            clusters,
            delta_param,
            delta,
        })
    }

    /// Closed interval `[1-1/Δ, (K+1-δ)(1-1/Δ)]`.
    pub fn interval(&self) -> (f64, f64) {
        let unit = 1.0 - 1.0 / self.delta;
        (unit, (self.clusters as f64 + 1.0 - self.delta_param) * unit)
    }

    pub fn contains(&self, e: f64) -> bool {
        let (lo, hi) = self.interval();
        e >= lo - BAND_TOL && e <= hi + BAND_TOL
    }
}

/// The half-open droplet band `I₁ = [1-1/Δ, 2(1-1/Δ))`.
pub fn droplet_band_interval(delta: f64) -> (f64, f64) {
    (1.0 - 1.0 / delta, 2.0 * (1.0 - 1.0 / delta))
}

/// Decay rate `μ_K = ln(1 + δ(Δ-1)/(2(K+1)))` of the band eigenfunction
/// bounds.
pub fn decay_rate(clusters: usize, delta_param: f64, delta: f64) -> f64 {
    (1.0 + delta_param * (delta - 1.0) / (2.0 * (clusters as f64 + 1.0))).ln()
}

/// The rate at `K = 1, δ = 1/2`: `ln(1 + (Δ-1)/8)`.
pub fn mu_1(delta: f64) -> f64 {
    decay_rate(1, 0.5, delta)
}

/// One droplet-band eigenstate, reconstructed on the sector basis and
/// phase-fixed.
#[derive(Debug, Clone)]
pub struct BandState {
    pub gamma: usize,
    pub energy: f64,
    /// Unit-norm sector eigenvector; the modulus is constant on every
    /// translation orbit.
    pub vector: CVector,
    pub in_band: bool,
}

/// The L droplet-band eigenpairs of a sector.
#[derive(Debug, Clone)]
pub struct BandSpectrum {
    pub params: ModelParams,
    pub states: Vec<BandState>,
}

/// Extract the droplet-band states: for each fiber the unique eigenvalue in
/// `[1-1/Δ, 1]`, with its eigenvector pulled back to the sector. Signals
/// [`Error::BandViolation`] if any fiber carries a different count in the
/// window or a spurious eigenvalue in the gap `(1, 2-2/Δ)`.
///
/// The phase is fixed by rotating the largest-modulus droplet amplitude to
/// the positive real axis (ties resolved toward the lowest basis index).
pub fn droplet_band_states(params: ModelParams) -> Result<BandSpectrum> {
    let table = crate::config::orbit_table(params.ring, params.particles)?;
    droplet_band_states_with(params, &table)
}

/// As [`droplet_band_states`] with a caller-provided orbit table.
pub fn droplet_band_states_with(params: ModelParams, table: &OrbitTable) -> Result<BandSpectrum> {
    if !(params.delta > 2.0) {
        return Err(Error::domain(format!(
            "droplet band needs Δ > 2, got {}",
            params.delta
        )));
    }
    let (l, n) = (params.ring, params.particles);
    if !(n > 1 && n + 1 < l) {
        return Err(Error::domain(format!(
            "droplet band needs 1 < N < L-1, got N={n}, L={l}"
        )));
    }
    let basis = SectorBasis::new(l, n);
    let hamiltonian = crate::operator::build_sector(params).hamiltonian();
    let droplet_indices: Vec<usize> = droplets(l, n)?
        .iter()
        .map(|c| basis.index_of(c).expect("droplet lies in the sector"))
        .collect();
    let window_lo = 1.0 - 1.0 / params.delta;
    let window_hi = 1.0;
    let gap_hi = 2.0 - 2.0 / params.delta;
    let mut states = Vec::with_capacity(l);
    for gamma in 0..l {
        let op = fiber_operator(params, table, gamma)?;
        let eig = op.eigen()?;
        let in_window: Vec<usize> = (0..eig.energies.len())
            .filter(|&i| {
                eig.energies[i] >= window_lo - BAND_TOL && eig.energies[i] <= window_hi + BAND_TOL
            })
            .collect();
        let in_gap = eig
            .energies
            .iter()
            .filter(|&&e| e > window_hi + BAND_TOL && e < gap_hi - BAND_TOL)
            .count();
        if in_window.len() != 1 || in_gap != 0 {
            return Err(Error::BandViolation {
                gamma,
                in_window: in_window.len(),
                in_gap,
                lo: window_lo,
                hi: window_hi,
            });
        }
        let pick = in_window[0];
        let mut energy = eig.energies[pick];
        let mut fiber_state = eig.vectors[pick].clone();
        op.refine(&mut energy, &mut fiber_state)?;
        let mut fiber_vec = FiberVector::zeros(table);
        fiber_vec.per_fiber[gamma] = fiber_state;
        let mut psi = fourier_adjoint(table, &basis, &fiber_vec);
        phase_fix(&mut psi, &droplet_indices);
        let residual = eigen_residual(&hamiltonian, &psi, energy);
        if residual > 1e-10 {
            return Err(Error::Numerical(format!(
                "band state γ={gamma} has eigen residual {residual:.3e}"
            )));
        }
        let (band_lo, band_hi) = droplet_band_interval(params.delta);
        states.push(BandState {
            gamma,
            energy,
            vector: psi,
            in_band: energy >= band_lo - BAND_TOL && energy < band_hi,
        });
    }
    Ok(BandSpectrum { params, states })
}

fn phase_fix(psi: &mut CVector, droplet_indices: &[usize]) {
    let mut best = 0usize;
    let mut best_mod = -1.0f64;
    for &i in droplet_indices {
        let m = psi[i].norm();
        if m > best_mod {
            best_mod = m;
            best = i;
        }
    }
    if best_mod > 0.0 {
        let rot = psi[best].conj() / C64::new(best_mod, 0.0);
        for v in psi.iter_mut() {
            *v *= rot;
        }
    }
}

fn eigen_residual(h: &RMatrix, psi: &CVector, energy: f64) -> f64 {
    let hpsi = crate::fourier::apply_real(h, psi);
    (hpsi - psi * C64::new(energy, 0.0)).norm()
}

/// Diagonal projection onto the admitted representatives with at most `K`
/// clusters, in the basis of fiber `gamma`.
pub fn cluster_projection(table: &OrbitTable, gamma: usize, clusters: usize) -> RMatrix {
    let basis = crate::fourier::fiber_basis(table, gamma);
    let m = basis.members.len();
    let mut p = RMatrix::zeros(m, m);
    for (k, &idx) in basis.members.iter().enumerate() {
        if table.representative(idx).cluster_count() <= clusters {
            p[(k, k)] = 1.0;
        }
    }
    p
}

/// Check the pointwise eigenfunction bound
/// `|⟨δ_x, φ⟩| ≤ (2(K+1)²/δ) L^{-1/2} e^{-μ_K d(x, V_K)}` for every state
/// with energy in the K-cluster band and every configuration `x`.
///
/// One row per state; the row's lhs is the worst decay-normalized amplitude
/// `max_x |⟨δ_x, φ⟩| e^{+μ_K d(x, V_K)}` and the params carry the worst `x`.
pub fn verify_ct_eigenfunction(
    params: ModelParams,
    clusters: usize,
    delta_param: f64,
) -> Result<Vec<BoundCheck>> {
    let band = EnergyBand::new(clusters, delta_param, params.delta)?;
    if clusters == 1 && !(params.delta > 3.0) {
        return Err(Error::domain(format!(
            "the droplet-band bound needs Δ > 3, got {}",
            params.delta
        )));
    }
    let (l, n) = (params.ring, params.particles);
    let table = crate::config::orbit_table(l, n)?;
    let basis = SectorBasis::new(l, n);
    let low_cluster = cluster_configs(l, n, clusters)?;
    // distance to the K-cluster set for every basis configuration
    let dist: Vec<usize> = basis
        .configs()
        .iter()
        .map(|x| {
            low_cluster
                .iter()
                .map(|y| config_distance(x, y).expect("same sector"))
                .min()
                .expect("cluster set nonempty")
        })
        .collect();
    let mu = decay_rate(clusters, delta_param, params.delta);
    let prefactor = 2.0 * (clusters as f64 + 1.0).powi(2) / delta_param / (l as f64).sqrt();
    let hamiltonian = crate::operator::build_sector(params).hamiltonian();
    let droplet_indices: Vec<usize> = droplets(l, n)?
        .iter()
        .map(|c| basis.index_of(c).expect("droplet in sector"))
        .collect();
    let mut rows = Vec::new();
    for gamma in 0..l {
        let op = fiber_operator(params, &table, gamma)?;
        let eig = op.eigen()?;
        for (i, &raw_energy) in eig.energies.iter().enumerate() {
            if !band.contains(raw_energy) {
                continue;
            }
            let mut energy = raw_energy;
            let mut fiber_state = eig.vectors[i].clone();
            op.refine(&mut energy, &mut fiber_state)?;
            let mut fiber_vec = FiberVector::zeros(&table);
            fiber_vec.per_fiber[gamma] = fiber_state;
            let mut psi = fourier_adjoint(&table, &basis, &fiber_vec);
            phase_fix(&mut psi, &droplet_indices);
            let residual = eigen_residual(&hamiltonian, &psi, energy);
            if residual > 1e-9 {
                return Err(Error::Numerical(format!(
                    "band-window state γ={gamma} has residual {residual:.3e}"
                )));
            }
            let mut worst = f64::NEG_INFINITY;
            let mut worst_x = 0usize;
            for (xi, amp) in psi.iter().enumerate() {
                let val = amp.norm() * (mu * dist[xi] as f64).exp();
                if val > worst {
                    worst = val;
                    worst_x = xi;
                }
            }
            rows.push(
                BoundCheck::bound_with_tol("ct_eigenfunction", worst, prefactor, 1e-12)
                    .with_param("gamma", gamma)
                    .with_param("energy", energy)
                    .with_param("k_clusters", clusters)
                    .with_param("mu", mu)
                    .with_param("worst_x", basis.config(worst_x).to_json()),
            );
        }
    }
    if rows.is_empty() {
        return Err(Error::domain("the requested band is empty".to_string()));
    }
    Ok(rows)
}

/// Check off-diagonal decay of the shifted fiber resolvent at energy `E`:
/// with `Y = (K+1)(1-1/Δ) P_K` and `κ = ‖Ŵ^{1/2}(Ĥ+Y-E)^{-1}Ŵ^{1/2}‖^{-1}`,
/// every singleton block satisfies
/// `|⟨x̂|(Ĥ+Y-E)^{-1}|ŷ⟩| ≤ (2/κ) e^{-η d̂(x̂,ŷ)}`, `η = ln(1 + κΔ/2)`.
pub fn verify_resolvent_decay(
    params: ModelParams,
    gamma: usize,
    clusters: usize,
    delta_param: f64,
    energy: f64,
) -> Result<Vec<BoundCheck>> {
    let band = EnergyBand::new(clusters, delta_param, params.delta)?;
    if !band.contains(energy) {
        return Err(Error::domain(format!(
            "E = {energy} lies outside the K-cluster band {:?}",
            band.interval()
        )));
    }
    let table = crate::config::orbit_table(params.ring, params.particles)?;
    let op = fiber_operator(params, &table, gamma)?;
    let m = op.dimension();
    if m == 0 {
        return Err(Error::domain(format!("fiber {gamma} is empty")));
    }
    let herm = op.hermitized()?;
    let proj = cluster_projection(&table, gamma, clusters);
    let shift = (clusters as f64 + 1.0) * (1.0 - 1.0 / params.delta);
    let mut shifted = herm.clone();
    for i in 0..m {
        shifted[(i, i)] += C64::new(shift * proj[(i, i)] - energy, 0.0);
    }
    // invert through the Hermitian eigendecomposition
    let eig = shifted.symmetric_eigen();
    let max_abs = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let min_abs = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
    if min_abs <= 1e-12 * max_abs.max(1.0) {
        return Err(Error::NotInvertible { energy });
    }
    let v = &eig.eigenvectors;
    let mut inverse = CMatrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..m {
                acc += v[(r, k)] * v[(c, k)].conj() / C64::new(eig.eigenvalues[k], 0.0);
            }
            inverse[(r, c)] = acc;
        }
    }
    // κ from the weighted norm of W^{1/2} (Ĥ+Y-E)^{-1} W^{1/2}
    let mut weighted = CMatrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            weighted[(r, c)] =
                inverse[(r, c)] * C64::new((op.potential[r] * op.potential[c]).sqrt(), 0.0);
        }
    }
    let norm = crate::fourier::hermitian_eigenvalues(&weighted)
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    let kappa = 1.0 / norm;
    let eta = (1.0 + kappa * params.delta / 2.0).ln();
    let kappa_bound =
        (clusters as f64 + 1.0) * params.delta / (delta_param * (params.delta - 1.0));
    let mut rows = vec![BoundCheck::bound_with_tol(
        "resolvent_norm_bound",
        norm,
        kappa_bound,
        1e-9,
    )
    .with_param("gamma", gamma)
    .with_param("energy", energy)
    .with_param("kappa", kappa)
    .with_param("eta", eta)];
    let mut worst = f64::NEG_INFINITY;
    let mut worst_pair = (0usize, 0usize);
    for r in 0..m {
        for c in 0..m {
            let d = orbit_distance(
                table.representative(op.basis.members[r]),
                table.representative(op.basis.members[c]),
            )?;
            let val = inverse[(r, c)].norm() * (eta * d as f64).exp();
            if val > worst {
                worst = val;
                worst_pair = (r, c);
            }
        }
    }
    rows.push(
        BoundCheck::bound_with_tol("resolvent_block_decay", worst, 2.0 / kappa, 1e-10)
            .with_param("gamma", gamma)
            .with_param("energy", energy)
            .with_param("kappa", kappa)
            .with_param("eta", eta)
            .with_param(
                "worst_pair",
                format!(
                    "{}|{}",
                    table.representative(op.basis.members[worst_pair.0]).to_json(),
                    table.representative(op.basis.members[worst_pair.1]).to_json()
                ),
            ),
    );
    Ok(rows)
}

/// Count, per fiber, the eigenvalues in the droplet window `[1-1/Δ, 1]` and
/// in the gap `(1, 2-2/Δ)`; the window count must be 1 and the gap count 0.
pub fn band_counts(params: ModelParams) -> Result<Vec<(usize, usize, usize)>> {
    let table = crate::config::orbit_table(params.ring, params.particles)?;
    let lo = 1.0 - 1.0 / params.delta;
    let gap_hi = 2.0 - 2.0 / params.delta;
    let mut out = Vec::with_capacity(params.ring);
    for gamma in 0..params.ring {
        let eig = fiber_operator(params, &table, gamma)?.eigen()?;
        let in_window = eig
            .energies
            .iter()
            .filter(|&&e| e >= lo - BAND_TOL && e <= 1.0 + BAND_TOL)
            .count();
        let in_gap = eig
            .energies
            .iter()
            .filter(|&&e| e > 1.0 + BAND_TOL && e < gap_hi - BAND_TOL)
            .count();
        out.push((gamma, in_window, in_gap));
    }
    Ok(out)
}

/// Write a band spectrum as a JSON index plus a little-endian binary vector
/// file: each state stores its amplitudes as interleaved (re, im) f64 pairs;
/// `offset` is the byte offset into the vector file and `len` the number of
/// f64 values.
pub fn save_band_spectrum<W1: Write, W2: Write>(
    spectrum: &BandSpectrum,
    index_out: &mut W1,
    vectors_out: &mut W2,
) -> io::Result<()> {
    let mut offset = 0usize;
    for state in &spectrum.states {
        let len = 2 * state.vector.len();
        writeln!(
            index_out,
            "{{\"gamma\":{},\"energy\":{},\"in_band\":{},\"vector_ref\":{{\"offset\":{},\"len\":{}}}}}",
            state.gamma,
            crate::report::fmt_f64(state.energy),
            state.in_band,
            offset,
            len
        )?;
        for amp in state.vector.iter() {
            vectors_out.write_all(&amp.re.to_le_bytes())?;
            vectors_out.write_all(&amp.im.to_le_bytes())?;
        }
        offset += 8 * len;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{all_configs, orbit_table};
    use approx::assert_abs_diff_eq;

    #[test]
    fn decay_rate_examples() {
        assert_abs_diff_eq!(decay_rate(1, 0.5, 10.0), (1.0f64 + 9.0 / 8.0).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(decay_rate(1, 0.5, 10.0), 0.7537718023763802, epsilon = 1e-12);
        assert!(decay_rate(1, 0.5, 1.0 + 1e-12) < 1e-12);
        // monotone in Δ and δ, decreasing in K
        assert!(decay_rate(1, 0.5, 20.0) > decay_rate(1, 0.5, 10.0));
        assert!(decay_rate(1, 0.9, 10.0) > decay_rate(1, 0.5, 10.0));
        assert!(decay_rate(2, 0.5, 10.0) < decay_rate(1, 0.5, 10.0));
        assert_abs_diff_eq!(mu_1(10.0), decay_rate(1, 0.5, 10.0), epsilon = 0.0);
    }

    #[test]
    fn band_interval_endpoints() {
        let band = EnergyBand::new(1, 0.5, 4.0).unwrap();
        let (lo, hi) = band.interval();
        assert_abs_diff_eq!(lo, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 1.5 * 0.75, epsilon = 1e-15);
        let (ilo, ihi) = droplet_band_interval(4.0);
        assert_abs_diff_eq!(ilo, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(ihi, 1.5, epsilon = 1e-15);
        assert!(EnergyBand::new(0, 0.5, 4.0).is_err());
        assert!(EnergyBand::new(1, 1.5, 4.0).is_err());
    }

    #[test]
    fn droplet_band_basics() {
        let params = ModelParams::new(10, 3, 5.0).unwrap();
        let band = droplet_band_states(params).unwrap();
        assert_eq!(band.states.len(), 10);
        for st in &band.states {
            assert!(st.energy >= 0.8 - 1e-12 && st.energy <= 1.0 + 1e-9);
            assert!(st.in_band);
            assert_abs_diff_eq!(st.vector.norm(), 1.0, epsilon = 1e-12);
        }
        // γ=0 is the sector ground state and beats every other fiber
        let e0 = band.states[0].energy;
        for st in &band.states[1..] {
            assert!(e0 < st.energy, "γ={} energy {} ≤ E₀ {}", st.gamma, st.energy, e0);
        }
        // Perron-Frobenius positivity after phase fixing
        for amp in band.states[0].vector.iter() {
            assert!(amp.re > 0.0, "ground-state entry not positive: {amp}");
            assert!(amp.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn orbit_modulus_constancy() {
        let params = ModelParams::new(8, 3, 4.0).unwrap();
        let table = orbit_table(8, 3).unwrap();
        let basis = SectorBasis::new(8, 3);
        let band = droplet_band_states_with(params, &table).unwrap();
        for st in &band.states {
            for (idx, rep) in table.representatives().iter().enumerate() {
                let m0 = st.vector[basis.index_of(rep).unwrap()].norm();
                for z in 0..table.orbit_size(idx) {
                    let m = st.vector[basis.index_of(&rep.translate(z as i64)).unwrap()].norm();
                    assert!((m - m0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn band_counts_reject_single_particle() {
        assert!(droplet_band_states(ModelParams::new(8, 1, 5.0).unwrap()).is_err());
        assert!(droplet_band_states(ModelParams::new(8, 3, 1.5).unwrap()).is_err());
    }

    #[test]
    fn cluster_projection_shape() {
        let table = orbit_table(10, 3).unwrap();
        let p = cluster_projection(&table, 0, 1);
        // γ=0 admits every representative; droplet orbits contribute exactly
        // the droplet representatives
        let rank: f64 = p.diagonal().iter().sum();
        let droplet_reps = table
            .representatives()
            .iter()
            .filter(|r| r.cluster_count() <= 1)
            .count();
        assert_eq!(rank as usize, droplet_reps);
        assert_eq!(droplet_reps, 1);
        // idempotent and diagonal
        assert_abs_diff_eq!((&p * &p - &p).norm(), 0.0, epsilon = 0.0);
        let k_max = table
            .representatives()
            .iter()
            .map(|r| r.cluster_count())
            .max()
            .unwrap();
        let full = cluster_projection(&table, 0, k_max);
        assert_abs_diff_eq!(
            (&full - RMatrix::identity(full.nrows(), full.ncols())).norm(),
            0.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn ct_bound_small_sector() {
        let params = ModelParams::new(10, 3, 10.0).unwrap();
        let rows = verify_ct_eigenfunction(params, 1, 0.5).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.holds));
        // droplet row: bound at distance 0 is 2⁴/√L, consistent with the
        // droplet mass |⟨δ_x, φ⟩|² ≤ 1/L
        for r in &rows {
            assert_abs_diff_eq!(r.rhs, 16.0 / (10f64).sqrt(), epsilon = 1e-12);
        }
        // slack rhs − lhs shrinks as Δ grows: the droplet amplitude
        // saturates at 1/√L while the bound at distance zero stays 2⁴/√L
        let min_slack = |d: f64| {
            let rows =
                verify_ct_eigenfunction(ModelParams::new(10, 3, d).unwrap(), 1, 0.5).unwrap();
            rows.iter().map(BoundCheck::slack).fold(f64::INFINITY, f64::min)
        };
        let (a, b, c) = (min_slack(5.0), min_slack(10.0), min_slack(50.0));
        assert!(a >= b && b >= c, "slack not shrinking: {a} {b} {c}");
        assert!(c > 0.0);
    }

    #[test]
    fn ct_bound_requires_delta() {
        assert!(verify_ct_eigenfunction(ModelParams::new(10, 3, 2.5).unwrap(), 1, 0.5).is_err());
    }

    #[test]
    fn resolvent_decay_small() {
        let params = ModelParams::new(10, 3, 10.0).unwrap();
        let band = droplet_band_states(params).unwrap();
        let e = band.states[0].energy;
        let rows = verify_resolvent_decay(params, 0, 1, 0.5, e).unwrap();
        assert!(rows.iter().all(|r| r.holds), "{rows:#?}");
        // d̂ = 0 diagonal blocks are bounded by 2/κ by construction
        let decay = rows.iter().find(|r| r.check == "resolvent_block_decay").unwrap();
        assert!(decay.lhs <= decay.rhs + 1e-10);
        // off-band energies are rejected
        assert!(verify_resolvent_decay(params, 0, 1, 0.5, 5.0).is_err());
    }

    #[test]
    fn band_counts_sweep_tiny() {
        let params = ModelParams::new(7, 2, 3.0).unwrap();
        for (g, w, gap) in band_counts(params).unwrap() {
            assert_eq!(w, 1, "fiber {g}");
            assert_eq!(gap, 0, "fiber {g}");
        }
    }

    #[test]
    fn save_band_spectrum_layout() {
        let params = ModelParams::new(6, 2, 5.0).unwrap();
        let band = droplet_band_states(params).unwrap();
        let mut index = Vec::new();
        let mut vectors = Vec::new();
        save_band_spectrum(&band, &mut index, &mut vectors).unwrap();
        let dim = all_configs(6, 2).len();
        assert_eq!(vectors.len(), 6 * dim * 16);
        let lines: Vec<&str> = std::str::from_utf8(&index).unwrap().lines().collect();
        assert_eq!(lines.len(), 6);
        for (g, line) in lines.iter().enumerate() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["gamma"], g as i64);
            assert_eq!(v["vector_ref"]["len"], 2 * dim as i64);
            let offset = v["vector_ref"]["offset"].as_u64().unwrap() as usize;
            assert_eq!(offset, g * dim * 16);
            // first amplitude round-trips through the binary layout
            let re = f64::from_le_bytes(vectors[offset..offset + 8].try_into().unwrap());
            let im = f64::from_le_bytes(vectors[offset + 8..offset + 16].try_into().unwrap());
            let amp = band.states[g].vector[0];
            assert_eq!((re, im), (amp.re, amp.im));
        }
    }
}
