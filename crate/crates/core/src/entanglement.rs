//! Particle-number-resolved partial traces, von Neumann entropies, and the
//! closed-form reduced states of the Ising limit.
//!
//! Fixed-N pure states have block-diagonal reduced states: one Hermitian
//! PSD block per interior particle count `n`, with entries
//! `⟨δ_y, ρⁿ δ_{y'}⟩ = Σ_z ψ(y∪z) conj(ψ(y'∪z))` over the exterior
//! configurations `z`.

use crate::config::{configs_in_sites, Configuration, Interval, ModelParams, SectorBasis};
use crate::error::{Error, Result};
use crate::report::fmt_f64;
use crate::spectral::droplet_band_states;
use crate::{C64, CMatrix, CVector};

/// One particle-number block of a reduced density matrix on a window.
#[derive(Debug, Clone)]
pub struct DensityBlock {
    /// Number of particles inside the window.
    pub particles: usize,
    /// Window configurations labeling the block, lexicographic.
    pub basis: Vec<Configuration>,
    pub matrix: CMatrix,
}

impl DensityBlock {
    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Eigenvalues ascending; entries in `[-1e-9, 0)` clamp to zero and
    /// anything lower signals numerical failure.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut ev = crate::fourier::hermitian_eigenvalues(&self.matrix);
        for v in ev.iter_mut() {
            if *v < -1e-9 {
                return Err(Error::Numerical(format!(
                    "density block eigenvalue {v:.3e} below -1e-9"
                )));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(ev)
    }

    /// Block contribution `Σ s(λ)` with `s(t) = -t ln t`.
    pub fn entropy(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|&v| entropy_term(v)).sum())
    }
}

fn entropy_term(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

/// Partial trace of a pure sector state over the complement of `window`,
/// as a direct sum of particle-number blocks. Rejects non-normalized input
/// (tolerance 1e-9).
pub fn partial_trace(
    psi: &CVector,
    basis: &SectorBasis,
    window: Interval,
) -> Result<Vec<DensityBlock>> {
    if psi.len() != basis.len() {
        return Err(Error::domain("state length does not match the sector basis".to_string()));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    blocks_from(basis, window, |i, j| psi[i] * psi[j].conj())
}

/// Partial trace of a density matrix given on the sector basis.
pub fn partial_trace_density(
    rho: &CMatrix,
    basis: &SectorBasis,
    window: Interval,
) -> Result<Vec<DensityBlock>> {
    if rho.nrows() != basis.len() || rho.ncols() != basis.len() {
        return Err(Error::domain("density shape does not match the sector basis".to_string()));
    }
    blocks_from(basis, window, |i, j| rho[(i, j)])
}

fn blocks_from(
    basis: &SectorBasis,
    window: Interval,
    entry: impl Fn(usize, usize) -> C64,
) -> Result<Vec<DensityBlock>> {
    if window.ring != basis.ring() {
        return Err(Error::domain("window ring mismatch".to_string()));
    }
    let total = basis.particles();
    let window_sites: Vec<usize> = window.sites().collect();
    let outside_sites = window.complement_sites();
    let max_inside = total.min(window.len());
    let mut blocks = Vec::with_capacity(max_inside + 1);
    for n in 0..=max_inside {
        let ys = configs_in_sites(&window_sites, n, basis.ring());
        let zs = configs_in_sites(&outside_sites, total - n, basis.ring());
        let dim = ys.len();
        // sector index of y ∪ z for every (y, z) pair
        let idx: Vec<Vec<usize>> = ys
            .iter()
            .map(|y| {
                zs.iter()
                    .map(|z| {
                        basis
                            .index_of(&y.union(z).expect("window and complement are disjoint"))
                            .expect("union stays in the sector")
                    })
                    .collect()
            })
            .collect();
        let mut m = CMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..=r {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..zs.len() {
                    acc += entry(idx[r][k], idx[c][k]);
                }
                m[(r, c)] = acc;
                m[(c, r)] = acc.conj();
            }
        }
        blocks.push(DensityBlock {
            particles: n,
            basis: ys,
            matrix: m,
        });
    }
    Ok(blocks)
}

/// Total von Neumann entropy `Σ_n Σ_λ s(λ)` of a block decomposition.
pub fn entropy(blocks: &[DensityBlock]) -> Result<f64> {
    let mut acc = 0.0;
    for b in blocks {
        acc += b.entropy()?;
    }
    Ok(acc)
}

/// The Ising-limit band state at fiber `gamma`: the rank-one projector onto
/// the plane wave over the droplet orbit,
/// `ρ_γ = (1/L) Σ_{ζ,ξ} e^{2πi(ζ-ξ)γ/L} |δ_{T^ζ x̂₀}⟩⟨δ_{T^ξ x̂₀}|`.
pub fn ising_limit_state(
    ring: usize,
    particles: usize,
    gamma: usize,
    basis: &SectorBasis,
) -> Result<CMatrix> {
    if particles == 0 || particles >= ring {
        return Err(Error::domain("need 0 < N < L".to_string()));
    }
    if basis.ring() != ring || basis.particles() != particles {
        return Err(Error::domain("basis mismatch".to_string()));
    }
    let rep = crate::config::droplet_centered(ring, (particles - 1) / 2, particles)?;
    debug_assert_eq!(rep.sites()[0], 0);
    let d = basis.len();
    let mut rho = CMatrix::zeros(d, d);
    let scale = 1.0 / ring as f64;
    for zeta in 0..ring {
        let i = basis.index_of(&rep.translate(zeta as i64)).expect("droplet in sector");
        for xi in 0..ring {
            let j = basis.index_of(&rep.translate(xi as i64)).expect("droplet in sector");
            let ang = 2.0 * std::f64::consts::PI * (zeta as f64 - xi as f64) * gamma as f64
                / ring as f64;
            rho[(i, j)] = C64::new(ang.cos() * scale, ang.sin() * scale);
        }
    }
    Ok(rho)
}

/// Closed-form blocks of the Ising-limit reduced state on a window with
/// `N < span < L/2`: the middle blocks are
/// `(1/L)(|δ_{y₊ⁿ}⟩⟨δ_{y₊ⁿ}| + |δ_{y₋ⁿ}⟩⟨δ_{y₋ⁿ}|)`; the boundary blocks
/// collect the droplets that fit entirely outside or inside.
pub fn ising_limit_blocks(
    ring: usize,
    particles: usize,
    window: Interval,
    gamma: usize,
) -> Result<Vec<DensityBlock>> {
    if window.ring != ring {
        return Err(Error::domain("window ring mismatch".to_string()));
    }
    let span = window.span();
    if !(span > particles && 2 * span < ring) {
        return Err(Error::domain(format!(
            "window hypothesis λ₊-λ₋ ∈ (N, L/2) violated: span={span}, N={particles}, L={ring}"
        )));
    }
    let window_sites: Vec<usize> = window.sites().collect();
    let scale = 1.0 / ring as f64;
    let mut blocks = Vec::with_capacity(particles + 1);
    for n in 0..=particles {
        let ys = configs_in_sites(&window_sites, n, ring);
        let dim = ys.len();
        let mut m = CMatrix::zeros(dim, dim);
        if n == 0 {
            // droplets entirely outside: the complement is a cyclic interval
            // of length L - |Λ| ≥ N, holding L - |Λ| - N + 1 droplets
            let fit = ring - window.len() - particles + 1;
            m[(0, 0)] = C64::new(fit as f64 * scale, 0.0);
        } else if n == particles {
            // droplets entirely inside: rank-one plane-wave block
            let starts: Vec<usize> = (window.lo..=window.hi + 1 - particles).collect();
            for &s1 in &starts {
                let c1 = Configuration::new((s1..s1 + particles).collect(), ring)?;
                let r = ys.binary_search(&c1).expect("droplet inside the window");
                for &s2 in &starts {
                    let c2 = Configuration::new((s2..s2 + particles).collect(), ring)?;
                    let c = ys.binary_search(&c2).expect("droplet inside the window");
                    let ang = 2.0 * std::f64::consts::PI * (s1 as f64 - s2 as f64)
                        * gamma as f64
                        / ring as f64;
                    m[(r, c)] = C64::new(ang.cos() * scale, ang.sin() * scale);
                }
            }
        } else {
            let fam = crate::config::boundary_configs(window, n, particles)?;
            let ip = ys.binary_search(&fam.y_plus).expect("packed state in the block basis");
            let im = ys.binary_search(&fam.y_minus).expect("packed state in the block basis");
            m[(ip, ip)] = C64::new(scale, 0.0);
            m[(im, im)] = C64::new(scale, 0.0);
        }
        blocks.push(DensityBlock {
            particles: n,
            basis: ys,
            matrix: m,
        });
    }
    Ok(blocks)
}

/// One row of an entropy scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub ring: usize,
    pub particles: usize,
    pub gamma: usize,
    pub energy: f64,
    pub entropy: f64,
    pub entropy_over_ln: f64,
    /// Ising-limit reference `2(N-1)/L` for `S / ln L`.
    pub ising_reference: f64,
}

impl ScanRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.ring,
            self.particles,
            self.gamma,
            fmt_f64(self.energy),
            fmt_f64(self.entropy),
            fmt_f64(self.entropy_over_ln),
            fmt_f64(self.ising_reference)
        )
    }

    pub fn to_json_row(&self) -> String {
        format!(
            "{{\"L\":{},\"N\":{},\"gamma\":{},\"energy\":{},\"entropy\":{},\"entropy_over_lnL\":{},\"ising_reference\":{}}}",
            self.ring,
            self.particles,
            self.gamma,
            fmt_f64(self.energy),
            fmt_f64(self.entropy),
            fmt_f64(self.entropy_over_ln),
            fmt_f64(self.ising_reference)
        )
    }
}

pub const SCAN_CSV_HEADER: &str = "L,N,gamma,energy,entropy,entropy_over_lnL,ising_reference";

/// Result of an entropy scan over ring sizes.
#[derive(Debug, Clone)]
pub struct EntropyScan {
    /// The asymptotic comparison value ε/2 (absent for explicit-N scans).
    pub epsilon_half: Option<f64>,
    pub rows: Vec<ScanRow>,
    /// Ring sizes skipped with the reason.
    pub skipped: Vec<(usize, String)>,
}

/// Entanglement entropy of every droplet-band state on the centered window
/// `S_{L,M}(θ)`, with `N = ⌊εL⌋`. Rings where `⌊εL⌋ < 2` are skipped and
/// reported.
pub fn entropy_scan(epsilon: f64, theta: f64, delta: f64, rings: &[usize]) -> Result<EntropyScan> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 16.0) {
        return Err(Error::domain(format!("ε must lie in (0, 1/16), got {epsilon}")));
    }
    if !(theta > epsilon && theta <= 1.0 / 16.0) {
        return Err(Error::domain(format!("θ must lie in (ε, 1/16], got {theta}")));
    }
    let mut scan = scan_impl(theta, delta, rings, |l| (epsilon * l as f64).floor() as usize)?;
    scan.epsilon_half = Some(epsilon / 2.0);
    Ok(scan)
}

/// Entropy scan at an explicitly chosen particle number, for desk-scale
/// rings where `⌊εL⌋ < 2` makes the ε-driven scan empty.
pub fn entropy_scan_explicit(
    particles: usize,
    theta: f64,
    delta: f64,
    rings: &[usize],
) -> Result<EntropyScan> {
    if !(theta > 0.0 && theta < 0.25) {
        return Err(Error::domain(format!("θ must lie in (0, 1/4), got {theta}")));
    }
    scan_impl(theta, delta, rings, |_| particles)
}

fn scan_impl(
    theta: f64,
    delta: f64,
    rings: &[usize],
    particles_of: impl Fn(usize) -> usize,
) -> Result<EntropyScan> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &l in rings {
        let n = particles_of(l);
        if n < 2 {
            skipped.push((l, format!("N = {n} < 2")));
            continue;
        }
        if n + 1 >= l {
            skipped.push((l, format!("N = {n} too large for L = {l}")));
            continue;
        }
        let window = match crate::config::centered_window(l, theta) {
            Ok(w) => w,
            Err(e) => {
                skipped.push((l, e.to_string()));
                continue;
            }
        };
        let params = ModelParams::new(l, n, delta)?;
        let basis = SectorBasis::new(l, n);
        let band = droplet_band_states(params)?;
        let reference = 2.0 * (n as f64 - 1.0) / l as f64;
        for st in &band.states {
            let blocks = partial_trace(&st.vector, &basis, window)?;
            let s = entropy(&blocks)?;
            rows.push(ScanRow {
                ring: l,
                particles: n,
                gamma: st.gamma,
                energy: st.energy,
                entropy: s,
                entropy_over_ln: s / (l as f64).ln(),
                ising_reference: reference,
            });
        }
    }
    Ok(EntropyScan {
        epsilon_half: None,
        rows,
        skipped,
    })
}
