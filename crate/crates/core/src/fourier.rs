//! Momentum-space decomposition of a sector.
//!
//! The translation Fourier transform maps the sector space onto a weighted
//! space indexed by (fiber index γ, orbit representative x̂), where a
//! representative is admitted in fiber γ exactly when `γ·n_x̂ ≡ 0 (mod L)`
//! and carries the inner-product weight `n_x̂ / L`. Each fiber reduces the
//! Hamiltonian to a small matrix that is Hermitian with respect to the
//! weighted inner product; a diagonal similarity turns it into an ordinary
//! Hermitian matrix for diagonalization.

use nalgebra::DMatrix;

use crate::config::{ModelParams, OrbitTable, SectorBasis};
use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

fn phase(k: i64, l: usize) -> C64 {
    let ang = 2.0 * std::f64::consts::PI * k as f64 / l as f64;
    C64::new(ang.cos(), ang.sin())
}

/// Whether representative `idx` is admitted in fiber `gamma`.
pub fn admitted(table: &OrbitTable, gamma: usize, idx: usize) -> bool {
    (gamma * table.orbit_size(idx)) % table.ring() == 0
}

/// The members and weights of one fiber.
#[derive(Debug, Clone)]
pub struct FiberBasis {
    pub gamma: usize,
    /// Indices into the orbit table's representative list, ascending.
    pub members: Vec<usize>,
    /// Inner-product weights `n_x̂ / L`, parallel to `members`.
    pub weights: Vec<f64>,
}

/// Build the basis of fiber `gamma`.
pub fn fiber_basis(table: &OrbitTable, gamma: usize) -> FiberBasis {
    let l = table.ring();
    let members: Vec<usize> = (0..table.rep_count())
        .filter(|&i| admitted(table, gamma, i))
        .collect();
    let weights = members
        .iter()
        .map(|&i| table.orbit_size(i) as f64 / l as f64)
        .collect();
    FiberBasis {
        gamma,
        members,
        weights,
    }
}

/// A vector of the weighted momentum space, stored per fiber over the
/// admitted representatives only.
#[derive(Debug, Clone)]
pub struct FiberVector {
    pub per_fiber: Vec<CVector>,
}

impl FiberVector {
    /// Zero vector for the given orbit table.
    pub fn zeros(table: &OrbitTable) -> Self {
        let per_fiber = (0..table.ring())
            .map(|g| CVector::zeros(fiber_basis(table, g).members.len()))
            .collect();
        FiberVector { per_fiber }
    }

    /// Build from a dense (γ × representative) grid, rejecting support on
    /// non-admitted pairs.
    pub fn from_dense(table: &OrbitTable, grid: &CMatrix) -> Result<Self> {
        let l = table.ring();
        if grid.nrows() != l || grid.ncols() != table.rep_count() {
            return Err(Error::domain("grid shape mismatch".to_string()));
        }
        let mut per_fiber = Vec::with_capacity(l);
        for g in 0..l {
            let basis = fiber_basis(table, g);
            for idx in 0..table.rep_count() {
                if !admitted(table, g, idx) && grid[(g, idx)].norm() != 0.0 {
                    return Err(Error::domain(format!(
                        "support violation at (γ={g}, representative {idx})"
                    )));
                }
            }
            per_fiber.push(CVector::from_iterator(
                basis.members.len(),
                basis.members.iter().map(|&idx| grid[(g, idx)]),
            ));
        }
        Ok(FiberVector { per_fiber })
    }

    /// Weighted inner product `Σ_γ Σ_x̂ (n_x̂/L) conj(a) b`.
    pub fn weighted_dot(&self, other: &FiberVector, table: &OrbitTable) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for g in 0..self.per_fiber.len() {
            let basis = fiber_basis(table, g);
            for (k, &w) in basis.weights.iter().enumerate() {
                acc += self.per_fiber[g][k].conj() * other.per_fiber[g][k] * C64::new(w, 0.0);
            }
        }
        acc
    }

    /// Norm in the weighted inner product.
    pub fn s_norm(&self, table: &OrbitTable) -> f64 {
        self.weighted_dot(self, table).re.sqrt()
    }
}

/// Forward transform: `(Fψ)(γ, x̂) = L^{-1/2} Σ_z e^{-2πiγz/L} ψ(T^z x̂)`.
pub fn fourier_forward(table: &OrbitTable, basis: &SectorBasis, psi: &CVector) -> FiberVector {
    let l = table.ring();
    let scale = 1.0 / (l as f64).sqrt();
    let mut out = Vec::with_capacity(l);
    for g in 0..l {
        let fb = fiber_basis(table, g);
        let mut v = CVector::zeros(fb.members.len());
        for (k, &idx) in fb.members.iter().enumerate() {
            let rep = table.representative(idx);
            let mut acc = C64::new(0.0, 0.0);
            for z in 0..l {
                let x = rep.translate(z as i64);
                let i = basis.index_of(&x).expect("orbit stays in the sector");
                acc += phase(-((g * z) as i64), l) * psi[i];
            }
            v[k] = acc * C64::new(scale, 0.0);
        }
        out.push(v);
    }
    FiberVector { per_fiber: out }
}

/// Adjoint transform: `(F*φ)(T^z x̂) = L^{-1/2} Σ_γ e^{2πiγz/L} φ(γ, x̂)`.
pub fn fourier_adjoint(table: &OrbitTable, basis: &SectorBasis, phi: &FiberVector) -> CVector {
    let l = table.ring();
    let scale = 1.0 / (l as f64).sqrt();
    let mut psi = CVector::zeros(basis.len());
    for g in 0..l {
        let fb = fiber_basis(table, g);
        for (k, &idx) in fb.members.iter().enumerate() {
            let value = phi.per_fiber[g][k];
            if value.norm() == 0.0 {
                continue;
            }
            let rep = table.representative(idx);
            for z in 0..table.orbit_size(idx) {
                let x = rep.translate(z as i64);
                let i = basis.index_of(&x).expect("orbit stays in the sector");
                psi[i] += phase((g * z) as i64, l) * value * C64::new(scale, 0.0);
            }
        }
    }
    psi
}

/// Matrix elements `a_γ(x̂, ŷ) = Σ_{z < n_ŷ, T^z ŷ ~ x̂} e^{2πiγz/L}` over
/// all representative pairs.
pub fn fiber_matrix_elements(table: &OrbitTable, gamma: usize) -> CMatrix {
    let l = table.ring();
    let m = table.rep_count();
    let mut a = CMatrix::zeros(m, m);
    for col in 0..m {
        let rep_y = table.representative(col);
        for z in 0..table.orbit_size(col) {
            let shifted = rep_y.translate(z as i64);
            for row in 0..m {
                if shifted.is_adjacent(table.representative(row)) {
                    a[(row, col)] += phase((gamma * z) as i64, l);
                }
            }
        }
    }
    a
}

/// One momentum fiber of the sector Hamiltonian.
#[derive(Debug, Clone)]
pub struct FiberOperator {
    pub params: ModelParams,
    pub basis: FiberBasis,
    /// Hopping matrix restricted to the admitted representatives.
    pub a_matrix: CMatrix,
    /// Cluster counts of the admitted representatives.
    pub potential: Vec<f64>,
}

/// Assemble fiber `gamma` of the sector Hamiltonian.
pub fn fiber_operator(params: ModelParams, table: &OrbitTable, gamma: usize) -> Result<FiberOperator> {
    if table.ring() != params.ring || table.particles() != params.particles {
        return Err(Error::domain("orbit table does not match the parameters".to_string()));
    }
    if gamma >= params.ring {
        return Err(Error::domain(format!("fiber index {gamma} outside 0..{}", params.ring)));
    }
    let basis = fiber_basis(table, gamma);
    let full = fiber_matrix_elements(table, gamma);
    let m = basis.members.len();
    let mut a = CMatrix::zeros(m, m);
    for (r, &i) in basis.members.iter().enumerate() {
        for (c, &j) in basis.members.iter().enumerate() {
            a[(r, c)] = full[(i, j)];
        }
    }
    let potential = basis
        .members
        .iter()
        .map(|&i| table.representative(i).cluster_count() as f64)
        .collect();
    Ok(FiberOperator {
        params,
        basis,
        a_matrix: a,
        potential,
    })
}

impl FiberOperator {
    pub fn dimension(&self) -> usize {
        self.basis.members.len()
    }

    /// The fiber Hamiltonian `-(1/2Δ) â_γ + Ŵ` in the weighted space.
    pub fn weighted_matrix(&self) -> CMatrix {
        let m = self.dimension();
        let hop = C64::new(-1.0 / (2.0 * self.params.delta), 0.0);
        let mut h = self.a_matrix.clone() * hop;
        for i in 0..m {
            h[(i, i)] += C64::new(self.potential[i], 0.0);
        }
        h
    }

    /// The similarity `D^{1/2} Ĥ D^{-1/2}` (D = diag of weights) that turns
    /// the weighted self-adjoint fiber into an ordinary Hermitian matrix.
    pub fn hermitized(&self) -> Result<CMatrix> {
        let h = self.weighted_matrix();
        let m = self.dimension();
        let mut out = CMatrix::zeros(m, m);
        for r in 0..m {
            for c in 0..m {
                let scale = (self.basis.weights[r] / self.basis.weights[c]).sqrt();
                out[(r, c)] = h[(r, c)] * C64::new(scale, 0.0);
            }
        }
        let herm_defect = (0..m)
            .flat_map(|r| (0..m).map(move |c| (r, c)))
            .map(|(r, c)| (out[(r, c)] - out[(c, r)].conj()).norm())
            .fold(0.0f64, f64::max);
        if herm_defect > 1e-12 {
            return Err(Error::Numerical(format!(
                "fiber {} lost hermiticity: defect {herm_defect:.3e}",
                self.basis.gamma
            )));
        }
        Ok(out)
    }

    /// Polish one eigenpair (fiber coordinates, weighted-normalized) by
    /// inverse iteration on the hermitized matrix.
    pub fn refine(&self, energy: &mut f64, vector: &mut CVector) -> Result<()> {
        let herm = self.hermitized()?;
        let m = self.dimension();
        let mut u = CVector::from_iterator(
            m,
            vector
                .iter()
                .zip(&self.basis.weights)
                .map(|(&c, &w)| c * C64::new(w.sqrt(), 0.0)),
        );
        refine_hermitian_eigenpair(&herm, energy, &mut u);
        for r in 0..m {
            vector[r] = u[r] / C64::new(self.basis.weights[r].sqrt(), 0.0);
        }
        Ok(())
    }

    /// Eigen-decomposition: energies ascending, eigenvectors expressed in
    /// fiber coordinates and normalized in the weighted norm.
    pub fn eigen(&self) -> Result<FiberEigen> {
        let m = self.dimension();
        if m == 0 {
            return Ok(FiberEigen {
                gamma: self.basis.gamma,
                energies: Vec::new(),
                vectors: Vec::new(),
            });
        }
        let herm = self.hermitized()?;
        let eig = herm.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
        let mut energies = Vec::with_capacity(m);
        let mut vectors = Vec::with_capacity(m);
        for &i in &order {
            energies.push(eig.eigenvalues[i]);
            // map back through D^{-1/2}: unit weighted norm comes for free
            let mut v = CVector::zeros(m);
            for r in 0..m {
                v[r] = eig.eigenvectors[(r, i)] / C64::new(self.basis.weights[r].sqrt(), 0.0);
            }
            vectors.push(v);
        }
        Ok(FiberEigen {
            gamma: self.basis.gamma,
            energies,
            vectors,
        })
    }
}

/// Eigenpairs of one fiber.
#[derive(Debug, Clone)]
pub struct FiberEigen {
    pub gamma: usize,
    pub energies: Vec<f64>,
    /// Fiber-coordinate eigenvectors, unit weighted norm.
    pub vectors: Vec<CVector>,
}

/// Per-fiber spectra plus the multiset comparison with the sector spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumUnion {
    pub fibers: Vec<(usize, Vec<f64>)>,
    pub sector: Vec<f64>,
    /// Max elementwise gap between the sorted fiber union and the sorted
    /// sector spectrum.
    pub max_residual: f64,
}

impl SpectrumUnion {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Diagonalize every fiber and the full sector operator, and compare the
/// union of fiber spectra (with multiplicity) against the sector spectrum.
pub fn spectrum_union_check(params: ModelParams) -> Result<SpectrumUnion> {
    let table = crate::config::orbit_table(params.ring, params.particles)?;
    let mut fibers = Vec::with_capacity(params.ring);
    let mut union = Vec::new();
    for g in 0..params.ring {
        let op = fiber_operator(params, &table, g)?;
        let eig = op.eigen()?;
        union.extend_from_slice(&eig.energies);
        fibers.push((g, eig.energies));
    }
    union.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sector = crate::operator::build_sector(params).eigenvalues();
    let max_residual = if union.len() == sector.len() {
        union
            .iter()
            .zip(&sector)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(SpectrumUnion {
        fibers,
        sector,
        max_residual,
    })
}

/// Apply the sector Hamiltonian through the transform: `F H F*` as a matrix
/// on the concatenated fiber coordinates (γ ascending, members ascending).
/// Test hook for the block-diagonality of the conjugated operator.
pub fn conjugated_hamiltonian(params: ModelParams, table: &OrbitTable) -> Result<CMatrix> {
    let basis = SectorBasis::new(params.ring, params.particles);
    let h = crate::operator::build_sector(params).hamiltonian();
    let l = params.ring;
    let sizes: Vec<usize> = (0..l).map(|g| fiber_basis(table, g).members.len()).collect();
    let total: usize = sizes.iter().sum();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut out = CMatrix::zeros(total, total);
    for g in 0..l {
        let fb = fiber_basis(table, g);
        for (k, _) in fb.members.iter().enumerate() {
            // unit fiber basis vector -> sector space -> H -> back
            let mut unit = FiberVector::zeros(table);
            unit.per_fiber[g][k] = C64::new(1.0, 0.0);
            let psi = fourier_adjoint(table, &basis, &unit);
            let hpsi_re = &h * psi.map(|c| c.re);
            let hpsi_im = &h * psi.map(|c| c.im);
            let hpsi = CVector::from_iterator(
                basis.len(),
                hpsi_re.iter().zip(hpsi_im.iter()).map(|(&r, &i)| C64::new(r, i)),
            );
            let image = fourier_forward(table, &basis, &hpsi);
            for g2 in 0..l {
                for (k2, _) in image.per_fiber[g2].iter().enumerate() {
                    out[(offsets[g2] + k2, offsets[g] + k)] = image.per_fiber[g2][k2];
                }
            }
        }
    }
    Ok(out)
}

/// Deterministic complex vector ensemble for randomized checks.
pub fn random_state(dim: usize, rng: &mut impl rand::Rng) -> CVector {
    let mut v = CVector::from_fn(dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let n = v.norm();
    if n > 0.0 {
        v /= C64::new(n, 0.0);
    }
    v
}

/// Helper for tests and the CLI: the DMatrix `H` applied to a complex vector.
pub fn apply_real(h: &DMatrix<f64>, v: &CVector) -> CVector {
    let re = h * v.map(|c| c.re);
    let im = h * v.map(|c| c.im);
    CVector::from_iterator(
        v.len(),
        re.iter().zip(im.iter()).map(|(&r, &i)| C64::new(r, i)),
    )
}

/// Sorted eigenvalues of a complex Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Polish one Hermitian eigenpair by shifted inverse iteration with
/// Rayleigh-quotient updates; drives the residual to near machine precision
/// for well-separated eigenvalues.
pub fn refine_hermitian_eigenpair(m: &CMatrix, energy: &mut f64, v: &mut CVector) {
    let dim = m.nrows();
    for _ in 0..3 {
        let residual = (m * &*v - &*v * C64::new(*energy, 0.0)).norm();
        if residual <= 1e-14 * (1.0 + energy.abs()) {
            break;
        }
        let mut shifted = m.clone();
        for i in 0..dim {
            shifted[(i, i)] -= C64::new(*energy, 0.0);
        }
        match shifted.lu().solve(&*v) {
            Some(w) => {
                let n = w.norm();
                if !n.is_finite() || n == 0.0 {
                    break;
                }
                *v = w / C64::new(n, 0.0);
            }
            None => break,
        }
        let mv = m * &*v;
        *energy = v.dotc(&mv).re;
    }
}

/// Weighted self-adjointness defect of the full matrix-element table:
/// max |w_x a(x̂,ŷ) − w_y conj(a(ŷ,x̂))|.
pub fn self_adjointness_defect(table: &OrbitTable, gamma: usize) -> f64 {
    let a = fiber_matrix_elements(table, gamma);
    let l = table.ring() as f64;
    let m = table.rep_count();
    let mut worst = 0.0f64;
    for r in 0..m {
        for c in 0..m {
            let wr = table.orbit_size(r) as f64 / l;
            let wc = table.orbit_size(c) as f64 / l;
            let defect = (a[(r, c)] * C64::new(wr, 0.0) - a[(c, r)].conj() * C64::new(wc, 0.0)).norm();
            worst = worst.max(defect);
        }
    }
    worst
}

/// Sorted eigenvalues of `Ŵ^{-1/2} Â_γ Ŵ^{-1/2}` on a fiber (cluster counts
/// are strictly positive on nontrivial sectors).
pub fn fiber_relative_bound_spectrum(op: &FiberOperator) -> Result<Vec<f64>> {
    let m = op.dimension();
    let mut scaled = CMatrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            let wr = op.potential[r];
            let wc = op.potential[c];
            if wr <= 0.0 || wc <= 0.0 {
                return Err(Error::domain("potential vanishes on this sector".to_string()));
            }
            scaled[(r, c)] = op.a_matrix[(r, c)] / C64::new((wr * wc).sqrt(), 0.0);
        }
    }
    // hermitize in the weighted sense before reading eigenvalues
    let mut herm = CMatrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            let scale = (op.basis.weights[r] / op.basis.weights[c]).sqrt();
            herm[(r, c)] = scaled[(r, c)] * C64::new(scale, 0.0);
        }
    }
    Ok(hermitian_eigenvalues(&herm))
}
