//! The XXZ Hamiltonian: full Fock-space assembly (tiny rings only) and the
//! equivalent N-particle Schrödinger form `-(1/2Δ)A + W` on the sector basis.

use std::io::{self, Write};

use nalgebra::Matrix4;

use crate::config::{Configuration, ModelParams, SectorBasis};
use crate::error::{Error, Result};
use crate::RMatrix;

/// One particle-number sector as a discrete Schrödinger operator: adjacency
/// of the symmetric-product graph plus the cluster-count potential.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub params: ModelParams,
    basis: SectorBasis,
    /// Upper-triangle adjacency pairs (i < j).
    edges: Vec<(usize, usize)>,
    potential: Vec<usize>,
}

/// Build the sector operator for the given parameters. The empty and full
/// sectors come out as the 1×1 zero operator.
pub fn build_sector(params: ModelParams) -> SectorOperator {
    let basis = SectorBasis::new(params.ring, params.particles);
    let potential = basis.configs().iter().map(Configuration::cluster_count).collect();
    let mut edges = Vec::new();
    for (i, x) in basis.configs().iter().enumerate() {
        for y in crate::metric::neighbors(x) {
            let j = basis.index_of(&y).expect("neighbor stays in the sector");
            if i < j {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    SectorOperator {
        params,
        basis,
        edges,
        potential,
    }
}

impl SectorOperator {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn potential(&self) -> &[usize] {
        &self.potential
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Dense adjacency matrix of the symmetric-product graph.
    pub fn adjacency(&self) -> RMatrix {
        let d = self.dimension();
        let mut a = RMatrix::zeros(d, d);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    /// The sector Hamiltonian `-(1/2Δ)A + W`.
    pub fn hamiltonian(&self) -> RMatrix {
        let d = self.dimension();
        let mut h = RMatrix::zeros(d, d);
        let hop = -1.0 / (2.0 * self.params.delta);
        for &(i, j) in &self.edges {
            h[(i, j)] = hop;
            h[(j, i)] = hop;
        }
        for (i, &w) in self.potential.iter().enumerate() {
            h[(i, i)] = w as f64;
        }
        h
    }

    /// Eigenvalues of the sector Hamiltonian, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.hamiltonian().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Write the Hamiltonian in MatrixMarket coordinate format (1-based,
    /// lower triangle of the symmetric matrix).
    pub fn write_matrix_market<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let d = self.dimension();
        let diag = self.potential.iter().filter(|&&v| v != 0).count();
        writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
        writeln!(w, "{} {} {}", d, d, self.edges.len() + diag)?;
        let hop = -1.0 / (2.0 * self.params.delta);
        for i in 0..d {
            if self.potential[i] != 0 {
                writeln!(w, "{} {} {}", i + 1, i + 1, crate::report::fmt_f64(self.potential[i] as f64))?;
            }
            for &(a, b) in &self.edges {
                if b == i {
                    writeln!(w, "{} {} {}", b + 1, a + 1, crate::report::fmt_f64(hop))?;
                }
            }
        }
        Ok(())
    }
}

/// The two-site interaction in the basis {↑↑, ↑↓, ↓↑, ↓↓}: zero on the
/// aligned states, `[[1/2, -1/(2Δ)], [-1/(2Δ), 1/2]]` on the middle block.
pub fn two_site_term(delta: f64) -> Matrix4<f64> {
    let j = -1.0 / (2.0 * delta);
    let mut m = Matrix4::zeros();
    m[(1, 1)] = 0.5;
    m[(2, 2)] = 0.5;
    m[(1, 2)] = j;
    m[(2, 1)] = j;
    m
}

/// Dense Fock-space Hamiltonian, basis indexed by occupation bitmasks.
#[derive(Debug, Clone)]
pub struct FockOperator {
    pub ring: usize,
    pub delta: f64,
    pub matrix: RMatrix,
}

/// Assemble the full 2^L × 2^L Hamiltonian as the sum of two-site terms over
/// ring edges. Rings need L ≥ 3 (the two wrap edges of L = 2 coincide) and
/// the dense guard caps L at 12.
pub fn build_fock(ring: usize, delta: f64) -> Result<FockOperator> {
    if ring < 3 {
        return Err(Error::domain(format!("ring semantics need L ≥ 3, got {ring}")));
    }
    if ring > 12 {
        return Err(Error::domain(format!("dense Fock guard: L ≤ 12, got {ring}")));
    }
    if !(delta > 1.0) {
        return Err(Error::domain(format!("Δ > 1 required, got {delta}")));
    }
    let dim = 1usize << ring;
    let mut h = RMatrix::zeros(dim, dim);
    let hop = -1.0 / (2.0 * delta);
    for j in 0..ring {
        let k = (j + 1) % ring;
        let (bj, bk) = (1usize << j, 1usize << k);
        for b in 0..dim {
            let occ_j = b & bj != 0;
            let occ_k = b & bk != 0;
            if occ_j != occ_k {
                h[(b, b)] += 0.5;
                let flipped = b ^ bj ^ bk;
                h[(b, flipped)] += hop;
            }
        }
    }
    Ok(FockOperator { ring, delta, matrix: h })
}

impl FockOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Restrict to the N-particle block, rows/columns ordered like the
    /// canonical sector basis.
    pub fn restrict_to_sector(&self, particles: usize) -> RMatrix {
        let basis = SectorBasis::new(self.ring, particles);
        let masks: Vec<usize> = basis
            .configs()
            .iter()
            .map(|c| c.sites().iter().fold(0usize, |m, &s| m | (1 << s)))
            .collect();
        let d = masks.len();
        let mut out = RMatrix::zeros(d, d);
        for (i, &mi) in masks.iter().enumerate() {
            for (j, &mj) in masks.iter().enumerate() {
                out[(i, j)] = self.matrix[(mi, mj)];
            }
        }
        out
    }

    /// Matrix of the total-magnetization operator S³ (diagonal).
    pub fn total_sz(&self) -> RMatrix {
        let dim = self.dimension();
        let mut m = RMatrix::zeros(dim, dim);
        for b in 0..dim {
            let down = (b as u64).count_ones() as f64;
            m[(b, b)] = 0.5 * self.ring as f64 - down;
        }
        m
    }

    /// Matrix of the translation operator on the Fock basis,
    /// `(T̃ψ)(x) = ψ(Tx)`.
    pub fn translation(&self) -> RMatrix {
        let dim = self.dimension();
        let mut m = RMatrix::zeros(dim, dim);
        for b in 0..dim {
            let shifted = ((b << 1) | (b >> (self.ring - 1))) & (dim - 1);
            m[(b, shifted)] = 1.0;
        }
        m
    }
}
