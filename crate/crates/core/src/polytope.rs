//! Rod constants, edge normals and the moment polytope.
//!
//! Edge `i` of the rod is the axis segment where `f` has slope `f'_i`. On it
//! `F(0, z)` is a constant `F_i` and the Killing field
//! `α_i f'_i (∂_{x₃} + F_i ∂_t)` (or `(2/k) α_i f_i² ∂_t` on a flat edge)
//! closes off with period `2π`. The moment image of the axis is a convex
//! polygon with one vertex per kink plus the two ends of the edge at
//! infinity.

use serde::Serialize;

use crate::delzant::{delzant_check, DelzantReport, DELZANT_TOL};
use crate::error::{Error, Result};
use crate::plf::RodFunction;

/// Residual allowed between the two evaluations of an interior vertex.
pub const VERTEX_TOL: f64 = 1e-9;

/// A rod function together with its cone angles and derived edge data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RodStructure {
    pub f: RodFunction,
    /// `α_0 .. α_r`, cone angle over `2π` for each edge.
    pub angles: Vec<f64>,
    /// `F_i` per edge; `None` on the flat edge, where it is not defined.
    pub rod_constants: Vec<Option<f64>>,
    pub k: f64,
    /// `v_0 .. v_r` as `(∂_{x₃}, ∂_t)` components, weighted by the angles.
    pub normals: Vec<[f64; 2]>,
}

impl RodStructure {
    pub fn new(f: RodFunction, angles: Vec<f64>) -> Result<Self> {
        let expected = f.rank() + 1;
        if angles.len() != expected {
            return Err(Error::AngleCount { count: angles.len(), expected });
        }
        for (index, &angle) in angles.iter().enumerate() {
            if !(angle > 0.0 && angle.is_finite()) {
                return Err(Error::NonPositiveAngle { index, angle });
            }
        }
        let rod_constants = rod_constants(&f);
        let normals = edge_normals(&f, &angles);
        let k = f.scale();
        Ok(RodStructure { f, angles, rod_constants, k, normals })
    }

    /// All angles equal to one.
    pub fn unit(f: RodFunction) -> Self {
        let angles = vec![1.0; f.rank() + 1];
        Self::new(f, angles).expect("unit angles are valid")
    }

    pub fn rank(&self) -> usize {
        self.f.rank()
    }

    pub fn has_unit_angles(&self) -> bool {
        self.angles.iter().all(|&a| (a - 1.0).abs() <= 1e-12)
    }

    /// Delzant test on the weighted normals; `smooth` additionally needs unit angles.
    pub fn delzant(&self, tol: f64) -> DelzantReport {
        let mut rep = delzant_check(&self.normals, tol);
        rep.smooth = rep.lattice_ok && self.has_unit_angles();
        rep
    }

    pub fn polytope(&self) -> Result<PolytopeData> {
        let mut data = lattice_coords(self)?;
        data.delzant = Some(self.delzant(DELZANT_TOL));
        Ok(data)
    }
}

/// `F_i` for every edge, normalized by `F_0 = 0`.
pub fn rod_constants(f: &RodFunction) -> Vec<Option<f64>> {
    let k = f.scale();
    let slopes = f.slopes();
    let values = f.kink_values();
    let z = f.positions();
    let mut out: Vec<Option<f64>> = vec![Some(0.0)];
    for i in 1..slopes.len() {
        if f.is_flat(i) {
            out.push(None);
            continue;
        }
        let fi = values[i - 1];
        let next = if f.is_flat(i - 1) {
            // across the flat edge i-1, bounded by kinks i-1 and i
            let prev = out[i - 2].expect("slopes are strictly increasing, so flat edges are isolated");
            let gap = z[i - 1] - z[i - 2];
            prev + 2.0 / k * (fi * fi * (1.0 / slopes[i] - 1.0 / slopes[i - 2]) - 2.0 * gap * fi)
        } else {
            let prev = out[i - 1].expect("previous edge has nonzero slope");
            prev + 2.0 / k * fi * fi * (1.0 / slopes[i] - 1.0 / slopes[i - 1])
        };
        out.push(Some(next));
    }
    out
}

/// Angle-weighted normals `v_i` in `(∂_{x₃}, ∂_t)` components.
pub fn edge_normals(f: &RodFunction, angles: &[f64]) -> Vec<[f64; 2]> {
    let k = f.scale();
    let values = f.kink_values();
    rod_constants(f)
        .iter()
        .enumerate()
        .map(|(i, fc)| {
            let alpha = angles[i];
            match fc {
                Some(fi) => {
                    let s = alpha * f.slope(i);
                    [s, s * fi]
                }
                None => {
                    let v = values[i - 1];
                    [0.0, 2.0 / k * alpha * v * v]
                }
            }
        })
        .collect()
}

/// Moment polygon in canonical `(x₁, μ)` and, optionally, lattice coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolytopeData {
    /// `(x₁, μ)` from `(0, -1)` through the kinks to `(0, 1)`.
    pub vertices_canonical: Vec<[f64; 2]>,
    /// Disagreement between the two edges meeting at each vertex.
    pub vertex_residuals: Vec<f64>,
    pub vertices_lattice: Option<Vec<[f64; 2]>>,
    /// Rows are the basis normals `α₁v₁` and `-α₀v₀`.
    pub basis: Option<[[f64; 2]; 2]>,
    pub delzant: Option<DelzantReport>,
}

/// `μ` at `(x₁ = 1/f(z))` on edge `i`, evaluated at kink value `fz`, position `z`.
fn edge_mu(f: &RodFunction, fi: f64, slope: f64, fz: f64, z: f64, shift: f64) -> f64 {
    -fi / fz + 2.0 / f.scale() * (fz / slope - z) + shift
}

pub fn polytope_vertices(f: &RodFunction) -> Result<PolytopeData> {
    let fc = rod_constants(f);
    let values = f.kink_values();
    let z = f.positions();
    let shift = f.first_moment() / f.base();
    let mut vertices = vec![[0.0, -1.0]];
    let mut residuals = vec![0.0];
    for j in 0..f.rank() {
        let fz = values[j];
        let mut mus = Vec::with_capacity(2);
        for edge in [j, j + 1] {
            if let Some(fi) = fc[edge] {
                mus.push(edge_mu(f, fi, f.slope(edge), fz, z[j], shift));
            }
        }
        let residual = if mus.len() == 2 { (mus[0] - mus[1]).abs() } else { 0.0 };
        if residual > VERTEX_TOL * mus[0].abs().max(1.0) {
            return Err(Error::InconsistentVertex { index: j + 1, residual });
        }
        vertices.push([1.0 / fz, mus[0]]);
        residuals.push(residual);
    }
    vertices.push([0.0, 1.0]);
    residuals.push(0.0);
    Ok(PolytopeData {
        vertices_canonical: vertices,
        vertex_residuals: residuals,
        vertices_lattice: None,
        basis: None,
        delzant: None,
    })
}

/// `⟨v, (μ, x₁)⟩ = v_{x₃} μ + v_t x₁`.
pub fn pair(v: [f64; 2], x1_mu: [f64; 2]) -> f64 {
    v[0] * x1_mu[1] + v[1] * x1_mu[0]
}

/// Vertices in the basis `(α₁v₁, -α₀v₀)`.
pub fn lattice_coords(rod: &RodStructure) -> Result<PolytopeData> {
    let v0 = rod.normals[0];
    let v1 = rod.normals[1];
    lattice_coords_in(rod, [v1, [-v0[0], -v0[1]]])
}

pub fn lattice_coords_in(rod: &RodStructure, basis: [[f64; 2]; 2]) -> Result<PolytopeData> {
    let det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
    let scale = basis.iter().map(|b| b[0].hypot(b[1])).fold(0.0, f64::max);
    if !(det.abs() > 1e-12 * scale * scale) {
        return Err(Error::DegenerateBasis { det });
    }
    let mut data = polytope_vertices(&rod.f)?;
    data.vertices_lattice =
        Some(data.vertices_canonical.iter().map(|&m| [pair(basis[0], m), pair(basis[1], m)]).collect());
    data.basis = Some(basis);
    Ok(data)
}
