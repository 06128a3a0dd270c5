//! Floating-point geometry of generalized Cartan–Hartogs domains over factors of
//! types I–IV: generic norms, membership, the potential, the ε-function, the
//! weighted Bergman kernel on the diagonal and the Monge–Ampère determinant,
//! together with a finite-difference complex Hessian used as an oracle.
//!
//! Each base factor is a complex matrix block: `m × n` for type I (balls are
//! `1 × n`), skew-symmetric `n × n` for type II, symmetric `n × n` for type III and
//! `1 × n` for type IV. The independent coordinates of a block are all entries
//! (type I and IV), the strict upper triangle (type II) or the upper triangle with
//! its diagonal (type III), read row by row.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{DomainFamily, DomainInvariants};
use crate::error::{Error, Result};
use crate::hua::{chi_tilde_differences, HartogsSpec};
use crate::poly::{factorial, to_f64};

/// Strict-membership margin: the least eigenvalue of `I - z z̄ᵗ` must exceed it.
pub const MEMBERSHIP_MARGIN: f64 = 1e-12;

const MAX_ATTEMPTS: usize = 100_000;

/// A point `(z_1, …, z_k, w)` of the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint {
    pub blocks: Vec<DMatrix<Complex64>>,
    pub fiber: DVector<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub phi: f64,
    pub epsilon: f64,
    pub kernel: f64,
    /// `1 - ‖w‖² / ∏ N_i^{μ_i}`.
    pub x: f64,
}

/// Matrix shape `(rows, cols)` of a coordinate block.
pub fn block_shape(inv: &DomainInvariants) -> Result<(usize, usize)> {
    match inv.family {
        DomainFamily::TypeI { m, n } => Ok((m as usize, n as usize)),
        DomainFamily::TypeII(n) | DomainFamily::TypeIII(n) => Ok((n as usize, n as usize)),
        DomainFamily::TypeIV(n) => Ok((1, n as usize)),
        DomainFamily::TypeV | DomainFamily::TypeVI => {
            Err(Error::UnsupportedFamily(inv.family.to_string()))
        }
    }
}

/// Index pairs of the independent entries of a block.
fn free_entries(inv: &DomainInvariants) -> Result<Vec<(usize, usize)>> {
    let (rows, cols) = block_shape(inv)?;
    let mut out = Vec::with_capacity(inv.d as usize);
    for i in 0..rows {
        for j in 0..cols {
            let keep = match inv.family {
                DomainFamily::TypeII(_) => i < j,
                DomainFamily::TypeIII(_) => i <= j,
                _ => true,
            };
            if keep {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Builds a block from its independent coordinates.
pub fn block_from_coords(inv: &DomainInvariants, coords: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let (rows, cols) = block_shape(inv)?;
    let entries = free_entries(inv)?;
    if coords.len() != entries.len() {
        return Err(Error::Shape {
            family: inv.family.to_string(),
            detail: format!("expected {} coordinates, got {}", entries.len(), coords.len()),
        });
    }
    let mut z = DMatrix::zeros(rows, cols);
    for (&(i, j), &c) in entries.iter().zip(coords) {
        z[(i, j)] = c;
        match inv.family {
            DomainFamily::TypeII(_) => z[(j, i)] = -c,
            DomainFamily::TypeIII(_) => z[(j, i)] = c,
            _ => {}
        }
    }
    Ok(z)
}

/// Independent coordinates of a block, after checking its shape and symmetry.
pub fn block_coords(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    check_shape(inv, z)?;
    Ok(free_entries(inv)?.into_iter().map(|(i, j)| z[(i, j)]).collect())
}

fn check_shape(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> Result<()> {
    let (rows, cols) = block_shape(inv)?;
    let shape_err = |detail: String| Error::Shape {
        family: inv.family.to_string(),
        detail,
    };
    if z.shape() != (rows, cols) {
        return Err(shape_err(format!(
            "expected {rows}×{cols}, got {}×{}",
            z.nrows(),
            z.ncols()
        )));
    }
    let tol = 1e-12;
    match inv.family {
        DomainFamily::TypeII(_) if (z + z.transpose()).camax() > tol => {
            Err(shape_err("block is not skew-symmetric".into()))
        }
        DomainFamily::TypeIII(_) if (z - z.transpose()).camax() > tol => {
            Err(shape_err("block is not symmetric".into()))
        }
        _ => Ok(()),
    }
}

fn defect(z: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::identity(z.nrows(), z.nrows()) - z * z.adjoint()
}

fn lie_ball_terms(z: &DMatrix<Complex64>) -> (f64, f64) {
    let sq: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let quad: Complex64 = z.iter().map(|c| c * c).sum();
    (sq, 1.0 - 2.0 * sq + quad.norm_sqr())
}

fn contains_unchecked(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> bool {
    match inv.family {
        DomainFamily::TypeIV(_) => {
            let (sq, norm) = lie_ball_terms(z);
            sq < 1.0 && norm > MEMBERSHIP_MARGIN
        }
        _ => defect(z).symmetric_eigenvalues().min() > MEMBERSHIP_MARGIN,
    }
}

/// Strict membership of a block in its factor.
pub fn contains(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> Result<bool> {
    check_shape(inv, z)?;
    Ok(contains_unchecked(inv, z))
}

fn norm_unchecked(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> f64 {
    match inv.family {
        DomainFamily::TypeIV(_) => lie_ball_terms(z).1,
        DomainFamily::TypeII(_) => defect(z).determinant().re.sqrt(),
        _ => defect(z).determinant().re,
    }
}

/// The generic norm `N_Ω(z, z̄)` of a block inside its factor.
pub fn generic_norm(inv: &DomainInvariants, z: &DMatrix<Complex64>) -> Result<f64> {
    if !contains(inv, z)? {
        return Err(Error::Outside(format!("block is not inside {inv}")));
    }
    Ok(norm_unchecked(inv, z))
}

fn hessian_cache() -> &'static RwLock<HashMap<DomainFamily, DMatrix<Complex64>>> {
    static CACHE: OnceLock<RwLock<HashMap<DomainFamily, DMatrix<Complex64>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Complex Hessian of `-ln N` at the origin in the independent coordinates, by
/// central differences; computed once per family.
pub fn origin_norm_hessian(inv: &DomainInvariants) -> Result<DMatrix<Complex64>> {
    if let Some(h) = hessian_cache().read().expect("cache poisoned").get(&inv.family) {
        return Ok(h.clone());
    }
    let dim = inv.d as usize;
    let f = |coords: &[Complex64]| -> f64 {
        let z = block_from_coords(inv, coords).expect("coordinate count matches");
        -norm_unchecked(inv, &z).ln()
    };
    let h = complex_hessian(&f, &vec![Complex64::new(0.0, 0.0); dim], 1e-4);
    hessian_cache()
        .write()
        .expect("cache poisoned")
        .insert(inv.family, h.clone());
    Ok(h)
}

/// `C_Ω = det(-∂∂̄ ln N)` at the origin.
pub fn norm_constant(inv: &DomainInvariants) -> Result<f64> {
    Ok(origin_norm_hessian(inv)?.determinant().re)
}

/// `∂²f / ∂Z_i ∂Z̄_j` by central differences in the real and imaginary parts.
fn complex_hessian(f: &dyn Fn(&[Complex64]) -> f64, at: &[Complex64], step: f64) -> DMatrix<Complex64> {
    let n = at.len();
    let m = 2 * n;
    let shifted = |a: usize, sa: f64, b: usize, sb: f64| -> f64 {
        let mut p = at.to_vec();
        for (k, s) in [(a, sa), (b, sb)] {
            let delta = if k < n {
                Complex64::new(s * step, 0.0)
            } else {
                Complex64::new(0.0, s * step)
            };
            p[k % n] += delta;
        }
        f(&p)
    };
    let mut real = DMatrix::<f64>::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let v = (shifted(a, 1.0, b, 1.0) - shifted(a, 1.0, b, -1.0) - shifted(a, -1.0, b, 1.0)
                + shifted(a, -1.0, b, -1.0))
                / (4.0 * step * step);
            real[(a, b)] = v;
            real[(b, a)] = v;
        }
    }
    DMatrix::from_fn(n, n, |i, j| {
        let xx = real[(i, j)];
        let yy = real[(n + i, n + j)];
        let xy = real[(i, n + j)];
        let yx = real[(n + i, j)];
        Complex64::new(xx + yy, xy - yx) * 0.25
    })
}

/// Precomputed floating-point data for one domain.
#[derive(Clone, Debug)]
pub struct HartogsGeometry {
    spec: HartogsSpec,
    mu: Vec<f64>,
    threshold: f64,
    /// `D^jχ̃(d) / (j! ∏ μ_i^{d_i})`, `j = 0..=d`.
    weights: Vec<f64>,
}

impl HartogsGeometry {
    pub fn new(spec: &HartogsSpec) -> Result<Self> {
        for f in spec.factors() {
            block_shape(f)?;
        }
        let norm = spec.mu_power_product();
        let weights = chi_tilde_differences(spec)
            .iter()
            .enumerate()
            .map(|(j, v)| {
                to_f64(&(v / (&norm * crate::poly::Rational::from_integer(factorial(j)))))
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            mu: spec.mu().iter().map(to_f64).collect(),
            threshold: to_f64(&spec.alpha_threshold()),
            weights,
        })
    }

    pub fn spec(&self) -> &HartogsSpec {
        &self.spec
    }

    /// Real dimension count `n` of the complex coordinates `(z, w)`.
    pub fn dim(&self) -> usize {
        self.spec.total_dim() as usize
    }

    fn check_point(&self, pt: &DomainPoint) -> Result<Vec<f64>> {
        let factors = self.spec.factors();
        if pt.blocks.len() != factors.len() {
            return Err(Error::Shape {
                family: "product".into(),
                detail: format!("expected {} blocks, got {}", factors.len(), pt.blocks.len()),
            });
        }
        if pt.fiber.len() != self.spec.d0() as usize {
            return Err(Error::Shape {
                family: "fiber".into(),
                detail: format!("expected length {}, got {}", self.spec.d0(), pt.fiber.len()),
            });
        }
        factors
            .iter()
            .zip(&pt.blocks)
            .map(|(f, z)| generic_norm(f, z))
            .collect()
    }

    fn weighted_norm(&self, norms: &[f64]) -> f64 {
        norms
            .iter()
            .zip(&self.mu)
            .map(|(n, m)| n.powf(*m))
            .product()
    }

    /// `(∏ N_i^{μ_i}, ‖w‖²)`, validating the point.
    fn fiber_data(&self, pt: &DomainPoint) -> Result<(f64, f64)> {
        let norms = self.check_point(pt)?;
        let base = self.weighted_norm(&norms);
        let w2 = pt.fiber.norm_squared();
        if w2 >= base {
            return Err(Error::Outside(format!(
                "‖w‖² = {w2} is not below ∏N^μ = {base}"
            )));
        }
        Ok((base, w2))
    }

    /// `∏ N_i^{μ_i}` at the base point of `pt`.
    pub fn base_norm(&self, pt: &DomainPoint) -> Result<f64> {
        Ok(self.weighted_norm(&self.check_point(pt)?))
    }

    pub fn contains(&self, pt: &DomainPoint) -> bool {
        self.fiber_data(pt).is_ok()
    }

    /// `1 - ‖w‖² / ∏ N_i^{μ_i}`.
    pub fn x_value(&self, pt: &DomainPoint) -> Result<f64> {
        let (base, w2) = self.fiber_data(pt)?;
        Ok(1.0 - w2 / base)
    }

    /// `Φ = -ln(∏ N_i^{μ_i} - ‖w‖²)`.
    pub fn phi(&self, pt: &DomainPoint) -> Result<f64> {
        let (base, w2) = self.fiber_data(pt)?;
        Ok(-(base - w2).ln())
    }

    fn check_alpha(&self, alpha: f64) -> Result<()> {
        if alpha > self.threshold {
            Ok(())
        } else {
            Err(Error::BelowThreshold {
                alpha,
                threshold: self.threshold,
            })
        }
    }

    /// `(α - n)_{j + d0}` for `j = 0..=d`.
    fn pochhammers(&self, alpha: f64) -> Vec<f64> {
        let n = self.dim() as f64;
        let d0 = self.spec.d0() as usize;
        (0..self.weights.len())
            .map(|j| rising(alpha - n, j + d0))
            .collect()
    }

    /// `ε_α` as a function of `X` alone.
    pub fn epsilon_at_x(&self, alpha: f64, x: f64) -> Result<f64> {
        self.check_alpha(alpha)?;
        let d = self.weights.len() - 1;
        Ok(self
            .weights
            .iter()
            .zip(self.pochhammers(alpha))
            .enumerate()
            .map(|(j, (w, p))| w * p * x.powi((d - j) as i32))
            .sum())
    }

    pub fn epsilon(&self, alpha: f64, pt: &DomainPoint) -> Result<f64> {
        self.check_alpha(alpha)?;
        self.epsilon_at_x(alpha, self.x_value(pt)?)
    }

    /// `K_α((z,w),(z,w))` from its closed form, together with `Φ`, `ε_α` and `X`.
    pub fn kernel(&self, alpha: f64, pt: &DomainPoint) -> Result<KernelValue> {
        self.check_alpha(alpha)?;
        let (base, w2) = self.fiber_data(pt)?;
        let x = 1.0 - w2 / base;
        let d = (self.weights.len() - 1) as f64;
        let sum: f64 = self
            .weights
            .iter()
            .zip(self.pochhammers(alpha))
            .enumerate()
            .map(|(j, (w, p))| w * p / x.powf(alpha - d + j as f64))
            .sum();
        let kernel = base.powf(-alpha) * sum;
        Ok(KernelValue {
            phi: -(base - w2).ln(),
            epsilon: self.epsilon_at_x(alpha, x)?,
            kernel,
            x,
        })
    }

    /// `det(∂²Φ / ∂Z ∂Z̄)` divided by `∏ C_{Ω_i}`:
    /// `∏ μ_i^{d_i} N_i^{μ_i (d+1) - p_i} / (∏ N_i^{μ_i} - ‖w‖²)^{n+1}`.
    pub fn monge_ampere(&self, pt: &DomainPoint) -> Result<f64> {
        let norms = self.check_point(pt)?;
        let base = self.weighted_norm(&norms);
        let w2 = pt.fiber.norm_squared();
        if w2 >= base {
            return Err(Error::Outside("fiber outside the Hartogs ball".into()));
        }
        let d = self.spec.base_dim() as f64;
        let numer: f64 = self
            .spec
            .factors()
            .iter()
            .zip(&self.mu)
            .zip(&norms)
            .map(|((f, m), n)| m.powi(f.d as i32) * n.powf(m * (d + 1.0) - f.p as f64))
            .product();
        Ok(numer / (base - w2).powi(self.dim() as i32 + 1))
    }

    /// `∏ C_{Ω_i}`.
    pub fn norm_constant_product(&self) -> Result<f64> {
        self.spec
            .factors()
            .iter()
            .map(norm_constant)
            .product::<Result<f64>>()
    }

    /// Flattened independent coordinates `(z_1, …, z_k, w)`.
    pub fn coords(&self, pt: &DomainPoint) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.dim());
        for (f, z) in self.spec.factors().iter().zip(&pt.blocks) {
            out.extend(block_coords(f, z)?);
        }
        out.extend(pt.fiber.iter().copied());
        Ok(out)
    }

    pub fn point_from_coords(&self, coords: &[Complex64]) -> Result<DomainPoint> {
        if coords.len() != self.dim() {
            return Err(Error::Shape {
                family: "product".into(),
                detail: format!("expected {} coordinates, got {}", self.dim(), coords.len()),
            });
        }
        let mut offset = 0;
        let mut blocks = Vec::with_capacity(self.spec.k());
        for f in self.spec.factors() {
            let len = f.d as usize;
            blocks.push(block_from_coords(f, &coords[offset..offset + len])?);
            offset += len;
        }
        Ok(DomainPoint {
            blocks,
            fiber: DVector::from_column_slice(&coords[offset..]),
        })
    }

    /// Largest `t ≤ limit` (halving from `limit`) such that moving any single real
    /// coordinate by `±t` stays inside; `0` if none of 30 halvings works.
    fn coordinate_margin(&self, coords: &[Complex64], limit: f64) -> f64 {
        let inside = |t: f64| {
            (0..coords.len()).all(|k| {
                [Complex64::new(t, 0.0), Complex64::new(-t, 0.0), Complex64::new(0.0, t), Complex64::new(0.0, -t)]
                    .iter()
                    .all(|delta| {
                        let mut p = coords.to_vec();
                        p[k] += delta;
                        self.point_from_coords(&p).is_ok_and(|q| self.contains(&q))
                    })
            })
        };
        let mut t = limit;
        for _ in 0..30 {
            if inside(t) {
                return t;
            }
            t /= 2.0;
        }
        0.0
    }

    /// Finite-difference complex Hessian `∂²Φ / ∂Z_i ∂Z̄_j`.
    pub fn hessian_fd(&self, pt: &DomainPoint, step: f64) -> Result<DMatrix<Complex64>> {
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidSpec(format!("step {step} must be positive")));
        }
        let coords = self.coords(pt)?;
        self.fiber_data(pt)?;
        let required = 4.0 * step;
        let margin = self.coordinate_margin(&coords, required);
        if margin < required {
            return Err(Error::BoundaryProximity {
                distance: margin,
                required,
            });
        }
        let f = |c: &[Complex64]| -> f64 {
            let p = self.point_from_coords(c).expect("coordinate count matches");
            self.phi(&p).unwrap_or(f64::NAN)
        };
        Ok(complex_hessian(&f, &coords, step))
    }

    /// Closed-form Hessian of `Φ` at `z = 0`: base blocks `μ_i H_i / (1 - ‖w‖²)` with `H_i`
    /// the Hessian of `-ln N_i` at the origin, and fiber block
    /// `I / (1 - ‖w‖²) + w̄ᵗ w / (1 - ‖w‖²)²`.
    pub fn origin_hessian(&self, fiber: &DVector<Complex64>) -> Result<DMatrix<Complex64>> {
        let n = self.dim();
        let r = fiber.norm_squared();
        if r >= 1.0 {
            return Err(Error::Outside("fiber outside the unit ball".into()));
        }
        let mut h = DMatrix::zeros(n, n);
        let mut offset = 0;
        for (f, m) in self.spec.factors().iter().zip(&self.mu) {
            let block = origin_norm_hessian(f)? * Complex64::from(m / (1.0 - r));
            let len = f.d as usize;
            h.view_mut((offset, offset), (len, len)).copy_from(&block);
            offset += len;
        }
        for i in 0..fiber.len() {
            for j in 0..fiber.len() {
                let mut v = fiber[i].conj() * fiber[j] / ((1.0 - r) * (1.0 - r));
                if i == j {
                    v += 1.0 / (1.0 - r);
                }
                h[(offset + i, offset + j)] = v;
            }
        }
        Ok(h)
    }

    /// Seeded rejection sample; see [`sample_point_scaled`].
    pub fn sample(&self, seed: u64, scale: f64) -> Result<DomainPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut blocks = Vec::with_capacity(self.spec.k());
        for f in self.spec.factors() {
            blocks.push(sample_block(f, &mut rng, scale)?);
        }
        let norms: Vec<f64> = self
            .spec
            .factors()
            .iter()
            .zip(&blocks)
            .map(|(f, z)| norm_unchecked(f, z))
            .collect();
        let radius = self.weighted_norm(&norms).sqrt() * scale;
        let d0 = self.spec.d0() as usize;
        for _ in 0..MAX_ATTEMPTS {
            let w = DVector::from_fn(d0, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * radius
            });
            let pt = DomainPoint {
                blocks: blocks.clone(),
                fiber: w,
            };
            if pt.fiber.norm_squared() < radius * radius && self.contains(&pt) {
                return Ok(pt);
            }
        }
        Err(Error::SamplingFailed {
            attempts: MAX_ATTEMPTS,
            what: "fiber".into(),
        })
    }
}

fn sample_block(inv: &DomainInvariants, rng: &mut ChaCha8Rng, scale: f64) -> Result<DMatrix<Complex64>> {
    let len = inv.d as usize;
    let radius = scale / (block_shape(inv)?.0 as f64).sqrt();
    for _ in 0..MAX_ATTEMPTS {
        let coords: Vec<Complex64> = (0..len)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, theta)
            })
            .collect();
        let z = block_from_coords(inv, &coords)?;
        if contains_unchecked(inv, &z) {
            return Ok(z);
        }
    }
    Err(Error::SamplingFailed {
        attempts: MAX_ATTEMPTS,
        what: inv.to_string(),
    })
}

/// `(x)_m = x (x+1) ⋯ (x+m-1)` in floating point.
pub fn rising(x: f64, m: usize) -> f64 {
    (0..m).map(|i| x + i as f64).product()
}

/// Deterministic point: block entries are drawn uniformly from discs of radius
/// `1/√rows` and kept if the block lies in its factor, then the fiber is drawn
/// uniformly from the ball `‖w‖² < ∏ N_i^{μ_i}`.
pub fn sample_point(spec: &HartogsSpec, seed: u64) -> Result<DomainPoint> {
    sample_point_scaled(spec, seed, 1.0)
}

/// As [`sample_point`], with the polydisc radius and fiber radius multiplied by `scale`.
pub fn sample_point_scaled(spec: &HartogsSpec, seed: u64, scale: f64) -> Result<DomainPoint> {
    HartogsGeometry::new(spec)?.sample(seed, scale)
}

pub fn phi_potential(spec: &HartogsSpec, pt: &DomainPoint) -> Result<f64> {
    HartogsGeometry::new(spec)?.phi(pt)
}

pub fn epsilon_eval(spec: &HartogsSpec, alpha: f64, pt: &DomainPoint) -> Result<f64> {
    HartogsGeometry::new(spec)?.epsilon(alpha, pt)
}

pub fn bergman_kernel_diag(spec: &HartogsSpec, alpha: f64, pt: &DomainPoint) -> Result<KernelValue> {
    HartogsGeometry::new(spec)?.kernel(alpha, pt)
}

pub fn monge_ampere_det(spec: &HartogsSpec, pt: &DomainPoint) -> Result<f64> {
    HartogsGeometry::new(spec)?.monge_ampere(pt)
}

pub fn hessian_fd_oracle(spec: &HartogsSpec, pt: &DomainPoint, step: f64) -> Result<DMatrix<Complex64>> {
    HartogsGeometry::new(spec)?.hessian_fd(pt, step)
}
