//! Target densities with analytic log-density, gradient, and Hessian.
//!
//! All densities are unnormalized; Metropolis-Hastings ratios are invariant
//! to the dropped constants. The benchmark densities are an isotropic /
//! disc / cigar Gaussian, a funnel, and a bowtie, each optionally wrapped in
//! a location-scale-rotation transform that places it inside a polytope.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{diagonal_exit, Polytope};

/// Unnormalized log-density with analytic derivatives.
///
/// Implementations must be finite and twice continuously differentiable on
/// the feasible set they are paired with. Evaluation is pure and reentrant.
pub trait TargetDensity: Send + Sync {
    fn dim(&self) -> usize;
    fn log_density(&self, x: &DVector<f64>) -> f64;
    fn grad_log_density(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian_log_density(&self, x: &DVector<f64>) -> DMatrix<f64>;
}

/// Gaussian covariance family of the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianKind {
    Iso,
    Disc,
    Cigar,
}

/// Zero-centered Gaussian with diagonal covariance.
#[derive(Debug, Clone)]
pub struct Gaussian {
    inv_var: DVector<f64>,
}

/// Zero-centered Gaussian; `iso` has unit marginal variances, `disc` has
/// variance 1/100 in the first coordinate, `cigar` has variance 1/100 in
/// all but the first.
pub fn make_gaussian(kind: GaussianKind, d: usize) -> Result<Gaussian> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    if d < 2 && kind != GaussianKind::Iso {
        return Err(Error::InvalidArgument(
            "disc/cigar Gaussians need d >= 2".into(),
        ));
    }
    let inv_var = DVector::from_fn(d, |i, _| match kind {
        GaussianKind::Iso => 1.0,
        GaussianKind::Disc => {
            if i == 0 {
                100.0
            } else {
                1.0
            }
        }
        GaussianKind::Cigar => {
            if i == 0 {
                1.0
            } else {
                100.0
            }
        }
    });
    Ok(Gaussian { inv_var })
}

impl TargetDensity for Gaussian {
    fn dim(&self) -> usize {
        self.inv_var.len()
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        -0.5 * x.iter().zip(self.inv_var.iter()).map(|(&xi, &w)| w * xi * xi).sum::<f64>()
    }

    fn grad_log_density(&self, x: &DVector<f64>) -> DVector<f64> {
        -x.component_mul(&self.inv_var)
    }

    fn hessian_log_density(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        -DMatrix::from_diagonal(&self.inv_var)
    }
}

/// Funnel: `x1 ~ N(0, 9)`, `x_i ~ N(0, exp(x1))` for `i >= 2`.
///
/// `log phi = -x1^2/18 - (d-1)/2 x1 - exp(-x1)/2 sum_{i>=2} x_i^2`.
#[derive(Debug, Clone)]
pub struct Funnel {
    d: usize,
}

pub fn make_funnel(d: usize) -> Result<Funnel> {
    if d < 2 {
        return Err(Error::InvalidArgument("funnel needs d >= 2".into()));
    }
    Ok(Funnel { d })
}

impl TargetDensity for Funnel {
    fn dim(&self) -> usize {
        self.d
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        let x1 = x[0];
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        -x1 * x1 / 18.0 - 0.5 * (self.d - 1) as f64 * x1 - 0.5 * (-x1).exp() * tail_sq
    }

    fn grad_log_density(&self, x: &DVector<f64>) -> DVector<f64> {
        let x1 = x[0];
        let e = (-x1).exp();
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        let mut g = DVector::zeros(self.d);
        g[0] = -x1 / 9.0 - 0.5 * (self.d - 1) as f64 + 0.5 * e * tail_sq;
        for i in 1..self.d {
            g[i] = -e * x[i];
        }
        g
    }

    fn hessian_log_density(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let x1 = x[0];
        let e = (-x1).exp();
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        let mut h = DMatrix::zeros(self.d, self.d);
        h[(0, 0)] = -1.0 / 9.0 - 0.5 * e * tail_sq;
        for i in 1..self.d {
            h[(0, i)] = e * x[i];
            h[(i, 0)] = e * x[i];
            h[(i, i)] = -e;
        }
        h
    }
}

/// Bowtie: `x1 ~ N(0, 1)`, `x_i ~ N(0, x1^2/4 + 0.1)` for `i >= 2`.
///
/// The conditional variance is bounded below by 0.1, so the log-density is
/// finite on the whole unit box.
#[derive(Debug, Clone)]
pub struct Bowtie {
    d: usize,
}

pub fn make_bowtie(d: usize) -> Result<Bowtie> {
    if d < 2 {
        return Err(Error::InvalidArgument("bowtie needs d >= 2".into()));
    }
    Ok(Bowtie { d })
}

impl TargetDensity for Bowtie {
    fn dim(&self) -> usize {
        self.d
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        let x1 = x[0];
        let s = x1 * x1 / 4.0 + 0.1;
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        -0.5 * x1 * x1 - 0.5 * (self.d - 1) as f64 * s.ln() - 0.5 * tail_sq / s
    }

    fn grad_log_density(&self, x: &DVector<f64>) -> DVector<f64> {
        let x1 = x[0];
        let s = x1 * x1 / 4.0 + 0.1;
        let ds = x1 / 2.0;
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        let mut g = DVector::zeros(self.d);
        g[0] = -x1 - 0.5 * (self.d - 1) as f64 * ds / s + 0.5 * tail_sq * ds / (s * s);
        for i in 1..self.d {
            g[i] = -x[i] / s;
        }
        g
    }

    fn hessian_log_density(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let x1 = x[0];
        let s = x1 * x1 / 4.0 + 0.1;
        let ds = x1 / 2.0;
        let dds = 0.5;
        let tail_sq: f64 = x.iter().skip(1).map(|&v| v * v).sum();
        let mut h = DMatrix::zeros(self.d, self.d);
        // d/dx1 of ds/s is (dds*s - ds^2)/s^2; of ds/s^2 is (dds*s - 2 ds^2)/s^3.
        h[(0, 0)] = -1.0 - 0.5 * (self.d - 1) as f64 * (dds * s - ds * ds) / (s * s)
            + 0.5 * tail_sq * (dds * s - 2.0 * ds * ds) / (s * s * s);
        for i in 1..self.d {
            let cross = x[i] * ds / (s * s);
            h[(0, i)] = cross;
            h[(i, 0)] = cross;
            h[(i, i)] = -1.0 / s;
        }
        h
    }
}

/// Location-scale-rotation wrapper `phi(x) = phi0(Q^T (x - m) / sigma)`.
#[derive(Debug, Clone)]
pub struct AffineTransform {
    pub m: DVector<f64>,
    pub sigma: f64,
    pub q: DMatrix<f64>,
}

impl AffineTransform {
    /// Checks `sigma > 0` and `Q^T Q = I` within 1e-12.
    pub fn new(m: DVector<f64>, sigma: f64, q: DMatrix<f64>) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidArgument("sigma must be positive".into()));
        }
        let d = m.len();
        if q.nrows() != d || q.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: q.nrows(),
            });
        }
        let gram = q.transpose() * &q;
        let eye = DMatrix::identity(d, d);
        if (gram - eye).amax() > 1e-12 {
            return Err(Error::InvalidArgument("Q is not orthogonal".into()));
        }
        Ok(Self { m, sigma, q })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            m: DVector::zeros(d),
            sigma: 1.0,
            q: DMatrix::identity(d, d),
        }
    }
}

/// A base density pushed through an [`AffineTransform`].
pub struct Transformed {
    base: Arc<dyn TargetDensity>,
    t: AffineTransform,
}

/// Wrap `base` in the transform: `log phi(x) = log phi0(z)` with
/// `z = Q^T (x - m) / sigma`, gradient `(1/sigma) Q g0(z)`, Hessian
/// `(1/sigma^2) Q H0(z) Q^T`.
pub fn transform_target(base: Arc<dyn TargetDensity>, t: AffineTransform) -> Result<Transformed> {
    if base.dim() != t.m.len() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            got: t.m.len(),
        });
    }
    Ok(Transformed { base, t })
}

impl Transformed {
    fn pull_back(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.t.q.transpose() * (x - &self.t.m)) / self.t.sigma
    }
}

impl TargetDensity for Transformed {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        self.base.log_density(&self.pull_back(x))
    }

    fn grad_log_density(&self, x: &DVector<f64>) -> DVector<f64> {
        let z = self.pull_back(x);
        (&self.t.q * self.base.grad_log_density(&z)) / self.t.sigma
    }

    fn hessian_log_density(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let z = self.pull_back(x);
        let h0 = self.base.hessian_log_density(&z);
        (&self.t.q * h0 * self.t.q.transpose()) / (self.t.sigma * self.t.sigma)
    }
}

/// Orthogonal matrix mapping `e1` to `(1,...,1)/sqrt(d)`, built as the
/// Householder reflection through `e1 - (1,...,1)/sqrt(d)`.
pub fn rotation_to_diagonal(d: usize) -> DMatrix<f64> {
    let w = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    let mut u = DVector::zeros(d);
    u[0] = 1.0;
    u -= &w;
    let nrm2 = u.norm_squared();
    if nrm2 < 1e-30 {
        // d = 1: e1 already is the diagonal.
        return DMatrix::identity(d, d);
    }
    DMatrix::identity(d, d) - (&u * u.transpose()) * (2.0 / nrm2)
}

/// The benchmark's density labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Funnel,
    Bowtie,
    GaussIso,
    GaussDisc,
    GaussCigar,
}

impl DensityKind {
    pub fn is_gaussian(self) -> bool {
        matches!(self, Self::GaussIso | Self::GaussDisc | Self::GaussCigar)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Funnel => "funnel",
            Self::Bowtie => "bowtie",
            Self::GaussIso => "gauss_iso",
            Self::GaussDisc => "gauss_disc",
            Self::GaussCigar => "gauss_cigar",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "funnel" => Ok(Self::Funnel),
            "bowtie" => Ok(Self::Bowtie),
            "gauss_iso" => Ok(Self::GaussIso),
            "gauss_disc" => Ok(Self::GaussDisc),
            "gauss_cigar" => Ok(Self::GaussCigar),
            other => Err(Error::InvalidArgument(format!("unknown density kind {other:?}"))),
        }
    }
}

fn base_density(kind: DensityKind, d: usize) -> Result<Arc<dyn TargetDensity>> {
    Ok(match kind {
        DensityKind::Funnel => Arc::new(make_funnel(d)?),
        DensityKind::Bowtie => Arc::new(make_bowtie(d)?),
        DensityKind::GaussIso => Arc::new(make_gaussian(GaussianKind::Iso, d)?),
        DensityKind::GaussDisc => Arc::new(make_gaussian(GaussianKind::Disc, d)?),
        DensityKind::GaussCigar => Arc::new(make_gaussian(GaussianKind::Cigar, d)?),
    })
}

/// Assemble a benchmark target inside a polytope: rotate the first axis onto
/// the diagonal, scale by `sigma`, and shift the mode to `mu * t* (1,...,1)`
/// where `t*` is the diagonal exit step. Gaussians use the given `mu`
/// (0 puts the mode on the polytope border); funnel and bowtie are always
/// shifted to the halfway point.
pub fn place_target(
    kind: DensityKind,
    d: usize,
    sigma: f64,
    polytope: &Polytope,
    mu: f64,
) -> Result<Transformed> {
    if polytope.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: polytope.dim(),
        });
    }
    let base = base_density(kind, d)?;
    let tstar = diagonal_exit(polytope)?;
    if !tstar.is_finite() {
        return Err(Error::InvalidArgument("unbounded diagonal".into()));
    }
    let mu_eff = if kind.is_gaussian() { mu } else { 0.5 };
    let m = DVector::from_element(d, mu_eff * tstar);
    let q = rotation_to_diagonal(d);
    transform_target(base, AffineTransform::new(m, sigma, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_cone, make_diamond};

    fn vecn(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn gaussian_examples() {
        let iso = make_gaussian(GaussianKind::Iso, 3).unwrap();
        let g = iso.grad_log_density(&DVector::zeros(3));
        assert_eq!(g, DVector::zeros(3));
        let h = iso.hessian_log_density(&DVector::zeros(3));
        assert_eq!(h, -DMatrix::<f64>::identity(3, 3));

        let disc = make_gaussian(GaussianKind::Disc, 2).unwrap();
        let g = disc.grad_log_density(&vecn(&[0.1, 0.0]));
        assert!((g[0] + 10.0).abs() < 1e-12);
        assert_eq!(g[1], 0.0);

        let cigar = make_gaussian(GaussianKind::Cigar, 2).unwrap();
        let g = cigar.grad_log_density(&vecn(&[0.0, 0.1]));
        assert!((g[1] + 10.0).abs() < 1e-12);

        assert!(make_gaussian(GaussianKind::Disc, 1).is_err());
        assert!(make_gaussian(GaussianKind::Iso, 1).is_ok());
    }

    #[test]
    fn funnel_examples() {
        let f = make_funnel(2).unwrap();
        let g0 = f.grad_log_density(&DVector::zeros(2));
        assert_eq!(g0[1], 0.0);
        let g = f.grad_log_density(&vecn(&[0.0, 1.0]));
        assert!((g[1] + 1.0).abs() < 1e-12);
        assert!(make_funnel(1).is_err());
    }

    #[test]
    fn bowtie_examples() {
        let b = make_bowtie(2).unwrap();
        let g = b.grad_log_density(&vecn(&[0.0, 0.1]));
        assert!((g[1] + 1.0).abs() < 1e-12);
        let g0 = b.grad_log_density(&DVector::zeros(2));
        assert!(g0.amax() < 1e-15);
        assert!(make_bowtie(1).is_err());
    }

    #[test]
    fn hessians_are_symmetric() {
        let targets: Vec<Box<dyn TargetDensity>> = vec![
            Box::new(make_funnel(4).unwrap()),
            Box::new(make_bowtie(4).unwrap()),
            Box::new(make_gaussian(GaussianKind::Disc, 4).unwrap()),
        ];
        let x = vecn(&[0.3, -0.2, 0.5, 0.1]);
        for t in &targets {
            let h = t.hessian_log_density(&x);
            assert!((h.clone() - h.transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn rotation_maps_e1_to_diagonal() {
        for d in [1usize, 2, 3, 8, 32] {
            let q = rotation_to_diagonal(d);
            let gram = q.transpose() * &q;
            assert!((gram - DMatrix::identity(d, d)).amax() < 1e-12);
            let e1 = DVector::from_fn(d, |i, _| if i == 0 { 1.0 } else { 0.0 });
            let w = DVector::from_element(d, 1.0 / (d as f64).sqrt());
            assert!((q * e1 - w).amax() < 1e-12);
        }
        let q = rotation_to_diagonal(2);
        assert!((q[(0, 0)] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((q[(1, 0)] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(rotation_to_diagonal(1)[(0, 0)], 1.0);
    }

    #[test]
    fn identity_transform_is_exact() {
        let base: Arc<dyn TargetDensity> = Arc::new(make_funnel(3).unwrap());
        let t = transform_target(base.clone(), AffineTransform::identity(3)).unwrap();
        let mut rng_state = 12345u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..100 {
            let x = DVector::from_fn(3, |_, _| next());
            assert_eq!(t.log_density(&x), base.log_density(&x));
            assert_eq!(t.grad_log_density(&x), base.grad_log_density(&x));
            assert_eq!(t.hessian_log_density(&x), base.hessian_log_density(&x));
        }
    }

    #[test]
    fn transformed_gaussian_mode_at_m() {
        let base: Arc<dyn TargetDensity> = Arc::new(make_gaussian(GaussianKind::Iso, 3).unwrap());
        let m = vecn(&[0.2, 0.3, -0.1]);
        let q = rotation_to_diagonal(3);
        let t = transform_target(base, AffineTransform::new(m.clone(), 0.7, q).unwrap()).unwrap();
        let g = t.grad_log_density(&m);
        assert!(g.amax() < 1e-14);
    }

    #[test]
    fn place_target_mode_positions() {
        // Diamond: t* = 1, so mu = 0.5 puts the mode at 0.5 (1,...,1).
        let p = make_diamond(3, 45.0).unwrap();
        let t = place_target(DensityKind::GaussIso, 3, 0.5, &p, 0.5).unwrap();
        let mode = DVector::from_element(3, 0.5);
        assert!(t.grad_log_density(&mode).amax() < 1e-12);

        // mu = 0: mode at the origin, on the border.
        let t0 = place_target(DensityKind::GaussIso, 3, 0.5, &p, 0.0).unwrap();
        assert!(t0.grad_log_density(&DVector::zeros(3)).amax() < 1e-12);

        // Cone d=2 at 90 degrees: t* = 1/2, halfway point 0.25 (1,1).
        let p = make_cone(2, 90.0).unwrap();
        let t = place_target(DensityKind::GaussIso, 2, 1.0, &p, 0.5).unwrap();
        let mode = DVector::from_element(2, 0.25);
        assert!(t.grad_log_density(&mode).amax() < 1e-12);
    }

    #[test]
    fn funnel_bowtie_finite_on_unit_box() {
        let p = make_diamond(2, 90.0).unwrap();
        for kind in [DensityKind::Funnel, DensityKind::Bowtie] {
            let t = place_target(kind, 2, 0.1, &p, 0.5).unwrap();
            for &x1 in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                for &x2 in &[0.0, 0.5, 1.0] {
                    let v = vecn(&[x1, x2]);
                    assert!(t.log_density(&v).is_finite());
                }
            }
        }
    }
}
