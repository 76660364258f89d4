//! Zero-mean Gaussian processes with unit-variance Matérn kernels,
//! observation noise `1/(4M)`, and the entropy / information-gain
//! quantities built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, SquareMatrix};
use crate::scalar::Scalar;

/// Jitter added on the single factorization retry.
pub const FIT_JITTER: f64 = 1e-10;

/// Candidate length scales for [`fit_length_scale`].
pub const LENGTH_SCALE_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// Half-integer smoothness values with closed-form Matérn kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "3/2")]
    ThreeHalves,
    #[serde(rename = "5/2")]
    FiveHalves,
}

impl Smoothness {
    pub fn from_value(nu: f64) -> Result<Self> {
        match nu {
            0.5 => Ok(Smoothness::Half),
            1.5 => Ok(Smoothness::ThreeHalves),
            2.5 => Ok(Smoothness::FiveHalves),
            _ => Err(Error::param("nu", format!("unsupported smoothness {nu}; use 0.5, 1.5 or 2.5"))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Smoothness::Half => 0.5,
            Smoothness::ThreeHalves => 1.5,
            Smoothness::FiveHalves => 2.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaternKernel<T> {
    pub nu: Smoothness,
    pub length_scale: T,
}

impl<T: Scalar> MaternKernel<T> {
    pub fn new(nu: Smoothness, length_scale: T) -> Result<Self> {
        if !(length_scale > T::zero()) || !length_scale.is_finite() {
            return Err(Error::param("length_scale", "must be positive and finite"));
        }
        Ok(Self { nu, length_scale })
    }

    /// Kernel as a function of Euclidean distance.
    pub fn at_distance(&self, d: T) -> T {
        let r = d / self.length_scale;
        match self.nu {
            Smoothness::Half => (-r).exp(),
            Smoothness::ThreeHalves => {
                let s = T::lit(3.0).sqrt() * r;
                (T::one() + s) * (-s).exp()
            }
            Smoothness::FiveHalves => {
                let s = T::lit(5.0).sqrt() * r;
                (T::one() + s + T::lit(5.0) * r * r / T::lit(3.0)) * (-s).exp()
            }
        }
    }

    pub fn eval(&self, a: &[T], b: &[T]) -> T {
        self.at_distance(euclidean(a, b))
    }

    pub fn gram(&self, points: &[Vec<T>]) -> SquareMatrix<T> {
        SquareMatrix::from_fn(points.len(), |i, j| self.eval(&points[i], &points[j]))
    }
}

fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

pub fn matern<T: Scalar>(a: &[T], b: &[T], k: &MaternKernel<T>) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(k.eval(a, b))
}

/// Accumulated `(θ_i, y_i)` pairs; `measurements` fixes the noise
/// variance `1/(4M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet<T> {
    pub points: Vec<Vec<T>>,
    pub targets: Vec<T>,
    #[serde(rename = "M")]
    pub measurements: u64,
}

impl<T: Scalar> ObservationSet<T> {
    pub fn new(measurements: u64) -> Result<Self> {
        Self::from_parts(Vec::new(), Vec::new(), measurements)
    }

    pub fn from_parts(points: Vec<Vec<T>>, targets: Vec<T>, measurements: u64) -> Result<Self> {
        if measurements < 1 {
            return Err(Error::param("M", "measurement count must be at least 1"));
        }
        if points.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: targets.len(),
            });
        }
        if let Some(d) = points.first().map(Vec::len) {
            if let Some(bad) = points.iter().find(|p| p.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: bad.len(),
                });
            }
        }
        Ok(Self {
            points,
            targets,
            measurements,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, point: Vec<T>, target: T) {
        self.points.push(point);
        self.targets.push(target);
    }

    pub fn noise_variance(&self) -> T {
        T::one() / (T::lit(4.0) * T::from_u64(self.measurements).expect("M fits scalar"))
    }
}

/// Posterior of a zero-mean GP conditioned on an [`ObservationSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct GpPosterior<T> {
    kernel: MaternKernel<T>,
    data: ObservationSet<T>,
    chol: Cholesky<T>,
    alpha: Vec<T>,
    jitter: T,
}

/// Serializable record of what a posterior was fit on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpSnapshot<T> {
    pub kernel: MaternKernel<T>,
    pub data: ObservationSet<T>,
    pub jitter: T,
}

impl<T: Scalar> GpPosterior<T> {
    /// Factors `K + I/(4M)` and solves for the mean weights. One retry with
    /// extra diagonal jitter, then a hard error.
    pub fn fit(data: ObservationSet<T>, kernel: MaternKernel<T>) -> Result<Self> {
        let mut k = kernel.gram(&data.points);
        k.add_diagonal(data.noise_variance());
        let (chol, jitter) = match Cholesky::factor(&k) {
            Ok(c) => (c, T::zero()),
            Err(_) => {
                let j = T::lit(FIT_JITTER);
                k.add_diagonal(j);
                let c = Cholesky::factor(&k).map_err(|e| {
                    Error::Numerical(format!("GP covariance factorization failed after jitter retry: {e}"))
                })?;
                (c, j)
            }
        };
        let alpha = chol.solve(&data.targets);
        Ok(Self {
            kernel,
            data,
            chol,
            alpha,
            jitter,
        })
    }

    pub fn kernel(&self) -> &MaternKernel<T> {
        &self.kernel
    }

    pub fn data(&self) -> &ObservationSet<T> {
        &self.data
    }

    pub fn cholesky(&self) -> &Cholesky<T> {
        &self.chol
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn snapshot(&self) -> GpSnapshot<T> {
        GpSnapshot {
            kernel: self.kernel,
            data: self.data.clone(),
            jitter: self.jitter,
        }
    }

    fn cross(&self, q: &[T]) -> Vec<T> {
        self.data.points.iter().map(|x| self.kernel.eval(q, x)).collect()
    }

    /// Posterior mean and variance at `query`. Variance round-off down to
    /// −1e-9 is clamped to zero.
    pub fn predict(&self, query: &[T]) -> (T, T) {
        let kq = self.cross(query);
        let mu = kq.iter().zip(&self.alpha).map(|(&a, &b)| a * b).sum();
        let v = self.chol.solve_lower(&kq);
        let prior = self.kernel.at_distance(T::zero());
        let sigma2 = prior - v.iter().map(|&x| x * x).sum::<T>();
        let sigma2 = if sigma2 < T::zero() && sigma2 >= T::lit(-1e-9) {
            T::zero()
        } else {
            sigma2
        };
        (mu, sigma2)
    }

    /// Posterior covariance `k_t(a, b)`.
    pub fn covariance(&self, a: &[T], b: &[T]) -> T {
        let va = self.chol.solve_lower(&self.cross(a));
        let vb = self.chol.solve_lower(&self.cross(b));
        self.kernel.eval(a, b) - va.iter().zip(&vb).map(|(&x, &y)| x * y).sum::<T>()
    }

    /// Log marginal likelihood of the targets under this model.
    pub fn log_marginal_likelihood(&self) -> T {
        let n = T::from_usize_lossy(self.data.len());
        let fit: T = self
            .data
            .targets
            .iter()
            .zip(&self.alpha)
            .map(|(&y, &a)| y * a)
            .sum();
        let half = T::lit(0.5);
        -half * fit - half * self.chol.log_det() - half * n * (ln_two_pi::<T>())
    }
}

fn ln_two_pi<T: Scalar>() -> T {
    (T::PI() + T::PI()).ln()
}

/// Picks the length scale with the highest marginal likelihood from
/// `candidates` (default grid when empty).
pub fn fit_length_scale<T: Scalar>(
    data: &ObservationSet<T>,
    nu: Smoothness,
    candidates: &[T],
) -> Result<MaternKernel<T>> {
    let grid: Vec<T> = if candidates.is_empty() {
        LENGTH_SCALE_GRID.iter().map(|&l| T::lit(l)).collect()
    } else {
        candidates.to_vec()
    };
    let mut best: Option<(T, MaternKernel<T>)> = None;
    for l in grid {
        let k = MaternKernel::new(nu, l)?;
        let lml = GpPosterior::fit(data.clone(), k)?.log_marginal_likelihood();
        if best.as_ref().is_none_or(|(b, _)| lml > *b) {
            best = Some((lml, k));
        }
    }
    Ok(best.expect("non-empty grid").1)
}

/// Differential entropy `½ log det(2πe K)` of `N(0, K)`.
pub fn gaussian_entropy<T: Scalar>(k: &SquareMatrix<T>) -> Result<T> {
    let chol = Cholesky::factor(k)?;
    let m = T::from_usize_lossy(k.dim());
    let two_pi_e = T::lit(2.0) * T::PI() * T::E();
    Ok(T::lit(0.5) * (m * two_pi_e.ln() + chol.log_det()))
}

/// `g_T = ½ Σ_t log(1 + 4M σ²_{t−1}(θ_t))`.
pub fn information_gain<T: Scalar>(sigma2_sequence: &[T], measurements: u64) -> Result<T> {
    if measurements < 1 {
        return Err(Error::param("M", "measurement count must be at least 1"));
    }
    let four_m = T::lit(4.0) * T::from_u64(measurements).expect("M fits scalar");
    let mut total = T::zero();
    for &s in sigma2_sequence {
        if s < T::zero() {
            return Err(Error::param("sigma2", format!("negative posterior variance {s}")));
        }
        total += (four_m * s).ln_1p();
    }
    Ok(T::lit(0.5) * total)
}

/// `T^{p/(ν+p)} (log T)^{ν/(ν+p)}` with unit constant: the asymptotic shape
/// of the maximal information gain for Matérn kernels, not a certified
/// bound.
pub fn max_information_gain_bound<T: Scalar>(steps: usize, p: usize, nu: Smoothness) -> Result<T> {
    if steps < 2 {
        return Err(Error::param("T", "need T >= 2"));
    }
    let t = T::from_usize_lossy(steps);
    let p = T::from_usize_lossy(p);
    let nu = T::lit(nu.value());
    Ok(t.powf(p / (nu + p)) * t.ln().powf(nu / (nu + p)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, PI};

    use proptest::prelude::*;
    use rand::Rng as _;

    use super::*;
    use crate::rng::{substream, Stream};

    const ALL_NU: [Smoothness; 3] = [Smoothness::Half, Smoothness::ThreeHalves, Smoothness::FiveHalves];

    fn random_set(seed: u64, n: usize, dim: usize, m: u64) -> ObservationSet<f64> {
        let mut rng = substream(seed, Stream::Custom(2));
        let pts = (0..n)
            .map(|_| (0..dim).map(|_| rng.random::<f64>() * 2.0 * PI).collect())
            .collect();
        let ys = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        ObservationSet::from_parts(pts, ys, m).unwrap()
    }

    /// Gauss-Jordan inverse with partial pivoting.
    fn dense_inverse(a: &SquareMatrix<f64>) -> SquareMatrix<f64> {
        let n = a.dim();
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..2 * n).map(|j| if j < n { a[(i, j)] } else if j - n == i { 1.0 } else { 0.0 }).collect())
            .collect();
        for c in 0..n {
            let piv = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
            m.swap(c, piv);
            let d = m[c][c];
            m[c].iter_mut().for_each(|x| *x /= d);
            for r in 0..n {
                if r != c {
                    let f = m[r][c];
                    let row_c = m[c].clone();
                    m[r].iter_mut().zip(row_c).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        SquareMatrix::from_fn(n, |i, j| m[i][j + n])
    }

    /// Modified Bessel K_ν(x) = ∫_0^∞ exp(−x cosh t) cosh(νt) dt by Simpson.
    fn bessel_k(nu: f64, x: f64) -> f64 {
        let (upper, n) = (12.0, 20_000);
        let h = upper / n as f64;
        let f = |t: f64| (-x * f64::cosh(t)).exp() * f64::cosh(nu * t);
        let mut s = f(0.0) + f(upper);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn kernel_closed_forms() {
        for nu in ALL_NU {
            let k = MaternKernel::new(nu, 0.7).unwrap();
            assert_eq!(k.at_distance(0.0), 1.0);
        }
        let k = MaternKernel::new(Smoothness::Half, 1.3).unwrap();
        assert!((k.at_distance(1.3) - E.recip()).abs() < 1e-15);
        assert!(MaternKernel::new(Smoothness::Half, 0.0).is_err());
        assert!(Smoothness::from_value(1.0).is_err());
    }

    #[test]
    fn kernel_matches_general_bessel_form() {
        // k(d) = 2^{1−ν}/Γ(ν) · x^ν K_ν(x), x = √(2ν) d / l
        let gamma = |nu: f64| match nu {
            0.5 => PI.sqrt(),
            1.5 => PI.sqrt() / 2.0,
            _ => 3.0 * PI.sqrt() / 4.0,
        };
        for nu in ALL_NU {
            let v = nu.value();
            for &(d, l) in &[(2.0, 1.0), (0.4, 0.8), (3.0, 2.0)] {
                let x = (2.0 * v).sqrt() * d / l;
                let general = 2f64.powf(1.0 - v) / gamma(v) * x.powf(v) * bessel_k(v, x);
                let k = MaternKernel::new(nu, l).unwrap();
                assert!((k.at_distance(d) - general).abs() < 1e-9, "ν={v} d={d}");
            }
        }
    }

    proptest! {
        #[test]
        fn kernel_symmetric_and_stationary(
            a in prop::collection::vec(-5.0..5.0f64, 2),
            b in prop::collection::vec(-5.0..5.0f64, 2),
            shift in prop::collection::vec(-3.0..3.0f64, 2),
            l in 0.1..4.0f64,
        ) {
            for nu in ALL_NU {
                let k = MaternKernel::new(nu, l).unwrap();
                let ab = k.eval(&a, &b);
                prop_assert_eq!(ab, k.eval(&b, &a));
                let a2: Vec<f64> = a.iter().zip(&shift).map(|(x, s)| x + s).collect();
                let b2: Vec<f64> = b.iter().zip(&shift).map(|(x, s)| x + s).collect();
                prop_assert!((ab - k.eval(&a2, &b2)).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&ab));
            }
        }
    }

    #[test]
    fn empty_posterior_is_prior() {
        let k = MaternKernel::new(Smoothness::FiveHalves, 1.0).unwrap();
        let gp = GpPosterior::fit(ObservationSet::new(10).unwrap(), k).unwrap();
        assert_eq!(gp.predict(&[0.3, 0.4]), (0.0, 1.0));
    }

    #[test]
    fn interpolation_limit() {
        let k = MaternKernel::new(Smoothness::ThreeHalves, 1.0).unwrap();
        let data = ObservationSet::<f64>::from_parts(vec![vec![1.0, 2.0]], vec![0.7], 1_000_000_000_000).unwrap();
        let gp = GpPosterior::fit(data, k).unwrap();
        let (mu, s2) = gp.predict(&[1.0, 2.0]);
        assert!((mu - 0.7).abs() < 1e-10);
        assert!(s2.abs() < 1e-10);
    }

    #[test]
    fn far_query_reverts_to_prior() {
        let k = MaternKernel::new(Smoothness::Half, 1.0).unwrap();
        let data = ObservationSet::<f64>::from_parts(vec![vec![0.0, 0.0]], vec![2.0], 1).unwrap();
        let gp = GpPosterior::fit(data, k).unwrap();
        let (mu, s2) = gp.predict(&[20.0, 0.0]);
        assert!(mu.abs() < 1e-6 && (s2 - 1.0).abs() < 1e-6);
        let (_, at_point) = gp.predict(&[0.0, 0.0]);
        assert!(at_point < 1.0);
    }

    #[test]
    fn posterior_matches_dense_inverse() {
        for (case, nu) in ALL_NU.iter().enumerate() {
            let data = random_set(case as u64, 8, 4, 3);
            let k = MaternKernel::new(*nu, 1.0).unwrap();
            let mut kk = k.gram(&data.points);
            kk.add_diagonal(data.noise_variance());
            let inv = dense_inverse(&kk);
            let gp = GpPosterior::fit(data.clone(), k).unwrap();
            assert!(gp.cholesky().reconstruct().max_abs_diff(&kk) < 1e-8);
            for q in random_set(100 + case as u64, 20, 4, 1).points {
                let kq: Vec<f64> = data.points.iter().map(|x| k.eval(&q, x)).collect();
                let w: Vec<f64> = (0..8).map(|i| (0..8).map(|j| inv[(i, j)] * kq[j]).sum()).collect();
                let mu: f64 = w.iter().zip(&data.targets).map(|(a, b)| a * b).sum();
                let s2 = 1.0 - w.iter().zip(&kq).map(|(a, b)| a * b).sum::<f64>();
                let (m, v) = gp.predict(&q);
                assert!((m - mu).abs() < 1e-8 && (v - s2).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn refit_matches_rank_one_update() {
        let k = MaternKernel::new(Smoothness::FiveHalves, 1.0).unwrap();
        let data = random_set(7, 6, 2, 2);
        let gp = GpPosterior::fit(data.clone(), k).unwrap();
        let (x_new, y_new) = (vec![1.0, 4.0], 0.3);
        let (mu_x, s2_x) = gp.predict(&x_new);
        let denom = s2_x + data.noise_variance();
        let mut grown = data.clone();
        grown.push(x_new.clone(), y_new);
        let refit = GpPosterior::fit(grown, k).unwrap();
        for q in random_set(8, 10, 2, 1).points {
            let (mu_q, s2_q) = gp.predict(&q);
            let c = gp.covariance(&q, &x_new);
            let (m, v) = refit.predict(&q);
            assert!((m - (mu_q + c * (y_new - mu_x) / denom)).abs() < 1e-8);
            assert!((v - (s2_q - c * c / denom)).abs() < 1e-8);
        }
    }

    #[test]
    fn variance_bounded_and_monotone() {
        let k = MaternKernel::new(Smoothness::ThreeHalves, 1.0).unwrap();
        let data = random_set(3, 10, 2, 5);
        let queries = random_set(4, 30, 2, 1).points;
        let mut prev: Vec<f64> = vec![1.0; queries.len()];
        for n in 0..=data.len() {
            let sub = ObservationSet::from_parts(data.points[..n].to_vec(), data.targets[..n].to_vec(), 5).unwrap();
            let gp = GpPosterior::fit(sub, k).unwrap();
            for (q, p) in queries.iter().zip(prev.iter_mut()) {
                let (_, v) = gp.predict(q);
                assert!((0.0..=1.0 + 1e-9).contains(&v));
                assert!(v <= *p + 1e-9);
                *p = v;
            }
        }
    }

    #[test]
    fn duplicate_points_are_regularized() {
        let k = MaternKernel::new(Smoothness::FiveHalves, 1.0).unwrap();
        let data = ObservationSet::from_parts(vec![vec![0.5, 0.5]; 4], vec![1.0, 0.9, 1.1, 1.0], 1000).unwrap();
        assert!(GpPosterior::fit(data, k).is_ok());
    }

    #[test]
    fn entropy_closed_forms() {
        let c = 2.5;
        for m in 1..5 {
            let id = SquareMatrix::<f64>::identity(m);
            let want = m as f64 / 2.0 * (2.0 * PI * E).ln();
            assert!((gaussian_entropy(&id).unwrap() - want).abs() < 1e-12);
            let want_c = m as f64 / 2.0 * (2.0 * PI * E * c).ln();
            assert!((gaussian_entropy(&id.scaled(c)).unwrap() - want_c).abs() < 1e-12);
        }
        let bad = SquareMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(gaussian_entropy(&bad).is_err());
    }

    #[test]
    fn entropy_matches_determinant() {
        // random 5×5 PSD A = B Bᵀ + 0.1 I; det by Gaussian elimination
        let mut rng = substream(12, Stream::Custom(3));
        let b = SquareMatrix::from_fn(5, |_, _| rng.random::<f64>() - 0.5);
        let mut a = b.matmul(&b.transpose());
        a.add_diagonal(0.1);
        let mut m: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| a[(i, j)]).collect()).collect();
        let mut det = 1.0;
        for c in 0..5 {
            let piv = (c..5).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
            if piv != c {
                m.swap(c, piv);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..5 {
                let f = m[r][c] / m[c][c];
                let row_c = m[c].clone();
                m[r].iter_mut().zip(row_c).for_each(|(x, y)| *x -= f * y);
            }
        }
        let want = 0.5 * ((2.0 * PI * E).powi(5) * det).ln();
        assert!((gaussian_entropy(&a).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn information_gain_cases() {
        assert!((information_gain(&[1.0], 1).unwrap() - 0.5 * 5f64.ln()).abs() < 1e-15);
        assert_eq!(information_gain::<f64>(&[], 3).unwrap(), 0.0);
        assert!(information_gain(&[-0.1], 3).is_err());
    }

    #[test]
    fn information_gain_equals_entropy_difference() {
        let k = MaternKernel::new(Smoothness::FiveHalves, 1.0).unwrap();
        let m = 50;
        let all = random_set(21, 5, 2, m);
        let mut sigma2 = Vec::new();
        for t in 0..all.len() {
            let prev = ObservationSet::from_parts(all.points[..t].to_vec(), all.targets[..t].to_vec(), m).unwrap();
            sigma2.push(GpPosterior::fit(prev, k).unwrap().predict(&all.points[t]).1);
        }
        let noise = all.noise_variance();
        let mut cov_y = k.gram(&all.points);
        cov_y.add_diagonal(noise);
        let h_y = gaussian_entropy(&cov_y).unwrap();
        let h_y_given_f = gaussian_entropy(&SquareMatrix::identity(5).scaled(noise)).unwrap();
        assert!((information_gain(&sigma2, m).unwrap() - (h_y - h_y_given_f)).abs() < 1e-8);
    }

    #[test]
    fn gain_bound_shape() {
        let v: f64 = max_information_gain_bound(100, 2, Smoothness::FiveHalves).unwrap();
        let want = 100f64.powf(4.0 / 9.0) * 100f64.ln().powf(5.0 / 9.0);
        assert!((v - want).abs() < 1e-12);
        let mut prev = 0.0;
        for t in 2..500 {
            let b: f64 = max_information_gain_bound(t, 1, Smoothness::ThreeHalves).unwrap();
            assert!(b >= prev);
            prev = b;
        }
        assert!(max_information_gain_bound::<f64>(1, 1, Smoothness::Half).is_err());
    }

    #[test]
    fn length_scale_grid_fit_prefers_matching_scale() {
        // samples of a slowly varying function favour a long length scale
        let pts: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64 * 0.5]).collect();
        let ys = pts.iter().map(|p| (p[0] * 0.3).sin()).collect();
        let data = ObservationSet::from_parts(pts, ys, 10_000).unwrap();
        let k = fit_length_scale(&data, Smoothness::FiveHalves, &[]).unwrap();
        assert!(k.length_scale >= 2.0);
    }

    #[test]
    fn snapshot_serializes() {
        let k = MaternKernel::new(Smoothness::FiveHalves, 1.0).unwrap();
        let gp = GpPosterior::fit(random_set(1, 3, 2, 4), k).unwrap();
        let json = serde_json::to_string(&gp.snapshot()).unwrap();
        let back: GpSnapshot<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, gp.snapshot());
        assert!(json.contains("\"5/2\"") && json.contains("\"M\":4"));
    }
}
