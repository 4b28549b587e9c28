//! Seeded Monte Carlo estimators: slab-body volume by rejection from a
//! covering ellipsoid, uniform ℓ_p-ball sampling, the moment integrals
//! behind the volume bounds, and ℓ_p section volumes.
//!
//! Every estimator is deterministic in (inputs, seed, worker count).
//! Workers draw from independent ChaCha substreams selected by worker
//! index and results merge in index order.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::exact::{VolumeMethod, VolumeResult};
use crate::instance::{lp_ball_volume, SlabBody, VectorSet};
use crate::linalg;

/// 95% normal quantile used for every Wilson interval.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `hits` successes out of `n` Bernoulli
/// trials, at the 95% level. Well behaved at zero hits.
pub fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    assert!(n > 0);
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64 + 1);
    rng
}

/// Splits `samples` across `workers` threads, runs `job` on each with its
/// own substream, and merges in worker order.
fn sharded<T, F>(samples: u64, workers: usize, seed: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(ChaCha8Rng, u64) -> T + Sync,
{
    let workers = workers.max(1);
    let base = samples / workers as u64;
    let extra = samples % workers as u64;
    let counts: Vec<u64> = (0..workers)
        .map(|w| base + if (w as u64) < extra { 1 } else { 0 })
        .collect();
    if workers == 1 {
        return vec![job(worker_rng(seed, 0), counts[0])];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(w, &cnt)| {
                let job = &job;
                scope.spawn(move || job(worker_rng(seed, w), cnt))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

// ---------------------------------------------------------------------------
// Uniform sampling of B_p^k
// ---------------------------------------------------------------------------

/// Streaming sampler for the uniform measure on B_p^k.
///
/// Coordinates are signed generalized Gaussians (density ∝ exp(−|t|^p),
/// drawn as Gamma(1/p,1)^{1/p}), normalized to the ℓ_p sphere and pushed
/// inward by the radial factor U^{1/k}.
pub struct LpBallSampler {
    k: usize,
    p: f64,
    gamma: Gamma<f64>,
    rng: ChaCha8Rng,
}

impl LpBallSampler {
    pub fn new(k: usize, p: f64, seed: u64) -> Result<Self> {
        Self::with_rng(k, p, ChaCha8Rng::seed_from_u64(seed))
    }

    fn with_rng(k: usize, p: f64, rng: ChaCha8Rng) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be ≥ 1".into()));
        }
        if !(1.0..f64::INFINITY).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "p must be in [1, ∞) for ball sampling, got {p}"
            )));
        }
        let gamma = Gamma::new(1.0 / p, 1.0)
            .map_err(|e| Error::InvalidParameter(format!("gamma sampler: {e}")))?;
        Ok(LpBallSampler { k, p, gamma, rng })
    }

    pub fn sample_into(&mut self, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.k);
        loop {
            let mut norm_p = 0.0;
            for slot in out.iter_mut() {
                let g: f64 = self.gamma.sample(&mut self.rng);
                let mag = g.powf(1.0 / self.p);
                let sign = if self.rng.gen::<bool>() { 1.0 } else { -1.0 };
                *slot = sign * mag;
                norm_p += mag.powf(self.p);
            }
            let norm = norm_p.powf(1.0 / self.p);
            if norm > 0.0 && norm.is_finite() {
                let radial = self.rng.gen::<f64>().powf(1.0 / self.k as f64);
                for slot in out.iter_mut() {
                    *slot = *slot / norm * radial;
                }
                return;
            }
        }
    }
}

/// Materialized batch of uniform B_p^k samples.
pub fn sample_lp_ball(k: usize, p: f64, count: u64, seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut sampler = LpBallSampler::new(k, p, seed)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut buf = vec![0.0; k];
    for _ in 0..count {
        sampler.sample_into(&mut buf);
        out.push(buf.clone());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Volume via a covering ellipsoid
// ---------------------------------------------------------------------------

/// The ellipsoid E = {x : xᵀMx ≤ n} for M = Σ uᵢuᵢᵀ.
///
/// x ∈ K forces Σ⟨x,uᵢ⟩² ≤ n, so K ⊆ E always; M is positive definite
/// exactly when the body is bounded.
pub struct EllipsoidCover {
    pub k: usize,
    pub radius_sq: u64,
    pub volume: f64,
    /// Maps the unit ball onto E: x = map · y.
    map: Vec<f64>,
}

impl EllipsoidCover {
    pub fn for_body(body: &SlabBody) -> Result<Self> {
        if !body.is_bounded() {
            return Err(Error::UnboundedBody);
        }
        let k = body.k();
        let n = body.n() as u64;

        // Exact det M for the ellipsoid volume.
        let cols: Vec<Vec<BigRational>> = (0..k)
            .map(|j| body.generators().vectors().iter().map(|r| r[j].clone()).collect())
            .collect();
        let m_exact = linalg::gram(&cols);
        let det_m = linalg::rat_to_f64(&linalg::det(&m_exact));
        let n_f = n as f64;
        let volume = lp_ball_volume(k, 2.0)? * n_f.powf(k as f64 / 2.0) / det_m.sqrt();

        // Float Cholesky M = LLᵀ; E = √n·L^{−T}·(unit ball).
        let mut m_f = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m_f[(i, j)] = linalg::rat_to_f64(&m_exact[i][j]);
            }
        }
        let chol = m_f
            .cholesky()
            .ok_or(Error::UnboundedBody)?;
        let lt_inv = chol
            .l()
            .transpose()
            .try_inverse()
            .ok_or(Error::UnboundedBody)?;
        let scale = n_f.sqrt();
        let map: Vec<f64> = (0..k)
            .flat_map(|i| (0..k).map(move |j| lt_inv[(i, j)] * scale))
            .collect();
        Ok(EllipsoidCover { k, radius_sq: n, volume, map })
    }

    fn map_into(&self, y: &[f64], out: &mut [f64]) {
        let k = self.k;
        for i in 0..k {
            let mut acc = 0.0;
            for j in 0..k {
                acc += self.map[i * k + j] * y[j];
            }
            out[i] = acc;
        }
    }
}

fn sample_unit_ball(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let k = out.len();
    loop {
        let mut norm2 = 0.0;
        for slot in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *slot = g;
            norm2 += g * g;
        }
        let norm = norm2.sqrt();
        if norm > 1e-12 {
            let radial = rng.gen::<f64>().powf(1.0 / k as f64);
            for slot in out.iter_mut() {
                *slot = *slot / norm * radial;
            }
            return;
        }
    }
}

/// Rejection estimate of |K|: uniform points in the covering ellipsoid,
/// hit fraction scaled by its volume, Wilson 95% interval propagated to
/// the CI fields. Zero hits yields a censored upper-bound-only result.
pub fn mc_volume(body: &SlabBody, samples: u64, seed: u64, workers: usize) -> Result<VolumeResult> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be ≥ 1".into()));
    }
    let cover = EllipsoidCover::for_body(body)?;
    let k = body.k();
    let counts = sharded(samples, workers, seed, |mut rng, count| {
        let mut y = vec![0.0; k];
        let mut x = vec![0.0; k];
        let mut hits = 0u64;
        for _ in 0..count {
            sample_unit_ball(&mut rng, &mut y);
            cover.map_into(&y, &mut x);
            if body.contains_f64(&x) {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    let (lo, hi) = wilson_interval(hits, samples);
    let frac = hits as f64 / samples as f64;
    let censored = hits == 0;
    let volume = cover.volume * frac;
    let kth_root = if censored { 0.0 } else { volume.powf(1.0 / k as f64) };
    Ok(VolumeResult {
        volume,
        exact: None,
        kth_root,
        method: VolumeMethod::Mc,
        ci_low: Some(cover.volume * lo),
        ci_high: Some(cover.volume * hi),
        samples: Some(samples),
        seed: Some(seed),
        censored,
    })
}

// ---------------------------------------------------------------------------
// Moment estimators
// ---------------------------------------------------------------------------

/// A transformed moment estimate with its sampling error.
///
/// `value` is the wrapped quantity (a power of the underlying mean);
/// `std_error` is the standard error of the *underlying mean* estimate
/// (sample standard deviation over √samples), and `value_std_error`
/// propagates it to `value` by the delta method.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub mean: f64,
    pub value_std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

struct MeanAccumulator {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

fn mean_over_lp_ball<F>(
    k: usize,
    p: f64,
    samples: u64,
    seed: u64,
    workers: usize,
    f: F,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let parts = sharded(samples, workers, seed, |rng, count| {
        let mut sampler = match LpBallSampler::with_rng(k, p, rng) {
            Ok(s) => s,
            Err(_) => unreachable!("validated below before sharding"),
        };
        let mut buf = vec![0.0; k];
        let mut acc = MeanAccumulator { sum: 0.0, sum_sq: 0.0, count };
        for _ in 0..count {
            sampler.sample_into(&mut buf);
            let v = f(&buf);
            acc.sum += v;
            acc.sum_sq += v * v;
        }
        acc
    });
    let sum: f64 = parts.iter().map(|a| a.sum).sum();
    let sum_sq: f64 = parts.iter().map(|a| a.sum_sq).sum();
    let nf = samples as f64;
    let mean = sum / nf;
    let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
    Ok((mean, (var / nf).sqrt()))
}

fn validate_p_finite(p: f64) -> Result<()> {
    if !(1.0..f64::INFINITY).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must be in [1, ∞), got {p}")));
    }
    Ok(())
}

/// Right-hand side of the gauge-moment volume bound:
/// ((k+p)/k · E_{B_p^k} ‖x‖_K^p)^{−1/p} with ‖x‖_K = maxᵢ |⟨x,uᵢ⟩|.
pub fn lemma4_rhs(
    body: &SlabBody,
    p: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<MomentEstimate> {
    validate_p_finite(p)?;
    let k = body.k();
    let gens = body.generators().floats().to_vec();
    let (mean, se) = mean_over_lp_ball(k, p, samples, seed, workers, move |x| {
        let gauge = gens
            .iter()
            .map(|u| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0f64, f64::max);
        gauge.powf(p)
    })?;
    let kf = k as f64;
    let value = ((kf + p) / kf * mean).powf(-1.0 / p);
    Ok(MomentEstimate {
        value,
        std_error: se,
        mean,
        value_std_error: delta_se(value, mean, p, se),
        samples,
        seed,
    })
}

/// The per-vector moment bound on |K|^{1/k}:
/// 2·((k+p)/k · Σᵢ E_{B_p^k} |⟨x,uᵢ⟩|^p)^{−1/p}.
pub fn lemma5_bound(
    us: &VectorSet,
    p: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<MomentEstimate> {
    validate_p_finite(p)?;
    if us.n() < us.k() {
        return Err(Error::InvalidParameter("need k ≤ n".into()));
    }
    let k = us.k();
    let gens = us.floats().to_vec();
    let (mean, se) = mean_over_lp_ball(k, p, samples, seed, workers, move |x| {
        gens.iter()
            .map(|u| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs().powf(p))
            .sum::<f64>()
    })?;
    let kf = k as f64;
    let value = 2.0 * ((kf + p) / kf * mean).powf(-1.0 / p);
    Ok(MomentEstimate {
        value,
        std_error: se,
        mean,
        value_std_error: delta_se(value, mean, p, se),
        samples,
        seed,
    })
}

/// The normalized directional moment
/// ((k+p)/|B_p^k| ∫_{B_p^k} |⟨x,v⟩|^p dx)^{1/p} for a unit vector v.
///
/// Khintchine plus Hölder caps it at √(p/2) for p ≥ 2 and at 2 for
/// 1 ≤ p < 2.
pub fn khintchine_moment(
    k: usize,
    p: f64,
    v: &[f64],
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<MomentEstimate> {
    validate_p_finite(p)?;
    if v.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: v.len() });
    }
    let norm2: f64 = v.iter().map(|c| c * c).sum();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "v must be a unit vector, |v|² = {norm2}"
        )));
    }
    let v = v.to_vec();
    let (mean, se) = mean_over_lp_ball(k, p, samples, seed, workers, move |x| {
        v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs().powf(p)
    })?;
    let kf = k as f64;
    let value = ((kf + p) * mean).powf(1.0 / p);
    Ok(MomentEstimate {
        value,
        std_error: se,
        mean,
        value_std_error: delta_se(value, mean, p, se),
        samples,
        seed,
    })
}

/// |d value/d mean| · se for value = c · mean^{±1/p}.
fn delta_se(value: f64, mean: f64, p: f64, se: f64) -> f64 {
    if mean <= 0.0 {
        return f64::INFINITY;
    }
    (value / (p * mean)).abs() * se
}

// ---------------------------------------------------------------------------
// Sections of B_p^n
// ---------------------------------------------------------------------------

/// Monte Carlo volume of the section B_p^n ∩ range(Q) for an n×k matrix
/// Q with orthonormal columns, computed in the k-dimensional coordinates
/// of the subspace: {t ∈ ℝᵏ : ‖Qt‖_p ≤ 1}.
///
/// Rejection domain: the Euclidean ball of radius max(1, n^{1/2−1/p}),
/// which contains the section body for every p ∈ [1, ∞].
pub fn section_volume_lp(
    q: &[Vec<f64>],
    p: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<VolumeResult> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be ≥ 1".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be in [1, ∞], got {p}")));
    }
    let n = q.len();
    if n == 0 {
        return Err(Error::InvalidParameter("Q must have rows".into()));
    }
    let k = q[0].len();
    if k == 0 || q.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidParameter("Q rows must share a positive length".into()));
    }
    // Orthonormality: QᵀQ = I within 1e-10.
    for a in 0..k {
        for b in a..k {
            let dot: f64 = (0..n).map(|i| q[i][a] * q[i][b]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            if (dot - target).abs() > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "Q columns not orthonormal: (QᵀQ)[{a}][{b}] = {dot}"
                )));
            }
        }
    }

    let radius = if p.is_infinite() {
        (n as f64).sqrt()
    } else {
        (n as f64).powf(0.5 - 1.0 / p).max(1.0)
    };
    let domain_volume = lp_ball_volume(k, 2.0)? * radius.powi(k as i32);

    let q_flat: Vec<f64> = q.iter().flat_map(|row| row.iter().copied()).collect();
    let counts = sharded(samples, workers, seed, |mut rng, count| {
        let mut t = vec![0.0; k];
        let mut hits = 0u64;
        for _ in 0..count {
            sample_unit_ball(&mut rng, &mut t);
            for c in t.iter_mut() {
                *c *= radius;
            }
            let norm = if p.is_infinite() {
                let mut m = 0.0f64;
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..k {
                        acc += q_flat[i * k + j] * t[j];
                    }
                    m = m.max(acc.abs());
                }
                m
            } else {
                let mut s = 0.0;
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..k {
                        acc += q_flat[i * k + j] * t[j];
                    }
                    s += acc.abs().powf(p);
                }
                s.powf(1.0 / p)
            };
            if norm <= 1.0 {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    let (lo, hi) = wilson_interval(hits, samples);
    let frac = hits as f64 / samples as f64;
    let censored = hits == 0;
    let volume = domain_volume * frac;
    Ok(VolumeResult {
        volume,
        exact: None,
        kth_root: if censored { 0.0 } else { volume.powf(1.0 / k as f64) },
        method: VolumeMethod::Mc,
        ci_low: Some(domain_volume * lo),
        ci_high: Some(domain_volume * hi),
        samples: Some(samples),
        seed: Some(seed),
        censored,
    })
}

/// Standard error implied by a Wilson CI, used to combine section
/// estimates in monotonicity checks.
pub fn hit_rate_std_error(res: &VolumeResult) -> f64 {
    match (res.ci_low, res.ci_high) {
        (Some(lo), Some(hi)) => (hi - lo) / (2.0 * Z95),
        _ => 0.0,
    }
}
