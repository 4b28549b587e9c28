//! Geometric instance data: vector sets, slab bodies, ℓ_p balls, and the
//! JSON instance file format.
//!
//! A `VectorSet` holds the functionals u₁…u_n ⊂ ℝᵏ that define the slab
//! body K = {x : |⟨x,uᵢ⟩| ≤ 1 for every i}. Entries are exact rationals;
//! a floating copy is derived once at construction for the Monte Carlo
//! paths.

use std::path::Path;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::{self, Rat};

/// n row vectors in ℝᵏ, exact rationals authoritative, floats derived.
#[derive(Debug, Clone)]
pub struct VectorSet {
    k: usize,
    vectors: Vec<Vec<Rat>>,
    floats: Vec<Vec<f64>>,
    label: Option<String>,
}

/// Equality is decided by the exact data; the float cache is derived.
impl PartialEq for VectorSet {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.vectors == other.vectors && self.label == other.label
    }
}

impl Eq for VectorSet {}

impl VectorSet {
    pub fn new(k: usize, vectors: Vec<Vec<Rat>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be ≥ 1".into()));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidParameter("need at least one vector".into()));
        }
        for row in &vectors {
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: row.len() });
            }
        }
        let floats = vectors
            .iter()
            .map(|row| row.iter().map(linalg::rat_to_f64).collect())
            .collect();
        Ok(VectorSet { k, vectors, floats, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn floats(&self) -> &[Vec<f64>] {
        &self.floats
    }

    /// Euclidean norms |uᵢ|₂ in floating point.
    pub fn norms(&self) -> Vec<f64> {
        self.floats
            .iter()
            .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect()
    }

    /// Exact rank of the n×k matrix of generators.
    pub fn rank(&self) -> usize {
        linalg::rank(&self.vectors)
    }

    /// Scales every vector by an exact rational factor.
    pub fn scaled(&self, factor: &Rat) -> VectorSet {
        let vectors = self
            .vectors
            .iter()
            .map(|row| row.iter().map(|e| e * factor).collect())
            .collect();
        VectorSet::new(self.k, vectors).expect("scaling preserves shape")
    }

    /// The n = k standard basis vectors; body = the cube [−1,1]ᵏ.
    pub fn standard_basis(k: usize) -> Result<Self> {
        let vectors = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() })
                    .collect()
            })
            .collect();
        VectorSet::new(k, vectors)
    }
}

/// The symmetric polytope K = {x ∈ ℝᵏ : |⟨x,uᵢ⟩| ≤ 1 for every i}.
#[derive(Debug, Clone)]
pub struct SlabBody {
    generators: VectorSet,
}

impl SlabBody {
    pub fn new(generators: VectorSet) -> Self {
        SlabBody { generators }
    }

    pub fn generators(&self) -> &VectorSet {
        &self.generators
    }

    pub fn k(&self) -> usize {
        self.generators.k()
    }

    pub fn n(&self) -> usize {
        self.generators.n()
    }

    /// Bounded ⇔ the generators span ℝᵏ. Zero vectors are allowed; they
    /// contribute the trivial slab ℝᵏ and never affect boundedness.
    pub fn is_bounded(&self) -> bool {
        self.generators.rank() == self.generators.k()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.generators
            .vectors()
            .iter()
            .all(|u| linalg::dot(u, x).abs() <= Rat::from_integer(1.into()))
    }

    pub fn contains_f64(&self, x: &[f64]) -> bool {
        self.generators
            .floats()
            .iter()
            .all(|u| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs() <= 1.0)
    }
}

/// Volume of the unit ℓ_p ball in ℝᵏ: 2ᵏ Γ(1+1/p)ᵏ / Γ(1+k/p).
///
/// `p = f64::INFINITY` is the cube with volume 2ᵏ.
pub fn lp_ball_volume(k: usize, p: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be ≥ 1".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be in [1, ∞], got {p}")));
    }
    if p.is_infinite() {
        return Ok(2f64.powi(k as i32));
    }
    let kf = k as f64;
    let ln_vol = kf * ((2f64).ln() + ln_gamma(1.0 + 1.0 / p)) - ln_gamma(1.0 + kf / p);
    Ok(ln_vol.exp())
}

/// n points drawn independently and uniformly on the unit sphere S^{k−1},
/// promoted to exact rationals. Deterministic in `seed`.
pub fn random_unit_instance(k: usize, n: usize, seed: u64) -> Result<VectorSet> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ k ≤ n, got k={k}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(n);
    for _ in 0..n {
        vectors.push(random_unit_vector(&mut rng, k, 1.0));
    }
    let vectors = vectors
        .into_iter()
        .map(|row| row.into_iter().map(linalg::rat_from_f64).collect())
        .collect();
    VectorSet::new(k, vectors)
}

/// The W(ε) construction: the k standard basis vectors followed by m
/// vectors ε·zᵢ where every zᵢ has Euclidean norm (log(1+m/k))^{−1/2}.
pub fn gluskin_instance(k: usize, m: usize, eps: f64, seed: u64) -> Result<VectorSet> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("k and m must be ≥ 1".into()));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be > 0, got {eps}")));
    }
    let target_norm = (1.0 + m as f64 / k as f64).ln().powf(-0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors: Vec<Vec<Rat>> = VectorSet::standard_basis(k)?.vectors().to_vec();
    for _ in 0..m {
        let z = random_unit_vector(&mut rng, k, eps * target_norm);
        vectors.push(z.into_iter().map(linalg::rat_from_f64).collect());
    }
    Ok(VectorSet::new(k, vectors)?.with_label(format!("gluskin:k={k},m={m},eps={eps}")))
}

/// Normalized Gaussian point on the sphere, scaled to `norm`.
fn random_unit_vector(rng: &mut ChaCha8Rng, k: usize, norm: f64) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-12 {
            return g.into_iter().map(|x| x / len * norm).collect();
        }
    }
}

// ---------------------------------------------------------------------------
// Instance file I/O
// ---------------------------------------------------------------------------

/// On-disk schema: rationals encoded as "num/den" strings or bare JSON
/// integers, so the round-trip is lossless.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    k: usize,
    n: usize,
    vectors: Vec<Vec<serde_json::Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

fn entry_to_value(x: &Rat) -> serde_json::Value {
    use num_traits::{One, ToPrimitive};
    if x.denom().is_one() {
        if let Some(i) = x.numer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::from(linalg::rat_format(x))
}

fn value_to_entry(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(linalg::rat_int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Rat::from_integer(u.into()))
            } else {
                Err(Error::Parse(format!(
                    "entry {n} is not an integer; write non-integers as \"num/den\""
                )))
            }
        }
        serde_json::Value::String(s) => linalg::rat_parse(s),
        other => Err(Error::Parse(format!("bad vector entry {other}"))),
    }
}

pub fn save_instance(v: &VectorSet, path: impl AsRef<Path>) -> Result<()> {
    let file = InstanceFile {
        k: v.k(),
        n: v.n(),
        vectors: v
            .vectors()
            .iter()
            .map(|row| row.iter().map(entry_to_value).collect())
            .collect(),
        label: v.label().map(str::to_owned),
    };
    let body = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, body + "\n")?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<VectorSet> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<VectorSet> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.vectors.len() != file.n {
        return Err(Error::Parse(format!(
            "file claims n={} but has {} vectors",
            file.n,
            file.vectors.len()
        )));
    }
    let mut vectors = Vec::with_capacity(file.n);
    for row in &file.vectors {
        if row.len() != file.k {
            return Err(Error::DimensionMismatch { expected: file.k, got: row.len() });
        }
        vectors.push(row.iter().map(value_to_entry).collect::<Result<Vec<_>>>()?);
    }
    let v = VectorSet::new(file.k, vectors)?;
    Ok(match file.label {
        Some(l) => v.with_label(l),
        None => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat_frac, rat_int};
    use proptest::prelude::*;

    #[test]
    fn standard_basis_is_the_cube() {
        let v = VectorSet::standard_basis(3).unwrap();
        assert_eq!(v.k(), 3);
        assert_eq!(v.n(), 3);
        let body = SlabBody::new(v);
        assert!(body.is_bounded());
        assert!(body.contains(&[rat_int(1), rat_int(-1), rat_int(0)]));
        assert!(!body.contains(&[rat_frac(3, 2), rat_int(0), rat_int(0)]));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(VectorSet::new(0, vec![vec![]]).is_err());
        assert!(VectorSet::new(2, vec![]).is_err());
        let bad = VectorSet::new(2, vec![vec![rat_int(1), rat_int(0), rat_int(0)]]);
        assert!(matches!(bad, Err(Error::DimensionMismatch { expected: 2, got: 3 })));
    }

    #[test]
    fn boundedness_is_rank() {
        let v = VectorSet::new(2, vec![vec![rat_int(1), rat_int(0)]]).unwrap();
        assert!(!SlabBody::new(v).is_bounded());
        // zero vectors don't help or hurt
        let v = VectorSet::new(
            2,
            vec![
                vec![rat_int(0), rat_int(0)],
                vec![rat_int(1), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
            ],
        )
        .unwrap();
        assert!(SlabBody::new(v).is_bounded());
    }

    #[test]
    fn lp_ball_volume_known_values() {
        assert!((lp_ball_volume(2, 2.0).unwrap() - std::f64::consts::PI).abs() < 1e-12);
        assert!((lp_ball_volume(2, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((lp_ball_volume(1, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((lp_ball_volume(1, 7.3).unwrap() - 2.0).abs() < 1e-12);
        assert!((lp_ball_volume(4, f64::INFINITY).unwrap() - 16.0).abs() < 1e-12);
        assert!(lp_ball_volume(2, 0.5).is_err());
        assert!(lp_ball_volume(0, 2.0).is_err());
    }

    #[test]
    fn lp_ball_volume_euclidean_matches_factorial_forms() {
        // Independent closed forms: v_{2m} = π^m/m!, v_{2m+1} = 2 (4π)^m m!/(2m+1)!.
        let mut fact = vec![1.0f64];
        for i in 1..=25 {
            fact.push(fact[i - 1] * i as f64);
        }
        for k in 1..=12usize {
            let expect = if k % 2 == 0 {
                let m = k / 2;
                std::f64::consts::PI.powi(m as i32) / fact[m]
            } else {
                let m = k / 2;
                2.0 * (4.0 * std::f64::consts::PI).powi(m as i32) * fact[m] / fact[2 * m + 1]
            };
            let got = lp_ball_volume(k, 2.0).unwrap();
            assert!(
                (got - expect).abs() <= 1e-12 * expect,
                "k={k}: got {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn lp_ball_volume_cross_polytope_is_exact() {
        // |B_1^k| = 2^k / k!
        let mut fact = 1.0f64;
        for k in 1..=10usize {
            fact *= k as f64;
            let expect = 2f64.powi(k as i32) / fact;
            let got = lp_ball_volume(k, 1.0).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn v_k_recursion_holds() {
        // v_k = v_{k−1} √π Γ((k+1)/2) / Γ(k/2+1)
        for k in 2..=50usize {
            let vk = lp_ball_volume(k, 2.0).unwrap();
            let vkm1 = lp_ball_volume(k - 1, 2.0).unwrap();
            let ratio = std::f64::consts::PI.sqrt()
                * (ln_gamma((k as f64 + 1.0) / 2.0) - ln_gamma(k as f64 / 2.0 + 1.0)).exp();
            assert!((vk - vkm1 * ratio).abs() <= 1e-10 * vk, "k={k}");
        }
    }

    #[test]
    fn random_unit_instance_normalized_and_deterministic() {
        let v = random_unit_instance(3, 5, 7).unwrap();
        assert_eq!(v.k(), 3);
        assert_eq!(v.n(), 5);
        for row in v.floats() {
            let norm2: f64 = row.iter().map(|x| x * x).sum();
            assert!((norm2 - 1.0).abs() < 1e-12, "|u|² = {norm2}");
        }
        let again = random_unit_instance(3, 5, 7).unwrap();
        assert_eq!(v, again);
        let other = random_unit_instance(3, 5, 8).unwrap();
        assert_ne!(v, other);
        assert!(random_unit_instance(4, 3, 0).is_err());
    }

    #[test]
    fn gluskin_instance_shape_and_norms() {
        let v = gluskin_instance(2, 1, 1.0, 3).unwrap();
        assert_eq!(v.n(), 3);
        let basis = VectorSet::standard_basis(2).unwrap();
        assert_eq!(&v.vectors()[..2], basis.vectors());
        let norm: f64 = v.floats()[2].iter().map(|x| x * x).sum::<f64>().sqrt();
        let expect = (1.0 + 0.5f64).ln().powf(-0.5);
        assert!((norm - expect).abs() < 1e-12);
        assert!(gluskin_instance(0, 1, 1.0, 0).is_err());
        assert!(gluskin_instance(2, 1, 0.0, 0).is_err());
    }

    #[test]
    fn instance_file_roundtrip_exact() {
        let v = VectorSet::new(
            2,
            vec![
                vec![rat_frac(1, 3), rat_frac(-2, 5)],
                vec![rat_int(1), rat_int(0)],
            ],
        )
        .unwrap()
        .with_label("fractions");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        save_instance(&v, &path).unwrap();
        let back = load_instance(&path).unwrap();
        assert_eq!(v, back);
        // entries written as "1/3" strings and bare ints
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"1/3\""));
        assert!(text.contains("\"-2/5\""));
    }

    #[test]
    fn instance_file_errors() {
        assert!(parse_instance("not json").is_err());
        let wrong_row = r#"{"k":2,"n":1,"vectors":[[1,0,0]]}"#;
        assert!(matches!(
            parse_instance(wrong_row),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
        let wrong_n = r#"{"k":2,"n":3,"vectors":[[1,0]]}"#;
        assert!(parse_instance(wrong_n).is_err());
        let float_entry = r#"{"k":1,"n":1,"vectors":[[0.5]]}"#;
        assert!(parse_instance(float_entry).is_err());
    }

    #[test]
    fn unit_square_file_parses() {
        let text = r#"{"k":2,"n":2,"vectors":[[1,0],[0,1]],"label":"square"}"#;
        let v = parse_instance(text).unwrap();
        assert_eq!(v.vectors(), VectorSet::standard_basis(2).unwrap().vectors());
        assert_eq!(v.label(), Some("square"));
    }

    proptest! {
        #[test]
        fn membership_is_symmetric(
            seed in 0u64..1000,
            k in 1usize..5,
            coords in prop::collection::vec(-2.0f64..2.0, 6)
        ) {
            let n = k + 2;
            let v = random_unit_instance(k, n, seed).unwrap();
            let body = SlabBody::new(v);
            let x: Vec<Rat> = coords[..k]
                .iter()
                .map(|&c| linalg::rat_from_f64(c))
                .collect();
            let neg: Vec<Rat> = x.iter().map(|c| -c.clone()).collect();
            prop_assert_eq!(body.contains(&x), body.contains(&neg));
        }

        #[test]
        fn file_roundtrip_random_rationals(
            nums in prop::collection::vec((-100i64..100, 1i64..50), 4)
        ) {
            let vectors = vec![
                vec![rat_frac(nums[0].0, nums[0].1), rat_frac(nums[1].0, nums[1].1)],
                vec![rat_frac(nums[2].0, nums[2].1), rat_frac(nums[3].0, nums[3].1)],
            ];
            let v = VectorSet::new(2, vectors).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("i.json");
            save_instance(&v, &path).unwrap();
            prop_assert_eq!(load_instance(&path).unwrap(), v);
        }
    }
}
