//! Closed-form constants and Monte-Carlo evaluation of hyperplane-measure
//! integrals.
//!
//! Hyperplanes are parametrized by a unit normal u and an origin distance
//! t >= 0. The invariant measure is normalized so that hyperplanes hitting
//! the unit ball have total mass 2, i.e. dμ = (2/(d κ_d)) dt du with du the
//! full surface measure (mass d κ_d). Sampling u uniformly on the sphere and
//! t uniformly on [0, R] with weight 2R therefore makes E[2R f(H)] equal to
//! ∫ f dμ for integrands supported on offsets below R.

use crate::bodies::ConvexBody;
use crate::rng::RngStream;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// An affine hyperplane (unit normal, origin distance) plus the Monte-Carlo
/// weight it was sampled with (2R; zero for manually built planes).
#[derive(Clone, Debug, Serialize)]
pub struct Hyperplane {
    normal: Vec<f64>,
    offset: f64,
    mc_weight: f64,
}

impl Hyperplane {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.len() < 2 {
            return Err(Error::invalid("hyperplane normal must have dimension >= 2"));
        }
        let norm2: f64 = normal.iter().map(|c| c * c).sum();
        if (norm2.sqrt() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("hyperplane normal must be unit length"));
        }
        if !offset.is_finite() || offset < 0.0 {
            return Err(Error::invalid("hyperplane offset must be >= 0"));
        }
        Ok(Hyperplane {
            normal,
            offset,
            mc_weight: 0.0,
        })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn mc_weight(&self) -> f64 {
        self.mc_weight
    }
}

/// Draw a hyperplane with u uniform on S^{d-1} and t uniform on [0, R];
/// the attached weight 2R makes weighted averages equal μ-integrals.
pub fn sample_hyperplane(r: f64, dim: usize, rng: &mut RngStream) -> Result<Hyperplane> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::invalid("offset range R must be positive"));
    }
    if dim < 2 {
        return Err(Error::invalid("hyperplane dimension must be >= 2"));
    }
    let mut normal = vec![0.0; dim];
    loop {
        rng.fill_normal(&mut normal);
        let n2: f64 = normal.iter().map(|c| c * c).sum();
        if n2 > 0.0 {
            let n = n2.sqrt();
            normal.iter_mut().for_each(|c| *c /= n);
            break;
        }
    }
    let offset = r * rng.uniform();
    Ok(Hyperplane {
        normal,
        offset,
        mc_weight: 2.0 * r,
    })
}

// ---------------------------------------------------------------------------
// Gamma, Beta, and the constant table.
// ---------------------------------------------------------------------------

/// Gamma at half-integer arguments, exact up to f64 rounding:
/// Γ(k) = (k-1)!, Γ(k + 1/2) = sqrt(π) Π (j - 1/2).
fn gamma_half(twice_x: u64) -> f64 {
    if twice_x.is_multiple_of(2) {
        let k = twice_x / 2;
        let mut acc = 1.0;
        for j in 2..k {
            acc *= j as f64;
        }
        acc
    } else {
        let k = (twice_x - 1) / 2;
        let mut acc = std::f64::consts::PI.sqrt();
        for j in 1..=k {
            acc *= j as f64 - 0.5;
        }
        acc
    }
}

/// ln Γ(x) for x > 0 (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Volume κ_d of the d-dimensional unit ball: π^{d/2} / Γ(d/2 + 1).
pub fn kappa(d: usize) -> Result<f64> {
    if d < 1 {
        return Err(Error::invalid("kappa requires d >= 1"));
    }
    let pi = std::f64::consts::PI;
    if d <= 300 {
        Ok(pi.powf(d as f64 / 2.0) / gamma_half(d as u64 + 2))
    } else {
        Ok((d as f64 / 2.0 * pi.ln() - ln_gamma(d as f64 / 2.0 + 1.0)).exp())
    }
}

/// Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
        return Err(Error::invalid("beta function requires positive arguments"));
    }
    let half = |x: f64| -> Option<u64> {
        let t = 2.0 * x;
        (t.fract() == 0.0 && t <= 600.0).then_some(t as u64)
    };
    if let (Some(ta), Some(tb)) = (half(a), half(b)) {
        Ok(gamma_half(ta) * gamma_half(tb) / gamma_half(ta + tb))
    } else {
        Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
    }
}

/// The planar lower-bound constant e^{-3/2} / 2 for E deg_2 / n.
pub fn planar_deg_constant() -> f64 {
    0.5 * (-1.5f64).exp()
}

/// Closed-form constants for one dimension.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantTable {
    pub dim: usize,
    /// Unit-ball volume κ_d.
    pub kappa: f64,
    /// Lower limit constant 2/d! for n^{-d} E N.
    pub lower_c: f64,
    /// Upper limit constant (d/(d+1)) κ_{d-1}^{d+1} κ_{d²} / (κ_d^{d-1} κ_{(d-1)(d+1)}).
    pub upper_c: f64,
    /// Classical section-integral constant κ_{d-1}^{d+1} κ_{d²} / (κ_d^d κ_{(d-1)(d+1)}).
    pub section_ineq_c: f64,
    /// e^{-3/2}/2, planar only.
    pub planar_deg_c: Option<f64>,
    /// Close-base limit constant c(d): exact π/2 for d=2, otherwise the
    /// upper bound κ_d^{d-1}/d!.
    pub close_base_c: f64,
    pub close_base_c_is_exact: bool,
    /// Double-hyperplane integral bound at R=1, defined for d >= 3.
    pub pair_integral_bound_r1: Option<f64>,
}

pub fn constant_table(d: usize) -> Result<ConstantTable> {
    if d < 2 {
        return Err(Error::invalid("constants require d >= 2"));
    }
    let kd = kappa(d)?;
    let kdm1 = kappa(d - 1)?;
    let kd2 = kappa(d * d)?;
    let kcross = kappa((d - 1) * (d + 1))?;
    let mut fact = 1.0;
    for i in 2..=d {
        fact *= i as f64;
    }
    let section_ineq_c = kdm1.powi(d as i32 + 1) * kd2 / (kd.powi(d as i32) * kcross);
    let upper_c = d as f64 / (d as f64 + 1.0) * kd * section_ineq_c;
    Ok(ConstantTable {
        dim: d,
        kappa: kd,
        lower_c: 2.0 / fact,
        upper_c,
        section_ineq_c,
        planar_deg_c: (d == 2).then(planar_deg_constant),
        close_base_c: if d == 2 {
            std::f64::consts::FRAC_PI_2
        } else {
            kd.powi(d as i32 - 1) / fact
        },
        close_base_c_is_exact: d == 2,
        pair_integral_bound_r1: if d >= 3 {
            Some(pair_integral_bound(d, 1.0)?)
        } else {
            None
        },
    })
}

/// Lower bound of the new section-integral inequality:
/// ∫ λ_{d-1}(K ∩ H)^{d+1} dμ >= 2(d+1)/(d! d κ_d) · λ_d(K)^d.
pub fn new_inequality_lower(d: usize, vol: f64) -> Result<f64> {
    let mut fact = 1.0;
    for i in 2..=d {
        fact *= i as f64;
    }
    Ok(2.0 * (d as f64 + 1.0) / (fact * d as f64 * kappa(d)?) * vol.powi(d as i32))
}

/// Limit of E N_{γn}: c(d) γ^{-d} λ^{-(d-1)}. For d=2 the exact c(2)=π/2 is
/// used when no estimate is supplied; d >= 3 has no closed form and requires
/// an estimated c(d).
pub fn close_base_limit(d: usize, gamma: f64, vol: f64, c_d: Option<f64>) -> Result<f64> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::invalid("gamma must be positive"));
    }
    if !vol.is_finite() || vol <= 0.0 {
        return Err(Error::invalid("volume must be positive"));
    }
    let c = match (d, c_d) {
        (_, Some(c)) => c,
        (2, None) => std::f64::consts::FRAC_PI_2,
        _ => {
            return Err(Error::invalid(
                "c(d) has no closed form for d >= 3; pass an estimate",
            ))
        }
    };
    Ok(c * gamma.powi(-(d as i32)) * vol.powi(-(d as i32 - 1)))
}

// ---------------------------------------------------------------------------
// Monte-Carlo engine and estimators.
// ---------------------------------------------------------------------------

/// A Monte-Carlo result: never a bare number.
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci95: [f64; 2],
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_sums(sum: f64, sum2: f64, samples: u64, seed: u64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 {
            ((sum2 - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let stderr = (var / n).sqrt();
        McEstimate {
            mean,
            stderr,
            ci95: [mean - 1.96 * stderr, mean + 1.96 * stderr],
            samples,
            seed,
        }
    }

    pub fn scaled(&self, c: f64) -> McEstimate {
        let mean = self.mean * c;
        let stderr = self.stderr * c.abs();
        McEstimate {
            mean,
            stderr,
            ci95: [mean - 1.96 * stderr, mean + 1.96 * stderr],
            samples: self.samples,
            seed: self.seed,
        }
    }

    pub fn exact(value: f64, seed: u64) -> McEstimate {
        McEstimate {
            mean: value,
            stderr: 0.0,
            ci95: [value, value],
            samples: 0,
            seed,
        }
    }
}

const BLOCK: u64 = 1 << 16;

/// Generic block-structured Monte-Carlo mean. Block b draws from substream
/// (seed, b); partial sums are reduced in block order, so the estimate is
/// bit-identical at any thread count.
pub fn mc_estimate<F>(samples: u64, seed: u64, f: F) -> McEstimate
where
    F: Fn(&mut RngStream) -> f64 + Sync,
{
    assert!(samples > 0, "need at least one sample");
    let nblocks = samples.div_ceil(BLOCK);
    let partials: Vec<(f64, f64)> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(seed, b);
            let count = BLOCK.min(samples - b * BLOCK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let x = f(&mut rng);
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .collect();
    let (sum, sum2) = partials
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    McEstimate::from_sums(sum, sum2, samples, seed)
}

/// μ-measure of {H : predicate} restricted to offsets below r, by weighted
/// hit counting.
pub fn hyperplane_measure<F>(dim: usize, r: f64, samples: u64, seed: u64, hit: F) -> Result<McEstimate>
where
    F: Fn(&Hyperplane) -> bool + Sync,
{
    if dim < 2 {
        return Err(Error::invalid("dimension must be >= 2"));
    }
    Ok(mc_estimate(samples, seed, |rng| {
        let h = sample_hyperplane(r, dim, rng).expect("validated");
        if hit(&h) {
            h.mc_weight()
        } else {
            0.0
        }
    }))
}

/// MC estimate of ∫ λ_{d-1}(K ∩ H)^m dμ(H).
pub fn section_integral(
    body: &ConvexBody,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if m < 1 {
        return Err(Error::invalid("moment exponent must be >= 1"));
    }
    let dim = body.dim();
    let r = body.bounding_radius();
    // Validate the section path once up front so the closure can't fail.
    {
        let mut probe = RngStream::new(seed, u64::MAX);
        let h = sample_hyperplane(r, dim, &mut probe)?;
        body.section_measure(&h)?;
    }
    Ok(mc_estimate(samples, seed, |rng| {
        let h = sample_hyperplane(r, dim, rng).expect("validated");
        let sec = body.section_measure(&h).expect("validated");
        h.mc_weight() * sec.powi(m as i32)
    }))
}

/// Closed-form ball section moment ∫ λ_{d-1}(B_r ∩ H)^m dμ =
/// κ_{d-1}^m r^{(d-1)m+1} B(1/2, (d-1)m/2 + 1).
pub fn ball_section_moment_closed(d: usize, r: f64, m: usize) -> Result<f64> {
    if d < 2 || m < 1 {
        return Err(Error::invalid("need d >= 2 and m >= 1"));
    }
    let p = (d - 1) as f64 * m as f64 / 2.0;
    Ok(kappa(d - 1)?.powi(m as i32) * r.powi(((d - 1) * m + 1) as i32) * beta_fn(0.5, p + 1.0)?)
}

/// MC estimate of the limit (d κ_d/(d+1)) λ_d(K)^{-d} ∫ λ_{d-1}(K∩H)^{d+1} dH
/// of n^{-d} E N over uniform samples from K.
pub fn empty_count_limit(body: &ConvexBody, samples: u64, seed: u64) -> Result<McEstimate> {
    let d = body.dim();
    let integral = section_integral(body, d + 1, samples, seed)?;
    let factor =
        d as f64 * kappa(d)? / (d as f64 + 1.0) * body.volume().powi(-(d as i32));
    Ok(integral.scaled(factor))
}

/// MC estimate of c(d) = (d!)^{-1} ∫_{(B^d)^{d-1}} Π_{i<j} 1(|y_i-y_j|<=1).
/// Exact for d=2 (no pair constraints): κ_2/2 = π/2.
pub fn estimate_cd(d: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    if d < 2 {
        return Err(Error::invalid("estimate_cd requires d >= 2"));
    }
    if d == 2 {
        return Ok(McEstimate::exact(std::f64::consts::FRAC_PI_2, seed));
    }
    let mut fact = 1.0;
    for i in 2..=d {
        fact *= i as f64;
    }
    let scale = kappa(d)?.powi(d as i32 - 1) / fact;
    let k = d - 1;
    Ok(mc_estimate(samples, seed, move |rng| {
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            pts.push(sample_unit_ball(d, rng));
        }
        for i in 0..k {
            for j in i + 1..k {
                let d2: f64 = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if d2 > 1.0 {
                    return 0.0;
                }
            }
        }
        scale
    }))
}

fn sample_unit_ball(d: usize, rng: &mut RngStream) -> Vec<f64> {
    loop {
        let mut g = vec![0.0; d];
        rng.fill_normal(&mut g);
        let n2: f64 = g.iter().map(|c| c * c).sum();
        if n2 == 0.0 {
            continue;
        }
        let scale = rng.uniform().powf(1.0 / d as f64) / n2.sqrt();
        g.iter_mut().for_each(|c| *c *= scale);
        return g;
    }
}

/// Closed-form bound R d(d-1) κ_d κ_{d-1} / (d-2) · B(d/2, 1/2) for the
/// double-hyperplane integral; defined for d >= 3.
pub fn pair_integral_bound(d: usize, r: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid("the bound's d-2 denominator needs d >= 3"));
    }
    Ok(r * (d * (d - 1)) as f64 * kappa(d)? * kappa(d - 1)? / (d as f64 - 2.0)
        * beta_fn(d as f64 / 2.0, 0.5)?)
}

/// MC estimate of ∫∫ 1(H1 ∩ H2 ∩ K ≠ ∅) sin^{-2}φ dμ dμ over independent
/// hyperplane pairs, with the hit test on the minimum-norm point of the
/// intersection flat (2x2 Gram system of the normals).
///
/// The sin^{-2} integrand has heavy tails; the reported stderr uses the
/// sample variance, which understates the error of heavy-tailed means — read
/// the CI as indicative, not exact.
pub fn pair_integral_estimate(body: &ConvexBody, samples: u64, seed: u64) -> Result<McEstimate> {
    let d = body.dim();
    if d != 3 {
        return Err(Error::invalid(
            "the pair estimator is implemented for d=3 bodies",
        ));
    }
    let r = body.bounding_radius();
    enum Hit {
        Ball(f64),
        Cube(f64),
    }
    let hit_kind = match body {
        ConvexBody::Ball { radius, .. } => Hit::Ball(*radius),
        ConvexBody::Cube { side, .. } => Hit::Cube(*side),
        _ => return Err(Error::invalid("d=3 bodies are balls and cubes")),
    };
    Ok(mc_estimate(samples, seed, move |rng| {
        // Near-parallel pairs are a measure-zero event that only contributes
        // floating-point blowup; reject and redraw.
        let (u1, t1, u2, t2, s2) = loop {
            let h1 = sample_hyperplane(r, 3, rng).expect("validated");
            let h2 = sample_hyperplane(r, 3, rng).expect("validated");
            let c: f64 = h1
                .normal()
                .iter()
                .zip(h2.normal())
                .map(|(a, b)| a * b)
                .sum();
            let s2 = 1.0 - c * c;
            if s2 > 1e-24 {
                break (
                    h1.normal().to_vec(),
                    h1.offset(),
                    h2.normal().to_vec(),
                    h2.offset(),
                    s2,
                );
            }
        };
        let c: f64 = u1.iter().zip(&u2).map(|(a, b)| a * b).sum();
        // Minimum-norm point of the intersection line: x = a u1 + b u2 with
        // <x,u1> = t1, <x,u2> = t2.
        let a = (t1 - c * t2) / s2;
        let b = (t2 - c * t1) / s2;
        let x: Vec<f64> = (0..3).map(|i| a * u1[i] + b * u2[i]).collect();
        let hit = match hit_kind {
            Hit::Ball(radius) => {
                x.iter().map(|v| v * v).sum::<f64>() <= radius * radius
            }
            Hit::Cube(side) => {
                let w = [
                    u1[1] * u2[2] - u1[2] * u2[1],
                    u1[2] * u2[0] - u1[0] * u2[2],
                    u1[0] * u2[1] - u1[1] * u2[0],
                ];
                line_hits_cube(&x, &w, side)
            }
        };
        if hit {
            (2.0 * r) * (2.0 * r) / s2
        } else {
            0.0
        }
    }))
}

/// Does the line x + s w meet the origin-centered cube of the given side?
fn line_hits_cube(x: &[f64], w: &[f64], side: f64) -> bool {
    let half = side / 2.0;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..3 {
        if w[i].abs() < 1e-300 {
            if x[i].abs() > half {
                return false;
            }
            continue;
        }
        let (a, b) = ((-half - x[i]) / w[i], (half - x[i]) / w[i]);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
        if lo > hi {
            return false;
        }
    }
    true
}
