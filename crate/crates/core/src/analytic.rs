//! The symmetric three-battlefield game `ACB(1, 1, 3)`.
//!
//! Every equilibrium strategy has the same uniform marginals: battlefield `j`
//! is played uniformly on `[lower_j, upper_j]`, with bounds `[0, 1/3]`,
//! `[1/6, 1/2]` and `[1/3, 2/3]`. One joint distribution with these marginals
//! spreads mass 1/3 uniformly over each side of the triangle with vertices
//! `(1/3,1/3,1/3)`, `(0,1/2,1/2)`, `(1/6,1/6,2/3)`. Replacing the triangle by
//! its three corner copies at scale 1/3, recursively, keeps the marginals and
//! yields a fractal family; mixtures of family members keep them too.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::game::Allocation;
use crate::rational::{self, int, ratio, Rational};

/// Uniform marginal CDF of one battlefield in `ACB(1, 1, 3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalCdf {
    pub battlefield: usize,
    pub lower: Rational,
    pub upper: Rational,
}

impl MarginalCdf {
    /// `j` is 1-based.
    pub fn for_battlefield(j: usize) -> Result<Self> {
        let (lower, upper) = match j {
            1 => (int(0), ratio(1, 3)),
            2 => (ratio(1, 6), ratio(1, 2)),
            3 => (ratio(1, 3), ratio(2, 3)),
            _ => {
                return Err(Error::input(format!(
                    "battlefield must be 1, 2 or 3, got {j}"
                )))
            }
        };
        Ok(Self {
            battlefield: j,
            lower,
            upper,
        })
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        if u < &self.lower {
            Rational::zero()
        } else if u > &self.upper {
            Rational::one()
        } else {
            (u - &self.lower) / (&self.upper - &self.lower)
        }
    }

    pub fn contains(&self, u: &Rational) -> bool {
        &self.lower <= u && u <= &self.upper
    }
}

/// `F^j(u)` for `j ∈ {1, 2, 3}`.
pub fn marginal_cdf(j: usize, u: &Rational) -> Result<Rational> {
    Ok(MarginalCdf::for_battlefield(j)?.eval(u))
}

/// Payoff of the pure strategy `p` against any equilibrium strategy of
/// `ACB(1, 1, 3)`: `(F¹(a) + F²(b) + F³(c)) / 3`. Ties have probability zero
/// against the atomless equilibrium, so only the marginals matter.
pub fn payoff_vs_triangle(p: &Allocation) -> Result<Rational> {
    if p.battlefields() != 3 || !p.owner_budget().is_one() {
        return Err(Error::input(
            "payoff_vs_triangle needs a 3-battlefield allocation with budget 1",
        ));
    }
    let mut total = Rational::zero();
    for (j, x) in p.levels().iter().enumerate() {
        total += marginal_cdf(j + 1, x)?;
    }
    Ok(total / int(3))
}

/// True iff every coordinate of `p` lies inside its marginal's support, which
/// is exactly where [`payoff_vs_triangle`] reaches 1/2.
pub fn in_support_box(p: &Allocation) -> bool {
    p.levels()
        .iter()
        .enumerate()
        .all(|(j, x)| MarginalCdf::for_battlefield(j + 1).is_ok_and(|f| f.contains(x)))
}

pub type Point = [Rational; 3];

pub fn base_triangle() -> [Point; 3] {
    [
        [ratio(1, 3), ratio(1, 3), ratio(1, 3)],
        [int(0), ratio(1, 2), ratio(1, 2)],
        [ratio(1, 6), ratio(1, 6), ratio(2, 3)],
    ]
}

/// Members of the triangle-boundary family, optionally mixed over depths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleFamilySpec {
    pub depth: u32,
    /// `(depth, weight)` pairs; when present the depth of each sample is drawn
    /// from these weights and `depth` is ignored.
    pub mixture: Option<Vec<(u32, Rational)>>,
}

impl TriangleFamilySpec {
    pub fn depth(depth: u32) -> Self {
        Self {
            depth,
            mixture: None,
        }
    }

    pub fn mixture(weights: Vec<(u32, Rational)>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::input(
                "mixture weights must be positive and nonempty",
            ));
        }
        let total: Rational = weights.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(Error::input(format!(
                "mixture weights sum to {}, not 1",
                rational::format(&total)
            )));
        }
        Ok(Self {
            depth: 0,
            mixture: Some(weights),
        })
    }
}

/// Seeded draws used by the sampler.
///
/// The generator is SplitMix64 seeded directly with the user seed. A unit draw
/// takes the top 53 bits `k` of the next output and returns `k / 2^53`; a
/// three-way choice returns `floor(3k / 2^53)`.
struct Draws(SplitMix64);

impl Draws {
    fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    fn bits53(&mut self) -> u64 {
        self.0.next_u64() >> 11
    }

    fn unit(&mut self) -> Rational {
        Rational::new(self.bits53().into(), (1u64 << 53).into())
    }

    fn one_of_three(&mut self) -> usize {
        ((self.bits53() * 3) >> 53) as usize
    }
}

/// Deepest supported descent; keeps vertex numerators times `2^53` inside `i128`.
pub const MAX_DEPTH: u32 = 40;

/// Base triangle numerators over the common denominator 6.
const BASE_SIXTHS: [[i128; 3]; 3] = [[2, 2, 2], [0, 3, 3], [1, 1, 4]];

/// Draws `count` points of the triangle-boundary strategy: descend `depth`
/// times into a uniformly chosen corner triangle (vertices `v`, `(2v+v′)/3`,
/// `(2v+v″)/3`), pick one of its sides uniformly, then a uniform point on it.
pub fn sample_triangle_strategy(
    spec: &TriangleFamilySpec,
    count: usize,
    seed: u64,
) -> Result<Vec<Allocation>> {
    if count == 0 {
        return Err(Error::input("sample count must be at least 1"));
    }
    if let Some(weights) = &spec.mixture {
        TriangleFamilySpec::mixture(weights.clone())?;
    }
    let deepest = spec
        .mixture
        .as_ref()
        .map_or(spec.depth, |w| w.iter().map(|(d, _)| *d).max().unwrap_or(0));
    if deepest > MAX_DEPTH {
        return Err(Error::input(format!(
            "depth must be at most {MAX_DEPTH}, got {deepest}"
        )));
    }

    let mut draws = Draws::new(seed);
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let depth = match &spec.mixture {
            None => spec.depth,
            Some(weights) => {
                let u = draws.unit();
                let mut cumulative = Rational::zero();
                let mut chosen = weights[weights.len() - 1].0;
                for (d, w) in weights {
                    cumulative += w;
                    if u < cumulative {
                        chosen = *d;
                        break;
                    }
                }
                chosen
            }
        };

        // Vertices as integer numerators over `denom`; a corner step maps v to
        // c + (v − c)/3, i.e. numerator 2c + v over 3·denom.
        let mut tri = BASE_SIXTHS;
        let mut denom: i128 = 6;
        for _ in 0..depth {
            let c = tri[draws.one_of_three()];
            tri = tri.map(|v| std::array::from_fn(|k| 2 * c[k] + v[k]));
            denom *= 3;
        }
        let side = draws.one_of_three();
        let (a, b) = (tri[side], tri[(side + 1) % 3]);
        let u = draws.bits53() as i128;
        let scale = 1i128 << 53;
        let point = (0..3)
            .map(|k| {
                Rational::new(
                    BigInt::from(a[k] * scale + u * (b[k] - a[k])),
                    BigInt::from(denom * scale),
                )
            })
            .collect();
        samples.push(Allocation::new(point, int(1))?);
    }
    Ok(samples)
}

/// True iff `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &[Rational], a: &[Rational], b: &[Rational]) -> bool {
    // Find the parameter from any coordinate where a and b differ, then check all.
    let Some(i) = (0..a.len()).find(|&i| a[i] != b[i]) else {
        return p == a;
    };
    let lambda = (&p[i] - &a[i]) / (&b[i] - &a[i]);
    if lambda.is_negative() || lambda > Rational::one() {
        return false;
    }
    (0..a.len()).all(|k| p[k] == &a[k] + &lambda * (&b[k] - &a[k]))
}

/// True iff `p` lies on a side of the base triangle.
pub fn on_base_triangle(p: &[Rational]) -> bool {
    let tri = base_triangle();
    (0..3).any(|s| on_segment(p, &tri[s], &tri[(s + 1) % 3]))
}

/// Kolmogorov–Smirnov distance between the empirical CDF of coordinate `j`
/// (1-based) of `samples` and `F^j`, evaluated at every order statistic in
/// `f64` (rounding error is far below any useful threshold).
pub fn empirical_sup_distance(samples: &[Allocation], j: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::input("empirical distance needs at least one sample"));
    }
    let cdf = MarginalCdf::for_battlefield(j)?;
    let (lower, upper) = (rational::to_f64(&cdf.lower), rational::to_f64(&cdf.upper));
    let mut values: Vec<f64> = samples
        .iter()
        .map(|s| {
            s.levels()
                .get(j - 1)
                .map(rational::to_f64)
                .ok_or_else(|| Error::input("samples must have three coordinates"))
        })
        .collect::<Result<_>>()?;
    values.sort_by(f64::total_cmp);

    let n = values.len() as f64;
    let sup = values.iter().enumerate().fold(0.0f64, |sup, (i, &x)| {
        let f = ((x - lower) / (upper - lower)).clamp(0.0, 1.0);
        sup.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    });
    Ok(sup)
}
