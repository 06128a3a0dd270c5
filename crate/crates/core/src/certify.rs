//! Balancedness certificates, the irreducible-factor filter, the two-factor
//! classification search, the Kähler–Einstein test and the `a_2` solver.

use std::cmp::Reverse;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::domain::{DomainFamily, DomainInvariants};
use crate::error::{Error, Result};
use crate::hua::{chi_tilde, curvature_scalars, hua_roots, s_bounds, HartogsSpec};
use crate::poly::{from_f64, int, rat, to_f64, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedCertificate {
    pub balanced: bool,
    pub alpha_threshold: Rational,
    /// `χ̃(x)`.
    pub lhs: Polynomial,
    /// `∏ μ_i^{d_i} · ∏_{j=1}^{d} (x - j)`.
    pub rhs: Polynomial,
    /// Lowest power of `x` whose coefficients differ.
    pub first_mismatch: Option<usize>,
}

/// The target polynomial `∏ μ_i^{d_i} · ∏_{j=1}^{d} (x - j)`.
pub fn balanced_target(spec: &HartogsSpec) -> Polynomial {
    let roots: Vec<Rational> = (1..=spec.base_dim() as i64).map(int).collect();
    Polynomial::from_roots(&roots).scale(&spec.mu_power_product())
}

pub fn certify_balanced(spec: &HartogsSpec) -> BalancedCertificate {
    let lhs = chi_tilde(spec);
    let rhs = balanced_target(spec);
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    let first_mismatch = (0..len).find(|&j| lhs.coeff(j) != rhs.coeff(j));
    BalancedCertificate {
        balanced: first_mismatch.is_none(),
        alpha_threshold: spec.alpha_threshold(),
        lhs,
        rhs,
        first_mismatch,
    }
}

/// True iff `p` has no repeated root, via `gcd(p, p')`.
pub fn squarefree_check(p: &Polynomial) -> bool {
    Polynomial::gcd(p, &p.derivative()).degree().unwrap_or(0) == 0
}

/// Factors that can occur in a balanced product: balls, `III(2)`, and `IV(m)` with `m` odd.
pub fn allowed_factor(inv: &DomainInvariants) -> bool {
    match inv.family {
        DomainFamily::TypeI { m: 1, .. } => true,
        DomainFamily::TypeIII(2) => true,
        DomainFamily::TypeIV(m) => m % 2 == 1,
        _ => false,
    }
}

/// The canonical metric is Kähler–Einstein iff `μ_i = p_i / (d + 1)` for all `i`.
pub fn ke_check(spec: &HartogsSpec) -> bool {
    let d1 = int(spec.base_dim() as i64 + 1);
    spec.factors()
        .iter()
        .zip(spec.mu())
        .all(|(f, m)| *m == int(f.p as i64) / &d1)
}

/// `S(Ω)` lies strictly above its lower bound and at or below its upper bound.
pub fn s_bounds_hold(inv: &DomainInvariants) -> bool {
    let s = curvature_scalars(inv).s_omega;
    let (lower, upper) = s_bounds(inv);
    lower < s && s <= upper
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedPair {
    pub factors: [DomainInvariants; 2],
    pub mu: [Rational; 2],
}

fn canonical_key(inv: &DomainInvariants) -> (usize, Reverse<u32>, DomainFamily) {
    (inv.family.type_index(), Reverse(inv.d), inv.family)
}

/// Roots of `χ(μx - p)` when they are all distinct integers; `None` otherwise.
fn integral_roots(inv: &DomainInvariants, mu: &Rational) -> Option<Vec<i64>> {
    let p = int(inv.p as i64);
    let mut roots = hua_roots(inv)
        .into_iter()
        .map(|s| {
            let x = (s + &p) / mu;
            x.is_integer().then(|| x.to_integer().to_i64()).flatten()
        })
        .collect::<Option<Vec<_>>>()?;
    roots.sort_unstable();
    roots.windows(2).all(|w| w[0] < w[1]).then_some(roots)
}

/// Candidate `μ = a/b` in lowest terms with `b ≤ denom_max` and `1/d_max ≤ μ ≤ 1`.
fn candidate_mus(d_max: u32, denom_max: u32) -> Vec<Rational> {
    let mut mus = Vec::new();
    for b in 1..=denom_max as i64 {
        for a in 1..=b {
            if a.gcd(&b) == 1 && a * d_max as i64 >= b {
                mus.push(rat(a, b));
            }
        }
    }
    mus
}

/// All unordered pairs of allowed factors with `d_1 + d_2 ≤ d_max` and exponents of
/// denominator at most `denom_max` whose domain is balanced.
///
/// Each pair is reported once: the first factor precedes the second in the order
/// "type, then larger dimension first", and equal factors list the larger exponent first.
pub fn classify_k2(d_max: u32, denom_max: u32) -> Vec<ClassifiedPair> {
    let mut factors: Vec<DomainInvariants> = crate::domain::enumerate_catalog(d_max.saturating_sub(1))
        .into_iter()
        .filter(allowed_factor)
        .collect();
    factors.sort_by_key(canonical_key);
    let mus = candidate_mus(d_max, denom_max);

    // (factor, μ) pairs whose own roots are distinct positive integers
    let candidates: Vec<(usize, Rational, Vec<i64>)> = factors
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, f)| {
            mus.iter().filter_map(move |m| {
                integral_roots(f, m)
                    .filter(|r| r[0] >= 1)
                    .map(|r| (i, m.clone(), r))
            })
        })
        .collect();

    let factors = &factors;
    let candidates = &candidates;
    let mut hits: Vec<ClassifiedPair> = candidates
        .par_iter()
        .flat_map_iter(|(i, m1, r1)| {
            candidates
                .iter()
                .filter(move |(j, m2, _)| i < j || (i == j && m1 >= m2))
                .filter_map(move |(j, m2, r2)| {
                    let (f1, f2) = (factors[*i], factors[*j]);
                    let d = f1.d + f2.d;
                    if d > d_max {
                        return None;
                    }
                    let mut all: Vec<i64> = r1.iter().chain(r2).copied().collect();
                    all.sort_unstable();
                    if !all.iter().copied().eq(1..=d as i64) {
                        return None;
                    }
                    let spec =
                        HartogsSpec::new(vec![f1, f2], vec![m1.clone(), m2.clone()], 1).ok()?;
                    certify_balanced(&spec).balanced.then(|| ClassifiedPair {
                        factors: [f1, f2],
                        mu: [m1.clone(), m2.clone()],
                    })
                })
        })
        .collect();
    hits.sort_by(|a, b| {
        (canonical_key(&a.factors[0]), canonical_key(&a.factors[1]), &a.mu)
            .cmp(&(canonical_key(&b.factors[0]), canonical_key(&b.factors[1]), &b.mu))
    });
    hits
}

/// The two closed-form families of balanced two-factor products within the given bounds,
/// in the same order and orientation as [`classify_k2`].
pub fn expected_k2_families(d_max: u32, denom_max: u32) -> Vec<ClassifiedPair> {
    let mut out: Vec<ClassifiedPair> = (1..d_max)
        .filter(|d| *d < denom_max)
        .map(|d| ClassifiedPair {
            factors: [DomainInvariants::ball(d), DomainInvariants::ball(1)],
            mu: [int(1), rat(1, d as i64 + 1)],
        })
        .collect();
    if d_max >= 4 && denom_max >= 2 {
        let iii = DomainInvariants::new(DomainFamily::TypeIII(2)).expect("III(2) is valid");
        out.push(ClassifiedPair {
            factors: [DomainInvariants::ball(1), iii],
            mu: [int(1), rat(1, 2)],
        });
    }
    out.sort_by(|a, b| {
        (canonical_key(&a.factors[0]), canonical_key(&a.factors[1]), &a.mu)
            .cmp(&(canonical_key(&b.factors[0]), canonical_key(&b.factors[1]), &b.mu))
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `x_1` takes `+√Δ`.
    PlusRoot,
    /// `x_1` takes `-√Δ`.
    MinusRoot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct A2Solution {
    pub mu1: f64,
    pub mu2: f64,
    pub x1: f64,
    pub x2: f64,
    pub branch: Branch,
    pub discriminant: f64,
    /// Residuals of the linear and quadratic constraint, divided by `A` and `A²`.
    pub residuals: [f64; 2],
}

/// Exact scalars of the two-factor `a_2` problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Scalars {
    pub a: Rational,
    pub b: Rational,
    pub s1: Rational,
    pub s2: Rational,
    pub discriminant: Rational,
}

pub fn a2_scalars(inv1: &DomainInvariants, inv2: &DomainInvariants) -> A2Scalars {
    let d = int((inv1.d + inv2.d) as i64);
    let one = int(1);
    let a = &d * (&d + &one);
    let b = &a * ((&d - &one) * (&d + int(2)) - (&d - &one) * (int(3) * &d + int(10)) / int(6));
    let s1 = curvature_scalars(inv1).s_omega;
    let s2 = curvature_scalars(inv2).s_omega;
    let discriminant =
        &one - int(4) * &b / (&a * &a) * (&one - &s1 - &s2) - int(4) * &s1 * &s2;
    A2Scalars {
        a,
        b,
        s1,
        s2,
        discriminant,
    }
}

/// Exact residuals of both constraints at `(μ_1, μ_2)`, scaled by `A` and `A²`.
pub fn a2_residuals(
    inv1: &DomainInvariants,
    inv2: &DomainInvariants,
    mu1: &Rational,
    mu2: &Rational,
) -> [Rational; 2] {
    let sc = a2_scalars(inv1, inv2);
    let w1 = int((inv1.d * inv1.p) as i64) / mu1;
    let w2 = int((inv2.d * inv2.p) as i64) / mu2;
    let linear = (&w1 + &w2 - &sc.a) / &sc.a;
    let r1 = curvature_scalars(inv1).r_omega;
    let r2 = curvature_scalars(inv2).r_omega;
    let quad = int(2) * r1 / (mu1 * mu1) + &w1 * &w2 + int(2) * r2 / (mu2 * mu2) - &sc.b;
    [linear, quad / (&sc.a * &sc.a)]
}

/// Positive `(μ_1, μ_2)` making `a_2` constant, one entry per admissible branch.
pub fn solve_a2_constant(
    inv1: &DomainInvariants,
    inv2: &DomainInvariants,
) -> Result<Vec<A2Solution>> {
    let sc = a2_scalars(inv1, inv2);
    if sc.discriminant.is_negative() {
        return Err(Error::Inconsistent(format!(
            "negative discriminant {} for {inv1} × {inv2}",
            sc.discriminant
        )));
    }
    let denom = int(2) * (int(1) - &sc.s1 - &sc.s2);
    if !denom.is_positive() {
        return Err(Error::Inconsistent(format!(
            "S({inv1}) + S({inv2}) ≥ 1"
        )));
    }
    let root = to_f64(&sc.discriminant).sqrt();
    let denom = to_f64(&denom);
    let base1 = to_f64(&(int(1) - int(2) * &sc.s2));
    let base2 = to_f64(&(int(1) - int(2) * &sc.s1));
    let a = to_f64(&sc.a);
    let mut out = Vec::new();
    for (branch, sign) in [(Branch::PlusRoot, 1.0), (Branch::MinusRoot, -1.0)] {
        if branch == Branch::MinusRoot && sc.discriminant.is_zero() {
            break;
        }
        let x1 = (base1 + sign * root) / denom;
        let x2 = (base2 - sign * root) / denom;
        if !(x1 > 0.0 && x2 > 0.0) {
            continue;
        }
        let mu1 = (inv1.d * inv1.p) as f64 / (a * x1);
        let mu2 = (inv2.d * inv2.p) as f64 / (a * x2);
        let (Some(q1), Some(q2)) = (from_f64(mu1), from_f64(mu2)) else {
            continue;
        };
        let res = a2_residuals(inv1, inv2, &q1, &q2);
        out.push(A2Solution {
            mu1,
            mu2,
            x1,
            x2,
            branch,
            discriminant: to_f64(&sc.discriminant),
            residuals: [to_f64(&res[0]), to_f64(&res[1])],
        });
    }
    Ok(out)
}

/// `S_1 + S_2 < 2B/A² < 1` and `1/(1-2S_1) + 1/(1-2S_2) > 1/(1-2B/A²)`.
pub fn verify_lemma32(inv1: &DomainInvariants, inv2: &DomainInvariants) -> bool {
    let sc = a2_scalars(inv1, inv2);
    let one = int(1);
    let t = int(2) * &sc.b / (&sc.a * &sc.a);
    let first = &sc.s1 + &sc.s2 < t && t < one;
    let lhs = (&one - int(2) * &sc.s1).recip() + (&one - int(2) * &sc.s2).recip();
    first && lhs > (&one - &t).recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::enumerate_catalog;

    fn fam(f: DomainFamily) -> DomainInvariants {
        DomainInvariants::new(f).unwrap()
    }

    fn ball(d: u32) -> DomainInvariants {
        DomainInvariants::ball(d)
    }

    fn spec(f: Vec<DomainInvariants>, mu: Vec<Rational>, d0: u32) -> HartogsSpec {
        HartogsSpec::new(f, mu, d0).unwrap()
    }

    #[test]
    fn certifies_worked_example() {
        let s = spec(
            vec![fam(DomainFamily::TypeIV(5)), ball(1), ball(1), ball(1)],
            vec![rat(1, 2), int(1), rat(1, 3), rat(1, 7)],
            2,
        );
        let c = certify_balanced(&s);
        assert!(c.balanced);
        assert_eq!(c.alpha_threshold, int(10));
        assert_eq!(c.first_mismatch, None);
        assert_eq!(c.rhs.leading_coeff(), Some(&rat(1, 672)));
        assert!(!ke_check(&s));
    }

    #[test]
    fn rejects_ke_pair() {
        let s = spec(vec![ball(1), ball(1)], vec![rat(2, 3), rat(2, 3)], 1);
        let c = certify_balanced(&s);
        assert!(!c.balanced);
        assert_eq!(c.first_mismatch, Some(0));
        assert!(ke_check(&s));
    }

    #[test]
    fn ball_families() {
        for d in 1..=10 {
            let s = spec(vec![ball(d), ball(1)], vec![int(1), rat(1, d as i64 + 1)], 1);
            assert!(certify_balanced(&s).balanced, "d = {d}");
            let single = spec(vec![ball(d)], vec![int(1)], 3);
            let c = certify_balanced(&single);
            assert!(c.balanced);
            assert_eq!(c.alpha_threshold, int(d as i64 + 3));
            assert!(ke_check(&single));
        }
    }

    #[test]
    fn squarefree_examples() {
        assert!(squarefree_check(&Polynomial::from_i64(&[2, 3, 1])));
        assert!(!squarefree_check(&Polynomial::from_i64(&[9, 6, 1])));
        assert!(!squarefree_check(&crate::hua::hua_chi(&fam(DomainFamily::TypeII(6)))));
        assert!(squarefree_check(&Polynomial::one()));
    }

    #[test]
    fn allowed_factor_examples() {
        assert!(allowed_factor(&fam(DomainFamily::TypeIII(2))));
        assert!(!allowed_factor(&fam(DomainFamily::TypeIV(6))));
        assert!(allowed_factor(&fam(DomainFamily::TypeIV(7))));
        assert!(!allowed_factor(&fam(DomainFamily::TypeV)));
        assert!(!allowed_factor(&fam(DomainFamily::TypeVI)));
        assert!(allowed_factor(&ball(4)));
    }

    #[test]
    fn allowed_factor_is_squarefree_chi() {
        for inv in enumerate_catalog(60) {
            assert_eq!(
                squarefree_check(&crate::hua::hua_chi(&inv)),
                allowed_factor(&inv),
                "{inv}"
            );
        }
    }

    #[test]
    fn small_classifications() {
        let two = classify_k2(2, 3);
        assert_eq!(
            two,
            vec![ClassifiedPair {
                factors: [ball(1), ball(1)],
                mu: [int(1), rat(1, 2)],
            }]
        );
        assert_eq!(classify_k2(6, 7), expected_k2_families(6, 7));
        assert_eq!(classify_k2(6, 7), classify_k2(6, 7));
    }

    #[test]
    fn a2_ball_pair() {
        let sc = a2_scalars(&ball(1), &ball(1));
        assert_eq!(sc.a, int(6));
        assert_eq!(sc.b, int(8));
        assert_eq!(sc.discriminant, rat(1, 9));
        let sols = solve_a2_constant(&ball(1), &ball(1)).unwrap();
        assert_eq!(sols.len(), 2);
        let plus = &sols[0];
        assert_eq!(plus.branch, Branch::PlusRoot);
        assert!((plus.mu1 - 0.5).abs() < 1e-12 && (plus.mu2 - 1.0).abs() < 1e-12);
        let minus = &sols[1];
        assert!((minus.mu1 - 1.0).abs() < 1e-12 && (minus.mu2 - 0.5).abs() < 1e-12);
        assert!((plus.x1 - minus.x2).abs() < 1e-15);
        let exact = a2_residuals(&ball(1), &ball(1), &rat(1, 2), &int(1));
        assert!(exact.iter().all(Zero::is_zero));
    }

    #[test]
    fn a2_mixed_pair() {
        let sols = solve_a2_constant(&ball(2), &fam(DomainFamily::TypeIII(2))).unwrap();
        assert!(!sols.is_empty());
        for s in sols {
            assert!(s.mu1 > 0.0 && s.mu2 > 0.0);
            assert!((s.x1 + s.x2 - 1.0).abs() < 1e-12);
            assert!(s.residuals.iter().all(|r| r.abs() < 1e-9), "{s:?}");
        }
    }

    #[test]
    fn pair_inequality_examples() {
        assert!(verify_lemma32(&ball(1), &ball(1)));
        let sc = a2_scalars(&ball(1), &ball(1));
        assert_eq!(int(2) * &sc.b / (&sc.a * &sc.a), rat(4, 9));
    }

    #[test]
    fn catalog_s_bounds() {
        for inv in enumerate_catalog(60) {
            assert!(s_bounds_hold(&inv), "{inv}");
        }
    }
}
