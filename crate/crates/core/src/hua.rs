//! Hua polynomials, the certificate polynomial `χ̃`, its backward differences at
//! `x = d`, and the exact expansion of the ε-function in powers of `α`.
//!
//! The ε-function depends on the point only through
//! `X = 1 - ‖w‖² / ∏ N_i^{μ_i}`, so every expansion coefficient `a_j` is held
//! as an exact polynomial in `X`. "Constant `a_j`" is then the exact predicate
//! "all positive powers of `X` vanish".

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::domain::{DomainFamily, DomainInvariants};
use crate::error::{Error, Result};
use crate::poly::{binomial, factorial, int, rat, Polynomial, Rational};

/// A generalized Cartan–Hartogs domain: base factors `Ω_i` with exponents
/// `μ_i > 0` and a ball fiber of dimension `d0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HartogsSpec {
    factors: Vec<DomainInvariants>,
    mu: Vec<Rational>,
    d0: u32,
}

impl HartogsSpec {
    pub fn new(factors: Vec<DomainInvariants>, mu: Vec<Rational>, d0: u32) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("at least one base factor is required".into()));
        }
        if factors.len() != mu.len() {
            return Err(Error::InvalidSpec(format!(
                "{} factors but {} exponents",
                factors.len(),
                mu.len()
            )));
        }
        if let Some(m) = mu.iter().find(|m| !m.is_positive()) {
            return Err(Error::InvalidSpec(format!("exponent {m} is not positive")));
        }
        if d0 == 0 {
            return Err(Error::InvalidSpec("fiber dimension d0 must be at least 1".into()));
        }
        if let Some(f) = factors.iter().find(|f| !f.is_consistent()) {
            return Err(Error::InvalidSpec(format!("inconsistent invariants for {f}")));
        }
        Ok(Self { factors, mu, d0 })
    }

    /// Spec with `f64` exponents, converted exactly to their binary rational values.
    pub fn from_f64_mu(factors: Vec<DomainInvariants>, mu: &[f64], d0: u32) -> Result<Self> {
        let mu = mu
            .iter()
            .map(|&m| {
                crate::poly::from_f64(m)
                    .ok_or_else(|| Error::InvalidSpec(format!("exponent {m} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors, mu, d0)
    }

    pub fn factors(&self) -> &[DomainInvariants] {
        &self.factors
    }

    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    /// Number of base factors `k`.
    pub fn k(&self) -> usize {
        self.factors.len()
    }

    /// Base dimension `d = Σ d_i`.
    pub fn base_dim(&self) -> u32 {
        self.factors.iter().map(|f| f.d).sum()
    }

    /// Total dimension `n = d + d0`.
    pub fn total_dim(&self) -> u32 {
        self.base_dim() + self.d0
    }

    /// `∏ μ_i^{d_i}`, the leading coefficient of `χ̃`.
    pub fn mu_power_product(&self) -> Rational {
        self.factors
            .iter()
            .zip(&self.mu)
            .fold(Rational::one(), |acc, (f, m)| acc * pow(m, f.d))
    }

    /// `max{n, (p_1 - 1)/μ_1, …, (p_k - 1)/μ_k}`.
    pub fn alpha_threshold(&self) -> Rational {
        self.factors
            .iter()
            .zip(&self.mu)
            .map(|(f, m)| int(f.p as i64 - 1) / m)
            .fold(int(self.total_dim() as i64), |a, b| if b > a { b } else { a })
    }

    /// Same domain with the `(factor, μ)` pairs reordered by `order`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let factors = order.iter().map(|&i| self.factors[i]).collect();
        let mu = order.iter().map(|&i| self.mu[i].clone()).collect();
        Self::new(factors, mu, self.d0)
    }
}

pub(crate) fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Pochhammer blocks `(s + shift)_len` whose product is the Hua polynomial.
pub fn hua_blocks(inv: &DomainInvariants) -> Vec<(Rational, usize)> {
    (1..=inv.r)
        .map(|j| {
            let shift = int(1) + rat(((j - 1) * inv.a) as i64, 2);
            let len = 1 + inv.b + (inv.r - j) * inv.a;
            (shift, len as usize)
        })
        .collect()
}

/// Roots of the Hua polynomial, listed block by block.
pub fn hua_roots(inv: &DomainInvariants) -> Vec<Rational> {
    hua_blocks(inv)
        .into_iter()
        .flat_map(|(shift, len)| (0..len).map(move |l| -(&shift + int(l as i64))))
        .collect()
}

fn chi_cache() -> &'static RwLock<HashMap<DomainFamily, Polynomial>> {
    static CACHE: OnceLock<RwLock<HashMap<DomainFamily, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The Hua polynomial `χ(s) = ∏_{j=1}^{r} (s + 1 + (j-1)a/2)_{1+b+(r-j)a}`.
pub fn hua_chi(inv: &DomainInvariants) -> Polynomial {
    if let Some(p) = chi_cache().read().expect("cache poisoned").get(&inv.family) {
        return p.clone();
    }
    let chi: Polynomial = hua_blocks(inv)
        .iter()
        .map(|(shift, len)| crate::poly::raising_factorial(shift, *len))
        .product();
    chi_cache()
        .write()
        .expect("cache poisoned")
        .insert(inv.family, chi.clone());
    chi
}

/// `χ̃(x) = ∏ χ_i(μ_i x - p_i)`.
pub fn chi_tilde(spec: &HartogsSpec) -> Polynomial {
    spec.factors
        .iter()
        .zip(&spec.mu)
        .map(|(f, m)| hua_chi(f).compose_affine(m, &int(-(f.p as i64))))
        .product()
}

/// `χ̃(x)` evaluated as `∏_i ∏_s (μ_i x - p_i - s)` over the Hua roots `s`.
pub fn chi_tilde_at(spec: &HartogsSpec, x: &Rational) -> Rational {
    let (mut numer, mut denom) = (BigInt::one(), BigInt::one());
    for (f, m) in spec.factors.iter().zip(&spec.mu) {
        let base = m * x - int(f.p as i64);
        for s in hua_roots(f) {
            let term = &base - s;
            numer *= term.numer();
            denom *= term.denom();
        }
    }
    Rational::new(numer, denom)
}

/// `q · k` for an integer `k`, reducing only against `k`.
fn mul_integer(q: &Rational, k: &BigInt) -> Rational {
    let g = k.gcd(q.denom());
    if g.is_zero() {
        return Rational::zero();
    }
    Rational::new_raw(q.numer() * (k / &g), q.denom() / &g)
}

/// `[D⁰χ̃(d), …, D^dχ̃(d)]` with `D^j f(x) = Σ_l C(j,l)(-1)^l f(x-l)`.
pub fn chi_tilde_differences(spec: &HartogsSpec) -> Vec<Rational> {
    let d = spec.base_dim() as usize;
    let values: Vec<Rational> = (0..=d).map(|l| chi_tilde_at(spec, &int((d - l) as i64))).collect();
    // integer sums over a common denominator
    let common = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let numers: Vec<BigInt> = values.iter().map(|v| v.numer() * (&common / v.denom())).collect();
    (0..=d)
        .map(|j| {
            let sum = (0..=j).fold(BigInt::zero(), |acc, l| {
                let term = &numers[l] * binomial(j, l);
                if l % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            Rational::new(sum, common.clone())
        })
        .collect()
}

/// Coefficients `c_{m,j}` (`j = 0..=m`, lowest power first) of `(α - n)_m` in `α`.
pub fn pochhammer_alpha_coeffs(n: u32, m: usize) -> Vec<Rational> {
    // elementary symmetric sums of the shifts t_i = i - n
    let mut e = vec![BigInt::zero(); m + 1];
    e[0] = BigInt::one();
    for i in 0..m {
        let t = BigInt::from(i as i64 - n as i64);
        for k in (1..=i + 1).rev() {
            let prev = e[k - 1].clone();
            e[k] += &t * prev;
        }
    }
    (0..=m).map(|j| Rational::from_integer(e[m - j].clone())).collect()
}

/// `ε_α = Σ_{j=0}^{n} a_j(X) α^{n-j}` with each `a_j` exact in `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonExpansion {
    n: u32,
    coeffs: Vec<Polynomial>,
}

impl EpsilonExpansion {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `a_j` as a polynomial in `X`, `j = 0..=n`.
    pub fn coeff(&self, j: usize) -> &Polynomial {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// True iff `a_j` has no positive powers of `X`.
    pub fn is_constant(&self, j: usize) -> bool {
        self.coeffs[j].degree().unwrap_or(0) == 0
    }

    /// `Σ_j a_j(X) α^{n-j}` in floating point.
    pub fn eval_f64(&self, alpha: f64, x: f64) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, a| acc * alpha + a.eval_f64(x))
    }
}

/// Shared data of the expansion: normalized differences and Pochhammer coefficients.
struct ExpansionTerms {
    n: u32,
    d: usize,
    /// `D^lχ̃(d) / (l! ∏μ^{d_i})`.
    scaled: Vec<Rational>,
    /// Coefficients of `(α - n)_{d0 + l}` in `α`.
    poch: Vec<Vec<Rational>>,
}

impl ExpansionTerms {
    fn new(spec: &HartogsSpec) -> Self {
        let d = spec.base_dim() as usize;
        let n = spec.total_dim();
        let inv_norm = spec.mu_power_product().recip();
        let scaled = chi_tilde_differences(spec)
            .iter()
            .enumerate()
            .map(|(l, v)| v * &inv_norm / Rational::from_integer(factorial(l)))
            .collect();
        let poch = (0..=d)
            .map(|l| pochhammer_alpha_coeffs(n, spec.d0 as usize + l))
            .collect();
        Self { n, d, scaled, poch }
    }

    fn coeff(&self, j: usize) -> Polynomial {
        let d = self.d;
        let power = self.n as usize - j;
        let mut xs = vec![Rational::zero(); d + 1];
        for l in d.saturating_sub(j)..=d {
            if let Some(c) = self.poch[l].get(power) {
                xs[d - l] += mul_integer(&self.scaled[l], c.numer());
            }
        }
        Polynomial::from_coeffs(xs)
    }
}

/// The `a_j(X)` obtained by collecting powers of `α` in the closed-form ε-function.
/// Pochhammer coefficients outside their index range count as zero.
pub fn epsilon_expansion(spec: &HartogsSpec) -> EpsilonExpansion {
    let terms = ExpansionTerms::new(spec);
    EpsilonExpansion {
        n: terms.n,
        coeffs: (0..=terms.n as usize).map(|j| terms.coeff(j)).collect(),
    }
}

/// The single coefficient `a_j(X)` of [`epsilon_expansion`]; `None` when `j > n`.
pub fn epsilon_coefficient(spec: &HartogsSpec, j: usize) -> Option<Polynomial> {
    (j <= spec.total_dim() as usize).then(|| ExpansionTerms::new(spec).coeff(j))
}

/// `a_1(X) = (D^{d-1}χ̃(d) / ((d-1)! ∏μ^{d_i})) X - n(n+1)/2`.
pub fn a1_closed_form(spec: &HartogsSpec) -> Polynomial {
    let d = spec.base_dim() as usize;
    let n = spec.total_dim() as i64;
    let diffs = chi_tilde_differences(spec);
    let norm = spec.mu_power_product();
    let slope = &diffs[d - 1] / (Rational::from_integer(factorial(d - 1)) * &norm);
    Polynomial::linear(slope, -rat(n * (n + 1), 2))
}

/// `a_2(X)` as a quadratic in `X`; needs `d ≥ 2`.
pub fn a2_closed_form(spec: &HartogsSpec) -> Option<Polynomial> {
    let d = spec.base_dim() as usize;
    if d < 2 {
        return None;
    }
    let n = spec.total_dim() as i64;
    let diffs = chi_tilde_differences(spec);
    let norm = spec.mu_power_product();
    let first = &diffs[d - 1] / (Rational::from_integer(factorial(d - 1)) * &norm);
    let second = &diffs[d - 2] / (Rational::from_integer(factorial(d - 2)) * &norm);
    let constant = rat((n - 1) * n * (n + 1) * (3 * n + 2), 24);
    let linear = -(first * (rat(n * (n + 1), 2) - int(1)));
    Some(Polynomial::from_coeffs(vec![constant, linear, second]))
}

/// Top coefficients of `χ(μx - p) = c0 x^d + c1 x^{d-1} + c2 x^{d-2} + …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopCoefficients {
    pub c0: Rational,
    pub c1: Rational,
    /// Absent when `d < 2`.
    pub c2: Option<Rational>,
}

/// Closed forms `c0 = μ^d`, `c1 = -μ^{d-1} d p / 2`, `c2 = μ^{d-2} R(Ω) / 2`.
pub fn lemma28_coeffs(inv: &DomainInvariants, mu: &Rational) -> TopCoefficients {
    let d = inv.d;
    let dp = int((inv.d * inv.p) as i64);
    TopCoefficients {
        c0: pow(mu, d),
        c1: -(pow(mu, d - 1) * dp) / int(2),
        c2: (d >= 2).then(|| pow(mu, d - 2) * curvature_scalars(inv).r_omega / int(2)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureScalars {
    /// `R(Ω)`.
    pub r_omega: Rational,
    /// `S(Ω) = 2R(Ω) / (d²p²)`.
    pub s_omega: Rational,
}

/// `Σ x_i²` over the roots of `χ(x - p)`, i.e. `d²p²/4 - R(Ω)`.
pub fn root_square_sum(inv: &DomainInvariants) -> Rational {
    let (r, a, p) = (int(inv.r as i64), int(inv.a as i64), int(inv.p as i64));
    let one = int(1);
    &r * (&p - &one) * &p * (int(2) * &p - &one) / int(6)
        - &r * (&r - &one) * &a * (int(3) * &p * &p - int(3) * &p + &one) / int(12)
        + (&r - &one) * &r * (int(2) * &r - &one) * &a * &a * (&p - &one) / int(24)
        - &r * &r * (&r - &one) * (&r - &one) * &a * &a * &a / int(48)
}

pub fn curvature_scalars(inv: &DomainInvariants) -> CurvatureScalars {
    let dp = int((inv.d * inv.p) as i64);
    let dp2 = &dp * &dp;
    let r_omega = &dp2 / int(4) - root_square_sum(inv);
    let s_omega = int(2) * &r_omega / &dp2;
    CurvatureScalars { r_omega, s_omega }
}

/// `(1/2 - 8/(3(4d+1)), 1/2 - 1/(2d))`: strict lower and attained upper bound for `S(Ω)`.
pub fn s_bounds(inv: &DomainInvariants) -> (Rational, Rational) {
    let d = inv.d as i64;
    (rat(1, 2) - rat(8, 3 * (4 * d + 1)), rat(1, 2) - rat(1, 2 * d))
}

/// `3(4d+1) Σx_i² - 4d²p²`; negative exactly when the lower `S` bound holds.
pub fn eq46_lhs(inv: &DomainInvariants) -> Rational {
    let d = inv.d as i64;
    let p = inv.p as i64;
    int(3 * (4 * d + 1)) * root_square_sum(inv) - int(4 * d * d * p * p)
}

/// Both sides of the two-factor closed forms for the normalized differences
/// `D^{d-1}χ̃(d) / ((d-1)! ∏μ^{d_i})` and `D^{d-2}χ̃(d) / ((d-2)! ∏μ^{d_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactorIdentities {
    pub lhs1: Rational,
    pub rhs1: Rational,
    pub lhs2: Rational,
    pub rhs2: Rational,
}

impl TwoFactorIdentities {
    pub fn holds(&self) -> bool {
        self.lhs1 == self.rhs1 && self.lhs2 == self.rhs2
    }
}

pub fn two_factor_difference_identities(spec: &HartogsSpec) -> Result<TwoFactorIdentities> {
    if spec.k() != 2 {
        return Err(Error::FactorCount {
            expected: 2,
            got: spec.k(),
        });
    }
    let d = spec.base_dim() as usize;
    let diffs = chi_tilde_differences(spec);
    let norm = spec.mu_power_product();
    let lhs1 = &diffs[d - 1] / (Rational::from_integer(factorial(d - 1)) * &norm);
    let lhs2 = &diffs[d - 2] / (Rational::from_integer(factorial(d - 2)) * &norm);

    let (f1, f2) = (&spec.factors[0], &spec.factors[1]);
    let (m1, m2) = (&spec.mu[0], &spec.mu[1]);
    let di = int(d as i64);
    let weighted = int((f1.d * f1.p) as i64) / m1 + int((f2.d * f2.p) as i64) / m2;
    let rhs1 = (&di * (&di + int(1)) - &weighted) / int(2);
    let cross = int((f1.d * f2.d * f1.p * f2.p) as i64) / (m1 * m2);
    let r1 = curvature_scalars(f1).r_omega / (m1 * m1);
    let r2 = curvature_scalars(f2).r_omega / (m2 * m2);
    let rhs2 = ((&di - int(1)) * &di * (&di + int(1)) * (int(3) * &di + int(10)) / int(6)
        - (&di - int(1)) * (&di + int(2)) * &weighted
        + int(2) * r1
        + cross
        + int(2) * r2)
        / int(4);
    Ok(TwoFactorIdentities {
        lhs1,
        rhs1,
        lhs2,
        rhs2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainFamily;
    use crate::poly::raising_factorial;

    fn fam(f: DomainFamily) -> DomainInvariants {
        DomainInvariants::new(f).unwrap()
    }

    fn ball(d: u32) -> DomainInvariants {
        DomainInvariants::ball(d)
    }

    fn lin(c: Rational) -> Polynomial {
        Polynomial::linear(int(1), c)
    }

    fn example_spec(d0: u32) -> HartogsSpec {
        HartogsSpec::new(
            vec![fam(DomainFamily::TypeIV(5)), ball(1), ball(1), ball(1)],
            vec![rat(1, 2), int(1), rat(1, 3), rat(1, 7)],
            d0,
        )
        .unwrap()
    }

    #[test]
    fn hua_chi_anchors() {
        assert_eq!(
            hua_chi(&fam(DomainFamily::TypeIII(2))),
            lin(int(1)) * lin(int(2)) * lin(rat(3, 2))
        );
        assert_eq!(
            hua_chi(&fam(DomainFamily::TypeV)),
            raising_factorial(&int(1), 11) * raising_factorial(&int(4), 5)
        );
        assert_eq!(
            hua_chi(&fam(DomainFamily::TypeVI)),
            raising_factorial(&int(1), 17) * raising_factorial(&int(5), 9) * lin(int(9))
        );
        for n in 1..8 {
            assert_eq!(hua_chi(&ball(n)), raising_factorial(&int(1), n as usize));
        }
        // the per-type factorizations used in the squarefree argument
        for n in 5..12 {
            assert_eq!(
                hua_chi(&fam(DomainFamily::TypeIV(n))),
                raising_factorial(&int(1), n as usize - 1) * lin(rat(n as i64, 2))
            );
        }
    }

    #[test]
    fn hua_chi_is_monic_of_degree_d() {
        for inv in crate::domain::enumerate_catalog(30) {
            let chi = hua_chi(&inv);
            assert_eq!(chi.degree(), Some(inv.d as usize));
            assert_eq!(chi.leading_coeff(), Some(&int(1)));
            // roots are negative half-integers
            for r in hua_roots(&inv) {
                assert!(r.is_negative());
                assert!((r * int(2)).is_integer());
            }
        }
    }

    #[test]
    fn root_evaluation_matches_polynomial() {
        let spec = HartogsSpec::new(
            vec![fam(DomainFamily::TypeII(5)), fam(DomainFamily::TypeIII(2)), ball(2)],
            vec![rat(3, 5), rat(7, 2), rat(1, 9)],
            1,
        )
        .unwrap();
        let chi = chi_tilde(&spec);
        for x in [int(0), int(3), rat(-7, 4), rat(22, 3)] {
            assert_eq!(chi_tilde_at(&spec, &x), chi.eval(&x));
        }
    }

    #[test]
    fn chi_tilde_examples() {
        let expected = Polynomial::from_roots(&(1..=8).map(int).collect::<Vec<_>>())
            .scale(&rat(1, 32 * 3 * 7));
        assert_eq!(chi_tilde(&example_spec(1)), expected);

        for d in 1..6 {
            let spec = HartogsSpec::new(vec![ball(d)], vec![int(1)], 1).unwrap();
            let roots: Vec<_> = (1..=d as i64).map(int).collect();
            assert_eq!(chi_tilde(&spec), Polynomial::from_roots(&roots));
        }

        let spec = HartogsSpec::new(
            vec![ball(1), fam(DomainFamily::TypeIII(2))],
            vec![int(1), rat(1, 2)],
            1,
        )
        .unwrap();
        let roots: Vec<_> = (1..=4).map(int).collect();
        assert_eq!(chi_tilde(&spec), Polynomial::from_roots(&roots).scale(&rat(1, 8)));
    }

    #[test]
    fn differences_examples() {
        let diffs = chi_tilde_differences(&example_spec(2));
        assert!(diffs[..8].iter().all(Zero::is_zero));
        assert_eq!(diffs[8], int(40320) * rat(1, 672));

        let spec = HartogsSpec::new(vec![ball(1)], vec![int(1)], 1).unwrap();
        assert_eq!(chi_tilde_differences(&spec), vec![int(0), int(1)]);

        let spec = HartogsSpec::new(vec![ball(1), ball(1)], vec![rat(2, 3), rat(2, 3)], 1).unwrap();
        let diffs = chi_tilde_differences(&spec);
        // χ̃ = (2x/3 - 1)²: D⁰ = 1/9, D¹ = 0, D² = 8/9; still not balanced since D⁰ ≠ 0
        assert_eq!(diffs, vec![rat(1, 9), int(0), rat(8, 9)]);
    }

    #[test]
    fn top_difference_is_leading_term() {
        for spec in [
            example_spec(3),
            HartogsSpec::new(vec![fam(DomainFamily::TypeII(5)), ball(2)], vec![rat(3, 5), rat(7, 2)], 2)
                .unwrap(),
        ] {
            let d = spec.base_dim() as usize;
            let diffs = chi_tilde_differences(&spec);
            assert_eq!(
                diffs[d],
                Rational::from_integer(factorial(d)) * spec.mu_power_product()
            );
        }
    }

    #[test]
    fn pochhammer_coefficients() {
        for n in 2..=25u32 {
            let c = pochhammer_alpha_coeffs(n, n as usize);
            let n = n as i64;
            assert_eq!(c[n as usize], int(1));
            assert_eq!(c[n as usize - 1], rat(-n * (n + 1), 2));
            assert_eq!(c[n as usize - 2], rat((n - 1) * n * (n + 1) * (3 * n + 2), 24));
        }
        assert_eq!(pochhammer_alpha_coeffs(4, 0), vec![int(1)]);
        for m in 0..=25 {
            for n in [1u32, 3, 9] {
                let direct = raising_factorial(&int(-(n as i64)), m);
                let expect: Vec<_> = (0..=m).map(|j| direct.coeff(j)).collect();
                assert_eq!(pochhammer_alpha_coeffs(n, m), expect);
            }
        }
    }

    #[test]
    fn expansion_leading_and_balanced() {
        let spec = example_spec(1);
        let eps = epsilon_expansion(&spec);
        assert_eq!(eps.coeff(0), &Polynomial::one());
        assert_eq!(eps.coeff(1), &Polynomial::constant(int(-45)));
        assert_eq!(eps.coeffs().len(), 10);
        for j in 0..=9 {
            assert!(eps.is_constant(j));
        }
        assert_eq!(&a1_closed_form(&spec), eps.coeff(1));
        assert_eq!(a2_closed_form(&spec).as_ref(), Some(eps.coeff(2)));
    }

    #[test]
    fn single_coefficient_matches_expansion() {
        let spec = example_spec(2);
        let eps = epsilon_expansion(&spec);
        for j in 0..=10 {
            assert_eq!(epsilon_coefficient(&spec, j).as_ref(), Some(eps.coeff(j)));
        }
        assert_eq!(epsilon_coefficient(&spec, 11), None);
    }

    #[test]
    fn expansion_degree_bound() {
        let spec = HartogsSpec::new(
            vec![fam(DomainFamily::TypeIII(2)), ball(2)],
            vec![rat(2, 3), rat(5, 4)],
            2,
        )
        .unwrap();
        let eps = epsilon_expansion(&spec);
        let d = spec.base_dim() as usize;
        for (j, a) in eps.coeffs().iter().enumerate() {
            assert!(a.degree().unwrap_or(0) <= j.min(d), "a_{j} = {a}");
        }
    }

    #[test]
    fn top_coefficient_examples() {
        let t = lemma28_coeffs(&ball(1), &int(1));
        assert_eq!((t.c0, t.c1, t.c2), (int(1), int(-1), None));
        let t = lemma28_coeffs(&fam(DomainFamily::TypeIII(2)), &int(1));
        assert_eq!((t.c0, t.c1), (int(1), rat(-9, 2)));
        let direct = hua_chi(&fam(DomainFamily::TypeIII(2))).compose_affine(&int(1), &int(-3));
        assert_eq!(t.c2, Some(direct.coeff(1)));
    }

    #[test]
    fn top_coefficients_match_expansion_over_catalog() {
        for inv in crate::domain::enumerate_catalog(30) {
            for mu in [int(1), rat(1, 2), rat(7, 3)] {
                let direct = hua_chi(&inv).compose_affine(&mu, &int(-(inv.p as i64)));
                let d = inv.d as usize;
                let t = lemma28_coeffs(&inv, &mu);
                assert_eq!(t.c0, direct.coeff(d), "{inv}");
                assert_eq!(t.c1, direct.coeff(d - 1), "{inv}");
                if d >= 2 {
                    assert_eq!(t.c2, Some(direct.coeff(d - 2)), "{inv}");
                }
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let c = curvature_scalars(&ball(1));
        assert_eq!((c.r_omega, c.s_omega), (int(0), int(0)));
        assert_eq!(eq46_lhs(&fam(DomainFamily::TypeV)), int(-11736));
        assert_eq!(eq46_lhs(&fam(DomainFamily::TypeVI)), int(-76599));
        assert_eq!(eq46_lhs(&fam(DomainFamily::TypeIV(5))), rat(-865, 4));
    }

    #[test]
    fn lower_bound_polynomial_per_type() {
        for inv in crate::domain::enumerate_catalog(60) {
            let expected = match inv.family {
                DomainFamily::TypeI { m, n } => {
                    let (m, n) = (m as i64, n as i64);
                    rat(-m * n * (4 * m * m * n * n - 2 * m * m - 2 * n * n + m * n + 1), 2)
                }
                DomainFamily::TypeII(q) if q % 2 == 0 => {
                    let n = q as i64 / 2;
                    int(-n * (32 * n.pow(5) - 80 * n.pow(4) + 60 * n.pow(3) - 4 * n * n - 9 * n + 2))
                }
                DomainFamily::TypeII(q) => {
                    let n = (q as i64 - 1) / 2;
                    int(-n * (2 * n + 1) * (16 * n.pow(4) - 10 * n * n + 3 * n + 1))
                }
                DomainFamily::TypeIII(n) => {
                    let n = n as i64;
                    rat(-n * (n + 1) * (2 * n.pow(4) + 8 * n.pow(3) + 7 * n * n - 5 * n - 4), 16)
                }
                DomainFamily::TypeIV(n) => {
                    let n = n as i64;
                    rat(-n * (8 * n * n - 5 * n - 2), 4)
                }
                DomainFamily::TypeV => int(-11736),
                DomainFamily::TypeVI => int(-76599),
            };
            assert_eq!(eq46_lhs(&inv), expected, "{inv}");
            assert!(eq46_lhs(&inv).is_negative());
        }
    }

    #[test]
    fn root_square_sum_matches_roots() {
        for inv in crate::domain::enumerate_catalog(40) {
            let p = int(inv.p as i64);
            let direct = hua_roots(&inv)
                .into_iter()
                .map(|s| {
                    let x = s + &p;
                    &x * &x
                })
                .fold(Rational::zero(), |a, b| a + b);
            assert_eq!(root_square_sum(&inv), direct, "{inv}");
        }
    }

    #[test]
    fn two_factor_examples() {
        let spec = HartogsSpec::new(vec![ball(1), ball(1)], vec![int(1), int(1)], 1).unwrap();
        let t = two_factor_difference_identities(&spec).unwrap();
        assert_eq!(t.rhs1, int(1));
        assert!(t.holds());
        let spec = HartogsSpec::new(vec![ball(1), ball(1)], vec![int(1), rat(1, 2)], 1).unwrap();
        let t = two_factor_difference_identities(&spec).unwrap();
        assert_eq!(t.rhs1, int(0));
        assert!(t.holds());
        let spec = HartogsSpec::new(vec![ball(1)], vec![int(1)], 1).unwrap();
        assert_eq!(
            two_factor_difference_identities(&spec),
            Err(Error::FactorCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn spec_validation() {
        assert!(HartogsSpec::new(vec![], vec![], 1).is_err());
        assert!(HartogsSpec::new(vec![ball(1)], vec![int(0)], 1).is_err());
        assert!(HartogsSpec::new(vec![ball(1)], vec![int(1), int(1)], 1).is_err());
        assert!(HartogsSpec::new(vec![ball(1)], vec![int(1)], 0).is_err());
        let spec = example_spec(2);
        assert_eq!((spec.base_dim(), spec.total_dim(), spec.k()), (8, 10, 4));
        assert_eq!(spec.alpha_threshold(), int(10));
        let wide = example_spec(1);
        assert_eq!(wide.alpha_threshold(), int(9));
    }
}
