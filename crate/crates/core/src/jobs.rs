//! Reproducible jobs behind the `hartogs` binary: argument parsing, the four
//! commands, the named verification suites and the versioned JSON report.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{
    a2_scalars, allowed_factor, certify_balanced, classify_k2, expected_k2_families, ke_check,
    s_bounds_hold, solve_a2_constant, verify_lemma32, ClassifiedPair,
};
use crate::domain::{enumerate_catalog, parse_domain, parse_domain_list, validate_invariants, DomainInvariants};
use crate::error::{Error, Result};
use crate::geometry::HartogsGeometry;
use crate::hua::{
    a1_closed_form, a2_closed_form, epsilon_expansion, eq46_lhs, hua_blocks, hua_chi,
    pochhammer_alpha_coeffs, two_factor_difference_identities, HartogsSpec,
};
use crate::poly::{factorial, int, rat, to_f64, Polynomial, Rational};

pub const REPORT_VERSION: u32 = 1;

pub const SUITES: [&str; 4] = [
    "difference-identities",
    "catalog-bounds",
    "kernel-vs-hessian",
    "epsilon-constancy",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobReport {
    pub version: u32,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: Measured,
    pub tolerance: Tolerance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Measured {
    Number(f64),
    Text(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Tolerance {
    /// Exact comparison, no tolerance.
    Exact,
    /// Passes when `|measured| < value`.
    Absolute(f64),
    /// Passes when the relative error `measured < value`.
    Relative(f64),
    /// Passes when `measured > value`.
    Minimum(f64),
}

impl Check {
    pub fn exact(name: impl Into<String>, pass: bool, measured: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            measured: Measured::Text(measured.into()),
            tolerance: Tolerance::Exact,
        }
    }

    fn numeric(name: impl Into<String>, measured: f64, tolerance: Tolerance) -> Self {
        let pass = match tolerance {
            Tolerance::Exact => false,
            Tolerance::Absolute(t) | Tolerance::Relative(t) => measured.abs() < t,
            Tolerance::Minimum(t) => measured > t,
        };
        let measured = if measured.is_finite() {
            Measured::Number(measured)
        } else {
            Measured::Text(measured.to_string())
        };
        Self {
            name: name.into(),
            pass,
            measured,
            tolerance,
        }
    }

    pub fn absolute(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::numeric(name, measured, Tolerance::Absolute(tol))
    }

    pub fn relative(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::numeric(name, measured, Tolerance::Relative(tol))
    }

    pub fn minimum(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::numeric(name, measured, Tolerance::Minimum(bound))
    }
}

impl JobReport {
    fn new(command: &str, inputs: Value, result: Value, checks: Vec<Check>, seed: Option<u64>) -> Self {
        Self {
            version: REPORT_VERSION,
            command: command.into(),
            inputs,
            result,
            checks,
            seed,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("  seed: {seed}\n"));
        }
        out.push_str("inputs\n");
        render_value(&self.inputs, 1, &mut out);
        out.push_str("result\n");
        render_value(&self.result, 1, &mut out);
        if !self.checks.is_empty() {
            out.push_str("checks\n");
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let measured = match &c.measured {
                    Measured::Number(x) => format!("{x:.3e}"),
                    Measured::Text(t) => t.clone(),
                };
                let tol = match c.tolerance {
                    Tolerance::Exact => "exact".to_string(),
                    Tolerance::Absolute(t) => format!("|x| < {t:e}"),
                    Tolerance::Relative(t) => format!("rel < {t:e}"),
                    Tolerance::Minimum(t) => format!("x > {t:e}"),
                };
                out.push_str(&format!(
                    "  [{}] {:width$}  {measured}  ({tol})\n",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                ));
            }
        }
        out
    }
}

fn render_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if is_scalar(v) || v.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_value(v, depth + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if is_scalar(v) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(v)));
                } else {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    render_value(v, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// `p/q` text form used throughout the reports.
pub fn rational_text(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Coefficients lowest degree first, each as `p/q`.
pub fn poly_json(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(rational_text(c))).collect())
}

fn invariants_json(inv: &DomainInvariants) -> Value {
    json!({
        "family": inv.family.to_string(),
        "r": inv.r, "a": inv.a, "b": inv.b, "d": inv.d, "p": inv.p,
    })
}

fn spec_json(spec: &HartogsSpec) -> Value {
    json!({
        "factors": spec.factors().iter().map(invariants_json).collect::<Vec<_>>(),
        "mu": spec.mu().iter().map(rational_text).collect::<Vec<_>>(),
        "d0": spec.d0(),
        "d": spec.base_dim(),
        "n": spec.total_dim(),
    })
}

fn pair_json(pair: &ClassifiedPair) -> Value {
    json!({
        "factors": [pair.factors[0].family.to_string(), pair.factors[1].family.to_string()],
        "mu": [rational_text(&pair.mu[0]), rational_text(&pair.mu[1])],
    })
}

/// Parses a comma-separated list of positive integers or `p/q` fractions.
pub fn parse_mu_list(source: &str) -> Result<Vec<Rational>> {
    source
        .split(',')
        .map(|item| {
            let item = item.trim();
            let valid = !item.is_empty()
                && item.split('/').count() <= 2
                && item.split('/').all(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()));
            if !valid {
                return Err(Error::InvalidSpec(format!(
                    "exponent `{item}` must be written as an integer or p/q"
                )));
            }
            Rational::from_str(item)
                .map_err(|e| Error::InvalidSpec(format!("exponent `{item}`: {e}")))
        })
        .collect()
}

fn chi_factored(inv: &DomainInvariants) -> String {
    hua_blocks(inv)
        .into_iter()
        .flat_map(|(shift, len)| (0..len).map(move |l| &shift + int(l as i64)))
        .map(|c| format!("(s + {c})"))
        .collect()
}

fn chi_blocks(inv: &DomainInvariants) -> String {
    hua_blocks(inv)
        .into_iter()
        .map(|(shift, len)| format!("(s + {shift})_{len}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_domain(source: &str) -> Result<JobReport> {
    let items = parse_domain_list(source)?;
    let mut checks = Vec::new();
    let domains: Vec<Value> = items
        .iter()
        .map(|inv| {
            let chi = hua_chi(inv);
            let ok = validate_invariants(inv);
            checks.push(Check::exact(
                format!("{}: dimension and genus relations", inv.family),
                ok,
                if ok { "consistent" } else { "inconsistent" },
            ));
            json!({
                "invariants": invariants_json(inv),
                "relations_hold": ok,
                "chi_blocks": chi_blocks(inv),
                "chi_factored": chi_factored(inv),
                "chi_expanded": chi.display_in("s"),
                "chi_coefficients": poly_json(&chi),
                "allowed_in_balanced_product": allowed_factor(inv),
            })
        })
        .collect();
    Ok(JobReport::new(
        "domain",
        json!({ "spec": source }),
        json!({ "domains": domains }),
        checks,
        None,
    ))
}

pub fn cmd_balanced(source: &str, mu: &str, d0: u32) -> Result<JobReport> {
    let factors = parse_domain_list(source)?;
    let spec = HartogsSpec::new(factors, parse_mu_list(mu)?, d0)?;
    let cert = certify_balanced(&spec);
    let lead_ok = cert.lhs.leading_coeff() == cert.rhs.leading_coeff();
    let result = json!({
        "balanced": cert.balanced,
        "kahler_einstein": ke_check(&spec),
        "alpha_threshold": rational_text(&cert.alpha_threshold),
        "lhs": poly_json(&cert.lhs),
        "rhs": poly_json(&cert.rhs),
        "lhs_display": cert.lhs.to_string(),
        "first_mismatch": cert.first_mismatch,
    });
    let checks = vec![Check::exact(
        "leading coefficients equal ∏μ^d",
        lead_ok,
        cert.lhs.leading_coeff().map(rational_text).unwrap_or_default(),
    )];
    Ok(JobReport::new("balanced", spec_json(&spec), result, checks, None))
}

pub fn cmd_classify(d_max: u32, denom_max: u32) -> Result<JobReport> {
    if d_max < 2 || denom_max < 1 {
        return Err(Error::InvalidSpec("classify needs --dmax ≥ 2 and --denom-max ≥ 1".into()));
    }
    let found = classify_k2(d_max, denom_max);
    let expected = expected_k2_families(d_max, denom_max);
    let checks = vec![
        Check::exact(
            "result equals the two closed-form families",
            found == expected,
            format!("{} found, {} expected", found.len(), expected.len()),
        ),
        Check::exact(
            "every factor passes the component filter",
            found.iter().all(|p| p.factors.iter().all(allowed_factor)),
            format!("{} pairs", found.len()),
        ),
    ];
    Ok(JobReport::new(
        "classify",
        json!({ "dmax": d_max, "denom_max": denom_max }),
        json!({ "pairs": found.iter().map(pair_json).collect::<Vec<_>>() }),
        checks,
        None,
    ))
}

pub fn cmd_a2solve(first: &str, second: &str) -> Result<JobReport> {
    let inv1 = parse_domain(first)?;
    let inv2 = parse_domain(second)?;
    let sc = a2_scalars(&inv1, &inv2);
    let mut checks = vec![
        Check::exact(
            "discriminant ≥ 0",
            sc.discriminant >= int(0),
            rational_text(&sc.discriminant),
        ),
        Check::exact("S bounds and branch inequality", verify_lemma32(&inv1, &inv2), "exact"),
    ];
    let solutions = match solve_a2_constant(&inv1, &inv2) {
        Ok(s) => s,
        Err(e) => {
            checks.push(Check::exact("solver", false, e.to_string()));
            Vec::new()
        }
    };
    checks.push(Check::exact(
        "at least one positive solution",
        !solutions.is_empty(),
        solutions.len().to_string(),
    ));
    for (i, s) in solutions.iter().enumerate() {
        checks.push(Check::absolute(format!("solution {i}: linear residual"), s.residuals[0], 1e-9));
        checks.push(Check::absolute(format!("solution {i}: quadratic residual"), s.residuals[1], 1e-9));
        checks.push(Check::absolute(format!("solution {i}: x1 + x2 - 1"), s.x1 + s.x2 - 1.0, 1e-12));
    }
    let result = json!({
        "A": rational_text(&sc.a),
        "B": rational_text(&sc.b),
        "S1": rational_text(&sc.s1),
        "S2": rational_text(&sc.s2),
        "discriminant": rational_text(&sc.discriminant),
        "solutions": solutions.iter().map(|s| json!({
            "mu1": s.mu1, "mu2": s.mu2, "x1": s.x1, "x2": s.x2,
            "branch": s.branch, "discriminant": s.discriminant,
            "residuals": s.residuals,
        })).collect::<Vec<_>>(),
    });
    Ok(JobReport::new(
        "a2solve",
        json!({ "factors": [invariants_json(&inv1), invariants_json(&inv2)] }),
        result,
        checks,
        None,
    ))
}

pub fn cmd_verify(suite: &str, seed: u64, samples: Option<usize>) -> Result<JobReport> {
    let (checks, result) = match suite {
        "difference-identities" => suite_difference_identities(seed, samples.unwrap_or(20)),
        "catalog-bounds" => suite_catalog_bounds(),
        "kernel-vs-hessian" => suite_kernel_vs_hessian(seed, samples.unwrap_or(20))?,
        "epsilon-constancy" => suite_epsilon_constancy(seed, samples.unwrap_or(200))?,
        other => return Err(Error::UnknownSuite(other.into())),
    };
    Ok(JobReport::new(
        "verify",
        json!({ "suite": suite, "samples": samples }),
        result,
        checks,
        Some(seed),
    ))
}

/// `(d!/2)(2x - d + 1)`.
pub fn first_difference_closed_form(d: usize) -> Polynomial {
    let half = Rational::from_integer(factorial(d)) / int(2);
    Polynomial::linear(&half * int(2), &half * int(1 - d as i64))
}

/// `(d!/24)(12x² - 12(d-2)x + 3d² - 11d + 10)`, `d ≥ 2`.
pub fn second_difference_closed_form(d: usize) -> Polynomial {
    let d = d as i64;
    Polynomial::from_i64(&[3 * d * d - 11 * d + 10, -12 * (d - 2), 12])
        .scale(&(Rational::from_integer(factorial(d as usize)) / int(24)))
}

/// Random spec over small catalog factors with small rational exponents.
pub fn random_spec(rng: &mut ChaCha8Rng, max_factors: usize, d_max: u32) -> HartogsSpec {
    let catalog = enumerate_catalog(d_max);
    let k = rng.gen_range(1..=max_factors);
    let factors: Vec<_> = (0..k).map(|_| catalog[rng.gen_range(0..catalog.len())]).collect();
    let mu = (0..k)
        .map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=9)))
        .collect();
    HartogsSpec::new(factors, mu, rng.gen_range(1..=3)).expect("random spec is valid")
}

fn suite_difference_identities(seed: u64, samples: usize) -> (Vec<Check>, Value) {
    let mut checks = Vec::new();
    let first_ok = (1..=20).all(|d| {
        Polynomial::monomial(int(1), d).backward_difference(d - 1) == first_difference_closed_form(d)
    });
    checks.push(Check::exact("D^{d-1} x^d, d = 1..20", first_ok, "exact"));
    let second_ok = (2..=20).all(|d| {
        Polynomial::monomial(int(1), d).backward_difference(d - 2) == second_difference_closed_form(d)
    });
    checks.push(Check::exact("D^{d-2} x^d, d = 2..20", second_ok, "exact"));
    let poch_ok = (2..=25i64).all(|n| {
        let c = pochhammer_alpha_coeffs(n as u32, n as usize);
        c[n as usize - 1] == rat(-n * (n + 1), 2)
            && c[n as usize - 2] == rat((n - 1) * n * (n + 1) * (3 * n + 2), 24)
    });
    checks.push(Check::exact("(α - n)_n subleading coefficients, n = 2..25", poch_ok, "exact"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut expansion_ok = 0;
    let mut pair_ok = 0;
    for _ in 0..samples {
        let spec = random_spec(&mut rng, 3, 8);
        let eps = epsilon_expansion(&spec);
        let a2_ok = match a2_closed_form(&spec) {
            Some(a2) => &a2 == eps.coeff(2),
            None => true,
        };
        if &a1_closed_form(&spec) == eps.coeff(1) && a2_ok {
            expansion_ok += 1;
        }
        let mut pair = random_spec(&mut rng, 1, 8);
        while pair.k() < 2 {
            let extra = random_spec(&mut rng, 1, 8);
            let mut f = pair.factors().to_vec();
            f.extend_from_slice(extra.factors());
            let mut m = pair.mu().to_vec();
            m.extend_from_slice(extra.mu());
            pair = HartogsSpec::new(f, m, pair.d0()).expect("valid pair");
        }
        if two_factor_difference_identities(&pair).is_ok_and(|t| t.holds()) {
            pair_ok += 1;
        }
    }
    checks.push(Check::exact(
        "a1, a2 closed forms on random specs",
        expansion_ok == samples,
        format!("{expansion_ok}/{samples}"),
    ));
    checks.push(Check::exact(
        "two-factor difference closed forms",
        pair_ok == samples,
        format!("{pair_ok}/{samples}"),
    ));
    (checks, json!({ "random_specs": samples }))
}

fn suite_catalog_bounds() -> (Vec<Check>, Value) {
    let catalog = enumerate_catalog(60);
    let s_ok = catalog.iter().filter(|i| s_bounds_hold(i)).count();
    let neg = catalog.iter().filter(|i| eq46_lhs(i) < int(0)).count();
    let small = enumerate_catalog(30);
    let mut pairs = 0;
    let mut pair_ok = 0;
    for a in &small {
        for b in &small {
            pairs += 1;
            if verify_lemma32(a, b) {
                pair_ok += 1;
            }
        }
    }
    let checks = vec![
        Check::exact(
            "S(Ω) bounds for d ≤ 60",
            s_ok == catalog.len(),
            format!("{s_ok}/{}", catalog.len()),
        ),
        Check::exact(
            "lower-bound polynomial negative for d ≤ 60",
            neg == catalog.len(),
            format!("{neg}/{}", catalog.len()),
        ),
        Check::exact("pair inequalities for d ≤ 30", pair_ok == pairs, format!("{pair_ok}/{pairs}")),
    ];
    (checks, json!({ "domains": catalog.len(), "pairs": pairs }))
}

fn point_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

fn complex_det(m: &DMatrix<Complex64>) -> f64 {
    m.determinant().re
}

/// Largest relative disagreement between the closed-form Monge–Ampère
/// determinant and the finite-difference Hessian determinant.
pub fn monge_ampere_fd_error(geom: &HartogsGeometry, seed: u64, samples: usize) -> Result<f64> {
    let c = geom.norm_constant_product()?;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let pt = geom.sample(point_seed(seed, i), 0.7)?;
        let closed = geom.monge_ampere(&pt)? * c;
        let fd = complex_det(&geom.hessian_fd(&pt, 1e-4)?);
        worst = worst.max(((fd - closed) / closed).abs());
    }
    Ok(worst)
}

/// Largest entrywise gap between the finite-difference Hessian at `z = 0` and its closed form.
pub fn origin_block_error(geom: &HartogsGeometry, seed: u64, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut pt = geom.sample(point_seed(seed, i), 0.7)?;
        for b in &mut pt.blocks {
            b.fill(Complex64::new(0.0, 0.0));
        }
        let closed = geom.origin_hessian(&pt.fiber)?;
        let fd = geom.hessian_fd(&pt, 1e-4)?;
        worst = worst.max((fd - closed).camax());
    }
    Ok(worst)
}

fn suite_kernel_vs_hessian(seed: u64, samples: usize) -> Result<(Vec<Check>, Value)> {
    let balls = HartogsSpec::new(
        vec![DomainInvariants::ball(1), DomainInvariants::ball(2)],
        vec![rat(1, 2), rat(1, 3)],
        1,
    )?;
    let mixed = HartogsSpec::new(
        vec![parse_domain("III(2)")?, parse_domain("IV(5)")?],
        vec![rat(1, 2), rat(2, 3)],
        1,
    )?;
    let gb = HartogsGeometry::new(&balls)?;
    let gm = HartogsGeometry::new(&mixed)?;

    let mut herm: f64 = 0.0;
    let mut identity: f64 = 0.0;
    let alpha = to_f64(&balls.alpha_threshold()) + 2.5;
    for i in 0..samples {
        let pt = gb.sample(point_seed(seed, i), 0.7)?;
        let h = gb.hessian_fd(&pt, 1e-4)?;
        herm = herm.max((&h - h.adjoint()).camax());
        let k = gb.kernel(alpha, &pt)?;
        let via_eps = k.epsilon * (alpha * k.phi).exp();
        identity = identity.max(((k.kernel - via_eps) / via_eps).abs());
    }
    let checks = vec![
        Check::relative(
            "Monge–Ampère vs FD determinant (balls)",
            monge_ampere_fd_error(&gb, seed, samples)?,
            1e-4,
        ),
        Check::relative(
            "Monge–Ampère vs FD determinant (III(2) × IV(5))",
            monge_ampere_fd_error(&gm, seed, samples.min(5))?,
            1e-3,
        ),
        Check::absolute("origin Hessian blocks (balls)", origin_block_error(&gb, seed, samples)?, 1e-6),
        Check::absolute("Hessian is Hermitian", herm, 1e-6),
        Check::relative("kernel = ε·exp(αΦ)", identity, 1e-12),
    ];
    Ok((
        checks,
        json!({ "specs": [spec_json(&balls), spec_json(&mixed)], "step": 1e-4 }),
    ))
}

/// `(max - min) / mean` of `ε_α` over seeded sample points.
pub fn epsilon_spread(geom: &HartogsGeometry, alpha: f64, seed: u64, samples: usize) -> Result<f64> {
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let pt = geom.sample(point_seed(seed, i), 1.0)?;
        values.push(geom.epsilon(alpha, &pt)?);
    }
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok((max - min) / mean)
}

/// Largest relative gap between `ε_α` at a point and the exact expansion evaluated there.
pub fn expansion_vs_epsilon(spec: &HartogsSpec, alphas: &[f64], seed: u64, samples: usize) -> Result<f64> {
    let geom = HartogsGeometry::new(spec)?;
    let eps = epsilon_expansion(spec);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let pt = geom.sample(point_seed(seed, i), 1.0)?;
        let x = geom.x_value(&pt)?;
        for &alpha in alphas {
            let direct = geom.epsilon(alpha, &pt)?;
            let series = eps.eval_f64(alpha, x);
            worst = worst.max(((direct - series) / direct).abs());
        }
    }
    Ok(worst)
}

fn suite_epsilon_constancy(seed: u64, samples: usize) -> Result<(Vec<Check>, Value)> {
    let fixtures = [
        HartogsSpec::new(
            vec![DomainInvariants::ball(1), parse_domain("III(2)")?],
            vec![int(1), rat(1, 2)],
            1,
        )?,
        HartogsSpec::new(
            parse_domain_list("IV(5),B(1),B(1),B(1)")?,
            parse_mu_list("1/2,1,1/3,1/7")?,
            2,
        )?,
    ];
    let mut checks = Vec::new();
    for spec in &fixtures {
        let geom = HartogsGeometry::new(spec)?;
        let t = to_f64(&spec.alpha_threshold());
        let label = spec
            .factors()
            .iter()
            .map(|f| f.family.to_string())
            .collect::<Vec<_>>()
            .join("×");
        for offset in [1.0, 5.5, 100.0] {
            checks.push(Check::relative(
                format!("{label}: spread at α = {}", t + offset),
                epsilon_spread(&geom, t + offset, seed, samples)?,
                1e-10,
            ));
        }
        checks.push(Check::relative(
            format!("{label}: expansion matches ε"),
            expansion_vs_epsilon(spec, &[t + 1.0, t + 5.5, t + 100.0], seed, samples.min(50))?,
            1e-10,
        ));
    }
    let unbalanced = HartogsSpec::new(
        vec![DomainInvariants::ball(1), DomainInvariants::ball(1)],
        vec![rat(2, 3), rat(2, 3)],
        1,
    )?;
    let geom = HartogsGeometry::new(&unbalanced)?;
    checks.push(Check::minimum(
        "B×B (2/3, 2/3): spread at α = 10",
        epsilon_spread(&geom, 10.0, seed, samples)?,
        1e-3,
    ));
    checks.push(Check::relative(
        "B×B (2/3, 2/3): expansion matches ε",
        expansion_vs_epsilon(&unbalanced, &[10.0, 12.5], seed, samples.min(50))?,
        1e-10,
    ));
    Ok((
        checks,
        json!({
            "balanced_fixtures": fixtures.iter().map(spec_json).collect::<Vec<_>>(),
            "unbalanced_fixture": spec_json(&unbalanced),
        }),
    ))
}

#[derive(Debug, Parser)]
#[command(name = "hartogs", version, about = "Balanced metrics on generalized Cartan–Hartogs domains")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants and Hua polynomial of one or more factors, e.g. `III(2)` or `B(1),IV(5)`.
    Domain { spec: String },
    /// Decide balancedness of a product with exponents `--mu`.
    Balanced {
        spec: String,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 1)]
        d0: u32,
    },
    /// Enumerate balanced two-factor products.
    Classify {
        #[arg(long, default_value_t = 8)]
        dmax: u32,
        #[arg(long = "denom-max", default_value_t = 9)]
        denom_max: u32,
    },
    /// Exponents making the second expansion coefficient constant.
    A2solve { first: String, second: String },
    /// Run a named property suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
    },
}

pub fn run(command: &Command) -> Result<JobReport> {
    match command {
        Command::Domain { spec } => cmd_domain(spec),
        Command::Balanced { spec, mu, d0 } => cmd_balanced(spec, mu, *d0),
        Command::Classify { dmax, denom_max } => cmd_classify(*dmax, *denom_max),
        Command::A2solve { first, second } => cmd_a2solve(first, second),
        Command::Verify { suite, seed, samples } => cmd_verify(suite, *seed, *samples),
    }
}

/// Parses arguments, runs the job, prints its report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(report) => {
            let text = if cli.json {
                format!("{}\n", report.to_json())
            } else {
                report.to_text()
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
