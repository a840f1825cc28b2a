//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdict lines are always printed; exits nonzero if any criterion
//! fails.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use resfin_core::arith::{dz_u64, gauss_irreducible_count};
use resfin_core::group::GroupSpec;
use resfin_core::multipoly::{lemma_z_exponents, random_nonzero_multipoly, substitute_powers, ExponentMethod};
use resfin_core::profiler::{
    farb_profile, farb_z_table, inequality_audit, subgroup_growth_catalog, threshold_check, Budget, CatalogGroup,
};
use resfin_core::ring::Characteristic;
use resfin_core::specfile::load_spec;
use resfin_core::witness::{lemma_a_prime_bound, lemma_a_value_bound, separate_element, verify_witness, HomProvenance};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn group(name: &str) -> GroupSpec {
    load_spec(&specs_dir().join(name)).expect("sample spec loads").spec
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Lemma Z soundness on 200 seeded polynomials.
fn lemma_z() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut nonzero = 0;
    let mut recursion = 0;
    for k in 0..200 {
        let ch = match k % 3 {
            0 => Characteristic::Zero,
            1 => Characteristic::prime(2).unwrap(),
            _ => Characteristic::prime(3).unwrap(),
        };
        let s = 1 + k % 3;
        let f = random_nonzero_multipoly(&mut rng, &ch, s, 5, 20, 6);
        let choice = lemma_z_exponents(&f).map_err(|e| e.to_string())?;
        let g = substitute_powers(&f, &choice.exponents).map_err(|e| e.to_string())?;
        nonzero += usize::from(!g.is_zero());
        if choice.method == ExponentMethod::DegreeRecursion {
            recursion += 1;
            let d = f.total_degree() as u64;
            let bound = d.pow(2 * s as u32);
            ensure(choice.exponents.iter().all(|&n| n <= bound), format!("case {k}: exponents {:?} exceed d^2s = {bound}", choice.exponents))?;
        }
    }
    ensure(nonzero == 200, format!("{nonzero}/200 nonzero"))?;
    Ok(format!("200/200 nonzero; {recursion} via recursion, all within d^(2s)"))
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn monic(p: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(d as u32)).map(move |mut code| {
        let mut v: Vec<u64> = (0..d)
            .map(|_| {
                let c = code % p;
                code /= p;
                c
            })
            .collect();
        v.push(1);
        v
    })
}

/// Gauss's count against a sieve over all monic products.
fn gauss() -> Outcome {
    for p in [2u64, 3, 5] {
        for l in 1..=6usize {
            let mut reducible = HashSet::new();
            for a in 1..=l / 2 {
                for f in monic(p, a) {
                    for g in monic(p, l - a) {
                        reducible.insert(mul_mod(&f, &g, p));
                    }
                }
            }
            let expected = p.pow(l as u32) - reducible.len() as u64;
            let got = gauss_irreducible_count(&BigInt::from(p), l as u64).map_err(|e| e.to_string())?;
            ensure(got == BigInt::from(expected), format!("p={p} l={l}: formula {got}, enumeration {expected}"))?;
        }
    }
    Ok("exact for p in {2,3,5}, l <= 6".into())
}

/// F_Z band and monotonicity up to 10⁶.
fn farb_band() -> Outcome {
    let n_max = 1_000_000u64;
    let table = farb_z_table(n_max);
    let mut running = 0;
    for i in 1..=n_max {
        running = running.max(dz_u64(i));
        ensure(table[i as usize - 1] == running, format!("F_Z({i}) = {} but max D_Z = {running}", table[i as usize - 1]))?;
    }
    ensure(table.windows(2).all(|w| w[0] <= w[1]), "not nondecreasing")?;
    let mut ratios = Vec::new();
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let ratio = table[n as usize - 1] as f64 / (n as f64).ln();
        ensure((0.5..=3.0).contains(&ratio), format!("n={n}: ratio {ratio:.3}"))?;
        ratios.push(format!("{ratio:.3}"));
    }
    Ok(format!("F_Z(n)/ln n = [{}] at 10^3..10^6; nondecreasing", ratios.join(", ")))
}

/// Witness soundness on the radius-8 balls.
fn witnesses() -> Outcome {
    let mut total = 0;
    for name in ["sanov.toml", "aff3.toml"] {
        let g = group(name);
        let ball = g.ball_enumerate(8, 1_000_000).map_err(|e| e.to_string())?;
        for e in &ball {
            let rec = separate_element(&g, &e.word, &e.element).map_err(|err| format!("{name} {}: {err}", e.word.render(&g)))?;
            ensure(rec.verified, format!("{name} {}: not verified", e.word.render(&g)))?;
            verify_witness(&g, &rec).map_err(|r| format!("{name} {}: rejected {}", e.word.render(&g), r.code()))?;
            ensure(!rec.hom.apply_poly(g.phi()).is_zero(), format!("{name} {}: hom(phi) = 0", e.word.render(&g)))?;
        }
        total += ball.len();
    }
    Ok(format!("{total} nontrivial elements of length <= 8 separated and verified"))
}

/// Slope of log(max gl bound) against log radius, and the per-word chain.
fn polynomial_trend() -> Outcome {
    let g = group("sanov.toml");
    let profile = farb_profile(&g, 8, &Budget::default(), 0).map_err(|e| e.to_string())?;
    let pts: Vec<(f64, f64)> = profile
        .rows
        .iter()
        .map(|r| ((r.radius as f64).ln(), resfin_core::profiler::ln_big(&r.max_gl_bound)))
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let m2 = (g.size() * g.size()) as u32;
    let limit = (2.0 * g.nvars() as f64 + 2.0) * m2 as f64 + 0.5;
    ensure(slope <= limit, format!("slope {slope:.3} > {limit}"))?;
    let excluded: BTreeSet<BigInt> = g.excluded_primes().clone();
    let mut chained = 0;
    for e in &profile.elements {
        let w = e.witness.as_ref().map_err(|m| m.clone())?;
        if let HomProvenance::LemmaA { g_degree, max_coeff, .. } = w.hom.provenance() {
            let worst_point = g_degree + 1;
            let value = lemma_a_value_bound(*g_degree, worst_point, max_coeff);
            let p = lemma_a_prime_bound(&value, &excluded);
            let bound = BigUint::from(p).pow(m2);
            ensure(w.gl_bound <= bound, format!("{}: gl bound {} above chain bound {bound}", e.word.render(&g), w.gl_bound))?;
            chained += 1;
        }
    }
    Ok(format!("slope {slope:.3} <= {limit}; {chained} Lemma-A witnesses within the chain bound"))
}

/// d_reduction ≤ image order ≤ gl bound with exhaustive reductions.
fn sandwich() -> Outcome {
    let mut checked = 0;
    for name in ["sanov.toml", "aff3.toml"] {
        let g = group(name);
        let budget = Budget { max_modulus: 31, max_degree: 3, ..Budget::default() };
        let profile = farb_profile(&g, 6, &budget, 6).map_err(|e| e.to_string())?;
        for e in &profile.elements {
            let label = || format!("{name} {}", e.word.render(&g));
            let w = e.witness.as_ref().map_err(|m| format!("{}: {m}", label()))?;
            let d = e.d_reduction.as_ref().ok_or_else(|| format!("{}: no reduction", label()))?;
            let d = d.as_ref().map_err(|m| format!("{}: {m}", label()))?;
            let order = &w.image_order.as_ref().ok_or_else(|| format!("{}: no image order", label()))?.order;
            ensure(d.exhaustive, format!("{}: reduction search not exhaustive", label()))?;
            ensure(BigUint::from(d.min_order) <= *order, format!("{}: d {} > order {order}", label(), d.min_order))?;
            ensure(*order <= w.gl_bound, format!("{}: order {order} > gl {}", label(), w.gl_bound))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} elements: d_reduction <= image order <= gl bound, all exhaustive"))
}

/// Degree and coefficient growth of scaled differences.
fn growth() -> Outcome {
    let mut checked = 0;
    for name in ["sanov.toml", "aff3.toml", "diagonal.toml"] {
        let g = group(name);
        let (c1, alpha) = g.growth_constants();
        let char_zero = matches!(g.characteristic(), Characteristic::Zero);
        for e in g.ball_enumerate(8, 1_000_000).map_err(|e| e.to_string())? {
            let n = e.word.len();
            let (coeff, degree) = g.growth_degree_bounds(&e.word);
            ensure(degree <= c1 * n as i64, format!("{name} {}: degree {degree} > {c1}*{n}", e.word.render(&g)))?;
            if char_zero {
                ensure(coeff < alpha.pow(n as u32), format!("{name} {}: coefficient {coeff} >= {alpha}^{n}", e.word.render(&g)))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} words within degree C1*|w| and coefficients below alpha^|w|"))
}

/// Index-m sublattices via Hermite normal forms [[a, b], [0, d]], listed as
/// distinct matrices.
fn hnf_sublattices(n: u64) -> usize {
    let mut set = HashSet::new();
    for m in 1..=n {
        for a in (1..=m).filter(|a| m % a == 0) {
            let d = m / a;
            for b in 0..d {
                set.insert((a, b, d));
            }
        }
    }
    set.len()
}

/// The Z inequality audit and the Z² catalog.
fn audit() -> Outcome {
    let report = inequality_audit(CatalogGroup::Z, 10_000).map_err(|e| e.to_string())?;
    ensure(report.all_pass(), "w(n) > F(n)^F(n) somewhere")?;
    for n in 1..=50u64 {
        let expected = hnf_sublattices(n) as u64;
        let got = subgroup_growth_catalog(CatalogGroup::Z2, n);
        ensure(got == expected, format!("Z^2 n={n}: catalog {got}, enumeration {expected}"))?;
    }
    Ok(format!("audit passes for n <= 10^4 (min margin {:.3}); Z^2 catalog exact for n <= 50", report.min_margin()))
}

/// (ln F)²/ln ln n at the sample points.
fn threshold() -> Outcome {
    let points = [16u64, 100, 10_000, 1_000_000];
    let table = farb_z_table(1_000_000);
    let samples: Vec<(u64, u64)> = points.iter().map(|&n| (n, table[n as usize - 1])).collect();
    let report = threshold_check(&samples, true).map_err(|e| e.to_string())?;
    for &(n, f) in &samples {
        let ratio = (f as f64).ln().powi(2) / (n as f64).ln().ln();
        ensure(ratio >= 0.4, format!("n={n}: ratio {ratio:.3}"))?;
    }
    ensure(report.verdict == Some(true), format!("library verdict {:?}", report.verdict))?;
    let shown: Vec<String> = report.samples.iter().map(|s| format!("{}:{:.3}", s.n, s.ratio)).collect();
    Ok(format!("ratios [{}] >= 0.4", shown.join(", ")))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_resfin")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("resfin {args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

/// Byte-identical output across runs.
fn determinism() -> Outcome {
    let sanov = specs_dir().join("sanov.toml");
    let aff3 = specs_dir().join("aff3.toml");
    let (sanov, aff3) = (sanov.to_str().unwrap(), aff3.to_str().unwrap());
    let cases: [&[&str]; 4] = [
        &["witness", sanov, "--word", "a b a^-1 b^-1 a"],
        &["witness", aff3, "--word", "a b a^-1"],
        &["profile", sanov, "--radius", "5", "--d-reduction-radius", "4"],
        &["profile", aff3, "--radius", "5", "--d-reduction-radius", "4"],
    ];
    for args in cases {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        ensure(!first.is_empty() && first == second, format!("resfin {args:?}: outputs differ"))?;
    }
    Ok("witness and profile outputs byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("lemma-z soundness", lemma_z),
        ("gauss count vs enumeration", gauss),
        ("F_Z band", farb_band),
        ("witness soundness", witnesses),
        ("polynomial bound trend", polynomial_trend),
        ("oracle sandwich", sandwich),
        ("degree/coefficient growth", growth),
        ("inequality audit", audit),
        ("threshold trend", threshold),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
