//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! All comparisons are exact over ℚ(i) (tolerance 0). Runtime limits are
//! part of the criteria and are enforced as stated.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use e16::check::CheckResult;
use e16::contact::{self, E16Basis};
use e16::exactnum::{add_term, Gr};
use e16::gmodule::{self, FVec, ModuleSpec};
use e16::grassmann::{self, Mono};
use e16::singular::{self, BoundReport};
use e16::verma::{self, dual_degree, VermaVector};

struct Outcome {
    ok: bool,
    summary: String,
    details: Vec<String>,
}

fn from_checks(checks: &[CheckResult], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let checked: u64 = checks.iter().map(|c| c.checked).sum();
    let mut details: Vec<String> = Vec::new();
    for c in checks.iter().filter(|c| !c.passed()) {
        details.push(c.to_string());
        details.extend(c.failures.iter().map(|f| format!("  {f}")));
    }
    let in_time = limit.map_or(true, |l| elapsed <= l);
    if !in_time {
        details.push(format!("runtime {:.1} s exceeds {:.0} s", elapsed.as_secs_f64(), limit.unwrap().as_secs_f64()));
    }
    let limit_text = limit.map(|l| format!(", limit {:.0} s", l.as_secs_f64())).unwrap_or_default();
    Outcome {
        ok: details.is_empty() && checked > 0,
        summary: format!(
            "{checked} exact checks in {} suites, {:.1} s{limit_text}",
            checks.len(),
            elapsed.as_secs_f64()
        ),
        details,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn algebra() -> Outcome {
    let (checks, t) = timed(|| {
        let basis = E16Basis::new(8).expect("basis up to degree 8");
        let mut checks = contact::jacobi_suite(&basis, 4, None);
        checks.push(contact::closure_suite(&basis, 6, None));
        checks.push(contact::grading_suite(&basis, None));
        checks.push(contact::depth_suite(&basis, 6, None));
        checks
    });
    from_checks(&checks, t, Some(Duration::from_secs(60)))
}

fn roots() -> Outcome {
    let (checks, t) = timed(|| contact::root_suite(None));
    from_checks(&checks, t, None)
}

fn unit(k: u32, i: Mono, coord: usize) -> VermaVector {
    VermaVector::from([((k, i), FVec::from([(coord, Gr::ONE)]))])
}

fn oracle() -> Outcome {
    let f = gmodule::vector(Gr::from_ratio(5, 2));
    let gens = singular::generators();
    let mut vectors = Vec::new();
    for k in 0..=2 {
        for i in Mono::all().filter(|&i| dual_degree(k, i) <= 4) {
            for c in 0..f.dim() {
                vectors.push(unit(k, i, c));
            }
        }
    }
    let pairs: Vec<(Mono, Mono)> = gens.iter().flat_map(|&a| gens.iter().map(move |&b| (a, b))).collect();
    let (results, t) = timed(|| {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                let (xa, xb) = (grassmann::xi(&a.indices()), grassmann::xi(&b.indices()));
                let mut res = CheckResult::new("");
                for m in &vectors {
                    let r = verma::commutator_oracle(&f, &xa, &xb, m).expect("monomial generators");
                    res.record(r.holds(), || {
                        format!("xi[{}], xi[{}] on {}", a.label(), b.label(), verma::render(m, verma::render_fvec))
                    });
                }
                res
            })
            .collect::<Vec<_>>()
    });
    let mut all = CheckResult::new(format!(
        "[a_lambda, b_mu] = [a_lambda b]_(lambda+mu), {} pairs x {} basis vectors",
        pairs.len(),
        vectors.len()
    ));
    for r in results {
        all.merge(r);
    }
    from_checks(&[all], t, Some(Duration::from_secs(600)))
}

fn random_vector(rng: &mut StdRng, dim: usize) -> VermaVector {
    let mut m = VermaVector::new();
    for _ in 0..rng.gen_range(1..=12) {
        let k = rng.gen_range(0..=4);
        let i = Mono::from_bits(rng.gen_range(0..64));
        let c = Gr::from_parts(rng.gen_range(-9..=9), rng.gen_range(1..=4), rng.gen_range(-9..=9), 1);
        add_term(&mut m, (k, i), &FVec::from([(rng.gen_range(0..dim), c)]), &Gr::ONE);
    }
    m
}

fn reconstruction() -> Outcome {
    let f = gmodule::vector(Gr::from_ratio(-3, 2));
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let reps: [&[u8]; 4] = [&[], &[3], &[2, 5], &[1, 4, 6]];
    let (checks, t) = timed(|| {
        let mut res = CheckResult::new("coefficient families reconstruct the action, direct and dual");
        for l in reps {
            let (s, dual) = grassmann::hodge_modified(l).expect("distinct indices");
            for _ in 0..100 {
                let m = random_vector(&mut rng, f.dim());
                let fun = verma::coefficient_functionals(&f, l, &m).expect("Θ-degree <= 4");
                let direct = verma::lambda_action_t(&f, l, &m).expect("distinct indices").to_bipoly();
                let dual_action = verma::mono_action(&f, dual, &m).to_bipoly().scaled(&Gr::from(i64::from(s)));
                res.record(fun.direct.reconstruct() == direct, || format!("xi{l:?}, direct"));
                res.record(fun.dual.reconstruct() == dual_action, || format!("xi{l:?}, dual"));
            }
        }
        vec![res]
    });
    from_checks(&checks, t, None)
}

fn proof_steps() -> Outcome {
    let (checks, t) = timed(singular::reproduce_proof_steps);
    from_checks(&checks, t, None)
}

fn bound(reports: &[(BoundReport, Duration, Duration)]) -> Outcome {
    let mut checks = Vec::new();
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    let mut summary = Vec::new();
    for (r, t, limit) in reports {
        total += *t;
        summary.push(format!("{} {:.0} s", r.module, t.as_secs_f64()));
        if t > limit {
            details.push(format!("{}: {:.1} s exceeds {:.0} s", r.module, t.as_secs_f64(), limit.as_secs_f64()));
        }
        for e in &r.entries {
            let mut c = CheckResult::new(format!("{} t = {}", r.module, e.t_scalar));
            for ch in e.checks.iter().filter(|c| c.name != "coefficient relations") {
                c.merge(ch.clone());
            }
            checks.push(c);
        }
    }
    let mut out = from_checks(&checks, total, None);
    out.summary = format!("{} ({})", out.summary, summary.join(", "));
    out.ok &= details.is_empty();
    out.details.extend(details);
    out
}

fn identities(reports: &[(BoundReport, Duration, Duration)]) -> Outcome {
    let (mut checks, t) = timed(|| {
        let rel = singular::relations();
        let mut checks = Vec::new();
        for f in [gmodule::trivial(Gr::from_ratio(5, 2)), gmodule::vector(Gr::from(5)), gmodule::vector(Gr::from(-1))] {
            checks.push(singular::relations_implied(&f, &rel));
        }
        checks
    });
    let mut on_kernel = CheckResult::new("coefficient relations on kernel components");
    for (r, _, _) in reports {
        for e in &r.entries {
            for ch in e.checks.iter().filter(|c| c.name == "coefficient relations") {
                on_kernel.merge(ch.clone());
            }
        }
    }
    checks.push(on_kernel);
    from_checks(&checks, t, None)
}

fn scan(f: ModuleSpec, limit_secs: u64) -> (BoundReport, Duration, Duration) {
    let (r, t) = timed(|| singular::verify_bound(&f, singular::DEFAULT_K_MAX, &singular::default_t_scan(), false));
    (r.expect("built-in modules validate"), t, Duration::from_secs(limit_secs))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |n: u32, name: &str, o: Outcome| {
        println!("{} criterion {n}: {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        all_ok &= o.ok;
    };
    report(1, "E(1,6) Jacobi, closure, grading, depth", algebra());
    report(2, "so(6) root system", roots());
    report(3, "commutator oracle on Ind(vector)", oracle());
    report(4, "coefficient-family reconstruction", reconstruction());
    report(5, "proof-step reproduction", proof_steps());
    let zero = Gr::ZERO;
    let scans = vec![
        scan(gmodule::trivial(zero.clone()), 60),
        scan(gmodule::vector(zero.clone()), 900),
        scan(gmodule::adjoint(zero), 3600),
    ];
    report(6, "Theta-degree bound and degree shapes, K_max = 5, t in -10..10", bound(&scans));
    report(7, "coefficient relations", identities(&scans));
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
