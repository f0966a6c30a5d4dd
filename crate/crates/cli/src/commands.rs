use std::fs;
use std::path::Path;

use log::info;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{OpCommand, SosMode};
use crate::config::RunConfig;
use crate::report::{Report, Verdict};
use crate::CliError;
use qplane::opmodel::{
    moments_integral, moments_via_models, polar_identity_check, positivity_probe, qnormality_residual, DeltaQ, DiscreteMeasure,
    OpError, ProbeReport, ShiftModel, StateTable,
};
use qplane::qalgebra::json::rational_to_string;
use qplane::qalgebra::{symbol_min, symbol_with, SymbolConvention};
use qplane::sos::{
    build_system, match_template, paper_refutation, psatz_search, sos_extract, sos_search, verify_refutation, verify_sos,
    PsatzOutcome, RefutationCertificate, SearchOutcome, SearchStats, SosCertificate, SosError, Template, VERIFY_TOL,
};
use qplane::{parse, print, QPolynomial};

fn parse_expr(src: &str) -> Result<QPolynomial, CliError> {
    parse(src).map_err(|e| CliError::Parse(e.render(src)))
}

fn hermitian(src: &str) -> Result<QPolynomial, CliError> {
    let f = parse_expr(src)?;
    if !f.is_hermitian() {
        return Err(CliError::Usage(format!("'{src}' is not Hermitian")));
    }
    Ok(f)
}

fn degree_text(f: &QPolynomial) -> String {
    match f.degree() {
        d if d < 0 => "-inf".to_string(),
        d => d.to_string(),
    }
}

impl From<OpError> for CliError {
    fn from(e: OpError) -> Self {
        match e {
            OpError::Disagreement { .. } => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "stage": format!("{:?}", s.stage).to_lowercase(),
        "projection_iters": s.projection_iters,
        "newton_steps": s.newton_steps,
        "residual": s.residual,
        "min_eig": s.min_eig,
    })
}

fn stats_lines(s: &SearchStats) -> Vec<String> {
    vec![
        format!("stage: {:?}, projection iterations: {}, newton steps: {}", s.stage, s.projection_iters, s.newton_steps),
        format!("constraint residual: {:e}", s.residual),
        format!("min eigenvalue: {:e}", s.min_eig),
    ]
}

pub fn cmd_normalize(src: &str, config: &RunConfig) -> Result<Report, CliError> {
    let f = parse_expr(src)?;
    let form = print(&f);
    let degree = degree_text(&f);
    let report = Report::new("normalize", config, Verdict::Ok, json!({ "normal_form": form, "degree": degree }));
    Ok(report.line(form).line(format!("degree: {degree}")))
}

fn not_found(command: &str, config: &RunConfig, reason: String) -> Report {
    Report::new(command, config, Verdict::NotFound, json!({ "reason": reason })).line(reason)
}

pub fn cmd_sos(src: &str, mode: SosMode, cert_path: Option<&Path>, config: &RunConfig) -> Result<Report, CliError> {
    let f = hermitian(src)?;
    match mode {
        SosMode::Refute => return refute(&f, config),
        SosMode::Check if cert_path.is_some() => return check_file(&f, cert_path.unwrap(), config),
        _ => {}
    }
    let name = if mode == SosMode::Check { "sos check" } else { "sos extract" };
    let q = config.require_q()?;
    let sys = match build_system(&f, q) {
        Ok(sys) => sys,
        Err(SosError::OddDegree(d)) => return Ok(not_found(name, config, format!("odd degree {d}: the top part is never a sum of squares"))),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let outcome = match sos_search(&sys, config.tol, config.max_iter) {
        Ok(o) => o,
        Err(SosError::StructurallyInfeasible(monos)) => {
            let list: Vec<String> = monos.iter().map(|m| qplane::expr::print_monomial(m)).collect();
            return Ok(not_found(name, config, format!("no Gram entry reaches {}", list.join(", "))));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let size = sys.size();
    match outcome {
        SearchOutcome::NotFound(stats) => {
            let mut report = Report::new(name, config, Verdict::NotFound, json!({ "size": size, "search": stats_json(&stats) }))
                .line(format!("gram size: {size}"))
                .line("no PSD Gram matrix found (this is not a proof that none exists)");
            report.text.extend(stats_lines(&stats));
            Ok(report)
        }
        SearchOutcome::Found(c, stats) => {
            let cert = sos_extract(&c, &sys);
            let tol = VERIFY_TOL.max(config.tol);
            if !verify_sos(&f, &cert, sys.q_val, tol) {
                return Err(CliError::Internal(format!(
                    "extracted certificate fails verification (residual {:e})",
                    cert.residual_max
                )));
            }
            let mut payload = json!({
                "size": size,
                "search": stats_json(&stats),
                "factors": cert.factors.len(),
                "residual_max": cert.residual_max,
                "verified": true,
            });
            if mode == SosMode::Extract {
                payload["certificate"] = cert.to_json();
            }
            let mut report = Report::new(name, config, Verdict::Sos, payload).line(format!("gram size: {size}"));
            report.text.extend(stats_lines(&stats));
            report.text.push(format!("certificate: {} factors, recomposition residual {:e}", cert.factors.len(), cert.residual_max));
            if mode == SosMode::Extract {
                for (i, g) in cert.factors.iter().enumerate() {
                    report.text.push(format!("f{} = {}", i + 1, qplane::expr::print(g)));
                }
            }
            Ok(report)
        }
    }
}

fn refute(f: &QPolynomial, config: &RunConfig) -> Result<Report, CliError> {
    let q = config.require_q()?;
    let name = "sos refute";
    let Some(template) = match_template(f) else {
        return Ok(not_found(name, config, "target matches neither dual template".into()));
    };
    let template_json = match &template {
        Template::Quadratic { a, b } => json!({ "family": "quadratic", "a": rational_to_string(a), "b": rational_to_string(b) }),
        Template::Quartic { c } => json!({ "family": "quartic", "c": rational_to_string(c) }),
    };
    let cert = match paper_refutation(f, q) {
        Ok(Some(cert)) => cert,
        Ok(None) => return Ok(not_found(name, config, "no dual certificate is available at this q".into())),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let sys = build_system(f, q).map_err(|e| CliError::Usage(e.to_string()))?;
    let verified = verify_refutation(f, &cert, &sys).map_err(|e| CliError::Internal(e.to_string()))?;
    let payload = json!({ "template": template_json, "value": cert.value, "verified": verified, "certificate": cert.to_json() });
    if verified {
        Ok(Report::new(name, config, Verdict::Refuted, payload)
            .line(format!("dual value tr(ΛC) = {:e} < 0 for every feasible C", cert.value))
            .line("the target is not a sum of squares"))
    } else {
        Ok(Report::new(name, config, Verdict::NotFound, payload)
            .line(format!("dual value {:e} is not negative; nothing is refuted", cert.value)))
    }
}

fn check_file(f: &QPolynomial, path: &Path, config: &RunConfig) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let name = "sos check";
    match v.get("kind").and_then(Value::as_str) {
        Some("sos") => {
            let cert = SosCertificate::from_json(&v).map_err(CliError::Usage)?;
            let q_val = config.q_val().unwrap_or_else(|_| cert.q_val());
            let ok = verify_sos(f, &cert, q_val, VERIFY_TOL.max(config.tol));
            let payload = json!({ "certificate_kind": "sos", "exact": cert.exact, "residual_max": cert.residual_max, "verified": ok });
            let verdict = if ok { Verdict::Sos } else { Verdict::NotFound };
            Ok(Report::new(name, config, verdict, payload).line(format!("certificate verified: {ok}")))
        }
        Some("refutation") => {
            let cert = RefutationCertificate::from_json(&v).map_err(CliError::Usage)?;
            let sys = build_system(f, &cert.q).map_err(|e| CliError::Usage(e.to_string()))?;
            let ok = verify_refutation(f, &cert, &sys).map_err(|e| CliError::Usage(e.to_string()))?;
            let payload = json!({ "certificate_kind": "refutation", "value": cert.value, "verified": ok });
            let verdict = if ok { Verdict::Refuted } else { Verdict::NotFound };
            Ok(Report::new(name, config, verdict, payload).line(format!("certificate verified: {ok}")))
        }
        _ => Err(CliError::Usage("certificate needs \"kind\": \"sos\" or \"refutation\"".into())),
    }
}

fn probe_json(r: &ProbeReport, tol: f64) -> Value {
    let mut v = r.to_json();
    v["negative_witness"] = json!(r.min_eig < -tol);
    v
}

pub fn cmd_psatz(src: &str, config: &RunConfig) -> Result<Report, CliError> {
    let f = hermitian(src)?;
    let q = config.require_q()?;
    let q_val = config.q_val()?;
    let outcome = psatz_search(&f, q, config.depth, config.kmax as i32, config.tol, config.max_iter)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    // hypotheses of the strict Positivstellensatz, as diagnostics only
    let symbol = symbol_with(&f, SymbolConvention::ProofDerived)
        .and_then(|s| symbol_min(&s, q_val, 720))
        .map_err(|e| e.to_string());
    let probe = positivity_probe(&f, q_val, config.lam_grid, config.k).map_err(|e| e.to_string());
    let diagnostics = json!({
        "symbol_min": symbol.as_ref().map(|v| json!(v)).unwrap_or_else(|e| json!({ "error": e })),
        "probe": probe.as_ref().map(|r| probe_json(r, config.tol)).unwrap_or_else(|e| json!({ "error": e })),
    });
    let mut lines = Vec::new();
    match &symbol {
        Ok(v) => lines.push(format!("symbol minimum: {v:e}")),
        Err(e) => lines.push(format!("symbol minimum: unavailable ({e})")),
    }
    match &probe {
        Ok(r) if r.min_eig < -config.tol => {
            lines.push(format!("probe: NEGATIVE_WITNESS, min eigenvalue {:e} at lambda = {}", r.min_eig, r.argmin_lambda))
        }
        Ok(r) => lines.push(format!("probe: min eigenvalue {:e}", r.min_eig)),
        Err(e) => lines.push(format!("probe: unavailable ({e})")),
    }

    let report = match outcome {
        PsatzOutcome::Found { word, certificate, stats } => {
            info!("psatz found {word}");
            let payload = json!({
                "word": word.exponents,
                "denominator": word.to_string(),
                "search": stats_json(&stats),
                "residual_max": certificate.residual_max,
                "certificate": certificate.to_json(),
                "diagnostics": diagnostics,
            });
            let mut r = Report::new("psatz", config, Verdict::PsatzFound, payload)
                .line(format!("denominator b = {word}"))
                .line(format!("b f b is a sum of {} squares, recomposition residual {:e}", certificate.factors.len(), certificate.residual_max));
            r.text.extend(lines);
            r
        }
        PsatzOutcome::NotFound { tried } => {
            let payload = json!({ "tried": tried, "diagnostics": diagnostics });
            let mut r = Report::new("psatz", config, Verdict::NotFound, payload).line(format!("no certificate among {tried} denominators"));
            r.text.extend(lines);
            r
        }
    };
    Ok(report)
}

fn model_lambda(q_val: f64, lambda: Option<f64>) -> Result<f64, CliError> {
    let dq = DeltaQ::new(q_val)?;
    Ok(lambda.unwrap_or((dq.lo + dq.hi) / 2.0))
}

pub fn cmd_op(cmd: &OpCommand, config: &RunConfig) -> Result<Report, CliError> {
    let q_val = config.q_val()?;
    match cmd {
        OpCommand::Probe { expr } => {
            let f = hermitian(expr)?;
            let r = positivity_probe(&f, q_val, config.lam_grid, config.k)?;
            let negative = r.min_eig < -config.tol;
            let verdict = if negative { Verdict::NegativeWitness } else { Verdict::Ok };
            let mut report = Report::new("op probe", config, verdict, probe_json(&r, config.tol))
                .line(format!("min eigenvalue: {:e}", r.min_eig))
                .line(format!("attained at lambda = {}", r.argmin_lambda));
            if !negative {
                report.text.push("no negative witness (evidence of positivity, not a proof)".into());
            }
            Ok(report)
        }
        OpCommand::Residuals { lambda } => {
            let lam = model_lambda(q_val, *lambda)?;
            let model = ShiftModel::new(q_val, lam, config.k)?;
            let qn = qnormality_residual(&model, 2)?;
            let mut rows = Vec::new();
            let mut csv = String::from("m,n,margin,residual\n");
            let mut worst = qn;
            for m in 0..=3usize {
                for n in 0..=3usize {
                    let margin = (m + n).max(1);
                    let r = polar_identity_check(&model, m, n, margin)?;
                    worst = worst.max(r);
                    rows.push(json!({ "m": m, "n": n, "margin": margin, "residual": r }));
                    csv.push_str(&format!("{m},{n},{margin},{r:e}\n"));
                }
            }
            if worst > 1e-10 {
                return Err(CliError::Internal(format!("operator identity residual {worst:e} exceeds 1e-10")));
            }
            let payload = json!({ "lambda": lam, "K": config.k, "qnormality": qn, "polar": rows, "max_residual": worst });
            let mut report = Report::new("op residuals", config, Verdict::Ok, payload)
                .line(format!("q-normality residual: {qn:e}"))
                .line(format!("largest polar-identity residual over m, n <= 3: {worst:e}"));
            report.csv = Some(csv);
            Ok(report)
        }
        OpCommand::Moments { lambda, degmax } => {
            let lam = model_lambda(q_val, *lambda)?;
            let mu = DiscreteMeasure::new(q_val, vec![(lam, 1.0)])?;
            let xi = match config.seed {
                None => StateTable::indicator(&mu),
                Some(seed) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut xi = StateTable::new();
                    for j in -2..=2 {
                        xi.set(0, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    }
                    xi
                }
            };
            let integral = moments_integral(&mu, &xi, *degmax, q_val)?;
            let matrix = moments_via_models(&mu, &xi, *degmax)?;
            let diff = integral.relative_diff(&matrix);
            let agreement = diff <= 1e-10;
            if !agreement {
                return Err(CliError::Internal(format!("moment computations disagree (relative {diff:e})")));
            }
            log::warn!("moments agreement: {agreement} (relative difference {diff:e})");
            let table: Vec<Value> = (0..=*degmax)
                .flat_map(|k| (0..=*degmax).map(move |l| (k, l)))
                .map(|(k, l)| {
                    let z = integral.get(k, l);
                    json!([k, l, z.re, z.im])
                })
                .collect();
            let payload = json!({ "lambda": lam, "degmax": degmax, "agreement": agreement, "relative_diff": diff, "table": table });
            let mut report = Report::new("op moments", config, Verdict::Ok, payload)
                .line(format!("a_00 = {}", integral.get(0, 0)))
                .line(format!("a_11 = {}", integral.get(1.min(*degmax), 1.min(*degmax))))
                .line(format!("agreement with the shift model: {agreement} (relative {diff:e})"));
            report.csv = Some(integral.to_csv());
            Ok(report)
        }
    }
}

pub fn cmd_symbol(src: &str, grid: usize, printed: bool, config: &RunConfig) -> Result<Report, CliError> {
    let f = parse_expr(src)?;
    let convention = if printed { SymbolConvention::Printed } else { SymbolConvention::ProofDerived };
    let sym = symbol_with(&f, convention).map_err(|e| CliError::Usage(e.to_string()))?;
    let m = sym.m_half as i64;
    let coeff = |k: i64| if k >= 0 { &sym.pos[k as usize] } else { &sym.neg[(-k - 1) as usize] };
    let coeffs: Vec<Value> = (-m..=m)
        .filter(|&k| (k >= 0 && (k as usize) < sym.pos.len()) || (k < 0 && ((-k - 1) as usize) < sym.neg.len()))
        .map(|k| json!({ "k": k, "coeff": qplane::expr::print_scalar(coeff(k)) }))
        .collect();
    let mut payload = json!({ "m_half": sym.m_half, "coefficients": coeffs });
    let mut report_lines: Vec<String> = coeffs
        .iter()
        .map(|c| format!("e^(i {} θ): {}", c["k"], c["coeff"].as_str().unwrap_or("")))
        .collect();
    if config.q.is_some() {
        let min = symbol_min(&sym, config.q_val()?, grid).map_err(|e| CliError::Usage(e.to_string()))?;
        payload["min"] = json!(min);
        payload["grid"] = json!(grid);
        report_lines.push(format!("minimum over the circle: {min:e}"));
    }
    let mut report = Report::new("symbol", config, Verdict::Ok, payload);
    report.text = report_lines;
    Ok(report)
}
